use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `p^e` as a big integer.
pub fn pow_u(p: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), e as usize)
}

/// `v_p(x)`, with `v_p(0)` reported as `u32::MAX`.
pub fn valuation(x: &BigUint, p: u64) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let r = &y % &pb;
        if !r.is_zero() {
            return v;
        }
        y /= &pb;
        v += 1;
    }
}

/// `v_p(n!)` by Legendre's formula.
pub fn factorial_valuation(n: u64, p: u64) -> u32 {
    let mut v = 0u64;
    let mut m = n / p;
    while m > 0 {
        v += m;
        m /= p;
    }
    v as u32
}

/// Divide `num` by `den` where both are residues modulo `p^lambda1` and the
/// true quotient is known to be `p`-integral.
///
/// With `e = v_p(den)`, the result is correct modulo `p^(lambda1 - e)`; the
/// returned pair is `(quotient, lambda1 - e)` with the quotient reduced into
/// `[0, p^(lambda1 - e))`.
pub fn padic_divexact(
    p: u64,
    lambda1: u32,
    num: &BigUint,
    den: &BigUint,
    e_max: u32,
) -> Result<(BigUint, u32)> {
    let m1 = pow_u(p, lambda1);
    let den = den % &m1;
    let num = num % &m1;
    let e = valuation(&den, p);
    if e > e_max || e >= lambda1 {
        return Err(Error::InvalidInput(format!(
            "denominator valuation {} exceeds the allowed {} at precision {lambda1}",
            if e == u32::MAX { "infinite".to_string() } else { e.to_string() },
            e_max
        )));
    }
    let pe = pow_u(p, e);
    if !(&num % &pe).is_zero() {
        return Err(Error::InexactDivision {
            valuation: valuation(&num, p),
        });
    }
    let prec = lambda1 - e;
    let m = pow_u(p, prec);
    let n0 = (&num / &pe) % &m;
    let d0 = (&den / &pe) % &m;
    let inv = if m.is_one() {
        BigUint::zero()
    } else {
        d0.modinv(&m).ok_or(Error::NotUnit { p })?
    };
    Ok(((n0 * inv) % &m, prec))
}
