//! Dense univariate polynomials over `Z`, ascending coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub fn trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub fn neg(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| -x).collect()
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let c = content(a);
    if c.is_zero() {
        return Vec::new();
    }
    let mut out: Vec<BigInt> = a.iter().map(|x| x / &c).collect();
    if out.last().is_some_and(Signed::is_negative) {
        out = neg(&out);
    }
    out
}

/// Pseudo-remainder of `a` by `b` (`b` nonzero).
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &lr * y;
        }
        r = trim(r);
    }
    r
}

/// Greatest common divisor of two integer polynomials whose content is 1,
/// normalized to constant term `+1` when that term is `±1` and to positive
/// leading coefficient otherwise.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x = primitive(a);
    let mut y = primitive(b);
    while !y.is_empty() {
        let r = primitive(&prem(&x, &y));
        x = y;
        y = r;
    }
    if x.first().is_some_and(Signed::is_negative) && x[0].abs() == BigInt::from(1) {
        x = neg(&x);
    }
    x
}

/// `a / b` when `b` divides `a` exactly over `Z`.
pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>> {
    let b = trim(b.to_vec());
    if b.is_empty() {
        return Err(Error::InvalidInput("division by the zero polynomial".into()));
    }
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return if r.is_empty() {
            Ok(r)
        } else {
            Err(Error::Internal("polynomial division is not exact".into()))
        };
    }
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let (c, rem) = r.last().unwrap().div_rem(lb);
        if !rem.is_zero() {
            return Err(Error::Internal("polynomial division is not exact".into()));
        }
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &c * y;
        }
        q[shift] = c;
        r = trim(r);
    }
    if !r.is_empty() {
        return Err(Error::Internal("polynomial division is not exact".into()));
    }
    Ok(trim(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_and_division() {
        let f = ints(&[1, -1]);
        let g = ints(&[1, 2, 3]);
        let h = ints(&[1, -7]);
        let a = mul(&f, &g);
        let b = mul(&f, &h);
        assert_eq!(gcd(&a, &b), f);
        assert_eq!(div_exact(&a, &f).unwrap(), g);
        assert!(div_exact(&g, &f).is_err());
        assert_eq!(gcd(&g, &h), ints(&[1]));
        let sq = mul(&f, &f);
        assert_eq!(gcd(&mul(&sq, &g), &mul(&sq, &h)), sq);
    }
}
