//! Zeta functions as rational functions `G(T)/H(T)` with integer coefficients,
//! and their reconstruction from point counts.

mod exact;
mod pipeline;
mod recon;
pub mod zpoly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub use exact::zeta_exact_oracle;
pub use pipeline::{default_lambda, zeta_all_primes, zeta_from_counts_pipeline, zeta_with_ms, ZetaOptions};
pub use recon::{
    berlekamp_massey, ceil_log2, reconstruct_zeta, reconstruct_zeta_with, select_crt_primes, series_exp_mod, CrtPlan,
};

/// `Z(T) = G(T) / H(T)` with `G(0) = H(0) = 1`. Coefficient lists are
/// ascending and carry no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZetaRational {
    numerator: Vec<BigInt>,
    denominator: Vec<BigInt>,
}

impl ZetaRational {
    pub fn new(numerator: Vec<BigInt>, denominator: Vec<BigInt>) -> Result<Self> {
        let numerator = zpoly::trim(numerator);
        let denominator = zpoly::trim(denominator);
        for (name, c) in [("numerator", &numerator), ("denominator", &denominator)] {
            if c.first().map(|x| x.is_one()) != Some(true) {
                return Err(Error::InvalidInput(format!("{name} must have constant term 1")));
            }
        }
        Ok(ZetaRational {
            numerator,
            denominator,
        })
    }

    pub fn from_i64(numerator: &[i64], denominator: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(conv(numerator), conv(denominator))
    }

    pub fn one() -> Self {
        ZetaRational {
            numerator: vec![BigInt::one()],
            denominator: vec![BigInt::one()],
        }
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.denominator
    }

    pub fn inverse(&self) -> Self {
        ZetaRational {
            numerator: self.denominator.clone(),
            denominator: self.numerator.clone(),
        }
    }

    /// `c_0 .. c_{len-1}` of `G/H` as a power series.
    pub fn series(&self, len: usize) -> Vec<BigInt> {
        let mut c: Vec<BigInt> = Vec::with_capacity(len);
        for k in 0..len {
            let mut v = self.numerator.get(k).cloned().unwrap_or_default();
            for (i, h) in self.denominator.iter().enumerate().skip(1) {
                if i > k {
                    break;
                }
                v -= h * &c[k - i];
            }
            c.push(v);
        }
        c
    }

    /// `N_1 .. N_{r_max}` with `Z(T) = exp(Σ N_r T^r / r)`.
    pub fn counts(&self, r_max: usize) -> Vec<BigInt> {
        counts_from_series(&self.series(r_max + 1))
    }

    pub fn to_json(&self) -> Value {
        let arr = |v: &[BigInt]| Value::Array(v.iter().map(int_to_json).collect());
        serde_json::json!({"numerator": arr(&self.numerator), "denominator": arr(&self.denominator)})
    }
}

pub(crate) fn int_to_json(x: &BigInt) -> Value {
    serde_json::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

/// The exact series of `exp(Σ N_r T^r / r)` through `T^{len-1}`, from
/// `k c_k = Σ_{r=1}^k N_r c_{k-r}`; the division is exact for genuine counts.
pub fn exact_series(counts: &[BigInt], len: usize) -> Result<Vec<BigInt>> {
    let mut c = vec![BigInt::one()];
    for k in 1..len {
        let mut acc = BigInt::zero();
        for r in 1..=k {
            let n = counts
                .get(r - 1)
                .ok_or_else(|| Error::InvalidInput(format!("need {} counts, got {}", len - 1, counts.len())))?;
            acc += n * &c[k - r];
        }
        let (q, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::InvalidInput(format!(
                "counts do not give an integral zeta series at T^{k}"
            )));
        }
        c.push(q);
    }
    Ok(c)
}

/// Inverse of [`exact_series`]: `N_k = k c_k - Σ_{r<k} N_r c_{k-r}`.
pub fn counts_from_series(c: &[BigInt]) -> Vec<BigInt> {
    let mut n: Vec<BigInt> = Vec::new();
    for k in 1..c.len() {
        let mut v = BigInt::from(k) * &c[k];
        for r in 1..k {
            v -= &n[r - 1] * &c[k - r];
        }
        n.push(v);
    }
    n
}

/// `(4d + 4)^n`.
pub fn degree_bound(n: usize, d: usize) -> usize {
    (4 * d + 4).pow(n as u32)
}

/// Zeta of the torus `(G_m)^n` over `F_q`: counts `(q^r - 1)^n`, so
/// `Z = Π_i (1 - q^i T)^{-(-1)^{n-i} C(n,i)}`.
pub fn torus_zeta(q: &BigInt, n: usize) -> ZetaRational {
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for i in 0..=n {
        let factor = vec![BigInt::one(), -num_traits::pow(q.clone(), i)];
        let mult = crate::poly::binomial(n, i);
        for _ in 0..mult {
            if (n - i) % 2 == 0 {
                den = zpoly::mul(&den, &factor);
            } else {
                num = zpoly::mul(&num, &factor);
            }
        }
    }
    ZetaRational::new(num, den).expect("constant terms are 1")
}

/// `Π Z_i^{e_i}` in lowest terms.
pub fn combine_local_factors(factors: &[(ZetaRational, i32)]) -> Result<ZetaRational> {
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for (z, e) in factors {
        let (a, b) = match e {
            1 => (z.numerator(), z.denominator()),
            -1 => (z.denominator(), z.numerator()),
            _ => return Err(Error::InvalidInput(format!("exponent {e} is not ±1"))),
        };
        num = zpoly::mul(&num, a);
        den = zpoly::mul(&den, b);
        let g = zpoly::gcd(&num, &den);
        if g.len() > 1 {
            num = zpoly::div_exact(&num, &g)?;
            den = zpoly::div_exact(&den, &g)?;
        }
    }
    if num[0].is_negative() {
        num = zpoly::neg(&num);
        den = zpoly::neg(&den);
    }
    ZetaRational::new(num, den)
}
