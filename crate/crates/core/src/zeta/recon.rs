//! Multimodular reconstruction of `Z = G/H` from exact counts `N_1..N_{2D}`:
//! per small prime `ℓ`, exponentiate the count series and run
//! Berlekamp–Massey; keep the primes of maximal recurrence length, combine
//! the normalized denominators by CRT, then recover `G` over `Z`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{exact_series, zpoly, ZetaRational};
use crate::error::{Error, Result};
use crate::primes::{inv_mod_prime, mul_mod, next_prime};

/// Bit bounds and the CRT primes for one reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtPlan {
    pub d_bound: usize,
    /// Coefficients of `G` and `H` are below `2^{b-1}` in absolute value.
    pub b: u64,
    /// Bits of the bound on the product of bad primes.
    pub b_prime: u64,
    pub primes: Vec<u64>,
}

/// `⌈log2 x⌉` for `x >= 1`.
pub fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

impl CrtPlan {
    /// The least primes `ℓ > 2D` whose product reaches `2^{b'+b+1}`.
    pub fn new(d_bound: usize, b: u64, b_prime: u64) -> Self {
        let target = b_prime + b + 1;
        let mut primes = Vec::new();
        let mut prod = BigUint::one();
        let mut ell = 2 * d_bound as u64;
        while prod.bits() <= target {
            ell = next_prime(ell);
            primes.push(ell);
            prod *= ell;
        }
        CrtPlan {
            d_bound,
            b,
            b_prime,
            primes,
        }
    }
}

/// `B = ⌈log2(2^D q^{nD})⌉ + 1`, `B' = ⌈log2((2D)^D)⌉ + 2BD`, and the primes.
pub fn select_crt_primes(n: usize, d_bound: usize, a: usize, p: u64) -> CrtPlan {
    let q_nd = num_traits::pow(BigUint::from(p), a * n * d_bound);
    let b = ceil_log2(&(q_nd << d_bound)) + 1;
    let two_d = num_traits::pow(BigUint::from(2 * d_bound as u64), d_bound);
    let b_prime = ceil_log2(&two_d) + 2 * b * d_bound as u64;
    CrtPlan::new(d_bound, b, b_prime)
}

fn residue(x: &BigInt, ell: u64) -> u64 {
    x.mod_floor(&BigInt::from(ell)).to_u64().unwrap()
}

/// `c_0 .. c_{len}` of `exp(Σ N_r T^r / r) mod ℓ` where `len = counts.len()`.
pub fn series_exp_mod(counts: &[BigInt], ell: u64) -> Result<Vec<u64>> {
    if ell <= counts.len() as u64 {
        return Err(Error::InvalidInput(format!(
            "ℓ = {ell} must exceed the series length {}",
            counts.len()
        )));
    }
    let n: Vec<u64> = counts.iter().map(|x| residue(x, ell)).collect();
    let mut c = vec![1 % ell];
    for k in 1..=counts.len() {
        let mut acc = 0u64;
        for r in 1..=k {
            acc = (acc + mul_mod(n[r - 1], c[k - r], ell)) % ell;
        }
        c.push(mul_mod(acc, inv_mod_prime(k as u64, ell), ell));
    }
    Ok(c)
}

/// Classical Berlekamp–Massey over `F_ℓ`. Returns the connection polynomial
/// `C` (with `C(0) = 1`, trailing zeros removed) and the recurrence length `L`:
/// `Σ_i C_i s_{k-i} = 0` for all `L <= k < len`.
pub fn berlekamp_massey(seq: &[u64], ell: u64) -> (Vec<u64>, usize) {
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last = 1u64;
    for k in 0..seq.len() {
        let mut disc = seq[k] % ell;
        for i in 1..=l.min(c.len() - 1) {
            disc = (disc + mul_mod(c[i], seq[k - i], ell)) % ell;
        }
        if disc == 0 {
            m += 1;
            continue;
        }
        let coef = mul_mod(disc, inv_mod_prime(last, ell), ell);
        let old = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] = (c[i + m] + ell - mul_mod(coef, *bi, ell)) % ell;
        }
        if 2 * l <= k {
            l = k + 1 - l;
            b = old;
            last = disc;
            m = 1;
        } else {
            m += 1;
        }
    }
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
    (c, l)
}

/// Symmetric CRT of coefficient vectors; each entry of `residues` pairs a
/// prime with a vector of residues of common length.
fn crt_symmetric(residues: &[(u64, Vec<u64>)]) -> Vec<BigInt> {
    let len = residues[0].1.len();
    let mut x = vec![BigInt::zero(); len];
    let mut modulus = BigInt::one();
    for (ell, r) in residues {
        let ell_b = BigInt::from(*ell);
        let m_inv = inv_mod_prime(residue(&modulus, *ell), *ell);
        for (xi, ri) in x.iter_mut().zip(r) {
            let diff = (*ri + ell - residue(xi, *ell)) % ell;
            let t = mul_mod(diff, m_inv, *ell);
            *xi += &modulus * BigInt::from(t);
        }
        modulus *= ell_b;
    }
    let half = &modulus >> 1u32;
    x.into_iter()
        .map(|v| if v > half { v - &modulus } else { v })
        .collect()
}

/// Reconstruction with the default plan for counts of a torus hypersurface
/// in dimension `n` over `F_{p^a}`.
pub fn reconstruct_zeta(counts: &[BigInt], d_bound: usize, n: usize, a: usize, p: u64) -> Result<ZetaRational> {
    reconstruct_zeta_with(counts, &select_crt_primes(n, d_bound, a, p))
}

pub fn reconstruct_zeta_with(counts: &[BigInt], plan: &CrtPlan) -> Result<ZetaRational> {
    let d = plan.d_bound;
    if counts.len() < 2 * d {
        return Err(Error::InvalidInput(format!(
            "need {} counts for D = {d}, got {}",
            2 * d,
            counts.len()
        )));
    }
    let counts = &counts[..2 * d];
    let mut per_prime = Vec::with_capacity(plan.primes.len());
    for &ell in &plan.primes {
        let c = series_exp_mod(counts, ell)?;
        // c_1..c_{2D} is (G - H)/(T H): its recurrence length is at most D
        // and 2D terms determine H uniquely.
        let (conn, len) = berlekamp_massey(&c[1..], ell);
        per_prime.push((ell, conn, len));
    }
    let max_len = per_prime.iter().map(|x| x.2).max().unwrap_or(0);
    if max_len > d {
        return Err(Error::Reconstruction(format!(
            "recurrence length {max_len} exceeds the degree bound {d}"
        )));
    }
    let good: Vec<(u64, Vec<u64>)> = per_prime
        .into_iter()
        .filter(|x| x.2 == max_len)
        .map(|(ell, mut conn, _)| {
            conn.resize(max_len + 1, 0);
            (ell, conn)
        })
        .collect();
    let good_bits: u64 = good.iter().map(|(ell, _)| (*ell as f64).log2().floor() as u64).sum();
    if good_bits < plan.b + 1 {
        return Err(Error::Reconstruction(format!(
            "good primes give only {good_bits} bits, below {}",
            plan.b + 1
        )));
    }
    let h = zpoly::trim(crt_symmetric(&good));
    let series = exact_series(counts, 2 * d + 1)?;
    let mut g = zpoly::mul(&h, &series);
    g.resize(2 * d + 1, BigInt::zero());
    if g[d + 1..].iter().any(|x| !x.is_zero()) {
        return Err(Error::Reconstruction(
            "H times the count series is not a polynomial of degree at most D".into(),
        ));
    }
    g.truncate(d + 1);
    ZetaRational::new(g, h)
}
