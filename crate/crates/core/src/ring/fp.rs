//! Dense polynomials over a prime field `F_p`, coefficients ascending.
//!
//! A polynomial is a trimmed `Vec<u64>`: no trailing zeros, and the zero
//! polynomial is the empty vector.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::primes::{inv_mod_prime, is_prime, mul_mod};

pub type FpPoly = Vec<u64>;

pub fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder of `a` by the nonzero polynomial `b`.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod_prime(b[db], p);
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        q[dr - db] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            let k = dr - db + j;
            r[k] = (r[k] + p - mul_mod(c, bj, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn mul_mod_poly(a: &[u64], b: &[u64], f: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), f, p)
}

/// `base^e mod f`, square-and-multiply over the bits of `e`.
pub fn pow_mod_poly(base: &[u64], e: &BigUint, f: &[u64], p: u64) -> FpPoly {
    let mut acc: FpPoly = rem(&[1], f, p);
    let base = rem(base, f, p);
    for i in (0..e.bits()).rev() {
        acc = mul_mod_poly(&acc, &acc, f, p);
        if e.bit(i) {
            acc = mul_mod_poly(&acc, &base, f, p);
        }
    }
    acc
}

pub fn make_monic(a: FpPoly, p: u64) -> FpPoly {
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = inv_mod_prime(a[d], p);
            a.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(x, p)
}

/// Inverse of `a` modulo `f` by the extended Euclidean algorithm, when it exists.
pub fn inv_mod(a: &[u64], f: &[u64], p: u64) -> Option<FpPoly> {
    let (mut r0, mut r1) = (trim(f.to_vec()), rem(a, f, p));
    let (mut s0, mut s1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv_mod_prime(r0[0], p);
    Some(rem(&s0.iter().map(|&x| mul_mod(x, c, p)).collect::<Vec<_>>(), f, p))
}

/// Distinct-degree irreducibility test. Returns `None` when `f` is
/// irreducible, otherwise a nontrivial monic factor of `f`.
///
/// `f` must be monic of degree at least 1.
pub fn reducibility_witness(f: &[u64], p: u64) -> Option<FpPoly> {
    let deg = degree(f).expect("nonzero polynomial");
    let pb = BigUint::from(p);
    let x: FpPoly = vec![0, 1];
    let mut xp = rem(&x, f, p);
    for _ in 1..=deg / 2 {
        xp = pow_mod_poly(&xp, &pb, f, p);
        let g = gcd(&sub(&xp, &x, p), f, p);
        if degree(&g) != Some(0) {
            // g = f happens only when every factor has degree dividing i;
            // f is still reducible (i <= deg/2), so split off a proper factor.
            if degree(&g) == Some(deg) {
                return Some(proper_factor(f, p));
            }
            return Some(g);
        }
    }
    None
}

/// A proper monic factor of a reducible `f` all of whose irreducible factors
/// have small degree. Brute-force root search over small-degree candidates
/// would be wasteful; instead split with gcds against `x^{p^i} - x`, then fall
/// back to the squarefree part.
fn proper_factor(f: &[u64], p: u64) -> FpPoly {
    let deriv: FpPoly = trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    );
    let g = gcd(f, &deriv, p);
    if degree(&g).is_some_and(|d| d > 0) && degree(&g) != degree(f) {
        return g;
    }
    // Squarefree with all factors of one degree i: try roots of unity style
    // splitting by candidate monic factors of that degree, smallest first.
    let deg = degree(f).unwrap();
    for k in 1..deg {
        let count = (p as u128).pow(k as u32);
        for idx in 0..count {
            let cand = monic_from_index(idx, k, p);
            if rem(f, &cand, p).is_empty() {
                return cand;
            }
        }
    }
    unreachable!("reducible polynomial without a proper factor")
}

fn monic_from_index(mut idx: u128, deg: usize, p: u64) -> FpPoly {
    let mut c = vec![0u64; deg + 1];
    for slot in c.iter_mut().take(deg) {
        *slot = (idx % p as u128) as u64;
        idx /= p as u128;
    }
    c[deg] = 1;
    c
}

/// Lexicographically least monic irreducible polynomial of degree `deg`
/// over `F_p`, ordering candidates by their coefficients from `t^{deg-1}`
/// down to the constant term.
pub fn find_irreducible(p: u64, deg: usize) -> Result<FpPoly> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if deg == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let mut idx: u128 = 0;
    loop {
        let f = monic_from_index(idx, deg, p);
        if deg == 1 || reducibility_witness(&f, p).is_none() {
            return Ok(f);
        }
        idx += 1;
    }
}

pub fn is_zero(a: &[u64]) -> bool {
    a.iter().all(Zero::is_zero)
}
