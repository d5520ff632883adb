//! Dense homogeneous polynomials in `n + 1` variables.
//!
//! Monomials of degree `k` are ranked in lexicographically descending order
//! of their exponent vectors `(u_0, ..., u_n)`, starting at 0. For `n = 2`,
//! `k = 2` the order is `x0², x0x1, x0x2, x1², x1x2, x2²`.

mod json;
mod sparse;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::upoly;

pub use json::{parse_terms, terms_to_json, Term};
pub use sparse::SparsePoly;

/// Below this many output monomials the product is done term by term.
pub const SCHOOLBOOK_THRESHOLD: usize = 64;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial coefficient overflows usize")
}

/// `|B_k| = C(n + k, n)`, the number of monomials of degree `k` in `n + 1` variables.
pub fn basis_size(n: usize, k: usize) -> usize {
    binomial(n + k, n)
}

/// Position of `u` in the degree-`k` basis.
pub fn monomial_rank(n: usize, k: usize, u: &[u32]) -> Result<usize> {
    if u.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "monomial {u:?} has {} exponents, expected {}",
            u.len(),
            n + 1
        )));
    }
    let deg: usize = u.iter().map(|&x| x as usize).sum();
    if deg != k {
        return Err(Error::InvalidInput(format!(
            "monomial {u:?} has degree {deg}, expected {k}"
        )));
    }
    Ok(rank_unchecked(n, k, u))
}

/// Rank without validation; `u` must have degree `k` and length `n + 1`.
#[inline]
pub(crate) fn rank_unchecked(n: usize, k: usize, u: &[u32]) -> usize {
    let mut rank = 0;
    let mut rem = k;
    for i in 0..n {
        let ui = u[i] as usize;
        // monomials with a larger exponent in position i come first
        rank += binomial(rem - ui + n - i - 1, n - i);
        rem -= ui;
    }
    rank
}

pub fn monomial_unrank(n: usize, k: usize, mut index: usize) -> Vec<u32> {
    assert!(index < basis_size(n, k), "rank out of range");
    let mut u = vec![0u32; n + 1];
    let mut rem = k;
    for i in 0..n {
        // choose u_i from rem downwards, skipping blocks of smaller ranks
        let mut ui = rem;
        loop {
            let block = basis_size(n - i - 1, rem - ui);
            if index < block {
                break;
            }
            index -= block;
            ui -= 1;
        }
        u[i] = ui as u32;
        rem -= ui;
    }
    u[n] = rem as u32;
    u
}

/// All monomials of degree `k`, in rank order.
pub fn basis(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(basis_size(n, k));
    let mut cur = vec![0u32; n + 1];
    fn rec(i: usize, rem: u32, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            cur[n] = rem;
            out.push(cur.clone());
            return;
        }
        for ui in (0..=rem).rev() {
            cur[i] = ui;
            rec(i + 1, rem - ui, n, cur, out);
        }
    }
    rec(0, k as u32, n, &mut cur, &mut out);
    out
}

/// A homogeneous polynomial of degree `degree` in `nvars` variables, stored
/// densely in monomial-rank order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly<E> {
    nvars: usize,
    degree: usize,
    coeffs: Vec<E>,
}

impl<E: Clone> HomogPoly<E> {
    pub fn zero<R: Ring<Elem = E>>(ring: &R, nvars: usize, degree: usize) -> Self {
        assert!(nvars >= 1, "need at least one variable");
        HomogPoly {
            nvars,
            degree,
            coeffs: vec![ring.zero(); basis_size(nvars - 1, degree)],
        }
    }

    /// The degree-0 unit.
    pub fn one<R: Ring<Elem = E>>(ring: &R, nvars: usize) -> Self {
        HomogPoly {
            nvars,
            degree: 0,
            coeffs: vec![ring.one()],
        }
    }

    pub fn from_coeffs(nvars: usize, degree: usize, coeffs: Vec<E>) -> Result<Self> {
        let want = basis_size(nvars - 1, degree);
        if coeffs.len() != want {
            return Err(Error::InvalidInput(format!(
                "expected {want} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(HomogPoly {
            nvars,
            degree,
            coeffs,
        })
    }

    /// Sum of the given terms; repeated monomials are added together.
    pub fn from_terms<R: Ring<Elem = E>>(
        ring: &R,
        nvars: usize,
        degree: usize,
        terms: &[(Vec<u32>, E)],
    ) -> Result<Self> {
        let mut p = Self::zero(ring, nvars, degree);
        for (u, c) in terms {
            let i = monomial_rank(nvars - 1, degree, u)?;
            ring.add_assign(&mut p.coeffs[i], c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    /// `n`, one less than the number of variables.
    pub fn n(&self) -> usize {
        self.nvars - 1
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }
    pub fn coeffs_mut(&mut self) -> &mut [E] {
        &mut self.coeffs
    }

    /// `F_u`, zero when `u` has a negative entry or the wrong degree.
    pub fn coeff_at<R: Ring<Elem = E>>(&self, ring: &R, u: &[i64]) -> E {
        if u.len() != self.nvars || u.iter().any(|&x| x < 0) {
            return ring.zero();
        }
        if u.iter().sum::<i64>() != self.degree as i64 {
            return ring.zero();
        }
        let uu: Vec<u32> = u.iter().map(|&x| x as u32).collect();
        self.coeffs[rank_unchecked(self.n(), self.degree, &uu)].clone()
    }

    pub fn coeff(&self, u: &[u32]) -> &E {
        &self.coeffs[rank_unchecked(self.n(), self.degree, u)]
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> HomogPoly<T> {
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Nonzero terms, in rank order.
    pub fn terms<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<(Vec<u32>, E)> {
        basis(self.n(), self.degree)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(u, c)| (u, c.clone()))
            .collect()
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }
}

impl HomogPoly<BigInt> {
    /// Integer polynomial from `(exponents, coefficient)` pairs.
    pub fn from_int_terms(nvars: usize, degree: usize, terms: &[(Vec<u32>, i64)]) -> Result<Self> {
        let t: Vec<(Vec<u32>, BigInt)> = terms
            .iter()
            .map(|(u, c)| (u.clone(), BigInt::from(*c)))
            .collect();
        Self::from_terms(&crate::ring::IntegerRing, nvars, degree, &t)
    }

    /// Reduce the integer coefficients into `ring`.
    pub fn to_ring<R: Ring>(&self, ring: &R) -> HomogPoly<R::Elem> {
        self.map(|c| ring.from_int(c))
    }
}

fn check_compatible<E>(a: &HomogPoly<E>, b: &HomogPoly<E>) -> Result<()> {
    if a.nvars != b.nvars {
        return Err(Error::InvalidInput(format!(
            "variable count mismatch: {} vs {}",
            a.nvars, b.nvars
        )));
    }
    Ok(())
}

/// Term-by-term product.
pub fn hp_mul_schoolbook<R: Ring>(
    ring: &R,
    a: &HomogPoly<R::Elem>,
    b: &HomogPoly<R::Elem>,
) -> Result<HomogPoly<R::Elem>> {
    check_compatible(a, b)?;
    let n = a.n();
    let k = a.degree + b.degree;
    let mut out = HomogPoly::zero(ring, a.nvars, k);
    let ta = a.terms(ring);
    let tb = b.terms(ring);
    let mut w = vec![0u32; n + 1];
    for (u, x) in &ta {
        for (v, y) in &tb {
            for i in 0..=n {
                w[i] = u[i] + v[i];
            }
            ring.mul_add_assign(&mut out.coeffs[rank_unchecked(n, k, &w)], x, y);
        }
    }
    Ok(out)
}

/// Product via Kronecker substitution `x0 -> 1, x_i -> T^{B^{i-1}}`, with
/// base `B = deg A + deg B + 1` so that no exponent of the product reaches `B`.
pub fn hp_mul<R: Ring>(
    ring: &R,
    a: &HomogPoly<R::Elem>,
    b: &HomogPoly<R::Elem>,
) -> Result<HomogPoly<R::Elem>> {
    check_compatible(a, b)?;
    let n = a.n();
    let k = a.degree + b.degree;
    if n == 0 || basis_size(n, k) < SCHOOLBOOK_THRESHOLD {
        return hp_mul_schoolbook(ring, a, b);
    }
    let base = k + 1;
    let key = |u: &[u32]| -> usize {
        let mut e = 0usize;
        for i in (1..=n).rev() {
            e = e * base + u[i] as usize;
        }
        e
    };
    let image = |p: &HomogPoly<R::Elem>| -> Vec<R::Elem> {
        let len = p.degree * base.pow(n as u32 - 1) + 1;
        let mut v = vec![ring.zero(); len];
        for (u, c) in basis(n, p.degree).iter().zip(&p.coeffs) {
            v[key(u)] = c.clone();
        }
        upoly::trim(ring, v)
    };
    let prod = upoly::mul(ring, &image(a), &image(b));
    let zero = ring.zero();
    let coeffs = basis(n, k)
        .iter()
        .map(|u| prod.get(key(u)).unwrap_or(&zero).clone())
        .collect();
    Ok(HomogPoly {
        nvars: a.nvars,
        degree: k,
        coeffs,
    })
}

/// `F^e` by binary powering; `F^0` is the degree-0 unit.
pub fn hp_pow<R: Ring>(ring: &R, f: &HomogPoly<R::Elem>, e: u64) -> HomogPoly<R::Elem> {
    let mut acc = HomogPoly::one(ring, f.nvars);
    if e == 0 {
        return acc;
    }
    for bit in (0..64 - e.leading_zeros()).rev() {
        acc = hp_mul(ring, &acc, &acc).expect("same variable count");
        if (e >> bit) & 1 == 1 {
            acc = hp_mul(ring, &acc, f).expect("same variable count");
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntegerRing, RingCtx};
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(monomial_rank(2, 2, &[1, 0, 1]).unwrap(), 2);
        assert_eq!(basis_size(2, 3), 10);
        let order = basis(2, 2);
        assert_eq!(
            order,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        assert!(monomial_rank(2, 3, &[1, 0, 1]).is_err());
        for (i, u) in basis(3, 4).iter().enumerate() {
            assert_eq!(monomial_rank(3, 4, u).unwrap(), i);
            assert_eq!(&monomial_unrank(3, 4, i), u);
        }
    }

    #[test]
    fn products_and_powers() {
        let z7 = RingCtx::prime_field(7, 1).unwrap();
        let a = HomogPoly::from_int_terms(2, 1, &[(vec![1, 0], 1), (vec![0, 1], 1)]).unwrap();
        let b = HomogPoly::from_int_terms(2, 1, &[(vec![1, 0], 1), (vec![0, 1], -1)]).unwrap();
        let want = HomogPoly::from_int_terms(2, 2, &[(vec![2, 0], 1), (vec![0, 2], -1)]).unwrap();
        assert_eq!(
            hp_mul(&z7, &a.to_ring(&z7), &b.to_ring(&z7)).unwrap(),
            want.to_ring(&z7)
        );
        let one = HomogPoly::one(&z7, 2);
        assert_eq!(hp_mul(&z7, &a.to_ring(&z7), &one).unwrap(), a.to_ring(&z7));

        let sq = hp_pow(&IntegerRing, &a, 2);
        assert_eq!(
            sq,
            HomogPoly::from_int_terms(2, 2, &[(vec![2, 0], 1), (vec![1, 1], 2), (vec![0, 2], 1)])
                .unwrap()
        );
        assert_eq!(hp_pow(&IntegerRing, &a, 0), HomogPoly::one(&IntegerRing, 2));
        let g = HomogPoly::from_int_terms(2, 2, &[(vec![2, 0], 1), (vec![0, 2], 1)]).unwrap();
        let g2 = hp_pow(&IntegerRing, &g, 2);
        assert_eq!(
            g2,
            HomogPoly::from_int_terms(2, 4, &[(vec![4, 0], 1), (vec![2, 2], 2), (vec![0, 4], 1)])
                .unwrap()
        );
        assert_eq!(g2.coeff_at(&IntegerRing, &[4, 0]), BigInt::from(1));
    }

    #[test]
    fn coeff_at_conventions() {
        let f = HomogPoly::from_int_terms(2, 2, &[(vec![2, 0], 1), (vec![0, 2], -2)]).unwrap();
        assert_eq!(f.coeff_at(&IntegerRing, &[2, 0]), BigInt::from(1));
        assert_eq!(f.coeff_at(&IntegerRing, &[3, -1]), BigInt::from(0));
        assert_eq!(f.coeff_at(&IntegerRing, &[1, 0]), BigInt::from(0));
    }

    fn arb_poly(nvars: usize, max_deg: usize) -> impl Strategy<Value = HomogPoly<BigInt>> {
        (0..=max_deg).prop_flat_map(move |deg| {
            proptest::collection::vec(-60i64..60, basis_size(nvars - 1, deg)).prop_map(move |c| {
                HomogPoly::from_coeffs(nvars, deg, c.into_iter().map(BigInt::from).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kronecker_matches_schoolbook_mod_125(a in arb_poly(3, 6), b in arb_poly(3, 6)) {
            let r = RingCtx::prime_field(5, 3).unwrap();
            let (a, b) = (a.to_ring(&r), b.to_ring(&r));
            prop_assert_eq!(hp_mul(&r, &a, &b).unwrap(), hp_mul_schoolbook(&r, &a, &b).unwrap());
        }

        #[test]
        fn kronecker_equal_degrees(a in arb_poly(3, 5), b in arb_poly(3, 5)) {
            // equal-degree factors are where a base of 2*max(deg) would collide
            prop_assume!(a.degree() == b.degree());
            prop_assert_eq!(
                hp_mul(&IntegerRing, &a, &b).unwrap(),
                hp_mul_schoolbook(&IntegerRing, &a, &b).unwrap()
            );
        }

        #[test]
        fn ring_laws(a in arb_poly(2, 4), b in arb_poly(2, 4), c in arb_poly(2, 4)) {
            let z = IntegerRing;
            let ab = hp_mul(&z, &a, &b).unwrap();
            prop_assert_eq!(&ab, &hp_mul(&z, &b, &a).unwrap());
            prop_assert_eq!(
                hp_mul(&z, &ab, &c).unwrap(),
                hp_mul(&z, &a, &hp_mul(&z, &b, &c).unwrap()).unwrap()
            );
        }

        #[test]
        fn power_law(a in arb_poly(3, 2), e1 in 0u64..5, e2 in 0u64..5) {
            let r = RingCtx::new(3, 2, 2, &[1, 0, 1]).unwrap();
            let a = a.to_ring(&r);
            prop_assert_eq!(
                hp_pow(&r, &a, e1 + e2),
                hp_mul(&r, &hp_pow(&r, &a, e1), &hp_pow(&r, &a, e2)).unwrap()
            );
        }
    }
}
