//! Coefficient rings.
//!
//! Everything above this module (polynomials, matrices, recurrences) is
//! written against the [`Ring`] trait, so the same code runs over
//! `Z_q / p^λ Z_q` ([`RingCtx`]), over the integers ([`IntegerRing`]) and over
//! truncated power series in a formal prime (`crate::forest::SeriesRing`).

mod embed;
pub mod fp;
mod padic;
mod tower;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use embed::{embed_field, FieldEmbedding};
pub use fp::find_irreducible;
pub use padic::{factorial_valuation, padic_divexact, pow_u, valuation};
pub use tower::{RingCtx, RingElem};

/// A commutative ring with explicit context.
///
/// Elements carry no reference to their ring; every operation goes through
/// the context value, which keeps elements small and lets contexts carry
/// precomputed data (moduli, Frobenius roots).
pub trait Ring {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_int(&BigInt::from(v))
    }

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, b);
    }

    /// `acc += a * b`
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let t = self.mul(a, b);
        self.add_assign(acc, &t);
    }

    /// `Σ a_i b_i`. Implementations may delay reduction until the end.
    fn sum_of_products<'a, I>(&self, terms: I) -> Self::Elem
    where
        I: IntoIterator<Item = (&'a Self::Elem, &'a Self::Elem)>,
        Self::Elem: 'a,
    {
        let mut acc = self.zero();
        for (a, b) in terms {
            self.mul_add_assign(&mut acc, a, b);
        }
        acc
    }

    /// Fast univariate product hook used by [`crate::upoly::mul`]; `None`
    /// means the generic algorithm should be used.
    fn poly_mul(&self, _a: &[Self::Elem], _b: &[Self::Elem]) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Multiplication by a machine integer.
    fn scale(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(k))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// The integers, with arbitrary-size elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, acc: &mut BigInt, b: &BigInt) {
        *acc += b;
    }
    fn mul_add_assign(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
    fn scale(&self, a: &BigInt, k: i64) -> BigInt {
        a * k
    }
}
