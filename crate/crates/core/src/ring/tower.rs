use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::fp;
use super::padic::pow_u;
use super::Ring;
use crate::error::{Error, Result};
use crate::primes::is_prime;

/// `Z_q / p^λ Z_q = (Z/p^λ)[t] / f`, where `f` is the verbatim integer lift
/// of a monic polynomial `f̄` irreducible over `F_p`. With `λ = 1` this is
/// the finite field `F_q`.
pub struct RingCtx {
    p: u64,
    a: usize,
    lambda: u32,
    modulus: BigUint,
    fbar: Vec<u64>,
    // -f_i mod p^λ for i < a, used when reducing t^k for k >= a
    neg_f: Vec<BigUint>,
    frob_roots: Vec<OnceLock<RingElem>>,
}

/// Element of a [`RingCtx`]: `a` coefficients in `[0, p^λ)`, ascending in `t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    pub(crate) coeffs: Vec<BigUint>,
}

impl RingElem {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()
        }
    }
}

impl Clone for RingCtx {
    fn clone(&self) -> Self {
        RingCtx {
            p: self.p,
            a: self.a,
            lambda: self.lambda,
            modulus: self.modulus.clone(),
            fbar: self.fbar.clone(),
            neg_f: self.neg_f.clone(),
            frob_roots: self.frob_roots.clone(),
        }
    }
}

impl fmt::Debug for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingCtx")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("lambda", &self.lambda)
            .field("fbar", &self.fbar)
            .finish()
    }
}

impl PartialEq for RingCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.lambda == other.lambda && self.fbar == other.fbar
    }
}

impl RingCtx {
    /// Build the context from `f̄` given as ascending coefficients
    /// (length `a + 1`, leading coefficient 1).
    pub fn new(p: u64, a: usize, lambda: u32, fbar: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 || lambda == 0 {
            return Err(Error::InvalidInput(
                "extension degree and precision must be positive".into(),
            ));
        }
        let fbar: Vec<u64> = fbar.iter().map(|c| c % p).collect();
        let fbar = fp::trim(fbar);
        if fbar.len() != a + 1 || fbar[a] != 1 {
            return Err(Error::InvalidInput(format!(
                "defining polynomial must be monic of degree {a}, got coefficients {fbar:?}"
            )));
        }
        if a > 1 {
            if let Some(w) = fp::reducibility_witness(&fbar, p) {
                return Err(Error::Reducible { p, witness: w });
            }
        }
        let modulus = pow_u(p, lambda);
        let neg_f = fbar[..a]
            .iter()
            .map(|&c| (&modulus - BigUint::from(c)) % &modulus)
            .collect();
        Ok(RingCtx {
            p,
            a,
            lambda,
            modulus,
            fbar,
            neg_f,
            frob_roots: (0..a).map(|_| OnceLock::new()).collect(),
        })
    }

    /// `Z / p^λ`, presented with `f̄ = t`.
    pub fn prime_field(p: u64, lambda: u32) -> Result<Self> {
        Self::new(p, 1, lambda, &[0, 1])
    }

    /// Same tower at a different precision.
    pub fn with_lambda(&self, lambda: u32) -> Result<Self> {
        Self::new(self.p, self.a, lambda, &self.fbar)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn a(&self) -> usize {
        self.a
    }
    pub fn lambda(&self) -> u32 {
        self.lambda
    }
    /// `p^λ`.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }
    /// `q = p^a`.
    pub fn q(&self) -> BigUint {
        pow_u(self.p, self.a as u32)
    }
    /// `f̄`, ascending, monic.
    pub fn fbar(&self) -> &[u64] {
        &self.fbar
    }

    pub fn elem(&self, coeffs: &[BigUint]) -> RingElem {
        let mut out = vec![BigUint::zero(); self.a];
        for (i, c) in coeffs.iter().enumerate() {
            if i < self.a {
                out[i] += c;
            } else {
                // fold higher powers of t through the general reducer
                let mut tmp = vec![BigUint::zero(); i + 1];
                tmp[i] = c.clone();
                let r = self.reduce_poly(tmp);
                for (o, x) in out.iter_mut().zip(r.coeffs) {
                    *o += x;
                }
            }
        }
        for o in out.iter_mut() {
            *o %= &self.modulus;
        }
        RingElem { coeffs: out }
    }

    pub fn from_u64(&self, v: u64) -> RingElem {
        self.from_int(&BigInt::from(v))
    }

    /// The class of `t`.
    pub fn gen(&self) -> RingElem {
        self.elem(&[BigUint::zero(), BigUint::one()])
    }

    /// The value of a constant element, `None` if some `t`-coefficient is nonzero.
    pub fn as_constant(&self, u: &RingElem) -> Option<BigUint> {
        if u.coeffs[1..].iter().all(Zero::is_zero) {
            Some(u.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Reduction mod `p`, as a polynomial over `F_p`.
    pub fn to_fp(&self, u: &RingElem) -> Vec<u64> {
        let pb = BigUint::from(self.p);
        fp::trim(
            u.coeffs
                .iter()
                .map(|c| (c % &pb).to_u64().unwrap())
                .collect(),
        )
    }

    pub fn is_unit(&self, u: &RingElem) -> bool {
        let pb = BigUint::from(self.p);
        u.coeffs.iter().any(|c| !(c % &pb).is_zero())
    }

    /// Reduce an element of this ring into `other`, which must be the same
    /// tower at precision at most ours.
    pub fn convert(&self, u: &RingElem, other: &RingCtx) -> Result<RingElem> {
        if other.p != self.p || other.fbar != self.fbar || other.lambda > self.lambda {
            return Err(Error::InvalidInput(
                "conversion needs the same tower at lower or equal precision".into(),
            ));
        }
        Ok(RingElem {
            coeffs: u.coeffs.iter().map(|c| c % &other.modulus).collect(),
        })
    }

    /// Reduce an unreduced coefficient vector (any length) modulo `f` and `p^λ`.
    fn reduce_poly(&self, mut c: Vec<BigUint>) -> RingElem {
        let a = self.a;
        if c.len() > a {
            for k in (a..c.len()).rev() {
                let top = std::mem::take(&mut c[k]) % &self.modulus;
                if top.is_zero() {
                    continue;
                }
                for i in 0..a {
                    if !self.neg_f[i].is_zero() {
                        c[k - a + i] += &top * &self.neg_f[i];
                    }
                }
            }
            c.truncate(a);
        }
        c.resize(a, BigUint::zero());
        for x in c.iter_mut() {
            if *x >= self.modulus {
                *x %= &self.modulus;
            }
        }
        RingElem { coeffs: c }
    }

    pub fn inv(&self, u: &RingElem) -> Result<RingElem> {
        if !self.is_unit(u) {
            return Err(Error::NotUnit { p: self.p });
        }
        if self.a == 1 {
            let x = u.coeffs[0].modinv(&self.modulus).unwrap_or_else(BigUint::zero);
            return Ok(RingElem { coeffs: vec![x] });
        }
        let ubar = self.to_fp(u);
        let x0 = fp::inv_mod(&ubar, &self.fbar, self.p)
            .ok_or_else(|| Error::Internal("unit without an inverse mod p".into()))?;
        let mut x = self.elem(&x0.into_iter().map(BigUint::from).collect::<Vec<_>>());
        // Newton: x <- x (2 - u x), doubling the p-adic precision each step
        let two = self.from_u64(2);
        let mut prec = 1u32;
        while prec < self.lambda {
            let ux = self.mul(u, &x);
            x = self.mul(&x, &self.sub(&two, &ux));
            prec = prec.saturating_mul(2);
        }
        Ok(x)
    }

    pub fn div(&self, u: &RingElem, v: &RingElem) -> Result<RingElem> {
        Ok(self.mul(u, &self.inv(v)?))
    }

    /// Evaluate the polynomial `Σ u_i X^i` at `x`.
    pub(crate) fn eval_at(&self, u: &RingElem, x: &RingElem) -> RingElem {
        let mut acc = self.zero();
        for c in u.coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc.coeffs[0] += c;
            if acc.coeffs[0] >= self.modulus {
                acc.coeffs[0] -= &self.modulus;
            }
        }
        acc
    }

    /// `f` evaluated at `x`.
    fn eval_f(&self, x: &RingElem) -> RingElem {
        let mut acc = self.one();
        for &c in self.fbar[..self.a].iter().rev() {
            acc = self.mul(&acc, x);
            acc.coeffs[0] += c;
            if acc.coeffs[0] >= self.modulus {
                acc.coeffs[0] -= &self.modulus;
            }
        }
        acc
    }

    fn eval_df(&self, x: &RingElem) -> RingElem {
        let mut acc = self.from_u64(self.a as u64);
        for i in (1..self.a).rev() {
            acc = self.mul(&acc, x);
            let c = self.from_u64(self.fbar[i] * i as u64);
            acc = self.add(&acc, &c);
        }
        acc
    }

    /// The image of `t` under `φ^j`: the root of `f` congruent to `t^{p^j}` mod `p`.
    pub fn frobenius_root(&self, j: usize) -> &RingElem {
        self.frob_roots[j].get_or_init(|| {
            let e = num_traits::pow(BigUint::from(self.p), j);
            let start = fp::pow_mod_poly(&[0, 1], &e, &self.fbar, self.p);
            let mut r = self.elem(&start.into_iter().map(BigUint::from).collect::<Vec<_>>());
            let mut prec = 1u32;
            while prec < self.lambda {
                let num = self.eval_f(&r);
                let den = self.eval_df(&r);
                let step = self
                    .div(&num, &den)
                    .expect("f is separable mod p, so f'(r) is a unit");
                r = self.sub(&r, &step);
                prec = prec.saturating_mul(2);
            }
            debug_assert!(self.is_zero(&self.eval_f(&r)));
            r
        })
    }

    /// `φ^j(u)` for `j` in `[0, a)`.
    pub fn frobenius(&self, u: &RingElem, j: usize) -> RingElem {
        let j = j % self.a;
        if j == 0 || self.a == 1 {
            return u.clone();
        }
        let r = self.frobenius_root(j).clone();
        self.eval_at(u, &r)
    }
}

impl Ring for RingCtx {
    type Elem = RingElem;

    fn zero(&self) -> RingElem {
        RingElem {
            coeffs: vec![BigUint::zero(); self.a],
        }
    }

    fn one(&self) -> RingElem {
        let mut z = self.zero();
        z.coeffs[0] = BigUint::one() % &self.modulus;
        z
    }

    fn from_int(&self, v: &BigInt) -> RingElem {
        let mut z = self.zero();
        let m = v.magnitude() % &self.modulus;
        z.coeffs[0] = if v.sign() == Sign::Minus && !m.is_zero() {
            &self.modulus - m
        } else {
            m
        };
        z
    }

    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    fn add_assign(&self, acc: &mut RingElem, b: &RingElem) {
        for (x, y) in acc.coeffs.iter_mut().zip(&b.coeffs) {
            if y.is_zero() {
                continue;
            }
            *x += y;
            if *x >= self.modulus {
                *x -= &self.modulus;
            }
        }
    }

    fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| {
                    if x >= y {
                        x - y
                    } else {
                        (x + &self.modulus) - y
                    }
                })
                .collect(),
        }
    }

    fn neg(&self, a: &RingElem) -> RingElem {
        RingElem {
            coeffs: a
                .coeffs
                .iter()
                .map(|x| {
                    if x.is_zero() {
                        BigUint::zero()
                    } else {
                        &self.modulus - x
                    }
                })
                .collect(),
        }
    }

    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        if self.a == 1 {
            return RingElem {
                coeffs: vec![(&a.coeffs[0] * &b.coeffs[0]) % &self.modulus],
            };
        }
        let mut prod = vec![BigUint::zero(); 2 * self.a - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce_poly(prod)
    }

    fn mul_add_assign(&self, acc: &mut RingElem, a: &RingElem, b: &RingElem) {
        if self.a == 1 {
            let (x, y) = (&a.coeffs[0], &b.coeffs[0]);
            if x.is_zero() || y.is_zero() {
                return;
            }
            let c = &mut acc.coeffs[0];
            *c += x * y;
            *c %= &self.modulus;
            return;
        }
        let t = self.mul(a, b);
        self.add_assign(acc, &t);
    }

    fn is_zero(&self, a: &RingElem) -> bool {
        a.coeffs.iter().all(Zero::is_zero)
    }

    fn sum_of_products<'a, I>(&self, terms: I) -> RingElem
    where
        I: IntoIterator<Item = (&'a RingElem, &'a RingElem)>,
    {
        let mut acc = vec![BigUint::zero(); 2 * self.a - 1];
        for (x, y) in terms {
            for (i, xi) in x.coeffs.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.coeffs.iter().enumerate() {
                    if !yj.is_zero() {
                        acc[i + j] += xi * yj;
                    }
                }
            }
        }
        self.reduce_poly(acc)
    }

    fn poly_mul(&self, a: &[RingElem], b: &[RingElem]) -> Option<Vec<RingElem>> {
        let short = a.len().min(b.len());
        if short < 8 {
            return None;
        }
        // Pack coefficient i, t-degree j at slot i*span + j. Products of
        // t-polynomials have degree <= 2a-2 < span, so slots never mix.
        let span = 2 * self.a - 1;
        let terms = (short * self.a) as u64;
        let slot = 2 * self.modulus.bits() + (64 - terms.leading_zeros() as u64) + 1;
        let zero = BigUint::zero();
        let spread = |p: &[RingElem]| -> BigUint {
            let flat: Vec<&BigUint> = p
                .iter()
                .flat_map(|e| {
                    e.coeffs
                        .iter()
                        .chain(std::iter::repeat(&zero).take(span - self.a))
                })
                .collect();
            crate::pack::pack(flat.into_iter(), slot)
        };
        let prod = spread(a) * spread(b);
        let len = a.len() + b.len() - 1;
        let mut slots = crate::pack::unpack(&prod, slot, len * span).into_iter();
        Some(
            (0..len)
                .map(|_| self.reduce_poly(slots.by_ref().take(span).collect()))
                .collect(),
        )
    }

    fn scale(&self, a: &RingElem, k: i64) -> RingElem {
        let kk = self.from_i64(k).coeffs.swap_remove(0);
        RingElem {
            coeffs: a.coeffs.iter().map(|x| (x * &kk) % &self.modulus).collect(),
        }
    }
}
