//! The deformation recurrence: matrices `Q(k, ℓ)` carrying the coefficient
//! vectors of `G^{ks-ℓ} F^ℓ` to those of `G^{ks-ℓ-1} F^{ℓ+1}`, where
//! `G = x_0^d + ... + x_n^d`, together with the initial vector (multinomial
//! coefficients of powers of `G`), the common denominator and row extraction.
//!
//! For a frame `(s, v, w, h)` and `H` of degree `kds`, `[H]_k` is the vector
//! `(H_{kv + w - t})` indexed by `t ∈ B_h`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{basis, basis_size, rank_unchecked, HomogPoly};
use crate::ring::{factorial_valuation, padic_divexact, pow_u, Ring, RingCtx, RingElem};

/// Per-row parameters of the recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformFrame {
    pub n: usize,
    pub d: usize,
    pub s: usize,
    /// Row index of `M_s`, a monomial of degree `ds`.
    pub v: Vec<u32>,
    /// Extraction shift, of degree `h - ds`.
    pub sigma: Vec<u32>,
    /// `v + sigma`, of degree `h`.
    pub w: Vec<u32>,
    pub h: usize,
    pub lambda: u32,
    pub lambda1: u32,
    pub lambda2: u32,
}

/// Working degree `max(ds, (d-1)(n+1) + 1)`.
pub fn working_degree(n: usize, d: usize, s: usize) -> usize {
    (d * s).max((d - 1) * (n + 1) + 1)
}

pub fn make_frame(n: usize, d: usize, s: usize, v: &[u32], lambda: u32) -> Result<DeformFrame> {
    if d == 0 || s == 0 {
        return Err(Error::InvalidInput("degree and s must be positive".into()));
    }
    let deg: usize = v.iter().map(|&x| x as usize).sum();
    if v.len() != n + 1 || deg != d * s {
        return Err(Error::InvalidInput(format!(
            "row monomial {v:?} must have {} entries and degree {}",
            n + 1,
            d * s
        )));
    }
    let h = working_degree(n, d, s);
    let mut sigma = vec![0u32; n + 1];
    sigma[0] = (h - d * s) as u32;
    let w = v.iter().zip(&sigma).map(|(a, b)| a + b).collect();
    let s32 = s as u32;
    Ok(DeformFrame {
        n,
        d,
        s,
        v: v.to_vec(),
        sigma,
        w,
        h,
        lambda,
        lambda1: lambda + s32,
        lambda2: lambda + 2 * s32,
    })
}

/// One nonzero entry of `Q`: the value at `(k, ℓ)` is `c0 + ck k + cl ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QEntry<E> {
    pub col: usize,
    pub c0: E,
    pub ck: E,
    pub cl: E,
}

/// `Q` as sparse rows over `B_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix<E> {
    pub h: usize,
    pub dim: usize,
    pub rows: Vec<Vec<QEntry<E>>>,
}

/// Build `Q` for `F` (homogeneous of degree `d`) in the given frame. Row `t`
/// uses the smallest `i` with `t_i >= d`.
pub fn build_q<R: Ring>(ring: &R, f: &HomogPoly<R::Elem>, frame: &DeformFrame) -> Result<QMatrix<R::Elem>> {
    let (n, d, h) = (frame.n, frame.d, frame.h);
    if f.degree() != d || f.n() != n {
        return Err(Error::InvalidInput(format!(
            "polynomial has degree {} in {} variables, frame expects {} and {}",
            f.degree(),
            f.nvars(),
            d,
            n + 1
        )));
    }
    let f_terms = f.terms(ring);
    let rows_b = basis(n, h);
    let mut rows = Vec::with_capacity(rows_b.len());
    let mut z = vec![0u32; n + 1];
    for t in &rows_b {
        let i = t
            .iter()
            .position(|&ti| ti as usize >= d)
            .ok_or_else(|| Error::Internal(format!("no exponent >= {d} in {t:?}")))?;
        let mut tp = t.clone();
        tp[i] -= d as u32;
        let base = frame.w[i] as i64 - tp[i] as i64;
        let vi = frame.v[i] as i64;
        let mut row = Vec::with_capacity(f_terms.len());
        for (y, fy) in &f_terms {
            for j in 0..=n {
                z[j] = tp[j] + y[j];
            }
            let yi = y[i] as i64;
            row.push(QEntry {
                col: rank_unchecked(n, h, &z),
                c0: ring.scale(fy, base - yi),
                ck: ring.scale(fy, vi),
                cl: ring.scale(fy, -yi),
            });
        }
        rows.push(row);
    }
    Ok(QMatrix {
        h,
        dim: rows_b.len(),
        rows,
    })
}

impl<E: Clone> QMatrix<E> {
    /// Dense `Q(k, ℓ)`.
    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, k: &E, l: &E) -> Matrix<E> {
        let mut m = Matrix::zeros(ring, self.dim, self.dim);
        for (t, row) in self.rows.iter().enumerate() {
            for e in row {
                let mut val = e.c0.clone();
                ring.mul_add_assign(&mut val, &e.ck, k);
                ring.mul_add_assign(&mut val, &e.cl, l);
                ring.add_assign(m.get_mut(t, e.col), &val);
            }
        }
        m
    }

    /// `Q(k, ℓ)` as the affine matrix function `ℓ ↦ U0 + ℓ U1` for fixed `k`.
    pub fn affine_in_l<R: Ring<Elem = E>>(&self, ring: &R, k: &E) -> (Matrix<E>, Matrix<E>) {
        let mut u0 = Matrix::zeros(ring, self.dim, self.dim);
        let mut u1 = Matrix::zeros(ring, self.dim, self.dim);
        for (t, row) in self.rows.iter().enumerate() {
            for e in row {
                let mut val = e.c0.clone();
                ring.mul_add_assign(&mut val, &e.ck, k);
                ring.add_assign(u0.get_mut(t, e.col), &val);
                ring.add_assign(u1.get_mut(t, e.col), &e.cl);
            }
        }
        (u0, u1)
    }
}

/// `Q(k, ℓ)` with `k` fixed, applied repeatedly to vectors for varying `ℓ`.
pub struct QStepper<E> {
    // per row: (column, c0 + ck k, cl)
    rows: Vec<Vec<(usize, E, E)>>,
}

impl<E: Clone> QStepper<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, q: &QMatrix<E>, k: &E) -> Self {
        let rows = q
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let mut base = e.c0.clone();
                        ring.mul_add_assign(&mut base, &e.ck, k);
                        (e.col, base, e.cl.clone())
                    })
                    .collect()
            })
            .collect();
        QStepper { rows }
    }

    /// `Q(k, ℓ) y`.
    pub fn apply<R: Ring<Elem = E>>(&self, ring: &R, l: i64, y: &[E]) -> Vec<E> {
        self.rows
            .iter()
            .map(|row| {
                let live = || row.iter().filter(|(c, _, _)| !ring.is_zero(&y[*c]));
                let s0 = ring.sum_of_products(live().map(|(c, b, _)| (b, &y[*c])));
                let s1 = ring.sum_of_products(live().map(|(c, _, cl)| (cl, &y[*c])));
                let mut out = s0;
                if l != 0 {
                    ring.add_assign(&mut out, &ring.scale(&s1, l));
                }
                out
            })
            .collect()
    }
}

/// Multinomial index `y = ((p-1)v + w - t) / d` for row entry `t`, or `None`
/// when some component is negative or not an integer.
pub fn multinomial_index(frame: &DeformFrame, p: u64, t: &[u32]) -> Option<Vec<u64>> {
    let d = frame.d as i64;
    let mut y = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        let num = (p as i64 - 1) * frame.v[i] as i64 + frame.w[i] as i64 - t[i] as i64;
        if num < 0 || num % d != 0 {
            return None;
        }
        y.push((num / d) as u64);
    }
    Some(y)
}

/// `[G^{(p-1)s}]_{p-1}` as integers mod `p^{λ1}`. Entry `t` is the
/// multinomial `((p-1)s)! / (y_0! ... y_n!)`, formed from factorials mod
/// `p^{λ2}` supplied by `factorial(m, μ) = m! mod p^μ`.
pub fn initial_vector(
    frame: &DeformFrame,
    p: u64,
    factorial: &mut dyn FnMut(u64, u32) -> BigUint,
) -> Result<Vec<BigUint>> {
    if frame.d as u64 % p == 0 {
        return Err(Error::PrimeDividesDegree { p, d: frame.d });
    }
    let total = (p - 1) * frame.s as u64;
    let num = factorial(total, frame.lambda2);
    let m1 = pow_u(p, frame.lambda1);
    basis(frame.n, frame.h)
        .iter()
        .map(|t| match multinomial_index(frame, p, t) {
            None => Ok(BigUint::zero()),
            Some(y) => {
                let mut den = BigUint::one();
                let m2 = pow_u(p, frame.lambda2);
                for &yi in &y {
                    den = (den * factorial(yi, frame.lambda2)) % &m2;
                }
                let (q, prec) = padic_divexact(p, frame.lambda2, &num, &den, frame.s as u32)
                    .map_err(|e| Error::Internal(format!("multinomial division: {e}")))?;
                debug_assert!(prec >= frame.lambda1);
                Ok(q % &m1)
            }
        })
        .collect()
}

/// `d^{(p-1)s} ((p-1)s)! mod p^{λ1}` and `v_p(((p-1)s)!)`, given
/// `((p-1)s)! mod p^{λ1}`.
pub fn denominator_from_factorial(p: u64, d: usize, s: usize, lambda1: u32, fact: &BigUint) -> (BigUint, u32) {
    let m1 = pow_u(p, lambda1);
    let e = (p - 1) * s as u64;
    let dpow = BigUint::from(d as u64).modpow(&BigUint::from(e), &m1);
    ((dpow * fact) % &m1, factorial_valuation(e, p))
}

/// `d^{(p-1)s} ((p-1)s)! mod p^{λ1}` with the factorial accumulated directly.
pub fn denominator(p: u64, d: usize, s: usize, lambda1: u32) -> (BigUint, u32) {
    let m1 = pow_u(p, lambda1);
    let fact = factorial_mod(((p - 1) * s as u64) as u64, &m1);
    denominator_from_factorial(p, d, s, lambda1, &fact)
}

/// `m! mod modulus` by successive multiplication.
pub fn factorial_mod(m: u64, modulus: &BigUint) -> BigUint {
    let mut acc = BigUint::one() % modulus;
    for j in 2..=m {
        acc = (acc * j) % modulus;
    }
    acc
}

/// Divide the final vector by the denominator and read off row `v` of `M_s`
/// in the output context (precision `λ`).
pub fn finish_row(
    frame: &DeformFrame,
    ctx_out: &RingCtx,
    final_vector: &[RingElem],
    den: &BigUint,
    e: u32,
) -> Result<Vec<RingElem>> {
    let p = ctx_out.p();
    let divided: Vec<RingElem> = final_vector
        .iter()
        .map(|x| {
            let coeffs = x
                .coeffs()
                .iter()
                .map(|c| {
                    let (q, prec) = padic_divexact(p, frame.lambda1, c, den, e).map_err(|err| {
                        Error::Internal(format!("recurrence output not divisible by p^{e}: {err}"))
                    })?;
                    debug_assert!(prec >= frame.lambda);
                    Ok(q)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ctx_out.elem(&coeffs))
        })
        .collect::<Result<_>>()?;
    Ok(extract_row(frame, &divided))
}

/// `(M_s)_{v,u}` is the entry of `[F^{(p-1)s}]_{p-1}` at `t = u + σ`.
pub fn extract_row<E: Clone>(frame: &DeformFrame, vector: &[E]) -> Vec<E> {
    let n = frame.n;
    let mut t = vec![0u32; n + 1];
    basis(n, frame.d * frame.s)
        .iter()
        .map(|u| {
            for i in 0..=n {
                t[i] = u[i] + frame.sigma[i];
            }
            vector[rank_unchecked(n, frame.h, &t)].clone()
        })
        .collect()
}

/// Dimension of `M_s`.
pub fn ms_dim(n: usize, d: usize, s: usize) -> usize {
    basis_size(n, d * s)
}
