//! Products `U(ℓ0-1) ... U(1) U(0) Y0` of matrices affine in `ℓ`, in about
//! `√ℓ0` blocks: with `b = ⌈√ℓ0⌉` the polynomial matrix
//! `P(T) = U(T+b-1) ... U(T)` is built by a product tree and evaluated at
//! `0, b, 2b, ...` over a monic subproduct tree, so nothing is ever inverted.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{mat_vec, Matrix};
use crate::ring::{pow_u, Ring, RingCtx};
use crate::upoly::{self, SubproductTree};

/// `Y_{ℓ+1} = (U0 + ℓ U1) Y_ℓ`.
#[derive(Clone, Debug)]
pub struct LinearMatrixRecurrence<E> {
    pub u0: Matrix<E>,
    pub u1: Matrix<E>,
    pub y0: Vec<E>,
}

impl<E: Clone> LinearMatrixRecurrence<E> {
    pub fn dim(&self) -> usize {
        self.u0.rows()
    }

    pub fn at<R: Ring<Elem = E>>(&self, ring: &R, l: i64) -> Matrix<E> {
        let lv = ring.from_i64(l);
        Matrix::from_fn(self.dim(), self.dim(), |i, j| {
            let mut v = self.u0.get(i, j).clone();
            ring.mul_add_assign(&mut v, self.u1.get(i, j), &lv);
            v
        })
    }

    /// Direct iteration, `ℓ0` matrix-vector products.
    pub fn iterate<R: Ring<Elem = E>>(&self, ring: &R, l0: u64) -> Vec<E> {
        let mut y = self.y0.clone();
        for l in 0..l0 {
            y = mat_vec(ring, &self.at(ring, l as i64), &y);
        }
        y
    }
}

/// A matrix polynomial `Σ T^k C_k`, stored by coefficient matrices.
type PolyMatrix<E> = Vec<Matrix<E>>;

fn poly_mat_mul<R: Ring>(ring: &R, a: &PolyMatrix<R::Elem>, b: &PolyMatrix<R::Elem>) -> PolyMatrix<R::Elem> {
    let (m, inner, n) = (a[0].rows(), a[0].cols(), b[0].cols());
    (0..a.len() + b.len() - 1)
        .map(|k| {
            let terms: Vec<usize> = (k.saturating_sub(b.len() - 1)..=k.min(a.len() - 1)).collect();
            Matrix::from_fn(m, n, |i, j| {
                ring.sum_of_products(terms.iter().flat_map(|&t| {
                    (0..inner)
                        .map(move |l| (a[t].get(i, l), b[k - t].get(l, j)))
                        .filter(|(x, y)| !ring.is_zero(x) && !ring.is_zero(y))
                }))
            })
        })
        .collect()
}

/// `U(T + j)`.
fn shifted_factor<R: Ring>(ring: &R, rec: &LinearMatrixRecurrence<R::Elem>, j: i64) -> PolyMatrix<R::Elem> {
    vec![rec.at(ring, j), rec.u1.clone()]
}

/// `U(T+hi-1) ... U(T+lo)`.
fn block_product<R: Ring>(ring: &R, rec: &LinearMatrixRecurrence<R::Elem>, lo: i64, hi: i64) -> PolyMatrix<R::Elem> {
    if hi - lo == 1 {
        return shifted_factor(ring, rec, lo);
    }
    let mid = lo + (hi - lo) / 2;
    let right = block_product(ring, rec, lo, mid);
    let left = block_product(ring, rec, mid, hi);
    poly_mat_mul(ring, &left, &right)
}

/// `Y_{ℓ0}` using blocks of size `b`.
pub fn matrix_factorial_with_block<R: Ring>(
    ring: &R,
    rec: &LinearMatrixRecurrence<R::Elem>,
    l0: u64,
    b: u64,
) -> Vec<R::Elem> {
    segmented_product(ring, rec, &[0], l0, b)
}

/// For each start `c` in order, apply `U(c+ℓ0-1) ... U(c)` to the running
/// vector. One block polynomial `P(T) = U(T+b-1) ... U(T)` serves every
/// segment: it is evaluated once at all points `c + ib`.
pub fn segmented_product<R: Ring>(
    ring: &R,
    rec: &LinearMatrixRecurrence<R::Elem>,
    starts: &[u64],
    l0: u64,
    b: u64,
) -> Vec<R::Elem> {
    assert!(b >= 1);
    let blocks = l0 / b;
    let mut y = rec.y0.clone();
    let m = rec.dim();
    let values: Vec<Vec<R::Elem>> = if blocks > 0 {
        let p = block_product(ring, rec, 0, b as i64);
        let points: Vec<R::Elem> = starts
            .iter()
            .flat_map(|&c| (0..blocks).map(move |i| c + i * b))
            .map(|x| ring.from_i64(x as i64))
            .collect();
        let tree = SubproductTree::new(ring, &points);
        // values[i*m + j][k] = entry (i, j) of P at point k
        (0..m * m)
            .map(|e| {
                let coeffs: Vec<R::Elem> = p.iter().map(|c| c.entries()[e].clone()).collect();
                tree.evaluate(ring, &upoly::trim(ring, coeffs))
            })
            .collect()
    } else {
        Vec::new()
    };
    for (seg, &c) in starts.iter().enumerate() {
        for blk in 0..blocks as usize {
            let k = seg * blocks as usize + blk;
            let pm = Matrix::from_fn(m, m, |i, j| values[i * m + j][k].clone());
            y = mat_vec(ring, &pm, &y);
        }
        for l in blocks * b..l0 {
            y = mat_vec(ring, &rec.at(ring, (c + l) as i64), &y);
        }
    }
    y
}

/// `Y_{ℓ0} = U(ℓ0-1) ... U(0) Y0` for `1 <= ℓ0 <= p - 1`, with blocks of size `⌈√ℓ0⌉`.
pub fn matrix_factorial<R: Ring>(
    ring: &R,
    rec: &LinearMatrixRecurrence<R::Elem>,
    l0: u64,
    p: u64,
) -> Result<Vec<R::Elem>> {
    if l0 == 0 || l0 > p.saturating_sub(1).max(1) {
        return Err(Error::InvalidInput(format!(
            "interval length {l0} outside [1, p-1] for p = {p}"
        )));
    }
    Ok(matrix_factorial_with_block(ring, rec, l0, ceil_sqrt(l0)))
}

pub(crate) fn ceil_sqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// `(start + len)! / start!`, i.e. `(start+1)(start+2)...(start+len)`, mod `p^μ`,
/// as a scalar interval product in chunks of at most `p - 1` factors.
pub fn rising_product(p: u64, start: u64, len: u64, mu: u32) -> BigUint {
    let ctx = RingCtx::prime_field(p, mu).expect("p is prime");
    let mut acc = ctx.one();
    let chunk = (p - 1).max(1);
    let mut done = 0;
    while done < len {
        let l0 = chunk.min(len - done);
        let rec = LinearMatrixRecurrence {
            u0: Matrix::from_rows(vec![vec![ctx.from_u64(start + done + 1)]]),
            u1: Matrix::from_rows(vec![vec![ctx.one()]]),
            y0: vec![acc],
        };
        acc = matrix_factorial(&ctx, &rec, l0, p.max(2))
            .expect("chunk length within range")
            .swap_remove(0);
        done += l0;
    }
    ctx.as_constant(&acc).unwrap()
}

/// `m! mod p^μ` via chunked interval products.
pub fn factorial_intervals(p: u64, m: u64, mu: u32) -> BigUint {
    if m == 0 {
        return BigUint::one() % pow_u(p, mu);
    }
    rising_product(p, 0, m, mu)
}

/// `((p-1)s)! mod p^μ` as `s` interval products of length `p - 1`.
pub fn factorial_chunked(p: u64, s: u64, mu: u32) -> BigUint {
    factorial_intervals(p, (p - 1) * s, mu)
}
