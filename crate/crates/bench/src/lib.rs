//! Shared fixtures for the benchmarks.

use num_bigint::BigInt;

use arzeta::forest::{SeriesMatrix, SeriesRing};
use arzeta::matrix::Matrix;
use arzeta::poly::HomogPoly;
use arzeta::{RingCtx, RingElem};

/// `x0^2 - 2 x1^2`, the conic used across the acceptance checks.
pub fn conic() -> HomogPoly<BigInt> {
    HomogPoly::from_int_terms(2, 2, &[(vec![2, 0], 1), (vec![0, 2], -2)]).expect("valid conic")
}

/// A dense plane cubic with small coefficients.
pub fn plane_cubic() -> HomogPoly<BigInt> {
    let c = [1i64, 2, -1, 3, 0, 1, -2, 1, 1, 4];
    HomogPoly::from_coeffs(3, 3, c.iter().map(|&x| BigInt::from(x)).collect()).expect("10 coefficients")
}

pub fn over(ctx: &RingCtx, f: &HomogPoly<BigInt>) -> HomogPoly<RingElem> {
    f.to_ring(ctx)
}

/// `E_j = [[j, 1 + k], [k, j + 1]]` over `Z[k]/k^β`, for `j = 1 .. n-1`.
pub fn series_sequence(ring: &SeriesRing, n: u64) -> Vec<SeriesMatrix> {
    (1..n)
        .map(|j| {
            let c = |a: i64, b: i64| ring.from_coeffs(&[BigInt::from(a), BigInt::from(b)]);
            Matrix::from_rows(vec![
                vec![c(j as i64, 0), c(1, 1)],
                vec![c(0, 1), c(j as i64 + 1, 0)],
            ])
        })
        .collect()
}
