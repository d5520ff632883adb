//! Reconstruction over `Q` with no modular steps, as an independent check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ZetaRational;
use crate::error::{Error, Result};

/// `exp(Σ N_r T^r / r)` over `Q` through `T^{len-1}`.
fn rational_exp(counts: &[BigInt], len: usize) -> Vec<BigRational> {
    let log: Vec<BigRational> = (1..len)
        .map(|r| BigRational::new(counts[r - 1].clone(), BigInt::from(r)))
        .collect();
    // c' = L' c  with  L = Σ log[r-1] T^r
    let mut c = vec![BigRational::one()];
    for k in 1..len {
        let mut acc = BigRational::zero();
        for r in 1..=k {
            acc += &log[r - 1] * BigRational::from_integer(BigInt::from(r)) * &c[k - r];
        }
        c.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    c
}

/// Solve `A x = rhs` by elimination; `None` if inconsistent, error if the
/// solution is not unique.
fn solve(mut a: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>, unknowns: usize) -> Result<Option<Vec<BigRational>>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(pr) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        rhs.swap(row, pr);
        let inv = a[row][col].recip();
        for j in col..unknowns {
            a[row][j] = &a[row][j] * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..unknowns {
                    let t = &f * &a[row][j];
                    a[r][j] -= t;
                }
                let t = &f * &rhs[row];
                rhs[r] -= t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if rhs[row..].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    if pivots.len() < unknowns {
        return Err(Error::Singular(format!(
            "{} of {unknowns} denominator coefficients are undetermined",
            unknowns - pivots.len()
        )));
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rhs[i].clone();
    }
    Ok(Some(x))
}

/// `G/H` from counts `N_1..N_{2D}` over `Q`: the least `m` for which some
/// `H = 1 + h_1 T + ... + h_m T^m` kills the coefficients `D+1..2D` of
/// `H · exp(...)`, then `G` is the truncation.
pub fn zeta_exact_oracle(counts: &[BigInt], d_bound: usize) -> Result<ZetaRational> {
    let d = d_bound;
    if counts.len() < 2 * d {
        return Err(Error::InvalidInput(format!("need {} counts", 2 * d)));
    }
    let c = rational_exp(counts, 2 * d + 1);
    for m in 0..=d {
        // Σ_{i=1}^m h_i c_{k-i} = -c_k  for k = D+1..2D
        let a: Vec<Vec<BigRational>> = (d + 1..=2 * d)
            .map(|k| (1..=m).map(|i| c[k - i].clone()).collect())
            .collect();
        let rhs: Vec<BigRational> = (d + 1..=2 * d).map(|k| -c[k].clone()).collect();
        let Some(h) = solve(a, rhs, m)? else {
            continue;
        };
        let mut hs = vec![BigRational::one()];
        hs.extend(h);
        let g: Vec<BigRational> = (0..=d)
            .map(|k| {
                (0..=k.min(m))
                    .map(|i| &hs[i] * &c[k - i])
                    .fold(BigRational::zero(), |x, y| x + y)
            })
            .collect();
        let to_int = |v: Vec<BigRational>| -> Result<Vec<BigInt>> {
            v.into_iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(Error::Reconstruction(format!("non-integral coefficient {x}")))
                    }
                })
                .collect()
        };
        return ZetaRational::new(to_int(g)?, to_int(hs)?);
    }
    Err(Error::Singular(format!("no denominator of degree at most {d} fits")))
}
