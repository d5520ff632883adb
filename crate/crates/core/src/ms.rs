//! Single-prime engines for `M_s`, the `|B_{ds}| × |B_{ds}|` matrix with
//! `(M_s)_{v,u} = (F^{(p-1)s})_{pv-u}` over `Z_q / p^λ`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::deform::{
    build_q, denominator_from_factorial, factorial_mod, finish_row, initial_vector, make_frame,
    DeformFrame, QStepper,
};
use crate::error::{Error, Result};
use crate::interval::{ceil_sqrt, factorial_chunked, factorial_intervals, segmented_product, LinearMatrixRecurrence};
use crate::matrix::Matrix;
use crate::parallel::map_range;
use crate::poly::{basis, hp_pow, HomogPoly};
use crate::ring::{pow_u, RingCtx, RingElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsMatrix {
    pub s: usize,
    pub entries: Matrix<RingElem>,
}

impl MsMatrix {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }
}

/// Which single-prime algorithm computes `M_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Naive,
    Linear,
    Sqrt,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Naive, Engine::Linear, Engine::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Naive => "naive",
            Engine::Linear => "linear",
            Engine::Sqrt => "sqrt",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Engine::Naive),
            "linear" => Ok(Engine::Linear),
            "sqrt" => Ok(Engine::Sqrt),
            other => Err(Error::InvalidInput(format!("unknown engine {other:?}"))),
        }
    }
}

/// `M_s` over `ctx` (precision `ctx.lambda()`), by the chosen engine.
pub fn compute_ms(engine: Engine, ctx: &RingCtx, f: &HomogPoly<RingElem>, s: usize) -> Result<MsMatrix> {
    match engine {
        Engine::Naive => ms_naive(ctx, f, s),
        Engine::Linear => ms_linear(ctx, f, s),
        Engine::Sqrt => ms_sqrt(ctx, f, s),
    }
}

fn check_s(s: usize) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidInput("s must be at least 1".into()));
    }
    Ok(())
}

/// Expand `F^{(p-1)s}` and read off `(F^{(p-1)s})_{pv-u}`.
pub fn ms_naive(ctx: &RingCtx, f: &HomogPoly<RingElem>, s: usize) -> Result<MsMatrix> {
    check_s(s)?;
    let p = ctx.p() as i64;
    let n = f.n();
    let big = hp_pow(ctx, f, (ctx.p() - 1) * s as u64);
    let b = basis(n, f.degree() * s);
    let entries = Matrix::from_fn(b.len(), b.len(), |i, j| {
        let idx: Vec<i64> = (0..=n).map(|k| p * b[i][k] as i64 - b[j][k] as i64).collect();
        big.coeff_at(ctx, &idx)
    });
    Ok(MsMatrix { s, entries })
}

fn check_degree(ctx: &RingCtx, f: &HomogPoly<RingElem>) -> Result<()> {
    if f.degree() == 0 {
        return Err(Error::InvalidInput("polynomial must have positive degree".into()));
    }
    if f.degree() as u64 % ctx.p() == 0 {
        return Err(Error::PrimeDividesDegree {
            p: ctx.p(),
            d: f.degree(),
        });
    }
    Ok(())
}

/// Shared driver for the recurrence engines: for each row `v`, build the
/// frame and `Q`, push the initial vector through the `Q`-product with
/// `product`, divide and extract.
fn ms_by_recurrence<P, Fa>(ctx: &RingCtx, f: &HomogPoly<RingElem>, s: usize, factorial: Fa, product: P) -> Result<MsMatrix>
where
    P: Fn(&RingCtx, &crate::deform::QMatrix<RingElem>, &DeformFrame, Vec<RingElem>) -> Result<Vec<RingElem>> + Sync,
    Fa: Fn(u64, u32) -> BigUint + Sync,
{
    check_s(s)?;
    check_degree(ctx, f)?;
    let (p, n, d, lambda) = (ctx.p(), f.n(), f.degree(), ctx.lambda());
    let lambda1 = lambda + s as u32;
    let ctx1 = ctx.with_lambda(lambda1)?;
    let f1 = f.map(|c| ctx1.elem(c.coeffs()));
    let m1 = pow_u(p, lambda1);
    let fact1 = factorial((p - 1) * s as u64, lambda1) % &m1;
    let (den, e) = denominator_from_factorial(p, d, s, lambda1, &fact1);
    let rows = basis(n, d * s);
    let out = map_range(rows.len(), |r| -> Result<Vec<RingElem>> {
        let frame = make_frame(n, d, s, &rows[r], lambda)?;
        let q = build_q(&ctx1, &f1, &frame)?;
        let mut memo: HashMap<(u64, u32), BigUint> = HashMap::new();
        let mut fact = |m: u64, mu: u32| memo.entry((m, mu)).or_insert_with(|| factorial(m, mu)).clone();
        let iv: Vec<RingElem> = initial_vector(&frame, p, &mut fact)?
            .into_iter()
            .map(|x| ctx1.elem(&[x]))
            .collect();
        let y = product(&ctx1, &q, &frame, iv)?;
        finish_row(&frame, ctx, &y, &den, e)
    });
    let rows_out = out.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MsMatrix {
        s,
        entries: Matrix::from_rows(rows_out),
    })
}

/// The recurrence with one matrix-vector product per step, `ℓ = 0 .. (p-1)s - 1`.
pub fn ms_linear(ctx: &RingCtx, f: &HomogPoly<RingElem>, s: usize) -> Result<MsMatrix> {
    let p = ctx.p();
    ms_by_recurrence(
        ctx,
        f,
        s,
        |m, mu| factorial_mod(m, &pow_u(p, mu)),
        |ctx1, q, frame, mut y| {
            let stepper = QStepper::new(ctx1, q, &ctx1.from_u64(p - 1));
            for l in 0..((p - 1) * frame.s as u64) {
                y = stepper.apply(ctx1, l as i64, &y);
            }
            Ok(y)
        },
    )
}

/// The recurrence evaluated as `s` interval products of length `p - 1`,
/// chunk `c` using `U_c(ℓ) = Q(p-1, c(p-1) + ℓ)`.
pub fn ms_sqrt(ctx: &RingCtx, f: &HomogPoly<RingElem>, s: usize) -> Result<MsMatrix> {
    let p = ctx.p();
    ms_by_recurrence(
        ctx,
        f,
        s,
        |m, mu| {
            if m == (p - 1) * s as u64 {
                factorial_chunked(p, s as u64, mu)
            } else {
                factorial_intervals(p, m, mu)
            }
        },
        |ctx1, q, frame, y0| {
            // chunk c is U(c(p-1) + ℓ) with U(ℓ) = Q(p-1, ℓ)
            let (u0, u1) = q.affine_in_l(ctx1, &ctx1.from_u64(p - 1));
            let rec = LinearMatrixRecurrence { u0, u1, y0 };
            let starts: Vec<u64> = (0..frame.s as u64).map(|c| c * (p - 1)).collect();
            let y = segmented_product(ctx1, &rec, &starts, p - 1, ceil_sqrt(p - 1));
            Ok(y)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{find_irreducible, Ring};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(ctx: &RingCtx, nvars: usize, d: usize, terms: &[(Vec<u32>, i64)]) -> HomogPoly<RingElem> {
        HomogPoly::from_int_terms(nvars, d, terms).unwrap().to_ring(ctx)
    }

    #[test]
    fn diagonal_example() {
        let ctx = RingCtx::prime_field(3, 1).unwrap();
        let f = poly(&ctx, 2, 2, &[(vec![2, 0], 1), (vec![0, 2], 1)]);
        for engine in Engine::ALL {
            let m = compute_ms(engine, &ctx, &f, 1).unwrap();
            let want = Matrix::from_fn(3, 3, |i, j| {
                if i != j {
                    ctx.zero()
                } else {
                    ctx.from_u64([1, 2, 1][i])
                }
            });
            assert_eq!(m.entries, want, "{engine}");
        }
    }

    #[test]
    fn zero_polynomial() {
        let ctx = RingCtx::prime_field(5, 2).unwrap();
        let f = HomogPoly::zero(&ctx, 3, 2);
        for engine in Engine::ALL {
            for s in 1..=2 {
                let m = compute_ms(engine, &ctx, &f, s).unwrap();
                assert!(m.entries.entries().iter().all(|x| ctx.is_zero(x)));
            }
        }
    }

    #[test]
    fn rejects_p_dividing_d() {
        let ctx = RingCtx::prime_field(3, 1).unwrap();
        let f = poly(&ctx, 2, 3, &[(vec![3, 0], 1)]);
        assert_eq!(
            ms_linear(&ctx, &f, 1).unwrap_err(),
            Error::PrimeDividesDegree { p: 3, d: 3 }
        );
        assert!(ms_naive(&ctx, &f, 1).is_ok());
    }

    fn random_poly(ctx: &RingCtx, nvars: usize, d: usize, rng: &mut ChaCha8Rng) -> HomogPoly<RingElem> {
        let mut f = HomogPoly::zero(ctx, nvars, d);
        let m = ctx.modulus().clone();
        for c in f.coeffs_mut() {
            let coeffs: Vec<BigUint> = (0..ctx.a()).map(|_| BigUint::from(rng.gen::<u64>()) % &m).collect();
            *c = ctx.elem(&coeffs);
        }
        f
    }

    #[test]
    fn engines_agree_small_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3, 5, 7] {
            for a in 1..=2 {
                let fbar = find_irreducible(p, a).unwrap();
                for n in 1..=2 {
                    for d in 1..=3usize {
                        if d as u64 % p == 0 {
                            continue;
                        }
                        for lambda in 1..=2 {
                            let ctx = RingCtx::new(p, a, lambda, &fbar).unwrap();
                            let f = random_poly(&ctx, n + 1, d, &mut rng);
                            for s in 1..=2 {
                                if n == 2 && d == 3 && s == 2 && p > 5 {
                                    continue;
                                }
                                let naive = ms_naive(&ctx, &f, s).unwrap();
                                let lin = ms_linear(&ctx, &f, s).unwrap();
                                assert_eq!(naive, lin, "linear p={p} a={a} n={n} d={d} λ={lambda} s={s}");
                                let sq = ms_sqrt(&ctx, &f, s).unwrap();
                                assert_eq!(naive, sq, "sqrt p={p} a={a} n={n} d={d} λ={lambda} s={s}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sqrt_at_mid_size_prime() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ctx = RingCtx::prime_field(101, 2).unwrap();
        let f = random_poly(&ctx, 2, 2, &mut rng);
        assert_eq!(ms_sqrt(&ctx, &f, 1).unwrap(), ms_naive(&ctx, &f, 1).unwrap());
    }

    #[test]
    fn fermat_entries_are_multinomials() {
        // For F = G the recurrence is the identity on [G^{(p-1)s}], so
        // (M_s)_{v,u} is the multinomial coefficient at (pv-u)/d.
        let ctx = RingCtx::prime_field(5, 2).unwrap();
        let f = poly(&ctx, 2, 2, &[(vec![2, 0], 1), (vec![0, 2], 1)]);
        let m = ms_linear(&ctx, &f, 1).unwrap();
        let b = basis(1, 2);
        for (i, v) in b.iter().enumerate() {
            for (j, u) in b.iter().enumerate() {
                let e0 = 5 * v[0] as i64 - u[0] as i64;
                let want = if e0 >= 0 && e0 % 2 == 0 && e0 / 2 <= 4 {
                    crate::poly::binomial(4, (e0 / 2) as usize) as u64 % 25
                } else {
                    0
                };
                assert_eq!(*m.entries.get(i, j), ctx.from_u64(want));
            }
        }
    }
}
