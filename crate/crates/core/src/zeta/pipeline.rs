//! Single-prime driver: counts `N_1..N_{2D}` from the trace formula, then
//! reconstruction.

use num_bigint::BigInt;

use super::{degree_bound, reconstruct_zeta, ZetaRational};
use crate::error::{Error, Result};
use crate::forest::ms_all_primes;
use crate::ms::{compute_ms, ms_linear, Engine, MsMatrix};
use crate::parallel::map_range;
use crate::poly::HomogPoly;
use crate::primes::primes_below;
use crate::ring::{RingCtx, RingElem};
use crate::trace::{lift_poly, point_counts_with};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZetaOptions {
    pub engine: Engine,
    /// Overrides `λ = 2naD`.
    pub lambda: Option<u32>,
    /// Overrides `D = (4d+4)^n`.
    pub d_bound: Option<usize>,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        ZetaOptions {
            engine: Engine::Linear,
            lambda: None,
            d_bound: None,
        }
    }
}

/// `2naD`: enough for every count up to `r = 2D` to be read off exactly.
pub fn default_lambda(n: usize, a: usize, d_bound: usize) -> u32 {
    (2 * n * a * d_bound) as u32
}

impl ZetaOptions {
    pub fn resolve(&self, n: usize, d: usize, a: usize) -> Result<(usize, u32)> {
        let d_bound = self.d_bound.unwrap_or_else(|| degree_bound(n, d));
        if d_bound == 0 {
            return Err(Error::InvalidInput("D must be positive".into()));
        }
        let need = default_lambda(n, a, d_bound);
        let lambda = self.lambda.unwrap_or(need);
        if lambda < need {
            return Err(Error::InvalidInput(format!(
                "λ = {lambda} cannot determine counts up to r = {}; need at least {need}",
                2 * d_bound
            )));
        }
        Ok((d_bound, lambda))
    }
}

/// Reconstruct from `M_s` supplied by `ms_for`, with `ctx` already at the
/// working precision.
pub fn zeta_with_ms<M>(ctx: &RingCtx, f: &HomogPoly<RingElem>, d_bound: usize, ms_for: M) -> Result<ZetaRational>
where
    M: FnMut(usize) -> Result<MsMatrix>,
{
    let counts: Vec<BigInt> = point_counts_with(ctx, f, 2 * d_bound, ms_for)?
        .into_iter()
        .map(BigInt::from)
        .collect();
    reconstruct_zeta(&counts, d_bound, f.n(), ctx.a(), ctx.p())
}

/// `Z(T)` of the torus hypersurface of `F mod p` over `F_q`, `q = p^a`.
pub fn zeta_from_counts_pipeline(ctx: &RingCtx, f: &HomogPoly<RingElem>, opts: &ZetaOptions) -> Result<ZetaRational> {
    let (d_bound, lambda) = opts.resolve(f.n(), f.degree(), ctx.a())?;
    let work = ctx.with_lambda(lambda)?;
    let fw = lift_poly(f, &work);
    zeta_with_ms(&work, &fw, d_bound, |s| compute_ms(opts.engine, &work, &fw, s))
}

/// `Z(T)` over `F_p` for every prime `p < N` with `p ∤ d`, in increasing
/// order. `M_s` for `s <= λ` comes from the all-primes engine; the few
/// larger `s` needed only at primes `p <= λ` use the linear engine there.
/// A failure at one prime is reported in its slot and does not stop the rest.
pub fn zeta_all_primes(
    f: &HomogPoly<BigInt>,
    n_bound: u64,
    opts: &ZetaOptions,
) -> Result<Vec<(u64, Result<ZetaRational>)>> {
    let (d_bound, lambda) = opts.resolve(f.n(), f.degree(), 1)?;
    let primes: Vec<u64> = primes_below(n_bound)
        .into_iter()
        .filter(|&p| f.degree() as u64 % p != 0)
        .collect();
    if primes.is_empty() {
        return Ok(Vec::new());
    }
    let tables = (1..=lambda as usize)
        .map(|s| ms_all_primes(f, s, n_bound, lambda))
        .collect::<Result<Vec<_>>>()?;
    let results = map_range(primes.len(), |i| {
        let p = primes[i];
        let ctx = RingCtx::prime_field(p, lambda)?;
        let fp = f.to_ring(&ctx);
        zeta_with_ms(&ctx, &fp, d_bound, |s| match tables.get(s - 1) {
            Some(t) => t.ms.get(&p).cloned().ok_or_else(|| Error::Internal(format!("no M_{s} at p = {p}"))),
            None => ms_linear(&ctx, &fp, s),
        })
    });
    Ok(primes.into_iter().zip(results).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::zeta_exact_oracle;

    fn int_poly(ctx: &RingCtx, nvars: usize, d: usize, terms: &[(Vec<u32>, i64)]) -> HomogPoly<RingElem> {
        HomogPoly::from_int_terms(nvars, d, terms).unwrap().to_ring(ctx)
    }

    #[test]
    fn linear_form() {
        let ctx = RingCtx::prime_field(5, 1).unwrap();
        let f = int_poly(&ctx, 2, 1, &[(vec![1, 0], 1), (vec![0, 1], -1)]);
        let want = ZetaRational::from_i64(&[1], &[1, -1]).unwrap();
        for engine in Engine::ALL {
            let opts = ZetaOptions {
                engine,
                lambda: None,
                d_bound: Some(2),
            };
            assert_eq!(zeta_from_counts_pipeline(&ctx, &f, &opts).unwrap(), want);
        }
    }

    #[test]
    fn conics_with_small_bound() {
        let ctx = RingCtx::prime_field(7, 1).unwrap();
        let f = int_poly(&ctx, 2, 2, &[(vec![2, 0], 1), (vec![0, 2], -2)]);
        let g = int_poly(&ctx, 2, 2, &[(vec![2, 0], 1), (vec![0, 2], -3)]);
        let opts = ZetaOptions {
            engine: Engine::Linear,
            lambda: None,
            d_bound: Some(4),
        };
        assert_eq!(
            zeta_from_counts_pipeline(&ctx, &f, &opts).unwrap(),
            ZetaRational::from_i64(&[1], &[1, -2, 1]).unwrap()
        );
        let z = zeta_from_counts_pipeline(&ctx, &g, &opts).unwrap();
        assert_eq!(z, ZetaRational::from_i64(&[1], &[1, 0, -1]).unwrap());
        assert_eq!(zeta_exact_oracle(&z.counts(8), 4).unwrap(), z);
    }

    #[test]
    fn all_primes_match_single_prime() {
        let f = HomogPoly::from_int_terms(2, 2, &[(vec![2, 0], 1), (vec![0, 2], -2)]).unwrap();
        let opts = ZetaOptions {
            engine: Engine::Linear,
            lambda: None,
            d_bound: Some(4),
        };
        let all = zeta_all_primes(&f, 20, &opts).unwrap();
        assert_eq!(all.iter().map(|x| x.0).collect::<Vec<_>>(), vec![3, 5, 7, 11, 13, 17, 19]);
        for (p, z) in all {
            let ctx = RingCtx::prime_field(p, 1).unwrap();
            assert_eq!(z.unwrap(), zeta_from_counts_pipeline(&ctx, &f.to_ring(&ctx), &opts).unwrap(), "p={p}");
        }
    }

    #[test]
    fn lambda_too_small() {
        let opts = ZetaOptions {
            engine: Engine::Naive,
            lambda: Some(3),
            d_bound: Some(4),
        };
        assert!(opts.resolve(1, 2, 1).is_err());
        assert_eq!(ZetaOptions::default().resolve(1, 1, 1).unwrap(), (8, 16));
    }
}
