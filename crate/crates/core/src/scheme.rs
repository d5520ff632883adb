//! Affine schemes over `Z` as signed sums of torus hypersurfaces.
//!
//! `V(F_1, ..., F_k) ⊂ A^m` is written as `Σ_S (-1)^{1+|S|} V(Π_{i∈S} F_i)`,
//! and each `V(G)` as the disjoint union over coordinate strata
//! `T ⊆ {1..m}` of the torus hypersurface of `G` restricted to `T`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ms::Engine;
use crate::poly::{HomogPoly, SparsePoly};
use crate::ring::{Ring, RingCtx, RingElem};
use crate::trace::point_count_exact;
use crate::zeta::{combine_local_factors, torus_zeta, zeta_from_counts_pipeline, ZetaOptions, ZetaRational};

/// Largest generator count and variable count accepted.
pub const MAX_SUBSETS: usize = 12;

/// The torus hypersurface of `F` in `G_m^n`, counted with sign `e`.
/// `d = 0` marks a constant piece, which is empty or the whole torus
/// depending on whether `p` divides the constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedHypersurface {
    pub n: usize,
    pub d: usize,
    pub f: HomogPoly<BigInt>,
    pub e: i32,
}

/// What a piece becomes after reduction mod `p`.
enum Reduced {
    Empty,
    FullTorus,
    Hypersurface(RingCtx, HomogPoly<RingElem>),
}

impl SignedHypersurface {
    fn reduce(&self, p: u64) -> Result<Reduced> {
        let ctx = RingCtx::prime_field(p, 1)?;
        let fp = self.f.to_ring(&ctx);
        if fp.is_zero(&ctx) {
            return Ok(Reduced::FullTorus);
        }
        if self.d == 0 {
            return Ok(Reduced::Empty);
        }
        if self.d as u64 % p == 0 {
            // x0 is a unit on the torus, so x0 F has the same zero locus
            let x0 = HomogPoly::from_terms(&ctx, self.n + 1, 1, &[(unit_vector(self.n + 1, 0), ctx.one())])?;
            let g = crate::poly::hp_mul(&ctx, &x0, &fp)?;
            return Ok(Reduced::Hypersurface(ctx, g));
        }
        Ok(Reduced::Hypersurface(ctx, fp))
    }

    /// `|X(F_{p^r})|` for this piece, unsigned.
    pub fn count(&self, p: u64, r: usize, engine: Engine) -> Result<BigUint> {
        Ok(match self.reduce(p)? {
            Reduced::Empty => BigUint::zero(),
            Reduced::FullTorus => (num_traits::pow(BigUint::from(p), r) - 1u32).pow(self.n as u32),
            Reduced::Hypersurface(ctx, f) => point_count_exact(&ctx, &f, r, engine)?,
        })
    }

    /// Local zeta factor at `p`, unsigned.
    pub fn zeta(&self, p: u64, opts: &ZetaOptions) -> Result<ZetaRational> {
        Ok(match self.reduce(p)? {
            Reduced::Empty => ZetaRational::one(),
            Reduced::FullTorus => torus_zeta(&BigInt::from(p), self.n),
            Reduced::Hypersurface(ctx, f) => zeta_from_counts_pipeline(&ctx, &f, opts)?,
        })
    }
}

fn unit_vector(len: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; len];
    e[i] = 1;
    e
}

/// `(Π_{i∈S} F_i, (-1)^{1+|S|})` for every nonempty `S`, in order of the
/// bitmask of `S`.
pub fn inclusion_exclusion(generators: &[SparsePoly]) -> Result<Vec<(SparsePoly, i32)>> {
    let k = generators.len();
    if k == 0 {
        return Err(Error::InvalidInput("at least one generator is required".into()));
    }
    if k > MAX_SUBSETS {
        return Err(Error::TooLarge {
            what: "generators",
            count: k,
            limit: MAX_SUBSETS,
        });
    }
    let m = generators[0].nvars();
    if generators.iter().any(|g| g.nvars() != m) {
        return Err(Error::InvalidInput("generators must share the variable count".into()));
    }
    Ok((1u32..1 << k)
        .map(|mask| {
            let prod = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .fold(SparsePoly::one(m), |acc, i| acc.mul(&generators[i]));
            let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
            (prod, sign)
        })
        .collect())
}

/// One piece per coordinate stratum `T`, homogenized by `x_0` to the total
/// degree of `F_T`. Strata where `F_T = ±1` are dropped; other constants are
/// kept because they vanish mod the primes dividing them.
pub fn torus_split(f: &SparsePoly) -> Result<Vec<SignedHypersurface>> {
    let m = f.nvars();
    if m > MAX_SUBSETS {
        return Err(Error::TooLarge {
            what: "variables",
            count: m,
            limit: MAX_SUBSETS,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << m {
        let keep: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let ft = f.restrict(&keep);
        if ft.as_constant().is_some_and(|c| c.abs().is_one()) {
            continue;
        }
        let d = ft.total_degree();
        out.push(SignedHypersurface {
            n: keep.len(),
            d,
            f: ft.homogenize(d)?,
            e: 1,
        });
    }
    Ok(out)
}

/// All signed pieces of `V(generators)`.
pub fn decompose(generators: &[SparsePoly]) -> Result<Vec<SignedHypersurface>> {
    let mut out = Vec::new();
    for (g, sign) in inclusion_exclusion(generators)? {
        for mut piece in torus_split(&g)? {
            piece.e = sign;
            out.push(piece);
        }
    }
    Ok(out)
}

/// `Σ e_i |X_i(F_{p^r})|`, which equals the number of common zeros in
/// `F_{p^r}^m`.
pub fn signed_count(pieces: &[SignedHypersurface], p: u64, r: usize, engine: Engine) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for piece in pieces {
        let c = BigInt::from(piece.count(p, r, engine)?);
        if piece.e > 0 {
            total += c;
        } else {
            total -= c;
        }
    }
    Ok(total)
}

/// `Z_{X_p}(T)` for `X = V(generators)` as `Π Z_{X_i}^{e_i}`.
pub fn local_zeta_affine(generators: &[SparsePoly], p: u64, opts: &ZetaOptions) -> Result<ZetaRational> {
    let factors = decompose(generators)?
        .iter()
        .map(|piece| Ok((piece.zeta(p, opts)?, piece.e)))
        .collect::<Result<Vec<_>>>()?;
    combine_local_factors(&factors)
}
