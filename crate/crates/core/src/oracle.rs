//! Brute-force point counts by enumeration, used as ground truth.
//!
//! Field arithmetic is done on discrete logarithms with a Zech table, so a
//! product is an integer addition and a sum is one table lookup.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::parallel::map_range;
use crate::poly::{HomogPoly, SparsePoly};
use crate::primes::prime_factors;
use crate::ring::{embed_field, find_irreducible, fp, RingCtx, RingElem};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Largest field the tables are built for.
const MAX_FIELD: u64 = 1 << 24;

/// Log of zero.
pub const ZERO: u32 = u32::MAX;

/// `F_p[t]/(g)` with log, antilog and Zech tables. Elements are indexed by
/// their base-`p` coefficient digits, constant term first.
#[derive(Clone, Debug)]
pub struct SmallField {
    p: u64,
    size: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

impl SmallField {
    /// `g` must be monic irreducible over `F_p`.
    pub fn new(p: u64, g: &[u64]) -> Result<Self> {
        let degree = g.len() - 1;
        let size = (p as u128).pow(degree as u32);
        if size > MAX_FIELD as u128 {
            return Err(Error::TooLarge {
                what: "field elements",
                count: size.min(usize::MAX as u128) as usize,
                limit: MAX_FIELD as usize,
            });
        }
        let size = size as u64;
        let order = size - 1;
        let factors = prime_factors(order);
        let to_index = |a: &[u64]| a.iter().rev().fold(0u64, |acc, &d| acc * p + d);
        let from_index = |mut x: u64| {
            let mut out = Vec::with_capacity(degree);
            for _ in 0..degree {
                out.push(x % p);
                x /= p;
            }
            fp::trim(out)
        };
        let generator = (1..size)
            .map(from_index)
            .find(|c| {
                factors.iter().all(|&l| {
                    let e = BigUint::from(order / l);
                    fp::pow_mod_poly(c, &e, g, p) != [1]
                })
            })
            .ok_or_else(|| Error::Internal("no primitive element".into()))?;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![ZERO; size as usize];
        let mut cur = vec![1u64];
        for k in 0..order {
            let idx = to_index(&cur);
            exp.push(idx as u32);
            log[idx as usize] = k as u32;
            cur = fp::mul_mod_poly(&cur, &generator, g, p);
        }
        let zech = (0..order)
            .map(|k| {
                let x = exp[k as usize] as u64;
                let d0 = x % p;
                log[(x - d0 + (d0 + 1) % p) as usize]
            })
            .collect();
        Ok(SmallField {
            p,
            size,
            exp,
            log,
            zech,
        })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn order(&self) -> u64 {
        self.size - 1
    }

    pub fn log_of_index(&self, idx: u64) -> u32 {
        self.log[idx as usize]
    }

    pub fn index_of_log(&self, l: u32) -> u64 {
        if l == ZERO {
            0
        } else {
            self.exp[l as usize] as u64
        }
    }

    /// Log of an integer, reduced mod `p`.
    pub fn log_of_int(&self, c: &BigInt) -> u32 {
        let r = c.mod_floor(&BigInt::from(self.p)).to_u64().unwrap();
        self.log[r as usize]
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == ZERO || y == ZERO {
            return ZERO;
        }
        ((x as u64 + y as u64) % self.order()) as u32
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        if x == ZERO {
            return y;
        }
        if y == ZERO {
            return x;
        }
        let ord = self.order();
        let k = (y as u64 + ord - x as u64) % ord;
        let z = self.zech[k as usize];
        if z == ZERO {
            ZERO
        } else {
            ((x as u64 + z as u64) % ord) as u32
        }
    }
}

fn check_budget(base: u64, exponent: usize, budget: u128) -> Result<()> {
    let needed = (base as u128).checked_pow(exponent as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// `F_{q^r}` as a table field, with the embedding of the coefficients of `ctx`.
fn extension_for(ctx: &RingCtx, r: usize) -> Result<(SmallField, impl Fn(&RingElem) -> Result<u32>)> {
    let p = ctx.p();
    let g = find_irreducible(p, ctx.a() * r)?;
    let field = SmallField::new(p, &g)?;
    let src = ctx.with_lambda(1)?;
    let dst = RingCtx::new(p, ctx.a() * r, 1, &g)?;
    let emb = embed_field(&src, &dst)?;
    let logs = field.clone();
    let embed = move |c: &RingElem| -> Result<u32> {
        let c1 = src.elem(c.coeffs());
        let img = emb.apply(&c1);
        let digits = dst.to_fp(&img);
        let idx = digits.iter().rev().fold(0u64, |acc, &d| acc * p + d);
        Ok(logs.log_of_index(idx))
    };
    Ok((field, embed))
}

/// `|X(F_{q^r})|` for the torus hypersurface of `F mod p`, by enumerating
/// `(F_{q^r}^*)^{n+1}` and dividing by `q^r - 1`.
pub fn brute_count(ctx: &RingCtx, f: &HomogPoly<RingElem>, r: usize, budget: u128) -> Result<u64> {
    if r == 0 {
        return Err(Error::InvalidInput("r must be at least 1".into()));
    }
    let q_r = (ctx.p() as u128).checked_pow((ctx.a() * r) as u32).unwrap_or(u128::MAX);
    let needed = q_r.checked_pow(f.nvars() as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (field, embed) = extension_for(ctx, r)?;
    let ord = field.order();
    let nv = f.nvars();
    let mut terms: Vec<(Vec<u32>, u32)> = Vec::new();
    for (u, c) in f.terms(ctx) {
        let l = embed(&c)?;
        if l != ZERO {
            terms.push((u, l));
        }
    }
    let per_first = map_range(ord as usize, |e0| -> u64 {
        let mut digits = vec![0u64; nv];
        digits[0] = e0 as u64;
        let mut mon: Vec<u64> = terms
            .iter()
            .map(|(u, l)| (*l as u64 + u[0] as u64 * e0 as u64) % ord)
            .collect();
        let mut zeros = 0u64;
        loop {
            let mut acc = ZERO;
            for m in &mon {
                acc = field.add(acc, *m as u32);
            }
            if acc == ZERO {
                zeros += 1;
            }
            // advance the odometer over digits 1..nv; every digit that moves
            // changes its log by +1 mod ord, including on wrap-around
            let mut i = nv;
            loop {
                i -= 1;
                if i == 0 {
                    return zeros;
                }
                for (m, (u, _)) in mon.iter_mut().zip(&terms) {
                    *m = (*m + u[i] as u64) % ord;
                }
                digits[i] += 1;
                if digits[i] < ord {
                    break;
                }
                digits[i] = 0;
            }
        }
    });
    let total: u64 = per_first.iter().sum();
    if total % ord != 0 {
        return Err(Error::Internal(format!(
            "{total} torus solutions is not divisible by q^r - 1 = {ord}"
        )));
    }
    Ok(total / ord)
}

/// Number of points of `V(G_1, ..., G_k)` in affine `m`-space over `F_{p^r}`.
pub fn affine_count(p: u64, r: usize, gens: &[SparsePoly], budget: u128) -> Result<u64> {
    let m = gens.first().map(SparsePoly::nvars).unwrap_or(0);
    if gens.iter().any(|g| g.nvars() != m) {
        return Err(Error::InvalidInput("generators must share the variable count".into()));
    }
    let q = (p as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    let q64 = q.min(u64::MAX as u128) as u64;
    check_budget(q64, m, budget)?;
    let g = find_irreducible(p, r)?;
    let field = SmallField::new(p, &g)?;
    let ord = field.order();
    let polys: Vec<Vec<(Vec<u32>, u32)>> = gens
        .iter()
        .map(|g| {
            g.terms()
                .iter()
                .map(|(e, c)| (e.clone(), field.log_of_int(c)))
                .filter(|(_, l)| *l != ZERO)
                .collect()
        })
        .collect();
    // digit value ord stands for 0, anything below it is a log
    let vanishes = |x: &[u64]| {
        polys.iter().all(|poly| {
            let mut acc = ZERO;
            for (e, l) in poly {
                let mut t = *l as u64;
                let mut zero = false;
                for (xi, &ei) in x.iter().zip(e) {
                    if ei == 0 {
                        continue;
                    }
                    if *xi == ord {
                        zero = true;
                        break;
                    }
                    t = (t + xi * ei as u64) % ord;
                }
                if !zero {
                    acc = field.add(acc, t as u32);
                }
            }
            acc == ZERO
        })
    };
    if m == 0 {
        return Ok(vanishes(&[]) as u64);
    }
    let per_first = map_range(q64 as usize, |x0| -> u64 {
        let mut x = vec![0u64; m];
        x[0] = x0 as u64;
        let mut count = 0;
        loop {
            if vanishes(&x) {
                count += 1;
            }
            let mut i = m;
            loop {
                i -= 1;
                if i == 0 {
                    return count;
                }
                x[i] += 1;
                if x[i] <= ord {
                    break;
                }
                x[i] = 0;
            }
        }
    });
    Ok(per_first.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use num_traits::Zero;

    fn int_poly(ctx: &RingCtx, nvars: usize, d: usize, terms: &[(Vec<u32>, i64)]) -> HomogPoly<RingElem> {
        HomogPoly::from_int_terms(nvars, d, terms).unwrap().to_ring(ctx)
    }

    #[test]
    fn zech_arithmetic_matches_polynomials() {
        let g = find_irreducible(3, 2).unwrap();
        let f = SmallField::new(3, &g).unwrap();
        assert_eq!(f.size(), 9);
        for x in 0..9u64 {
            for y in 0..9u64 {
                let (lx, ly) = (f.log_of_index(x), f.log_of_index(y));
                let sum = (0..2).map(|i| ((x / 3u64.pow(i)) % 3 + (y / 3u64.pow(i)) % 3) % 3 * 3u64.pow(i)).sum::<u64>();
                assert_eq!(f.index_of_log(f.add(lx, ly)), sum);
            }
        }
        assert_eq!(f.log_of_int(&BigInt::from(-1)), f.log_of_index(2));
        assert_eq!(f.log_of_int(&BigInt::zero()), ZERO);
    }

    #[test]
    fn examples() {
        let ctx = RingCtx::prime_field(7, 1).unwrap();
        let zero = HomogPoly::zero(&ctx, 3, 1);
        assert_eq!(brute_count(&ctx, &zero, 1, DEFAULT_BUDGET).unwrap(), 36);
        let f = int_poly(&ctx, 3, 2, &[(vec![2, 0, 0], 1), (vec![0, 1, 1], 1)]);
        assert_eq!(brute_count(&ctx, &f, 1, DEFAULT_BUDGET).unwrap(), 6);
        let g = int_poly(&ctx, 2, 2, &[(vec![2, 0], 1), (vec![0, 2], -3)]);
        assert_eq!(brute_count(&ctx, &g, 1, DEFAULT_BUDGET).unwrap(), 0);
        assert_eq!(brute_count(&ctx, &g, 2, DEFAULT_BUDGET).unwrap(), 2);
        assert!(matches!(
            brute_count(&ctx, &f, 3, 1000),
            Err(Error::BudgetExceeded { budget: 1000, .. })
        ));
    }

    #[test]
    fn extension_coefficients() {
        // t·x0 + x1 over F_4: one torus point per F_{4^r}.
        let ctx = RingCtx::new(2, 2, 1, &[1, 1, 1]).unwrap();
        let f = HomogPoly::from_terms(&ctx, 2, 1, &[(vec![1, 0], ctx.gen()), (vec![0, 1], ctx.one())]).unwrap();
        for r in 1..=2 {
            assert_eq!(brute_count(&ctx, &f, r, DEFAULT_BUDGET).unwrap(), 1);
        }
    }

    #[test]
    fn invariant_under_permutation_and_scaling() {
        let ctx = RingCtx::prime_field(5, 1).unwrap();
        let f = int_poly(&ctx, 3, 2, &[(vec![2, 0, 0], 1), (vec![0, 1, 1], 2), (vec![1, 0, 1], 3)]);
        let g = int_poly(&ctx, 3, 2, &[(vec![0, 0, 2], 1), (vec![1, 1, 0], 2), (vec![1, 0, 1], 3)]);
        let h = int_poly(&ctx, 3, 2, &[(vec![2, 0, 0], 3), (vec![0, 1, 1], 6), (vec![1, 0, 1], 9)]);
        let c = brute_count(&ctx, &f, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(c, brute_count(&ctx, &g, 1, DEFAULT_BUDGET).unwrap());
        assert_eq!(c, brute_count(&ctx, &h, 1, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn affine_counts() {
        // x1 x2 + 1: x1 ≠ 0 free, x2 determined.
        let g = SparsePoly::from_i64(2, &[(vec![1, 1], 1), (vec![0, 0], 1)]).unwrap();
        for p in [5u64, 7] {
            assert_eq!(affine_count(p, 1, &[g.clone()], DEFAULT_BUDGET).unwrap(), p - 1);
            assert_eq!(affine_count(p, 2, &[g.clone()], DEFAULT_BUDGET).unwrap(), p * p - 1);
        }
        // y² = x³ - x over F_5 has 7 affine points.
        let e = SparsePoly::from_i64(2, &[(vec![0, 2], 1), (vec![3, 0], -1), (vec![1, 0], 1)]).unwrap();
        assert_eq!(affine_count(5, 1, &[e], DEFAULT_BUDGET).unwrap(), 7);
        let one = SparsePoly::from_i64(1, &[(vec![0], 1)]).unwrap();
        assert_eq!(affine_count(7, 1, &[one], DEFAULT_BUDGET).unwrap(), 0);
        let zero = SparsePoly::from_i64(0, &[]).unwrap();
        assert_eq!(affine_count(7, 1, &[zero], DEFAULT_BUDGET).unwrap(), 1);
    }
}
