//! Point counts on the torus from traces of the semilinear operators `A_{F^s}`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{mat_mul, trace, Matrix};
use crate::ms::{compute_ms, Engine, MsMatrix};
use crate::poly::{monomial_rank, HomogPoly};
use crate::ring::{pow_u, Ring, RingCtx, RingElem};

/// `φ(G) = Σ φ(G_u) x^{pu}`.
pub fn phi_poly(ctx: &RingCtx, g: &HomogPoly<RingElem>) -> HomogPoly<RingElem> {
    let p = ctx.p() as u32;
    let mut out = HomogPoly::zero(ctx, g.nvars(), g.degree() * p as usize);
    for (u, c) in g.terms(ctx) {
        let pu: Vec<u32> = u.iter().map(|e| e * p).collect();
        let idx = monomial_rank(g.n(), out.degree(), &pu).expect("pu has degree p·deg");
        out.coeffs_mut()[idx] = ctx.frobenius(&c, 1);
    }
    out
}

/// `ψ(G) = Σ φ^{-1}(G_{pu}) x^u`. When `p` does not divide the degree the
/// result is the zero polynomial of degree `⌊deg / p⌋`.
pub fn psi_poly(ctx: &RingCtx, g: &HomogPoly<RingElem>) -> HomogPoly<RingElem> {
    let p = ctx.p() as u32;
    let mut out = HomogPoly::zero(ctx, g.nvars(), g.degree() / p as usize);
    if g.degree() % p as usize != 0 {
        return out;
    }
    let back = ctx.a() - 1;
    for (u, c) in g.terms(ctx) {
        if u.iter().all(|e| e % p == 0) {
            let v: Vec<u32> = u.iter().map(|e| e / p).collect();
            let idx = monomial_rank(g.n(), out.degree(), &v).expect("u/p has degree deg/p");
            out.coeffs_mut()[idx] = ctx.frobenius(&c, back);
        }
    }
    out
}

/// `M_s` by expanding `F^{(p-1)s}`; the reference all other engines are checked against.
pub fn build_ms_reference(ctx: &RingCtx, f: &HomogPoly<RingElem>, s: usize) -> Result<MsMatrix> {
    crate::ms::ms_naive(ctx, f, s)
}

pub fn frobenius_matrix(ctx: &RingCtx, m: &Matrix<RingElem>, j: usize) -> Matrix<RingElem> {
    if j % ctx.a() == 0 {
        return m.clone();
    }
    m.map(|x| ctx.frobenius(x, j))
}

/// `φ^{a-1}(M) ... φ(M) M` by twisted binary powering:
/// with `N_j = φ^{j-1}(M) ... M`, `N_{2j} = φ^j(N_j) N_j` and `N_{j+1} = φ^j(M) N_j`.
pub fn semilinear_product(ctx: &RingCtx, m: &Matrix<RingElem>) -> Matrix<RingElem> {
    let a = ctx.a();
    if a == 1 {
        return m.clone();
    }
    let mut n = m.clone();
    let mut j = 1usize;
    for bit in (0..usize::BITS - 1 - a.leading_zeros()).rev() {
        n = mat_mul(ctx, &frobenius_matrix(ctx, &n, j), &n);
        j *= 2;
        if (a >> bit) & 1 == 1 {
            n = mat_mul(ctx, &frobenius_matrix(ctx, m, j), &n);
            j += 1;
        }
    }
    debug_assert_eq!(j, a);
    n
}

/// `[tr(M^r)]` for `r = 1..=r_max`. With `k = ⌈√r_max⌉` this forms
/// `M, ..., M^k` and `G = M^k, G^2, ...`, and reads `tr(G^j M^i)` off the
/// entrywise products, so about `2√r_max` matrix products are needed.
pub fn traces_of_powers<R: Ring>(ring: &R, m: &Matrix<R::Elem>, r_max: usize) -> Vec<R::Elem> {
    if r_max == 0 {
        return Vec::new();
    }
    let k = crate::interval::ceil_sqrt(r_max as u64) as usize;
    let mut baby = vec![m.clone()];
    for _ in 1..k {
        baby.push(mat_mul(ring, baby.last().unwrap(), m));
    }
    let mut giant = vec![baby[k - 1].clone()];
    for _ in 1..(r_max - 1) / k {
        giant.push(mat_mul(ring, giant.last().unwrap(), &giant[0]));
    }
    (1..=r_max)
        .map(|r| {
            let j = (r - 1) / k;
            let a = &baby[r - j * k - 1];
            if j == 0 {
                return trace(ring, a);
            }
            let g = &giant[j - 1];
            let dim = a.rows();
            ring.sum_of_products((0..dim).flat_map(|u| (0..dim).map(move |v| (g.get(u, v), a.get(v, u)))))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaVector {
    pub lambda: u32,
    pub tau: u32,
    /// `α_0 .. α_{λ+τ-1}` as integers.
    pub exact: Vec<BigInt>,
    /// The same, reduced to `[0, p^λ)`.
    pub alphas: Vec<BigUint>,
}

/// `C(x, t) = x(x-1)...(x-t+1) / t!` for any integer `x`.
pub fn generalized_binomial(x: &BigInt, t: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..t {
        num *= x - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

/// `α_s = (-1)^s Σ_{t<τ} C(-λ, t) C(λ, s-t)` for `0 <= s <= λ+τ-1`.
pub fn alpha_coeffs(p: u64, lambda: u32, tau: u32) -> Result<AlphaVector> {
    if lambda == 0 || tau == 0 {
        return Err(Error::InvalidInput("λ and τ must be positive".into()));
    }
    let lam = BigInt::from(lambda);
    let neg: Vec<BigInt> = (0..tau).map(|t| generalized_binomial(&-lam.clone(), t)).collect();
    let modulus = BigInt::from(pow_u(p, lambda));
    let mut exact = Vec::new();
    let mut alphas = Vec::new();
    for s in 0..lambda + tau {
        let mut acc = BigInt::zero();
        for t in 0..tau.min(s + 1) {
            if s - t <= lambda {
                acc += &neg[t as usize] * generalized_binomial(&lam, s - t);
            }
        }
        if s % 2 == 1 {
            acc = -acc;
        }
        alphas.push(acc.mod_floor(&modulus).to_biguint().unwrap());
        exact.push(acc);
    }
    Ok(AlphaVector {
        lambda,
        tau,
        exact,
        alphas,
    })
}

/// `τ = ⌈λ / ((p-1) a r)⌉`.
pub fn tau_for(p: u64, a: usize, lambda: u32, r: usize) -> u32 {
    let den = (p - 1) * a as u64 * r as u64;
    (lambda as u64).div_ceil(den) as u32
}

/// Re-reads the canonical coefficients of `f` in another context.
pub fn lift_poly(f: &HomogPoly<RingElem>, to: &RingCtx) -> HomogPoly<RingElem> {
    f.map(|c| to.elem(c.coeffs()))
}

fn check_degree(ctx: &RingCtx, f: &HomogPoly<RingElem>) -> Result<()> {
    if f.degree() as u64 % ctx.p() == 0 {
        return Err(Error::PrimeDividesDegree {
            p: ctx.p(),
            d: f.degree(),
        });
    }
    Ok(())
}

/// `|X(F_{q^r})| mod p^λ` for `r = 1..=r_max` at `λ = ctx.lambda()`, with
/// `M_s` supplied by `ms_for(s)` for `s = 1 .. λ+τ(1)-1`.
pub fn point_counts_with<M>(ctx: &RingCtx, f: &HomogPoly<RingElem>, r_max: usize, mut ms_for: M) -> Result<Vec<BigUint>>
where
    M: FnMut(usize) -> Result<MsMatrix>,
{
    check_degree(ctx, f)?;
    if r_max == 0 {
        return Ok(Vec::new());
    }
    let (p, a, lambda) = (ctx.p(), ctx.a(), ctx.lambda());
    let alphas: Vec<AlphaVector> = (1..=r_max)
        .map(|r| alpha_coeffs(p, lambda, tau_for(p, a, lambda, r)))
        .collect::<Result<_>>()?;
    let s_max = alphas[0].alphas.len() - 1;
    let mut sums: Vec<RingElem> = alphas.iter().map(|al| ctx.elem(&[al.alphas[0].clone()])).collect();
    for s in 1..=s_max {
        let needed = alphas
            .iter()
            .take_while(|al| s < al.alphas.len())
            .any(|al| !al.alphas[s].is_zero());
        if !needed {
            continue;
        }
        let ms = ms_for(s)?;
        let r_here = alphas.iter().take_while(|al| s < al.alphas.len()).count();
        let ma = semilinear_product(ctx, &ms.entries);
        let traces = traces_of_powers(ctx, &ma, r_here);
        for (r, tr) in traces.iter().enumerate() {
            let coef = ctx.elem(&[alphas[r].alphas[s].clone()]);
            ctx.mul_add_assign(&mut sums[r], &coef, tr);
        }
    }
    let modulus = ctx.modulus();
    let q = ctx.q();
    sums.iter()
        .enumerate()
        .map(|(i, sum)| {
            let total = ctx
                .as_constant(sum)
                .ok_or_else(|| Error::Internal(format!("trace sum for r = {} is not in Z_p", i + 1)))?;
            let torus = (num_traits::pow(q.clone(), i + 1) - 1u32).modpow(&BigUint::from(f.n()), modulus);
            Ok(total * torus % modulus)
        })
        .collect()
}

/// `|X(F_{q^r})| mod p^λ` with `λ = ctx.lambda()`.
pub fn point_count_mod(ctx: &RingCtx, f: &HomogPoly<RingElem>, r: usize, engine: Engine) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::InvalidInput("r must be at least 1".into()));
    }
    // Only the r-th count is wanted, so build it directly from the r-th alphas.
    check_degree(ctx, f)?;
    let (p, a, lambda) = (ctx.p(), ctx.a(), ctx.lambda());
    let al = alpha_coeffs(p, lambda, tau_for(p, a, lambda, r))?;
    let mut sum = ctx.elem(&[al.alphas[0].clone()]);
    for s in 1..al.alphas.len() {
        if al.alphas[s].is_zero() {
            continue;
        }
        let ms = compute_ms(engine, ctx, f, s)?;
        let ma = semilinear_product(ctx, &ms.entries);
        let tr = traces_of_powers(ctx, &ma, r).pop().unwrap();
        ctx.mul_add_assign(&mut sum, &ctx.elem(&[al.alphas[s].clone()]), &tr);
    }
    let total = ctx
        .as_constant(&sum)
        .ok_or_else(|| Error::Internal("trace sum is not in Z_p".into()))?;
    let modulus = ctx.modulus();
    let torus = (num_traits::pow(ctx.q(), r) - 1u32).modpow(&BigUint::from(f.n()), modulus);
    Ok(total * torus % modulus)
}

/// The smallest `λ` with `p^λ > q^{nr}`.
pub fn exact_precision(a: usize, n: usize, r: usize) -> u32 {
    (n * a * r + 1) as u32
}

/// `|X(F_{q^r})|` exactly, computed at `λ = n a r + 1`.
pub fn point_count_exact(ctx: &RingCtx, f: &HomogPoly<RingElem>, r: usize, engine: Engine) -> Result<BigUint> {
    let ctx_r = ctx.with_lambda(exact_precision(ctx.a(), f.n(), r))?;
    point_count_mod(&ctx_r, &lift_poly(f, &ctx_r), r, engine)
}

/// Exact counts for `r = 1..=r_max`, all at the precision needed for `r_max`.
pub fn point_counts_exact(ctx: &RingCtx, f: &HomogPoly<RingElem>, r_max: usize, engine: Engine) -> Result<Vec<BigUint>> {
    let ctx_r = ctx.with_lambda(exact_precision(ctx.a(), f.n(), r_max.max(1)))?;
    let f_r = lift_poly(f, &ctx_r);
    point_counts_with(&ctx_r, &f_r, r_max, |s| compute_ms(engine, &ctx_r, &f_r, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{hp_mul, hp_pow};
    use crate::ring::find_irreducible;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_elem(ctx: &RingCtx, rng: &mut ChaCha8Rng) -> RingElem {
        let m = ctx.modulus().clone();
        let c: Vec<BigUint> = (0..ctx.a()).map(|_| BigUint::from(rng.gen::<u64>()) % &m).collect();
        ctx.elem(&c)
    }

    fn random_poly(ctx: &RingCtx, nvars: usize, d: usize, rng: &mut ChaCha8Rng) -> HomogPoly<RingElem> {
        let mut f = HomogPoly::zero(ctx, nvars, d);
        for c in f.coeffs_mut() {
            *c = random_elem(ctx, rng);
        }
        f
    }

    fn int_poly(ctx: &RingCtx, nvars: usize, d: usize, terms: &[(Vec<u32>, i64)]) -> HomogPoly<RingElem> {
        HomogPoly::from_int_terms(nvars, d, terms).unwrap().to_ring(ctx)
    }

    #[test]
    fn phi_on_f4() {
        let ctx = RingCtx::new(2, 2, 1, &[1, 1, 1]).unwrap();
        let g = HomogPoly::from_terms(&ctx, 1, 1, &[(vec![1], ctx.gen())]).unwrap();
        let img = phi_poly(&ctx, &g);
        assert_eq!(*img.coeff(&[2]), ctx.add(&ctx.gen(), &ctx.one()));
    }

    #[test]
    fn psi_left_inverse_and_vanishing() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, a) in [(2u64, 2usize), (3, 1), (3, 3), (5, 2)] {
            let ctx = RingCtx::new(p, a, 3, &find_irreducible(p, a).unwrap()).unwrap();
            let g = random_poly(&ctx, 3, 2, &mut rng);
            assert_eq!(psi_poly(&ctx, &phi_poly(&ctx, &g)), g);
        }
        let ctx = RingCtx::prime_field(3, 2).unwrap();
        let g = int_poly(&ctx, 2, 3, &[(vec![2, 1], 1)]);
        assert!(psi_poly(&ctx, &g).is_zero(&ctx));
    }

    #[test]
    fn columns_of_ms_are_frobenius_twisted_images() {
        // A_{F^s} x^u = ψ(F^{(p-1)s} x^u) = φ^{-1}(column u of M_s).
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ctx = RingCtx::new(3, 2, 2, &find_irreducible(3, 2).unwrap()).unwrap();
        let f = random_poly(&ctx, 2, 2, &mut rng);
        let s = 2;
        let ms = build_ms_reference(&ctx, &f, s).unwrap();
        let big = hp_pow(&ctx, &f, 2 * s as u64);
        let b = crate::poly::basis(1, 2 * s);
        for (j, u) in b.iter().enumerate() {
            let xu = HomogPoly::from_terms(&ctx, 2, u.iter().sum::<u32>() as usize, &[(u.clone(), ctx.one())]).unwrap();
            let image = psi_poly(&ctx, &hp_mul(&ctx, &big, &xu).unwrap());
            for i in 0..b.len() {
                assert_eq!(image.coeffs()[i], ctx.frobenius(ms.entries.get(i, j), 1));
            }
        }
    }

    fn random_matrix(ctx: &RingCtx, m: usize, rng: &mut ChaCha8Rng) -> Matrix<RingElem> {
        Matrix::from_fn(m, m, |_, _| random_elem(ctx, rng))
    }

    #[test]
    fn semilinear_product_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for a in 1..=5usize {
            let ctx = RingCtx::new(2, a, 3, &find_irreducible(2, a).unwrap()).unwrap();
            let m = random_matrix(&ctx, 3, &mut rng);
            let mut direct = m.clone();
            for j in 1..a {
                direct = mat_mul(&ctx, &frobenius_matrix(&ctx, &m, j), &direct);
            }
            assert_eq!(semilinear_product(&ctx, &m), direct, "a={a}");
        }
        let ctx = RingCtx::new(3, 2, 2, &find_irreducible(3, 2).unwrap()).unwrap();
        let m = Matrix::from_fn(2, 2, |i, j| ctx.from_u64((3 * i + j + 1) as u64));
        assert_eq!(semilinear_product(&ctx, &m), mat_mul(&ctx, &m, &m));
    }

    #[test]
    fn traces_examples() {
        let ctx = RingCtx::prime_field(5, 2).unwrap();
        let m = Matrix::from_rows(vec![vec![ctx.from_u64(2)]]);
        let want: Vec<_> = [2, 4, 8].iter().map(|&x| ctx.from_u64(x)).collect();
        assert_eq!(traces_of_powers(&ctx, &m, 3), want);
        let id = Matrix::identity(&ctx, 4);
        assert_eq!(traces_of_powers(&ctx, &id, 3), vec![ctx.from_u64(4); 3]);

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let ctx = RingCtx::prime_field(7, 2).unwrap();
        let m = random_matrix(&ctx, 3, &mut rng);
        let tr = traces_of_powers(&ctx, &m, 11);
        for r in 1..=11 {
            let mut pw = Matrix::identity(&ctx, 3);
            for _ in 0..r {
                pw = mat_mul(&ctx, &m, &pw);
            }
            assert_eq!(tr[r - 1], trace(&ctx, &pw));
        }
    }

    #[test]
    fn alpha_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(alpha_coeffs(7, 3, 1).unwrap().exact, ints(&[1, -3, 3, -1]));
        assert_eq!(alpha_coeffs(7, 1, 2).unwrap().exact, ints(&[1, 0, -1]));
        assert_eq!(alpha_coeffs(7, 1, 1).unwrap().exact, ints(&[1, -1]));
        assert_eq!(alpha_coeffs(5, 1, 1).unwrap().alphas, vec![BigUint::from(1u32), BigUint::from(4u32)]);
        assert!(alpha_coeffs(5, 0, 1).is_err());
    }

    #[test]
    fn alpha_matches_generating_function() {
        // α_s is the coefficient of H^s in (1-H)^λ Σ_{t<τ} (-1)^t C(-λ,t) H^t.
        for lambda in 1..=5u32 {
            for tau in 1..=4u32 {
                let mut one_minus = vec![BigInt::one()];
                for _ in 0..lambda {
                    let mut next = vec![BigInt::zero(); one_minus.len() + 1];
                    for (i, c) in one_minus.iter().enumerate() {
                        next[i] += c;
                        next[i + 1] -= c;
                    }
                    one_minus = next;
                }
                let series: Vec<BigInt> = (0..tau)
                    .map(|t| {
                        let c = generalized_binomial(&BigInt::from(-(lambda as i64)), t);
                        if t % 2 == 1 {
                            -c
                        } else {
                            c
                        }
                    })
                    .collect();
                let mut j = vec![BigInt::zero(); one_minus.len() + series.len() - 1];
                for (i, x) in one_minus.iter().enumerate() {
                    for (k, y) in series.iter().enumerate() {
                        j[i + k] += x * y;
                    }
                }
                let al = alpha_coeffs(3, lambda, tau).unwrap();
                for (s, c) in j.iter().enumerate() {
                    assert_eq!(al.exact[s], *c, "λ={lambda} τ={tau} s={s}");
                }
                // J ≡ 1 mod H^τ: the low coefficients beyond the constant vanish.
                for s in 1..tau as usize {
                    assert!(j[s].is_zero());
                }
            }
        }
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau_for(5, 1, 16, 1), 4);
        assert_eq!(tau_for(7, 2, 3, 1), 1);
        assert_eq!(tau_for(3, 1, 5, 2), 2);
    }

    #[test]
    fn count_examples() {
        let ctx = RingCtx::prime_field(7, 1).unwrap();
        let zero = HomogPoly::zero(&ctx, 3, 1);
        assert_eq!(point_count_mod(&ctx, &zero, 1, Engine::Linear).unwrap(), BigUint::from(1u32));
        let zero1 = HomogPoly::zero(&ctx, 2, 1);
        assert_eq!(point_count_exact(&ctx, &zero1, 2, Engine::Linear).unwrap(), BigUint::from(48u32));

        let f = int_poly(&ctx, 2, 2, &[(vec![2, 0], 1), (vec![0, 2], -2)]);
        assert_eq!(point_count_mod(&ctx, &f, 1, Engine::Naive).unwrap(), BigUint::from(2u32));
        let g = int_poly(&ctx, 2, 2, &[(vec![2, 0], 1), (vec![0, 2], -3)]);
        for engine in Engine::ALL {
            assert_eq!(point_count_exact(&ctx, &g, 1, engine).unwrap(), BigUint::zero());
            assert_eq!(point_count_exact(&ctx, &g, 2, engine).unwrap(), BigUint::from(2u32));
        }
        let ctx5 = RingCtx::prime_field(5, 1).unwrap();
        let lin = int_poly(&ctx5, 2, 1, &[(vec![1, 0], 1), (vec![0, 1], -1)]);
        assert_eq!(
            point_counts_exact(&ctx5, &lin, 3, Engine::Sqrt).unwrap(),
            vec![BigUint::one(); 3]
        );
    }

    #[test]
    fn prime_dividing_degree_is_rejected() {
        let ctx = RingCtx::prime_field(2, 1).unwrap();
        let f = int_poly(&ctx, 2, 2, &[(vec![1, 1], 1)]);
        assert_eq!(
            point_count_mod(&ctx, &f, 1, Engine::Naive).unwrap_err().kind(),
            "prime_divides_degree"
        );
    }

    #[test]
    fn counts_do_not_depend_on_the_lift() {
        let ctx = RingCtx::prime_field(5, 3).unwrap();
        let f = int_poly(&ctx, 2, 2, &[(vec![2, 0], 1), (vec![1, 1], 3), (vec![0, 2], 2)]);
        let g = int_poly(&ctx, 2, 2, &[(vec![2, 0], 6), (vec![1, 1], -2), (vec![0, 2], 27)]);
        let cf = point_count_mod(&ctx, &f, 1, Engine::Linear).unwrap();
        let cg = point_count_mod(&ctx, &g, 1, Engine::Linear).unwrap();
        assert_eq!(cf, cg);
    }
}
