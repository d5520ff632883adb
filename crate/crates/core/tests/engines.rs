use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use arzeta::forest::ms_all_primes;
use arzeta::ms::{compute_ms, Engine};
use arzeta::oracle::{brute_count, DEFAULT_BUDGET};
use arzeta::poly::{basis_size, HomogPoly};
use arzeta::ring::find_irreducible;
use arzeta::trace::{point_count_exact, point_count_mod, semilinear_product, traces_of_powers};
use arzeta::{IntegerRing, RingCtx, RingElem};

fn int_poly(n: usize, d: usize, coeffs: &[i64]) -> HomogPoly<BigInt> {
    let c = coeffs.iter().take(basis_size(n, d)).map(|&x| BigInt::from(x)).collect();
    HomogPoly::from_coeffs(n + 1, d, c).unwrap()
}

fn over(ctx: &RingCtx, f: &HomogPoly<BigInt>, twist: u64) -> HomogPoly<RingElem> {
    let mut g = f.to_ring(ctx);
    if ctx.a() > 1 {
        // put some t-dependence into the leading coefficient
        let c = &mut g.coeffs_mut()[0];
        *c = ctx.elem(&[c.coeffs()[0].clone(), BigUint::from(twist)]);
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn engines_agree(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        a in 1usize..=2,
        n in 1usize..=2,
        d in 1usize..=3,
        s in 1usize..=2,
        lambda in 1u32..=3,
        twist in 0u64..5,
        coeffs in prop::collection::vec(-1000i64..1000, 10),
    ) {
        prop_assume!(d as u64 % p != 0);
        let ctx = RingCtx::new(p, a, lambda, &find_irreducible(p, a).unwrap()).unwrap();
        let f = over(&ctx, &int_poly(n, d, &coeffs), twist);
        let naive = compute_ms(Engine::Naive, &ctx, &f, s).unwrap();
        prop_assert_eq!(&compute_ms(Engine::Linear, &ctx, &f, s).unwrap(), &naive);
        prop_assert_eq!(&compute_ms(Engine::Sqrt, &ctx, &f, s).unwrap(), &naive);
        // traces of the a-fold product only see M_s
        let t = traces_of_powers(&ctx, &semilinear_product(&ctx, &naive.entries), 2);
        let u = traces_of_powers(&ctx, &semilinear_product(&ctx, &compute_ms(Engine::Sqrt, &ctx, &f, s).unwrap().entries), 2);
        prop_assert_eq!(t, u);
    }

    #[test]
    fn all_primes_agree_with_single_prime(
        n in 1usize..=2,
        d in 1usize..=3,
        s in 1usize..=2,
        lambda in 1u32..=2,
        coeffs in prop::collection::vec(-1000i64..1000, 10),
    ) {
        let f = int_poly(n, d, &coeffs);
        let all = ms_all_primes(&f, s, 12, lambda).unwrap();
        for p in [2u64, 3, 5, 7, 11] {
            let divides = d as u64 % p == 0;
            prop_assert_eq!(all.skipped.contains(&p), divides);
            if divides {
                continue;
            }
            let ctx = RingCtx::prime_field(p, lambda).unwrap();
            prop_assert_eq!(&all.ms[&p], &compute_ms(Engine::Linear, &ctx, &f.to_ring(&ctx), s).unwrap());
        }
        prop_assert!(all.max_norm_bits <= all.max_bound_bits);
    }

    #[test]
    fn counts_match_enumeration(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        a in 1usize..=2,
        n in 1usize..=2,
        d in 1usize..=3,
        twist in 0u64..5,
        coeffs in prop::collection::vec(-1000i64..1000, 10),
    ) {
        prop_assume!(d as u64 % p != 0);
        let ctx = RingCtx::new(p, a, 1, &find_irreducible(p, a).unwrap()).unwrap();
        let f = over(&ctx, &int_poly(n, d, &coeffs), twist);
        let brute = brute_count(&ctx, &f, 1, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(point_count_exact(&ctx, &f, 1, Engine::Linear).unwrap(), BigUint::from(brute));
        let ctx2 = ctx.with_lambda(2).unwrap();
        let f2 = f.map(|c| ctx2.elem(c.coeffs()));
        prop_assert_eq!(
            point_count_mod(&ctx2, &f2, 1, Engine::Sqrt).unwrap(),
            BigUint::from(brute) % BigUint::from(p * p)
        );
    }
}

#[test]
fn integer_lift_is_the_identity_ring_map() {
    let f = int_poly(1, 2, &[3, -4, 5]);
    let back = f.to_ring(&IntegerRing);
    assert_eq!(back, f);
}
