use num_bigint::BigInt;
use proptest::prelude::*;

use arzeta::ms::Engine;
use arzeta::oracle::{affine_count, DEFAULT_BUDGET};
use arzeta::poly::SparsePoly;
use arzeta::scheme::{decompose, signed_count};

fn arb_generator(vars: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, vars), -3i64..=3), 1..=3)
        .prop_map(move |terms| SparsePoly::from_i64(vars, &terms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn signed_counts_match_enumeration(
        (vars, gens) in (1usize..=2).prop_flat_map(|vars| prop::collection::vec(arb_generator(vars), 1..=2).prop_map(move |g| (vars, g))),
        p in prop::sample::select(vec![2u64, 3, 5]),
        r in 1usize..=2,
    ) {
        let pieces = decompose(&gens).unwrap();
        let got = signed_count(&pieces, p, r, Engine::Linear).unwrap();
        let want = affine_count(p, r, &gens, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(got, BigInt::from(want), "vars = {}", vars);
    }
}
