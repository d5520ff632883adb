//! A quick cross-engine grid: every engine must give the same `M_s`, the
//! all-primes engine must agree at each prime, and exact counts must match
//! enumeration.

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use arzeta::forest::ms_all_primes;
use arzeta::ms::{compute_ms, Engine};
use arzeta::oracle::{brute_count, DEFAULT_BUDGET};
use arzeta::poly::{basis, HomogPoly};
use arzeta::ring::find_irreducible;
use arzeta::trace::point_count_exact;
use arzeta::{IntegerRing, RingCtx};

use crate::job::CliResult;

const PRIMES: [u64; 3] = [3, 5, 7];

fn random_int_poly(n: usize, d: usize, rng: &mut ChaCha8Rng) -> HomogPoly<BigInt> {
    let terms: Vec<(Vec<u32>, BigInt)> = basis(n, d)
        .into_iter()
        .map(|e| (e, BigInt::from(rng.gen_range(-6i64..=6))))
        .collect();
    HomogPoly::from_terms(&IntegerRing, n + 1, d, &terms).expect("exponents come from the basis")
}

pub fn run(seed: u64) -> CliResult<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = 0u64;
    let mut checks = 0u64;
    let mut failures: Vec<Value> = Vec::new();
    for a in [1usize, 2] {
        for n in [1usize, 2] {
            for d in [1usize, 2, 3] {
                for s in [1usize, 2] {
                    for lambda in [1u32, 2] {
                        let f_int = random_int_poly(n, d, &mut rng);
                        for p in PRIMES {
                            if d as u64 % p == 0 {
                                continue;
                            }
                            cells += 1;
                            let fbar = find_irreducible(p, a)?;
                            let ctx = RingCtx::new(p, a, lambda, &fbar)?;
                            // extension cells get a coefficient involving t
                            let mut f = f_int.to_ring(&ctx);
                            if a > 1 {
                                let c = &mut f.coeffs_mut()[0];
                                *c = ctx.elem(&[c.coeffs()[0].clone(), BigUint::from(1u32)]);
                            }
                            let reference = compute_ms(Engine::Naive, &ctx, &f, s)?;
                            for engine in [Engine::Linear, Engine::Sqrt] {
                                checks += 1;
                                if compute_ms(engine, &ctx, &f, s)? != reference {
                                    failures.push(json!({"p": p, "a": a, "n": n, "d": d, "s": s, "lambda": lambda, "engine": engine.name()}));
                                }
                            }
                            if n == 1 && s == 1 && lambda == 1 {
                                checks += 1;
                                let exact = point_count_exact(&ctx, &f, 1, Engine::Linear)?;
                                if exact != BigUint::from(brute_count(&ctx, &f, 1, DEFAULT_BUDGET)?) {
                                    failures.push(json!({"p": p, "a": a, "n": n, "d": d, "check": "count"}));
                                }
                            }
                        }
                        if a == 1 {
                            let all = ms_all_primes(&f_int, s, 8, lambda)?;
                            for (p, m) in &all.ms {
                                checks += 1;
                                let ctx = RingCtx::prime_field(*p, lambda)?;
                                if *m != compute_ms(Engine::Naive, &ctx, &f_int.to_ring(&ctx), s)? {
                                    failures.push(json!({"p": p, "n": n, "d": d, "s": s, "lambda": lambda, "engine": "art"}));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(json!({
        "seed": seed,
        "cells": cells,
        "checks": checks,
        "mismatches": failures.len(),
        "failures": failures,
    }))
}
