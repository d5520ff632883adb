//! Packing of non-negative integers into fixed-width bit slots of one big
//! integer, for Kronecker-style products.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};

/// Pack `values[i]` at bit offset `i * slot`. Every value must fit in `slot` bits.
pub(crate) fn pack<'a>(values: impl ExactSizeIterator<Item = &'a BigUint>, slot: u64) -> BigUint {
    let count = values.len() as u64;
    let words = ((count * slot).div_ceil(64) + 1) as usize;
    let mut limbs = vec![0u64; words];
    for (i, v) in values.enumerate() {
        let mut bit = i as u64 * slot;
        for digit in v.iter_u64_digits() {
            let (w, off) = ((bit / 64) as usize, bit % 64);
            limbs[w] |= digit << off;
            if off != 0 {
                limbs[w + 1] |= digit >> (64 - off);
            }
            bit += 64;
        }
    }
    let mut digits = Vec::with_capacity(2 * words);
    for l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

/// Inverse of [`pack`]: the first `count` slots of `x`.
pub(crate) fn unpack(x: &BigUint, slot: u64, count: usize) -> Vec<BigUint> {
    let limbs: Vec<u64> = x.iter_u64_digits().collect();
    let get = |w: usize| limbs.get(w).copied().unwrap_or(0);
    let slot_words = slot.div_ceil(64) as usize;
    (0..count)
        .map(|i| {
            let start = i as u64 * slot;
            let mut out = Vec::with_capacity(slot_words * 2);
            let mut remaining = slot;
            let mut bit = start;
            while remaining > 0 {
                let (w, off) = ((bit / 64) as usize, bit % 64);
                let mut word = get(w) >> off;
                if off != 0 {
                    word |= get(w + 1) << (64 - off);
                }
                let take = remaining.min(64);
                if take < 64 {
                    word &= (1u64 << take) - 1;
                }
                out.push(word as u32);
                out.push((word >> 32) as u32);
                remaining -= take;
                bit += take;
            }
            BigUint::new(out)
        })
        .collect()
}

/// `Σ values[i] 2^{i·slot}` for signed values; every `|values[i]|` must be
/// below `2^{slot-1}`.
pub(crate) fn pack_signed(values: &[BigInt], slot: u64) -> BigInt {
    let zero = BigUint::zero();
    let part = |want: Sign| {
        pack(
            values.iter().map(|v| if v.sign() == want { v.magnitude() } else { &zero }),
            slot,
        )
    };
    BigInt::from(part(Sign::Plus)) - BigInt::from(part(Sign::Minus))
}

/// The first `count` signed digits of `x` in base `2^slot`, each assumed to
/// lie in `[-2^{slot-1}, 2^{slot-1})`. Higher digits are ignored.
pub(crate) fn unpack_signed(x: &BigInt, slot: u64, count: usize) -> Vec<BigInt> {
    let width = slot * count as u64;
    let low = if x.is_negative() {
        let m = BigUint::one_shl(width);
        let r = x.magnitude() % &m;
        if r.is_zero() { r } else { m - r }
    } else {
        x.magnitude() & (BigUint::one_shl(width) - 1u32)
    };
    let half = BigUint::one_shl(slot - 1);
    let bias = pack(std::iter::repeat_n(&half, count), slot);
    let digits = unpack(&((low + bias) & (BigUint::one_shl(width) - 1u32)), slot, count);
    let half = BigInt::from(half);
    digits.into_iter().map(|d| BigInt::from(d) - &half).collect()
}

trait OneShl {
    fn one_shl(bits: u64) -> Self;
}

impl OneShl for BigUint {
    fn one_shl(bits: u64) -> Self {
        BigUint::from(1u32) << bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn roundtrip(vals in proptest::collection::vec(any::<u128>(), 0..20), extra in 0u64..70) {
            let slot = 128 + extra;
            let big: Vec<BigUint> = vals.iter().map(|&v| BigUint::from(v)).collect();
            let packed = pack(big.iter(), slot);
            prop_assert_eq!(unpack(&packed, slot, big.len()), big);
        }

        #[test]
        fn signed_roundtrip(vals in proptest::collection::vec(any::<i64>(), 1..20), extra in 1u64..70) {
            let slot = 64 + extra;
            let big: Vec<BigInt> = vals.iter().map(|&v| BigInt::from(v)).collect();
            prop_assert_eq!(unpack_signed(&pack_signed(&big, slot), slot, big.len()), big.clone());
            let prefix = big.len() / 2;
            prop_assert_eq!(unpack_signed(&pack_signed(&big, slot), slot, prefix), big[..prefix].to_vec());
        }

        #[test]
        fn small_slots(vals in proptest::collection::vec(0u32..128, 0..50)) {
            let big: Vec<BigUint> = vals.iter().map(|&v| BigUint::from(v)).collect();
            let packed = pack(big.iter(), 7);
            prop_assert_eq!(unpack(&packed, 7, big.len()), big);
        }
    }
}
