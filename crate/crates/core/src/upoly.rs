//! Univariate polynomials over a [`Ring`] as plain coefficient vectors
//! (ascending). Vectors are not required to be trimmed; the empty vector is 0.

use crate::ring::Ring;

const KARATSUBA_CUTOFF: usize = 24;

pub fn trim<R: Ring>(ring: &R, mut a: Vec<R::Elem>) -> Vec<R::Elem> {
    while a.last().is_some_and(|c| ring.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn add<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, x) in out.iter_mut().zip(short) {
        ring.add_assign(o, x);
    }
    out
}

pub fn sub<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    let z = ring.zero();
    (0..n)
        .map(|i| ring.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect()
}

pub(crate) fn schoolbook<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    (0..a.len() + b.len() - 1)
        .map(|k| {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            ring.sum_of_products(
                (lo..=hi)
                    .map(|i| (&a[i], &b[k - i]))
                    .filter(|(x, y)| !ring.is_zero(x) && !ring.is_zero(y)),
            )
        })
        .collect()
}

/// Product, by Karatsuba above a small cutoff.
pub fn mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if let Some(out) = ring.poly_mul(a, b) {
        return out;
    }
    if a.len().min(b.len()) <= KARATSUBA_CUTOFF {
        return schoolbook(ring, a, b);
    }
    let h = a.len().max(b.len()) / 2;
    let split = |p: &[R::Elem]| -> (Vec<R::Elem>, Vec<R::Elem>) {
        if p.len() <= h {
            (p.to_vec(), Vec::new())
        } else {
            (p[..h].to_vec(), p[h..].to_vec())
        }
    };
    let (a0, a1) = split(a);
    let (b0, b1) = split(b);
    let z0 = mul(ring, &a0, &b0);
    let z2 = mul(ring, &a1, &b1);
    let z1 = mul(ring, &add(ring, &a0, &a1), &add(ring, &b0, &b1));
    let mid = sub(ring, &sub(ring, &z1, &z0), &z2);
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, c) in z0.iter().enumerate() {
        ring.add_assign(&mut out[i], c);
    }
    for (i, c) in mid.iter().enumerate() {
        if i + h < out.len() {
            ring.add_assign(&mut out[i + h], c);
        }
    }
    for (i, c) in z2.iter().enumerate() {
        if i + 2 * h < out.len() {
            ring.add_assign(&mut out[i + 2 * h], c);
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` (`m.last()` must be one).
pub fn rem_monic<R: Ring>(ring: &R, a: &[R::Elem], m: &[R::Elem]) -> Vec<R::Elem> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return r;
    }
    for k in (dm..r.len()).rev() {
        let c = r[k].clone();
        if ring.is_zero(&c) {
            continue;
        }
        for (j, mj) in m[..dm].iter().enumerate() {
            if !ring.is_zero(mj) {
                let t = ring.mul(&c, mj);
                r[k - dm + j] = ring.sub(&r[k - dm + j], &t);
            }
        }
        r[k] = ring.zero();
    }
    r.truncate(dm);
    r
}

pub fn horner<R: Ring>(ring: &R, a: &[R::Elem], x: &R::Elem) -> R::Elem {
    let mut acc = ring.zero();
    for c in a.iter().rev() {
        acc = ring.mul(&acc, x);
        ring.add_assign(&mut acc, c);
    }
    acc
}

/// Product tree of the monic linear factors `T - x_i`.
pub struct SubproductTree<E> {
    // levels[0] holds the linear factors, the last level the full product
    levels: Vec<Vec<Vec<E>>>,
}

impl<E: Clone> SubproductTree<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, points: &[E]) -> Self {
        let leaves: Vec<Vec<E>> = points
            .iter()
            .map(|x| vec![ring.neg(x), ring.one()])
            .collect();
        let mut levels = vec![leaves];
        while levels.last().unwrap().len() > 1 {
            let prev = levels.last().unwrap();
            let next = prev
                .chunks(2)
                .map(|pair| match pair {
                    [l, r] => mul(ring, l, r),
                    [l] => l.clone(),
                    _ => unreachable!(),
                })
                .collect();
            levels.push(next);
        }
        SubproductTree { levels }
    }

    pub fn root(&self) -> &[E] {
        &self.levels.last().unwrap()[0]
    }

    /// Values of `a` at all the points, by descending remainders.
    pub fn evaluate<R: Ring<Elem = E>>(&self, ring: &R, a: &[E]) -> Vec<E> {
        if self.levels[0].is_empty() {
            return Vec::new();
        }
        let top = self.levels.len() - 1;
        let mut current = vec![rem_monic(ring, a, &self.levels[top][0])];
        for lvl in (0..top).rev() {
            let nodes = &self.levels[lvl];
            let mut next = Vec::with_capacity(nodes.len());
            for (i, r) in current.iter().enumerate() {
                next.push(rem_monic(ring, r, &nodes[2 * i]));
                if 2 * i + 1 < nodes.len() {
                    next.push(rem_monic(ring, r, &nodes[2 * i + 1]));
                }
            }
            current = next;
        }
        current
            .into_iter()
            .map(|r| r.into_iter().next().unwrap_or_else(|| ring.zero()))
            .collect()
    }
}

pub fn multipoint_eval<R: Ring>(ring: &R, a: &[R::Elem], points: &[R::Elem]) -> Vec<R::Elem> {
    SubproductTree::new(ring, points).evaluate(ring, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntegerRing, RingCtx};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(
            a in proptest::collection::vec(-50i64..50, 1..90),
            b in proptest::collection::vec(-50i64..50, 1..90),
        ) {
            let (a, b) = (z(&a), z(&b));
            prop_assert_eq!(mul(&IntegerRing, &a, &b), schoolbook(&IntegerRing, &a, &b));
        }

        #[test]
        fn packed_product_matches_schoolbook(
            a in proptest::collection::vec(any::<u64>(), 1..40),
            b in proptest::collection::vec(any::<u64>(), 1..40),
            which in 0usize..3,
        ) {
            let ctx = match which {
                0 => RingCtx::prime_field(7, 5).unwrap(),
                1 => RingCtx::new(3, 2, 4, &[1, 0, 1]).unwrap(),
                _ => RingCtx::new(2, 3, 30, &[1, 1, 0, 1]).unwrap(),
            };
            let m = ctx.modulus().clone();
            let el = |x: u64, i: usize| {
                let c: Vec<num_bigint::BigUint> = (0..ctx.a())
                    .map(|j| (num_bigint::BigUint::from(x) * (i + j + 1)) % &m)
                    .collect();
                ctx.elem(&c)
            };
            let a: Vec<_> = a.iter().enumerate().map(|(i, &x)| el(x, i)).collect();
            let b: Vec<_> = b.iter().enumerate().map(|(i, &x)| el(x, i)).collect();
            prop_assert_eq!(mul(&ctx, &a, &b), schoolbook(&ctx, &a, &b));
        }

        #[test]
        fn multipoint_matches_horner(
            a in proptest::collection::vec(0i64..1000, 0..40),
            pts in proptest::collection::vec(0i64..1000, 1..20),
        ) {
            let ctx = RingCtx::prime_field(11, 3).unwrap();
            let a: Vec<_> = a.iter().map(|&x| ctx.from_i64(x)).collect();
            let pts: Vec<_> = pts.iter().map(|&x| ctx.from_i64(x)).collect();
            let fast = multipoint_eval(&ctx, &a, &pts);
            let slow: Vec<_> = pts.iter().map(|x| horner(&ctx, &a, x)).collect();
            prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn remainder_by_monic() {
        // (T^3 + 2T + 5) mod (T^2 + 1) = T + 5
        let r = rem_monic(&IntegerRing, &z(&[5, 2, 0, 1]), &z(&[1, 0, 1]));
        assert_eq!(r, z(&[5, 1]));
    }
}
