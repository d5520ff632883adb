use num_bigint::BigUint;

use super::tower::{RingCtx, RingElem};
use super::Ring;
use crate::error::{Error, Result};

/// A ring embedding `F_{p^a} -> F_{p^{ar}}`, determined by the image of `t`.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    src: RingCtx,
    dst: RingCtx,
    image: RingElem,
}

impl FieldEmbedding {
    pub fn image_of_gen(&self) -> &RingElem {
        &self.image
    }

    pub fn apply(&self, u: &RingElem) -> RingElem {
        let mut acc = self.dst.zero();
        for c in u.coeffs().iter().rev() {
            acc = self.dst.mul(&acc, &self.image);
            acc = self.dst.add(&acc, &self.dst.elem(std::slice::from_ref(c)));
        }
        acc
    }

    pub fn src(&self) -> &RingCtx {
        &self.src
    }
    pub fn dst(&self) -> &RingCtx {
        &self.dst
    }
}

/// Find an embedding of `src` into `dst` by searching `dst` for a root of `src`'s
/// defining polynomial. Both contexts must be fields (`λ = 1`) over the same `p`,
/// with `src.a()` dividing `dst.a()`.
pub fn embed_field(src: &RingCtx, dst: &RingCtx) -> Result<FieldEmbedding> {
    if src.p() != dst.p() || src.lambda() != 1 || dst.lambda() != 1 {
        return Err(Error::InvalidInput(
            "embedding needs two finite fields of the same characteristic".into(),
        ));
    }
    if dst.a() % src.a() != 0 {
        return Err(Error::InvalidInput(format!(
            "F_p^{} does not embed in F_p^{}",
            src.a(),
            dst.a()
        )));
    }
    let p = dst.p();
    let f: Vec<RingElem> = src
        .fbar()
        .iter()
        .map(|&c| dst.elem(&[BigUint::from(c)]))
        .collect();
    let eval = |x: &RingElem| {
        let mut acc = dst.zero();
        for c in f.iter().rev() {
            acc = dst.add(&dst.mul(&acc, x), c);
        }
        acc
    };
    let mut digits = vec![0u64; dst.a()];
    loop {
        let x = dst.elem(&digits.iter().map(|&d| BigUint::from(d)).collect::<Vec<_>>());
        if dst.is_zero(&eval(&x)) {
            return Ok(FieldEmbedding {
                src: src.clone(),
                dst: dst.clone(),
                image: x,
            });
        }
        // odometer over all elements of dst
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Err(Error::Internal("no root found for an embedding".into()));
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
