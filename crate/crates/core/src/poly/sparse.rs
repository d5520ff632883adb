//! Sparse integer polynomials in affine variables `x_1..x_m`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::json::Term;
use super::HomogPoly;
use crate::error::{Error, Result};

/// Terms are kept sorted by exponent with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl SparsePoly {
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Result<Self> {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidInput(format!(
                    "exponent {e:?} has {} entries, expected {nvars}",
                    e.len()
                )));
            }
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        Ok(SparsePoly {
            nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn from_i64(nvars: usize, terms: &[(Vec<u32>, i64)]) -> Result<Self> {
        Self::new(nvars, terms.iter().map(|(e, c)| (e.clone(), BigInt::from(*c))))
    }

    pub fn from_json_terms(nvars: usize, terms: &[Term]) -> Result<Self> {
        let mut out = Vec::new();
        for t in terms {
            if t.c.len() != 1 {
                return Err(Error::InvalidInput("scheme generators need integer coefficients".into()));
            }
            out.push((t.exp.clone(), t.c[0].clone()));
        }
        Self::new(nvars, out)
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        Self::new(nvars, [(vec![0; nvars], c)]).expect("exponent length matches")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// The value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(e, c)] if e.iter().all(|&x| x == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let prods = self.terms.iter().flat_map(|(e1, c1)| {
            other.terms.iter().map(move |(e2, c2)| {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                (e, c1 * c2)
            })
        });
        SparsePoly::new(self.nvars, prods).expect("lengths agree")
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    /// Set `x_i = 0` for every `i` (0-based) not in `keep`, and renumber the
    /// kept variables in order.
    pub fn restrict(&self, keep: &[usize]) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().enumerate().all(|(i, &x)| x == 0 || keep.contains(&i)))
            .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone()));
        SparsePoly::new(keep.len(), terms).expect("lengths agree")
    }

    /// Homogenize with a new leading variable `x_0` to `degree` (at least the total degree).
    pub fn homogenize(&self, degree: usize) -> Result<HomogPoly<BigInt>> {
        if degree < self.total_degree() {
            return Err(Error::InvalidInput("homogenization degree below total degree".into()));
        }
        let mut h = HomogPoly::from_int_terms(self.nvars + 1, degree, &[])?;
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            let mut full = vec![degree as u32 - deg];
            full.extend_from_slice(e);
            let idx = super::monomial_rank(self.nvars, degree, &full)?;
            h.coeffs_mut()[idx] += c;
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_and_homogenize() {
        let f = SparsePoly::from_i64(2, &[(vec![1, 1], 1), (vec![0, 0], 1)]).unwrap();
        let full = f.restrict(&[0, 1]);
        assert_eq!(full, f);
        let h = full.homogenize(2).unwrap();
        assert_eq!(*h.coeff(&[2, 0, 0]), BigInt::one());
        assert_eq!(*h.coeff(&[0, 1, 1]), BigInt::one());
        assert_eq!(f.restrict(&[0]).as_constant(), Some(BigInt::one()));
        assert_eq!(f.restrict(&[]).as_constant(), Some(BigInt::one()));
        let g = SparsePoly::from_i64(1, &[(vec![1], 1)]).unwrap();
        assert_eq!(g.restrict(&[]).as_constant(), Some(BigInt::zero()));
    }

    #[test]
    fn products_merge_terms() {
        let f = SparsePoly::from_i64(1, &[(vec![1], 1), (vec![0], 1)]).unwrap();
        let g = SparsePoly::from_i64(1, &[(vec![1], 1), (vec![0], -1)]).unwrap();
        assert_eq!(f.mul(&g), SparsePoly::from_i64(1, &[(vec![2], 1), (vec![0], -1)]).unwrap());
        assert_eq!(f.mul(&g).total_degree(), 2);
    }
}
