//! Accumulating remainder trees: `E_{p-1} ... E_1 mod p^μ` for every prime
//! `p < N` at once, over matrices whose entries are truncated power series in
//! a formal prime `k`. Substituting `k = p` at a leaf is valid mod `p^μ`
//! whenever `β >= μ`.
//!
//! Node `(i, t)` covers the indices `j` with `tN/2^i <= j < (t+1)N/2^i`. The
//! value tree holds exact products, the modulus tree `Π p^μ` over the primes
//! in a node, and the accumulator tree `A_{i,t} = V_{i,t-1} ... V_{i,0}`
//! reduced mod the node modulus, with `E_0 = I`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::deform::{build_q, denominator_from_factorial, finish_row, make_frame, multinomial_index, DeformFrame};
use crate::error::{Error, Result};
use crate::matrix::{mat_mul, mat_vec, Matrix};
use crate::ms::MsMatrix;
use crate::pack::{pack_signed, unpack_signed};
use crate::parallel::map_range;
use crate::poly::{basis, HomogPoly};
use crate::primes::primes_below;
use crate::ring::{padic_divexact, pow_u, IntegerRing, Ring, RingCtx, RingElem};

/// `h_0 + h_1 k + ... + h_{β-1} k^{β-1}`, always of length `β`.
pub type TruncSeries = Vec<BigInt>;
pub type SeriesMatrix = Matrix<TruncSeries>;

/// `Z[k] / k^β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    beta: usize,
}

impl SeriesRing {
    pub fn new(beta: usize) -> Self {
        assert!(beta >= 1, "truncation order must be positive");
        SeriesRing { beta }
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn from_coeffs(&self, c: &[BigInt]) -> TruncSeries {
        let mut out: TruncSeries = c.iter().take(self.beta).cloned().collect();
        out.resize(self.beta, BigInt::zero());
        out
    }

    pub fn reduce(&self, h: &TruncSeries, modulus: &BigInt) -> TruncSeries {
        h.iter().map(|c| c.mod_floor(modulus)).collect()
    }

    pub fn reduce_matrix(&self, m: &SeriesMatrix, modulus: &BigInt) -> SeriesMatrix {
        m.map(|h| self.reduce(h, modulus))
    }

    /// `a · b` with each series packed into one integer, so that an entry
    /// product is a single large multiplication.
    pub fn mat_mul_packed(&self, a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(a.cols(), b.rows(), "matrix shapes do not match");
        let bits = |m: &SeriesMatrix| m.entries().iter().flatten().map(|c| c.bits()).max().unwrap_or(0);
        let terms = (self.beta * a.cols()) as u64;
        let slot = bits(a) + bits(b) + (64 - terms.leading_zeros()) as u64 + 2;
        let pa = a.map(|h| pack_signed(h, slot));
        let pb = b.map(|h| pack_signed(h, slot));
        Matrix::from_fn(a.rows(), b.cols(), |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..a.cols() {
                let (x, y) = (pa.get(i, k), pb.get(k, j));
                if !x.is_zero() && !y.is_zero() {
                    acc += x * y;
                }
            }
            unpack_signed(&acc, slot, self.beta)
        })
    }
}

impl Ring for SeriesRing {
    type Elem = TruncSeries;

    fn zero(&self) -> TruncSeries {
        vec![BigInt::zero(); self.beta]
    }

    fn one(&self) -> TruncSeries {
        let mut v = self.zero();
        v[0] = BigInt::one();
        v
    }

    fn from_int(&self, v: &BigInt) -> TruncSeries {
        let mut out = self.zero();
        out[0] = v.clone();
        out
    }

    fn add(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn sub(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn neg(&self, a: &TruncSeries) -> TruncSeries {
        a.iter().map(|x| -x).collect()
    }

    fn mul(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        let mut out = self.zero();
        self.mul_add_assign(&mut out, a, b);
        out
    }

    fn mul_add_assign(&self, acc: &mut TruncSeries, a: &TruncSeries, b: &TruncSeries) {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().take(self.beta - i).enumerate() {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
    }

    fn is_zero(&self, a: &TruncSeries) -> bool {
        a.iter().all(Zero::is_zero)
    }
}

/// `‖h‖ = Σ |h_i|`.
pub fn series_norm(h: &[BigInt]) -> BigInt {
    h.iter().map(|x| x.abs()).sum()
}

/// Largest column sum of entry norms.
pub fn matrix_norm(m: &SeriesMatrix) -> BigInt {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| series_norm(m.get(i, j))).sum::<BigInt>())
        .max()
        .unwrap_or_default()
}

/// `Σ h_i p^i mod p^μ`.
pub fn substitute_prime(h: &[BigInt], p: u64, mu: u32) -> BigUint {
    let m = BigInt::from(pow_u(p, mu));
    let pb = BigInt::from(p);
    let mut acc = BigInt::zero();
    for c in h.iter().rev() {
        acc = (acc * &pb + c).mod_floor(&m);
    }
    acc.to_biguint().expect("reduced residue is non-negative")
}

/// The three trees over `E_0 = I, E_1, ..., E_{N-1}`.
#[derive(Clone, Debug)]
pub struct RemainderForest {
    pub n: u64,
    pub depth: usize,
    /// `ranges[i][t] = [lo, hi)`.
    pub ranges: Vec<Vec<(u64, u64)>>,
    pub moduli: Vec<Vec<BigInt>>,
    pub values: Vec<Vec<SeriesMatrix>>,
    primes: Vec<u64>,
    mu: u32,
}

fn ceil_div(a: u128, b: u128) -> u64 {
    a.div_ceil(b) as u64
}

/// Node ranges and the modulus tree for `N` and the given primes.
struct TreeShape {
    n: u64,
    depth: usize,
    ranges: Vec<Vec<(u64, u64)>>,
    moduli: Vec<Vec<BigInt>>,
}

impl TreeShape {
    fn new(e: &[SeriesMatrix], primes: &[u64], mu: u32) -> Result<Self> {
        let n = e.len() as u64 + 1;
        let dim = e.first().map(Matrix::rows).unwrap_or(1);
        if e.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidInput("all E_j must be square of one size".into()));
        }
        if let Some(&p) = primes.iter().find(|&&p| p >= n) {
            return Err(Error::InvalidInput(format!("prime {p} is not below N = {n}")));
        }
        let depth = (64 - (n - 1).leading_zeros()) as usize; // ⌈log2 N⌉
        let ranges: Vec<Vec<(u64, u64)>> = (0..=depth)
            .map(|i| {
                let parts = 1u128 << i;
                (0..parts)
                    .map(|t| {
                        (
                            ceil_div(t * n as u128, parts),
                            ceil_div((t + 1) * n as u128, parts),
                        )
                    })
                    .collect()
            })
            .collect();
        let moduli = ranges
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|&(lo, hi)| {
                        primes
                            .iter()
                            .filter(|&&p| lo <= p && p < hi)
                            .map(|&p| BigInt::from(pow_u(p, mu)))
                            .product()
                    })
                    .collect()
            })
            .collect();
        Ok(TreeShape { n, depth, ranges, moduli })
    }

    fn leaf(&self, ring: &SeriesRing, e: &[SeriesMatrix], t: usize) -> SeriesMatrix {
        let (lo, hi) = self.ranges[self.depth][t];
        match hi - lo {
            0 => Matrix::identity(ring, e.first().map(Matrix::rows).unwrap_or(1)),
            1 if lo == 0 => Matrix::identity(ring, e.first().map(Matrix::rows).unwrap_or(1)),
            1 => e[lo as usize - 1].clone(),
            _ => unreachable!("leaves hold at most one index"),
        }
    }

    /// Descend the accumulator tree. `value(i, t)` must be congruent to
    /// `V_{i,t}` modulo `M_{i,t+1}` whenever that node is consulted.
    fn descend<'a>(
        &self,
        ring: &SeriesRing,
        dim: usize,
        primes: &[u64],
        mu: u32,
        value: impl Fn(usize, usize) -> &'a SeriesMatrix + Sync,
    ) -> BTreeMap<u64, SeriesMatrix> {
        let mut acc: Vec<Option<SeriesMatrix>> =
            vec![Some(ring.reduce_matrix(&Matrix::identity(ring, dim), &self.moduli[0][0]))];
        for i in 0..self.depth {
            let next: Vec<Option<SeriesMatrix>> = map_range(acc.len() * 2, |c| {
                let parent = acc[c / 2].as_ref()?;
                let m = &self.moduli[i + 1][c];
                if m.is_one() {
                    return None;
                }
                Some(if c % 2 == 0 {
                    ring.reduce_matrix(parent, m)
                } else {
                    ring.reduce_matrix(&ring.mat_mul_packed(value(i + 1, c - 1), parent), m)
                })
            });
            acc = next;
        }
        let mut out = BTreeMap::new();
        for (t, a) in acc.into_iter().enumerate() {
            let (lo, hi) = self.ranges[self.depth][t];
            if let (Some(a), true) = (a, hi > lo) {
                if primes.contains(&lo) {
                    let m = BigInt::from(pow_u(lo, mu));
                    out.insert(lo, ring.reduce_matrix(&a, &m));
                }
            }
        }
        out
    }
}

impl RemainderForest {
    /// `e[j - 1] = E_j` for `j = 1 .. N-1`; every prime must be below `N`.
    pub fn build(ring: &SeriesRing, e: &[SeriesMatrix], primes: &[u64], mu: u32) -> Result<Self> {
        let shape = TreeShape::new(e, primes, mu)?;
        let mut values: Vec<Vec<SeriesMatrix>> =
            vec![(0..shape.ranges[shape.depth].len()).map(|t| shape.leaf(ring, e, t)).collect()];
        for _ in 0..shape.depth {
            let below = values.last().unwrap();
            let level: Vec<SeriesMatrix> = map_range(below.len() / 2, |t| {
                ring.mat_mul_packed(&below[2 * t + 1], &below[2 * t])
            });
            values.push(level);
        }
        values.reverse();
        Ok(RemainderForest {
            n: shape.n,
            depth: shape.depth,
            ranges: shape.ranges,
            moduli: shape.moduli,
            values,
            primes: primes.to_vec(),
            mu,
        })
    }

    /// Descend the accumulator tree; returns `E_{p-1} ... E_1 mod p^μ`
    /// (coefficientwise) for every prime.
    pub fn leaves(&self, ring: &SeriesRing) -> BTreeMap<u64, SeriesMatrix> {
        let shape = TreeShape {
            n: self.n,
            depth: self.depth,
            ranges: self.ranges.clone(),
            moduli: self.moduli.clone(),
        };
        let dim = self.values[0][0].rows();
        shape.descend(ring, dim, &self.primes, self.mu, |i, t| &self.values[i][t])
    }
}

/// Reduce only the coefficients that are wider than `m`.
fn shrink(m: &SeriesMatrix, modulus: &BigInt) -> SeriesMatrix {
    let bits = modulus.bits();
    m.map(|h| h.iter().map(|c| if c.bits() > bits { c.mod_floor(modulus) } else { c.clone() }).collect())
}

/// `E_{p-1} ... E_1 mod p^μ` for each listed prime.
///
/// Same result as [`RemainderForest::leaves`], but a value node is built
/// only when the descent consults it (directly or through an ancestor), and
/// only modulo the product `W_{i,t}` of the moduli that consult it.
pub fn art(ring: &SeriesRing, e: &[SeriesMatrix], mu: u32, primes: &[u64]) -> Result<BTreeMap<u64, SeriesMatrix>> {
    if primes.is_empty() {
        return Ok(BTreeMap::new());
    }
    let shape = TreeShape::new(e, primes, mu)?;
    let depth = shape.depth;
    let one = BigInt::one();
    // W_{0,0} = 1: the root value is never consulted
    let mut need: Vec<Vec<BigInt>> = vec![vec![one.clone()]];
    for i in 0..depth {
        let level: Vec<BigInt> = (0..need[i].len() * 2)
            .map(|c| {
                let up = &need[i][c / 2];
                if c % 2 == 0 {
                    &shape.moduli[i + 1][c + 1] * up
                } else {
                    up.clone()
                }
            })
            .collect();
        need.push(level);
    }
    let mut values: Vec<Vec<Option<SeriesMatrix>>> = vec![map_range(need[depth].len(), |t| {
        let w = &need[depth][t];
        (!w.is_one()).then(|| shrink(&shape.leaf(ring, e, t), w))
    })];
    for i in (0..depth).rev() {
        let below = values.last().unwrap();
        let level = map_range(need[i].len(), |t| {
            let w = &need[i][t];
            if w.is_one() {
                return None;
            }
            let (l, r) = (below[2 * t].as_ref()?, below[2 * t + 1].as_ref()?);
            Some(shrink(&ring.mat_mul_packed(r, l), w))
        });
        values.push(level);
    }
    values.reverse();
    let dim = e.first().map(Matrix::rows).unwrap_or(1);
    Ok(shape.descend(ring, dim, primes, mu, |i, t| {
        values[i][t].as_ref().expect("consulted value nodes are built")
    }))
}

fn scalar(v: BigInt) -> SeriesMatrix {
    Matrix::from_rows(vec![vec![vec![v]]])
}

/// Product of a scalar sequence `E_1 .. E_{N-1}` at every prime, mod `p^μ`.
fn scalar_art(e: Vec<BigInt>, mu: u32, primes: &[u64]) -> Result<BTreeMap<u64, BigUint>> {
    let ring = SeriesRing::new(1);
    let mats: Vec<SeriesMatrix> = e.into_iter().map(scalar).collect();
    Ok(art(&ring, &mats, mu, primes)?
        .into_iter()
        .map(|(p, m)| (p, m.get(0, 0)[0].to_biguint().unwrap()))
        .collect())
}

/// `((p-1)s)! mod p^μ` for every prime `p < N`, from
/// `E_j = (js)(js-1)...(js-s+1)`.
pub fn factorials_all_primes(s: u64, n: u64, mu: u32) -> Result<BTreeMap<u64, BigUint>> {
    let primes = primes_below(n);
    let e = (1..n.max(1))
        .map(|j| ((j * s - s + 1)..=(j * s)).map(BigInt::from).product())
        .collect();
    scalar_art(e, mu, &primes)
}

/// `⌊max(0, y)⌋` for `y = ((j-1) v_i + w_i - t_i) / d`.
fn floor_index(frame: &DeformFrame, i: usize, t: &[u32], j: u64) -> u64 {
    let num = (j as i64 - 1) * frame.v[i] as i64 + frame.w[i] as i64 - t[i] as i64;
    if num <= 0 {
        0
    } else {
        (num / frame.d as i64) as u64
    }
}

fn multinomial_factors(frame: &DeformFrame, t: &[u32], n: u64) -> Vec<BigInt> {
    let fact = |m: u64| -> BigInt { (2..=m).map(BigInt::from).product() };
    (1..n.max(1))
        .map(|j| {
            if j == 1 {
                (0..t.len()).map(|i| fact(floor_index(frame, i, t, 2))).product()
            } else {
                (0..t.len())
                    .map(|i| {
                        let lo = floor_index(frame, i, t, j);
                        let hi = floor_index(frame, i, t, j + 1);
                        ((lo + 1)..=hi).map(BigInt::from).product::<BigInt>()
                    })
                    .product()
            }
        })
        .collect()
}

/// `y_0(p)! ... y_n(p)! mod p^μ` for every prime `p < N`. Meaningful only at
/// primes where every `y_i(p)` is a non-negative integer.
pub fn multinomial_vectors_all_primes(frame: &DeformFrame, t: &[u32], n: u64, mu: u32) -> Result<BTreeMap<u64, BigUint>> {
    scalar_art(multinomial_factors(frame, t, n), mu, &primes_below(n))
}

/// All the multinomial denominators of one row at once, as a diagonal ART.
fn multinomial_rows_all_primes(frame: &DeformFrame, n: u64, mu: u32, primes: &[u64]) -> Result<BTreeMap<u64, Vec<BigUint>>> {
    let ts = basis(frame.n, frame.h);
    let factors: Vec<Vec<BigInt>> = ts.iter().map(|t| multinomial_factors(frame, t, n)).collect();
    let ring = SeriesRing::new(1);
    let dim = ts.len();
    let mats: Vec<SeriesMatrix> = (0..(n.max(1) - 1) as usize)
        .map(|j| {
            Matrix::from_fn(dim, dim, |a, b| {
                if a == b {
                    vec![factors[a][j].clone()]
                } else {
                    vec![BigInt::zero()]
                }
            })
        })
        .collect();
    Ok(art(&ring, &mats, mu, primes)?
        .into_iter()
        .map(|(p, m)| (p, (0..dim).map(|a| m.get(a, a)[0].to_biguint().unwrap()).collect()))
        .collect())
}

/// Output of [`ms_all_primes`].
#[derive(Clone, Debug)]
pub struct AllPrimesMs {
    pub s: usize,
    pub lambda: u32,
    pub ms: BTreeMap<u64, MsMatrix>,
    /// Primes below `N` left out because they divide `d`.
    pub skipped: Vec<u64>,
    /// Largest `log2 ‖E_j‖` seen, over all rows.
    pub max_norm_bits: u64,
    /// Largest `log2` of the submultiplicative bound `Π_ℓ ‖Q(k-1, ℓ)‖`.
    pub max_bound_bits: u64,
}

/// `Q(k-1, ℓ)` over `Z[k]/k^β`: entry `(c0 - ck + cl ℓ) + ck k`.
fn q_series(ring: &SeriesRing, q: &crate::deform::QMatrix<BigInt>, l: u64) -> SeriesMatrix {
    let mut m = Matrix::zeros(ring, q.dim, q.dim);
    let lb = BigInt::from(l);
    for (t, row) in q.rows.iter().enumerate() {
        for e in row {
            let entry = m.get_mut(t, e.col);
            entry[0] += &e.c0 - &e.ck + &e.cl * &lb;
            if ring.beta() > 1 {
                entry[1] += &e.ck;
            }
        }
    }
    m
}

/// `M_s mod p^λ` for every prime `p < N` not dividing `d`, from one
/// remainder forest per row of `M_s`. `F` is an integer lift valid at every prime.
pub fn ms_all_primes(f: &HomogPoly<BigInt>, s: usize, n: u64, lambda: u32) -> Result<AllPrimesMs> {
    if s == 0 || lambda == 0 {
        return Err(Error::InvalidInput("s and λ must be positive".into()));
    }
    let (nn, d) = (f.n(), f.degree());
    let (primes, skipped): (Vec<u64>, Vec<u64>) = primes_below(n).into_iter().partition(|&p| d as u64 % p != 0);
    let lambda1 = lambda + s as u32;
    let lambda2 = lambda + 2 * s as u32;
    let mut out = AllPrimesMs {
        s,
        lambda,
        ms: BTreeMap::new(),
        skipped,
        max_norm_bits: 0,
        max_bound_bits: 0,
    };
    if primes.is_empty() {
        return Ok(out);
    }
    let fact2 = factorials_all_primes(s as u64, n, lambda2)?;
    let ring = SeriesRing::new(lambda1 as usize);
    let rows = basis(nn, d * s);
    type RowOut = (BTreeMap<u64, Vec<RingElem>>, u64, u64);
    let per_row = map_range(rows.len(), |r| -> Result<RowOut> {
        let frame = make_frame(nn, d, s, &rows[r], lambda)?;
        let q = build_q(&IntegerRing, f, &frame)?;
        let mut norm_bits = 0;
        let mut bound_bits = 0;
        let e: Vec<SeriesMatrix> = (1..n)
            .map(|j| {
                let js = j * s as u64;
                let mut prod = q_series(&ring, &q, js - s as u64);
                let mut bound = matrix_norm(&prod);
                for l in (js - s as u64 + 1)..js {
                    let step = q_series(&ring, &q, l);
                    bound *= matrix_norm(&step);
                    prod = mat_mul(&ring, &step, &prod);
                }
                let norm = matrix_norm(&prod);
                debug_assert!(norm <= bound);
                norm_bits = norm_bits.max(norm.bits());
                bound_bits = bound_bits.max(bound.bits());
                prod
            })
            .collect();
        let leaves = art(&ring, &e, lambda1, &primes)?;
        let denoms = multinomial_rows_all_primes(&frame, n, lambda2, &primes)?;
        let ts = basis(nn, frame.h);
        let mut rows_by_prime = BTreeMap::new();
        for &p in &primes {
            let m1 = pow_u(p, lambda1);
            let ctx1 = RingCtx::prime_field(p, lambda1)?;
            let ctx = RingCtx::prime_field(p, lambda)?;
            let num = &fact2[&p];
            let init: Vec<BigUint> = ts
                .iter()
                .zip(&denoms[&p])
                .map(|(t, den)| -> Result<BigUint> {
                    if multinomial_index(&frame, p, t).is_none() {
                        return Ok(BigUint::zero());
                    }
                    let (q, _) = padic_divexact(p, lambda2, num, den, s as u32)
                        .map_err(|e| Error::Internal(format!("multinomial division: {e}")))?;
                    Ok(q % &m1)
                })
                .collect::<Result<_>>()?;
            let leaf = leaves[&p].map(|h| ctx1.elem(&[substitute_prime(h, p, lambda1)]));
            let iv: Vec<RingElem> = init.iter().map(|x| ctx1.elem(std::slice::from_ref(x))).collect();
            let y = mat_vec(&ctx1, &leaf, &iv);
            let fact1 = &fact2[&p] % &m1;
            let (den, e_val) = denominator_from_factorial(p, d, s, lambda1, &fact1);
            rows_by_prime.insert(p, finish_row(&frame, &ctx, &y, &den, e_val)?);
        }
        Ok((rows_by_prime, norm_bits, bound_bits))
    });
    let mut collected: BTreeMap<u64, Vec<Vec<RingElem>>> = BTreeMap::new();
    for row in per_row {
        let (by_prime, nb, bb) = row?;
        out.max_norm_bits = out.max_norm_bits.max(nb);
        out.max_bound_bits = out.max_bound_bits.max(bb);
        for (p, r) in by_prime {
            collected.entry(p).or_default().push(r);
        }
    }
    out.ms = collected
        .into_iter()
        .map(|(p, rows)| {
            (
                p,
                MsMatrix {
                    s,
                    entries: Matrix::from_rows(rows),
                },
            )
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ms::ms_naive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_series_matrix(ring: &SeriesRing, m: usize, rng: &mut ChaCha8Rng) -> SeriesMatrix {
        Matrix::from_fn(m, m, |_, _| {
            (0..ring.beta()).map(|_| BigInt::from(rng.gen_range(-20i64..=20))).collect()
        })
    }

    #[test]
    fn wilson_via_art() {
        let e: Vec<BigInt> = (1..10).map(BigInt::from).collect();
        let leaves = scalar_art(e, 1, &[2, 3, 5, 7]).unwrap();
        for (p, v) in leaves {
            assert_eq!(v, BigUint::from(p - 1));
        }
    }

    #[test]
    fn identity_leaves() {
        let ring = SeriesRing::new(2);
        let e = vec![Matrix::identity(&ring, 2); 12];
        let leaves = art(&ring, &e, 2, &[2, 3, 5, 7, 11]).unwrap();
        assert_eq!(leaves.len(), 5);
        for m in leaves.values() {
            assert_eq!(*m, Matrix::identity(&ring, 2));
        }
    }

    #[test]
    fn leaves_match_direct_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (m, beta, mu, n) in [(1usize, 1usize, 1u32, 10u64), (2, 2, 2, 30), (3, 3, 3, 50), (2, 1, 3, 17), (3, 2, 1, 2)] {
            let ring = SeriesRing::new(beta);
            let e: Vec<SeriesMatrix> = (1..n).map(|_| random_series_matrix(&ring, m, &mut rng)).collect();
            let primes = primes_below(n);
            let leaves = art(&ring, &e, mu, &primes).unwrap();
            assert_eq!(leaves.len(), primes.len());
            for &p in &primes {
                let modulus = BigInt::from(pow_u(p, mu));
                let mut direct = Matrix::identity(&ring, m);
                for ej in &e[..(p - 1) as usize] {
                    direct = ring.reduce_matrix(&mat_mul(&ring, ej, &direct), &modulus);
                }
                assert_eq!(leaves[&p], direct, "m={m} β={beta} μ={mu} p={p}");
            }
        }
    }

    #[test]
    fn value_tree_levels_multiply_to_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ring = SeriesRing::new(2);
        let e: Vec<SeriesMatrix> = (1..23).map(|_| random_series_matrix(&ring, 2, &mut rng)).collect();
        let forest = RemainderForest::build(&ring, &e, &primes_below(23), 2).unwrap();
        for level in &forest.values {
            let mut prod = Matrix::identity(&ring, 2);
            for v in level {
                prod = mat_mul(&ring, v, &prod);
            }
            assert_eq!(prod, forest.values[0][0]);
        }
        // children partition the parent range
        for i in 0..forest.depth {
            for (t, &(lo, hi)) in forest.ranges[i].iter().enumerate() {
                assert_eq!(forest.ranges[i + 1][2 * t].0, lo);
                assert_eq!(forest.ranges[i + 1][2 * t].1, forest.ranges[i + 1][2 * t + 1].0);
                assert_eq!(forest.ranges[i + 1][2 * t + 1].1, hi);
            }
        }
    }

    #[test]
    fn pruned_tree_matches_full_forest() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in [2u64, 3, 5, 17, 40, 64, 65] {
            let ring = SeriesRing::new(3);
            let e: Vec<SeriesMatrix> = (1..n).map(|_| random_series_matrix(&ring, 2, &mut rng)).collect();
            for primes in [primes_below(n), primes_below(n).into_iter().filter(|p| p % 4 == 1).collect()] {
                let full = RemainderForest::build(&ring, &e, &primes, 3).unwrap().leaves(&ring);
                assert_eq!(art(&ring, &e, 3, &primes).unwrap(), full, "N = {n}");
            }
        }
    }

    #[test]
    fn packed_product_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..100 {
            let ring = SeriesRing::new(rng.gen_range(1..=5));
            let m = rng.gen_range(1..=4);
            let mut a = random_series_matrix(&ring, m, &mut rng);
            let b = random_series_matrix(&ring, m, &mut rng);
            // mix in a wide entry so slots differ from the typical size
            a.set(0, 0, ring.from_coeffs(&[BigInt::from(-1) << rng.gen_range(0..300u32), BigInt::from(7)]));
            assert_eq!(ring.mat_mul_packed(&a, &b), mat_mul(&ring, &a, &b));
        }
    }

    #[test]
    fn norms_are_submultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let beta = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let ring = SeriesRing::new(beta);
            let a = random_series_matrix(&ring, m, &mut rng);
            let b = random_series_matrix(&ring, m, &mut rng);
            assert!(matrix_norm(&mat_mul(&ring, &a, &b)) <= matrix_norm(&a) * matrix_norm(&b));
        }
    }

    #[test]
    fn factorial_examples() {
        let f = factorials_all_primes(1, 20, 1).unwrap();
        for (p, v) in &f {
            assert_eq!(*v, BigUint::from(p - 1));
        }
        assert_eq!(factorials_all_primes(2, 10, 2).unwrap()[&5], BigUint::from(20u32));
        assert_eq!(factorials_all_primes(1, 8, 2).unwrap()[&7], BigUint::from(34u32));
    }

    #[test]
    fn multinomial_examples() {
        let frame = DeformFrame {
            n: 1,
            d: 2,
            s: 2,
            v: vec![2, 0],
            sigma: vec![1, 0],
            w: vec![3, 0],
            h: 3,
            lambda: 2,
            lambda1: 4,
            lambda2: 6,
        };
        let got = multinomial_vectors_all_primes(&frame, &[3, 0], 8, 2).unwrap();
        assert_eq!(got[&5], BigUint::from(24u32));
        assert_eq!(got[&7], BigUint::from(720u32 % 49));
        // t = (2, 1): y_1(p) = -1/2 for every p, so no prime is relevant
        for p in [3u64, 5, 7] {
            assert!(multinomial_index(&frame, p, &[2, 1]).is_none());
        }
    }

    #[test]
    fn relevance_matches_initial_vector() {
        let frame = make_frame(1, 2, 2, &[3, 1], 2).unwrap();
        for p in [3u64, 5, 7] {
            let iv = crate::deform::initial_vector(&frame, p, &mut |m, mu| {
                crate::deform::factorial_mod(m, &pow_u(p, mu))
            })
            .unwrap();
            for (t, x) in basis(1, frame.h).iter().zip(iv) {
                if multinomial_index(&frame, p, t).is_none() {
                    assert!(x.is_zero());
                }
            }
        }
    }

    #[test]
    fn all_primes_matches_naive() {
        let f = HomogPoly::from_int_terms(2, 2, &[(vec![2, 0], 1), (vec![0, 2], -2)]).unwrap();
        let got = ms_all_primes(&f, 1, 30, 2).unwrap();
        assert_eq!(got.skipped, vec![2]);
        assert_eq!(got.ms.keys().copied().collect::<Vec<_>>(), vec![3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(got.max_norm_bits <= got.max_bound_bits);
        for (&p, m) in &got.ms {
            let ctx = RingCtx::prime_field(p, 2).unwrap();
            assert_eq!(*m, ms_naive(&ctx, &f.to_ring(&ctx), 1).unwrap(), "p={p}");
        }
        assert!(ms_all_primes(&f, 1, 3, 2).unwrap().ms.is_empty());
    }

    #[test]
    fn all_primes_random_cubics() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for (n, d, s, lambda) in [(1usize, 3usize, 2usize, 2u32), (2, 2, 1, 1), (2, 1, 3, 2), (1, 1, 2, 3)] {
            let terms: Vec<(Vec<u32>, i64)> = basis(n, d).into_iter().map(|e| (e, rng.gen_range(-9..=9))).collect();
            let f = HomogPoly::from_int_terms(n + 1, d, &terms).unwrap();
            let got = ms_all_primes(&f, s, 14, lambda).unwrap();
            for (&p, m) in &got.ms {
                let ctx = RingCtx::prime_field(p, lambda).unwrap();
                assert_eq!(*m, ms_naive(&ctx, &f.to_ring(&ctx), s).unwrap(), "n={n} d={d} s={s} p={p}");
            }
        }
    }
}
