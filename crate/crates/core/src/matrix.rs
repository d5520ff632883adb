//! Dense matrices over a [`Ring`].

use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        let z = ring.zero();
        Matrix {
            rows,
            cols,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let (z, o) = (ring.zero(), ring.one());
        Self::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut E {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn map<F, T: Clone>(&self, f: F) -> Matrix<T>
    where
        F: FnMut(&E) -> T,
    {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// `A * B`, skipping zero entries.
pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch");
    let nonzero_rows: Vec<Vec<usize>> = (0..a.rows)
        .map(|i| (0..a.cols).filter(|&k| !ring.is_zero(a.get(i, k))).collect())
        .collect();
    let mut data = Vec::with_capacity(a.rows * b.cols);
    for (i, ks) in nonzero_rows.iter().enumerate() {
        for j in 0..b.cols {
            data.push(ring.sum_of_products(
                ks.iter()
                    .map(|&k| (a.get(i, k), b.get(k, j)))
                    .filter(|(_, y)| !ring.is_zero(y)),
            ));
        }
    }
    Matrix {
        rows: a.rows,
        cols: b.cols,
        data,
    }
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len(), "dimension mismatch");
    (0..a.rows)
        .map(|i| {
            ring.sum_of_products(
                a.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(x, y)| !ring.is_zero(x) && !ring.is_zero(y)),
            )
        })
        .collect()
}

pub fn trace<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    let mut acc = ring.zero();
    for i in 0..a.rows.min(a.cols) {
        ring.add_assign(&mut acc, a.get(i, i));
    }
    acc
}

/// The column-sum max norm is ring-specific; this helper applies a scalar
/// norm entrywise and returns the largest column sum.
pub fn max_column_norm<E, N>(a: &Matrix<E>, norm: impl Fn(&E) -> N) -> N
where
    E: Clone,
    N: Default + Ord + std::ops::Add<Output = N> + Clone,
{
    (0..a.cols)
        .map(|j| {
            (0..a.rows).fold(N::default(), |acc, i| acc + norm(a.get(i, j)))
        })
        .max()
        .unwrap_or_default()
}
