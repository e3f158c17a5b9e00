use serde::{Deserialize, Serialize};

/// Dense row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> SquareMatrix<T> {
    pub fn filled(n: usize, value: T) -> Self {
        Self {
            n,
            data: vec![value; n * n],
        }
    }
}

impl<T> SquareMatrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Wraps a row-major buffer; returns `None` unless `data.len() == n * n`.
    pub fn from_vec(n: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == n * n).then_some(Self { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }
}

impl<T: Copy> SquareMatrix<T> {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }
}

impl<T: Copy + PartialEq> SquareMatrix<T> {
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl SquareMatrix<f64> {
    /// Largest `|a - b|` over all cells with the row-major position where it occurs.
    pub fn max_abs_diff(&self, other: &Self) -> (f64, usize, usize) {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let mut worst = (0.0, 0, 0);
        for (idx, (a, b)) in self.data.iter().zip(&other.data).enumerate() {
            let d = (a - b).abs();
            // A NaN cell is incomparable and always reported.
            if d.partial_cmp(&worst.0).is_none_or(|o| o.is_gt()) {
                worst = (d, idx / self.n, idx % self.n);
            }
        }
        worst
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }
}
