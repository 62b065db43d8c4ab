//! Exact linear algebra over the rationals for small integer matrices.
//!
//! Ranks are computed by fraction-free (Bareiss) elimination, which keeps
//! every intermediate entry an integer minor of the input. The fast path
//! runs in checked `i128`; on overflow the same elimination is repeated
//! with arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: i64) {
        self.data[r * self.cols + c] = x;
    }

    pub fn add(&mut self, r: usize, c: usize, x: i64) {
        self.data[r * self.cols + c] += x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.add(i, j, a * rhs.get(k, j));
                }
            }
        }
        out
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let wide: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        match bareiss_i128(self.rows, self.cols, wide) {
            Some(r) => r,
            None => {
                let big = self.data.iter().map(|&x| BigInt::from(x)).collect();
                bareiss_big(self.rows, self.cols, big)
            }
        }
    }

    /// Dimension of the kernel of the map `Q^cols -> Q^rows`.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

fn bareiss_i128(rows: usize, cols: usize, mut m: Vec<i128>) -> Option<usize> {
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
            continue;
        };
        if p != rank {
            for k in 0..cols {
                m.swap(p * cols + k, rank * cols + k);
            }
        }
        let pivot = m[rank * cols + c];
        for r in rank + 1..rows {
            let factor = m[r * cols + c];
            for k in c..cols {
                let lhs = pivot.checked_mul(m[r * cols + k])?;
                let rhs = factor.checked_mul(m[rank * cols + k])?;
                m[r * cols + k] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(rows: usize, cols: usize, mut m: Vec<BigInt>) -> usize {
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for k in 0..cols {
                m.swap(p * cols + k, rank * cols + k);
            }
        }
        let pivot = m[rank * cols + c].clone();
        for r in rank + 1..rows {
            let factor = m[r * cols + c].clone();
            for k in c..cols {
                let next = (&pivot * &m[r * cols + k] - &factor * &m[rank * cols + k]) / &prev;
                m[r * cols + k] = next;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}
