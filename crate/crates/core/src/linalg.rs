//! Small dense matrix/vector helpers shared by the solvers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.max(-x)))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(a.iter().map(|x| x * x).sum())
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, &x| m.max(x.max(-x)))
}

/// Entrywise difference 2-norm between two equally shaped matrices.
pub fn diff_norm2(a: &Mat, b: &Mat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    libm::sqrt(
        a.data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| (x - y) * (x - y))
            .sum(),
    )
}

/// Compensated (Kahan) summation; used where plain summation would lose
/// more accuracy than the callers' tolerances allow.
pub fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// The coefficient matrix handed to [`lu_solve`] was numerically singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix;

impl fmt::Display for SingularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix is singular to working precision")
    }
}

/// Solves `a * x = b` in place by LU factorization with partial pivoting.
///
/// `a` is destroyed and `b` is overwritten with the solution.
pub fn lu_solve(a: &mut Mat, b: &mut [f64]) -> Result<(), SingularMatrix> {
    let n = a.rows();
    debug_assert_eq!(a.cols(), n);
    debug_assert_eq!(b.len(), n);

    for k in 0..n {
        // Pivot selection.
        let mut piv = k;
        let mut best = a[(k, k)].abs_();
        for r in k + 1..n {
            let cand = a[(r, k)].abs_();
            if cand > best {
                best = cand;
                piv = r;
            }
        }
        if best < 1e-300 {
            return Err(SingularMatrix);
        }
        if piv != k {
            for c in 0..n {
                let tmp = a[(k, c)];
                a[(k, c)] = a[(piv, c)];
                a[(piv, c)] = tmp;
            }
            b.swap(k, piv);
        }
        let inv = 1.0 / a[(k, k)];
        for r in k + 1..n {
            let factor = a[(r, k)] * inv;
            if factor == 0.0 {
                continue;
            }
            a[(r, k)] = 0.0;
            for c in k + 1..n {
                a[(r, c)] -= factor * a[(k, c)];
            }
            b[r] -= factor * b[k];
        }
    }
    // Back substitution.
    for k in (0..n).rev() {
        let mut acc = b[k];
        for c in k + 1..n {
            acc -= a[(k, c)] * b[c];
        }
        b[k] = acc / a[(k, k)];
    }
    Ok(())
}

/// `abs` without `std`; `f64::abs` is not available in `core`.
pub(crate) trait AbsExt {
    fn abs_(self) -> f64;
}

impl AbsExt for f64 {
    #[inline]
    fn abs_(self) -> f64 {
        libm::fabs(self)
    }
}
