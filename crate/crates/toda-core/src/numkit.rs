//! Dense complex linear algebra kernel: roots of unity, LU factorization
//! with partial pivoting, determinants, solves and inverses.
//!
//! The matrices in this crate are small (soliton counts and chain lengths
//! in the tens), so a straightforward O(dim³) kernel with partial pivoting
//! is used throughout. All types are immutable after construction and all
//! operations are pure.

use crate::{Error, Result};

pub use num_complex::Complex64;

/// Relative pivot threshold below which a factorization is flagged singular.
const PIVOT_TOL: f64 = 1e-14;

/// Returns `exp(2πi·x/n)`.
///
/// For integer `x` this is the x-th power of the principal n-th root of
/// unity. Fractional `x` (in particular half-integers) uses the principal
/// branch throughout the crate, so branch choices cancel in all
/// observable quantities. `x` is reduced modulo `n` before the angle is
/// formed, which makes the n-periodicity in `x` hold to roundoff.
pub fn unity_power(n: usize, x: f64) -> Complex64 {
    debug_assert!(n >= 1);
    let reduced = x.rem_euclid(n as f64);
    Complex64::from_polar(1.0, std::f64::consts::TAU * reduced / n as f64)
}

/// Dense square complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix entry by entry from `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product requires equal dims");
        let n = self.dim;
        Self::from_fn(n, |i, j| {
            (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            self.dim,
            v.len(),
            "matrix-vector product requires equal dims"
        );
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.get(i, k) * v[k]).sum())
            .collect()
    }

    /// Entrywise difference `self − other`.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        Self::from_fn(n, |i, j| self.get(i, j) - other.get(i, j))
    }

    /// Entrywise sum `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        Self::from_fn(n, |i, j| self.get(i, j) + other.get(i, j))
    }

    /// Scalar multiple.
    pub fn scale(&self, k: Complex64) -> Self {
        Self::from_fn(self.dim, |i, j| k * self.get(i, j))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Partial-pivoted LU factorization, `P·A = L·U`.
    ///
    /// Fails with [`Error::SingularMatrix`] when a pivot magnitude drops
    /// below `1e-14` of the largest entry of `A`; in the solvers this
    /// signals a solution pole or degenerate input data.
    pub fn lu_factor(&self) -> Result<LuFactors> {
        let f = self.lu_unchecked();
        if f.singular {
            Err(Error::SingularMatrix)
        } else {
            Ok(f)
        }
    }

    /// Determinant via LU: product of the U diagonal times the pivot sign.
    ///
    /// Total on square matrices; a singular matrix yields a value that is
    /// zero within the pivot tolerance.
    pub fn det(&self) -> Complex64 {
        let f = self.lu_unchecked();
        let mut d = Complex64::new(f.sign, 0.0);
        for k in 0..self.dim {
            d *= f.lu.get(k, k);
        }
        d
    }

    /// Solves `A·X = B` for a conformable right-hand side matrix.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "solve: lhs dim {} vs rhs dim {}",
                self.dim, rhs.dim
            )));
        }
        let f = self.lu_factor()?;
        let n = self.dim;
        let mut x = Self::zeros(n);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = rhs.get(i, j);
            }
            let sol = f.solve_vec(&col);
            for i in 0..n {
                x.set(i, j, sol[i]);
            }
        }
        Ok(x)
    }

    /// Solves `A·x = b` for a single right-hand side vector.
    pub fn solve_vec(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        if rhs.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "solve_vec: dim {} vs rhs len {}",
                self.dim,
                rhs.len()
            )));
        }
        Ok(self.lu_factor()?.solve_vec(rhs))
    }

    /// Matrix inverse via `solve(A, I)`.
    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.dim))
    }

    /// Factorization that always completes; pivot underflow only sets the
    /// singular flag and skips elimination for that column, so the U
    /// diagonal stays meaningful for the determinant.
    fn lu_unchecked(&self) -> LuFactors {
        let n = self.dim;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = n == 0;
        let threshold = PIVOT_TOL * self.max_abs();

        for k in 0..n {
            let mut p = k;
            let mut best = lu.get(k, k).norm();
            for i in k + 1..n {
                let mag = lu.get(i, k).norm();
                if mag > best {
                    best = mag;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, tmp);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            if best < threshold || best == 0.0 {
                singular = true;
                continue;
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let factor = lu.get(i, k) / pivot;
                lu.set(i, k, factor);
                for j in k + 1..n {
                    let v = lu.get(i, j) - factor * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
        }

        LuFactors {
            lu,
            perm,
            sign,
            singular,
        }
    }
}

/// Packed LU factors with the row permutation and its sign.
///
/// Row `i` of `P·A` is row `perm[i]` of `A`; `L` has a unit diagonal and
/// lives strictly below the diagonal of `lu`, `U` on and above it.
#[derive(Debug, Clone)]
pub struct LuFactors {
    pub lu: ComplexMatrix,
    pub perm: Vec<usize>,
    pub sign: f64,
    singular: bool,
}

impl LuFactors {
    /// Extracts the unit-lower-triangular factor.
    pub fn lower(&self) -> ComplexMatrix {
        let n = self.lu.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else if i > j {
                self.lu.get(i, j)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Extracts the upper-triangular factor.
    pub fn upper(&self) -> ComplexMatrix {
        let n = self.lu.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            if i <= j {
                self.lu.get(i, j)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Forward/back substitution for one right-hand side.
    fn solve_vec(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        let mut y: Vec<Complex64> = (0..n).map(|i| rhs[self.perm[i]]).collect();
        for i in 0..n {
            for j in 0..i {
                let yj = y[j];
                y[i] -= self.lu.get(i, j) * yj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let yj = y[j];
                y[i] -= self.lu.get(i, j) * yj;
            }
            y[i] /= self.lu.get(i, i);
        }
        y
    }
}
