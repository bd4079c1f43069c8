//! Problem setup for the cyclic chain of length `n`: the mass constant,
//! the shift matrices `c∓` appearing in the connection, the cyclic Cartan
//! matrix governing the symmetric form of the equations, and its
//! closed-form discrete-Fourier eigenvectors.

use crate::numkit::{unity_power, Complex64, ComplexMatrix};
use crate::{Error, Result};

/// A point of the light-cone plane, coordinates `(z⁻, z⁺)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub zm: f64,
    pub zp: f64,
}

impl Point {
    pub fn new(zm: f64, zp: f64) -> Self {
        Self { zm, zp }
    }
}

/// Chain length `n` and mass constant `m`.
///
/// Field indices are cyclic: every public API accepts any integer `α` and
/// reduces it modulo `n` on access.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    n: usize,
    m: Complex64,
}

impl ModelParams {
    /// Requires `n ≥ 2` and `m ≠ 0` with finite components.
    pub fn new(n: usize, m: Complex64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!(
                "chain length n must be at least 2, got {n}"
            )));
        }
        if !m.re.is_finite() || !m.im.is_finite() {
            return Err(Error::InvalidParams("mass constant must be finite".into()));
        }
        if m.norm() == 0.0 {
            return Err(Error::InvalidParams("mass constant must be nonzero".into()));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> Complex64 {
        self.m
    }

    /// `ε_n^x = exp(2πi·x/n)`, the crate-wide root-of-unity convention.
    pub fn epsilon(&self, x: f64) -> Complex64 {
        unity_power(self.n, x)
    }

    /// Reduces a cyclic index into `0..n`.
    pub fn wrap(&self, alpha: i64) -> usize {
        alpha.rem_euclid(self.n as i64) as usize
    }

    /// The constant matrix `c₋ = m·(cyclic lower shift)`: ones at
    /// `(k+1, k)` for `k < n` and at `(1, n)` in 1-based labeling.
    pub fn c_minus(&self) -> ComplexMatrix {
        let n = self.n;
        let m = self.m;
        ComplexMatrix::from_fn(n, |i, j| {
            if (i + n - j) % n == 1 {
                m
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// The constant matrix `c₊ = m·(cyclic upper shift)`: ones at
    /// `(k, k+1)` and at `(n, 1)` in 1-based labeling.
    pub fn c_plus(&self) -> ComplexMatrix {
        let n = self.n;
        let m = self.m;
        ComplexMatrix::from_fn(n, |i, j| {
            if (j + n - i) % n == 1 {
                m
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Cyclic Cartan matrix: 2 on the diagonal, −1 on both cyclic
    /// off-diagonals. For `n = 2` the two bands merge into −2.
    pub fn cartan(&self) -> CartanMatrix {
        CartanMatrix::new(self.n)
    }

    /// Discrete-Fourier eigenvector `θ_ρ` with components
    /// `(θ_ρ)_α = ε_n^{(α+1)ρ}` for `α = 0..n−1`.
    ///
    /// These are simultaneous eigenvectors of the Cartan matrix
    /// (eigenvalue `κ_ρ²`) and of the shift matrices:
    /// `c₋θ_ρ = m ε_n^{−ρ} θ_ρ`, `c₊θ_ρ = m ε_n^{ρ} θ_ρ`, with the
    /// transposes carrying the conjugate phases.
    pub fn theta_vector(&self, rho: usize) -> Result<Vec<Complex64>> {
        if rho >= self.n {
            return Err(Error::IndexOutOfRange(format!(
                "theta index rho = {rho} must lie in 0..{}",
                self.n
            )));
        }
        Ok((0..self.n)
            .map(|alpha| self.epsilon(((alpha + 1) * rho) as f64))
            .collect())
    }

    /// `κ_ρ = 2 sin(πρ/n) > 0` for `ρ = 1..n−1`; `ρ = 0` is excluded
    /// because it contributes only a constant to the tau-functions.
    pub fn kappa(&self, rho: usize) -> Result<f64> {
        if rho == 0 || rho >= self.n {
            return Err(Error::IndexOutOfRange(format!(
                "kappa index rho = {rho} must lie in 1..{}",
                self.n
            )));
        }
        Ok(2.0 * (std::f64::consts::PI * rho as f64 / self.n as f64).sin())
    }

    /// `κ_ρ² = 4 sin²(πρ/n)`, total on all integers (`κ₀² = 0`); this is
    /// the Cartan eigenvalue attached to `θ_ρ`.
    pub fn kappa_sq(&self, rho: i64) -> f64 {
        let s = (std::f64::consts::PI * rho as f64 / self.n as f64).sin();
        4.0 * s * s
    }
}

/// Integer Cartan matrix of the cyclic chain; every row sums to zero and
/// the entry depends only on `(α − β) mod n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl CartanMatrix {
    fn new(n: usize) -> Self {
        let mut entries = vec![0i64; n * n];
        for alpha in 0..n {
            entries[alpha * n + alpha] += 2;
            entries[alpha * n + (alpha + 1) % n] -= 1;
            entries[alpha * n + (alpha + n - 1) % n] -= 1;
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `a_{αβ}` for arbitrary integer indices (reduced mod n).
    pub fn entry(&self, alpha: i64, beta: i64) -> i64 {
        let a = alpha.rem_euclid(self.n as i64) as usize;
        let b = beta.rem_euclid(self.n as i64) as usize;
        self.entries[a * self.n + b]
    }

    pub fn row(&self, alpha: i64) -> Vec<i64> {
        (0..self.n as i64).map(|b| self.entry(alpha, b)).collect()
    }

    #[cfg(test)]
    pub(crate) fn perturbed(&self, alpha: usize, beta: usize, delta: i64) -> Self {
        let mut out = self.clone();
        out.entries[alpha * self.n + beta] += delta;
        out
    }
}
