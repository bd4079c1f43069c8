//! Truncated tau-function construction of r-soliton solutions.
//!
//! Each soliton carries a mode index `ρ ∈ 1..n−1`, a nonzero spectral
//! amplitude `ζ` and a complex offset `δ`, producing the exponential
//!
//! ```text
//! E_{αi} = ε_n^{(α+1)ρᵢ} · exp[ m κ_{ρᵢ} (ζᵢ⁻¹ z⁻ + ζᵢ z⁺) + δᵢ ] .
//! ```
//!
//! The tau-function is the finite subset sum
//!
//! ```text
//! τ_α = Σ_{S ⊆ {1..r}}  (Π_{i<j ∈ S} η_{ij})  Π_{i ∈ S} E_{αi} ,
//! ```
//!
//! with pairwise interaction coefficients `η_{ij}`, and the fields are
//! `Γ_α = τ_α/τ_{α−1}` and `Δ_α = exp(−m²z⁺z⁻)·τ_α`. The series is exact
//! (it truncates), so τ is evaluated by direct subset enumeration rather
//! than by the perturbative recursion that produces it.

use crate::model::{ModelParams, Point};
use crate::numkit::Complex64;
use crate::{Error, Result};

/// Default cap on the soliton count; subset enumeration costs Θ(2^r)
/// per evaluation point.
pub const DEFAULT_SOLITON_CAP: usize = 12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One soliton: mode index, spectral amplitude, offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Soliton {
    pub rho: usize,
    pub zeta: Complex64,
    pub delta: Complex64,
}

impl Soliton {
    pub fn new(rho: usize, zeta: Complex64, delta: Complex64) -> Self {
        Self { rho, zeta, delta }
    }
}

/// Validated r-soliton data with the interaction coefficients cached.
///
/// Construction rejects mode indices outside `1..n−1`, vanishing `ζ`,
/// resonant pairs (interaction denominator below 1e-12) and soliton
/// counts above the cap. Pure evaluation; freely shareable.
#[derive(Debug, Clone)]
pub struct SolitonParams {
    model: ModelParams,
    solitons: Vec<Soliton>,
    kappas: Vec<f64>,
    /// r×r table of pairwise interaction coefficients, zero diagonal.
    eta: Vec<Complex64>,
    /// `eta_subset[mask] = Π_{i<j ∈ mask} η_{ij}`, indexed by subset bitmask.
    eta_subset: Vec<Complex64>,
    cap: usize,
}

impl SolitonParams {
    pub fn new(model: ModelParams, solitons: Vec<Soliton>) -> Result<Self> {
        Self::with_cap(model, solitons, DEFAULT_SOLITON_CAP)
    }

    pub fn with_cap(model: ModelParams, solitons: Vec<Soliton>, cap: usize) -> Result<Self> {
        let r = solitons.len();
        if r > cap {
            return Err(Error::TooManySolitons { r, cap });
        }
        let mut kappas = Vec::with_capacity(r);
        for s in &solitons {
            if s.rho == 0 || s.rho >= model.n() {
                return Err(Error::IndexOutOfRange(format!(
                    "soliton mode rho = {} must lie in 1..{}",
                    s.rho,
                    model.n()
                )));
            }
            let finite = s.zeta.re.is_finite()
                && s.zeta.im.is_finite()
                && s.delta.re.is_finite()
                && s.delta.im.is_finite();
            if !finite {
                return Err(Error::InvalidParams(
                    "soliton parameters must be finite".into(),
                ));
            }
            if s.zeta.norm() == 0.0 {
                return Err(Error::InvalidParams(
                    "soliton amplitude zeta must be nonzero".into(),
                ));
            }
            kappas.push(model.kappa(s.rho)?);
        }
        let mut eta = vec![ZERO; r * r];
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    eta[i * r + j] = eta_pair_value(&model, &solitons[i], &solitons[j]).ok_or(
                        Error::ResonantPair {
                            i: i.min(j),
                            j: i.max(j),
                        },
                    )?;
                }
            }
        }
        let eta_subset = subset_products(r, &eta);
        Ok(Self {
            model,
            solitons,
            kappas,
            eta,
            eta_subset,
            cap,
        })
    }

    pub fn model(&self) -> &ModelParams {
        &self.model
    }

    pub fn solitons(&self) -> &[Soliton] {
        &self.solitons
    }

    /// Soliton count r.
    pub fn r(&self) -> usize {
        self.solitons.len()
    }

    /// The exponential `E_{αi}` of soliton `i` (0-based) at `pt`.
    pub fn exp_e(&self, alpha: i64, i: usize, pt: Point) -> Complex64 {
        let s = &self.solitons[i];
        let phase = self.model.epsilon((alpha + 1) as f64 * s.rho as f64);
        let rate = self.model.m() * self.kappas[i];
        let exponent = rate * (pt.zm / s.zeta + pt.zp * s.zeta) + s.delta;
        phase * exponent.exp()
    }

    /// Interaction coefficient of the pair `(i, j)`, recomputed from the
    /// cosine form; symmetric, zero for `i = j`.
    pub fn eta_pair(&self, i: usize, j: usize) -> Result<Complex64> {
        if i >= self.r() || j >= self.r() {
            return Err(Error::IndexOutOfRange(format!(
                "soliton pair ({i}, {j}) out of range for r = {}",
                self.r()
            )));
        }
        if i == j {
            return Ok(ZERO);
        }
        eta_pair_value(&self.model, &self.solitons[i], &self.solitons[j]).ok_or(
            Error::ResonantPair {
                i: i.min(j),
                j: i.max(j),
            },
        )
    }

    /// Cached interaction coefficient (validated at construction).
    pub fn eta(&self, i: usize, j: usize) -> Complex64 {
        self.eta[i * self.r() + j]
    }

    /// The tau-function `τ_α(pt)`, exact finite subset sum; n-periodic
    /// in `α` by construction.
    pub fn tau(&self, alpha: i64, pt: Point) -> Complex64 {
        let r = self.r();
        let e: Vec<Complex64> = (0..r).map(|i| self.exp_e(alpha, i, pt)).collect();
        // Subset products by clearing the lowest set bit: every mask is a
        // single multiply away from a previously computed one.
        let mut eprod = vec![ONE; 1 << r];
        let mut total = self.eta_subset[0];
        for mask in 1usize..(1 << r) {
            let low = mask.trailing_zeros() as usize;
            eprod[mask] = eprod[mask & (mask - 1)] * e[low];
            total += self.eta_subset[mask] * eprod[mask];
        }
        total
    }

    /// First-order part `τ_α^{(1)} = Σ_i E_{αi}` of the series; used by
    /// the recursion spot-checks.
    pub fn tau_first_order(&self, alpha: i64, pt: Point) -> Complex64 {
        (0..self.r()).map(|i| self.exp_e(alpha, i, pt)).sum()
    }

    /// The field `Γ_α = τ_α/τ_{α−1}`.
    ///
    /// Fails with [`Error::AtSolutionPole`] when the denominator
    /// tau-function vanishes at `pt` (magnitude below `1e-13·(1+|τ_α|)`).
    pub fn gamma(&self, alpha: i64, pt: Point) -> Result<Complex64> {
        let num = self.tau(alpha, pt);
        let den = self.tau(alpha - 1, pt);
        if den.norm() <= 1e-13 * (1.0 + num.norm()) {
            return Err(Error::AtSolutionPole {
                zm: pt.zm,
                zp: pt.zp,
            });
        }
        Ok(num / den)
    }

    /// The symmetric-form field `Δ_α = exp(−m²z⁺z⁻)·τ_α`.
    pub fn delta_field(&self, alpha: i64, pt: Point) -> Complex64 {
        let m = self.model.m();
        let prefactor = (-(m * m) * pt.zp * pt.zm).exp();
        prefactor * self.tau(alpha, pt)
    }

    /// Removes soliton `i`; this is the `δᵢ → −∞` limit, taken exactly.
    pub fn without_soliton(&self, i: usize) -> Self {
        let mut reduced = self.solitons.clone();
        reduced.remove(i);
        Self::with_cap(self.model.clone(), reduced, self.cap)
            .expect("removing a soliton cannot invalidate the remaining data")
    }

    /// Diagnostic: returns a copy with `η_{ij}` (and `η_{ji}`) scaled by
    /// `factor`. Used as a negative control — a perturbed coefficient
    /// must break the bilinear residual convergence.
    pub fn with_scaled_eta(&self, i: usize, j: usize, factor: f64) -> Self {
        let r = self.r();
        let mut out = self.clone();
        out.eta[i * r + j] *= factor;
        out.eta[j * r + i] *= factor;
        out.eta_subset = subset_products(r, &out.eta);
        out
    }
}

/// Cosine form of the interaction coefficient; `None` when the
/// denominator magnitude is below 1e-12 (resonant pair).
fn eta_pair_value(model: &ModelParams, a: &Soliton, b: &Soliton) -> Option<Complex64> {
    let x = a.zeta / b.zeta + b.zeta / a.zeta;
    let pi_n = std::f64::consts::PI / model.n() as f64;
    let diff = (pi_n * (a.rho as f64 - b.rho as f64)).cos();
    let sum = (pi_n * (a.rho as f64 + b.rho as f64)).cos();
    let den = x - 2.0 * sum;
    if den.norm() < 1e-12 {
        return None;
    }
    Some((x - 2.0 * diff) / den)
}

/// `out[mask] = Π_{i<j ∈ mask} η_{ij}` for every subset bitmask.
fn subset_products(r: usize, eta: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ONE; 1 << r];
    for mask in 1usize..(1 << r) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut v = out[rest];
        let mut mm = rest;
        while mm != 0 {
            let j = mm.trailing_zeros() as usize;
            v *= eta[low * r + j];
            mm &= mm - 1;
        }
        out[mask] = v;
    }
    out
}
