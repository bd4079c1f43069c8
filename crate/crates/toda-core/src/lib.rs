//! Exact multi-soliton solutions of the periodic Toda field equations in
//! light-cone coordinates, built by two independent routes and cross-checked.
//!
//! The equations form a cyclic chain of `n` complex fields `Γ_α(z⁻, z⁺)`,
//!
//! ```text
//! ∂₊(Γ_α⁻¹ ∂₋Γ_α) = −m² (Γ_α⁻¹ Γ_{α+1} − Γ_{α−1}⁻¹ Γ_α),    Γ_{α+n} = Γ_α .
//! ```
//!
//! Two construction routes are implemented:
//!
//! * [`hirota`] — truncated tau-function series: `Γ_α = τ_α/τ_{α−1}` with
//!   `τ_α` a finite sum of exponentials weighted by pairwise interaction
//!   coefficients.
//! * [`dressing`] — rational dressing of the trivial wave function: `Γ_α`
//!   is the ratio of determinants of a quasi-periodic Cauchy-like matrix
//!   built from spectral pole data.
//!
//! The [`verify`] module provides independent oracles (finite-difference
//! residuals of the field equations, the bilinear form, the zero-curvature
//! condition, and a suite of closed-form determinant identities) used to
//! check both routes against each other and against the equations.

pub mod dressing;
mod error;
pub mod hirota;
pub mod model;
pub mod numkit;
#[cfg(test)]
pub(crate) mod testkit;
pub mod verify;

pub use error::Error;
pub use model::{ModelParams, Point};
pub use numkit::{Complex64, ComplexMatrix};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
