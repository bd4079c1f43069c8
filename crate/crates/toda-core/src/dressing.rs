//! Rational dressing construction of Toda fields from spectral pole data.
//!
//! A dressing factor `ψ(λ)` rational on the spectral sphere, regular at 0
//! and ∞, with simple poles at the points `ε_n^k μᵢ` (and `ε_n^k νᵢ` for
//! its inverse), is applied to the trivial wave function. Demanding that
//! the dressed connection keeps its graded form forces rank-one residue
//! matrices `Pᵢ = uᵢ·ᵗwᵢ`, `Qᵢ = xᵢ·ᵗyᵢ` whose vector data solve linear
//! exponential equations. Everything reduces to the quasi-periodic r×r
//! matrix `R̃_α` of [`DressingData::r_tilde`]; the field is the
//! determinant ratio
//!
//! ```text
//! Γ_α = det R̃_{α+1} / det R̃_α .
//! ```
//!
//! [`specialize`] restricts the coefficient tables to one mode per pole
//! row and two per inverse-pole row, which collapses `R̃_α` (up to a
//! diagonal conjugation and a constant) to the matrix `T_α` whose
//! determinant is a tau-function of the [`crate::hirota`] form — the
//! bridge used by the cross-method checks.

use crate::hirota::{Soliton, SolitonParams};
use crate::model::{ModelParams, Point};
use crate::numkit::{Complex64, ComplexMatrix};
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative tolerance for the n-th power separation of pole positions.
const SEPARATION_TOL: f64 = 1e-10;

/// Light-cone exponent `Z_ρ(μ) = m (ε_n^{−ρ} μ⁻¹ z⁻ + ε_n^{ρ} μ z⁺)`;
/// n-periodic in `ρ`.
pub fn z_exponent(model: &ModelParams, rho: i64, mu: Complex64, pt: Point) -> Result<Complex64> {
    if mu.norm() == 0.0 {
        return Err(Error::ZeroPole);
    }
    let m = model.m();
    let rho = rho as f64;
    Ok(m * (model.epsilon(-rho) / mu * pt.zm + model.epsilon(rho) * mu * pt.zp))
}

/// Spectral pole positions `μᵢ`, `νᵢ` and the coefficient tables
/// `c_{iρ}`, `d_{iρ}` (ρ = 1..n) parameterizing the vector data.
///
/// Invariants enforced at construction: all poles nonzero, the n-th
/// powers `μᵢⁿ` pairwise distinct, `νᵢⁿ` pairwise distinct, and
/// `μᵢⁿ ≠ ν_jⁿ`, each with relative tolerance 1e-10. Pure evaluation
/// over immutable data; per-point work is independent.
#[derive(Debug, Clone)]
pub struct DressingData {
    model: ModelParams,
    mu: Vec<Complex64>,
    nu: Vec<Complex64>,
    /// r×n, entry `[i][ρ−1]` multiplies `ε_n^{kρ} e^{−Z_ρ(μᵢ)}` in `u`.
    c_coef: Vec<Vec<Complex64>>,
    /// r×n, entry `[i][ρ−1]` multiplies `ε_n^{kρ} e^{Z_{−ρ}(νᵢ)}` in `y`.
    d_coef: Vec<Vec<Complex64>>,
}

impl DressingData {
    pub fn new(
        model: ModelParams,
        mu: Vec<Complex64>,
        nu: Vec<Complex64>,
        c_coef: Vec<Vec<Complex64>>,
        d_coef: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        let r = mu.len();
        let n = model.n();
        if nu.len() != r || c_coef.len() != r || d_coef.len() != r {
            return Err(Error::InvalidParams(format!(
                "pole and coefficient tables must all have {r} rows"
            )));
        }
        for (label, rows) in [("c", &c_coef), ("d", &d_coef)] {
            for (i, coefs) in rows.iter().enumerate() {
                if coefs.len() != n {
                    return Err(Error::InvalidParams(format!(
                        "coefficient row {label}[{i}] must have n = {n} entries"
                    )));
                }
                if coefs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::InvalidParams(format!(
                        "coefficient row {label}[{i}] must be finite"
                    )));
                }
            }
        }
        for (label, poles) in [("mu", &mu), ("nu", &nu)] {
            for (i, p) in poles.iter().enumerate() {
                if !p.re.is_finite() || !p.im.is_finite() || p.norm() == 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "pole {label}[{i}] must be finite and nonzero"
                    )));
                }
            }
        }
        let mu_n: Vec<Complex64> = mu.iter().map(|z| z.powu(n as u32)).collect();
        let nu_n: Vec<Complex64> = nu.iter().map(|z| z.powu(n as u32)).collect();
        let close =
            |a: Complex64, b: Complex64| (a - b).norm() <= SEPARATION_TOL * a.norm().max(b.norm());
        for i in 0..r {
            for j in 0..r {
                if i < j && close(mu_n[i], mu_n[j]) {
                    return Err(Error::InvalidParams(format!(
                        "pole separation violated: mu[{i}]^n coincides with mu[{j}]^n"
                    )));
                }
                if i < j && close(nu_n[i], nu_n[j]) {
                    return Err(Error::InvalidParams(format!(
                        "pole separation violated: nu[{i}]^n coincides with nu[{j}]^n"
                    )));
                }
                if close(nu_n[i], mu_n[j]) {
                    return Err(Error::InvalidParams(format!(
                        "pole separation violated: nu[{i}]^n coincides with mu[{j}]^n"
                    )));
                }
            }
        }
        Ok(Self {
            model,
            mu,
            nu,
            c_coef,
            d_coef,
        })
    }

    pub fn model(&self) -> &ModelParams {
        &self.model
    }

    /// Pole count r.
    pub fn r(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[Complex64] {
        &self.mu
    }

    pub fn nu(&self) -> &[Complex64] {
        &self.nu
    }

    pub fn c_coef(&self) -> &[Vec<Complex64>] {
        &self.c_coef
    }

    pub fn d_coef(&self) -> &[Vec<Complex64>] {
        &self.d_coef
    }

    /// The vector tables `u_{ik}` and `y_{ik}` (k = 1..n stored 0-based),
    /// n-periodic in k:
    ///
    /// ```text
    /// u_{ik} = Σ_ρ c_{iρ} ε_n^{kρ} e^{−Z_ρ(μᵢ)} ,
    /// y_{ik} = Σ_ρ d_{iρ} ε_n^{kρ} e^{Z_{−ρ}(νᵢ)} .
    /// ```
    ///
    /// They solve `∂∓u = −μ^{∓1} c∓ u` and `∂∓y = ν^{∓1}·ᵗc∓·y`.
    pub fn uy_vectors(&self, pt: Point) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
        let n = self.model.n();
        let r = self.r();
        let mut u = vec![vec![ZERO; n]; r];
        let mut y = vec![vec![ZERO; n]; r];
        for i in 0..r {
            for rho in 1..=n {
                let zc = z_exponent(&self.model, rho as i64, self.mu[i], pt)
                    .expect("pole validated nonzero");
                let zd = z_exponent(&self.model, -(rho as i64), self.nu[i], pt)
                    .expect("pole validated nonzero");
                let cw = self.c_coef[i][rho - 1] * (-zc).exp();
                let dw = self.d_coef[i][rho - 1] * zd.exp();
                for k0 in 0..n {
                    let phase = self.model.epsilon(((k0 + 1) * rho) as f64);
                    u[i][k0] += cw * phase;
                    y[i][k0] += dw * phase;
                }
            }
        }
        (u, y)
    }

    /// Quasi-periodic vector component `ũ_{iα} = μᵢ^α u_{iα}`.
    pub fn u_tilde(&self, alpha: i64, pt: Point) -> Vec<Complex64> {
        let (u, _) = self.uy_vectors(pt);
        self.u_tilde_from(&u, alpha)
    }

    /// Quasi-periodic vector component `ỹ_{iα} = νᵢ^{−α} y_{iα}`.
    pub fn y_tilde(&self, alpha: i64, pt: Point) -> Vec<Complex64> {
        let (_, y) = self.uy_vectors(pt);
        self.y_tilde_from(&y, alpha)
    }

    fn u_tilde_from(&self, u: &[Vec<Complex64>], alpha: i64) -> Vec<Complex64> {
        let k0 = self.model.wrap(alpha - 1);
        (0..self.r())
            .map(|i| self.mu[i].powi(alpha as i32) * u[i][k0])
            .collect()
    }

    fn y_tilde_from(&self, y: &[Vec<Complex64>], alpha: i64) -> Vec<Complex64> {
        let k0 = self.model.wrap(alpha - 1);
        (0..self.r())
            .map(|i| self.nu[i].powi(-(alpha as i32)) * y[i][k0])
            .collect()
    }

    /// The quasi-periodic r×r matrix
    ///
    /// ```text
    /// (R̃_α)_{ij} = (νᵢⁿ − μ_jⁿ)⁻¹ [ μ_jⁿ Σ_{β=1}^{α−1} ỹ_{iβ} ũ_{jβ}
    ///                              + νᵢⁿ Σ_{β=α}^{n} ỹ_{iβ} ũ_{jβ} ]
    /// ```
    ///
    /// evaluated for any integer `α` through its quasi-periodicity
    /// `R̃_{α+n} = N^{−n} R̃_α M^n` (N, M the diagonal pole matrices). It
    /// telescopes: `R̃_{α+1} = R̃_α − ỹ_α·ᵗũ_α`.
    pub fn r_tilde(&self, alpha: i64, pt: Point) -> ComplexMatrix {
        let (u, y) = self.uy_vectors(pt);
        self.r_tilde_from(&u, &y, alpha)
    }

    fn r_tilde_from(
        &self,
        u: &[Vec<Complex64>],
        y: &[Vec<Complex64>],
        alpha: i64,
    ) -> ComplexMatrix {
        let n = self.model.n() as i64;
        let r = self.r();
        // alpha = abar + q·n with abar in 1..=n
        let q = (alpha - 1).div_euclid(n);
        let abar = alpha - q * n;
        let mu_n: Vec<Complex64> = self.mu.iter().map(|z| z.powu(n as u32)).collect();
        let nu_n: Vec<Complex64> = self.nu.iter().map(|z| z.powu(n as u32)).collect();
        ComplexMatrix::from_fn(r, |i, j| {
            let mut head = ZERO; // β = 1..abar−1
            let mut tail = ZERO; // β = abar..n
            for beta in 1..=n {
                let term = self.nu[i].powi(-(beta as i32))
                    * y[i][(beta - 1) as usize]
                    * self.mu[j].powi(beta as i32)
                    * u[j][(beta - 1) as usize];
                if beta < abar {
                    head += term;
                } else {
                    tail += term;
                }
            }
            let base = (mu_n[j] * head + nu_n[i] * tail) / (nu_n[i] - mu_n[j]);
            if q == 0 {
                base
            } else {
                let shift = (q * n) as i32;
                base * self.nu[i].powi(-shift) * self.mu[j].powi(shift)
            }
        })
    }

    /// The n-periodic matrix `R_α = N^α R̃_α M^{−α}` entering the
    /// rank-one factor reconstruction.
    pub fn r_matrix(&self, alpha: i64, pt: Point) -> ComplexMatrix {
        let rt = self.r_tilde(alpha, pt);
        self.conjugate_to_r(&rt, alpha)
    }

    fn conjugate_to_r(&self, r_tilde: &ComplexMatrix, alpha: i64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.r(), |i, j| {
            self.nu[i].powi(alpha as i32) * r_tilde.get(i, j) * self.mu[j].powi(-(alpha as i32))
        })
    }

    /// Companion matrix of the transposed relations,
    /// `(S_k)_{ji} = −(ν_jⁿ − μᵢⁿ)⁻¹ Σ_ℓ ν_j^{|k−ℓ|_n} μᵢ^{n−|k−ℓ|_n} y_{jℓ} u_{iℓ}`;
    /// satisfies `(S_k)_{ji} = −(μᵢ/ν_j)(R_{k+1})_{ji}`.
    pub fn s_matrix(&self, k: i64, pt: Point) -> ComplexMatrix {
        let (u, y) = self.uy_vectors(pt);
        let n = self.model.n();
        let mu_n: Vec<Complex64> = self.mu.iter().map(|z| z.powu(n as u32)).collect();
        let nu_n: Vec<Complex64> = self.nu.iter().map(|z| z.powu(n as u32)).collect();
        ComplexMatrix::from_fn(self.r(), |j, i| {
            let mut sum = ZERO;
            for ell in 1..=n as i64 {
                let e = (k - ell).rem_euclid(n as i64) as u32;
                sum += self.nu[j].powu(e)
                    * self.mu[i].powu(n as u32 - e)
                    * y[j][(ell - 1) as usize]
                    * u[i][(ell - 1) as usize];
            }
            -sum / (nu_n[j] - mu_n[i])
        })
    }

    /// The field `Γ_α = det R̃_{α+1} / det R̃_α`.
    ///
    /// In debug builds the result is cross-checked against the bordered
    /// form `1 − ᵗũ_α R̃_α⁻¹ ỹ_α` (matrix determinant lemma) whenever
    /// `R̃_α` is comfortably invertible.
    pub fn gamma(&self, alpha: i64, pt: Point) -> Result<Complex64> {
        let (u, y) = self.uy_vectors(pt);
        let den_m = self.r_tilde_from(&u, &y, alpha);
        let num_m = self.r_tilde_from(&u, &y, alpha + 1);
        let den = den_m.det();
        let num = num_m.det();
        if den.norm() <= 1e-13 * (1.0 + num.norm()) {
            return Err(Error::AtSolutionPole {
                zm: pt.zm,
                zp: pt.zp,
            });
        }
        let gamma = num / den;
        #[cfg(debug_assertions)]
        {
            let scale = den_m.max_abs();
            if self.r() > 0 && den.norm() > 1e-8 * scale.powi(self.r() as i32) {
                if let Ok(inv_y) = den_m.solve_vec(&self.y_tilde_from(&y, alpha)) {
                    let ut = self.u_tilde_from(&u, alpha);
                    let bordered = ONE
                        - ut.iter()
                            .zip(inv_y.iter())
                            .map(|(a, b)| a * b)
                            .sum::<Complex64>();
                    debug_assert!(
                        (gamma - bordered).norm() <= 1e-9 * (1.0 + gamma.norm()),
                        "determinant ratio and bordered form disagree: {gamma} vs {bordered}"
                    );
                }
            }
        }
        Ok(gamma)
    }

    /// Inverses of `R_k` for k = 1..n (`R` is n-periodic, so these cover
    /// every component index).
    fn r_inverses(&self, u: &[Vec<Complex64>], y: &[Vec<Complex64>]) -> Result<Vec<ComplexMatrix>> {
        let n = self.model.n();
        (1..=n as i64)
            .map(|k| {
                let rt = self.r_tilde_from(u, y, k);
                self.conjugate_to_r(&rt, k)
                    .inverse()
                    .map_err(|_| Error::SingularRk { k: k as usize })
            })
            .collect()
    }

    /// The rank-one residue matrices
    ///
    /// ```text
    /// (Pᵢ)_{kℓ} = −(1/n) u_{ik} Σ_j (R_ℓ⁻¹)_{ij} y_{jℓ} ,
    /// (Qᵢ)_{kℓ} = (1/n) Σ_j u_{jk} μ_j⁻¹ (R_{k+1}⁻¹)_{ji} νᵢ y_{iℓ} .
    /// ```
    pub fn pq_matrices(&self, pt: Point) -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>)> {
        let (u, y) = self.uy_vectors(pt);
        let n = self.model.n();
        let r = self.r();
        if r == 0 {
            return Ok((Vec::new(), Vec::new()));
        }
        let rinv = self.r_inverses(&u, &y)?;
        let nf = n as f64;
        let mut p = Vec::with_capacity(r);
        let mut q = Vec::with_capacity(r);
        for i in 0..r {
            p.push(ComplexMatrix::from_fn(n, |k0, l0| {
                let sum: Complex64 = (0..r).map(|j| rinv[l0].get(i, j) * y[j][l0]).sum();
                -u[i][k0] * sum / nf
            }));
            q.push(ComplexMatrix::from_fn(n, |k0, l0| {
                // R_{k+1} for 1-based k = k0+1; periodicity gives R_{n+1} = R_1
                let sum: Complex64 = (0..r)
                    .map(|j| u[j][k0] / self.mu[j] * rinv[(k0 + 1) % n].get(j, i))
                    .sum();
                sum * self.nu[i] * y[i][l0] / nf
            }));
        }
        Ok((p, q))
    }

    /// Diagonal twist matrix `h` with `h_{kk} = ε_n^{n−k+1}` (1-based k);
    /// conjugation by its powers implements the loop-group automorphism.
    pub fn twist_matrix(&self) -> ComplexMatrix {
        let n = self.model.n();
        ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                self.model.epsilon((n - i) as f64)
            } else {
                ZERO
            }
        })
    }

    /// Entrywise phase of `h^a · X · h^{−a}`: entry (k, l) picks up
    /// `ε_n^{a(l−k)}` (0-based indices).
    fn twisted(&self, x: &ComplexMatrix, a: i64) -> ComplexMatrix {
        ComplexMatrix::from_fn(x.dim(), |k, l| {
            self.model.epsilon((a * (l as i64 - k as i64)) as f64) * x.get(k, l)
        })
    }

    /// Sum `I + Σ_j Σ_{k=1}^n w/(w − ε_n^k p_j) · h^k X_j h^{−k}` shared by
    /// the dressing factor and the residue relations.
    fn pole_average(
        &self,
        w: Complex64,
        poles: &[Complex64],
        mats: &[ComplexMatrix],
    ) -> ComplexMatrix {
        let n = self.model.n();
        let mut acc = ComplexMatrix::identity(n);
        for (j, x) in mats.iter().enumerate() {
            for k in 1..=n as i64 {
                let weight = w / (w - self.model.epsilon(k as f64) * poles[j]);
                acc = acc.add(&self.twisted(x, k).scale(weight));
            }
        }
        acc
    }

    fn check_pole_distance(&self, lambda: Complex64, poles: &[Complex64]) -> Result<()> {
        let n = self.model.n();
        for p in poles {
            for k in 1..=n as i64 {
                if (lambda - self.model.epsilon(k as f64) * p).norm() <= 1e-8 {
                    return Err(Error::AtPole);
                }
            }
        }
        Ok(())
    }

    /// The dressing factor `ψ(λ) = I + Σᵢ Σₖ λ/(λ−ε_n^k μᵢ) h^k Pᵢ h^{−k}`
    /// (normalization `ψ(0) = I`). Twist-equivariant:
    /// `ψ(ε_n λ) = h ψ(λ) h⁻¹`.
    pub fn psi(&self, lambda: Complex64, pt: Point) -> Result<ComplexMatrix> {
        self.check_pole_distance(lambda, &self.mu)?;
        let (p, _) = self.pq_matrices(pt)?;
        Ok(self.pole_average(lambda, &self.mu, &p))
    }

    /// The inverse factor `ψ⁻¹(λ) = I + Σᵢ Σₖ λ/(λ−ε_n^k νᵢ) h^k Qᵢ h^{−k}`.
    pub fn psi_inv(&self, lambda: Complex64, pt: Point) -> Result<ComplexMatrix> {
        self.check_pole_distance(lambda, &self.nu)?;
        let (_, q) = self.pq_matrices(pt)?;
        Ok(self.pole_average(lambda, &self.nu, &q))
    }

    /// The solution read off at spectral infinity:
    /// `γ_{kk} = 1 + n Σᵢ (Pᵢ)_{kk}`, returned as the n diagonal values.
    ///
    /// The averaged off-diagonal contributions cancel through the
    /// root-of-unity sum; this is asserted below 1e-11 in debug builds.
    pub fn gamma_from_psi_infinity(&self, pt: Point) -> Result<Vec<Complex64>> {
        let n = self.model.n();
        let (p, _) = self.pq_matrices(pt)?;
        #[cfg(debug_assertions)]
        {
            let mut avg = ComplexMatrix::zeros(n);
            for x in &p {
                for k in 1..=n as i64 {
                    avg = avg.add(&self.twisted(x, k));
                }
            }
            let scale: f64 = p.iter().map(|x| x.max_abs()).fold(0.0, f64::max);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        debug_assert!(
                            avg.get(i, j).norm() < 1e-11 * (1.0 + n as f64 * scale),
                            "averaged residue matrix has off-diagonal leakage"
                        );
                    }
                }
            }
        }
        Ok((0..n)
            .map(|k| ONE + n as f64 * p.iter().map(|x| x.get(k, k)).sum::<Complex64>())
            .collect())
    }

    /// Max entry magnitudes of the two pole-cancellation relations
    /// `Qᵢ·ψ(νᵢ) = 0` and `ψ⁻¹(μᵢ)·Pᵢ = 0`, over all i.
    pub fn residue_norms(&self, pt: Point) -> Result<(f64, f64)> {
        let (p, q) = self.pq_matrices(pt)?;
        let mut worst_q = 0.0f64;
        let mut worst_p = 0.0f64;
        for i in 0..self.r() {
            let at_nu = self.pole_average(self.nu[i], &self.mu, &p);
            worst_q = worst_q.max(q[i].mul(&at_nu).max_abs());
            let at_mu = self.pole_average(self.mu[i], &self.nu, &q);
            worst_p = worst_p.max(at_mu.mul(&p[i]).max_abs());
        }
        Ok((worst_q, worst_p))
    }

    /// Max entry magnitudes of the four derivative residue relations
    ///
    /// ```text
    /// (∂₋Qᵢ − νᵢ⁻¹ Qᵢ c₋)·ψ(νᵢ),   (∂₊Qᵢ − νᵢ Qᵢ c₊)·ψ(νᵢ),
    /// ψ⁻¹(μᵢ)·(∂₋Pᵢ + μᵢ⁻¹ c₋ Pᵢ),  ψ⁻¹(μᵢ)·(∂₊Pᵢ + μᵢ c₊ Pᵢ),
    /// ```
    ///
    /// with `∂∓` taken by central finite differences of step `h`.
    pub fn derivative_residue_norms(&self, pt: Point, h: f64) -> Result<[f64; 4]> {
        let (p, q) = self.pq_matrices(pt)?;
        let (p_mw, q_mw) = self.pq_matrices(Point::new(pt.zm - h, pt.zp))?;
        let (p_me, q_me) = self.pq_matrices(Point::new(pt.zm + h, pt.zp))?;
        let (p_ps, q_ps) = self.pq_matrices(Point::new(pt.zm, pt.zp - h))?;
        let (p_pn, q_pn) = self.pq_matrices(Point::new(pt.zm, pt.zp + h))?;
        let c_minus = self.model.c_minus();
        let c_plus = self.model.c_plus();
        let half = Complex64::new(0.5 / h, 0.0);

        let mut worst = [0.0f64; 4];
        for i in 0..self.r() {
            let at_nu = self.pole_average(self.nu[i], &self.mu, &p);
            let at_mu = self.pole_average(self.mu[i], &self.nu, &q);
            let dq_m = q_me[i].sub(&q_mw[i]).scale(half);
            let dq_p = q_pn[i].sub(&q_ps[i]).scale(half);
            let dp_m = p_me[i].sub(&p_mw[i]).scale(half);
            let dp_p = p_pn[i].sub(&p_ps[i]).scale(half);

            let rel_a = dq_m.sub(&q[i].mul(&c_minus).scale(ONE / self.nu[i]));
            let rel_b = dq_p.sub(&q[i].mul(&c_plus).scale(self.nu[i]));
            let rel_c = dp_m.add(&c_minus.mul(&p[i]).scale(ONE / self.mu[i]));
            let rel_d = dp_p.add(&c_plus.mul(&p[i]).scale(self.mu[i]));

            worst[0] = worst[0].max(rel_a.mul(&at_nu).max_abs());
            worst[1] = worst[1].max(rel_b.mul(&at_nu).max_abs());
            worst[2] = worst[2].max(at_mu.mul(&rel_c).max_abs());
            worst[3] = worst[3].max(at_mu.mul(&rel_d).max_abs());
        }
        Ok(worst)
    }
}

/// One row of a soliton selection: the surviving mode `I` of the
/// coefficient row `c_i`, the two surviving modes `J ≠ K` of `d_i`, and
/// their amplitudes. All mode indices are 1-based in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionEntry {
    pub i_mode: usize,
    pub j_mode: usize,
    pub k_mode: usize,
    pub d_j: Complex64,
    pub d_k: Complex64,
}

/// Per-pole mode selection restricting general dressing data to solitons.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonSelection {
    pub entries: Vec<SelectionEntry>,
}

impl SolitonSelection {
    /// Expands the selection into full coefficient tables (`c_{iρ}` is 1
    /// at `ρ = Iᵢ`, `d_{iρ}` carries the two amplitudes), validating the
    /// pole invariants along the way.
    pub fn to_dressing_data(
        &self,
        model: ModelParams,
        mu: Vec<Complex64>,
        nu: Vec<Complex64>,
    ) -> Result<DressingData> {
        let n = model.n();
        let r = self.entries.len();
        let mut c = vec![vec![ZERO; n]; r];
        let mut d = vec![vec![ZERO; n]; r];
        for (i, e) in self.entries.iter().enumerate() {
            c[i][e.i_mode - 1] = ONE;
            d[i][e.j_mode - 1] = e.d_j;
            d[i][e.k_mode - 1] = e.d_k;
        }
        DressingData::new(model, mu, nu, c, d)
    }
}

/// Soliton specialization of the dressing data: evaluates the reduced
/// matrices `T_α`, carries the constant relating the two methods, and
/// derives the equivalent tau-function parameters.
#[derive(Debug, Clone)]
pub struct Specialization {
    model: ModelParams,
    mu: Vec<Complex64>,
    nu: Vec<Complex64>,
    entries: Vec<SelectionEntry>,
    d: Vec<Complex64>,
    prefactor: Complex64,
    params: SolitonParams,
}

/// Builds the soliton specialization from pole positions and a mode
/// selection.
///
/// Writing `ρᵢ = Kᵢ − Jᵢ`, `ζᵢ = −i ε_n^{−(Kᵢ+Jᵢ)/2} νᵢ` and
/// `δᵢ = log dᵢ` (principal branch; only `exp δᵢ` is observable) turns
/// `det T_{α+1}` into the tau-function `τ_α` of the returned
/// [`SolitonParams`]. A negative `ρᵢ` is normalized into `1..n−1` by the
/// sign flip `(ρ, ζ) → (ρ+n, −ζ)`, which leaves every observable
/// invariant.
pub fn specialize(
    model: ModelParams,
    mu: Vec<Complex64>,
    nu: Vec<Complex64>,
    selection: SolitonSelection,
) -> Result<Specialization> {
    let n = model.n();
    let r = selection.entries.len();
    if mu.len() != r || nu.len() != r {
        return Err(Error::InvalidParams(format!(
            "selection has {r} rows; pole lists must match"
        )));
    }
    for (i, e) in selection.entries.iter().enumerate() {
        for (label, mode) in [("I", e.i_mode), ("J", e.j_mode), ("K", e.k_mode)] {
            if mode == 0 || mode > n {
                return Err(Error::DegenerateSelection(format!(
                    "mode {label}[{i}] = {mode} must lie in 1..={n}"
                )));
            }
        }
        if e.j_mode == e.k_mode {
            return Err(Error::DegenerateSelection(format!(
                "J[{i}] = K[{i}] selects a zero-mode soliton"
            )));
        }
        for (label, amp) in [("dJ", e.d_j), ("dK", e.d_k)] {
            if !amp.re.is_finite() || !amp.im.is_finite() || amp.norm() == 0.0 {
                return Err(Error::DegenerateSelection(format!(
                    "amplitude {label}[{i}] must be finite and nonzero"
                )));
            }
        }
    }
    // Route the pole lists through the full constructor so the separation
    // invariants are enforced once, in one place.
    selection.to_dressing_data(model.clone(), mu.clone(), nu.clone())?;

    let eps = |x: f64| model.epsilon(x);
    let mut d = Vec::with_capacity(r);
    for i in 0..r {
        let e = &selection.entries[i];
        let fk_i = nu[i] * eps(-(e.k_mode as f64));
        let fj_i = nu[i] * eps(-(e.j_mode as f64));
        let mut num = e.d_k * eps(e.j_mode as f64);
        let mut den = e.d_j * eps(e.k_mode as f64);
        for l in 0..r {
            let fj_l = nu[l] * eps(-(selection.entries[l].j_mode as f64));
            let g_l = mu[l] * eps(selection.entries[l].i_mode as f64);
            if l != i {
                num *= fk_i - fj_l;
                den *= fj_i - fj_l;
            }
            num *= fj_i - g_l;
            den *= fk_i - g_l;
        }
        if den.norm() <= 1e-12 * num.norm().max(1.0) {
            return Err(Error::DegenerateSelection(format!(
                "amplitude ratio denominator vanishes for row {i}"
            )));
        }
        let di = num / den;
        if di.norm() <= 1e-12 {
            return Err(Error::DegenerateSelection(format!(
                "amplitude ratio vanishes for row {i}"
            )));
        }
        d.push(di);
    }

    let mut solitons = Vec::with_capacity(r);
    let mut prefactor = ONE;
    for i in 0..r {
        let e = &selection.entries[i];
        prefactor *= mu[i] / nu[i] * eps((e.i_mode + e.j_mode) as f64);
        let rho_raw = e.k_mode as i64 - e.j_mode as i64;
        let mut zeta = -Complex64::i() * eps(-((e.k_mode + e.j_mode) as f64) / 2.0) * nu[i];
        let rho = if rho_raw < 0 {
            zeta = -zeta;
            (rho_raw + n as i64) as usize
        } else {
            rho_raw as usize
        };
        solitons.push(Soliton::new(rho, zeta, d[i].ln()));
    }
    let params = SolitonParams::new(model.clone(), solitons)?;

    Ok(Specialization {
        model,
        mu,
        nu,
        entries: selection.entries,
        d,
        prefactor,
        params,
    })
}

impl Specialization {
    pub fn model(&self) -> &ModelParams {
        &self.model
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    /// The equivalent tau-function parameters.
    pub fn soliton_params(&self) -> &SolitonParams {
        &self.params
    }

    /// Derived amplitude ratios `dᵢ` (so `δᵢ = log dᵢ`).
    pub fn amplitude_ratios(&self) -> &[Complex64] {
        &self.d
    }

    /// The constant `Π μᵢ νᵢ⁻¹ ε_n^{Iᵢ+Jᵢ}` relating the dressing field
    /// to the tau-function ratio: `Γ_α = prefactor · det T_{α+1}/det T_α`.
    pub fn gamma_prefactor(&self) -> Complex64 {
        self.prefactor
    }

    /// The full dressing data this selection came from.
    pub fn dressing_data(&self) -> DressingData {
        SolitonSelection {
            entries: self.entries.clone(),
        }
        .to_dressing_data(self.model.clone(), self.mu.clone(), self.nu.clone())
        .expect("validated at specialization")
    }

    /// The reduced matrix
    ///
    /// ```text
    /// (T_α)_{ij} = δ_{ij} + dᵢ ε_n^{(Kᵢ−Jᵢ)α} e^{Z_{−Kᵢ}(νᵢ)−Z_{−Jᵢ}(νᵢ)}
    ///              · (νᵢ ε_n^{−Kᵢ} − νᵢ ε_n^{−Jᵢ})/(νᵢ ε_n^{−Kᵢ} − ν_j ε_n^{−J_j}) .
    /// ```
    pub fn t_matrix(&self, alpha: i64, pt: Point) -> ComplexMatrix {
        let eps = |x: f64| self.model.epsilon(x);
        let r = self.r();
        let row: Vec<Complex64> = (0..r)
            .map(|i| {
                let e = &self.entries[i];
                let zk = z_exponent(&self.model, -(e.k_mode as i64), self.nu[i], pt)
                    .expect("pole validated nonzero");
                let zj = z_exponent(&self.model, -(e.j_mode as i64), self.nu[i], pt)
                    .expect("pole validated nonzero");
                let rho = e.k_mode as i64 - e.j_mode as i64;
                self.d[i] * eps((rho * alpha) as f64) * (zk - zj).exp()
            })
            .collect();
        ComplexMatrix::from_fn(r, |i, j| {
            let ei = &self.entries[i];
            let ej = &self.entries[j];
            let fk_i = self.nu[i] * eps(-(ei.k_mode as f64));
            let fj_i = self.nu[i] * eps(-(ei.j_mode as f64));
            let fj_j = self.nu[j] * eps(-(ej.j_mode as f64));
            let off = row[i] * (fk_i - fj_i) / (fk_i - fj_j);
            if i == j {
                ONE + off
            } else {
                off
            }
        })
    }

    /// `det T_α`; `det T_{α+1}` equals the tau-function `τ_α` of
    /// [`Self::soliton_params`].
    pub fn det_t(&self, alpha: i64, pt: Point) -> Complex64 {
        self.t_matrix(alpha, pt).det()
    }
}
