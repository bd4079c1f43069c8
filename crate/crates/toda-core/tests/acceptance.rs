//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured figures (run with `--nocapture` to see them all).
//!
//! Random instances are drawn from ChaCha8 streams with fixed seeds.
//! Draws for finite-difference sweeps pass a well-posedness screen
//! before use (see `util::field_is_tame`): the field must be pole-free
//! and of bounded magnitude and smoothness on the sweep window, because
//! a second-order stencil at step h certifies nothing within h²/d⁴ of a
//! solution pole. The screen never inspects equation residuals.

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toda_core::dressing::{self, DressingData, SelectionEntry, SolitonSelection, Specialization};
use toda_core::hirota::{Soliton, SolitonParams};
use toda_core::model::{ModelParams, Point};
use toda_core::numkit::{Complex64, ComplexMatrix};
use toda_core::verify::{self, GridSpec, ResidualReport};
use toda_core::{Error, Result};

const RATIO_WINDOW: (f64, f64) = (3.2, 4.8);

mod util {
    use super::*;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn c_annulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
        let mag = rng.gen_range(lo..hi);
        let arg = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(mag, arg)
    }

    /// Well-posedness screen for fields verified by finite differences
    /// on [-1, 1]²: magnitudes within [1/bound, bound] on a margin
    /// probe lattice, mixed fourth log-derivatives below `d4_bound`,
    /// and genuine variation somewhere on the window.
    pub fn field_is_tame<F>(field: &F, n: usize, bound: f64, d4_bound: f64) -> bool
    where
        F: Fn(i64, Point) -> Result<Complex64>,
    {
        for probe in [5usize, 9] {
            for i in 0..probe {
                for j in 0..probe {
                    let s = (probe - 1) as f64;
                    let pt = Point::new(-1.3 + 2.6 * i as f64 / s, -1.3 + 2.6 * j as f64 / s);
                    for alpha in 0..n as i64 {
                        match field(alpha, pt) {
                            Ok(g) if (1.0 / bound..bound).contains(&g.norm()) => {}
                            _ => return false,
                        }
                    }
                }
            }
        }
        let hh = 0.1;
        let mut activity = 0.0f64;
        for i in 0..13 {
            for j in 0..13 {
                let pt = Point::new(-1.15 + 2.3 * i as f64 / 12.0, -1.15 + 2.3 * j as f64 / 12.0);
                for alpha in 0..n as i64 {
                    let value = |dm: f64, dp: f64| {
                        field(alpha, Point::new(pt.zm + dm * hh, pt.zp + dp * hh))
                    };
                    let estimate = (|| -> Result<(f64, f64)> {
                        let dlog_m = |dp: f64| -> Result<Complex64> {
                            Ok((value(1.0, dp)? / value(-1.0, dp)?).ln() / (2.0 * hh))
                        };
                        let t1 = (dlog_m(2.0)? - 2.0 * dlog_m(1.0)? + 2.0 * dlog_m(-1.0)?
                            - dlog_m(-2.0)?)
                            / (2.0 * hh * hh * hh);
                        let dlog_p = |dm: f64| -> Result<Complex64> {
                            Ok((value(dm, 1.0)? / value(dm, -1.0)?).ln() / (2.0 * hh))
                        };
                        let t2 = (dlog_p(2.0)? - 2.0 * dlog_p(1.0)? + 2.0 * dlog_p(-1.0)?
                            - dlog_p(-2.0)?)
                            / (2.0 * hh * hh * hh);
                        let first = dlog_m(0.0)?.norm() + dlog_p(0.0)?.norm();
                        Ok((t1.norm() + t2.norm(), first))
                    })();
                    match estimate {
                        Ok((v, first)) if v <= d4_bound => activity = activity.max(first),
                        _ => return false,
                    }
                }
            }
        }
        activity >= 0.2
    }

    /// Seeded soliton draw with |ζ| ∈ [0.5, 2), screened for tameness.
    pub fn tame_solitons(seed: u64, n: usize, r: usize) -> SolitonParams {
        let mut rng = rng(seed);
        let model = ModelParams::new(n, Complex64::new(1.0, 0.0)).unwrap();
        loop {
            let solitons: Vec<Soliton> = (0..r)
                .map(|_| {
                    Soliton::new(
                        rng.gen_range(1..n),
                        c_annulus(&mut rng, 0.5, 2.0),
                        Complex64::new(
                            rng.gen_range(-0.8..0.8),
                            rng.gen_range(0.0..std::f64::consts::TAU),
                        ),
                    )
                })
                .collect();
            let Ok(params) = SolitonParams::new(model.clone(), solitons) else {
                continue;
            };
            let field = |alpha: i64, pt: Point| params.gamma(alpha, pt);
            if field_is_tame(&field, n, 2.5, 300.0) {
                return params;
            }
        }
    }

    pub fn powers_separated(n: usize, mu: &[Complex64], nu: &[Complex64], margin: f64) -> bool {
        let mp: Vec<Complex64> = mu.iter().map(|z| z.powu(n as u32)).collect();
        let np: Vec<Complex64> = nu.iter().map(|z| z.powu(n as u32)).collect();
        let sep = |a: Complex64, b: Complex64| (a - b).norm() > margin * a.norm().max(b.norm());
        for i in 0..mp.len() {
            for j in 0..mp.len() {
                if i != j && (!sep(mp[i], mp[j]) || !sep(np[i], np[j])) {
                    return false;
                }
            }
        }
        for i in 0..np.len() {
            for j in 0..mp.len() {
                if !sep(np[i], mp[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Seeded dressing data with full random coefficient tables,
    /// screened for a tame field on the sweep window.
    pub fn tame_dressing(seed: u64, n: usize, r: usize) -> DressingData {
        let mut rng = rng(seed);
        let model = ModelParams::new(n, Complex64::new(1.0, 0.0)).unwrap();
        loop {
            let mu: Vec<Complex64> = (0..r).map(|_| c_annulus(&mut rng, 0.7, 1.4)).collect();
            let nu: Vec<Complex64> = (0..r).map(|_| c_annulus(&mut rng, 0.7, 1.4)).collect();
            if !powers_separated(n, &mu, &nu, 1e-2) {
                continue;
            }
            let table = |rng: &mut ChaCha8Rng| -> Vec<Vec<Complex64>> {
                (0..r)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                            })
                            .collect()
                    })
                    .collect()
            };
            let c = table(&mut rng);
            let d = table(&mut rng);
            let Ok(data) = DressingData::new(model.clone(), mu, nu, c, d) else {
                continue;
            };
            let field = |alpha: i64, pt: Point| data.gamma(alpha, pt);
            if field_is_tame(&field, n, 2.5, 300.0) {
                return data;
            }
        }
    }

    /// Seeded soliton selection (one mode per pole row, two per inverse
    /// row) that specializes successfully.
    pub fn random_selection(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Specialization {
        let model = ModelParams::new(n, Complex64::new(1.0, 0.0)).unwrap();
        loop {
            let mu: Vec<Complex64> = (0..r).map(|_| c_annulus(rng, 0.6, 1.8)).collect();
            let nu: Vec<Complex64> = (0..r).map(|_| c_annulus(rng, 0.6, 1.8)).collect();
            if !powers_separated(n, &mu, &nu, 1e-2) {
                continue;
            }
            let entries: Vec<SelectionEntry> = (0..r)
                .map(|_| {
                    let j = rng.gen_range(1..=n);
                    let mut k = rng.gen_range(1..=n);
                    while k == j {
                        k = rng.gen_range(1..=n);
                    }
                    SelectionEntry {
                        i_mode: rng.gen_range(1..=n),
                        j_mode: j,
                        k_mode: k,
                        d_j: c_annulus(rng, 0.5, 1.5),
                        d_k: c_annulus(rng, 0.5, 1.5),
                    }
                })
                .collect();
            if let Ok(sp) =
                dressing::specialize(model.clone(), mu, nu, SolitonSelection { entries })
            {
                return sp;
            }
        }
    }

    pub fn grid(h: f64) -> GridSpec {
        GridSpec::new(-1.0, 1.0, -1.0, 1.0, (5, 5), h).unwrap()
    }

    pub fn ratio_of<R>(run: R, h: f64) -> (ResidualReport, ResidualReport, f64)
    where
        R: Fn(f64) -> Result<ResidualReport>,
    {
        let coarse = run(h).unwrap();
        let fine = run(h / 2.0).unwrap();
        let ratio = coarse.max_abs / fine.max_abs;
        (coarse, fine, ratio)
    }
}

#[test]
fn criterion_1_hirota_pde_correctness() {
    let h = 1e-3;
    for &n in &[2usize, 3, 4, 6] {
        for &r in &[1usize, 2, 3] {
            let start = Instant::now();
            let seed = 7100 + n as u64 * 10 + r as u64;
            let params = util::tame_solitons(seed, n, r);
            let run = |h: f64| {
                verify::toda_residual(
                    &|alpha, pt| params.gamma(alpha, pt),
                    params.model(),
                    &util::grid(h),
                )
            };
            let (coarse, _, ratio) = util::ratio_of(run, h);
            let elapsed = start.elapsed();
            assert!(
                coarse.max_abs < 1e-4,
                "n={n} r={r}: max_abs {} ≥ 1e-4",
                coarse.max_abs
            );
            assert!(
                (RATIO_WINDOW.0..RATIO_WINDOW.1).contains(&ratio),
                "n={n} r={r}: ratio {ratio} outside {RATIO_WINDOW:?}"
            );
            assert!(
                elapsed.as_secs_f64() < 10.0,
                "n={n} r={r}: took {elapsed:?}"
            );
        }
    }
    println!("[PASS] criterion 1: field-equation residual second-order convergent, max_abs < 1e-4, for n in {{2,3,4,6}}, r in {{1,2,3}}");
}

#[test]
fn criterion_2_bilinear_correctness() {
    let h = 1e-3;
    for &n in &[2usize, 3, 4, 6] {
        for &r in &[1usize, 2, 3] {
            let seed = 7100 + n as u64 * 10 + r as u64;
            let params = util::tame_solitons(seed, n, r);
            let run = |h: f64| verify::bilinear_residual(&params, &util::grid(h));
            let (coarse, _, ratio) = util::ratio_of(run, h);
            assert!(
                coarse.max_abs < 1e-9 || (RATIO_WINDOW.0..RATIO_WINDOW.1).contains(&ratio),
                "n={n} r={r}: bilinear ratio {ratio}"
            );
        }
    }

    // negative control, mirroring the two-soliton sensitivity example:
    // a 1% perturbation of the interaction coefficient must break the
    // convergence. The violation term lives where both soliton walls are
    // active, so the control draw keeps both walls through the window
    // (the tameness activity screen plus a small-delta redraw) and the
    // sweep runs on the central subwindow where the h-independent
    // violation is not buried under the τ²-weighted truncation.
    let control = control_params(61);
    let small = GridSpec::new(-0.5, 0.5, -0.5, 0.5, (7, 7), h).unwrap();
    let run_good = |h: f64| verify::bilinear_residual(&control, &small.with_h(h).unwrap());
    let (_, _, good_ratio) = util::ratio_of(run_good, h);
    assert!(
        (RATIO_WINDOW.0..RATIO_WINDOW.1).contains(&good_ratio),
        "control draw itself must converge (ratio {good_ratio})"
    );
    let bad = control.with_scaled_eta(0, 1, 1.01);
    let run_bad = |h: f64| verify::bilinear_residual(&bad, &small.with_h(h).unwrap());
    let (bad_coarse, bad_fine, bad_ratio) = util::ratio_of(run_bad, h);
    assert!(
        !(RATIO_WINDOW.0..RATIO_WINDOW.1).contains(&bad_ratio) && bad_fine.max_abs > 1e-9,
        "perturbed eta still converged (ratio {bad_ratio}, {} -> {})",
        bad_coarse.max_abs,
        bad_fine.max_abs
    );
    println!("[PASS] criterion 2: bilinear residual second-order convergent; 1%-perturbed interaction coefficient fails convergence (control ratio {bad_ratio:.2})");
}

/// Two-soliton control draw for the negative test: tame on the window
/// and with both walls passing near the origin (interaction term
/// active), enforced by redrawing until both exponentials have unit
/// magnitude somewhere on the central subwindow.
fn control_params(seed: u64) -> SolitonParams {
    let mut rng = util::rng(seed);
    let model = ModelParams::new(3, Complex64::new(1.0, 0.0)).unwrap();
    loop {
        let solitons: Vec<Soliton> = (0..2)
            .map(|_| {
                Soliton::new(
                    rng.gen_range(1..3),
                    util::c_annulus(&mut rng, 0.7, 1.4),
                    Complex64::new(
                        rng.gen_range(-0.3..0.3),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    ),
                )
            })
            .collect();
        let Ok(params) = SolitonParams::new(model.clone(), solitons) else {
            continue;
        };
        let active = |i: usize| {
            let mut best = f64::INFINITY;
            for gi in 0..9 {
                for gj in 0..9 {
                    let pt = Point::new(-0.5 + gi as f64 / 8.0, -0.5 + gj as f64 / 8.0);
                    let mag = params.exp_e(0, i, pt).norm();
                    best = best.min(mag.ln().abs());
                }
            }
            best < 0.3
        };
        if !(active(0) && active(1)) {
            continue;
        }
        let field = |alpha: i64, pt: Point| params.gamma(alpha, pt);
        if util::field_is_tame(&field, 3, 2.5, 300.0) {
            return params;
        }
    }
}

#[test]
fn criterion_3_dressing_general_pde() {
    let h = 1e-3;
    for &n in &[3usize, 4] {
        for &r in &[1usize, 2] {
            let seed = 8200 + n as u64 * 10 + r as u64;
            let data = util::tame_dressing(seed, n, r);
            let run = |h: f64| {
                verify::toda_residual(
                    &|alpha, pt| data.gamma(alpha, pt),
                    data.model(),
                    &util::grid(h),
                )
            };
            let (coarse, _, ratio) = util::ratio_of(run, h);
            assert!(
                coarse.max_abs < 1e-4,
                "n={n} r={r}: max_abs {} ≥ 1e-4",
                coarse.max_abs
            );
            assert!(
                (RATIO_WINDOW.0..RATIO_WINDOW.1).contains(&ratio),
                "n={n} r={r}: ratio {ratio} outside {RATIO_WINDOW:?}"
            );
        }
    }
    println!("[PASS] criterion 3: general-coefficient dressing fields satisfy the field equations (second-order residual, max_abs < 1e-4) for n in {{3,4}}, r in {{1,2}}");
}

#[test]
fn criterion_4_method_equivalence() {
    let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, (21, 21), 1e-3).unwrap();
    let mut worst_det = 0.0f64;
    let mut worst_spread = 0.0f64;
    let mut worst_prefactor = 0.0f64;
    for seed in [431u64, 433, 437] {
        let mut rng = util::rng(seed);
        let sp = util::random_selection(&mut rng, 4, 3);
        let params = sp.soliton_params();
        let data = sp.dressing_data();
        let prefactor = sp.gamma_prefactor();
        let mut ratios: Vec<Complex64> = Vec::new();
        for pt in grid.points() {
            for alpha in 1..=4i64 {
                let tau = params.tau(alpha, pt);
                let det = sp.det_t(alpha + 1, pt);
                worst_det = worst_det.max((det - tau).norm() / tau.norm());
                if let (Ok(gd), Ok(gh)) = (data.gamma(alpha, pt), params.gamma(alpha, pt)) {
                    ratios.push(gd / gh);
                }
            }
        }
        assert!(!ratios.is_empty());
        let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
        let spread = ratios.iter().map(|q| (q - mean).norm()).fold(0.0, f64::max) / mean.norm();
        worst_spread = worst_spread.max(spread);
        worst_prefactor = worst_prefactor.max((mean - prefactor).norm() / prefactor.norm());
    }
    assert!(worst_det < 1e-10, "det T vs tau deviation {worst_det}");
    assert!(worst_spread < 1e-9, "ratio spread {worst_spread}");
    assert!(
        worst_prefactor < 1e-9,
        "prefactor deviation {worst_prefactor}"
    );
    println!("[PASS] criterion 4: det T equals tau to {worst_det:.2e}; field ratio grid-constant to {worst_spread:.2e} and equal to the pole prefactor to {worst_prefactor:.2e}");
}

#[test]
fn criterion_5_one_soliton_closed_form() {
    let mut rng = util::rng(977);
    let mut checked_points = 0usize;
    for draw in 0..20 {
        let n = rng.gen_range(2..=8usize);
        let sp = util::random_selection(&mut rng, n, 1);
        let data = sp.dressing_data();
        let model = sp.model().clone();
        let s = sp.soliton_params().solitons()[0];
        let kappa = model.kappa(s.rho).unwrap();
        let c0 = sp.gamma_prefactor();
        for &(zm, zp) in &[
            (0.0, 0.0),
            (0.3, -0.2),
            (-0.25, 0.4),
            (0.45, 0.35),
            (-0.4, -0.3),
        ] {
            let pt = Point::new(zm, zp);
            let x = (model.m() * kappa * (pt.zm / s.zeta + pt.zp * s.zeta) + s.delta).exp();
            for alpha in 0..n as i64 {
                let num =
                    Complex64::new(1.0, 0.0) + model.epsilon(s.rho as f64 * (alpha + 1) as f64) * x;
                let den = Complex64::new(1.0, 0.0) + model.epsilon(s.rho as f64 * alpha as f64) * x;
                // skip pole-adjacent sample points (both routes diverge)
                if den.norm() < 1e-3 * (1.0 + x.norm()) {
                    continue;
                }
                let expected = c0 * num / den;
                let got = match data.gamma(alpha, pt) {
                    Ok(g) => g,
                    Err(Error::AtSolutionPole { .. }) => continue,
                    Err(e) => panic!("draw {draw}: {e}"),
                };
                let rel = (got - expected).norm() / expected.norm();
                assert!(
                    rel < 1e-10,
                    "draw {draw} n={n} alpha={alpha}: relative deviation {rel}"
                );
                checked_points += 1;
            }
        }
    }
    assert!(checked_points > 300, "only {checked_points} points checked");
    println!("[PASS] criterion 5: single-pole dressing reproduces the one-soliton closed form at {checked_points} points across 20 seeded draws");
}

#[test]
fn criterion_6_dressing_internal_consistency() {
    for instance in 0..50u64 {
        // independent stream per instance, so any failure is
        // reproducible in isolation
        let mut rng = util::rng(1291 + instance * 7919);
        let n = rng.gen_range(2..=5usize);
        let r = rng.gen_range(1..=3usize);
        // absolute tolerances below presume O(1), well-conditioned data:
        // resample draws whose rank-one factors come out badly scaled or
        // whose pole-data matrices are ill-conditioned at the sample
        // point (conditioning amplifies the fixed-step differencing
        // noise past the stated tolerances)
        let (data, pt) = 'outer: loop {
            let seed = rng.gen::<u64>();
            let data = seeded_dressing_unscreened(seed, n, r);
            let pt = Point::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
            // the rank-one factors must stay bounded on a ring around the
            // sample point: a nearby zero of det R_k inflates their third
            // derivatives and the fixed-step differencing error with them
            for (dm, dp) in [
                (0.0, 0.0),
                (0.12, 0.0),
                (-0.12, 0.0),
                (0.0, 0.12),
                (0.0, -0.12),
                (0.12, 0.12),
                (0.12, -0.12),
                (-0.12, 0.12),
                (-0.12, -0.12),
            ] {
                let probe = Point::new(pt.zm + dm, pt.zp + dp);
                match data.pq_matrices(probe) {
                    Ok((p, q)) if p.iter().chain(q.iter()).all(|m| m.max_abs() <= 10.0) => {}
                    _ => continue 'outer,
                }
            }
            let well_conditioned = (1..=n as i64).all(|k| {
                let rk = data.r_matrix(k, pt);
                match rk.inverse() {
                    Ok(inv) => rk.max_abs() * inv.max_abs() <= 1e3,
                    Err(_) => false,
                }
            });
            if well_conditioned {
                break (data, pt);
            }
        };
        for alpha in 1..=(n as i64 + 1) {
            let r_a = data.r_tilde(alpha, pt);
            let r_a1 = data.r_tilde(alpha + 1, pt);
            let yt = data.y_tilde(alpha, pt);
            let ut = data.u_tilde(alpha, pt);
            let outer = ComplexMatrix::from_fn(r, |i, j| yt[i] * ut[j]);
            let diff = r_a1.sub(&r_a.sub(&outer)).max_abs();
            assert!(
                diff <= 1e-12 * (1.0 + r_a.max_abs()),
                "instance {instance}: telescoping off by {diff}"
            );
        }
        for alpha in 1..=n as i64 {
            let shifted = data.r_tilde(alpha + n as i64, pt);
            let base = data.r_tilde(alpha, pt);
            let expected = ComplexMatrix::from_fn(r, |i, j| {
                data.nu()[i].powi(-(n as i32)) * base.get(i, j) * data.mu()[j].powi(n as i32)
            });
            let rel = shifted.sub(&expected).max_abs() / expected.max_abs().max(1e-300);
            assert!(
                rel <= 1e-11,
                "instance {instance}: quasi-periodicity off by {rel}"
            );
        }

        // pole-cancellation relations, algebraic and with derivatives
        if let Ok((q_norm, p_norm)) = data.residue_norms(pt) {
            assert!(
                q_norm <= 1e-6 && p_norm <= 1e-6,
                "instance {instance}: residue norms {q_norm}, {p_norm}"
            );
            let worst = data.derivative_residue_norms(pt, 1e-5).unwrap();
            for (idx, w) in worst.iter().enumerate() {
                assert!(
                    *w <= 1e-6,
                    "instance {instance}: derivative residue {idx} off by {w}"
                );
            }

            // dressing factor inverts and is twist-equivariant
            let lambda = loop {
                let cand = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                let near_pole = data.mu().iter().chain(data.nu().iter()).any(|p| {
                    (1..=n as i64)
                        .any(|k| (cand - data.model().epsilon(k as f64) * p).norm() < 1e-2)
                });
                if !near_pole {
                    break cand;
                }
            };
            let prod = data
                .psi_inv(lambda, pt)
                .unwrap()
                .mul(&data.psi(lambda, pt).unwrap());
            let dev = prod.sub(&ComplexMatrix::identity(n)).max_abs();
            assert!(dev <= 1e-9, "instance {instance}: psi_inv psi off by {dev}");

            let eps = data.model().epsilon(1.0);
            let h = data.twist_matrix();
            let h_inv = ComplexMatrix::from_fn(n, |i, j| {
                if i == j {
                    Complex64::new(1.0, 0.0) / h.get(i, i)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let lhs = data.psi(eps * lambda, pt).unwrap();
            let rhs = h.mul(&data.psi(lambda, pt).unwrap()).mul(&h_inv);
            let twist_dev = lhs.sub(&rhs).max_abs() / rhs.max_abs().max(1.0);
            assert!(
                twist_dev <= 1e-9,
                "instance {instance}: twist equivariance off by {twist_dev}"
            );

            // solution read off at spectral infinity vs determinant ratio
            let diag = data.gamma_from_psi_infinity(pt).unwrap();
            for k in 0..n {
                let gamma = data.gamma((k + 1) as i64, pt).unwrap();
                let dev = (diag[k] - gamma).norm() / (1.0 + gamma.norm());
                assert!(
                    dev <= 1e-9,
                    "instance {instance}: infinity/determinant mismatch {dev}"
                );
            }
        } else {
            panic!("instance {instance}: rank-one factors not solvable at the sample point");
        }
    }
    println!("[PASS] criterion 6: telescoping, quasi-periodicity, pole-cancellation relations, inverse/twist of the dressing factor, and both field routes agree on 50 seeded instances");
}

/// Dressing draw without the field screen (algebraic identities hold for
/// any admissible data); resamples only the pole-separation invariants.
fn seeded_dressing_unscreened(seed: u64, n: usize, r: usize) -> DressingData {
    let mut rng = util::rng(seed);
    let model = ModelParams::new(n, Complex64::new(1.0, 0.0)).unwrap();
    loop {
        let mu: Vec<Complex64> = (0..r)
            .map(|_| util::c_annulus(&mut rng, 0.6, 1.8))
            .collect();
        let nu: Vec<Complex64> = (0..r)
            .map(|_| util::c_annulus(&mut rng, 0.6, 1.8))
            .collect();
        if !util::powers_separated(n, &mu, &nu, 1e-2) {
            continue;
        }
        let table = |rng: &mut ChaCha8Rng| -> Vec<Vec<Complex64>> {
            (0..r)
                .map(|_| {
                    (0..n)
                        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                })
                .collect()
        };
        let c = table(&mut rng);
        let d = table(&mut rng);
        if let Ok(data) = DressingData::new(model.clone(), mu, nu, c, d) {
            return data;
        }
    }
}

#[test]
fn criterion_7_identity_suite() {
    let start = Instant::now();
    let reports = verify::identities::run_suite(42, 100);
    let elapsed = start.elapsed();
    for rep in &reports {
        assert!(
            rep.passed(),
            "{}: max err {} > tol {}",
            rep.name,
            rep.max_rel_err,
            rep.tolerance
        );
    }
    assert_eq!(reports.len(), 5);
    assert!(elapsed.as_secs_f64() < 5.0, "suite took {elapsed:?}");
    let worst = reports.iter().map(|r| r.max_rel_err).fold(0.0f64, f64::max);
    println!(
        "[PASS] criterion 7: all 5 identity suites pass 100 seeded instances (worst error {worst:.2e}, {:.2} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_8_structural_invariants() {
    // periodicity and telescoping product of the tau-function route
    let params = util::tame_solitons(7142, 4, 2);
    let mut worst_product = 0.0f64;
    for pt in util::grid(1e-3).points() {
        for alpha in 0..4i64 {
            let a = params.gamma(alpha, pt).unwrap();
            let b = params.gamma(alpha + 4, pt).unwrap();
            assert_eq!(a, b, "periodicity must be exact");
        }
        let product: Complex64 = (1..=4i64)
            .map(|alpha| params.gamma(alpha, pt).unwrap())
            .product();
        worst_product = worst_product.max((product - Complex64::new(1.0, 0.0)).norm());
    }
    assert!(
        worst_product <= 1e-10,
        "gamma product deviates by {worst_product}"
    );

    // flatness of the dressed connection at 4 unit-circle spectral samples
    let data = util::tame_dressing(8231, 3, 1);
    let lambdas = [
        Complex64::from_polar(1.0, 0.4),
        Complex64::from_polar(1.0, 1.7),
        Complex64::from_polar(1.0, 2.9),
        Complex64::from_polar(1.0, 4.6),
    ];
    let run = |h: f64| verify::zero_curvature_residual(&data, &lambdas, &util::grid(h));
    let (coarse, _, ratio) = util::ratio_of(run, 1e-3);
    assert!(
        coarse.max_abs < 1e-9 || (RATIO_WINDOW.0..RATIO_WINDOW.1).contains(&ratio),
        "zero-curvature ratio {ratio} (max {})",
        coarse.max_abs
    );
    println!("[PASS] criterion 8: field periodicity exact, component product 1 to {worst_product:.2e}, zero-curvature residual second-order convergent (ratio {ratio:.2})");
}
