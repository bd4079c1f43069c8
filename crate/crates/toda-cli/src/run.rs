//! Mode implementations: grid production, cross-method reports,
//! residual sweeps and the identity table.

use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

use toda_core::model::Point;
use toda_core::numkit::Complex64;
use toda_core::verify::{self, GridSpec, ResidualReport};
use toda_core::Error;

use crate::config::{Mode, OutputFormat, OutputSection, Validated};
use crate::CliError;

/// Convergence window for second-order residuals under h → h/2.
const RATIO_WINDOW: (f64, f64) = (3.2, 4.8);
/// Residuals below this floor count as converged regardless of ratio.
const FLOOR: f64 = 1e-9;

pub fn execute(v: &Validated, quiet: bool) -> Result<(), CliError> {
    match v.mode {
        Mode::Hirota => hirota_mode(v),
        Mode::Dress => dress_mode(v, quiet),
        Mode::Specialize => specialize_mode(v, quiet),
        Mode::Compare => compare_mode(v, quiet),
        Mode::Verify => verify_mode(v, quiet),
        Mode::Identities => identities_mode(v, quiet),
    }
}

/// One emitted grid cell; `field` empty marks a solution pole.
struct Row {
    zm: f64,
    zp: f64,
    alpha: usize,
    field: Option<Complex64>,
    aux: Option<Complex64>,
}

#[derive(Serialize)]
struct JsonRow {
    zm: f64,
    zp: f64,
    alpha: usize,
    re: Option<f64>,
    im: Option<f64>,
    aux_re: Option<f64>,
    aux_im: Option<f64>,
    pole: u8,
}

fn emit_rows(rows: &[Row], output: &OutputSection) -> Result<(), CliError> {
    let text = match output.format {
        OutputFormat::Csv => {
            let mut out = String::from("zm,zp,alpha,re,im,aux_re,aux_im,pole\n");
            for row in rows {
                let pole = u8::from(row.field.is_none());
                let (re, im) = match row.field {
                    Some(z) => (z.re.to_string(), z.im.to_string()),
                    None => (String::new(), String::new()),
                };
                let (are, aim) = match row.aux {
                    Some(z) => (z.re.to_string(), z.im.to_string()),
                    None => (String::new(), String::new()),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    row.zm, row.zp, row.alpha, re, im, are, aim, pole
                )
                .expect("string write");
            }
            out
        }
        OutputFormat::Json => {
            let rows: Vec<JsonRow> = rows
                .iter()
                .map(|row| JsonRow {
                    zm: row.zm,
                    zp: row.zp,
                    alpha: row.alpha,
                    re: row.field.map(|z| z.re),
                    im: row.field.map(|z| z.im),
                    aux_re: row.aux.map(|z| z.re),
                    aux_im: row.aux.map(|z| z.im),
                    pole: u8::from(row.field.is_none()),
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("serialization") + "\n"
        }
    };
    write_file(&output.path, &text)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Sweeps the grid in deterministic order (z⁻-major, then z⁺, then α)
/// and collects rows from a per-cell evaluator.
fn collect_rows<F>(grid: &GridSpec, n: usize, mut cell: F) -> Result<Vec<Row>, CliError>
where
    F: FnMut(usize, Point) -> Result<(Option<Complex64>, Option<Complex64>), Error>,
{
    let mut rows = Vec::new();
    for pt in grid.points() {
        for alpha in 1..=n {
            let (field, aux) = cell(alpha, pt).map_err(|e| CliError::Numerical(e.to_string()))?;
            rows.push(Row {
                zm: pt.zm,
                zp: pt.zp,
                alpha,
                field,
                aux,
            });
        }
    }
    Ok(rows)
}

fn hirota_mode(v: &Validated) -> Result<(), CliError> {
    let params = v.solitons.as_ref().expect("validated");
    let rows = collect_rows(&v.grid, v.model.n(), |alpha, pt| {
        let tau = params.tau(alpha as i64, pt);
        match params.gamma(alpha as i64, pt) {
            Ok(g) => Ok((Some(g), Some(tau))),
            Err(Error::AtSolutionPole { .. }) => Ok((None, Some(tau))),
            Err(e) => Err(e),
        }
    })?;
    emit_rows(&rows, v.output.as_ref().expect("validated"))
}

fn dress_mode(v: &Validated, quiet: bool) -> Result<(), CliError> {
    let data = v.dressing.as_ref().expect("validated");
    let rows = collect_rows(&v.grid, v.model.n(), |alpha, pt| {
        let det = data.r_tilde(alpha as i64, pt).det();
        match data.gamma(alpha as i64, pt) {
            Ok(g) => Ok((Some(g), Some(det))),
            Err(Error::AtSolutionPole { .. }) => Ok((None, Some(det))),
            Err(e) => Err(e),
        }
    })?;
    emit_rows(&rows, v.output.as_ref().expect("validated"))?;

    // pole-cancellation summary at the grid corners and center
    let g = &v.grid;
    let samples = [
        Point::new(g.zm_min, g.zp_min),
        Point::new(g.zm_min, g.zp_max),
        Point::new(g.zm_max, g.zp_min),
        Point::new(g.zm_max, g.zp_max),
        Point::new(0.5 * (g.zm_min + g.zm_max), 0.5 * (g.zp_min + g.zp_max)),
    ];
    let mut worst_alg = 0.0f64;
    let mut worst_deriv = 0.0f64;
    for pt in samples {
        let (q_norm, p_norm) = data
            .residue_norms(pt)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        worst_alg = worst_alg.max(q_norm).max(p_norm);
        let deriv = data
            .derivative_residue_norms(pt, 1e-5)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        for w in deriv {
            worst_deriv = worst_deriv.max(w);
        }
    }
    if !quiet {
        println!("residue check: algebraic {worst_alg:.3e} (tol 1e-9), derivative {worst_deriv:.3e} (tol 1e-6)");
    }
    if worst_alg > 1e-9 || worst_deriv > 1e-6 {
        return Err(CliError::Numerical(format!(
            "pole-cancellation relations violated: algebraic {worst_alg:.3e}, derivative {worst_deriv:.3e}"
        )));
    }
    Ok(())
}

/// Cross-method figures shared by the specialize and compare modes.
#[derive(Serialize)]
struct CrossReport {
    det_t_vs_tau_max_rel: f64,
    gamma_ratio_spread: f64,
    gamma_ratio_mean_re: f64,
    gamma_ratio_mean_im: f64,
    prefactor_rel_dev: f64,
    samples: usize,
    skipped_cells: usize,
}

fn cross_checks(v: &Validated) -> Result<CrossReport, CliError> {
    let sp = v.specialization.as_ref().expect("validated");
    let data = v.dressing.as_ref().expect("validated");
    let params = sp.soliton_params();
    let n = v.model.n();

    let mut det_dev = 0.0f64;
    let mut ratios: Vec<Complex64> = Vec::new();
    let mut skipped = 0usize;
    for pt in v.grid.points() {
        for alpha in 1..=n as i64 {
            let tau = params.tau(alpha, pt);
            let det = sp.det_t(alpha + 1, pt);
            if tau.norm() > 0.0 {
                det_dev = det_dev.max((det - tau).norm() / tau.norm());
            }
            match (data.gamma(alpha, pt), params.gamma(alpha, pt)) {
                (Ok(gd), Ok(gh)) => ratios.push(gd / gh),
                _ => skipped += 1,
            }
        }
    }
    if ratios.is_empty() {
        return Err(CliError::Numerical(
            "no pole-free cells for the ratio".into(),
        ));
    }
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|q| (q - mean).norm()).fold(0.0, f64::max) / mean.norm();
    let prefactor = sp.gamma_prefactor();
    let prefactor_dev = (mean - prefactor).norm() / prefactor.norm();

    Ok(CrossReport {
        det_t_vs_tau_max_rel: det_dev,
        gamma_ratio_spread: spread,
        gamma_ratio_mean_re: mean.re,
        gamma_ratio_mean_im: mean.im,
        prefactor_rel_dev: prefactor_dev,
        samples: ratios.len(),
        skipped_cells: skipped,
    })
}

fn gate_cross(report: &CrossReport, quiet: bool) -> Result<(), CliError> {
    if !quiet {
        println!(
            "max relative deviation det T vs tau: {:.3e} (tol 1e-10)",
            report.det_t_vs_tau_max_rel
        );
        println!(
            "gamma ratio: {} + {}i, spread {:.3e} (tol 1e-9), prefactor deviation {:.3e} (tol 1e-9)",
            report.gamma_ratio_mean_re,
            report.gamma_ratio_mean_im,
            report.gamma_ratio_spread,
            report.prefactor_rel_dev
        );
    }
    if report.det_t_vs_tau_max_rel > 1e-10
        || report.gamma_ratio_spread > 1e-9
        || report.prefactor_rel_dev > 1e-9
    {
        return Err(CliError::Numerical(
            "cross-method identities outside tolerance".into(),
        ));
    }
    Ok(())
}

fn specialize_mode(v: &Validated, quiet: bool) -> Result<(), CliError> {
    let sp = v.specialization.as_ref().expect("validated");
    let data = v.dressing.as_ref().expect("validated");
    let params = sp.soliton_params();
    let rows = collect_rows(&v.grid, v.model.n(), |alpha, pt| {
        let field = match data.gamma(alpha as i64, pt) {
            Ok(g) => Some(g),
            Err(Error::AtSolutionPole { .. }) => None,
            Err(e) => return Err(e),
        };
        let aux = params.gamma(alpha as i64, pt).ok();
        Ok((field, aux))
    })?;
    emit_rows(&rows, v.output.as_ref().expect("validated"))?;
    let report = cross_checks(v)?;
    gate_cross(&report, quiet)
}

fn compare_mode(v: &Validated, quiet: bool) -> Result<(), CliError> {
    let report = cross_checks(v)?;

    // tau-ratio product telescopes to one for the tau-function route
    let params = v
        .specialization
        .as_ref()
        .expect("validated")
        .soliton_params();
    let n = v.model.n();
    let mut product_dev = 0.0f64;
    for pt in v.grid.points() {
        let product: Result<Complex64, Error> = (1..=n as i64)
            .map(|alpha| params.gamma(alpha, pt))
            .product();
        if let Ok(p) = product {
            product_dev = product_dev.max((p - Complex64::new(1.0, 0.0)).norm());
        }
    }

    #[derive(Serialize)]
    struct CompareReport {
        #[serde(flatten)]
        cross: CrossReport,
        gamma_product_max_dev: f64,
    }
    let full = CompareReport {
        cross: report,
        gamma_product_max_dev: product_dev,
    };
    if let Some(output) = &v.output {
        write_file(
            &output.path,
            &(serde_json::to_string_pretty(&full).expect("serialization") + "\n"),
        )?;
    }
    if !quiet {
        println!("gamma product deviation: {product_dev:.3e} (tol 1e-10)");
    }
    if product_dev > 1e-10 {
        return Err(CliError::Numerical(
            "tau-ratio product deviates from one".into(),
        ));
    }
    gate_cross(&full.cross, quiet)
}

#[derive(Serialize)]
struct ReportJson {
    max_abs: f64,
    mean_abs: f64,
    worst_zm: f64,
    worst_zp: f64,
    skipped_cells: usize,
    h: f64,
}

impl From<&ResidualReport> for ReportJson {
    fn from(r: &ResidualReport) -> Self {
        Self {
            max_abs: r.max_abs,
            mean_abs: r.mean_abs,
            worst_zm: r.worst_point.zm,
            worst_zp: r.worst_point.zp,
            skipped_cells: r.skipped_cells,
            h: r.h_used,
        }
    }
}

#[derive(Serialize)]
struct FamilyJson {
    coarse: ReportJson,
    fine: ReportJson,
    ratio: f64,
    pass: bool,
}

fn family<R>(run: R, grid: &GridSpec, identity_tol: Option<f64>) -> Result<FamilyJson, CliError>
where
    R: Fn(&GridSpec) -> Result<ResidualReport, Error>,
{
    let coarse = run(grid).map_err(|e| CliError::Numerical(e.to_string()))?;
    let half = grid
        .with_h(grid.h / 2.0)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let fine = run(&half).map_err(|e| CliError::Numerical(e.to_string()))?;
    let ratio = coarse.max_abs / fine.max_abs;
    let pass = match identity_tol {
        // algebraic identity: no step dependence expected
        Some(tol) => coarse.max_abs <= tol,
        None => coarse.max_abs < FLOOR || (RATIO_WINDOW.0..RATIO_WINDOW.1).contains(&ratio),
    };
    Ok(FamilyJson {
        coarse: ReportJson::from(&coarse),
        fine: ReportJson::from(&fine),
        ratio,
        pass,
    })
}

fn verify_mode(v: &Validated, quiet: bool) -> Result<(), CliError> {
    let mut families: Vec<(&'static str, FamilyJson)> = Vec::new();

    if let Some(params) = &v.solitons {
        families.push((
            "toda",
            family(
                |g| verify::toda_residual(&|a, p| params.gamma(a, p), &v.model, g),
                &v.grid,
                None,
            )?,
        ));
        families.push((
            "bilinear",
            family(|g| verify::bilinear_residual(params, g), &v.grid, None)?,
        ));
        families.push((
            "affine",
            family(|g| verify::affine_residual(params, g), &v.grid, None)?,
        ));
        if params.r() > 0 {
            families.push((
                "recursion_k1",
                family(
                    |g| verify::hirota_recursion_check(params, 1, g),
                    &v.grid,
                    None,
                )?,
            ));
            families.push((
                "recursion_k2",
                family(
                    |g| verify::hirota_recursion_check(params, 2, g),
                    &v.grid,
                    Some(1e-9),
                )?,
            ));
        }
    }
    if let Some(data) = &v.dressing {
        families.push((
            "toda_dressing",
            family(
                |g| verify::toda_residual(&|a, p| data.gamma(a, p), &v.model, g),
                &v.grid,
                None,
            )?,
        ));
        let lambdas = [
            Complex64::from_polar(1.0, 0.4),
            Complex64::from_polar(1.0, 1.7),
            Complex64::from_polar(1.0, 2.9),
            Complex64::from_polar(1.0, 4.6),
        ];
        families.push((
            "zero_curvature",
            family(
                |g| verify::zero_curvature_residual(data, &lambdas, g),
                &v.grid,
                None,
            )?,
        ));
    }

    let mut all_pass = true;
    for (name, fam) in &families {
        all_pass &= fam.pass;
        if !quiet {
            println!(
                "{name}: max_abs {:.3e} -> {:.3e} under h/2 (ratio {:.2}) [{}]",
                fam.coarse.max_abs,
                fam.fine.max_abs,
                fam.ratio,
                if fam.pass { "pass" } else { "FAIL" }
            );
        }
    }
    if let Some(output) = &v.output {
        let map: serde_json::Map<String, serde_json::Value> = families
            .iter()
            .map(|(name, fam)| {
                (
                    name.to_string(),
                    serde_json::to_value(fam).expect("serialization"),
                )
            })
            .collect();
        write_file(
            &output.path,
            &(serde_json::to_string_pretty(&map).expect("serialization") + "\n"),
        )?;
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Numerical(
            "a residual family failed its convergence gate".into(),
        ))
    }
}

fn identities_mode(v: &Validated, quiet: bool) -> Result<(), CliError> {
    let reports = verify::identities::run_suite(v.seed, 100);
    let mut all_pass = true;
    #[derive(Serialize)]
    struct IdentityJson {
        name: String,
        instances: usize,
        max_rel_err: f64,
        tolerance: f64,
        pass: bool,
    }
    let mut rows = Vec::new();
    for rep in &reports {
        all_pass &= rep.passed();
        if !quiet {
            println!(
                "{:<42} {:>3} instances  max err {:.3e}  tol {:.0e}  [{}]",
                rep.name,
                rep.instances,
                rep.max_rel_err,
                rep.tolerance,
                if rep.passed() { "pass" } else { "FAIL" }
            );
        }
        rows.push(IdentityJson {
            name: rep.name.to_string(),
            instances: rep.instances,
            max_rel_err: rep.max_rel_err,
            tolerance: rep.tolerance,
            pass: rep.passed(),
        });
    }
    if let Some(output) = &v.output {
        write_file(
            &output.path,
            &(serde_json::to_string_pretty(&rows).expect("serialization") + "\n"),
        )?;
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Numerical("an identity suite failed".into()))
    }
}
