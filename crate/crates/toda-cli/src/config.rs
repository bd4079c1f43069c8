//! Configuration document: a single flat JSON file. Complex numbers are
//! explicit `{re, im}` pairs throughout; every data invariant of the
//! library types is re-validated at load time with a message naming the
//! violated condition, so an invalid configuration never reaches
//! numerical code.

use serde::Deserialize;
use std::path::PathBuf;

use toda_core::dressing::{DressingData, SelectionEntry, SolitonSelection, Specialization};
use toda_core::hirota::{Soliton, SolitonParams};
use toda_core::model::ModelParams;
use toda_core::numkit::Complex64;
use toda_core::verify::GridSpec;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Hirota,
    Dress,
    Specialize,
    Compare,
    Verify,
    Identities,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hirota" => Ok(Mode::Hirota),
            "dress" => Ok(Mode::Dress),
            "specialize" => Ok(Mode::Specialize),
            "compare" => Ok(Mode::Compare),
            "verify" => Ok(Mode::Verify),
            "identities" => Ok(Mode::Identities),
            other => Err(format!(
                "unknown mode '{other}' (expected hirota|dress|specialize|compare|verify|identities)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cplx {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Cplx> for Complex64 {
    fn from(c: Cplx) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n: usize,
    pub m_re: f64,
    #[serde(default)]
    pub m_im: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonSection {
    pub rho: usize,
    pub zeta_re: f64,
    #[serde(default)]
    pub zeta_im: f64,
    #[serde(default)]
    pub delta_re: f64,
    #[serde(default)]
    pub delta_im: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionSection {
    #[serde(rename = "I")]
    pub i: usize,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "dJ")]
    pub d_j: Cplx,
    #[serde(rename = "dK")]
    pub d_k: Cplx,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DressingSection {
    pub mu: Vec<Cplx>,
    pub nu: Vec<Cplx>,
    #[serde(default)]
    pub c: Option<Vec<Vec<Cplx>>>,
    #[serde(default)]
    pub d: Option<Vec<Vec<Cplx>>>,
    #[serde(default)]
    pub selection: Option<Vec<SelectionSection>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "defaults::zm_min")]
    pub zm_min: f64,
    #[serde(default = "defaults::zm_max")]
    pub zm_max: f64,
    #[serde(default = "defaults::zm_min")]
    pub zp_min: f64,
    #[serde(default = "defaults::zm_max")]
    pub zp_max: f64,
    #[serde(default = "defaults::steps")]
    pub nz: usize,
    #[serde(default = "defaults::steps")]
    pub np: usize,
    #[serde(default = "defaults::h")]
    pub h: f64,
}

mod defaults {
    pub fn zm_min() -> f64 {
        -1.0
    }
    pub fn zm_max() -> f64 {
        1.0
    }
    pub fn steps() -> usize {
        21
    }
    pub fn h() -> f64 {
        1e-3
    }
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            zm_min: defaults::zm_min(),
            zm_max: defaults::zm_max(),
            zp_min: defaults::zm_min(),
            zp_max: defaults::zm_max(),
            nz: defaults::steps(),
            np: defaults::steps(),
            h: defaults::h(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    pub path: PathBuf,
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

/// The raw configuration document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub model: ModelSection,
    #[serde(default)]
    pub solitons: Option<Vec<SolitonSection>>,
    #[serde(default)]
    pub dressing: Option<DressingSection>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<OutputSection>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }
}

/// Validated inputs ready for the numerical pipeline.
pub struct Validated {
    pub mode: Mode,
    pub model: ModelParams,
    pub solitons: Option<SolitonParams>,
    pub dressing: Option<DressingData>,
    pub specialization: Option<Specialization>,
    pub grid: GridSpec,
    pub seed: u64,
    pub output: Option<OutputSection>,
}

fn config_err<T>(what: impl std::fmt::Display) -> Result<T, CliError> {
    Err(CliError::Config(what.to_string()))
}

pub fn validate(config: &RunConfig) -> Result<Validated, CliError> {
    let model = ModelParams::new(
        config.model.n,
        Complex64::new(config.model.m_re, config.model.m_im),
    )
    .map_err(|e| CliError::Config(format!("model: {e}")))?;

    let solitons = match &config.solitons {
        None => None,
        Some(list) => {
            let parsed: Vec<Soliton> = list
                .iter()
                .map(|s| {
                    Soliton::new(
                        s.rho,
                        Complex64::new(s.zeta_re, s.zeta_im),
                        Complex64::new(s.delta_re, s.delta_im),
                    )
                })
                .collect();
            Some(
                SolitonParams::new(model.clone(), parsed)
                    .map_err(|e| CliError::Config(format!("solitons: {e}")))?,
            )
        }
    };

    let mut dressing = None;
    let mut specialization = None;
    if let Some(section) = &config.dressing {
        let mu: Vec<Complex64> = section.mu.iter().map(|&z| z.into()).collect();
        let nu: Vec<Complex64> = section.nu.iter().map(|&z| z.into()).collect();
        match (&section.c, &section.d, &section.selection) {
            (Some(c), Some(d), None) => {
                let c: Vec<Vec<Complex64>> = c
                    .iter()
                    .map(|row| row.iter().map(|&z| z.into()).collect())
                    .collect();
                let d: Vec<Vec<Complex64>> = d
                    .iter()
                    .map(|row| row.iter().map(|&z| z.into()).collect())
                    .collect();
                dressing = Some(
                    DressingData::new(model.clone(), mu, nu, c, d)
                        .map_err(|e| CliError::Config(format!("dressing: {e}")))?,
                );
            }
            (None, None, Some(rows)) => {
                let entries: Vec<SelectionEntry> = rows
                    .iter()
                    .map(|row| SelectionEntry {
                        i_mode: row.i,
                        j_mode: row.j,
                        k_mode: row.k,
                        d_j: row.d_j.into(),
                        d_k: row.d_k.into(),
                    })
                    .collect();
                let selection = SolitonSelection { entries };
                let sp = toda_core::dressing::specialize(
                    model.clone(),
                    mu.clone(),
                    nu.clone(),
                    selection.clone(),
                )
                .map_err(|e| CliError::Config(format!("dressing selection: {e}")))?;
                dressing = Some(
                    selection
                        .to_dressing_data(model.clone(), mu, nu)
                        .map_err(|e| CliError::Config(format!("dressing selection: {e}")))?,
                );
                specialization = Some(sp);
            }
            (None, None, None) => {
                return config_err("dressing section needs either c and d tables or a selection");
            }
            _ => {
                return config_err(
                    "dressing section must carry either full c/d tables or a selection, not both",
                );
            }
        }
    }

    let grid = GridSpec::new(
        config.grid.zm_min,
        config.grid.zm_max,
        config.grid.zp_min,
        config.grid.zp_max,
        (config.grid.nz, config.grid.np),
        config.grid.h,
    )
    .map_err(|e| CliError::Config(format!("grid: {e}")))?;

    // mode-appropriate sections
    match config.mode {
        Mode::Hirota => {
            if solitons.is_none() {
                return config_err("mode 'hirota' requires a solitons section");
            }
        }
        Mode::Dress => {
            if dressing.is_none() {
                return config_err("mode 'dress' requires a dressing section");
            }
        }
        Mode::Specialize | Mode::Compare => {
            if specialization.is_none() {
                return config_err("modes 'specialize'/'compare' require a dressing selection");
            }
        }
        Mode::Verify => {
            if solitons.is_none() && dressing.is_none() {
                return config_err("mode 'verify' requires a solitons or dressing section");
            }
        }
        Mode::Identities => {}
    }
    if matches!(config.mode, Mode::Hirota | Mode::Dress | Mode::Specialize)
        && config.output.is_none()
    {
        return config_err("grid-emitting modes require an output section (or --output)");
    }

    Ok(Validated {
        mode: config.mode,
        model,
        solitons,
        dressing,
        specialization,
        grid,
        seed: config.seed,
        output: config.output.clone(),
    })
}
