//! Strict TOML experiment configuration. Every table rejects unknown keys
//! so a config is either fully understood or fails loudly.

use hkpp::evolve::{Grid1D, LeftBc, MovingWindow, RightBc, Scheme, SolverConfig};
use hkpp::geometry::SymmetryClass;
use hkpp::reaction::ReactionFn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub reaction: ReactionSpec,
    pub dimension: u32,
    pub class: ClassSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<DatumSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub analysis: AnalysisSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave: Option<WaveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole: Option<DipoleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionSpec {
    /// "logistic" (needs `a`) or "zero".
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassSpec {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub rho_min: f64,
    pub rho_max: f64,
    pub drho: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    /// "imex_cn" or "explicit_euler".
    pub scheme: String,
    pub dt: f64,
    /// "neumann0", "dirichlet1", or "dirichlet0".
    pub left_bc: String,
    /// "dirichlet0" or "neumann0".
    pub right_bc: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub trigger_level: f64,
    pub pad_right: f64,
    pub shift_chunk: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DatumSpec {
    /// "indicator", "bump" (smooth), "zero", or "random_bumps" (seeded).
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<[f64; 2]>,
    #[serde(default = "one")]
    pub height: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub t_end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    #[serde(default = "half")]
    pub front_level: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front_fit_window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extinction_fit_window: Option<[f64; 2]>,
    /// Path to a two-column (t, m) CSV: front-fit skips simulation and
    /// fits this trace directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_csv: Option<String>,
    #[serde(default)]
    pub plots: bool,
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSpec {
    pub c: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<[f64; 2]>,
}

fn default_tol() -> f64 {
    1e-7
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DipoleSpec {
    #[serde(default = "default_eta_max")]
    pub eta_max: f64,
    #[serde(default = "default_n_eta")]
    pub n: usize,
    #[serde(default = "default_dtau")]
    pub dtau: f64,
    pub tau_end: f64,
    /// "phi0" or "generic".
    pub datum: String,
    #[serde(default = "default_output_every")]
    pub output_every: f64,
}

fn default_eta_max() -> f64 {
    12.0
}
fn default_n_eta() -> usize {
    1201
}
fn default_dtau() -> f64 {
    1e-3
}
fn default_output_every() -> f64 {
    0.1
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// "dichotomy" or "front-fit".
    pub command: String,
    pub a_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassSpec>>,
}

impl From<ClassSpec> for SymmetryClass {
    fn from(c: ClassSpec) -> Self {
        match c {
            ClassSpec::Elliptic => SymmetryClass::Elliptic,
            ClassSpec::Hyperbolic => SymmetryClass::Hyperbolic,
            ClassSpec::Parabolic => SymmetryClass::Parabolic,
        }
    }
}

impl ClassSpec {
    pub fn name(self) -> &'static str {
        match self {
            ClassSpec::Elliptic => "elliptic",
            ClassSpec::Hyperbolic => "hyperbolic",
            ClassSpec::Parabolic => "parabolic",
        }
    }
}

impl ExperimentConfig {
    pub fn reaction_fn(&self) -> Result<ReactionFn, CliError> {
        build_reaction(&self.reaction)
    }

    pub fn grid(&self) -> Result<Grid1D, CliError> {
        let g = self
            .grid
            .as_ref()
            .ok_or_else(|| CliError::validation("missing [grid] section"))?;
        if !(g.drho > 0.0) || !(g.rho_max > g.rho_min) {
            return Err(CliError::validation("grid: need drho > 0 and rho_max > rho_min"));
        }
        let n = ((g.rho_max - g.rho_min) / g.drho).round() as usize + 1;
        Grid1D::new(g.rho_min, g.rho_min + g.drho * (n - 1) as f64, n).map_err(CliError::from)
    }

    pub fn solver(&self) -> Result<SolverConfig, CliError> {
        let s = self
            .solver
            .as_ref()
            .ok_or_else(|| CliError::validation("missing [solver] section"))?;
        let scheme = match s.scheme.as_str() {
            "imex_cn" => Scheme::ImexCn,
            "explicit_euler" => Scheme::ExplicitEuler,
            other => {
                return Err(CliError::validation(format!("solver.scheme: unknown scheme {other:?}")))
            }
        };
        let left_bc = match s.left_bc.as_str() {
            "neumann0" => LeftBc::Neumann0,
            "dirichlet1" => LeftBc::Dirichlet1,
            "dirichlet0" => LeftBc::Dirichlet0,
            other => {
                return Err(CliError::validation(format!("solver.left_bc: unknown value {other:?}")))
            }
        };
        let right_bc = match s.right_bc.as_str() {
            "dirichlet0" => RightBc::Dirichlet0,
            "neumann0" => RightBc::Neumann0,
            other => {
                return Err(CliError::validation(format!(
                    "solver.right_bc: unknown value {other:?}"
                )))
            }
        };
        Ok(SolverConfig {
            dt: s.dt,
            scheme,
            left_bc,
            right_bc,
            window: s.window.map(|w| MovingWindow {
                trigger_level: w.trigger_level,
                pad_right: w.pad_right,
                shift_chunk: w.shift_chunk,
            }),
        })
    }

    pub fn datum_fn(&self) -> Result<Box<dyn Fn(f64) -> f64 + Send + Sync>, CliError> {
        let d = self
            .datum
            .as_ref()
            .ok_or_else(|| CliError::validation("missing [datum] section"))?;
        let height = d.height;
        if !(0.0..=1.0).contains(&height) {
            return Err(CliError::validation("datum.height must lie in [0,1]"));
        }
        match d.kind.as_str() {
            "zero" => Ok(Box::new(|_| 0.0)),
            "indicator" => {
                let [lo, hi] = d
                    .support
                    .ok_or_else(|| CliError::validation("datum.support required for indicator"))?;
                Ok(Box::new(move |rho| if (lo..=hi).contains(&rho) { height } else { 0.0 }))
            }
            "bump" => {
                let [lo, hi] = d
                    .support
                    .ok_or_else(|| CliError::validation("datum.support required for bump"))?;
                if !(hi > lo) {
                    return Err(CliError::validation("datum.support must be increasing"));
                }
                Ok(Box::new(move |rho| {
                    if rho <= lo || rho >= hi {
                        0.0
                    } else {
                        // C^inf bump normalized to peak `height` at the midpoint
                        let x = (rho - lo) / (hi - lo) * 2.0 - 1.0; // (-1, 1)
                        height * (1.0 - 1.0 / (1.0 - x * x)).exp()
                    }
                }))
            }
            "random_bumps" => {
                let [lo, hi] = d.support.ok_or_else(|| {
                    CliError::validation("datum.support required for random_bumps")
                })?;
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let bumps: Vec<(f64, f64, f64)> = (0..4)
                    .map(|_| {
                        (
                            rng.gen_range(0.0..height.min(0.45)),
                            rng.gen_range(lo..hi),
                            rng.gen_range(0.5..3.0),
                        )
                    })
                    .collect();
                Ok(Box::new(move |rho| {
                    bumps
                        .iter()
                        .map(|&(a, c, w)| a * (-((rho - c) / w).powi(2)).exp())
                        .sum::<f64>()
                        .min(1.0)
                }))
            }
            other => Err(CliError::validation(format!("datum.kind: unknown kind {other:?}"))),
        }
    }

    pub fn schedule(&self) -> Result<(f64, Vec<f64>), CliError> {
        let s = self
            .schedule
            .as_ref()
            .ok_or_else(|| CliError::validation("missing [schedule] section"))?;
        if !(s.t_end > 0.0) {
            return Err(CliError::validation("schedule.t_end must be positive"));
        }
        let times = if let Some(ts) = &s.snapshot_times {
            ts.clone()
        } else {
            let every = s.snapshot_every.ok_or_else(|| {
                CliError::validation("schedule needs snapshot_every or snapshot_times")
            })?;
            if !(every > 0.0) {
                return Err(CliError::validation("schedule.snapshot_every must be positive"));
            }
            let count = (s.t_end / every).floor() as usize;
            (1..=count).map(|k| k as f64 * every).collect()
        };
        Ok((s.t_end, times))
    }
}

pub fn build_reaction(spec: &ReactionSpec) -> Result<ReactionFn, CliError> {
    match spec.name.as_str() {
        "logistic" => {
            let a = spec
                .a
                .ok_or_else(|| CliError::validation("reaction.a required for logistic"))?;
            ReactionFn::logistic(a).map_err(CliError::from)
        }
        "zero" => Ok(ReactionFn::zero()),
        other => Err(CliError::validation(format!("reaction.name: unknown reaction {other:?}"))),
    }
}

pub fn load(path: &std::path::Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::validation(format!("config parse error: {e}")))
}
