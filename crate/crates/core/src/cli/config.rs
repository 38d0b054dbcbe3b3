use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::algebra::{parse_rational, rational_to_f64, Rational};
use crate::catalog;
use crate::le::{LeTableau, TableauJson};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    /// Fixed value of the third time t3.
    #[serde(default)]
    pub t: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            x: [-15.0, 15.0],
            y: [-15.0, 15.0],
            nx: 121,
            ny: 121,
            t: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Tableau file, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tableau: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tableau_inline: Option<TableauJson>,
    /// Built-in tableau name, used when no tableau is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    /// Strictly increasing; fraction strings such as "-5/2" or numbers.
    pub phases: Vec<Value>,
    /// x0 of the normalisation time; searched when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    /// Upper bound of the x0 search.
    #[serde(default = "default_t0_max")]
    pub t0_max: f64,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridConfig,
    /// Randomised trials for `verify`.
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_precision() -> u32 {
    53
}

fn default_t0_max() -> f64 {
    1024.0
}

fn default_trials() -> usize {
    200
}

pub fn builtin_tableau(name: &str) -> Result<LeTableau, CliError> {
    match name {
        "gr24" => Ok(catalog::gr24_sample()),
        "gr24-unit" => {
            let one = || Rational::from_integer(1.into());
            Ok(catalog::gr24(one(), one(), one(), one()))
        }
        "gr492" => Ok(catalog::gr492_sample()),
        "case-b" => Ok(catalog::case_b()),
        "bivalent" => Ok(catalog::bivalent_example()),
        other => Err(CliError::Input(format!(
            "unknown example {other:?} (gr24, gr24-unit, gr492, case-b, bivalent)"
        ))),
    }
}

/// Phases used by `example` and as a fallback: −3, −1, 2, 3 for n = 4,
/// otherwise evenly spread with unit gaps around 0.
pub fn default_phases(n: usize) -> Vec<f64> {
    if n == 4 {
        return vec![-3.0, -1.0, 2.0, 3.0];
    }
    (0..n).map(|j| j as f64 - (n as f64 - 1.0) / 2.0).collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    /// Config for a built-in example with default phases.
    pub fn example(name: &str) -> Result<Self, CliError> {
        let n = builtin_tableau(name)?.n();
        Ok(Self {
            tableau: None,
            tableau_inline: None,
            example: Some(name.to_string()),
            phases: default_phases(n).into_iter().map(super::json::float).collect(),
            t0: None,
            t0_max: default_t0_max(),
            precision: 53,
            out: None,
            grid: GridConfig::default(),
            trials: default_trials(),
            base_dir: PathBuf::new(),
        })
    }

    pub fn tableau(&self) -> Result<LeTableau, CliError> {
        let js = match (&self.tableau_inline, &self.tableau, &self.example) {
            (Some(js), _, _) => js.clone(),
            (None, Some(p), _) => {
                let path = self.base_dir.join(p);
                let text =
                    std::fs::read_to_string(&path).map_err(|e| CliError::Input(format!("cannot read tableau {}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
            }
            (None, None, Some(name)) => return builtin_tableau(name),
            (None, None, None) => return Err(CliError::Input("config names neither a tableau nor an example".into())),
        };
        LeTableau::try_from(js).map_err(|e| CliError::Tableau(e.to_string()))
    }

    pub fn phases(&self, n: usize) -> Result<Vec<f64>, CliError> {
        let kappa = self
            .phases
            .iter()
            .map(|p| match p {
                Value::Number(x) => x.as_f64().ok_or_else(|| CliError::Input(format!("phase {x} is not a float"))),
                Value::String(s) => parse_rational(s)
                    .map(|q| rational_to_f64(&q))
                    .map_err(|e| CliError::Input(format!("phase {s:?}: {e}"))),
                other => Err(CliError::Input(format!("phase {other} is neither a number nor a fraction string"))),
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if kappa.len() != n {
            return Err(CliError::Input(format!("{} phases given for n = {n}", kappa.len())));
        }
        if !kappa.iter().all(|k| k.is_finite()) || !kappa.windows(2).all(|w| w[0] < w[1]) {
            return Err(CliError::Input(format!("phases {kappa:?} must be finite and strictly increasing")));
        }
        Ok(kappa)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.nx < 2 || self.grid.ny < 2 {
            return Err(CliError::Input(format!(
                "grid resolution {}x{} is below 2",
                self.grid.nx, self.grid.ny
            )));
        }
        if !(self.grid.x[0] < self.grid.x[1] && self.grid.y[0] < self.grid.y[1]) {
            return Err(CliError::Input("grid ranges must be increasing".into()));
        }
        if !(self.t0_max >= 0.0 && self.t0_max.is_finite()) {
            return Err(CliError::Input(format!("t0_max {} must be finite and non-negative", self.t0_max)));
        }
        if !(53..=106).contains(&self.precision) {
            return Err(CliError::Input(format!("precision {} must lie in 53..=106 bits", self.precision)));
        }
        Ok(())
    }
}
