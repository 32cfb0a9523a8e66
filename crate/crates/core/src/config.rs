//! TOML configuration documents.
//!
//! ```toml
//! [scenario]
//! name = "minkowski_1n"        # a builtin, or leave out and give the tables below
//! n = 2
//!
//! [scenario.algebra]
//! preset = "heisenberg"        # abelian | heisenberg | carnot_r2s4, or:
//! dim = 3
//! brackets = [[0, 1, 2, 1.0]]  # [i, j, k, c]: [e_i, e_j] += c e_k
//!
//! [scenario.cone]
//! kind = "lorentz"             # lorentz | polyhedral | sector
//! axis = 0
//! spatial = [1]
//! # generators = [[1, 0, 0], [0, 1, 0]]   (polyhedral, sector)
//!
//! [scenario.antinorm]
//! kind = "quadratic"           # quadratic | harmonic | hybrid | piecewise_linear
//!
//! [scenario.group]
//! model = "heisenberg_matrix"  # abelian | heisenberg_matrix | exp_coordinates
//!
//! [run]
//! h0 = [-1.0, 0.0, 0.0]
//! nu = 1
//! t1 = 5.0
//! dt = 1e-3
//! formats = ["csv", "record", "svg"]
//!
//! [[run.schedule]]
//! start = 0.0
//! end = 1.0
//! control = [1.0, 1.0, 0.0]
//!
//! [sweep]
//! h0 = [[-1.0, 0.0, 0.0], [-1.0, 0.5, 0.0]]
//! ```

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub run: RunSection,
    pub sweep: Option<SweepSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: Option<String>,
    pub n: Option<usize>,
    pub algebra: Option<AlgebraConfig>,
    pub cone: Option<ConeConfig>,
    pub antinorm: Option<AntinormConfig>,
    pub group: Option<GroupConfig>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub preset: Option<String>,
    pub dim: Option<usize>,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    Lorentz,
    Polyhedral,
    Sector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub kind: ConeKind,
    pub axis: Option<usize>,
    #[serde(default)]
    pub spatial: Vec<usize>,
    pub axis_weight: Option<f64>,
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub generators: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntinormConfigKind {
    Quadratic,
    Harmonic,
    Hybrid,
    PiecewiseLinear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntinormConfig {
    pub kind: AntinormConfigKind,
    #[serde(default)]
    pub functionals: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupModelKind {
    Abelian,
    HeisenbergMatrix,
    ExpCoordinates,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub model: GroupModelKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Record,
    Svg,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Record => "json",
            OutputFormat::Svg => "svg",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "record" | "json" => Some(OutputFormat::Record),
            "svg" => Some(OutputFormat::Svg),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub start: f64,
    pub end: f64,
    pub control: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub h0: Option<Vec<f64>>,
    #[serde(default = "default_nu")]
    pub nu: u8,
    #[serde(default = "default_t1")]
    pub t1: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_causal_tol")]
    pub causal_tol: f64,
    #[serde(default)]
    pub schedule: Vec<ScheduleConfig>,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
    pub out: Option<String>,
    /// Group coordinates drawn by the SVG export.
    #[serde(default = "default_projection")]
    pub projection: (usize, usize),
}

fn default_nu() -> u8 {
    1
}
fn default_t1() -> f64 {
    1.0
}
fn default_dt() -> f64 {
    1e-2
}
fn default_causal_tol() -> f64 {
    1e-7
}
fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv]
}
fn default_projection() -> (usize, usize) {
    (0, 1)
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            h0: None,
            nu: default_nu(),
            t1: default_t1(),
            dt: default_dt(),
            causal_tol: default_causal_tol(),
            schedule: Vec::new(),
            formats: default_formats(),
            out: None,
            projection: default_projection(),
        }
    }
}

impl RunSection {
    /// Checks the scalar fields; dimensions are checked against the scenario later.
    pub fn validate(&self) -> Result<()> {
        if self.nu > 1 {
            return Err(Error::config("run.nu", format!("must be 0 or 1, got {}", self.nu)));
        }
        if !(self.t1 > 0.0 && self.t1.is_finite()) {
            return Err(Error::config("run.t1", format!("must be positive, got {}", self.t1)));
        }
        if !(self.dt > 0.0 && self.dt <= self.t1) {
            return Err(Error::config("run.dt", format!("must lie in (0, t1], got {}", self.dt)));
        }
        if !(self.causal_tol > 0.0 && self.causal_tol.is_finite()) {
            return Err(Error::config("run.causal_tol", "must be positive"));
        }
        if let Some(h0) = &self.h0 {
            if h0.iter().any(|x| !x.is_finite()) {
                return Err(Error::config("run.h0", "entries must be finite"));
            }
        }
        let mut last = f64::NEG_INFINITY;
        for (i, e) in self.schedule.iter().enumerate() {
            if !(e.start < e.end) || !e.start.is_finite() || !e.end.is_finite() {
                return Err(Error::config(format!("run.schedule[{i}]"), "needs finite start < end"));
            }
            if e.start < last {
                return Err(Error::config(format!("run.schedule[{i}].start"), "intervals must be disjoint and ordered"));
            }
            last = e.end;
        }
        if self.formats.is_empty() {
            return Err(Error::config("run.formats", "at least one format is required"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub h0: Vec<Vec<f64>>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::config("<document>", e.to_string().trim().to_string()))?;
        let doc: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let message = e.inner().message().to_string();
            Error::config(if path == "." { "<document>".into() } else { path }, message)
        })?;
        doc.run.validate()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }
}
