//! Built-in problem instances and custom scenarios assembled from config.

use crate::antinorm::{AntinormSpec, AxiomReport};
use crate::config::{AntinormConfigKind, ConeKind, GroupModelKind, ScenarioConfig};
use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::group::{contact_test, GroupModel};
use crate::lie::LieAlgebraSpec;
use crate::{AlgebraCovector, AlgebraVector};
use serde::Serialize;
use std::fmt;

pub const NAMES: [&str; 5] = ["minkowski_1n", "plane_hybrid", "heisenberg_harmonic", "heisenberg_quadratic", "carnot_r2s4"];

/// Largest spatial dimension accepted by `minkowski_1n`.
pub const MAX_MINKOWSKI_N: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub algebra: LieAlgebraSpec,
    pub cone: ConeSpec,
    pub antinorm: AntinormSpec,
    pub group_model: GroupModel,
    /// `(claim, description)` pairs describing what the scenario should show.
    pub expectations: Vec<(String, String)>,
}

pub fn names() -> &'static [&'static str] {
    &NAMES
}

pub fn builtin(name: &str) -> Result<Scenario> {
    builtin_with(name, None)
}

/// Like [`builtin`], with the spatial dimension of `minkowski_1n`.
pub fn builtin_with(name: &str, n: Option<usize>) -> Result<Scenario> {
    if n.is_some() && name != "minkowski_1n" {
        return Err(Error::Input(format!("scenario `{name}` takes no dimension parameter")));
    }
    let claims = |list: &[(&str, &str)]| list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>();
    let s = match name {
        "minkowski_1n" => {
            let n = n.unwrap_or(2);
            if !(1..=MAX_MINKOWSKI_N).contains(&n) {
                return Err(Error::Input(format!("minkowski_1n needs 1 ≤ n ≤ {MAX_MINKOWSKI_N}, got {n}")));
            }
            let cone = ConeSpec::lorentz_unit(n + 1, 0, (1..=n).collect())?;
            Scenario {
                name: name.into(),
                algebra: LieAlgebraSpec::abelian(n + 1),
                antinorm: AntinormSpec::quadratic(cone.clone())?,
                cone,
                group_model: GroupModel::abelian(n + 1),
                expectations: claims(&[
                    ("conservation", "α∨ is constant along extremals and the causal type never changes"),
                    ("straight-lines", "extremals are straight lines through the identity"),
                    ("abnormal-lightlike", "every abnormal extremal is light-like"),
                ]),
            }
        }
        "plane_hybrid" => {
            let cone = ConeSpec::lorentz_unit(2, 1, vec![0])?;
            Scenario {
                name: name.into(),
                algebra: LieAlgebraSpec::abelian(2),
                antinorm: AntinormSpec::hybrid(cone.clone())?,
                cone,
                group_model: GroupModel::abelian(2),
                expectations: claims(&[
                    ("boundary-linearity", "α∨ is positive on the dual boundary ray through (1, −1)"),
                    ("mixed-causal", "a single normal extremal can carry both causal types"),
                ]),
            }
        }
        "heisenberg_harmonic" => {
            let cone = ConeSpec::sector(AlgebraVector::basis(3, 0), AlgebraVector::basis(3, 1))?;
            Scenario {
                name: name.into(),
                algebra: LieAlgebraSpec::heisenberg(),
                antinorm: AntinormSpec::harmonic(cone.clone())?,
                cone,
                group_model: GroupModel::heisenberg_matrix(),
                expectations: claims(&[
                    ("dual", "C∨ = {h1 ≤ 0, h2 ≤ 0} and α∨ = (√|h1| + √|h2|)²"),
                    ("three-arcs", "h0 = (0, −2, 1) gives light-like, time-like, light-like arcs"),
                    ("two-switches", "no extremal switches causal type more than twice"),
                ]),
            }
        }
        "heisenberg_quadratic" => {
            let cone = ConeSpec::lorentz_unit(3, 0, vec![1])?;
            Scenario {
                name: name.into(),
                algebra: LieAlgebraSpec::heisenberg(),
                antinorm: AntinormSpec::quadratic(cone.clone())?,
                cone,
                group_model: GroupModel::heisenberg_matrix(),
                expectations: claims(&[
                    ("conservation", "α∨ is constant along extremals and the causal type never changes"),
                    ("energy-flow", "extremals coincide with trajectories of H = −½(h0² − h1²)"),
                    ("contact", "span C is a contact distribution, so abnormal extremals are light-like"),
                ]),
            }
        }
        "carnot_r2s4" => {
            let algebra = LieAlgebraSpec::carnot_r2s4();
            let cone = ConeSpec::lorentz_unit(8, 0, vec![1])?;
            Scenario {
                name: name.into(),
                antinorm: AntinormSpec::quadratic(cone.clone())?,
                cone,
                group_model: GroupModel::exp_coordinates(algebra.clone())?,
                algebra,
                expectations: claims(&[
                    ("corners", "light-like extremals with a switch of control project to corners in (X1, X2)"),
                    ("not-strictly-abnormal", "the corner extremals are also abnormal"),
                ]),
            }
        }
        _ => return Err(Error::UnknownScenario { name: name.into(), available: NAMES.join(", ") }),
    };
    Ok(s)
}

/// Assembles a scenario without the salience and axiom checks.
pub fn assemble(cfg: &ScenarioConfig) -> Result<Scenario> {
    let custom = cfg.algebra.is_some() || cfg.cone.is_some() || cfg.antinorm.is_some() || cfg.group.is_some();
    if !custom {
        let Some(name) = &cfg.name else {
            return Err(Error::config("scenario", "needs `name` or the `algebra`, `cone` and `antinorm` tables"));
        };
        return builtin_with(name, cfg.n).map_err(|e| match e {
            Error::UnknownScenario { .. } | Error::Input(_) => Error::config("scenario.name", e.to_string()),
            e => e,
        });
    }
    if cfg.n.is_some() {
        return Err(Error::config("scenario.n", "only applies to the builtin minkowski_1n"));
    }

    let a = cfg.algebra.as_ref().ok_or_else(|| Error::config("scenario.algebra", "missing table"))?;
    let algebra = match (a.preset.as_deref(), a.dim) {
        (Some(_), _) if !a.brackets.is_empty() => return Err(Error::config("scenario.algebra.brackets", "cannot be combined with `preset`")),
        (Some("abelian"), Some(d)) => LieAlgebraSpec::abelian(d),
        (Some("abelian"), None) => return Err(Error::config("scenario.algebra.dim", "the abelian preset needs `dim`")),
        (Some("heisenberg"), _) => LieAlgebraSpec::heisenberg(),
        (Some("carnot_r2s4"), _) => LieAlgebraSpec::carnot_r2s4(),
        (Some(p), _) => return Err(Error::config("scenario.algebra.preset", format!("unknown preset `{p}`; available: abelian, heisenberg, carnot_r2s4"))),
        (None, None) => return Err(Error::config("scenario.algebra.dim", "missing (or give `preset`)")),
        (None, Some(d)) => {
            for (i, &(x, y, z, _)) in a.brackets.iter().enumerate() {
                if x >= d || y >= d || z >= d {
                    return Err(Error::config(format!("scenario.algebra.brackets[{i}]"), format!("index out of range for dimension {d}")));
                }
            }
            LieAlgebraSpec::from_brackets(d, a.labels.clone(), &a.brackets).map_err(|e| Error::config("scenario.algebra", e.to_string()))?
        }
    };
    if let (Some(d), Some(_)) = (a.dim, &a.preset) {
        if d != algebra.dim() {
            return Err(Error::config("scenario.algebra.dim", format!("preset has dimension {}", algebra.dim())));
        }
    }
    let dim = algebra.dim();

    let c = cfg.cone.as_ref().ok_or_else(|| Error::config("scenario.cone", "missing table"))?;
    let vectors = |rows: &[Vec<f64>], field: &str| -> Result<Vec<AlgebraVector>> {
        rows.iter()
            .enumerate()
            .map(|(i, r)| {
                if r.len() != dim {
                    Err(Error::config(format!("scenario.cone.{field}[{i}]"), format!("expected {dim} entries, got {}", r.len())))
                } else if r.iter().any(|x| !x.is_finite()) {
                    Err(Error::config(format!("scenario.cone.{field}[{i}]"), "entries must be finite"))
                } else {
                    Ok(AlgebraVector::new(r.clone()))
                }
            })
            .collect()
    };
    let cone = match c.kind {
        ConeKind::Lorentz => {
            let axis = c.axis.ok_or_else(|| Error::config("scenario.cone.axis", "missing"))?;
            let weights = c.weights.clone().unwrap_or_else(|| vec![1.0; c.spatial.len()]);
            ConeSpec::lorentz(dim, axis, c.spatial.clone(), c.axis_weight.unwrap_or(1.0), weights).map_err(|e| Error::config("scenario.cone", e.to_string()))?
        }
        ConeKind::Polyhedral => ConeSpec::polyhedral(vectors(&c.generators, "generators")?).map_err(|e| Error::config("scenario.cone.generators", e.to_string()))?,
        ConeKind::Sector => {
            let mut g = vectors(&c.generators, "generators")?;
            if g.len() != 2 {
                return Err(Error::config("scenario.cone.generators", format!("a sector needs exactly 2 rays, got {}", g.len())));
            }
            let b = g.pop().unwrap();
            ConeSpec::sector(g.pop().unwrap(), b).map_err(|e| Error::config("scenario.cone.generators", e.to_string()))?
        }
    };
    if !cone.is_salient() {
        return Err(Error::invariant("scenario.cone", "cone is not salient (it contains a line)"));
    }

    let an = cfg.antinorm.as_ref().ok_or_else(|| Error::config("scenario.antinorm", "missing table"))?;
    let antinorm = match an.kind {
        AntinormConfigKind::Quadratic => AntinormSpec::quadratic(cone.clone()),
        AntinormConfigKind::Harmonic => AntinormSpec::harmonic(cone.clone()),
        AntinormConfigKind::Hybrid => AntinormSpec::hybrid(cone.clone()),
        AntinormConfigKind::PiecewiseLinear => {
            let mut fs = Vec::new();
            for (i, f) in an.functionals.iter().enumerate() {
                if f.len() != dim {
                    return Err(Error::config(format!("scenario.antinorm.functionals[{i}]"), format!("expected {dim} entries, got {}", f.len())));
                }
                fs.push(AlgebraCovector::new(f.clone()));
            }
            AntinormSpec::piecewise_linear(cone.clone(), fs)
        }
    }
    .map_err(|e| Error::config("scenario.antinorm", e.to_string()))?;

    let kind = match &cfg.group {
        Some(g) => g.model,
        None if algebra.brackets().is_empty() => GroupModelKind::Abelian,
        None if algebra == LieAlgebraSpec::heisenberg() => GroupModelKind::HeisenbergMatrix,
        None => GroupModelKind::ExpCoordinates,
    };
    let group_model = match kind {
        GroupModelKind::Abelian if algebra.brackets().is_empty() => GroupModel::abelian(dim),
        GroupModelKind::Abelian => return Err(Error::config("scenario.group.model", "the algebra is not abelian")),
        GroupModelKind::HeisenbergMatrix if algebra.brackets() == LieAlgebraSpec::heisenberg().brackets() => GroupModel::heisenberg_matrix(),
        GroupModelKind::HeisenbergMatrix => return Err(Error::config("scenario.group.model", "the algebra is not the Heisenberg algebra")),
        GroupModelKind::ExpCoordinates => GroupModel::exp_coordinates(algebra.clone()).map_err(|e| Error::config("scenario.group.model", e.to_string()))?,
    };

    Ok(Scenario {
        name: cfg.name.clone().unwrap_or_else(|| "custom".into()),
        algebra,
        cone,
        antinorm,
        group_model,
        expectations: Vec::new(),
    })
}

/// Assembles a scenario and checks the Jacobi identity and the antinorm axioms.
pub fn from_config(cfg: &ScenarioConfig) -> Result<Scenario> {
    let s = assemble(cfg)?;
    if let Some(v) = s.algebra.validate().first() {
        return Err(Error::invariant("scenario.algebra.brackets", v.to_string()));
    }
    let report = s.antinorm.check_axioms(200);
    if !report.axioms_hold() {
        return Err(Error::invariant("scenario.antinorm", report.failures.first().cloned().unwrap_or_else(|| "antinorm axioms fail".into())));
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub scenario: String,
    pub violations: Vec<String>,
    pub axioms: AxiomReport,
    pub salient: bool,
    /// `span C` is the whole algebra.
    pub lorentzian: bool,
    pub witness: Option<Vec<f64>>,
    pub contact: Option<bool>,
}

impl CheckReport {
    /// Hard invariants: Jacobi identity, salience and the antinorm axioms.
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.salient && self.axioms.axioms_hold()
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{}", (x * 1e6).round() / 1e6 + 0.0)).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.scenario)?;
        if self.violations.is_empty() {
            writeln!(f, "algebra: antisymmetry and Jacobi identity hold")?;
        }
        for v in &self.violations {
            writeln!(f, "algebra: {v}")?;
        }
        writeln!(f, "cone: {}", if self.salient { "salient" } else { "NOT salient" })?;
        writeln!(f, "cone: {}", if self.lorentzian { "Lorentzian (spans the algebra)" } else { "sub-Lorentzian" })?;
        writeln!(f, "antinorm axioms: {}", if self.axioms.axioms_hold() { "hold" } else { "FAIL" })?;
        for msg in &self.axioms.failures {
            writeln!(f, "  {msg}")?;
        }
        let dual = if self.axioms.dual_is_antinorm { "dual is an antinorm" } else { "dual is NOT an antinorm" };
        match &self.witness {
            Some(p) => writeln!(f, "{dual}; boundary-linearity witness {}", fmt_vec(p))?,
            None => writeln!(f, "{dual}; no boundary-linearity witness")?,
        }
        match self.contact {
            Some(true) => writeln!(f, "distribution contact")?,
            Some(false) => writeln!(f, "distribution NOT contact")?,
            None => {}
        }
        Ok(())
    }
}

impl Scenario {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn check(&self) -> Result<CheckReport> {
        let span = self.cone.span_basis();
        let contact = if self.dim() == 3 && span.len() == 2 { Some(contact_test(&self.algebra, &span)?) } else { None };
        Ok(CheckReport {
            scenario: self.name.clone(),
            violations: self.algebra.validate().iter().map(|v| v.to_string()).collect(),
            axioms: self.antinorm.check_axioms(500),
            salient: self.cone.is_salient(),
            lorentzian: span.len() == self.dim(),
            witness: self.antinorm.boundary_linearity(16).map(|p| p.to_vec()),
            contact,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigDocument;

    #[test]
    fn registry() {
        for name in NAMES {
            let s = builtin(name).unwrap();
            assert_eq!(s.name, name);
            assert!(s.algebra.validate().is_empty());
            assert!(s.cone.is_salient());
            assert_eq!(s.antinorm.dim(), s.dim());
        }
        assert_eq!(builtin("minkowski_1n").unwrap().dim(), 3);
        assert_eq!(builtin_with("minkowski_1n", Some(8)).unwrap().dim(), 9);
        assert!(builtin_with("minkowski_1n", Some(9)).is_err());
        match builtin("lobachevsky") {
            Err(Error::UnknownScenario { available, .. }) => assert!(available.contains("carnot_r2s4")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn config_reproduces_minkowski() {
        let doc = ConfigDocument::parse(
            "[scenario]\nname = \"minkowski_1n\"\n[scenario.algebra]\ndim = 3\n[scenario.cone]\nkind = \"lorentz\"\naxis = 0\nspatial = [1, 2]\n[scenario.antinorm]\nkind = \"quadratic\"\n",
        )
        .unwrap();
        let custom = from_config(&doc.scenario).unwrap();
        let b = builtin("minkowski_1n").unwrap();
        assert_eq!((custom.algebra, custom.cone, custom.antinorm, custom.group_model), (b.algebra, b.cone, b.antinorm, b.group_model));
    }

    #[test]
    fn non_salient_rejected() {
        let doc = ConfigDocument::parse(
            "[scenario]\n[scenario.algebra]\ndim = 2\n[scenario.cone]\nkind = \"polyhedral\"\ngenerators = [[1, 0], [-1, 0]]\n[scenario.antinorm]\nkind = \"piecewise_linear\"\nfunctionals = [[0, 0]]\n",
        )
        .unwrap();
        assert!(matches!(from_config(&doc.scenario), Err(Error::Invariant { path, .. }) if path == "scenario.cone"));
    }
}
