//! Pontryagin extremals: control law, the left-trivialized Hamiltonian
//! system, causal classification and the abnormal/energy companions.
//!
//! The covector part is advanced by classical RK4 with the control
//! re-evaluated at every stage; the group part by the matching
//! Runge–Kutta–Munthe-Kaas step. Samples are written on the uniform grid
//! `t = k·dt`, while internal substeps shrink near causal junctions where the
//! time-like control blows up. The causal mode persists from step to step and
//! only changes when no step of the current mode is admissible.

use crate::antinorm::{AntinormKind, AntinormSpec, DualFunctionResult, ExtReal};
use crate::cone::{ConeSpec, DualConeSpec, PointClass, MEMBERSHIP_TOL};
use crate::error::{check_dim, Error, Result};
use crate::group::{contact_test, dexp_inv, GroupElement, GroupModel};
use crate::lie::LieAlgebraSpec;
use crate::{AlgebraCovector, AlgebraVector};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::fmt;

/// Largest `|⟨h, u⟩ + ν α(u)|` tolerated at the end of an accepted step.
pub const STEP_HAMILTONIAN_TOL: f64 = 1e-4;
/// Light-like arcs on `rb C∨` need `α∨ ≤ tol` or `α∨ ≥ 1 − JUNCTION_TOL`.
const JUNCTION_TOL: f64 = 1e-11;
/// Relative size of `h|span C` below which a light-like arc sits at a corner.
const CORNER_TOL: f64 = 1e-10;
const SEED_OFFSET: f64 = 1e-12;
const MIN_STEP_FRACTION: f64 = 1.0 / (1u64 << 40) as f64;
const MAX_INTERNAL_STEPS: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CausalType {
    TimeLike,
    LightLike,
    SubRiemannianAbnormal,
}

impl CausalType {
    pub fn as_str(self) -> &'static str {
        match self {
            CausalType::TimeLike => "TimeLike",
            CausalType::LightLike => "LightLike",
            CausalType::SubRiemannianAbnormal => "SubRiemannianAbnormal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "TimeLike" => Some(CausalType::TimeLike),
            "LightLike" => Some(CausalType::LightLike),
            "SubRiemannianAbnormal" => Some(CausalType::SubRiemannianAbnormal),
            _ => None,
        }
    }
}

impl fmt::Display for CausalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Control `u` used on `[start, end)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub start: f64,
    pub end: f64,
    pub control: AlgebraVector,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub enum SelectionRule {
    /// Time-like when possible, lexicographically smallest maximizer.
    #[default]
    Canonical,
    Scheduled(Vec<ScheduleEntry>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControlLawConfig {
    pub nu: u8,
    pub selection: SelectionRule,
    pub causal_tol: f64,
}

impl Default for ControlLawConfig {
    fn default() -> Self {
        Self { nu: 1, selection: SelectionRule::Canonical, causal_tol: 1e-7 }
    }
}

impl ControlLawConfig {
    pub fn normal() -> Self {
        Self::default()
    }

    pub fn abnormal() -> Self {
        Self { nu: 0, ..Self::default() }
    }

    pub fn scheduled(nu: u8, entries: Vec<ScheduleEntry>) -> Self {
        Self { nu, selection: SelectionRule::Scheduled(entries), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu > 1 {
            return Err(Error::Input(format!("nu must be 0 or 1, got {}", self.nu)));
        }
        if !(self.causal_tol > 0.0 && self.causal_tol.is_finite()) {
            return Err(Error::Input("causal tolerance must be positive".into()));
        }
        if let SelectionRule::Scheduled(entries) = &self.selection {
            let mut last_end = f64::NEG_INFINITY;
            for (i, e) in entries.iter().enumerate() {
                if !(e.start < e.end) || !e.start.is_finite() || !e.end.is_finite() {
                    return Err(Error::Input(format!("schedule entry {i} has an empty or invalid interval")));
                }
                if e.start < last_end {
                    return Err(Error::Input(format!("schedule entry {i} overlaps or precedes the previous one")));
                }
                if !e.control.is_finite() {
                    return Err(Error::Input(format!("schedule entry {i} has a non-finite control")));
                }
                last_end = e.end;
            }
        }
        Ok(())
    }

    fn schedule(&self) -> &[ScheduleEntry] {
        match &self.selection {
            SelectionRule::Canonical => &[],
            SelectionRule::Scheduled(e) => e,
        }
    }

    fn entry_at(&self, t: f64) -> Option<&ScheduleEntry> {
        let eps = 1e-12 * t.abs().max(1.0);
        self.schedule().iter().find(|e| t >= e.start - eps && t < e.end - eps)
    }

    fn next_boundary(&self, t: f64) -> f64 {
        let eps = 1e-12 * t.abs().max(1.0);
        self.schedule().iter().flat_map(|e| [e.start, e.end]).filter(|&b| b > t + eps).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Control {
    pub u: AlgebraVector,
    pub causal: CausalType,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalState {
    pub t: f64,
    /// Group element in the model's canonical chart.
    pub g: Vec<f64>,
    pub h: AlgebraCovector,
    pub u: AlgebraVector,
    pub causal: CausalType,
    pub dual_value: ExtReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Switch {
    pub t: f64,
    pub from: CausalType,
    pub to: CausalType,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConservedReport {
    /// `max_t |α∨(h(t)) − α∨(h(0))|`.
    pub dual_value_drift: f64,
    /// `max_t |⟨h, u⟩ + ν α(u)|`.
    pub max_hamiltonian: f64,
    /// Drift of `H = −½(h_a²/c0 − Σ h_m²/c_m)` for energy flows.
    pub energy_drift: Option<f64>,
    pub rejected_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub nu: u8,
    pub dt: f64,
    pub samples: Vec<ExtremalState>,
    pub switches: Vec<Switch>,
    pub conserved: ConservedReport,
    /// Why integration stopped before `t1`, if it did.
    pub truncated: Option<String>,
}

impl Trajectory {
    /// Causal tags of the successive arcs.
    pub fn arc_sequence(&self) -> Vec<CausalType> {
        let mut out: Vec<CausalType> = Vec::new();
        if let Some(first) = self.samples.first() {
            out.push(first.causal);
        }
        for s in &self.switches {
            out.push(s.to);
        }
        out
    }

    pub fn has_tag(&self, tag: CausalType) -> bool {
        self.samples.iter().any(|s| s.causal == tag)
    }

    pub fn last(&self) -> &ExtremalState {
        self.samples.last().expect("trajectories have at least one sample")
    }

    pub fn end_time(&self) -> f64 {
        self.last().t
    }
}

/// Memoizes the last dual evaluation; the numeric oracle is costly and
/// abelian flows keep `h` constant.
struct DualCache<'a> {
    an: &'a AntinormSpec,
    last: RefCell<Option<(Vec<f64>, DualFunctionResult)>>,
}

impl<'a> DualCache<'a> {
    fn new(an: &'a AntinormSpec) -> Self {
        Self { an, last: RefCell::new(None) }
    }

    fn dual(&self, h: &AlgebraCovector) -> Result<DualFunctionResult> {
        let key: Vec<f64> = h.to_vec();
        if let Some((k, d)) = self.last.borrow().as_ref() {
            if *k == key {
                return Ok(d.clone());
            }
        }
        let d = self.an.dual_value(h)?;
        *self.last.borrow_mut() = Some((key, d.clone()));
        Ok(d)
    }
}

fn on_dual_boundary(dual: &DualConeSpec, h: &AlgebraCovector, tol: f64) -> bool {
    dual.classify(h, tol) == PointClass::RelativeBoundary
}

/// Unit vector of `h∨_0` extended continuously off `rb C∨`.
fn lightlike_direction(cone: &ConeSpec, h: &AlgebraCovector) -> Option<AlgebraVector> {
    match cone {
        ConeSpec::Lorentz(l) => {
            let mut u = AlgebraVector::zeros(l.dim());
            u.0[l.axis()] = -h[l.axis()] / l.axis_weight();
            for (&m, &c) in l.spatial().iter().zip(l.weights()) {
                u.0[m] = h[m] / c;
            }
            (u[l.axis()] > 0.0).then(|| u.normalized())
        }
        ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => {
            let scale = cone.restrict(h).norm();
            if scale == 0.0 {
                return None;
            }
            let units: Vec<AlgebraVector> = p.generators().iter().map(|g| g.normalized()).collect();
            let best = units.iter().map(|g| h.pair(g)).fold(f64::NEG_INFINITY, f64::max);
            units.into_iter().filter(|g| h.pair(g) >= best - 1e-9 * scale).min_by(|a, b| a.lex_cmp(b))
        }
    }
}

fn abnormal_direction(cone: &ConeSpec) -> AlgebraVector {
    cone.cross_section().center.normalized()
}

fn hamiltonian(an: &AntinormSpec, h: &AlgebraCovector, u: &AlgebraVector, nu: u8) -> f64 {
    let a = if nu == 1 { an.eval(u).finite().unwrap_or(f64::INFINITY) } else { 0.0 };
    h.pair(u) + nu as f64 * a
}

/// The extremal control at `h` (time `0` for scheduled rules).
pub fn control_law(an: &AntinormSpec, h: &AlgebraCovector, cfg: &ControlLawConfig) -> Result<Control> {
    control_law_at(an, h, cfg, 0.0)
}

pub fn control_law_at(an: &AntinormSpec, h: &AlgebraCovector, cfg: &ControlLawConfig, t: f64) -> Result<Control> {
    cfg.validate()?;
    check_dim(an.dim(), h.dim())?;
    let cache = DualCache::new(an);
    match cfg.entry_at(t) {
        Some(e) => scheduled_control(an, h, &e.control, cfg),
        None => canonical_control(an, &cache, h, cfg),
    }
}

fn scheduled_control(an: &AntinormSpec, h: &AlgebraCovector, u: &AlgebraVector, cfg: &ControlLawConfig) -> Result<Control> {
    check_dim(an.dim(), u.dim())?;
    let cone = an.cone();
    let class = cone.classify_point(u, MEMBERSHIP_TOL);
    if class == PointClass::Outside || u.norm() == 0.0 {
        return Err(Error::NoMaximum("scheduled control is not a nonzero element of the cone".into()));
    }
    if !cone.dual_cone()?.contains(h, cfg.causal_tol) {
        return Err(Error::NoMaximum("covector lies outside the dual cone".into()));
    }
    let residual = hamiltonian(an, h, u, cfg.nu);
    if residual.abs() > 1e-6 * (h.norm() * u.norm()).max(1.0) {
        return Err(Error::NoMaximum(format!("scheduled control violates the zero-Hamiltonian condition (residual {residual:e})")));
    }
    let causal = if cfg.nu == 0 && cone.annihilates(h, cfg.causal_tol) {
        CausalType::SubRiemannianAbnormal
    } else if class == PointClass::RelativeInterior {
        CausalType::TimeLike
    } else {
        CausalType::LightLike
    };
    Ok(Control { u: u.clone(), causal })
}

fn canonical_control(an: &AntinormSpec, cache: &DualCache, h: &AlgebraCovector, cfg: &ControlLawConfig) -> Result<Control> {
    let cone = an.cone();
    let tol = cfg.causal_tol;
    let d = cache.dual(h)?;
    let Some(v) = d.value.finite() else {
        return Err(Error::NoMaximum("covector lies outside the dual cone".into()));
    };
    let dual = cone.dual_cone()?;
    let annihilates = cone.annihilates(h, tol);
    if cfg.nu == 1 {
        if annihilates {
            return Err(Error::NoMaximum("covector annihilates the cone; the normal Hamiltonian is unbounded".into()));
        }
        if (v - 1.0).abs() <= tol {
            if let Some(u) = d.maximizer {
                return Ok(Control { u, causal: CausalType::TimeLike });
            }
        }
        if on_dual_boundary(&dual, h, tol) && (v <= tol || v >= 1.0 - tol) {
            if let Some(u) = lightlike_direction(cone, h) {
                return Ok(Control { u, causal: CausalType::LightLike });
            }
        }
        Err(Error::NoMaximum(format!("α∨(h) = {v}: the Hamiltonian has no maximum on the cone")))
    } else {
        if !on_dual_boundary(&dual, h, tol) {
            return Err(Error::NoMaximum("covector is interior to the dual cone; only the zero control maximizes".into()));
        }
        if annihilates {
            return Ok(Control { u: abnormal_direction(cone), causal: CausalType::SubRiemannianAbnormal });
        }
        lightlike_direction(cone, h)
            .map(|u| Control { u, causal: CausalType::LightLike })
            .ok_or_else(|| Error::NoMaximum("no boundary direction annihilated by the covector".into()))
    }
}

struct Engine<'a> {
    algebra: &'a LieAlgebraSpec,
    an: &'a AntinormSpec,
    gm: &'a GroupModel,
    cfg: &'a ControlLawConfig,
    dual: DualConeSpec,
    cache: DualCache<'a>,
}

struct StepResult {
    h: AlgebraCovector,
    theta: AlgebraVector,
}

impl<'a> Engine<'a> {
    fn mode_control(&self, h: &AlgebraCovector, mode: CausalType) -> Option<AlgebraVector> {
        match mode {
            CausalType::TimeLike => self.cache.dual(h).ok()?.maximizer,
            CausalType::LightLike => lightlike_direction(self.an.cone(), h),
            CausalType::SubRiemannianAbnormal => Some(abnormal_direction(self.an.cone())),
        }
    }

    fn dual_value(&self, h: &AlgebraCovector) -> Option<f64> {
        self.cache.dual(h).ok()?.value.finite()
    }

    fn valid_in_mode(&self, h: &AlgebraCovector, mode: CausalType) -> bool {
        let tol = self.cfg.causal_tol;
        let cone = self.an.cone();
        match mode {
            CausalType::TimeLike => {
                self.cfg.nu == 1
                    && self.cache.dual(h).is_ok_and(|d| d.maximizer.is_some() && d.value.finite().is_some_and(|v| (v - 1.0).abs() <= tol))
            }
            CausalType::LightLike => {
                on_dual_boundary(&self.dual, h, tol)
                    && !cone.annihilates(h, JUNCTION_TOL)
                    && (self.cfg.nu == 0 || self.dual_value(h).is_some_and(|v| v <= tol || v >= 1.0 - JUNCTION_TOL))
            }
            CausalType::SubRiemannianAbnormal => self.cfg.nu == 0 && cone.annihilates(h, tol),
        }
    }

    /// One RK4/RKMK4 step of size `s` with the control given by `control`.
    fn rk_step(&self, h: &AlgebraCovector, s: f64, control: impl Fn(&AlgebraCovector) -> Option<AlgebraVector>) -> Option<StepResult> {
        let a = self.algebra;
        let u1 = control(h)?;
        let k1 = a.poisson_rhs_unchecked(h, &u1);
        let h2 = h + &(&k1 * (s / 2.0));
        let u2 = control(&h2)?;
        let k2 = a.poisson_rhs_unchecked(&h2, &u2);
        let h3 = h + &(&k2 * (s / 2.0));
        let u3 = control(&h3)?;
        let k3 = a.poisson_rhs_unchecked(&h3, &u3);
        let h4 = h + &(&k3 * s);
        let u4 = control(&h4)?;
        let k4 = a.poisson_rhs_unchecked(&h4, &u4);
        let h_new = AlgebraCovector(&h.0 + (&k1.0 + (&k2.0 + &k3.0) * 2.0 + &k4.0) * (s / 6.0));
        let q1 = u1;
        let q2 = dexp_inv(a, &(&q1 * (s / 2.0)), &u2);
        let q3 = dexp_inv(a, &(&q2 * (s / 2.0)), &u3);
        let q4 = dexp_inv(a, &(&q3 * s), &u4);
        let theta = AlgebraVector((&q1.0 + (&q2.0 + &q3.0) * 2.0 + &q4.0) * (s / 6.0));
        (h_new.is_finite() && theta.is_finite()).then_some(StepResult { h: h_new, theta })
    }

    fn canonical_step(&self, h: &AlgebraCovector, mode: CausalType, s: f64) -> Option<StepResult> {
        let step = self.rk_step(h, s, |x| self.mode_control(x, mode))?;
        if !self.valid_in_mode(&step.h, mode) {
            return None;
        }
        if mode == CausalType::TimeLike {
            let (v0, v1) = (self.dual_value(h)?, self.dual_value(&step.h)?);
            if (v1 - v0).abs() > 1e-3 * self.cfg.causal_tol {
                return None;
            }
        }
        let u = self.mode_control(&step.h, mode)?;
        let residual = hamiltonian(self.an, &step.h, &u, self.cfg.nu);
        (residual.abs() <= STEP_HAMILTONIAN_TOL * step.h.norm().max(1.0)).then_some(step)
    }

    /// Boundary ray that carries an annihilating `h` back into `rb C∨`, the
    /// corner of a light-like extremal through the annihilator of `span C`.
    fn corner_exit(&self, h: &AlgebraCovector) -> Option<AlgebraVector> {
        let cone = self.an.cone();
        if !cone.annihilates(h, CORNER_TOL) {
            return None;
        }
        let scale = h.norm();
        cone.boundary_rays(64)
            .into_iter()
            .filter(|u| {
                let w = cone.restrict(&self.algebra.poisson_rhs_unchecked(h, u));
                w.norm() > 1e-9 * scale && self.dual.classify(&w, 1e-9) == PointClass::RelativeBoundary
            })
            .min_by(|a, b| a.lex_cmp(b))
    }

    /// Covector with which the flow continues in `mode`, if `mode` is admissible at `h`.
    fn enter(&self, h: &AlgebraCovector, mode: CausalType) -> Option<AlgebraCovector> {
        match mode {
            CausalType::TimeLike => {
                if self.cfg.nu != 1 {
                    return None;
                }
                let d = self.cache.dual(h).ok()?;
                let v = d.value.finite()?;
                if (v - 1.0).abs() > self.cfg.causal_tol {
                    return None;
                }
                if d.maximizer.is_some() {
                    return Some(h.clone());
                }
                // junction where the time-like maximizer escapes to rb C:
                // nudge into int C∨ and restore α∨ = 1
                let cone = self.an.cone();
                let restricted = cone.restrict(h);
                let free = h - &restricted;
                let nudged = &restricted + &(&cone.dual_interior_direction() * (SEED_OFFSET * restricted.norm()));
                let vn = self.an.dual_value(&nudged).ok()?.value.finite()?;
                if vn <= 0.0 {
                    return None;
                }
                let seeded = &free + &(&nudged * (1.0 / vn));
                self.valid_in_mode(&seeded, CausalType::TimeLike).then_some(seeded)
            }
            CausalType::LightLike => {
                lightlike_direction(self.an.cone(), h)?;
                if self.valid_in_mode(h, mode) {
                    return Some(h.clone());
                }
                // leaving a time-like arc: put α∨ back on 1 exactly
                let v = self.dual_value(h)?;
                if self.cfg.nu != 1 || (v - 1.0).abs() > self.cfg.causal_tol {
                    return None;
                }
                let restricted = self.an.cone().restrict(h);
                let seeded = &(h - &restricted) + &(&restricted * (1.0 / v));
                self.valid_in_mode(&seeded, mode).then_some(seeded)
            }
            CausalType::SubRiemannianAbnormal => self.valid_in_mode(h, mode).then(|| h.clone()),
        }
    }

    fn state(&self, t: f64, g: &GroupElement, h: &AlgebraCovector, control: &Control) -> ExtremalState {
        let dual_value = self.cache.dual(h).map(|d| d.value).unwrap_or(ExtReal::NegInfinity);
        ExtremalState { t, g: self.gm.coordinates(g), h: h.clone(), u: control.u.clone(), causal: control.causal, dual_value }
    }
}

fn sample_times(t1: f64, dt: f64) -> Vec<f64> {
    let n = (t1 / dt + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
    if t1 - n as f64 * dt > 1e-12 * t1 {
        times.push(t1);
    }
    times
}

fn check_run_inputs(algebra: &LieAlgebraSpec, an: &AntinormSpec, h0: &AlgebraCovector, t1: f64, dt: f64, gm: &GroupModel) -> Result<()> {
    check_dim(algebra.dim(), an.dim())?;
    check_dim(algebra.dim(), h0.dim())?;
    check_dim(algebra.dim(), gm.dim())?;
    if !h0.is_finite() {
        return Err(Error::Input("initial covector must be finite".into()));
    }
    if !(t1 > 0.0 && t1.is_finite()) {
        return Err(Error::Input(format!("t1 must be positive, got {t1}")));
    }
    if !(dt > 0.0 && dt <= t1) {
        return Err(Error::Input(format!("dt must lie in (0, t1], got {dt}")));
    }
    Ok(())
}

/// Integrates the extremal through `h0` on `[0, t1]`, sampling every `dt`.
pub fn integrate(
    algebra: &LieAlgebraSpec,
    an: &AntinormSpec,
    h0: &AlgebraCovector,
    cfg: &ControlLawConfig,
    t1: f64,
    dt: f64,
    gm: &GroupModel,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_run_inputs(algebra, an, h0, t1, dt, gm)?;
    let engine = Engine { algebra, an, gm, cfg, dual: an.cone().dual_cone()?, cache: DualCache::new(an) };
    let first = match cfg.entry_at(0.0) {
        Some(e) => scheduled_control(an, h0, &e.control, cfg)?,
        None => canonical_control(an, &engine.cache, h0, cfg)?,
    };

    let mut t = 0.0;
    let mut h = h0.clone();
    let mut g = gm.identity();
    let mut mode = first.causal;
    let mut current = first.clone();
    let mut samples = vec![engine.state(0.0, &g, &h, &first)];
    let mut switches: Vec<Switch> = Vec::new();
    let mut truncated = None;
    let mut rejected = 0usize;
    let mut internal = 0usize;
    let mut s = dt;
    let s_min = dt * MIN_STEP_FRACTION;
    let mut last_switch_t = f64::NAN;
    let mut exit: Option<AlgebraVector> = None;

    'samples: for &target in sample_times(t1, dt).iter().skip(1) {
        while t < target {
            internal += 1;
            if internal > MAX_INTERNAL_STEPS {
                truncated = Some(format!("step budget exhausted at t = {t}"));
                break 'samples;
            }
            let s_try = s.min(target - t).min(cfg.next_boundary(t) - t);
            let reaches_target = s_try == target - t;
            if let Some(entry) = cfg.entry_at(t) {
                let u = entry.control.clone();
                let control = match scheduled_control(an, &h, &u, cfg) {
                    Ok(c) => c,
                    Err(e) => {
                        truncated = Some(format!("at t = {t}: {e}"));
                        break 'samples;
                    }
                };
                if control.causal != current.causal && t > 0.0 {
                    switches.push(Switch { t, from: current.causal, to: control.causal });
                }
                current = control;
                let Some(step) = engine.rk_step(&h, s_try, |_| Some(u.clone())) else {
                    truncated = Some(format!("non-finite state at t = {t}"));
                    break 'samples;
                };
                h = step.h;
                g = gm.multiply(&g, &gm.exp(&step.theta));
                t = if reaches_target { target } else { t + s_try };
                mode = current.causal;
                continue;
            }
            if !cfg.schedule().is_empty() && current.u != engine.mode_control(&h, mode).unwrap_or_else(|| current.u.clone()) {
                // leaving a scheduled interval: re-derive the canonical mode
                match canonical_control(an, &engine.cache, &h, cfg) {
                    Ok(c) => {
                        if c.causal != current.causal {
                            switches.push(Switch { t, from: current.causal, to: c.causal });
                        }
                        mode = c.causal;
                        current = c;
                    }
                    Err(e) => {
                        truncated = Some(format!("at t = {t}: {e}"));
                        break 'samples;
                    }
                }
            }
            if let Some(u) = exit.clone() {
                match engine.rk_step(&h, s_try, |_| Some(u.clone())) {
                    Some(step) if engine.dual.classify(&step.h, cfg.causal_tol) != PointClass::Outside => {
                        h = step.h;
                        g = gm.multiply(&g, &gm.exp(&step.theta));
                        t = if reaches_target { target } else { t + s_try };
                        if s_try >= s {
                            s = (2.0 * s).min(dt);
                        }
                        if !an.cone().annihilates(&h, 10.0 * CORNER_TOL) {
                            exit = None;
                            if !engine.valid_in_mode(&h, CausalType::LightLike) {
                                truncated = Some(format!("no light-like arc leaves the corner at t = {t}"));
                                break 'samples;
                            }
                        }
                    }
                    _ if s_try > s_min => {
                        s = s_try / 2.0;
                        rejected += 1;
                    }
                    _ => {
                        truncated = Some(format!("corner at t = {t} cannot be left inside the dual cone"));
                        break 'samples;
                    }
                }
                continue;
            }
            match engine.canonical_step(&h, mode, s_try) {
                Some(step) => {
                    h = step.h;
                    g = gm.multiply(&g, &gm.exp(&step.theta));
                    t = if reaches_target { target } else { t + s_try };
                    if s_try >= s {
                        s = (2.0 * s).min(dt);
                    }
                }
                None if s_try > s_min => {
                    s = s_try / 2.0;
                    rejected += 1;
                }
                None if mode == CausalType::LightLike && engine.corner_exit(&h).is_some() => {
                    // land exactly on the corner before turning
                    h = &h - &an.cone().restrict(&h);
                    exit = engine.corner_exit(&h);
                    s = 2.0 * s_min;
                }
                None => {
                    let candidates: &[CausalType] = if cfg.nu == 1 {
                        &[CausalType::TimeLike, CausalType::LightLike]
                    } else {
                        &[CausalType::LightLike, CausalType::SubRiemannianAbnormal]
                    };
                    let next = (last_switch_t != t)
                        .then(|| candidates.iter().filter(|&&m| m != mode).find_map(|&m| engine.enter(&h, m).map(|hh| (m, hh))))
                        .flatten();
                    match next {
                        Some((m, hh)) => {
                            switches.push(Switch { t, from: mode, to: m });
                            mode = m;
                            h = hh;
                            last_switch_t = t;
                            s = 2.0 * s_min;
                        }
                        None => {
                            truncated = Some(format!("no extremal continues past t = {t} (h = {:?}, mode {mode})", h.to_vec()));
                            break 'samples;
                        }
                    }
                }
            }
        }
        let control = match cfg.entry_at(t) {
            Some(e) => scheduled_control(an, &h, &e.control, cfg),
            None if exit.is_some() => Ok(Control { u: exit.clone().expect("checked"), causal: CausalType::LightLike }),
            None => engine
                .mode_control(&h, mode)
                .map(|u| Control { u, causal: mode })
                .ok_or_else(|| Error::NoMaximum(format!("control undefined at t = {t}"))),
        };
        match control {
            Ok(c) => {
                if cfg.entry_at(t).is_some() && c.causal != current.causal {
                    switches.push(Switch { t, from: current.causal, to: c.causal });
                    current = c.clone();
                }
                samples.push(engine.state(target, &g, &h, &c));
            }
            Err(e) => {
                truncated = Some(format!("at t = {t}: {e}"));
                break;
            }
        }
    }

    let conserved = conserved_report(an, cfg.nu, &samples, rejected, None);
    Ok(Trajectory { nu: cfg.nu, dt, samples, switches, conserved, truncated })
}

fn conserved_report(an: &AntinormSpec, nu: u8, samples: &[ExtremalState], rejected_steps: usize, energy_drift: Option<f64>) -> ConservedReport {
    let v0 = samples.first().and_then(|s| s.dual_value.finite());
    let mut dual_value_drift: f64 = 0.0;
    let mut max_hamiltonian: f64 = 0.0;
    for s in samples {
        if let (Some(a), Some(b)) = (v0, s.dual_value.finite()) {
            dual_value_drift = dual_value_drift.max((b - a).abs());
        }
        max_hamiltonian = max_hamiltonian.max(hamiltonian(an, &s.h, &s.u, nu).abs());
    }
    ConservedReport { dual_value_drift, max_hamiltonian, energy_drift, rejected_steps }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbnormalReport {
    pub samples: usize,
    /// `h(t) ∈ rb C∨` at every sample.
    pub all_in_dual_boundary: bool,
    /// `max_t |⟨h, u⟩|`, the abnormal Hamiltonian.
    pub max_hamiltonian: f64,
    pub lightlike_samples: usize,
    /// Samples on an arc with `h` in the annihilator of `span C`.
    pub annihilator_samples: usize,
    /// Isolated samples where the curve crosses the annihilator at a corner.
    pub corner_samples: usize,
    /// `span C` is the whole algebra.
    pub lorentzian: bool,
    /// Contact test of `span C`, for 2-planes in 3-dimensional algebras.
    pub contact: Option<bool>,
    pub all_lightlike_when_lorentzian: bool,
    pub no_annihilator_when_contact: bool,
}

impl AbnormalReport {
    pub fn passed(&self) -> bool {
        self.all_in_dual_boundary && self.max_hamiltonian <= 1e-6 && self.all_lightlike_when_lorentzian && self.no_annihilator_when_contact
    }
}

/// Checks that `traj` is an abnormal extremal and tags each sample as
/// light-like or annihilating `span C`.
pub fn abnormal_check(algebra: &LieAlgebraSpec, cone: &ConeSpec, traj: &Trajectory) -> Result<AbnormalReport> {
    check_dim(algebra.dim(), cone.dim())?;
    let dual = cone.dual_cone()?;
    let tol = 1e-7;
    let mut all_in = true;
    let mut max_h: f64 = 0.0;
    let on_ann: Vec<bool> = traj.samples.iter().map(|s| cone.annihilates(&s.h, tol)).collect();
    let (mut ll, mut ann, mut corners) = (0, 0, 0);
    for (k, s) in traj.samples.iter().enumerate() {
        all_in &= on_dual_boundary(&dual, &s.h, tol);
        max_h = max_h.max(s.h.pair(&s.u).abs());
        let neighbour = (k > 0 && on_ann[k - 1]) || on_ann.get(k + 1).copied().unwrap_or(false);
        if !on_ann[k] {
            ll += 1;
        } else if neighbour || s.causal == CausalType::SubRiemannianAbnormal {
            ann += 1;
        } else {
            // the curve only passes through the annihilator here
            corners += 1;
        }
    }
    let span = cone.span_basis();
    let lorentzian = span.len() == algebra.dim();
    let contact = if algebra.dim() == 3 && span.len() == 2 { Some(contact_test(algebra, &span)?) } else { None };
    Ok(AbnormalReport {
        samples: traj.samples.len(),
        all_in_dual_boundary: all_in,
        max_hamiltonian: max_h,
        lightlike_samples: ll,
        annihilator_samples: ann,
        corner_samples: corners,
        lorentzian,
        contact,
        all_lightlike_when_lorentzian: !lorentzian || ann + corners == 0,
        no_annihilator_when_contact: contact != Some(true) || ann == 0,
    })
}

/// Flow of the smooth maximized Hamiltonian `H = −½(h_a²/c0 − Σ h_m²/c_m)`
/// with feedback `u = (−h_a/c0, h_m/c_m)`.
pub fn energy_flow(algebra: &LieAlgebraSpec, an: &AntinormSpec, h0: &AlgebraCovector, t1: f64, dt: f64, gm: &GroupModel) -> Result<Trajectory> {
    check_run_inputs(algebra, an, h0, t1, dt, gm)?;
    let (AntinormKind::Quadratic, ConeSpec::Lorentz(l)) = (an.kind(), an.cone()) else {
        return Err(Error::Unsupported("energy flow needs the quadratic antinorm".into()));
    };
    let feedback = |h: &AlgebraCovector| {
        let mut u = AlgebraVector::zeros(l.dim());
        u.0[l.axis()] = -h[l.axis()] / l.axis_weight();
        for (&m, &c) in l.spatial().iter().zip(l.weights()) {
            u.0[m] = h[m] / c;
        }
        u
    };
    let energy = |h: &AlgebraCovector| {
        let mut q = h[l.axis()] * h[l.axis()] / l.axis_weight();
        for (&m, &c) in l.spatial().iter().zip(l.weights()) {
            q -= h[m] * h[m] / c;
        }
        -0.5 * q
    };
    let cfg = ControlLawConfig::normal();
    let engine = Engine { algebra, an, gm, cfg: &cfg, dual: an.cone().dual_cone()?, cache: DualCache::new(an) };
    let tag = |u: &AlgebraVector| match an.cone().classify_point(u, MEMBERSHIP_TOL) {
        PointClass::RelativeInterior => CausalType::TimeLike,
        _ => CausalType::LightLike,
    };
    let mut h = h0.clone();
    let mut g = gm.identity();
    let e0 = energy(&h);
    let mut drift: f64 = 0.0;
    let mut t = 0.0;
    let u = feedback(&h);
    let mut samples = vec![engine.state(0.0, &g, &h, &Control { causal: tag(&u), u })];
    let mut switches = Vec::new();
    let mut truncated = None;
    for &target in sample_times(t1, dt).iter().skip(1) {
        let Some(step) = engine.rk_step(&h, target - t, |x| Some(feedback(x))) else {
            truncated = Some(format!("non-finite state at t = {t}"));
            break;
        };
        h = step.h;
        g = gm.multiply(&g, &gm.exp(&step.theta));
        t = target;
        drift = drift.max((energy(&h) - e0).abs());
        let u = feedback(&h);
        let c = Control { causal: tag(&u), u };
        let prev = samples.last().map(|s: &ExtremalState| s.causal).expect("nonempty");
        if c.causal != prev {
            switches.push(Switch { t, from: prev, to: c.causal });
        }
        samples.push(engine.state(t, &g, &h, &c));
    }
    let mut conserved = conserved_report(an, 1, &samples, 0, Some(drift));
    // the feedback is not normalized on H = 0, so only report the drift of α∨
    conserved.max_hamiltonian = samples.iter().map(|s| (s.h.pair(&s.u) + 2.0 * energy(&s.h)).abs()).fold(0.0, f64::max);
    Ok(Trajectory { nu: 1, dt, samples, switches, conserved, truncated })
}

fn resample(curve: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let mut cum = vec![0.0];
    for w in curve.windows(2) {
        cum.push(cum.last().unwrap() + dist(&w[0], &w[1]));
    }
    let total = *cum.last().unwrap();
    if total == 0.0 || curve.len() == 1 {
        return vec![curve[0].clone(); n];
    }
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    for i in 0..n {
        let target = total * i as f64 / (n - 1) as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < target {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let f = if len > 0.0 { ((target - cum[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        out.push(curve[seg].iter().zip(&curve[seg + 1]).map(|(a, b)| a + f * (b - a)).collect());
    }
    out
}

/// Discrete Fréchet distance between the group curves after arclength
/// resampling.
pub fn geometric_coincidence(a: &Trajectory, b: &Trajectory) -> f64 {
    let ca: Vec<Vec<f64>> = a.samples.iter().map(|s| s.g.clone()).collect();
    let cb: Vec<Vec<f64>> = b.samples.iter().map(|s| s.g.clone()).collect();
    if ca.is_empty() || cb.is_empty() {
        return f64::INFINITY;
    }
    let n = ca.len().max(cb.len()).max(2);
    frechet(&resample(&ca, n), &resample(&cb, n))
}

fn frechet(p: &[Vec<f64>], q: &[Vec<f64>]) -> f64 {
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let m = q.len();
    let mut prev = vec![0.0f64; m];
    let mut cur = vec![0.0f64; m];
    for (i, pi) in p.iter().enumerate() {
        for j in 0..m {
            let d = dist(pi, &q[j]);
            cur[j] = match (i, j) {
                (0, 0) => d,
                (0, _) => cur[j - 1].max(d),
                (_, 0) => prev[0].max(d),
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]).max(d),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

/// The constant-covector extremal on the abelian group of matching
/// dimension, driven by an explicit schedule.
pub fn mixed_causal_trajectory(an: &AntinormSpec, p: &AlgebraCovector, schedule: Vec<ScheduleEntry>, dt: f64) -> Result<Trajectory> {
    let n = an.dim();
    let t1 = schedule.iter().map(|e| e.end).fold(0.0, f64::max);
    let cfg = ControlLawConfig::scheduled(1, schedule);
    integrate(&LieAlgebraSpec::abelian(n), an, p, &cfg, t1, dt, &GroupModel::abelian(n))
}

/// Alternates a light-like and a time-like maximizer of a boundary-linearity
/// witness; `None` when the antinorm has no witness.
pub fn mixed_causal_witness(an: &AntinormSpec) -> Option<Trajectory> {
    let p = an.boundary_linearity(16)?;
    let timelike = an.dual_value(&p).ok()?.maximizer?;
    let lightlike = an.cone().exposed_rays(&p, 1e-8).into_iter().min_by(|a, b| a.lex_cmp(b))?;
    let schedule = vec![
        ScheduleEntry { start: 0.0, end: 1.0, control: lightlike },
        ScheduleEntry { start: 1.0, end: 2.0, control: timelike },
    ];
    let traj = mixed_causal_trajectory(an, &p, schedule, 1e-2).ok()?;
    (traj.has_tag(CausalType::TimeLike) && traj.has_tag(CausalType::LightLike) && traj.truncated.is_none()).then_some(traj)
}
