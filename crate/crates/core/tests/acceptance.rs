//! Acceptance criteria, one PASS/FAIL line each.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::time::Instant;
use sublorentz::antinorm::{AntinormSpec, ExtReal};
use sublorentz::cone::ConeSpec;
use sublorentz::extremal::{
    abnormal_check, energy_flow, geometric_coincidence, integrate, mixed_causal_trajectory, mixed_causal_witness, CausalType,
    ControlLawConfig, ScheduleEntry, Trajectory,
};
use sublorentz::group::{contact_test, corner_trajectory};
use sublorentz::io::{read_csv, write_csv};
use sublorentz::scenarios::{builtin, Scenario, NAMES};
use sublorentz::{AlgebraCovector, AlgebraVector};

type Outcome = Result<String, String>;

fn cov(x: &[f64]) -> AlgebraCovector {
    AlgebraCovector::new(x.to_vec())
}

fn vect(x: &[f64]) -> AlgebraVector {
    AlgebraVector::new(x.to_vec())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg.into()) }
}

/// Unit-weight Lorentz covector with axis 0: `(−a cosh s, a sinh s · d)` on S∨_1 (a = 1)
/// or `(−a, a d)` on S∨_0.
fn lorentz_covector(rng: &mut StdRng, spatial: usize, free: usize, lightlike: bool) -> Vec<f64> {
    let d: Vec<f64> = loop {
        let v: Vec<f64> = (0..spatial).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 {
            break v.iter().map(|x| x / n).collect();
        }
    };
    let (h0, r) = if lightlike {
        let a = rng.random_range(0.5..2.0);
        (-a, a)
    } else {
        let s: f64 = rng.random_range(0.0..1.5);
        (-s.cosh(), s.sinh())
    };
    let mut h = vec![h0];
    h.extend(d.iter().map(|x| r * x));
    h.extend((0..free).map(|_| rng.random_range(-1.0..1.0)));
    h
}

fn run(s: &Scenario, h0: &[f64], cfg: &ControlLawConfig, t1: f64, dt: f64) -> Result<Trajectory, String> {
    integrate(&s.algebra, &s.antinorm, &cov(h0), cfg, t1, dt, &s.group_model).map_err(|e| format!("h0 = {h0:?}: {e}"))
}

fn constant_tag(t: &Trajectory) -> bool {
    t.switches.is_empty() && t.samples.iter().all(|s| s.causal == t.samples[0].causal)
}

fn criterion_1() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut jobs = Vec::new();
    for (name, spatial, free) in [("heisenberg_quadratic", 1, 1), ("minkowski_1n", 2, 0)] {
        for lightlike in [false, true] {
            for _ in 0..50 {
                jobs.push((name, lorentz_covector(&mut rng, spatial, free, lightlike), lightlike));
            }
        }
    }
    let results: Vec<Result<(f64, bool), String>> = jobs
        .par_iter()
        .map(|(name, h0, lightlike)| {
            let s = builtin(name).unwrap();
            let t = run(&s, h0, &ControlLawConfig::normal(), 5.0, 1e-3)?;
            ensure(t.truncated.is_none(), format!("{name} h0 = {h0:?} truncated: {:?}", t.truncated))?;
            ensure(t.end_time() == 5.0, "short trajectory")?;
            let expected = if *lightlike { CausalType::LightLike } else { CausalType::TimeLike };
            Ok((t.conserved.dual_value_drift, constant_tag(&t) && t.samples[0].causal == expected))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for r in results {
        let (drift, constant) = r?;
        ensure(constant, "causal tag changed along a trajectory")?;
        worst = worst.max(drift);
    }
    ensure(worst <= 1e-6, format!("max drift {worst:e}"))?;
    Ok(format!("200 runs, max |Δα∨| = {worst:.1e}, tags constant"))
}

fn criterion_2() -> Outcome {
    let s = builtin("heisenberg_quadratic").unwrap();
    let mut rng = StdRng::seed_from_u64(2);
    let h0s: Vec<Vec<f64>> = (0..20).map(|_| lorentz_covector(&mut rng, 1, 1, false)).collect();
    let dists: Vec<Result<f64, String>> = h0s
        .par_iter()
        .map(|h0| {
            // H = −½(h0² − h1²) = −½ on these covectors
            let h = cov(h0);
            ensure(((h[0] * h[0] - h[1] * h[1]) - 1.0).abs() < 1e-12 && h[0] < 0.0, "sample off H = -1/2")?;
            let a = run(&s, h0, &ControlLawConfig::normal(), 5.0, 1e-3)?;
            let b = energy_flow(&s.algebra, &s.antinorm, &h, 5.0, 1e-3, &s.group_model).map_err(|e| e.to_string())?;
            Ok(geometric_coincidence(&a, &b))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for d in dists {
        worst = worst.max(d?);
    }
    ensure(worst <= 1e-4, format!("max Fréchet distance {worst:e}"))?;
    Ok(format!("20 runs, max Fréchet distance {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let s = builtin("heisenberg_harmonic").unwrap();
    let t = run(&s, &[0.0, -2.0, 1.0], &ControlLawConfig::normal(), 4.0, 1e-2)?;
    let seq = t.arc_sequence();
    ensure(seq == [CausalType::LightLike, CausalType::TimeLike, CausalType::LightLike], format!("arc sequence {seq:?}"))?;

    // S∨_1 points (−x², −y², z) with x + y = 1, and dual-boundary points with α∨ ≥ 1
    let mut grid = Vec::new();
    for i in 0..10 {
        let z = -1.0 + 2.0 * i as f64 / 9.0;
        for j in 1..=10 {
            let x = j as f64 / 11.0;
            grid.push(vec![-x * x, -(1.0 - x) * (1.0 - x), z]);
        }
        for j in 0..5 {
            let b = 1.0 + 0.5 * j as f64;
            grid.push(vec![0.0, -b, z]);
            grid.push(vec![-b, 0.0, z]);
        }
    }
    let counts: Vec<Result<usize, String>> = grid
        .par_iter()
        .map(|h0| {
            let t = run(&s, h0, &ControlLawConfig::normal(), 5.0, 1e-2)?;
            ensure(t.truncated.is_none(), format!("h0 = {h0:?} truncated: {:?}", t.truncated))?;
            Ok(t.switches.len())
        })
        .collect();
    let mut most = 0;
    for c in counts {
        most = most.max(c?);
    }
    ensure(most <= 2, format!("a trajectory switched {most} times"))?;
    Ok(format!("LightLike, TimeLike, LightLike at t = {:.4}, {:.4}; {} grid runs, at most {most} switches", t.switches[0].t, t.switches[1].t, grid.len()))
}

/// Brute-force maximum of ⟨h, u⟩ over the antisphere α(u) = 1 of the
/// harmonic antinorm α(x, y) = xy/(x + y) on the first quadrant.
fn harmonic_oracle(h1: f64, h2: f64) -> (f64, (f64, f64)) {
    let f = |th: f64| {
        let (x, y) = (th.cos(), th.sin());
        let a = x * y / (x + y);
        (h1 * x + h2 * y) / a
    };
    let n = 20_000;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 1..n {
        let th = half_pi * k as f64 / n as f64;
        let v = f(th);
        if v > best.0 {
            best = (v, th);
        }
    }
    let step = half_pi / n as f64;
    let (mut lo, mut hi) = ((best.1 - step).max(1e-12), (best.1 + step).min(half_pi - 1e-12));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a) > f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let th = 0.5 * (lo + hi);
    let (x, y) = (th.cos(), th.sin());
    let a = x * y / (x + y);
    (-f(th), (x / a, y / a))
}

fn criterion_4() -> Outcome {
    let s = builtin("heisenberg_harmonic").unwrap();
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst_value: f64 = 0.0;
    let mut worst_dir: f64 = 0.0;
    for _ in 0..100 {
        let (h1, h2, h3) = (-rng.random_range(0.01..4.0), -rng.random_range(0.01..4.0), rng.random_range(-1.0..1.0));
        let (oracle_value, (ox, oy)) = harmonic_oracle(h1, h2);
        let formula_value = (h1.abs().sqrt() + h2.abs().sqrt()).powi(2);
        let d = s.antinorm.dual_value(&cov(&[h1, h2, h3])).map_err(|e| e.to_string())?;
        let value = d.value.finite().ok_or("dual value is -inf")?;
        let u = d.maximizer.ok_or("no maximizer")?;
        let (fx, fy) = ((h2 / h1).sqrt() + 1.0, (h1 / h2).sqrt() + 1.0);
        let angle = |x: f64, y: f64| y.atan2(x);
        worst_value = worst_value.max((value - oracle_value).abs() / oracle_value).max((formula_value - oracle_value).abs() / oracle_value);
        worst_dir = worst_dir.max((angle(u[0], u[1]) - angle(ox, oy)).abs()).max((angle(fx, fy) - angle(ox, oy)).abs());
        ensure(u[2] == 0.0, "maximizer leaves span C")?;
    }
    ensure(worst_value <= 1e-6 && worst_dir <= 1e-6, format!("value error {worst_value:e}, direction error {worst_dir:e}"))?;
    Ok(format!("100 points, relative value error {worst_value:.1e}, direction error {worst_dir:.1e} rad"))
}

/// α∨ of the hybrid plane antinorm by brute force over directions of the cone y ≥ |x|.
fn hybrid_oracle(p: &[f64]) -> f64 {
    let alpha = |x: f64, y: f64| if x >= 0.0 { y - x } else { (y * y - x * x).max(0.0).sqrt() };
    let n = 200_000;
    let (lo, hi) = (std::f64::consts::FRAC_PI_4, 3.0 * std::f64::consts::FRAC_PI_4);
    let mut best = f64::NEG_INFINITY;
    for k in 1..n {
        let th = lo + (hi - lo) * k as f64 / n as f64;
        let (x, y) = (th.cos(), th.sin());
        best = best.max((p[0] * x + p[1] * y) / alpha(x, y));
    }
    -best
}

fn criterion_5() -> Outcome {
    let s = builtin("plane_hybrid").unwrap();
    let p = s.antinorm.boundary_linearity(16).ok_or("no boundary-linearity witness")?;
    let err = ((p[0] - 1.0).powi(2) + (p[1] + 1.0).powi(2)).sqrt();
    let oracle = hybrid_oracle(&p.to_vec());
    ensure(err <= 1e-6, format!("witness {:?}", p.to_vec()))?;
    ensure((oracle - 1.0).abs() <= 1e-6, format!("oracle α∨(p) = {oracle}"))?;
    let t = mixed_causal_witness(&s.antinorm).ok_or("no mixed-causal trajectory")?;
    ensure(t.has_tag(CausalType::TimeLike) && t.has_tag(CausalType::LightLike) && t.nu == 1, "trajectory lacks a causal tag")?;
    ensure(t.conserved.max_hamiltonian <= 1e-6, format!("hamiltonian {:e}", t.conserved.max_hamiltonian))?;

    let schedule = vec![
        ScheduleEntry { start: 0.0, end: 1.0, control: vect(&[1.0, 1.0]) },
        ScheduleEntry { start: 1.0, end: 2.0, control: vect(&[1.0, 2.0]) },
    ];
    let t2 = mixed_causal_trajectory(&s.antinorm, &cov(&[1.0, -1.0]), schedule, 1e-2).map_err(|e| e.to_string())?;
    ensure(t2.arc_sequence() == [CausalType::LightLike, CausalType::TimeLike], format!("{:?}", t2.arc_sequence()))?;
    ensure(mixed_causal_witness(&builtin("minkowski_1n").unwrap().antinorm).is_none(), "quadratic antinorm produced a witness")?;
    Ok(format!("witness ({:.9}, {:.9}), oracle α∨ = {oracle:.9}, arcs {:?}", p[0], p[1], t.arc_sequence()))
}

fn criterion_6() -> Outcome {
    let s = builtin("carnot_r2s4").unwrap();
    let dt = 1e-2;
    let mut h0 = vec![0.0; 8];
    h0[0] = -1.0;
    h0[1] = 1.0;
    h0[2] = -1.0;
    let e = |a: f64, b: f64| {
        let mut v = vec![0.0; 8];
        v[0] = a;
        v[1] = b;
        vect(&v)
    };
    let schedule = vec![
        ScheduleEntry { start: 0.0, end: 1.0, control: e(1.0, 1.0) },
        ScheduleEntry { start: 1.0, end: 2.0, control: e(1.0, -1.0) },
    ];
    let normal = run(&s, &h0, &ControlLawConfig::scheduled(1, schedule.clone()), 2.0, dt)?;
    let abnormal = run(&s, &h0, &ControlLawConfig::scheduled(0, schedule), 2.0, dt)?;
    ensure(normal.truncated.is_none() && abnormal.truncated.is_none(), "truncated corner run")?;
    let closed = corner_trajectory(&s.group_model, 1.0, 1.0, 2.0, dt).map_err(|e| e.to_string())?;
    ensure(closed.len() == normal.samples.len(), format!("{} vs {} samples", closed.len(), normal.samples.len()))?;
    let mut worst: f64 = 0.0;
    for ((t, g), x) in closed.iter().zip(&normal.samples) {
        ensure((t - x.t).abs() < 1e-12, "sample times differ")?;
        let c = s.group_model.coordinates(g);
        for (a, b) in c.iter().zip(&x.g) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-8, format!("max coordinate error {worst:e}"))?;
    ensure(normal.arc_sequence() == [CausalType::LightLike], format!("{:?}", normal.arc_sequence()))?;
    let report = abnormal_check(&s.algebra, &s.cone, &normal).map_err(|e| e.to_string())?;
    ensure(report.all_in_dual_boundary && report.max_hamiltonian <= 1e-12, format!("{report:?}"))?;
    let same = normal.samples.iter().zip(&abnormal.samples).all(|(a, b)| a.h == b.h && a.g == b.g);
    ensure(same, "the ν = 0 run differs from the ν = 1 run")?;
    Ok(format!("max error over 8 coordinates {worst:.1e}; h in rb C∨ with zero abnormal Hamiltonian"))
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mink = builtin("minkowski_1n").unwrap();
    for _ in 0..30 {
        let h0 = lorentz_covector(&mut rng, 2, 0, true);
        let t = run(&mink, &h0, &ControlLawConfig::abnormal(), 2.0, 1e-2)?;
        ensure(t.samples.iter().all(|x| x.causal == CausalType::LightLike), format!("non-light-like sample for h0 = {h0:?}"))?;
        let r = abnormal_check(&mink.algebra, &mink.cone, &t).map_err(|e| e.to_string())?;
        ensure(r.passed() && r.lorentzian && r.annihilator_samples == 0, format!("{r:?}"))?;
    }
    let (mut annihilators, mut corners) = (0, 0);
    for name in ["heisenberg_quadratic", "heisenberg_harmonic"] {
        let s = builtin(name).unwrap();
        ensure(contact_test(&s.algebra, &s.cone.span_basis()).map_err(|e| e.to_string())?, format!("{name}: span C not contact"))?;
        for _ in 0..30 {
            let h0 = if name == "heisenberg_quadratic" {
                lorentz_covector(&mut rng, 1, 1, true)
            } else if rng.random_bool(0.5) {
                vec![0.0, -rng.random_range(0.2..2.0), rng.random_range(-1.0..1.0)]
            } else {
                vec![-rng.random_range(0.2..2.0), 0.0, rng.random_range(-1.0..1.0)]
            };
            let t = run(&s, &h0, &ControlLawConfig::abnormal(), 5.0, 1e-2)?;
            ensure(t.truncated.is_none(), format!("{name} h0 = {h0:?}: {:?}", t.truncated))?;
            if t.samples.windows(2).any(|w| (&w[0].u - &w[1].u).norm() > 1e-6) {
                corners += 1;
            }
            let r = abnormal_check(&s.algebra, &s.cone, &t).map_err(|e| e.to_string())?;
            ensure(r.contact == Some(true) && r.passed(), format!("{name} h0 = {h0:?}: {r:?}"))?;
            annihilators += r.annihilator_samples;
        }
    }
    ensure(annihilators == 0, format!("{annihilators} annihilator samples"))?;
    ensure(corners > 0, "no abnormal run reached the annihilator")?;
    Ok(format!("30 Minkowski abnormal runs light-like; Heisenberg distributions contact, 60 abnormal runs without annihilator samples ({corners} turn a corner)"))
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let n = 500;
    let hybrid = builtin("plane_hybrid").unwrap().antinorm;
    let quadratic = builtin("heisenberg_quadratic").unwrap().antinorm;
    let harmonic = builtin("heisenberg_harmonic").unwrap().antinorm;
    let minkowski = builtin("minkowski_1n").unwrap().antinorm;
    let pl = AntinormSpec::piecewise_linear(
        ConeSpec::sector(vect(&[1.0, 1.0]), vect(&[-1.0, 1.0])).unwrap(),
        vec![cov(&[1.0, 1.0]), cov(&[-1.0, 1.0])],
    )
    .unwrap();
    let all = [&quadratic, &harmonic, &hybrid, &minkowski, &pl];

    // p ∈ ri C∨ is strictly negative on C \ 0
    for an in all {
        let cone = an.cone();
        for _ in 0..n {
            let p = cone.sample_dual_interior(&mut rng);
            let u = if rng.random_bool(0.5) { cone.sample_interior(&mut rng) } else { cone.sample_boundary(&mut rng).unwrap_or_else(|| cone.sample_interior(&mut rng)) };
            ensure(p.pair(&u) < 0.0, format!("{}: ⟨p, u⟩ = {} for p in ri C∨", an.name(), p.pair(&u)))?;
        }
    }

    // α∨ on rb C∨
    let boundary_max = |an: &AntinormSpec, rng: &mut StdRng| -> Result<f64, String> {
        let mut m: f64 = 0.0;
        for _ in 0..n {
            let p = an.cone().sample_dual_boundary(rng).ok_or("no dual boundary")?.normalized();
            if let ExtReal::Finite(v) = an.dual_value(&p).map_err(|e| e.to_string())?.value {
                m = m.max(v.abs());
            }
        }
        Ok(m)
    };
    let q = boundary_max(&quadratic, &mut rng)?.max(boundary_max(&minkowski, &mut rng)?);
    ensure(q <= 1e-8, format!("quadratic max |α∨| on rb C∨ = {q:e}"))?;
    let hm = boundary_max(&harmonic, &mut rng)?;
    ensure(hm >= 0.5, format!("harmonic max α∨ on rb C∨ = {hm}"))?;
    let hy = boundary_max(&hybrid, &mut rng)?;
    ensure(hy >= 0.5, format!("hybrid max α∨ on rb C∨ = {hy}"))?;

    // maximizer sets are convex and α is additive on them
    let mut checked = 0;
    for an in [&quadratic, &harmonic, &hybrid, &pl] {
        let cone = an.cone();
        for i in 0..n {
            let p = if i % 2 == 0 { cone.sample_dual_interior(&mut rng) } else { cone.sample_dual_boundary(&mut rng).ok_or("no dual boundary")? };
            let d = an.dual_value(&p).map_err(|e| e.to_string())?;
            let Some(v) = d.value.finite() else { continue };
            if cone.annihilates(&p, 1e-12) {
                continue;
            }
            let set = an.maximizer_set(&p, 1.0, 1e-9).map_err(|e| e.to_string())?;
            let pts = &set.points;
            if pts.is_empty() {
                continue;
            }
            let scale = p.norm().max(1.0);
            let (a, b) = (&pts[rng.random_range(0..pts.len())], &pts[rng.random_range(0..pts.len())]);
            let m = (a + b) * 0.5;
            let am = an.eval(&m).finite().ok_or("midpoint off the cone")?;
            ensure((am - 1.0).abs() <= 1e-8 && (p.pair(&m) + v).abs() <= 1e-8 * scale, format!("{}: midpoint is not a maximizer at p = {:?}", an.name(), p.to_vec()))?;
            let (s, t) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
            let mut x = &(a * s) + &(b * t);
            if let Some(w) = set.recession.first() {
                x = &x + &(w * rng.random_range(0.0..2.0));
            }
            let ax = an.eval(&x).finite().ok_or("combination off the cone")?;
            ensure((ax - (s + t)).abs() <= 1e-8 * (1.0 + s + t), format!("{}: α not additive on p∨ at p = {:?}: {ax} vs {}", an.name(), p.to_vec(), s + t))?;
            checked += 1;
        }
    }
    Ok(format!("strict negativity on {} pairs; max |α∨| on rb C∨: quadratic {q:.1e}, harmonic {hm:.2}, hybrid {hy:.2}; convexity and additivity on {checked} maximizer sets", all.len() * n))
}

fn criterion_9() -> Outcome {
    for name in NAMES {
        let s = builtin(name).unwrap();
        ensure(s.algebra.validate().is_empty(), format!("{name}: {:?}", s.algebra.validate()))?;
    }

    let s = builtin("heisenberg_quadratic").unwrap();
    let s1 = 0.6f64;
    let h0 = [-s1.cosh(), s1.sinh(), 1.0];
    let cfg = ControlLawConfig { causal_tol: 1e-2, ..ControlLawConfig::normal() };
    let end = |dt: f64| -> Result<Vec<f64>, String> {
        let t = run(&s, &h0, &cfg, 2.0, dt)?;
        ensure(t.conserved.rejected_steps == 0 && t.truncated.is_none(), format!("dt = {dt}: substeps were taken"))?;
        let last = t.last();
        Ok(last.g.iter().chain(last.h.iter()).copied().collect())
    };
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let (x1, x2, x3) = (end(0.1)?, end(0.05)?, end(0.025)?);
    let (e1, e2) = (dist(&x1, &x2), dist(&x2, &x3));
    let ratio = e1 / e2;
    ensure((8.0..=32.0).contains(&ratio), format!("error ratio {ratio} (model 16)"))?;

    let t = run(&builtin("heisenberg_harmonic").unwrap(), &[0.0, -2.0, 1.0], &ControlLawConfig::normal(), 4.0, 1e-2)?;
    let mut buf = Vec::new();
    write_csv(&t, &mut buf).map_err(|e| e.to_string())?;
    let back = read_csv(&buf[..]).map_err(|e| e.to_string())?;
    ensure(back.samples == t.samples && back.nu == t.nu, "CSV round trip changed the samples")?;
    Ok(format!("Jacobi holds for {} builtins; halving ratio {ratio:.2}; CSV round trip exact over {} samples", NAMES.len(), t.samples.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("conservation of α∨ and causal type", criterion_1),
        ("energy-flow equivalence", criterion_2),
        ("harmonic Heisenberg arcs and switch bound", criterion_3),
        ("harmonic dual formula", criterion_4),
        ("hybrid boundary linearity", criterion_5),
        ("Carnot corners", criterion_6),
        ("abnormal extremals are light-like", criterion_7),
        ("cone and antinorm lemmas", criterion_8),
        ("infrastructure", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS [{name}] {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL [{name}] {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
