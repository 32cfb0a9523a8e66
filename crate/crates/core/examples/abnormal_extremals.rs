//! Abnormal extremals: light-like in Lorentzian problems, and kept off the
//! annihilator of a contact distribution.

use sublorentz::extremal::{abnormal_check, integrate, ControlLawConfig};
use sublorentz::scenarios::builtin;
use sublorentz::AlgebraCovector;

fn main() -> sublorentz::Result<()> {
    for (name, h0) in [("minkowski_1n", vec![-1.0, 0.6, -0.8]), ("heisenberg_quadratic", vec![-1.0, 1.0, -0.5]), ("heisenberg_harmonic", vec![0.0, -1.0, 0.4])] {
        let s = builtin(name)?;
        let t = integrate(&s.algebra, &s.antinorm, &AlgebraCovector::new(h0), &ControlLawConfig::abnormal(), 4.0, 0.01, &s.group_model)?;
        let r = abnormal_check(&s.algebra, &s.cone, &t)?;
        println!("{name}: arcs {:?}", t.arc_sequence());
        println!(
            "    passed {}, light-like samples {}/{}, annihilator samples {}, corners {}, contact {:?}",
            r.passed(),
            r.lightlike_samples,
            r.samples,
            r.annihilator_samples,
            r.corner_samples,
            r.contact
        );
    }
    Ok(())
}
