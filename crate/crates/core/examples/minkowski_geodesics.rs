//! Straight time-like and light-like extremals in Minkowski space.

use sublorentz::extremal::{integrate, ControlLawConfig};
use sublorentz::scenarios::builtin_with;
use sublorentz::AlgebraCovector;

fn main() -> sublorentz::Result<()> {
    let s = builtin_with("minkowski_1n", Some(2))?;
    let sh = 0.8f64;
    let runs = [
        ("time-like", AlgebraCovector::new(vec![-sh.cosh(), sh.sinh(), 0.0]), ControlLawConfig::normal()),
        ("light-like", AlgebraCovector::new(vec![-1.0, 0.6, 0.8]), ControlLawConfig::abnormal()),
    ];
    for (label, h0, cfg) in runs {
        let t = integrate(&s.algebra, &s.antinorm, &h0, &cfg, 2.0, 0.1, &s.group_model)?;
        let end = t.last();
        println!("{label}: arcs {:?}, g(2) = {:?}", t.arc_sequence(), end.g);
        println!("    u = {:?}, drift {:.1e}", end.u.to_vec(), t.conserved.dual_value_drift);
    }
    Ok(())
}
