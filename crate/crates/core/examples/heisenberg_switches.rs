//! Light-like, time-like, light-like arcs on the Heisenberg group with the harmonic antinorm.

use sublorentz::extremal::{integrate, ControlLawConfig};
use sublorentz::io::svg_projection;
use sublorentz::scenarios::builtin;
use sublorentz::AlgebraCovector;

fn main() -> sublorentz::Result<()> {
    let s = builtin("heisenberg_harmonic")?;
    let h0 = AlgebraCovector::new(vec![0.0, -2.0, 1.0]);
    let t = integrate(&s.algebra, &s.antinorm, &h0, &ControlLawConfig::normal(), 4.0, 0.01, &s.group_model)?;

    println!("arcs: {:?}", t.arc_sequence());
    for sw in &t.switches {
        println!("  t = {:.6}: {} -> {}", sw.t, sw.from, sw.to);
    }
    for x in t.samples.iter().step_by(50) {
        println!("  t = {:.2}  h = {:>8.4?}  {}", x.t, x.h.to_vec(), x.causal);
    }

    let path = std::env::temp_dir().join("heisenberg_switches.svg");
    std::fs::write(&path, svg_projection(&t.samples, (0, 1), "heisenberg harmonic")?)?;
    println!("projection written to {}", path.display());
    Ok(())
}
