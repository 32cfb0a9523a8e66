//! The quadratic control law and the energy Hamiltonian flow trace the same curve.

use sublorentz::extremal::{energy_flow, geometric_coincidence, integrate, ControlLawConfig};
use sublorentz::scenarios::builtin;
use sublorentz::AlgebraCovector;

fn main() -> sublorentz::Result<()> {
    let s = builtin("heisenberg_quadratic")?;
    for (sh, z) in [(0.3f64, 1.0), (1.1, -0.5), (0.0, 2.0)] {
        let h0 = AlgebraCovector::new(vec![-sh.cosh(), sh.sinh(), z]);
        let pmp = integrate(&s.algebra, &s.antinorm, &h0, &ControlLawConfig::normal(), 3.0, 1e-3, &s.group_model)?;
        let flow = energy_flow(&s.algebra, &s.antinorm, &h0, 3.0, 1e-3, &s.group_model)?;
        println!(
            "h0 = {:>7.4?}: Frechet distance {:.2e}, energy drift {:.1e}",
            h0.to_vec(),
            geometric_coincidence(&pmp, &flow),
            flow.conserved.energy_drift.unwrap_or(0.0)
        );
    }
    Ok(())
}
