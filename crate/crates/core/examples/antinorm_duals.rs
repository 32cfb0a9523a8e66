//! Dual functions of the builtin antinorms, closed form against the numeric oracle.

use sublorentz::antinorm::NumericOptions;
use sublorentz::scenarios::builtin;
use sublorentz::AlgebraCovector;

fn main() -> sublorentz::Result<()> {
    let cases = [
        ("heisenberg_quadratic", vec![-2.0, 1.0, 0.3]),
        ("heisenberg_harmonic", vec![-1.0, -4.0, 0.0]),
        ("plane_hybrid", vec![0.5, -2.0]),
        ("minkowski_1n", vec![-3.0, 1.0, 2.0]),
    ];
    for (name, p) in cases {
        let an = builtin(name)?.antinorm;
        let p = AlgebraCovector::new(p);
        let d = an.dual_value(&p)?;
        let oracle = an.numeric_dual(&p, NumericOptions::default())?;
        println!("{name:<22} {} antinorm, p = {:?}", an.name(), p.to_vec());
        println!("    dual {} ({:?}), oracle {:.9}", d.value, d.method, oracle.value);
        if let Some(u) = d.maximizer {
            println!("    maximizer {:?}", u.to_vec());
        }
    }

    let hybrid = builtin("plane_hybrid")?.antinorm;
    let report = hybrid.check_axioms(500);
    println!("hybrid axioms hold: {}, dual is an antinorm: {}", report.axioms_hold(), report.dual_is_antinorm);
    Ok(())
}
