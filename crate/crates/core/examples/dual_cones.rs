//! Classifies a few covectors against the dual of a Lorentz cone and a sector.

use sublorentz::cone::ConeSpec;
use sublorentz::{AlgebraCovector, AlgebraVector};

fn main() -> sublorentz::Result<()> {
    let lorentz = ConeSpec::lorentz_unit(3, 0, vec![1, 2])?;
    let sector = ConeSpec::sector(AlgebraVector::new(vec![1.0, 0.0]), AlgebraVector::new(vec![0.0, 1.0]))?;

    let probes = [vec![-2.0, 1.0, 0.5], vec![-1.0, 1.0, 0.0], vec![-1.0, 2.0, 0.0]];
    let dual = lorentz.dual_cone()?;
    println!("Lorentz cone in R^3, axis e1");
    for p in probes {
        let class = dual.classify(&AlgebraCovector::new(p.clone()), 1e-12);
        println!("  {p:?}: {class:?}");
    }

    let dual = sector.dual_cone()?;
    println!("quarter plane");
    for p in [vec![-1.0, -3.0], vec![0.0, -1.0], vec![1.0, -1.0]] {
        let class = dual.classify(&AlgebraCovector::new(p.clone()), 1e-12);
        println!("  {p:?}: {class:?}");
    }

    let p = AlgebraCovector::new(vec![-1.0, 1.0, 0.0]);
    for ray in lorentz.exposed_rays(&p, 1e-12) {
        println!("exposed ray of {:?}: {:?}", p.to_vec(), ray.to_vec());
    }
    Ok(())
}
