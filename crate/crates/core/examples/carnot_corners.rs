//! A broken light-like extremal on the rank-two Carnot group of step four.

use sublorentz::extremal::{abnormal_check, integrate, ControlLawConfig, ScheduleEntry};
use sublorentz::group::corner_trajectory;
use sublorentz::scenarios::builtin;
use sublorentz::{AlgebraCovector, AlgebraVector};

fn control(a: f64, b: f64) -> AlgebraVector {
    let mut v = vec![0.0; 8];
    v[0] = a;
    v[1] = b;
    AlgebraVector::new(v)
}

fn main() -> sublorentz::Result<()> {
    let s = builtin("carnot_r2s4")?;
    let mut h0 = vec![0.0; 8];
    h0[..3].copy_from_slice(&[-1.0, 1.0, -1.0]);
    let schedule = vec![
        ScheduleEntry { start: 0.0, end: 1.0, control: control(1.0, 1.0) },
        ScheduleEntry { start: 1.0, end: 2.0, control: control(1.0, -1.0) },
    ];
    let cfg = ControlLawConfig::scheduled(1, schedule);
    let t = integrate(&s.algebra, &s.antinorm, &AlgebraCovector::new(h0), &cfg, 2.0, 0.01, &s.group_model)?;
    let closed = corner_trajectory(&s.group_model, 1.0, 1.0, 2.0, 0.01)?;

    let end = t.last();
    println!("arcs {:?}, truncated {:?}", t.arc_sequence(), t.truncated);
    println!("integrated g(2) = {:>8.5?}", end.g);
    println!("closed form     = {:>8.5?}", s.group_model.coordinates(&closed.last().unwrap().1));
    let report = abnormal_check(&s.algebra, &s.cone, &t)?;
    println!("h in rb C dual throughout: {}, max abnormal Hamiltonian {:.1e}", report.all_in_dual_boundary, report.max_hamiltonian);
    Ok(())
}
