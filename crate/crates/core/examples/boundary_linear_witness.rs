//! An antinorm whose dual is linear on part of the dual boundary, and the mixed
//! extremal it allows.

use sublorentz::extremal::mixed_causal_witness;
use sublorentz::scenarios::builtin;

fn main() -> sublorentz::Result<()> {
    let an = builtin("plane_hybrid")?.antinorm;
    match an.boundary_linearity(16) {
        Some(p) => println!("boundary-linearity witness: {:?}", p.to_vec()),
        None => println!("no witness"),
    }
    if let Some(t) = mixed_causal_witness(&an) {
        println!("mixed extremal: {:?}", t.arc_sequence());
        for x in t.samples.iter().step_by(25) {
            println!("  t = {:.2}  g = {:>7.4?}  {}", x.t, x.g, x.causal);
        }
    }

    let quadratic = builtin("minkowski_1n")?.antinorm;
    println!("quadratic antinorm witness: {:?}", quadratic.boundary_linearity(16).map(|p| p.to_vec()));
    Ok(())
}
