//! Builds a scenario from a TOML document and runs it.
//!
//! `cargo run --example custom_config -- path/to/problem.toml` reads another file.

use sublorentz::config::ConfigDocument;
use sublorentz::extremal::{integrate, ControlLawConfig};
use sublorentz::scenarios::from_config;
use sublorentz::AlgebraCovector;

fn main() -> sublorentz::Result<()> {
    let doc = match std::env::args_os().nth(1) {
        Some(path) => ConfigDocument::load(path.as_ref())?,
        None => ConfigDocument::parse(include_str!("tilted_heisenberg.toml"))?,
    };
    let s = from_config(&doc.scenario)?;
    let report = s.check()?;
    print!("{report}");

    let h0 = AlgebraCovector::new(doc.run.h0.clone().unwrap_or_default());
    let cfg = ControlLawConfig { nu: doc.run.nu, causal_tol: doc.run.causal_tol, ..ControlLawConfig::default() };
    let t = integrate(&s.algebra, &s.antinorm, &h0, &cfg, doc.run.t1, doc.run.dt, &s.group_model)?;
    println!("arcs {:?}, g({}) = {:>8.5?}", t.arc_sequence(), doc.run.t1, t.last().g);
    Ok(())
}
