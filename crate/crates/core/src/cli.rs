//! Command-line front end behind the `sublorentz` binary.
//!
//! Exit codes: 0 ok, 1 invariant failure, 2 input error, 3 no extremal
//! through the initial covector.

use crate::config::{ConfigDocument, OutputFormat, RunSection, ScenarioConfig};
use crate::error::{Error, Result};
use crate::extremal::{integrate, ControlLawConfig, ScheduleEntry, SelectionRule, Trajectory};
use crate::io;
use crate::scenarios::{self, Scenario};
use crate::{AlgebraCovector, AlgebraVector};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_EXTREMAL: i32 = 3;

/// Largest `|⟨h, u⟩ + ν α(u)|` accepted in a finished run.
const RUN_HAMILTONIAN_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "sublorentz", version, about = "Extremals of sub-Lorentzian problems on Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ScenarioArgs {
    /// TOML configuration document.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin scenario name (ignored when --config names one).
    #[arg(long)]
    scenario: Option<String>,
    /// Spatial dimension for minkowski_1n.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate an extremal and write trajectory files.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Initial covector, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        h0: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        nu: Option<u8>,
        /// Any of csv, record, svg.
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<String>>,
        /// Run every covector of the [sweep] table in parallel.
        #[arg(long)]
        sweep: bool,
    },
    /// Check the algebra, cone and antinorm of a scenario.
    Check {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Draw a projection of a trajectory file as SVG.
    Plot {
        /// Trajectory written by `run` (.csv or .json).
        file: PathBuf,
        /// Group coordinates to draw, 0-based.
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        projection: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the builtin scenarios.
    Scenarios,
    /// Evaluate the dual function at a covector.
    Dual {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Covector, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        h: Vec<f64>,
    },
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Run { scenario, h0, out, dt, t1, nu, format, sweep } => cmd_run(&scenario, RunOverrides { h0, out, dt, t1, nu, format }, sweep),
        Command::Check { scenario } => cmd_check(&scenario),
        Command::Plot { file, projection, out } => cmd_plot(&file, &projection, out.as_deref()),
        Command::Scenarios => cmd_scenarios(),
        Command::Dual { scenario, h } => cmd_dual(&scenario, &h),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoMaximum(_) | Error::OutsideDualCone => EXIT_NO_EXTREMAL,
        Error::Invariant { .. } => EXIT_INVARIANT,
        _ => EXIT_INPUT,
    }
}

struct RunOverrides {
    h0: Option<Vec<f64>>,
    out: Option<PathBuf>,
    dt: Option<f64>,
    t1: Option<f64>,
    nu: Option<u8>,
    format: Option<Vec<String>>,
}

fn load_document(args: &ScenarioArgs) -> Result<ConfigDocument> {
    let mut doc = match &args.config {
        Some(path) => ConfigDocument::load(path).map_err(|e| match e {
            Error::Io(io) => Error::config("--config", format!("{}: {io}", path.display())),
            e => e,
        })?,
        None => ConfigDocument::default(),
    };
    if let Some(name) = &args.scenario {
        if doc.scenario.name.is_none() {
            doc.scenario.name = Some(name.clone());
        }
    }
    if args.n.is_some() {
        doc.scenario.n = args.n;
    }
    if doc.scenario == ScenarioConfig::default() {
        return Err(Error::config("--scenario", format!("give --scenario or --config; available: {}", scenarios::NAMES.join(", "))));
    }
    Ok(doc)
}

fn load_scenario(doc: &ConfigDocument) -> Result<Scenario> {
    scenarios::from_config(&doc.scenario)
}

fn control_config(run: &RunSection, dim: usize) -> Result<ControlLawConfig> {
    let mut entries = Vec::new();
    for (i, e) in run.schedule.iter().enumerate() {
        if e.control.len() != dim {
            return Err(Error::config(format!("run.schedule[{i}].control"), format!("expected {dim} entries, got {}", e.control.len())));
        }
        entries.push(ScheduleEntry { start: e.start, end: e.end, control: AlgebraVector::new(e.control.clone()) });
    }
    let selection = if entries.is_empty() { SelectionRule::Canonical } else { SelectionRule::Scheduled(entries) };
    Ok(ControlLawConfig { nu: run.nu, selection, causal_tol: run.causal_tol })
}

fn covector(v: &[f64], dim: usize, field: &str) -> Result<AlgebraCovector> {
    if v.len() != dim {
        return Err(Error::config(field, format!("expected {dim} entries, got {}", v.len())));
    }
    Ok(AlgebraCovector::new(v.to_vec()))
}

fn cmd_run(args: &ScenarioArgs, ov: RunOverrides, sweep: bool) -> Result<i32> {
    let mut doc = load_document(args)?;
    let run = &mut doc.run;
    if let Some(h0) = ov.h0 {
        run.h0 = Some(h0);
    }
    if let Some(dt) = ov.dt {
        run.dt = dt;
    }
    if let Some(t1) = ov.t1 {
        run.t1 = t1;
    }
    if let Some(nu) = ov.nu {
        run.nu = nu;
    }
    if let Some(out) = ov.out {
        run.out = Some(out.to_string_lossy().into_owned());
    }
    if let Some(f) = ov.format {
        run.formats = f
            .iter()
            .map(|s| OutputFormat::parse(s).ok_or_else(|| Error::config("--format", format!("unknown format `{s}`; use csv, record or svg"))))
            .collect::<Result<_>>()?;
    }
    run.validate()?;
    let scenario = load_scenario(&doc)?;
    let dim = scenario.dim();
    let cfg = control_config(&doc.run, dim)?;
    let out_dir = PathBuf::from(doc.run.out.clone().unwrap_or_else(|| "out".into()));

    let jobs: Vec<AlgebraCovector> = if sweep {
        let Some(s) = &doc.sweep else {
            return Err(Error::config("sweep", "--sweep needs a [sweep] table with h0 = [[...], ...]"));
        };
        s.h0.iter().enumerate().map(|(i, h)| covector(h, dim, &format!("sweep.h0[{i}]"))).collect::<Result<_>>()?
    } else {
        let h0 = doc.run.h0.as_ref().ok_or_else(|| Error::config("run.h0", "missing initial covector (or pass --h0)"))?;
        vec![covector(h0, dim, "run.h0")?]
    };

    let results: Vec<Result<Trajectory>> = jobs
        .par_iter()
        .map(|h0| integrate(&scenario.algebra, &scenario.antinorm, h0, &cfg, doc.run.t1, doc.run.dt, &scenario.group_model))
        .collect();

    std::fs::create_dir_all(&out_dir)?;
    let mut code = EXIT_OK;
    for (k, (h0, res)) in jobs.iter().zip(results).enumerate() {
        let stem = if sweep { format!("trajectory_{k:03}") } else { "trajectory".into() };
        match res {
            Ok(traj) => {
                write_artifacts(&traj, &out_dir, &stem, &doc.run, &scenario.name)?;
                print_summary(&scenario, h0, &traj, &out_dir.join(&stem));
                if !invariants_hold(&scenario, &traj) {
                    code = code.max(EXIT_INVARIANT);
                }
            }
            Err(e) => {
                eprintln!("h0 = {:?}: {e}", h0.to_vec());
                let c = exit_code(&e);
                if !sweep {
                    return Ok(c);
                }
                code = code.max(c);
            }
        }
    }
    Ok(code)
}

fn invariants_hold(s: &Scenario, traj: &Trajectory) -> bool {
    let membership = traj.samples.iter().all(|x| x.u.norm() > 0.0 && s.cone.contains(&x.u, 1e-9));
    traj.truncated.is_none() && traj.conserved.max_hamiltonian <= RUN_HAMILTONIAN_TOL && membership
}

fn write_artifacts(traj: &Trajectory, dir: &Path, stem: &str, run: &RunSection, title: &str) -> Result<()> {
    for f in &run.formats {
        let path = dir.join(format!("{stem}.{}", f.extension()));
        match f {
            OutputFormat::Csv => io::write_csv(traj, std::io::BufWriter::new(std::fs::File::create(&path)?))?,
            OutputFormat::Record => io::write_record(traj, std::io::BufWriter::new(std::fs::File::create(&path)?))?,
            OutputFormat::Svg => std::fs::write(&path, io::svg_projection(&traj.samples, run.projection, title)?)?,
        }
    }
    Ok(())
}

fn print_summary(s: &Scenario, h0: &AlgebraCovector, traj: &Trajectory, stem: &Path) {
    let arcs: Vec<&str> = traj.arc_sequence().iter().map(|c| c.as_str()).collect();
    println!("scenario: {} (nu = {})", s.name, traj.nu);
    println!("h0: {:?}", h0.to_vec());
    println!("samples: {} up to t = {}", traj.samples.len(), traj.end_time());
    println!("arcs: {}", arcs.join(" -> "));
    for sw in &traj.switches {
        println!("switch at t = {:.6}: {} -> {}", sw.t, sw.from, sw.to);
    }
    let c = &traj.conserved;
    println!("max |dual drift|: {:.3e}", c.dual_value_drift);
    println!("max |hamiltonian|: {:.3e}", c.max_hamiltonian);
    println!("rejected steps: {}", c.rejected_steps);
    if let Some(why) = &traj.truncated {
        println!("truncated: {why}");
    }
    println!("written: {}.*", stem.display());
}

fn cmd_check(args: &ScenarioArgs) -> Result<i32> {
    let doc = load_document(args)?;
    let scenario = scenarios::assemble(&doc.scenario)?;
    let report = scenario.check()?;
    print!("{report}");
    Ok(if report.passed() { EXIT_OK } else { EXIT_INVARIANT })
}

fn cmd_plot(file: &Path, projection: &[usize], out: Option<&Path>) -> Result<i32> {
    let [i, j] = projection else {
        return Err(Error::config("--projection", "expects two coordinate indices"));
    };
    let table = io::read_trajectory_file(file).map_err(|e| match e {
        Error::Io(io) => Error::Input(format!("{}: {io}", file.display())),
        e => e,
    })?;
    let title = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let svg = io::svg_projection(&table.samples, (*i, *j), &title)?;
    let target = out.map(Path::to_path_buf).unwrap_or_else(|| file.with_extension("svg"));
    std::fs::write(&target, svg)?;
    println!("written: {}", target.display());
    Ok(EXIT_OK)
}

fn cmd_scenarios() -> Result<i32> {
    for name in scenarios::NAMES {
        let s = scenarios::builtin(name)?;
        println!("{name:<22} dim {:<2} {} antinorm, {} group", s.dim(), s.antinorm.name(), s.group_model.name());
        for (claim, text) in &s.expectations {
            println!("    {claim}: {text}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_dual(args: &ScenarioArgs, h: &[f64]) -> Result<i32> {
    let doc = load_document(args)?;
    let scenario = load_scenario(&doc)?;
    let p = covector(h, scenario.dim(), "--h")?;
    let d = scenario.antinorm.dual_value(&p)?;
    println!("alpha_dual: {}", d.value);
    match &d.maximizer {
        Some(u) => println!("maximizer: {:?}", u.to_vec()),
        None => println!("maximizer: none"),
    }
    println!("method: {:?}", d.method);
    Ok(EXIT_OK)
}
