//! Command-line front end: `run`, `benchmark`, `audit` and `snapshot`.
//!
//! Exit codes: 0 on success, 1 on a configuration or I/O error, 2 when a
//! Newton solve fails to converge, 3 when the flux audit finds a violation.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::driver::{eoc_sweep, Simulation};
use crate::output::{snapshot_file_name, snapshot_rows, write_eoc_csv, write_snapshot, DiagnosticsWriter};
use crate::scheme::{audit_flux_conditions, AuditOptions, FluxFamily};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NON_CONVERGENCE: i32 = 2;
pub const EXIT_AUDIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "nsk-dg", version, about = "Energy-consistent DG solver for the 1D Navier-Stokes-Korteweg system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time-march a configuration, writing diagnostics.csv and requested snapshots.
    Run(CommonArgs),
    /// Mesh convergence study on the steady tanh interface.
    Benchmark(CommonArgs),
    /// Check the algebraic flux conditions on random face data.
    Audit(AuditArgs),
    /// Time-march and write only solution snapshots.
    Snapshot(SnapshotArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Config file in sectioned key = value format.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Override one parameter, e.g. `--set phys.mu=1e-6`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Start from a named preset instead of the built-in defaults.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct SnapshotArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated snapshot times; defaults to `run.snapshot_times`, or the final time.
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FluxArg {
    Conservative,
    Dissipative,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = FluxArg::Conservative)]
    pub flux: FluxArg,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = AuditOptions::default().seed)]
    pub seed: u64,
    /// Negative control: perturb one flux so the audit must fail.
    #[arg(long, hide = true)]
    pub corrupt_flux: bool,
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Run(a) => cmd_run(a, None),
        Command::Snapshot(a) => cmd_run(&a.common, Some(&a.times)),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Audit(a) => return cmd_audit(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_non_convergence() {
                EXIT_NON_CONVERGENCE
            } else {
                EXIT_CONFIG
            }
        }
    }
}

/// Defaults (or preset), then the config file, then `--set` overrides.
pub fn resolve_config(args: &CommonArgs, base: Config) -> Result<Config> {
    let mut cfg = match &args.preset {
        Some(name) => Config::preset(name)?,
        None => base,
    };
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read config {}: {e}", path.display())))?;
        cfg.merge_str(&text)?;
    }
    for o in &args.overrides {
        cfg.apply_override(o)?;
    }
    Ok(cfg)
}

fn prepare_out_dir(out: &Path, cfg: &Config) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join("resolved_config.txt"), cfg.to_text())?;
    Ok(())
}

/// Time marching shared by `run` (diagnostics plus snapshots) and `snapshot` (snapshots only).
fn cmd_run(args: &CommonArgs, snapshot_only: Option<&Vec<f64>>) -> Result<()> {
    let mut cfg = resolve_config(args, Config::default())?;
    if let Some(times) = snapshot_only {
        if !times.is_empty() {
            cfg.snapshot_times = times.clone();
        } else if cfg.snapshot_times.is_empty() {
            cfg.snapshot_times = vec![cfg.t_final];
        }
    }
    let run_cfg = cfg.run_config()?;
    if let Some(t) = cfg.snapshot_times.iter().find(|&&t| !(0.0..=cfg.t_final).contains(&t)) {
        return Err(Error::InvalidConfig(format!("snapshot time {t} lies outside [0, {}]", cfg.t_final)));
    }
    prepare_out_dir(&args.out, &cfg)?;

    let mut sim = Simulation::new(&run_cfg)?;
    let mut diag = match snapshot_only {
        None => Some(DiagnosticsWriter::new(BufWriter::new(File::create(args.out.join("diagnostics.csv"))?))?),
        Some(_) => None,
    };
    let dt = run_cfg.scheme.dt;
    let mut pending: Vec<f64> = cfg.snapshot_times.clone();
    pending.sort_by(f64::total_cmp);
    pending.dedup();
    let snap = |sim: &Simulation, pending: &mut Vec<f64>| -> Result<()> {
        let t = sim.time();
        while let Some(&ts) = pending.first() {
            if ts > t + 1e-9 * dt && !sim.is_finished() {
                break;
            }
            let s = sim.state();
            let rows = snapshot_rows(
                sim.space(),
                [&s.rho, &s.v, &s.q],
                sim.tau(),
                &run_cfg.scheme.phys.well,
                cfg.snapshot_points,
            );
            write_snapshot(BufWriter::new(File::create(args.out.join(snapshot_file_name(ts)))?), &rows)?;
            pending.remove(0);
        }
        Ok(())
    };

    if let Some(d) = diag.as_mut() {
        d.write_row(&sim.initial_row())?;
    }
    snap(&sim, &mut pending)?;
    while !sim.is_finished() {
        match sim.step() {
            Ok((row, _)) => {
                if let Some(d) = diag.as_mut() {
                    if sim.step_index() % run_cfg.record_every == 0 || sim.is_finished() {
                        d.write_row(&row)?;
                    }
                }
                snap(&sim, &mut pending)?;
            }
            Err(e) => {
                if let (Some(d), Error::StepFailed { step, .. }) = (diag.as_mut(), &e) {
                    d.abort(*step)?;
                }
                return Err(e);
            }
        }
    }
    Ok(())
}

fn cmd_benchmark(args: &CommonArgs) -> Result<()> {
    let cfg = resolve_config(args, Config::benchmark_default())?;
    let base = cfg.run_config()?;
    prepare_out_dir(&args.out, &cfg)?;
    let table = eoc_sweep(&base, &cfg.n_list)?;
    write_eoc_csv(BufWriter::new(File::create(args.out.join("eoc.csv"))?), &table)?;
    let text = format!("gamma = {:e}, p = {}, T = {}\n{table}", cfg.gamma, cfg.degree, cfg.t_final);
    fs::write(args.out.join("eoc.txt"), &text)?;
    print!("{text}");
    Ok(())
}

fn cmd_audit(args: &AuditArgs) -> i32 {
    if args.trials == 0 {
        eprintln!("error: trials must be at least 1");
        return EXIT_CONFIG;
    }
    let family = match args.flux {
        FluxArg::Conservative => FluxFamily::Conservative,
        FluxArg::Dissipative => FluxFamily::Dissipative { alpha: args.alpha, beta: args.beta },
    };
    if let Err(e) = family.validate() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let opts = AuditOptions { seed: args.seed, corrupt_flux: args.corrupt_flux };
    let report = audit_flux_conditions(family, args.trials, opts);
    println!("{report}");
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_AUDIT_FAILED
    }
}
