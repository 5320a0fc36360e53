//! Builds a run from a preset plus text overrides and prints a solution snapshot as CSV.
//!
//! Usage: `cargo run --release --example config_snapshots -- [preset]`

use nsk_dg::config::Config;
use nsk_dg::driver::Simulation;
use nsk_dg::output::{snapshot_rows, write_snapshot};

fn main() -> nsk_dg::Result<()> {
    let preset = std::env::args().nth(1).unwrap_or_else(|| "nsk-step-mu1e-5".into());
    let mut cfg = Config::preset(&preset)?;
    cfg.merge_str("[run]\nn_elems = 32\nt_final = 0.01\nsnapshot_points = 3\n")?;
    cfg.apply_override("scheme.dt=1e-3")?;
    eprint!("{}", cfg.to_text());

    let run_cfg = cfg.run_config()?;
    let mut sim = Simulation::new(&run_cfg)?;
    while !sim.is_finished() {
        sim.step()?;
    }
    let s = sim.state();
    let rows = snapshot_rows(sim.space(), [&s.rho, &s.v, &s.q], sim.tau(), &run_cfg.scheme.phys.well, cfg.snapshot_points);
    write_snapshot(std::io::stdout().lock(), &rows)?;
    Ok(())
}
