//! Inviscid density step: mass is conserved to round-off and the discrete energy stays flat.
//!
//! Usage: `cargo run --release --example step_conservation -- [N] [T]`

use nsk_dg::driver::{run, InitialCondition, RunConfig};
use nsk_dg::physics::PhysParams;
use nsk_dg::scheme::SchemeConfig;

fn main() -> nsk_dg::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(128);
    let t_final: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);

    let scheme = SchemeConfig::new(PhysParams::new(1e-4, 0.0)?, 1, 1e-3);
    let mut cfg = RunConfig::new(0.0, 1.0, n, scheme, t_final, InitialCondition::Step);
    cfg.record_every = 10;
    let out = run(&cfg)?;

    let first = out.rows[0];
    println!("{:>8} {:>14} {:>14} {:>12} {:>6}", "t", "mass drift", "energy drift", "max|v|", "iters");
    for r in &out.rows {
        println!(
            "{:>8.4} {:>14.3e} {:>14.3e} {:>12.4e} {:>6}",
            r.t,
            r.mass - first.mass,
            (r.energy - first.energy) / first.energy,
            r.max_abs_velocity,
            r.newton_iters
        );
    }
    Ok(())
}
