//! Residual history of the first Newton solve from the density step, with and without damping.
//!
//! Usage: `cargo run --release --example newton_history`

use nsk_dg::driver::{InitialCondition, RunConfig, Simulation};
use nsk_dg::physics::PhysParams;
use nsk_dg::scheme::SchemeConfig;

fn main() -> nsk_dg::Result<()> {
    for damping in [None, Some(0.5)] {
        let scheme = SchemeConfig::new(PhysParams::new(1e-4, 0.0)?, 2, 1e-3);
        let mut cfg = RunConfig::new(0.0, 1.0, 64, scheme, 1e-3, InitialCondition::Step);
        cfg.newton.damping = damping;
        let mut sim = Simulation::new(&cfg)?;
        let (_, report) = sim.step()?;
        println!("damping {damping:?}: {} iterations, {} linear solves", report.iterations, report.linear_solves);
        for (i, r) in report.history.iter().enumerate() {
            println!("  {i:>2}  {r:.3e}");
        }
    }
    Ok(())
}
