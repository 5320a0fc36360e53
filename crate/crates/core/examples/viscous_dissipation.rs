//! Energy decay of the density step for several viscosities, with the per-step balance defect.
//!
//! Usage: `cargo run --release --example viscous_dissipation`

use nsk_dg::driver::{run, InitialCondition, RunConfig};
use nsk_dg::physics::PhysParams;
use nsk_dg::scheme::SchemeConfig;

fn main() -> nsk_dg::Result<()> {
    println!("{:>8} {:>16} {:>16} {:>14}", "mu", "E(0)", "E(T)", "max defect");
    for mu in [0.0, 1e-3, 1e-2, 1e-1] {
        let scheme = SchemeConfig::new(PhysParams::new(1e-4, mu)?, 1, 1e-3);
        let out = run(&RunConfig::new(0.0, 1.0, 128, scheme, 0.05, InitialCondition::Step))?;
        let (e0, e1) = (out.rows[0].energy, out.rows.last().unwrap().energy);
        println!("{mu:>8.0e} {e0:>16.10} {e1:>16.10} {:>14.3e}", out.max_balance_defect());
    }
    Ok(())
}
