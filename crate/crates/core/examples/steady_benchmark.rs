//! Mesh convergence on the steady tanh interface with `k = 1/N`.
//!
//! Usage: `cargo run --release --example steady_benchmark -- [gamma] [N_min] [N_max]`

use nsk_dg::driver::{eoc_sweep, InitialCondition, RunConfig};
use nsk_dg::physics::PhysParams;
use nsk_dg::scheme::SchemeConfig;

fn main() -> nsk_dg::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let gamma = arg(0, 1e-4);
    let (n_min, n_max) = (arg(1, 32.0) as usize, arg(2, 256.0) as usize);

    let phys = PhysParams::new(gamma, 0.0)?;
    let mut base = RunConfig::new(-1.0, 1.0, n_min, SchemeConfig::new(phys, 1, 1.0 / n_min as f64), 1.0, InitialCondition::TanhSteady);
    base.newton.tol = 1e-12;

    let ns: Vec<usize> = std::iter::successors(Some(n_min), |n| Some(2 * n)).take_while(|&n| n <= n_max).collect();
    let table = eoc_sweep(&base, &ns)?;
    println!("gamma = {gamma:e}, p = 1, T = 1");
    print!("{table}");
    Ok(())
}
