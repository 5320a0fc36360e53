//! L2 projection error of the steady tanh profile for degrees 1 to 3.
//!
//! Usage: `cargo run --example projection_convergence -- [gamma]`

use nsk_dg::mesh::Mesh1D;
use nsk_dg::physics::steady_tanh;
use nsk_dg::space::DgSpace;

fn main() -> nsk_dg::Result<()> {
    let gamma = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1e-4);
    let exact = steady_tanh(gamma);
    for p in 1..=3 {
        println!("p = {p}");
        let mut prev: Option<f64> = None;
        for n in [32, 64, 128, 256, 512, 1024] {
            let space = DgSpace::new(Mesh1D::uniform(-1.0, 1.0, n)?, p)?;
            let err = space.l2_error(&space.l2_project(&exact)?, &exact, 2);
            let eoc = prev.map_or(0.0, |e| (e / err).log2());
            println!("  N = {n:>5}  err = {err:.4e}  eoc = {eoc:.3}");
            prev = Some(err);
        }
    }
    Ok(())
}
