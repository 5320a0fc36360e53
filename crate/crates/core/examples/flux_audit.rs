//! Random-trace audit of the mass and energy conditions for both flux families.
//!
//! Usage: `cargo run --example flux_audit -- [trials]`

use nsk_dg::scheme::{audit_flux_conditions, AuditOptions, FluxFamily};

fn main() {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    for family in [FluxFamily::Conservative, FluxFamily::Dissipative { alpha: 0.5, beta: 2.0 }] {
        let report = audit_flux_conditions(family, trials, AuditOptions::default());
        println!("{report}");
    }
    // negative control
    let broken = audit_flux_conditions(FluxFamily::Conservative, trials, AuditOptions { corrupt_flux: true, ..Default::default() });
    println!("corrupted F2 detected: {}", !broken.passed());
}
