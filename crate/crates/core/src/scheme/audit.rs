//! Pointwise check of the algebraic flux conditions behind mass and energy
//! conservation, on random interior-face trace data.
//!
//! For every trial the following face quantities are evaluated:
//!
//! * mass: `F1(.; 1) + [rho v]`, which must vanish;
//! * energy 1: `F1(.; tau) + F2(.; v) + [rho tau v]`;
//! * energy 2: `F3(.; rho_t) - gamma D_t F4(.; q) + gamma [rho_t q]`, with
//!   `D_t F4(.; q) = [rho_t] {q}`.
//!
//! The conservative family must make both energy sums vanish; the dissipative
//! family must make the first non-negative and the second non-positive.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::flux::{avg, flux_f1, flux_f2, flux_f3, flux_f4, jump, FaceTraces, FluxFamily};

pub const AUDIT_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditOptions {
    pub seed: u64,
    /// Negative control: perturbs `F2` so that energy condition 1 breaks.
    pub corrupt_flux: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self { seed: 2024, corrupt_flux: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub family: FluxFamily,
    pub trials: usize,
    pub max_mass_violation: f64,
    pub max_energy1_violation: f64,
    pub max_energy2_violation: f64,
    /// Largest flux magnitude on single-valued traces.
    pub max_consistency_violation: f64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.max_mass_violation <= AUDIT_TOLERANCE
            && self.max_energy1_violation <= AUDIT_TOLERANCE
            && self.max_energy2_violation <= AUDIT_TOLERANCE
            && self.max_consistency_violation == 0.0
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |v: f64| if v <= AUDIT_TOLERANCE { "ok" } else { "FAIL" };
        writeln!(f, "flux family: {:?}, trials: {}", self.family, self.trials)?;
        writeln!(f, "mass condition      max violation {:.3e}  {}", self.max_mass_violation, verdict(self.max_mass_violation))?;
        writeln!(f, "energy condition 1  max violation {:.3e}  {}", self.max_energy1_violation, verdict(self.max_energy1_violation))?;
        writeln!(f, "energy condition 2  max violation {:.3e}  {}", self.max_energy2_violation, verdict(self.max_energy2_violation))?;
        let c = if self.max_consistency_violation == 0.0 { "ok" } else { "FAIL" };
        writeln!(f, "consistency         max |flux|    {:.3e}  {}", self.max_consistency_violation, c)?;
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn side_product(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] * b[0], a[1] * b[1]]
}

pub fn audit_flux_conditions(family: FluxFamily, trials: usize, opts: AuditOptions) -> AuditReport {
    assert!(trials >= 1, "need at least one trial");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dissipative = matches!(family, FluxFamily::Dissipative { .. });
    let f2 = |t: &FaceTraces<f64>, chi: [f64; 2]| {
        let f = flux_f2(family, t, chi);
        if opts.corrupt_flux {
            f * (1.0 + 1e-3)
        } else {
            f
        }
    };
    let mut report = AuditReport {
        family,
        trials,
        max_mass_violation: 0.0,
        max_energy1_violation: 0.0,
        max_energy2_violation: 0.0,
        max_consistency_violation: 0.0,
    };
    let mut pair = |lo: f64, hi: f64| -> [f64; 2] { [rng.gen_range(lo..hi), rng.gen_range(lo..hi)] };
    for _ in 0..trials {
        let t = FaceTraces { rho: pair(0.5, 2.5), v: pair(-2.0, 2.0), tau: pair(-2.0, 2.0), q: pair(-2.0, 2.0) };
        let rho_t = pair(-2.0, 2.0);
        let gamma = pair(1e-4, 1.0)[0];

        let mass = flux_f1(family, &t, [1.0, 1.0]) + jump(side_product(t.rho, t.v));
        report.max_mass_violation = report.max_mass_violation.max(mass.abs());

        let rtv = side_product(side_product(t.rho, t.tau), t.v);
        let e1 = flux_f1(family, &t, t.tau) + f2(&t, t.v) + jump(rtv);
        let dt_f4 = jump(rho_t) * avg(t.q);
        let e2 = flux_f3(gamma, &t, rho_t) - gamma * dt_f4 + gamma * jump(side_product(rho_t, t.q));
        let (v1, v2) = if dissipative { ((-e1).max(0.0), e2.max(0.0)) } else { (e1.abs(), e2.abs()) };
        report.max_energy1_violation = report.max_energy1_violation.max(v1);
        report.max_energy2_violation = report.max_energy2_violation.max(v2);

        // single-valued traces: every flux must vanish identically
        let c = FaceTraces { rho: [t.rho[0]; 2], v: [t.v[0]; 2], tau: [t.tau[0]; 2], q: [t.q[0]; 2] };
        let test = pair(-2.0, 2.0);
        let worst = [flux_f1(family, &c, test), f2(&c, test), flux_f3(gamma, &c, test), flux_f4(&c, test)]
            .into_iter()
            .fold(0.0f64, |m, f| m.max(f.abs()));
        report.max_consistency_violation = report.max_consistency_violation.max(worst);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conservative_family_passes() {
        let r = audit_flux_conditions(FluxFamily::Conservative, 10_000, AuditOptions::default());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn dissipative_family_has_correct_signs() {
        let r = audit_flux_conditions(FluxFamily::Dissipative { alpha: 1.0, beta: 1.0 }, 10_000, AuditOptions::default());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn corrupted_flux_is_caught() {
        let opts = AuditOptions { corrupt_flux: true, ..Default::default() };
        let r = audit_flux_conditions(FluxFamily::Conservative, 100, opts);
        assert!(!r.passed());
        assert!(r.max_energy1_violation > AUDIT_TOLERANCE);
    }
}
