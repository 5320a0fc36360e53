//! Newton iteration for one time step.

use super::banded::BandedLu;
use crate::scheme::{Scheme, StepState, UnknownVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Residual max-norm tolerance.
    pub tol: f64,
    pub max_iters: usize,
    /// Backtracking factor in `(0, 1]`; `None` takes full steps.
    pub damping: Option<f64>,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iters: 50, damping: None }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("newton tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("newton max_iters must be at least 1".into()));
        }
        if let Some(d) = self.damping {
            if !(d > 0.0 && d <= 1.0) {
                return Err(Error::InvalidConfig(format!("damping must lie in (0, 1], got {d}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveReport {
    pub iterations: usize,
    pub final_residual_norm: f64,
    pub converged: bool,
    pub linear_solves: usize,
    /// Residual max-norm before each iteration and after the last one.
    pub history: Vec<f64>,
}

fn max_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Solves the nonlinear system of one time step starting from `initial_guess`.
pub fn newton_solve(
    scheme: &Scheme,
    old: &StepState,
    initial_guess: UnknownVector,
    cfg: &NewtonConfig,
) -> Result<(UnknownVector, SolveReport)> {
    let perm = scheme.layout().element_major_permutation();
    let mut x = initial_guess;
    let mut report = SolveReport::default();
    let mut res = scheme.assemble_residual(old, &x);
    let mut norm = max_norm(&res);
    report.history.push(norm);

    while norm > cfg.tol || !norm.is_finite() {
        if report.iterations >= cfg.max_iters || !norm.is_finite() {
            report.final_residual_norm = norm;
            return Err(Error::NonConvergence { report });
        }
        let jac = scheme.assemble_jacobian(old, &x).permuted(&perm);
        let rhs: Vec<f64> = perm.iter().map(|&i| -res[i]).collect();
        let y = BandedLu::factor(&jac)?.solve(&rhs);
        report.linear_solves += 1;
        let mut dx = vec![0.0; x.len()];
        for (new, &old_i) in perm.iter().enumerate() {
            dx[old_i] = y[new];
        }

        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + lambda * d).collect();
            let trial_res = scheme.assemble_residual(old, &trial);
            let trial_norm = max_norm(&trial_res);
            let accept = match cfg.damping {
                None => true,
                Some(f) => trial_norm < norm || lambda * f < 1e-4 || f == 1.0,
            };
            if accept {
                x = UnknownVector(trial);
                res = trial_res;
                norm = trial_norm;
                break;
            }
            lambda *= cfg.damping.unwrap_or(1.0);
        }
        report.iterations += 1;
        report.history.push(norm);
    }
    report.final_residual_norm = norm;
    report.converged = true;
    Ok((x, report))
}
