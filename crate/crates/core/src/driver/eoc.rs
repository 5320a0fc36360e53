use std::fmt;

use rayon::prelude::*;

use super::{run_with, InitialCondition, RunConfig, ScalarFn};
use crate::scheme::StepState;
use crate::space::DgSpace;
use crate::{Error, Result};

/// Extra quadrature points used when measuring errors.
const ERROR_EXTRA_POINTS: usize = 2;

/// Tracks `max_n ||rho_h^n - rho(t_n)||` and the same for `v` over a run.
pub struct ErrorTracker {
    exact_rho: ScalarFn,
    exact_v: ScalarFn,
    pub max_err_rho: f64,
    pub max_err_v: f64,
}

impl ErrorTracker {
    /// For a steady exact solution `(rho, v)`.
    pub fn new(exact_rho: ScalarFn, exact_v: ScalarFn) -> Self {
        Self { exact_rho, exact_v, max_err_rho: 0.0, max_err_v: 0.0 }
    }

    pub fn observe(&mut self, space: &DgSpace, state: &StepState) {
        let er = space.l2_error(&state.rho, |x| (self.exact_rho)(x), ERROR_EXTRA_POINTS);
        let ev = space.l2_error(&state.v, |x| (self.exact_v)(x), ERROR_EXTRA_POINTS);
        self.max_err_rho = self.max_err_rho.max(er);
        self.max_err_v = self.max_err_v.max(ev);
    }
}

/// Runs `cfg` and returns the max-in-time L2 errors of `(rho, v)` against a
/// steady exact solution, including the initial state.
pub fn error_series(cfg: &RunConfig, exact_rho: ScalarFn, exact_v: ScalarFn) -> Result<(f64, f64)> {
    let mut tracker = ErrorTracker::new(exact_rho, exact_v);
    run_with(cfg, |sim, _| tracker.observe(sim.space(), sim.state()))?;
    Ok((tracker.max_err_rho, tracker.max_err_v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EocRow {
    pub n: usize,
    pub err_rho: f64,
    pub eoc_rho: f64,
    pub err_v: f64,
    pub eoc_v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EocTable {
    pub rows: Vec<EocRow>,
}

impl EocTable {
    /// Builds the table from `(N, err_rho, err_v)`; the first row gets EOC 0.
    pub fn from_errors(errors: &[(usize, f64, f64)]) -> Self {
        let rate = |prev: f64, cur: f64| (prev / cur).log2();
        let rows = errors
            .iter()
            .enumerate()
            .map(|(i, &(n, er, ev))| {
                let (eoc_rho, eoc_v) = if i == 0 {
                    (0.0, 0.0)
                } else {
                    let (_, pr, pv) = errors[i - 1];
                    (rate(pr, er), rate(pv, ev))
                };
                EocRow { n, err_rho: er, eoc_rho, err_v: ev, eoc_v }
            })
            .collect();
        Self { rows }
    }

    pub fn last(&self) -> Option<&EocRow> {
        self.rows.last()
    }
}

impl fmt::Display for EocTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>12}  {:>7}  {:>12}  {:>7}", "N", "err_rho", "eoc", "err_v", "eoc")?;
        for r in &self.rows {
            writeln!(f, "{:>6}  {:>12.3e}  {:>7.3}  {:>12.3e}  {:>7.3}", r.n, r.err_rho, r.eoc_rho, r.err_v, r.eoc_v)?;
        }
        Ok(())
    }
}

/// Convergence study on the steady tanh interface: for each `N` the base
/// configuration is rerun with `N` elements and `dt = 1/N`. `ns` must be
/// increasing and each entry double its predecessor.
pub fn eoc_sweep(base: &RunConfig, ns: &[usize]) -> Result<EocTable> {
    if ns.is_empty() {
        return Err(Error::InvalidConfig("the list of mesh sizes is empty".into()));
    }
    if let Some(w) = ns.windows(2).find(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidConfig(format!("mesh sizes must double, got {} followed by {}", w[0], w[1])));
    }
    let gamma = base.scheme.phys.gamma;
    let exact_rho: ScalarFn = std::sync::Arc::new(crate::physics::steady_tanh(gamma));
    let exact_v: ScalarFn = std::sync::Arc::new(|_| 0.0);
    let errors: Vec<(usize, f64, f64)> = ns
        .par_iter()
        .map(|&n| {
            let mut cfg = base.clone();
            cfg.n_elems = n;
            cfg.scheme.dt = 1.0 / n as f64;
            cfg.ic = InitialCondition::TanhSteady;
            let (er, ev) = error_series(&cfg, exact_rho.clone(), exact_v.clone())
                .map_err(|e| Error::BenchmarkRunFailed { n_elems: n, source: Box::new(e) })?;
            Ok((n, er, ev))
        })
        .collect::<Result<_>>()?;
    Ok(EocTable::from_errors(&errors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eoc_of_quartering_errors_is_two() {
        let t = EocTable::from_errors(&[(8, 1.0, 4.0), (16, 0.25, 1.0), (32, 0.0625, 0.25)]);
        assert_eq!(t.rows[0].eoc_rho, 0.0);
        assert!((t.rows[1].eoc_rho - 2.0).abs() < 1e-14);
        assert!((t.rows[2].eoc_v - 2.0).abs() < 1e-14);
        let text = t.to_string();
        assert!(text.contains("2.000"));
    }
}
