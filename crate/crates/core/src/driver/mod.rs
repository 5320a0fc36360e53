//! Time marching, diagnostics and convergence studies.

mod eoc;

use std::fmt;
use std::sync::Arc;

pub use eoc::{eoc_sweep, error_series, EocRow, EocTable, ErrorTracker};

use crate::mesh::Mesh1D;
use crate::physics::{self, steady_tanh, step_ic};
use crate::scheme::{Scheme, SchemeConfig, StepState};
use crate::solver::{newton_solve, NewtonConfig, SolveReport};
use crate::space::{DgSpace, FieldCoeffs};
use crate::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum InitialCondition {
    /// Density 1.1 on `x <= 0.5`, 1.9 beyond, zero velocity.
    Step,
    /// Steady tanh interface centred at `x = 0` for the configured `gamma`.
    TanhSteady,
    Constant { rho: f64, v: f64 },
    Custom { rho: ScalarFn, v: ScalarFn, rho_grad: Option<ScalarFn> },
}

impl fmt::Debug for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Step => write!(f, "step"),
            Self::TanhSteady => write!(f, "tanh"),
            Self::Constant { rho, v } => write!(f, "constant({rho}, {v})"),
            Self::Custom { .. } => write!(f, "custom"),
        }
    }
}

impl InitialCondition {
    /// `(rho0, v0, d rho0 / dx)`; the gradient is `None` when unknown.
    fn functions(&self, gamma: f64) -> (ScalarFn, ScalarFn, Option<ScalarFn>) {
        match self {
            Self::Step => {
                let (r, v) = step_ic();
                (Arc::new(r), Arc::new(v), Some(Arc::new(|_| 0.0)))
            }
            Self::TanhSteady => {
                let width = 2.0 * (2.0 * gamma).sqrt();
                let grad = move |x: f64| {
                    let s = 1.0 / (x / width).cosh();
                    -0.5 * s * s / width
                };
                (Arc::new(steady_tanh(gamma)), Arc::new(|_| 0.0), Some(Arc::new(grad)))
            }
            Self::Constant { rho, v } => {
                let (r, v) = (*rho, *v);
                (Arc::new(move |_| r), Arc::new(move |_| v), Some(Arc::new(|_| 0.0)))
            }
            Self::Custom { rho, v, rho_grad } => (rho.clone(), v.clone(), rho_grad.clone()),
        }
    }
}

/// How the initial lifted gradient `q^0` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QInit {
    /// Solve the discrete gradient equation with `rho^0_h`.
    Lift,
    /// L2-project the analytic gradient of the initial density.
    Project,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub a: f64,
    pub b: f64,
    pub n_elems: usize,
    pub scheme: SchemeConfig,
    pub newton: NewtonConfig,
    pub t_final: f64,
    pub ic: InitialCondition,
    pub record_every: usize,
    pub q_init: QInit,
    /// Per-step energy balance tolerance relative to `|E^0|`.
    pub balance_tol: f64,
}

impl RunConfig {
    pub fn new(a: f64, b: f64, n_elems: usize, scheme: SchemeConfig, t_final: f64, ic: InitialCondition) -> Self {
        Self {
            a,
            b,
            n_elems,
            scheme,
            newton: NewtonConfig::default(),
            t_final,
            ic,
            record_every: 1,
            q_init: QInit::Lift,
            balance_tol: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        self.newton.validate()?;
        if !(self.t_final > 0.0) {
            return Err(Error::InvalidConfig(format!("t_final must be positive, got {}", self.t_final)));
        }
        if self.scheme.dt > self.t_final * (1.0 + 1e-12) {
            return Err(Error::InvalidConfig(format!("dt = {} exceeds t_final = {}", self.scheme.dt, self.t_final)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig("record_every must be at least 1".into()));
        }
        Ok(())
    }

    /// `ceil(t_final / dt)`, ignoring round-off in the ratio.
    pub fn n_steps(&self) -> usize {
        let ratio = self.t_final / self.scheme.dt;
        ((ratio - 1e-9 * ratio.max(1.0)).ceil() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    /// `E^{n+1} - E^n` of the step that produced this row.
    pub energy_delta: f64,
    /// `mu k B_h(v^{n+1/2}, v^{n+1/2})` of the same step.
    pub viscous_dissipation: f64,
    pub max_abs_velocity: f64,
    pub min_density: f64,
    pub newton_iters: usize,
}

impl DiagnosticsRow {
    /// `|energy_delta + viscous_dissipation|`.
    pub fn balance_defect(&self) -> f64 {
        (self.energy_delta + self.viscous_dissipation).abs()
    }
}

/// A running simulation; advances one time step per call to [`Simulation::step`].
pub struct Simulation {
    scheme: Scheme,
    newton: NewtonConfig,
    state: StepState,
    tau: Option<FieldCoeffs>,
    energy: f64,
    step: usize,
    n_steps: usize,
}

impl Simulation {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let mesh = Mesh1D::uniform(cfg.a, cfg.b, cfg.n_elems)?;
        let space = Arc::new(DgSpace::new(mesh, cfg.scheme.degree)?);
        let scheme = Scheme::new(space.clone(), cfg.scheme)?;
        let (rho0, v0, grad0) = cfg.ic.functions(cfg.scheme.phys.gamma);
        let rho = space.l2_project(|x| rho0(x))?;
        let v = space.l2_project_pinned(|x| v0(x))?;
        let q = match cfg.q_init {
            QInit::Lift => scheme.lift_gradient(&rho)?,
            QInit::Project => {
                let g = grad0.ok_or_else(|| {
                    Error::InvalidConfig("q_init = project needs an initial condition with a known gradient".into())
                })?;
                space.l2_project_pinned(|x| g(x))?
            }
        };
        let state = StepState { rho, v, q };
        let energy = physics::energy(&space, &state.rho, &state.v, &state.q, &cfg.scheme.phys);
        Ok(Self { scheme, newton: cfg.newton, state, tau: None, energy, step: 0, n_steps: cfg.n_steps() })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn space(&self) -> &DgSpace {
        self.scheme.space()
    }

    pub fn state(&self) -> &StepState {
        &self.state
    }

    /// Half-level `tau` of the last step, `None` before the first step.
    pub fn tau(&self) -> Option<&FieldCoeffs> {
        self.tau.as_ref()
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.scheme.config().dt
    }

    pub fn is_finished(&self) -> bool {
        self.step >= self.n_steps
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    fn row(&self, energy_delta: f64, viscous_dissipation: f64, newton_iters: usize) -> DiagnosticsRow {
        let space = self.space();
        let s = &self.state;
        let (vmin, vmax) = space.range(&s.v);
        DiagnosticsRow {
            t: self.time(),
            mass: physics::mass(space, &s.rho),
            momentum: physics::momentum(space, &s.rho, &s.v),
            energy: self.energy,
            energy_delta,
            viscous_dissipation,
            max_abs_velocity: vmin.abs().max(vmax.abs()),
            min_density: space.range(&s.rho).0,
            newton_iters,
        }
    }

    /// Diagnostics of the current state with zero step quantities.
    pub fn initial_row(&self) -> DiagnosticsRow {
        self.row(0.0, 0.0, 0)
    }

    /// Advances one time step.
    pub fn step(&mut self) -> Result<(DiagnosticsRow, SolveReport)> {
        let guess = self.scheme.initial_guess(&self.state, self.tau.as_ref());
        let (x, report) = newton_solve(&self.scheme, &self.state, guess, &self.newton)
            .map_err(|e| Error::StepFailed { step: self.step + 1, source: Box::new(e) })?;
        let (new_state, tau) = self.scheme.split(&x);
        let phys = self.scheme.config().phys;
        let new_energy = physics::energy(self.space(), &new_state.rho, &new_state.v, &new_state.q, &phys);
        let dissipation = self.scheme.viscous_dissipation(&self.state.v, &new_state.v);
        let delta = new_energy - self.energy;
        self.state = new_state;
        self.tau = Some(tau);
        self.energy = new_energy;
        self.step += 1;
        Ok((self.row(delta, dissipation, report.iterations), report))
    }
}

pub struct RunOutput {
    pub final_state: StepState,
    pub final_tau: Option<FieldCoeffs>,
    pub rows: Vec<DiagnosticsRow>,
    pub space: Arc<DgSpace>,
}

impl RunOutput {
    pub fn max_balance_defect(&self) -> f64 {
        self.rows.iter().map(DiagnosticsRow::balance_defect).fold(0.0, f64::max)
    }
}

/// Runs to the final time, calling `observe` after the initial state and after every step.
pub fn run_with(cfg: &RunConfig, mut observe: impl FnMut(&Simulation, &DiagnosticsRow)) -> Result<RunOutput> {
    let mut sim = Simulation::new(cfg)?;
    let first = sim.initial_row();
    observe(&sim, &first);
    let mut rows = vec![first];
    while !sim.is_finished() {
        let (row, _) = sim.step()?;
        observe(&sim, &row);
        if sim.step_index() % cfg.record_every == 0 || sim.is_finished() {
            rows.push(row);
        }
    }
    let space = sim.scheme.space().clone();
    Ok(RunOutput { final_state: sim.state, final_tau: sim.tau, rows, space })
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    run_with(cfg, |_, _| {})
}
