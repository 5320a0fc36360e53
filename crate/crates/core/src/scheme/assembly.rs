//! Residual and Jacobian of the fully discrete midpoint scheme on one time step.
//!
//! With `X^{n+1/2} = (X^n + X^{n+1}) / 2`, `k` the time step and `tau` the
//! half-level auxiliary unknown, the four weak equations are
//!
//! ```text
//! (1) ∫ [(rho1 - rho0)/k + (rho_h v_h)'] Psi                         + Σ_E F1(half; Psi)
//! (2) ∫ [rho_h (v1 - v0)/k + (rho_h v_h v_h)' - (rho_h v_h)' v_h
//!        + rho_h tau' - 1/2 rho_h (v_h^2)'] X                        + Σ_E F2(half; X) + mu B_h(v_h, X)
//! (3) ∫ [tau - Wq(rho0, rho1) + gamma q_h' - 1/4 (v1^2 + v0^2)] Xi    + Σ_E F3(half; Xi)
//! (4) ∫ [q1 - rho1'] Z                                               + Σ_E F4(level n+1; Z)
//! ```
//!
//! Face sums run over interior faces only. Half-level products are formed
//! pointwise from averaged evaluations.

use std::sync::Arc;

use rayon::prelude::*;

use super::flux::{flux_f1, flux_f2, flux_f3, flux_f4, FaceTraces, FluxFamily};
use super::layout::{Block, UnknownLayout, UnknownVector};
use super::sip::SipOperator;
use crate::dual::{Dual, Scalar};
use crate::physics::{DoubleWell, PhysParams};
use crate::solver::CsrMatrix;
use crate::space::{DgSpace, FieldCoeffs};
use crate::{Error, Result};

const BLOCKS: [Block; 4] = [Block::Rho, Block::V, Block::Tau, Block::Q];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub phys: PhysParams,
    /// Interior penalty parameter.
    pub sigma: f64,
    /// Smallest accepted `sigma`.
    pub sigma_min: f64,
    pub flux: FluxFamily,
    pub degree: usize,
    /// Time step `k`.
    pub dt: f64,
}

impl SchemeConfig {
    pub fn new(phys: PhysParams, degree: usize, dt: f64) -> Self {
        let sigma = Self::default_sigma(degree);
        Self { phys, sigma, sigma_min: sigma, flux: FluxFamily::Conservative, degree, dt }
    }

    /// `10 p^2`.
    pub fn default_sigma(degree: usize) -> f64 {
        10.0 * (degree * degree) as f64
    }

    pub fn validate(&self) -> Result<()> {
        self.phys.validate()?;
        self.flux.validate()?;
        if self.degree == 0 {
            return Err(Error::InvalidConfig("degree must be at least 1".into()));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.sigma > 0.0) || self.sigma < self.sigma_min {
            return Err(Error::InvalidConfig(format!(
                "sigma = {} is below the coercivity threshold {}",
                self.sigma, self.sigma_min
            )));
        }
        Ok(())
    }
}

/// `(rho, v, q)` at an integer time level.
#[derive(Debug, Clone, PartialEq)]
pub struct StepState {
    pub rho: FieldCoeffs,
    pub v: FieldCoeffs,
    pub q: FieldCoeffs,
}

impl StepState {
    /// Checks the layout and that `v` and `q` vanish at both domain endpoints.
    pub fn validate(&self, space: &DgSpace) -> Result<()> {
        for f in [&self.rho, &self.v, &self.q] {
            if f.len() != space.n_dofs() {
                return Err(Error::LayoutMismatch { expected: space.n_dofs(), got: f.len() });
            }
        }
        let last = space.n_dofs() - 1;
        for (name, f) in [("v", &self.v), ("q", &self.q)] {
            if f.values()[0] != 0.0 || f.values()[last] != 0.0 {
                return Err(Error::InvalidConfig(format!("{name} must vanish on the boundary")));
            }
        }
        Ok(())
    }
}

/// Old-level values at one quadrature point.
#[derive(Debug, Clone, Copy)]
struct OldPoint {
    r: f64,
    rx: f64,
    v: f64,
    qx: f64,
}

/// Volume integrands of the four weak equations at one point.
///
/// `new = [rho1, rho1', v1, v1', tau, tau', q1, q1']`.
#[inline]
fn volume_integrands<S: Scalar>(old: &OldPoint, v0x: f64, new: [S; 8], dt: f64, gamma: f64, well: &DoubleWell) -> [S; 4] {
    let [r1, r1x, v1, v1x, t, tx, q1, q1x] = new;
    let rh = (r1 + old.r) * 0.5;
    let rhx = (r1x + old.rx) * 0.5;
    let vh = (v1 + old.v) * 0.5;
    let vhx = (v1x + v0x) * 0.5;
    let qhx = (q1x + old.qx) * 0.5;

    let div_rv = rhx * vh + rh * vhx;
    let f1 = (r1 - old.r) / dt + div_rv;

    let div_rvv = rhx * vh * vh + rh * vh * vhx * 2.0;
    let half_rho_grad_v2 = rh * vh * vhx;
    let f2 = rh * (v1 - old.v) / dt + div_rvv - div_rv * vh + rh * tx - half_rho_grad_v2;

    let f3 = t - well.w_quotient(S::cst(old.r), r1) + qhx * gamma - (v1 * v1 + old.v * old.v) * 0.25;

    let f4 = q1 - r1x;
    [f1, f2, f3, f4]
}

/// Face contributions `[equation][test side]` on one interior face.
///
/// `new = [rho1_L, rho1_R, v1_L, v1_R, tau_L, tau_R, q1_L, q1_R]`, `old` the
/// matching level-n traces of `(rho, v, q)`.
#[inline]
fn face_terms<S: Scalar>(family: FluxFamily, gamma: f64, old: [[f64; 2]; 3], new: [S; 8]) -> [[S; 2]; 4] {
    let half = |a: S, b: f64| (a + b) * 0.5;
    let traces = FaceTraces {
        rho: [half(new[0], old[0][0]), half(new[1], old[0][1])],
        v: [half(new[2], old[1][0]), half(new[3], old[1][1])],
        tau: [new[4], new[5]],
        q: [half(new[6], old[2][0]), half(new[7], old[2][1])],
    };
    let level_new = FaceTraces { rho: [new[0], new[1]], v: [new[2], new[3]], tau: [new[4], new[5]], q: [new[6], new[7]] };
    let tests = [[1.0, 0.0], [0.0, 1.0]];
    let mut out = [[S::cst(0.0); 2]; 4];
    for (s, test) in tests.into_iter().enumerate() {
        out[0][s] = flux_f1(family, &traces, test);
        out[1][s] = flux_f2(family, &traces, test);
        out[2][s] = flux_f3(gamma, &traces, test);
        out[3][s] = flux_f4(&level_new, test);
    }
    out
}

/// Element-local residual (and optionally Jacobian) block.
struct ElemBlock {
    /// `res[eq * nl + i]`
    res: Vec<f64>,
    /// `jac[(eq * nl + i) * 4 nl + field * nl + j]`
    jac: Vec<f64>,
}

/// One time step of the discretisation: space, configuration and the
/// precomputed viscous operator.
#[derive(Debug, Clone)]
pub struct Scheme {
    space: Arc<DgSpace>,
    cfg: SchemeConfig,
    sip: SipOperator,
    layout: UnknownLayout,
}

impl Scheme {
    pub fn new(space: Arc<DgSpace>, cfg: SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.degree != space.degree() {
            return Err(Error::InvalidConfig(format!(
                "scheme degree {} does not match space degree {}",
                cfg.degree,
                space.degree()
            )));
        }
        let sip = SipOperator::new(&space, cfg.sigma);
        let layout = UnknownLayout::new(&space);
        Ok(Self { space, cfg, sip, layout })
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    pub fn sip(&self) -> &SipOperator {
        &self.sip
    }

    pub fn layout(&self) -> &UnknownLayout {
        &self.layout
    }

    /// `(rho^n, v^n, tau, q^n)` with `tau` taken from the previous step or,
    /// when absent, the nodal interpolant of `W'(rho^n)`.
    pub fn initial_guess(&self, old: &StepState, prev_tau: Option<&FieldCoeffs>) -> UnknownVector {
        let tau = match prev_tau {
            Some(t) => t.clone(),
            None => {
                let well = self.cfg.phys.well;
                FieldCoeffs::new(old.rho.values().iter().map(|&r| well.wp(r)).collect(), self.space.n_local())
            }
        };
        self.layout.pack(&old.rho, &old.v, &tau, &old.q)
    }

    fn element_block(&self, k: usize, old: &StepState, new: &[FieldCoeffs; 4], with_jac: bool) -> ElemBlock {
        let space = &*self.space;
        let nl = space.n_local();
        let quad = space.quadrature();
        let table = space.quad_table();
        let h = space.mesh().width(k);
        let (jac_det, sc) = (0.5 * h, 2.0 / h);
        let (dt, gamma, well) = (self.cfg.dt, self.cfg.phys.gamma, self.cfg.phys.well);

        let olds = [old.rho.elem(k), old.v.elem(k), old.q.elem(k)];
        let news = [new[0].elem(k), new[1].elem(k), new[2].elem(k), new[3].elem(k)];
        let mut block = ElemBlock {
            res: vec![0.0; 4 * nl],
            jac: if with_jac { vec![0.0; 16 * nl * nl] } else { Vec::new() },
        };
        let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

        for (qp, &w) in quad.weights.iter().enumerate() {
            let phi = table.row(qp);
            let dphi: Vec<f64> = table.drow(qp).iter().map(|d| d * sc).collect();
            let old_pt = OldPoint {
                r: dot(phi, olds[0]),
                rx: dot(&dphi, olds[0]),
                v: dot(phi, olds[1]),
                qx: dot(&dphi, olds[2]),
            };
            let v0x = dot(&dphi, olds[1]);
            let mut vals = [0.0; 8];
            for f in 0..4 {
                vals[2 * f] = dot(phi, news[f]);
                vals[2 * f + 1] = dot(&dphi, news[f]);
            }
            let wj = w * jac_det;
            if with_jac {
                let seeds: [Dual<8>; 8] = std::array::from_fn(|m| Dual::var(vals[m], m));
                let f = volume_integrands(&old_pt, v0x, seeds, dt, gamma, &well);
                for eq in 0..4 {
                    let d = &f[eq].eps;
                    for i in 0..nl {
                        let row = eq * nl + i;
                        let wi = wj * phi[i];
                        block.res[row] += wi * f[eq].re;
                        let jrow = &mut block.jac[row * 4 * nl..(row + 1) * 4 * nl];
                        for field in 0..4 {
                            let (dv, dg) = (d[2 * field], d[2 * field + 1]);
                            if dv == 0.0 && dg == 0.0 {
                                continue;
                            }
                            for j in 0..nl {
                                jrow[field * nl + j] += wi * (dv * phi[j] + dg * dphi[j]);
                            }
                        }
                    }
                }
            } else {
                let f = volume_integrands(&old_pt, v0x, vals, dt, gamma, &well);
                for eq in 0..4 {
                    for i in 0..nl {
                        block.res[eq * nl + i] += wj * phi[i] * f[eq];
                    }
                }
            }
        }
        block
    }

    fn assemble(&self, old: &StepState, guess: &[f64], with_jac: bool) -> (Vec<f64>, Option<CsrMatrix>) {
        let space = &*self.space;
        let nl = space.n_local();
        let n_elems = space.n_elems();
        let layout = &self.layout;
        let new = layout.unpack(guess);
        let mut res = vec![0.0; layout.len()];
        let mut trip: Vec<(usize, usize, f64)> = Vec::new();

        // element kernels in parallel, scattered in element order
        let blocks: Vec<ElemBlock> = (0..n_elems)
            .into_par_iter()
            .with_min_len(64)
            .map(|k| self.element_block(k, old, &new, with_jac))
            .collect();
        for (k, block) in blocks.iter().enumerate() {
            for eq in 0..4 {
                for i in 0..nl {
                    let Some(row) = layout.index(BLOCKS[eq], space.dof(k, i)) else { continue };
                    res[row] += block.res[eq * nl + i];
                    if with_jac {
                        let jrow = &block.jac[(eq * nl + i) * 4 * nl..(eq * nl + i + 1) * 4 * nl];
                        for field in 0..4 {
                            for j in 0..nl {
                                let v = jrow[field * nl + j];
                                if v == 0.0 {
                                    continue;
                                }
                                if let Some(col) = layout.index(BLOCKS[field], space.dof(k, j)) {
                                    trip.push((row, col, v));
                                }
                            }
                        }
                    }
                }
            }
        }

        // interior faces
        let (family, gamma) = (self.cfg.flux, self.cfg.phys.gamma);
        for k in 0..n_elems.saturating_sub(1) {
            let dofs = [space.dof(k, nl - 1), space.dof(k + 1, 0)];
            let old_tr = [
                [old.rho.values()[dofs[0]], old.rho.values()[dofs[1]]],
                [old.v.values()[dofs[0]], old.v.values()[dofs[1]]],
                [old.q.values()[dofs[0]], old.q.values()[dofs[1]]],
            ];
            let vals: [f64; 8] = std::array::from_fn(|m| new[m / 2].values()[dofs[m % 2]]);
            if with_jac {
                let seeds: [Dual<8>; 8] = std::array::from_fn(|m| Dual::var(vals[m], m));
                let terms = face_terms(family, gamma, old_tr, seeds);
                for eq in 0..4 {
                    for s in 0..2 {
                        let Some(row) = layout.index(BLOCKS[eq], dofs[s]) else { continue };
                        res[row] += terms[eq][s].re;
                        for m in 0..8 {
                            let v = terms[eq][s].eps[m];
                            if v == 0.0 {
                                continue;
                            }
                            if let Some(col) = layout.index(BLOCKS[m / 2], dofs[m % 2]) {
                                trip.push((row, col, v));
                            }
                        }
                    }
                }
            } else {
                let terms = face_terms(family, gamma, old_tr, vals);
                for eq in 0..4 {
                    for s in 0..2 {
                        if let Some(row) = layout.index(BLOCKS[eq], dofs[s]) {
                            res[row] += terms[eq][s];
                        }
                    }
                }
            }
        }

        // viscous term mu B_h(v_h, X)
        let mu = self.cfg.phys.mu;
        if mu != 0.0 {
            let vh = old.v.midpoint(&new[1]);
            let b = self.sip.matrix();
            for d in 0..space.n_dofs() {
                let Some(row) = layout.index(Block::V, d) else { continue };
                let mut s = 0.0;
                for (j, bij) in b.row(d) {
                    s += bij * vh.values()[j];
                    if with_jac {
                        if let Some(col) = layout.index(Block::V, j) {
                            trip.push((row, col, 0.5 * mu * bij));
                        }
                    }
                }
                res[row] += mu * s;
            }
        }

        let jac = with_jac.then(|| CsrMatrix::from_triplets(layout.len(), layout.len(), trip));
        (res, jac)
    }

    /// Residual of the four weak equations at `guess`, ordered like the unknowns.
    pub fn assemble_residual(&self, old: &StepState, guess: &[f64]) -> Vec<f64> {
        self.assemble(old, guess, false).0
    }

    /// Exact Jacobian of [`Scheme::assemble_residual`] with respect to `guess`.
    pub fn assemble_jacobian(&self, old: &StepState, guess: &[f64]) -> CsrMatrix {
        self.assemble(old, guess, true).1.expect("jacobian requested")
    }

    /// Residual and Jacobian from one assembly pass.
    pub fn assemble_system(&self, old: &StepState, guess: &[f64]) -> (Vec<f64>, CsrMatrix) {
        let (r, j) = self.assemble(old, guess, true);
        (r, j.expect("jacobian requested"))
    }

    /// Splits a converged unknown vector into the new state and the half-level `tau`.
    pub fn split(&self, x: &[f64]) -> (StepState, FieldCoeffs) {
        let [rho, v, tau, q] = self.layout.unpack(x);
        (StepState { rho, v, q }, tau)
    }

    /// Discrete gradient `q` of `rho` from the last weak equation: `∫ q Z = ∫ rho' Z - Σ_E [rho]{Z}`
    /// for every `Z` vanishing on the boundary.
    pub fn lift_gradient(&self, rho: &FieldCoeffs) -> Result<FieldCoeffs> {
        lift_gradient(&self.space, rho)
    }

    /// `mu k B_h(v_h, v_h)` for the step `v_old -> v_new`.
    pub fn viscous_dissipation(&self, v_old: &FieldCoeffs, v_new: &FieldCoeffs) -> f64 {
        let vh = v_old.midpoint(v_new);
        self.cfg.phys.mu * self.cfg.dt * self.sip.form(&vh, &vh)
    }
}

/// See [`Scheme::lift_gradient`].
pub fn lift_gradient(space: &DgSpace, rho: &FieldCoeffs) -> Result<FieldCoeffs> {
    let nl = space.n_local();
    let n_elems = space.n_elems();
    let quad = space.quadrature();
    let table = space.quad_table();
    let mass = space.reference_mass();
    let mut out = FieldCoeffs::zeros(space);
    for k in 0..n_elems {
        let h = space.mesh().width(k);
        let (jac, sc) = (0.5 * h, 2.0 / h);
        let c = rho.elem(k);
        let mut rhs = vec![0.0; nl];
        for (qp, &w) in quad.weights.iter().enumerate() {
            let grad: f64 = table.drow(qp).iter().zip(c).map(|(d, c)| sc * d * c).sum();
            for (i, r) in rhs.iter_mut().enumerate() {
                *r += w * jac * grad * table.row(qp)[i];
            }
        }
        if k > 0 {
            let jump = rho.elem(k - 1)[nl - 1] - c[0];
            rhs[0] -= 0.5 * jump;
        }
        if k + 1 < n_elems {
            let jump = c[nl - 1] - rho.elem(k + 1)[0];
            rhs[nl - 1] -= 0.5 * jump;
        }
        let free: Vec<usize> = (0..nl).filter(|&j| !space.is_pinned(k, j)).collect();
        let solved = space.solve_local(&mass, jac, &free, &rhs)?;
        let block = &mut out.values_mut()[k * nl..(k + 1) * nl];
        for (&j, s) in free.iter().zip(solved) {
            block[j] = s;
        }
    }
    Ok(out)
}
