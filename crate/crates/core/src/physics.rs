//! Constitutive relations, discrete energy functionals and reference solutions.

use crate::dual::Scalar;
use crate::space::{DgSpace, FieldCoeffs};
use crate::{Error, Result};

/// Quartic double-well potential `W(rho) = scale (rho - r1)^2 (rho - r2)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWell {
    pub r1: f64,
    pub r2: f64,
    pub scale: f64,
}

impl Default for DoubleWell {
    fn default() -> Self {
        Self { r1: 1.0, r2: 2.0, scale: 0.25 }
    }
}

impl DoubleWell {
    pub fn w<S: Scalar>(&self, rho: S) -> S {
        let a = rho - self.r1;
        let b = rho - self.r2;
        a * a * b * b * self.scale
    }

    pub fn wp<S: Scalar>(&self, rho: S) -> S {
        let a = rho - self.r1;
        let b = rho - self.r2;
        a * b * (rho * 2.0 - (self.r1 + self.r2)) * (2.0 * self.scale)
    }

    pub fn wpp(&self, rho: f64) -> f64 {
        let a = rho - self.r1;
        let b = rho - self.r2;
        let c = 2.0 * rho - self.r1 - self.r2;
        2.0 * self.scale * (c * c + 2.0 * a * b)
    }

    pub fn wppp<S: Scalar>(&self, rho: S) -> S {
        (rho * 2.0 - (self.r1 + self.r2)) * (12.0 * self.scale)
    }

    /// `p(rho) = rho W'(rho) - W(rho)`.
    pub fn pressure(&self, rho: f64) -> f64 {
        rho * self.wp(rho) - self.w(rho)
    }

    /// Difference quotient `(W(b) - W(a)) / (b - a)` in the exact two-term
    /// Taylor form about the midpoint; well defined for `a == b`.
    pub fn w_quotient<S: Scalar>(&self, rho_a: S, rho_b: S) -> S {
        let m = (rho_a + rho_b) * 0.5;
        let d = rho_b - rho_a;
        self.wp(m) + self.wppp(m) * d * d / 24.0
    }
}

/// Capillarity `gamma > 0` and viscosity `mu >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub gamma: f64,
    pub mu: f64,
    pub well: DoubleWell,
}

impl PhysParams {
    pub fn new(gamma: f64, mu: f64) -> Result<Self> {
        let p = Self { gamma, mu, well: DoubleWell::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidConfig(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.mu >= 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidConfig(format!("mu must be non-negative, got {}", self.mu)));
        }
        Ok(())
    }
}

/// Sums `f(rho, v, q)` over all quadrature points of the assembly rule.
fn integrate3(space: &DgSpace, rho: &FieldCoeffs, v: &FieldCoeffs, q: &FieldCoeffs, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let quad = space.quadrature();
    let table = space.quad_table();
    let mut total = 0.0;
    for k in 0..space.n_elems() {
        let jac = 0.5 * space.mesh().width(k);
        let (rk, vk, qk) = (rho.elem(k), v.elem(k), q.elem(k));
        for (i, &w) in quad.weights.iter().enumerate() {
            let phi = table.row(i);
            let dot = |c: &[f64]| -> f64 { phi.iter().zip(c).map(|(a, b)| a * b).sum() };
            total += w * jac * f(dot(rk), dot(vk), dot(qk));
        }
    }
    total
}

/// `∫ W(rho) + 1/2 rho v^2 + gamma/2 q^2 dx`.
pub fn energy(space: &DgSpace, rho: &FieldCoeffs, v: &FieldCoeffs, q: &FieldCoeffs, params: &PhysParams) -> f64 {
    let well = params.well;
    let gamma = params.gamma;
    integrate3(space, rho, v, q, |r, v, q| well.w(r) + 0.5 * r * v * v + 0.5 * gamma * q * q)
}

pub fn mass(space: &DgSpace, rho: &FieldCoeffs) -> f64 {
    space.integrate(rho, |_, r| r)
}

pub fn momentum(space: &DgSpace, rho: &FieldCoeffs, v: &FieldCoeffs) -> f64 {
    integrate3(space, rho, v, v, |r, v, _| r * v)
}

/// Steady Euler–Korteweg interface `rho(x) = 3/2 - 1/2 tanh(x / (2 sqrt(2 gamma)))`
/// for the default double well.
pub fn steady_tanh(gamma: f64) -> impl Fn(f64) -> f64 + Clone + Send + Sync {
    let width = 2.0 * (2.0 * gamma).sqrt();
    move |x: f64| 1.5 - 0.5 * (x / width).tanh()
}

pub type Profile = fn(f64) -> f64;

/// Step initial density (1.1 left of 0.5, 1.9 right of it) and zero velocity.
pub fn step_ic() -> (Profile, Profile) {
    fn rho0(x: f64) -> f64 {
        if x <= 0.5 {
            1.1
        } else {
            1.9
        }
    }
    fn v0(_: f64) -> f64 {
        0.0
    }
    (rho0, v0)
}
