//! Interior-face numerical fluxes `F1`–`F4`.
//!
//! All fluxes act on the two one-sided traces `[left, right]` of their
//! arguments at an interior face, where the left element's outward normal is
//! `+1`. Jumps are therefore `a[0] - a[1]` and averages `(a[0] + a[1]) / 2`.
//! Products such as `rho v` are formed side by side before jumping.

use crate::dual::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxFamily {
    /// Mass and energy conservative fluxes.
    Conservative,
    /// Conservative fluxes plus `alpha [tau][Psi]` in `F1` and `beta [v][X]` in `F2`.
    Dissipative { alpha: f64, beta: f64 },
}

impl FluxFamily {
    /// `(alpha, beta)`; zero for the conservative family.
    pub fn coefficients(&self) -> (f64, f64) {
        match *self {
            FluxFamily::Conservative => (0.0, 0.0),
            FluxFamily::Dissipative { alpha, beta } => (alpha, beta),
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let (alpha, beta) = self.coefficients();
        if !(alpha >= 0.0 && beta >= 0.0) {
            return Err(crate::Error::InvalidConfig(format!(
                "dissipative flux needs alpha, beta >= 0, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(())
    }
}

/// Left/right traces of the flux arguments on one interior face.
#[derive(Debug, Clone, Copy)]
pub struct FaceTraces<S> {
    pub rho: [S; 2],
    pub v: [S; 2],
    pub tau: [S; 2],
    pub q: [S; 2],
}

#[inline]
pub fn jump<S: Scalar>(a: [S; 2]) -> S {
    a[0] - a[1]
}

#[inline]
pub fn avg<S: Scalar>(a: [S; 2]) -> S {
    (a[0] + a[1]) * 0.5
}

#[inline]
fn jump_f(a: [f64; 2]) -> f64 {
    a[0] - a[1]
}

#[inline]
fn avg_f(a: [f64; 2]) -> f64 {
    0.5 * (a[0] + a[1])
}

/// `F1 = -[rho v] {Psi} + alpha [tau][Psi]`
pub fn flux_f1<S: Scalar>(family: FluxFamily, t: &FaceTraces<S>, psi: [f64; 2]) -> S {
    let (alpha, _) = family.coefficients();
    let rv = [t.rho[0] * t.v[0], t.rho[1] * t.v[1]];
    let mut f = -(jump(rv) * avg_f(psi));
    if alpha != 0.0 {
        f = f + jump(t.tau) * (alpha * jump_f(psi));
    }
    f
}

/// `F2 = -[tau] {rho X} + beta [v][X]`
pub fn flux_f2<S: Scalar>(family: FluxFamily, t: &FaceTraces<S>, chi: [f64; 2]) -> S {
    let (_, beta) = family.coefficients();
    let rho_chi = avg([t.rho[0] * chi[0], t.rho[1] * chi[1]]);
    let mut f = -(jump(t.tau) * rho_chi);
    if beta != 0.0 {
        f = f + jump(t.v) * (beta * jump_f(chi));
    }
    f
}

/// `F3 = -gamma [q] {Xi}`
pub fn flux_f3<S: Scalar>(gamma: f64, t: &FaceTraces<S>, xi: [f64; 2]) -> S {
    -(jump(t.q) * (gamma * avg_f(xi)))
}

/// `F4 = [rho] {Z}`; depends on the density traces only.
pub fn flux_f4<S: Scalar>(t: &FaceTraces<S>, zeta: [f64; 2]) -> S {
    jump(t.rho) * avg_f(zeta)
}
