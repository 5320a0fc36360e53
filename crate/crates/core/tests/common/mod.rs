//! Shared helpers for the integration tests: random states and a
//! brute-force residual built only from the public evaluation API.

#![allow(dead_code)]

use std::sync::Arc;

use nsk_dg::mesh::{FaceKind, Mesh1D};
use nsk_dg::physics::{DoubleWell, PhysParams};
use nsk_dg::quadrature::gauss_legendre;
use nsk_dg::scheme::{Block, FluxFamily, Scheme, SchemeConfig, StepState};
use nsk_dg::space::{DgSpace, FieldCoeffs};
use rand::Rng;

pub fn space(a: f64, b: f64, n: usize, p: usize) -> Arc<DgSpace> {
    Arc::new(DgSpace::new(Mesh1D::uniform(a, b, n).unwrap(), p).unwrap())
}

pub fn scheme(space: &Arc<DgSpace>, gamma: f64, mu: f64, dt: f64, flux: FluxFamily) -> Scheme {
    let mut cfg = SchemeConfig::new(PhysParams::new(gamma, mu).unwrap(), space.degree(), dt);
    cfg.flux = flux;
    Scheme::new(space.clone(), cfg).unwrap()
}

pub fn random_field(space: &DgSpace, rng: &mut impl Rng, lo: f64, hi: f64, pinned: bool) -> FieldCoeffs {
    let mut vals: Vec<f64> = (0..space.n_dofs()).map(|_| rng.gen_range(lo..hi)).collect();
    if pinned {
        vals[0] = 0.0;
        let last = vals.len() - 1;
        vals[last] = 0.0;
    }
    FieldCoeffs::new(vals, space.n_local())
}

pub fn random_state(space: &DgSpace, rng: &mut impl Rng) -> StepState {
    StepState {
        rho: random_field(space, rng, 0.8, 2.2, false),
        v: random_field(space, rng, -1.0, 1.0, true),
        q: random_field(space, rng, -1.0, 1.0, true),
    }
}

/// Random unknown vector `(rho, v, tau, q)` near `old`.
pub fn random_guess(scheme: &Scheme, old: &StepState, rng: &mut impl Rng) -> Vec<f64> {
    let s = scheme.space();
    let mut perturb = |f: &FieldCoeffs, amp: f64| {
        FieldCoeffs::new(f.values().iter().map(|v| v + rng.gen_range(-amp..amp)).collect(), s.n_local())
    };
    let rho = perturb(&old.rho, 0.3);
    let v = perturb(&old.v, 0.3);
    let q = perturb(&old.q, 0.3);
    let tau = random_field(s, rng, -0.5, 0.5, false);
    scheme.layout().pack(&rho, &v, &tau, &q).0
}

fn unit(space: &DgSpace, i: usize) -> FieldCoeffs {
    let mut e = FieldCoeffs::zeros(space);
    e.values_mut()[i] = 1.0;
    e
}

fn lin(a: &FieldCoeffs, b: &FieldCoeffs, wa: f64, wb: f64) -> FieldCoeffs {
    FieldCoeffs::new(a.values().iter().zip(b.values()).map(|(x, y)| wa * x + wb * y).collect(), a.n_local())
}

fn w_quotient_direct(well: &DoubleWell, a: f64, b: f64) -> f64 {
    if (b - a).abs() > 1e-4 {
        (well.w(b) - well.w(a)) / (b - a)
    } else {
        let m = 0.5 * (a + b);
        well.wp(m) + well.wppp(m) * (b - a) * (b - a) / 24.0
    }
}

/// Values and physical derivatives of a field at both sides of every face,
/// obtained by evaluating the element polynomials at the reference endpoints.
fn side_values(space: &DgSpace, f: &FieldCoeffs, elem: usize, xi: f64) -> (f64, f64) {
    (space.eval(f, elem, &[xi]).unwrap()[0], space.eval_grad(f, elem, &[xi]).unwrap()[0])
}

/// SIP form written out term by term over elements, interior and boundary faces.
pub fn sip_oracle(space: &DgSpace, sigma: f64, u: &FieldCoeffs, w: &FieldCoeffs) -> f64 {
    let mesh = space.mesh();
    let rule = gauss_legendre(space.degree() + 3);
    let mut total = 0.0;
    for k in 0..space.n_elems() {
        let du = space.eval_grad(u, k, &rule.points).unwrap();
        let dw = space.eval_grad(w, k, &rule.points).unwrap();
        let jac = 0.5 * mesh.width(k);
        total += rule.weights.iter().zip(du.iter().zip(&dw)).map(|(wt, (a, b))| wt * jac * a * b).sum::<f64>();
    }
    let h = mesh.h();
    for face in mesh.faces() {
        let (ju, jw, au, aw) = match face.kind {
            FaceKind::Interior { left_elem, right_elem } => {
                let (ul, dul) = side_values(space, u, left_elem, 1.0);
                let (ur, dur) = side_values(space, u, right_elem, -1.0);
                let (wl, dwl) = side_values(space, w, left_elem, 1.0);
                let (wr, dwr) = side_values(space, w, right_elem, -1.0);
                (ul - ur, wl - wr, 0.5 * (dul + dur), 0.5 * (dwl + dwr))
            }
            FaceKind::Boundary { elem, .. } => {
                let xi = face.normal_left;
                let (uv, du) = side_values(space, u, elem, xi);
                let (wv, dw) = side_values(space, w, elem, xi);
                (uv * face.normal_left, wv * face.normal_left, du, dw)
            }
        };
        total -= aw * ju + au * jw - sigma / h * ju * jw;
    }
    total
}

/// Residual of one time step computed test function by test function.
pub fn residual_oracle(scheme: &Scheme, old: &StepState, guess: &[f64]) -> Vec<f64> {
    let space = scheme.space();
    let cfg = scheme.config();
    let (dt, gamma, mu, well) = (cfg.dt, cfg.phys.gamma, cfg.phys.mu, cfg.phys.well);
    let (alpha, beta) = match cfg.flux {
        FluxFamily::Conservative => (0.0, 0.0),
        FluxFamily::Dissipative { alpha, beta } => (alpha, beta),
    };
    let layout = scheme.layout();
    let [rho1, v1, tau, q1] = layout.unpack(guess);
    let rh = lin(&old.rho, &rho1, 0.5, 0.5);
    let vh = lin(&old.v, &v1, 0.5, 0.5);
    let qh = lin(&old.q, &q1, 0.5, 0.5);
    let rule = gauss_legendre(2 * space.degree() + 4);
    let mesh = space.mesh();
    let mut out = vec![0.0; layout.len()];

    let ev = |f: &FieldCoeffs, k: usize| space.eval(f, k, &rule.points).unwrap();
    let eg = |f: &FieldCoeffs, k: usize| space.eval_grad(f, k, &rule.points).unwrap();

    for i in 0..space.n_dofs() {
        let test = unit(space, i);
        let mut r = [0.0; 4];
        for k in 0..space.n_elems() {
            let phi = ev(&test, k);
            if phi.iter().all(|&p| p == 0.0) {
                continue;
            }
            let jac = 0.5 * mesh.width(k);
            let (r0, r1, rr, rrx) = (ev(&old.rho, k), ev(&rho1, k), ev(&rh, k), eg(&rh, k));
            let (v0, v1v, vv, vvx) = (ev(&old.v, k), ev(&v1, k), ev(&vh, k), eg(&vh, k));
            let (tt, ttx) = (ev(&tau, k), eg(&tau, k));
            let (qq1, qqx) = (ev(&q1, k), eg(&qh, k));
            let r1x = eg(&rho1, k);
            for m in 0..rule.len() {
                let w = rule.weights[m] * jac * phi[m];
                let div_rv = rrx[m] * vv[m] + rr[m] * vvx[m];
                r[0] += w * ((r1[m] - r0[m]) / dt + div_rv);
                let div_rvv = rrx[m] * vv[m] * vv[m] + 2.0 * rr[m] * vv[m] * vvx[m];
                r[1] += w
                    * (rr[m] * (v1v[m] - v0[m]) / dt + div_rvv - div_rv * vv[m] + rr[m] * ttx[m]
                        - 0.5 * rr[m] * 2.0 * vv[m] * vvx[m]);
                r[2] += w
                    * (tt[m] - w_quotient_direct(&well, r0[m], r1[m]) + gamma * qqx[m]
                        - 0.25 * (v1v[m] * v1v[m] + v0[m] * v0[m]));
                r[3] += w * (qq1[m] - r1x[m]);
            }
        }
        for face in mesh.faces() {
            let FaceKind::Interior { left_elem: l, right_elem: rgt } = face.kind else { continue };
            let tr = |f: &FieldCoeffs| (side_values(space, f, l, 1.0).0, side_values(space, f, rgt, -1.0).0);
            let (pl, pr) = tr(&test);
            if pl == 0.0 && pr == 0.0 {
                continue;
            }
            let jump = |(a, b): (f64, f64)| a - b;
            let avg = |(a, b): (f64, f64)| 0.5 * (a + b);
            let (rhl, rhr) = tr(&rh);
            let (vhl, vhr) = tr(&vh);
            let tt = tr(&tau);
            r[0] += -jump((rhl * vhl, rhr * vhr)) * avg((pl, pr)) + alpha * jump(tt) * jump((pl, pr));
            r[1] += -jump(tt) * avg((rhl * pl, rhr * pr)) + beta * jump((vhl, vhr)) * jump((pl, pr));
            r[2] += -gamma * jump(tr(&qh)) * avg((pl, pr));
            r[3] += jump(tr(&rho1)) * avg((pl, pr));
        }
        r[1] += mu * sip_oracle(space, cfg.sigma, &vh, &test);
        for (eq, block) in [Block::Rho, Block::V, Block::Tau, Block::Q].into_iter().enumerate() {
            if let Some(row) = layout.index(block, i) {
                out[row] = r[eq];
            }
        }
    }
    out
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
