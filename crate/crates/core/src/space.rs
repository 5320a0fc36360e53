//! Broken polynomial spaces on a [`Mesh1D`] with a nodal Gauss–Lobatto basis.
//!
//! Each element carries `p + 1` Lagrange nodes at the Gauss–Lobatto points
//! of the reference element, so the two element traces are degrees of
//! freedom. Fields are stored element by element in a [`FieldCoeffs`].

use crate::mesh::{Face, FaceKind, Mesh1D, Side};
use crate::quadrature::{gauss_legendre, gauss_lobatto, QuadratureRule};
use crate::solver::dense::solve_dense;
use crate::{Error, Result};

/// Nodal values of a scalar field, one block of `p + 1` values per element.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldCoeffs {
    values: Vec<f64>,
    n_local: usize,
}

impl FieldCoeffs {
    pub fn new(values: Vec<f64>, n_local: usize) -> Self {
        assert!(n_local > 0 && values.len().is_multiple_of(n_local), "values must fill whole elements");
        Self { values, n_local }
    }

    pub fn zeros(space: &DgSpace) -> Self {
        Self::new(vec![0.0; space.n_dofs()], space.n_local())
    }

    pub fn constant(space: &DgSpace, c: f64) -> Self {
        Self::new(vec![c; space.n_dofs()], space.n_local())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_local(&self) -> usize {
        self.n_local
    }

    pub fn n_elems(&self) -> usize {
        self.values.len() / self.n_local
    }

    pub fn elem(&self, k: usize) -> &[f64] {
        &self.values[k * self.n_local..(k + 1) * self.n_local]
    }

    /// `(self + other) / 2`, nodewise.
    pub fn midpoint(&self, other: &FieldCoeffs) -> FieldCoeffs {
        assert_eq!(self.values.len(), other.values.len());
        let values = self.values.iter().zip(&other.values).map(|(a, b)| 0.5 * (a + b)).collect();
        FieldCoeffs::new(values, self.n_local)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// The two one-sided traces of a broken field at a face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePair {
    /// Trace from the element whose outward normal at the face is `normal`
    /// (the left element at interior faces, the only element at boundary faces).
    pub inner: f64,
    /// Trace from the neighbouring element; `None` on the domain boundary.
    pub outer: Option<f64>,
    pub normal: f64,
}

impl TracePair {
    pub fn interior(inner: f64, outer: f64) -> Self {
        Self { inner, outer: Some(outer), normal: 1.0 }
    }

    pub fn boundary(value: f64, normal: f64) -> Self {
        Self { inner: value, outer: None, normal }
    }

    /// `v1 n1 + v2 n2`; on the boundary `v n`. In 1D the scalar and vector
    /// jumps coincide.
    pub fn jump(&self) -> f64 {
        match self.outer {
            Some(outer) => self.inner * self.normal - outer * self.normal,
            None => self.inner * self.normal,
        }
    }

    pub fn avg(&self) -> f64 {
        match self.outer {
            Some(outer) => 0.5 * (self.inner + outer),
            None => self.inner,
        }
    }

    /// Side-wise product of two trace pairs on the same face.
    pub fn times(&self, other: &TracePair) -> TracePair {
        TracePair {
            inner: self.inner * other.inner,
            outer: self.outer.zip(other.outer).map(|(a, b)| a * b),
            normal: self.normal,
        }
    }
}

/// `(jump, average)` of a trace pair.
pub fn jump_avg(tp: &TracePair) -> (f64, f64) {
    (tp.jump(), tp.avg())
}

/// Basis values and reference derivatives tabulated at a set of reference points.
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub points: Vec<f64>,
    /// `values[i * n_local + j] = l_j(points[i])`
    pub values: Vec<f64>,
    /// Reference-coordinate derivatives, same layout as `values`.
    pub derivs: Vec<f64>,
    n_local: usize,
}

impl BasisTable {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_local..(i + 1) * self.n_local]
    }

    pub fn drow(&self, i: usize) -> &[f64] {
        &self.derivs[i * self.n_local..(i + 1) * self.n_local]
    }
}

/// Degree-`p` discontinuous piecewise polynomials on a uniform 1D mesh.
#[derive(Debug, Clone)]
pub struct DgSpace {
    mesh: Mesh1D,
    degree: usize,
    nodes_ref: Vec<f64>,
    quad: QuadratureRule,
    table: BasisTable,
    /// Reference derivatives of the basis at `xi = -1` and `xi = +1`.
    dphi_left: Vec<f64>,
    dphi_right: Vec<f64>,
}

impl DgSpace {
    pub fn new(mesh: Mesh1D, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidConfig("polynomial degree must be at least 1".into()));
        }
        let nodes_ref = gauss_lobatto(degree + 1).points;
        // 2p + 2 Gauss points integrate degree 4p + 3 exactly, which covers W(rho_h).
        let quad = gauss_legendre(2 * degree + 2);
        let mut space = Self {
            mesh,
            degree,
            nodes_ref,
            quad: quad.clone(),
            table: BasisTable { points: vec![], values: vec![], derivs: vec![], n_local: degree + 1 },
            dphi_left: vec![],
            dphi_right: vec![],
        };
        space.table = space.tabulate(&quad.points);
        space.dphi_left = space.basis_derivs(-1.0);
        space.dphi_right = space.basis_derivs(1.0);
        Ok(space)
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_local(&self) -> usize {
        self.degree + 1
    }

    pub fn n_elems(&self) -> usize {
        self.mesh.n_elems()
    }

    pub fn n_dofs(&self) -> usize {
        self.n_elems() * self.n_local()
    }

    pub fn dof(&self, elem: usize, local: usize) -> usize {
        elem * self.n_local() + local
    }

    pub fn nodes_ref(&self) -> &[f64] {
        &self.nodes_ref
    }

    /// The assembly rule (`2p + 2` Gauss–Legendre points).
    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quad
    }

    /// Basis tabulated at the assembly quadrature points.
    pub fn quad_table(&self) -> &BasisTable {
        &self.table
    }

    pub fn dphi_left(&self) -> &[f64] {
        &self.dphi_left
    }

    pub fn dphi_right(&self) -> &[f64] {
        &self.dphi_right
    }

    /// Lagrange basis values at a reference point.
    pub fn basis_values(&self, xi: f64) -> Vec<f64> {
        let x = &self.nodes_ref;
        (0..x.len())
            .map(|j| {
                x.iter()
                    .enumerate()
                    .filter(|&(m, _)| m != j)
                    .map(|(_, &xm)| (xi - xm) / (x[j] - xm))
                    .product()
            })
            .collect()
    }

    /// Reference-coordinate derivatives of the Lagrange basis at a point.
    pub fn basis_derivs(&self, xi: f64) -> Vec<f64> {
        let x = &self.nodes_ref;
        let n = x.len();
        (0..n)
            .map(|j| {
                let mut total = 0.0;
                for m in (0..n).filter(|&m| m != j) {
                    let mut term = 1.0 / (x[j] - x[m]);
                    for l in (0..n).filter(|&l| l != j && l != m) {
                        term *= (xi - x[l]) / (x[j] - x[l]);
                    }
                    total += term;
                }
                total
            })
            .collect()
    }

    pub fn tabulate(&self, points: &[f64]) -> BasisTable {
        let mut values = Vec::with_capacity(points.len() * self.n_local());
        let mut derivs = Vec::with_capacity(points.len() * self.n_local());
        for &xi in points {
            values.extend(self.basis_values(xi));
            derivs.extend(self.basis_derivs(xi));
        }
        BasisTable { points: points.to_vec(), values, derivs, n_local: self.n_local() }
    }

    fn check(&self, field: &FieldCoeffs) -> Result<()> {
        if field.len() != self.n_dofs() || field.n_local() != self.n_local() {
            return Err(Error::LayoutMismatch { expected: self.n_dofs(), got: field.len() });
        }
        Ok(())
    }

    fn check_elem(&self, elem: usize) -> Result<()> {
        if elem >= self.n_elems() {
            return Err(Error::ElementOutOfRange { index: elem, n_elems: self.n_elems() });
        }
        Ok(())
    }

    /// Values of the local polynomial of `field` on `elem` at reference points.
    pub fn eval(&self, field: &FieldCoeffs, elem: usize, ref_pts: &[f64]) -> Result<Vec<f64>> {
        self.check(field)?;
        self.check_elem(elem)?;
        let c = field.elem(elem);
        Ok(ref_pts
            .iter()
            .map(|&xi| self.basis_values(xi).iter().zip(c).map(|(l, c)| l * c).sum())
            .collect())
    }

    /// Physical-coordinate derivative of the local polynomial at reference points.
    pub fn eval_grad(&self, field: &FieldCoeffs, elem: usize, ref_pts: &[f64]) -> Result<Vec<f64>> {
        self.check(field)?;
        self.check_elem(elem)?;
        let c = field.elem(elem);
        let scale = 2.0 / self.mesh.width(elem);
        Ok(ref_pts
            .iter()
            .map(|&xi| scale * self.basis_derivs(xi).iter().zip(c).map(|(d, c)| d * c).sum::<f64>())
            .collect())
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> FieldCoeffs {
        let mut values = Vec::with_capacity(self.n_dofs());
        for k in 0..self.n_elems() {
            values.extend(self.nodes_ref.iter().map(|&xi| f(self.mesh.to_physical(k, xi))));
        }
        FieldCoeffs::new(values, self.n_local())
    }

    /// Reference mass matrix `∫ l_i l_j dxi`, row-major.
    pub fn reference_mass(&self) -> Vec<f64> {
        let n = self.n_local();
        let mut m = vec![0.0; n * n];
        for (q, &w) in self.quad.weights.iter().enumerate() {
            let phi = self.table.row(q);
            for i in 0..n {
                for j in 0..n {
                    m[i * n + j] += w * phi[i] * phi[j];
                }
            }
        }
        m
    }

    /// Elementwise L2 projection of `f` onto the space.
    pub fn l2_project(&self, f: impl Fn(f64) -> f64) -> Result<FieldCoeffs> {
        self.project_impl(f, false)
    }

    /// L2 projection onto the subspace whose values at both domain endpoints vanish.
    pub fn l2_project_pinned(&self, f: impl Fn(f64) -> f64) -> Result<FieldCoeffs> {
        self.project_impl(f, true)
    }

    fn project_impl(&self, f: impl Fn(f64) -> f64, pinned: bool) -> Result<FieldCoeffs> {
        let n = self.n_local();
        let mass = self.reference_mass();
        let mut out = FieldCoeffs::zeros(self);
        for k in 0..self.n_elems() {
            let jac = 0.5 * self.mesh.width(k);
            let mut rhs = vec![0.0; n];
            for (q, (&xi, &w)) in self.quad.points.iter().zip(&self.quad.weights).enumerate() {
                let fx = f(self.mesh.to_physical(k, xi));
                for (r, phi) in rhs.iter_mut().zip(self.table.row(q)) {
                    *r += w * jac * fx * phi;
                }
            }
            let free: Vec<usize> = (0..n).filter(|&j| !(pinned && self.is_pinned(k, j))).collect();
            let solved = self.solve_local(&mass, jac, &free, &rhs)?;
            let block = &mut out.values_mut()[k * n..(k + 1) * n];
            for (&j, s) in free.iter().zip(solved) {
                block[j] = s;
            }
        }
        Ok(out)
    }

    /// Solves the local mass system restricted to `free` local nodes.
    pub(crate) fn solve_local(&self, mass: &[f64], jac: f64, free: &[usize], rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n_local();
        let m = free.len();
        let mut a = vec![0.0; m * m];
        let mut b = vec![0.0; m];
        for (r, &i) in free.iter().enumerate() {
            b[r] = rhs[i];
            for (c, &j) in free.iter().enumerate() {
                a[r * m + c] = jac * mass[i * n + j];
            }
        }
        solve_dense(&mut a, &mut b, m)?;
        Ok(b)
    }

    /// True for the two nodes sitting on the domain boundary.
    pub fn is_pinned(&self, elem: usize, local: usize) -> bool {
        (elem == 0 && local == 0) || (elem + 1 == self.n_elems() && local == self.degree)
    }

    /// One-sided traces of `field` at `face`.
    pub fn trace(&self, field: &FieldCoeffs, face: &Face) -> TracePair {
        let last = self.degree;
        match face.kind {
            FaceKind::Interior { left_elem, right_elem } => {
                TracePair::interior(field.elem(left_elem)[last], field.elem(right_elem)[0])
            }
            FaceKind::Boundary { elem, side } => {
                let v = match side {
                    Side::Left => field.elem(elem)[0],
                    Side::Right => field.elem(elem)[last],
                };
                TracePair::boundary(v, face.normal_left)
            }
        }
    }

    /// Integral of `g(x, u(x))` over the domain, using the assembly rule.
    pub fn integrate(&self, field: &FieldCoeffs, g: impl Fn(f64, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for k in 0..self.n_elems() {
            let jac = 0.5 * self.mesh.width(k);
            let c = field.elem(k);
            for (q, (&xi, &w)) in self.quad.points.iter().zip(&self.quad.weights).enumerate() {
                let u: f64 = self.table.row(q).iter().zip(c).map(|(l, c)| l * c).sum();
                total += w * jac * g(self.mesh.to_physical(k, xi), u);
            }
        }
        total
    }

    /// L2 distance between `field` and `exact`, using `extra` more Gauss points
    /// than the assembly rule.
    pub fn l2_error(&self, field: &FieldCoeffs, exact: impl Fn(f64) -> f64, extra: usize) -> f64 {
        let rule = gauss_legendre(self.quad.len() + extra);
        let table = self.tabulate(&rule.points);
        let mut total = 0.0;
        for k in 0..self.n_elems() {
            let jac = 0.5 * self.mesh.width(k);
            let c = field.elem(k);
            for (q, (&xi, &w)) in rule.points.iter().zip(&rule.weights).enumerate() {
                let u: f64 = table.row(q).iter().zip(c).map(|(l, c)| l * c).sum();
                let e = u - exact(self.mesh.to_physical(k, xi));
                total += w * jac * e * e;
            }
        }
        total.sqrt()
    }

    /// Minimum and maximum of `field` over the nodes and assembly quadrature points.
    pub fn range(&self, field: &FieldCoeffs) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..self.n_elems() {
            let c = field.elem(k);
            for &v in c {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            for q in 0..self.quad.len() {
                let u: f64 = self.table.row(q).iter().zip(c).map(|(l, c)| l * c).sum();
                lo = lo.min(u);
                hi = hi.max(u);
            }
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(a: f64, b: f64, n: usize, p: usize) -> DgSpace {
        DgSpace::new(Mesh1D::uniform(a, b, n).unwrap(), p).unwrap()
    }

    #[test]
    fn nodes_include_endpoints() {
        for p in 1..=5 {
            let s = space(0.0, 1.0, 2, p);
            assert_eq!(s.nodes_ref()[0], -1.0);
            assert_eq!(s.nodes_ref()[p], 1.0);
        }
    }

    #[test]
    fn quadrature_exact_to_degree_4p_plus_1() {
        for p in 1..=4 {
            let s = space(0.0, 1.0, 1, p);
            for m in 0..=(4 * p + 1) as i32 {
                let exact = if m % 2 == 1 { 0.0 } else { 2.0 / (m as f64 + 1.0) };
                let q = s.quadrature().integrate(|x| x.powi(m));
                assert!((q - exact).abs() < 1e-13, "p = {p}, m = {m}");
            }
        }
    }

    #[test]
    fn eval_examples() {
        let s = space(0.0, 1.0, 2, 1);
        let c = FieldCoeffs::constant(&s, 3.5);
        assert_eq!(s.eval(&c, 1, &[-0.3, 0.7]).unwrap(), vec![3.5, 3.5]);
        let x = s.interpolate(|x| x);
        assert!((s.eval(&x, 0, &[0.0]).unwrap()[0] - 0.25).abs() < 1e-15);

        let s2 = space(0.0, 1.0, 1, 2);
        let x2 = s2.interpolate(|x| x * x);
        assert!((s2.eval(&x2, 0, &[0.5]).unwrap()[0] - 0.5625).abs() < 1e-15);
        assert!(s.eval(&c, 2, &[0.0]).is_err());
    }

    #[test]
    fn eval_at_nodes_returns_coefficients() {
        let s = space(0.0, 2.0, 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = FieldCoeffs::new((0..s.n_dofs()).map(|_| rng.gen::<f64>()).collect(), s.n_local());
        for k in 0..3 {
            let vals = s.eval(&f, k, s.nodes_ref()).unwrap();
            assert_eq!(vals.as_slice(), f.elem(k));
        }
    }

    #[test]
    fn eval_grad_examples() {
        let s = space(0.0, 1.0, 4, 2);
        let c = FieldCoeffs::constant(&s, 2.0);
        assert!(s.eval_grad(&c, 1, &[0.3]).unwrap()[0].abs() < 1e-14);
        let x = s.interpolate(|x| x);
        for g in s.eval_grad(&x, 2, &[-1.0, 0.1, 1.0]).unwrap() {
            assert!((g - 1.0).abs() < 1e-13);
        }
        let x2 = s.interpolate(|x| x * x);
        // x = 0.3 lies in element 1 = [0.25, 0.5] at xi = -0.6
        let g = s.eval_grad(&x2, 1, &[-0.6]).unwrap()[0];
        assert!((g - 0.6).abs() < 1e-13);
    }

    #[test]
    fn projection_reproduces_polynomials() {
        let s = space(-1.0, 1.0, 5, 3);
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let proj = s.l2_project(f).unwrap();
        let interp = s.interpolate(f);
        for (a, b) in proj.values().iter().zip(interp.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn projection_of_aligned_step() {
        let s = space(0.0, 1.0, 4, 2);
        let proj = s.l2_project(|x| if x <= 0.5 { 1.1 } else { 1.9 }).unwrap();
        for k in 0..4 {
            let target = if k < 2 { 1.1 } else { 1.9 };
            assert!(proj.elem(k).iter().all(|v| (v - target).abs() < 1e-14));
        }
    }

    #[test]
    fn projection_order_two_for_linears() {
        let f = |x: f64| (std::f64::consts::PI * x).sin();
        let errs: Vec<f64> = [8, 16, 32, 64]
            .iter()
            .map(|&n| {
                let s = space(0.0, 1.0, n, 1);
                s.l2_error(&s.l2_project(f).unwrap(), f, 2)
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 2.0).abs() < 0.05, "order {order}");
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let s = space(0.0, 1.0, 6, 2);
        let f = s.l2_project(|x| (3.0 * x).exp()).unwrap();
        let again = s
            .l2_project(|x| {
                let k = s.mesh().locate(x).unwrap();
                let (xl, xr) = s.mesh().element(k);
                let xi = (2.0 * x - xl - xr) / (xr - xl);
                s.eval(&f, k, &[xi]).unwrap()[0]
            })
            .unwrap();
        for (a, b) in f.values().iter().zip(again.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pinned_projection_vanishes_at_boundary() {
        let s = space(0.0, 1.0, 3, 2);
        let f = s.l2_project_pinned(|x| 1.0 + x).unwrap();
        assert_eq!(f.values()[0], 0.0);
        assert_eq!(*f.values().last().unwrap(), 0.0);
    }

    #[test]
    fn traces_and_jumps() {
        let s = space(0.0, 1.0, 2, 1);
        let faces = s.mesh().faces();
        let cont = s.interpolate(|x| 1.0 + x);
        let tp = s.trace(&cont, &faces[1]);
        assert_eq!(tp.outer, Some(tp.inner));

        let step = FieldCoeffs::new(vec![2.0, 2.0, 4.0, 4.0], 2);
        let tp = s.trace(&step, &faces[1]);
        assert_eq!((tp.inner, tp.outer), (2.0, Some(4.0)));
        assert_eq!(jump_avg(&tp), (-2.0, 3.0));

        let b = s.trace(&step, &faces[2]);
        assert_eq!(b.outer, None);
        assert_eq!(b.inner, 4.0);
        assert_eq!(jump_avg(&TracePair::boundary(5.0, 1.0)), (5.0, 5.0));
        assert_eq!(jump_avg(&TracePair::interior(7.0, 7.0)), (0.0, 7.0));
    }

    #[test]
    fn product_rule_for_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..10_000 {
            let (p, phi) = if i % 10 == 0 {
                let n = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                (TracePair::boundary(rng.gen_range(-3.0..3.0), n), TracePair::boundary(rng.gen_range(-3.0..3.0), n))
            } else {
                (
                    TracePair::interior(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                    TracePair::interior(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                )
            };
            let lhs = p.times(&phi).jump();
            let rhs = if p.outer.is_some() {
                p.jump() * phi.avg() + phi.jump() * p.avg()
            } else {
                // on the boundary jump(p phi) = jump(p) avg(phi)
                p.jump() * phi.avg()
            };
            assert!((lhs - rhs).abs() < 1e-14, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn elementwise_integration_by_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in 1..=3 {
            let s = space(0.0, 1.3, 5, p);
            let u = FieldCoeffs::new((0..s.n_dofs()).map(|_| rng.gen_range(-1.0..1.0)).collect(), s.n_local());
            let w = FieldCoeffs::new((0..s.n_dofs()).map(|_| rng.gen_range(-1.0..1.0)).collect(), s.n_local());
            let pts = s.quadrature().points.clone();
            let mut volume = 0.0;
            for k in 0..s.n_elems() {
                let jac = 0.5 * s.mesh().width(k);
                let (uv, ug) = (s.eval(&u, k, &pts).unwrap(), s.eval_grad(&u, k, &pts).unwrap());
                let (wv, wg) = (s.eval(&w, k, &pts).unwrap(), s.eval_grad(&w, k, &pts).unwrap());
                for q in 0..pts.len() {
                    volume += s.quadrature().weights[q] * jac * (ug[q] * wv[q] + uv[q] * wg[q]);
                }
            }
            let faces: f64 = s
                .mesh()
                .faces()
                .iter()
                .map(|f| s.trace(&u, f).times(&s.trace(&w, f)).jump())
                .sum();
            assert!((volume - faces).abs() <= 1e-12 * (1.0 + volume.abs()), "p = {p}");
        }
    }
}
