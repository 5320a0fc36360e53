//! Symmetric interior penalty discretisation of the 1D Laplacian.
//!
//! ```text
//! B_h(u, w) = Σ_K ∫_K u' w' dx
//!           - Σ_{faces incl. boundary} ( {w'}[u] + {u'}[w] - sigma/h [u][w] )
//! ```
//!
//! Boundary faces use the one-sided conventions `[u] = u n`, `{u'} = u'`.

use crate::mesh::FaceKind;
use crate::solver::CsrMatrix;
use crate::space::{DgSpace, FieldCoeffs};

#[derive(Debug, Clone)]
pub struct SipOperator {
    sigma: f64,
    matrix: CsrMatrix,
}

impl SipOperator {
    pub fn new(space: &DgSpace, sigma: f64) -> Self {
        let nl = space.n_local();
        let mesh = space.mesh();
        let quad = space.quadrature();
        let table = space.quad_table();
        let mut trip = Vec::new();

        for k in 0..space.n_elems() {
            let h = mesh.width(k);
            let (jac, sc) = (0.5 * h, 2.0 / h);
            for i in 0..nl {
                for j in 0..nl {
                    let mut s = 0.0;
                    for (q, &w) in quad.weights.iter().enumerate() {
                        s += w * jac * sc * table.drow(q)[i] * sc * table.drow(q)[j];
                    }
                    trip.push((space.dof(k, i), space.dof(k, j), s));
                }
            }
        }

        for face in mesh.faces() {
            // (element, trace node, outward normal, derivative trace row)
            let mut sides: Vec<(usize, usize, f64, Vec<f64>)> = Vec::with_capacity(2);
            let mut push_side = |elem: usize, right_end: bool, normal: f64| {
                let sc = 2.0 / mesh.width(elem);
                let d = if right_end { space.dphi_right() } else { space.dphi_left() };
                let node = if right_end { nl - 1 } else { 0 };
                sides.push((elem, node, normal, d.iter().map(|x| sc * x).collect()));
            };
            match face.kind {
                FaceKind::Interior { left_elem, right_elem } => {
                    push_side(left_elem, true, 1.0);
                    push_side(right_elem, false, -1.0);
                }
                FaceKind::Boundary { elem, side } => {
                    push_side(elem, side == crate::mesh::Side::Right, face.normal_left);
                }
            }
            let h = sides.iter().map(|s| mesh.width(s.0)).fold(f64::INFINITY, f64::min);
            let weight = 1.0 / sides.len() as f64;
            let m = sides.len() * nl;
            let mut jmp = vec![0.0; m];
            let mut avgd = vec![0.0; m];
            let mut dofs = vec![0usize; m];
            for (s, (elem, node, normal, d)) in sides.iter().enumerate() {
                for j in 0..nl {
                    dofs[s * nl + j] = space.dof(*elem, j);
                    avgd[s * nl + j] = weight * d[j];
                }
                jmp[s * nl + node] = *normal;
            }
            for a in 0..m {
                for b in 0..m {
                    let v = -avgd[a] * jmp[b] - avgd[b] * jmp[a] + sigma / h * jmp[a] * jmp[b];
                    if v != 0.0 {
                        // row = test w (index a), column = trial u (index b)
                        trip.push((dofs[a], dofs[b], v));
                    }
                }
            }
        }
        let n = space.n_dofs();
        Self { sigma, matrix: CsrMatrix::from_triplets(n, n, trip) }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Matrix with `B[i][j] = B_h(phi_j, phi_i)` on the full nodal space.
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    /// `B_h(u, w)`.
    pub fn form(&self, u: &FieldCoeffs, w: &FieldCoeffs) -> f64 {
        let bu = self.matrix.matvec(u.values());
        bu.iter().zip(w.values()).map(|(a, b)| a * b).sum()
    }
}
