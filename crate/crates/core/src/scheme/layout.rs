//! Layout of the per-step unknown vector.
//!
//! The vector holds the free nodal coefficients of `(rho^{n+1}, v^{n+1},
//! tau^{n+1/2}, q^{n+1})` in four consecutive blocks. The velocity and the
//! lifted gradient vanish at both domain endpoints, so their first and last
//! global nodes are dropped: the total length is `4 * n_dofs - 4`.

use std::ops::{Deref, DerefMut};

use crate::space::{DgSpace, FieldCoeffs};

#[derive(Debug, Clone, PartialEq)]
pub struct UnknownVector(pub Vec<f64>);

impl Deref for UnknownVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for UnknownVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Rho,
    V,
    Tau,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownLayout {
    n_dofs: usize,
    n_local: usize,
}

impl UnknownLayout {
    pub fn new(space: &DgSpace) -> Self {
        Self { n_dofs: space.n_dofs(), n_local: space.n_local() }
    }

    pub fn len(&self) -> usize {
        4 * self.n_dofs - 4
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    fn is_pinned(&self, dof: usize) -> bool {
        dof == 0 || dof + 1 == self.n_dofs
    }

    /// Position of global nodal dof `dof` of `block`, or `None` for a pinned node.
    pub fn index(&self, block: Block, dof: usize) -> Option<usize> {
        let nd = self.n_dofs;
        match block {
            Block::Rho => Some(dof),
            Block::Tau => Some(2 * nd - 2 + dof),
            Block::V if !self.is_pinned(dof) => Some(nd + dof - 1),
            Block::Q if !self.is_pinned(dof) => Some(3 * nd - 2 + dof - 1),
            _ => None,
        }
    }

    /// Expands an unknown vector into `(rho, v, tau, q)` with zeros at pinned nodes.
    pub fn unpack(&self, x: &[f64]) -> [FieldCoeffs; 4] {
        assert_eq!(x.len(), self.len(), "unknown vector has wrong length");
        let nd = self.n_dofs;
        let mut v = vec![0.0; nd];
        let mut q = vec![0.0; nd];
        v[1..nd - 1].copy_from_slice(&x[nd..2 * nd - 2]);
        q[1..nd - 1].copy_from_slice(&x[3 * nd - 2..]);
        [
            FieldCoeffs::new(x[..nd].to_vec(), self.n_local),
            FieldCoeffs::new(v, self.n_local),
            FieldCoeffs::new(x[2 * nd - 2..3 * nd - 2].to_vec(), self.n_local),
            FieldCoeffs::new(q, self.n_local),
        ]
    }

    /// Collects the free coefficients; values at pinned nodes are discarded.
    pub fn pack(&self, rho: &FieldCoeffs, v: &FieldCoeffs, tau: &FieldCoeffs, q: &FieldCoeffs) -> UnknownVector {
        let nd = self.n_dofs;
        let mut x = Vec::with_capacity(self.len());
        x.extend_from_slice(rho.values());
        x.extend_from_slice(&v.values()[1..nd - 1]);
        x.extend_from_slice(tau.values());
        x.extend_from_slice(&q.values()[1..nd - 1]);
        UnknownVector(x)
    }

    /// `perm[new] = old`: unknowns ordered element by element (rho, v, tau, q
    /// inside each element), which makes the Jacobian banded.
    pub fn element_major_permutation(&self) -> Vec<usize> {
        let n_elems = self.n_dofs / self.n_local;
        let mut perm = Vec::with_capacity(self.len());
        for k in 0..n_elems {
            for block in [Block::Rho, Block::V, Block::Tau, Block::Q] {
                for j in 0..self.n_local {
                    if let Some(i) = self.index(block, k * self.n_local + j) {
                        perm.push(i);
                    }
                }
            }
        }
        perm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh1D;

    #[test]
    fn length_and_roundtrip() {
        let space = DgSpace::new(Mesh1D::uniform(0.0, 1.0, 3).unwrap(), 2).unwrap();
        let layout = UnknownLayout::new(&space);
        assert_eq!(layout.len(), 4 * 9 - 4);
        let x: Vec<f64> = (0..layout.len()).map(|i| i as f64 + 1.0).collect();
        let [r, v, t, q] = layout.unpack(&x);
        assert_eq!(v.values()[0], 0.0);
        assert_eq!(q.values()[8], 0.0);
        assert_eq!(layout.pack(&r, &v, &t, &q).0, x);
    }

    #[test]
    fn permutation_is_bijective() {
        let space = DgSpace::new(Mesh1D::uniform(0.0, 1.0, 4).unwrap(), 1).unwrap();
        let layout = UnknownLayout::new(&space);
        let mut perm = layout.element_major_permutation();
        perm.sort_unstable();
        assert_eq!(perm, (0..layout.len()).collect::<Vec<_>>());
    }
}
