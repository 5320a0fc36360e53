//! Uniform partitions of an interval.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// Shared node between `left_elem` and `right_elem = left_elem + 1`.
    Interior { left_elem: usize, right_elem: usize },
    /// Domain endpoint touched by a single element.
    Boundary { elem: usize, side: Side },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    pub kind: FaceKind,
    pub coord: f64,
    /// Outward normal of the left (or only) element: `+1` on interior faces,
    /// the outward domain normal on boundary faces.
    pub normal_left: f64,
}

impl Face {
    pub fn is_interior(&self) -> bool {
        matches!(self.kind, FaceKind::Interior { .. })
    }
}

/// Partition of `[a, b]` into `n_elems` segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    a: f64,
    b: f64,
    node_coords: Vec<f64>,
}

impl Mesh1D {
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMesh("need at least one element".into()));
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidMesh(format!("need a < b, got a = {a}, b = {b}")));
        }
        let len = b - a;
        let mut node_coords: Vec<f64> = (0..=n).map(|i| a + len * (i as f64) / (n as f64)).collect();
        node_coords[0] = a;
        node_coords[n] = b;
        Ok(Self { a, b, node_coords })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn n_elems(&self) -> usize {
        self.node_coords.len() - 1
    }

    pub fn node_coords(&self) -> &[f64] {
        &self.node_coords
    }

    /// Endpoints of element `k`.
    pub fn element(&self, k: usize) -> (f64, f64) {
        (self.node_coords[k], self.node_coords[k + 1])
    }

    pub fn width(&self, k: usize) -> f64 {
        self.node_coords[k + 1] - self.node_coords[k]
    }

    /// Largest element width.
    pub fn h(&self) -> f64 {
        (0..self.n_elems()).map(|k| self.width(k)).fold(0.0, f64::max)
    }

    /// Maps a reference coordinate in `[-1, 1]` onto element `k`.
    pub fn to_physical(&self, k: usize, xi: f64) -> f64 {
        let (xl, xr) = self.element(k);
        0.5 * (xl + xr) + 0.5 * (xr - xl) * xi
    }

    /// Element containing `x`; points on an interior node belong to the left element.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if x < self.a || x > self.b {
            return None;
        }
        let idx = self.node_coords.partition_point(|&n| n < x);
        Some(idx.saturating_sub(1).min(self.n_elems() - 1))
    }

    /// All faces ordered by coordinate: left boundary, interior nodes, right boundary.
    pub fn faces(&self) -> Vec<Face> {
        let n = self.n_elems();
        let mut faces = Vec::with_capacity(n + 1);
        faces.push(Face {
            kind: FaceKind::Boundary { elem: 0, side: Side::Left },
            coord: self.a,
            normal_left: -1.0,
        });
        for i in 1..n {
            faces.push(Face {
                kind: FaceKind::Interior { left_elem: i - 1, right_elem: i },
                coord: self.node_coords[i],
                normal_left: 1.0,
            });
        }
        faces.push(Face {
            kind: FaceKind::Boundary { elem: n - 1, side: Side::Right },
            coord: self.b,
            normal_left: 1.0,
        });
        faces
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.faces().into_iter().filter(Face::is_interior)
    }
}
