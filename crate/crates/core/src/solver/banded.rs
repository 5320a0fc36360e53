//! Banded LU factorisation with partial pivoting.
//!
//! Storage follows the usual LAPACK `gbtrf` layout: with lower bandwidth `kl`
//! and upper bandwidth `ku`, row swaps can push the upper factor out to
//! `kl + ku`, so each row keeps a window of `2 kl + ku + 1` columns starting
//! at column `i - kl`.

use super::sparse::CsrMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    ab: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLu {
    #[inline]
    fn idx(&self, i: usize, c: usize) -> usize {
        debug_assert!(c + self.kl >= i && c <= i + self.kl + self.ku);
        i * self.width + (c + self.kl - i)
    }

    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        assert_eq!(a.n_rows(), a.n_cols(), "banded LU needs a square matrix");
        let n = a.n_rows();
        let (kl, ku) = a.bandwidths();
        let width = 2 * kl + ku + 1;
        let mut lu = Self { n, kl, ku, width, ab: vec![0.0; n * width], piv: vec![0; n] };
        for i in 0..n {
            for (j, v) in a.row(i) {
                let k = lu.idx(i, j);
                lu.ab[k] = v;
            }
        }
        let reach = kl + ku;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.ab[lu.idx(k, k)].abs();
            for r in k + 1..=last_row {
                let v = lu.ab[lu.idx(r, k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularLinearSystem { column: k });
            }
            lu.piv[k] = p;
            let last_col = (k + reach).min(n - 1);
            if p != k {
                for c in k..=last_col {
                    let (x, y) = (lu.idx(k, c), lu.idx(p, c));
                    lu.ab.swap(x, y);
                }
            }
            let d = lu.ab[lu.idx(k, k)];
            for i in k + 1..=last_row {
                let ik = lu.idx(i, k);
                let l = lu.ab[ik] / d;
                lu.ab[ik] = l;
                if l == 0.0 {
                    continue;
                }
                for c in k + 1..=last_col {
                    let (ic, kc) = (lu.idx(i, c), lu.idx(k, c));
                    lu.ab[ic] -= l * lu.ab[kc];
                }
            }
        }
        Ok(lu)
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n);
        let n = self.n;
        let mut x = rhs.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in k + 1..=(k + self.kl).min(n.saturating_sub(1)) {
                x[i] -= self.ab[self.idx(i, k)] * xk;
            }
        }
        let reach = self.kl + self.ku;
        for i in (0..n).rev() {
            let mut s = x[i];
            for c in i + 1..=(i + reach).min(n - 1) {
                s -= self.ab[self.idx(i, c)] * x[c];
            }
            x[i] = s / self.ab[self.idx(i, i)];
        }
        x
    }
}

/// Direct solve of `a x = rhs` through a banded LU factorisation.
pub fn linear_solve(a: &CsrMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if a.n_rows() == 0 {
        return Ok(vec![]);
    }
    Ok(BandedLu::factor(a)?.solve(rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let rhs = vec![1.0, -2.0, 3.5];
        assert_eq!(linear_solve(&CsrMatrix::identity(3), &rhs).unwrap(), rhs);
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 2.0), (1, 1, 4.0)]);
        assert_eq!(linear_solve(&a, &[2.0, 8.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn pivoting_required() {
        // zero on the diagonal forces a row swap
        let a = CsrMatrix::from_triplets(3, 3, vec![(0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0), (2, 1, 2.0), (2, 2, 3.0)]);
        let x = linear_solve(&a, &[1.0, 3.0, 8.0]).unwrap();
        let expect = [2.0, 1.0, 2.0];
        for (a, b) in x.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]);
        assert!(matches!(linear_solve(&a, &[1.0, 1.0]), Err(Error::SingularLinearSystem { .. })));
    }
}
