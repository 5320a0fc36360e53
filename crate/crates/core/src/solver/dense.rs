//! Small dense Gaussian elimination used for element-local systems.

use crate::{Error, Result};

/// Solves `a x = b` in place (`a` row-major `n x n`, `b` overwritten by `x`)
/// with partial pivoting.
pub fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Result<()> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap_or(k);
        if a[piv * n + k] == 0.0 || !a[piv * n + k].is_finite() {
            return Err(Error::SingularLinearSystem { column: k });
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            b.swap(k, piv);
        }
        let d = a[k * n + k];
        for i in k + 1..n {
            let l = a[i * n + k] / d;
            if l == 0.0 {
                continue;
            }
            for c in k..n {
                a[i * n + c] -= l * a[k * n + c];
            }
            b[i] -= l * b[k];
        }
    }
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|c| a[i * n + c] * b[c]).sum();
        b[i] = (b[i] - s) / a[i * n + i];
    }
    Ok(())
}
