use nalgebra::{DMatrix, DVector};
use nsk_dg::solver::{linear_solve, BandedLu, CsrMatrix};
use nsk_dg::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_banded(n: usize, kl: usize, ku: usize, rng: &mut impl Rng) -> CsrMatrix {
    let mut trip = Vec::new();
    for i in 0..n {
        for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
            let v: f64 = rng.gen_range(-1.0..1.0);
            trip.push((i, j, if i == j { v + 0.5 } else { v }));
        }
    }
    CsrMatrix::from_triplets(n, n, trip)
}

fn dense(a: &CsrMatrix) -> DMatrix<f64> {
    let d = a.to_dense();
    DMatrix::from_fn(a.n_rows(), a.n_cols(), |i, j| d[i][j])
}

#[test]
fn trivial_examples() {
    let rhs = [3.0, -1.0, 0.25, 8.0];
    assert_eq!(linear_solve(&CsrMatrix::identity(4), &rhs).unwrap(), rhs.to_vec());
    let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 2.0), (1, 1, 4.0)]);
    assert_eq!(linear_solve(&a, &[2.0, 8.0]).unwrap(), vec![1.0, 2.0]);
}

#[test]
fn matches_dense_lu_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for (n, kl, ku) in [(10, 1, 1), (40, 3, 5), (64, 7, 2), (100, 11, 11)] {
        let a = random_banded(n, kl, ku, &mut rng);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = linear_solve(&a, &b).unwrap();
        let oracle = dense(&a).lu().solve(&DVector::from_vec(b.clone())).unwrap();
        let scale = oracle.amax().max(1.0);
        for i in 0..n {
            assert!((x[i] - oracle[i]).abs() <= 1e-10 * scale, "n={n}: {} vs {}", x[i], oracle[i]);
        }
    }
}

#[test]
fn small_backward_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let a = random_banded(200, 9, 9, &mut rng);
    let b: Vec<f64> = (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let lu = BandedLu::factor(&a).unwrap();
    let x = lu.solve(&b);
    let r: Vec<f64> = a.matvec(&x).iter().zip(&b).map(|(ax, b)| ax - b).collect();
    let rn = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bn = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let an = a.max_abs() * 19.0;
    assert!(rn / (an * xn + bn) <= 1e-12, "backward error {}", rn / (an * xn + bn));
}

#[test]
fn singular_matrix_is_reported() {
    let a = CsrMatrix::from_triplets(3, 3, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 4.0), (2, 2, 1.0)]);
    assert!(matches!(linear_solve(&a, &[1.0, 2.0, 3.0]), Err(Error::SingularLinearSystem { .. })));
}
