use nalgebra::SymmetricEigen;

use crate::{Matrix, Vector};

/// Above this size `lambda_max` switches from a full eigensolve to power
/// iteration.
pub(crate) const EXACT_EIGEN_LIMIT: usize = 2000;
const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 100_000;

/// Eigenvalues in ascending order with matching eigenvector columns.
pub(crate) fn sorted_symmetric_eigen(m: &Matrix) -> (Vector, Matrix) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Largest eigenvalue of a symmetric positive-semidefinite matrix.
pub(crate) fn lambda_max_psd(m: &Matrix) -> f64 {
    let n = m.nrows();
    if n <= EXACT_EIGEN_LIMIT {
        SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        power_iteration(|v| m * v, n)
    }
}

/// `lambda_max(A^T A)`, computed on whichever Gram matrix is smaller.
pub(crate) fn lambda_max_gram(a: &Matrix) -> f64 {
    let (m, d) = a.shape();
    if m.min(d) <= EXACT_EIGEN_LIMIT {
        let gram = if m < d { a * a.transpose() } else { a.transpose() * a };
        lambda_max_psd(&gram)
    } else {
        power_iteration(|v| a.transpose() * (a * v), d)
    }
}

fn power_iteration(apply: impl Fn(&Vector) -> Vector, n: usize) -> f64 {
    let mut v = Vector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut estimate = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let w = apply(&v);
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / norm;
        if (next - estimate).abs() <= POWER_TOL * next.abs().max(1.0) {
            return next;
        }
        estimate = next;
    }
    estimate
}
