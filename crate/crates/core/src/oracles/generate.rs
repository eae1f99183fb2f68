//! Seeded problem generators. Every generator is a pure function of its
//! arguments: the same arguments give bit-identical problems.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::spectral::sorted_symmetric_eigen;
use super::{BoxIndicator, CompositeProblem, L1Norm, LeastSquares, QuadraticProblem};
use crate::{Error, Matrix, Result, Vector};

fn normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    // Filled row by row so the draw order does not depend on storage layout.
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = StandardNormal.sample(rng);
        }
    }
    m
}

fn normal_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| StandardNormal.sample(rng))
}

/// Random `Q = A^T A` whose spectrum is mapped affinely onto `[q, 1]`, so
/// `lambda_1 = q` and `lambda_d = 1` exactly.
fn rescaled_spectrum_quadratic(d: usize, q: f64, rng: &mut ChaCha8Rng) -> Result<QuadraticProblem> {
    let a = normal_matrix(rng, d, d);
    let p = normal_vector(rng, d);
    let (raw, vectors) = sorted_symmetric_eigen(&(a.transpose() * &a));
    let (lo, hi) = (raw[0], raw[d - 1]);
    let spread = hi - lo;
    let mut values = raw.map(|l| {
        if spread > 0.0 {
            q + (1.0 - q) * (l - lo) / spread
        } else {
            1.0
        }
    });
    values[0] = q;
    values[d - 1] = 1.0;
    QuadraticProblem::from_spectrum(vectors, values, p)
}

/// Strongly convex quadratic in `d` dimensions with `mu / L = q` and `L = 1`.
pub fn gen_quadratic(d: usize, q: f64, seed: u64) -> Result<QuadraticProblem> {
    if d < 2 {
        return Err(Error::param("d", format!("must be >= 2, got {d}")));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::param("q", format!("must lie in (0, 1], got {q}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rescaled_spectrum_quadratic(d, q, &mut rng)
}

/// `Q = diag(0.01, 1)`, `p = 0`: the instance where the largest-eigenvalue
/// mode dominates the secondary sequence.
pub fn fixed_quadratic_case2() -> QuadraticProblem {
    QuadraticProblem::from_spectrum(
        Matrix::identity(2, 2),
        Vector::from_vec(vec![0.01, 1.0]),
        Vector::zeros(2),
    )
    .expect("static problem is valid")
}

/// A sparse regression instance together with its ground truth.
#[derive(Debug, Clone)]
pub struct LassoInstance {
    pub problem: CompositeProblem,
    pub least_squares: Arc<LeastSquares>,
    pub x_true: Vector,
    pub tau: f64,
}

/// `f = 1/2 |A x - b|^2`, `phi = tau |x|_1` with an `s`-sparse ground truth.
///
/// `A` has standard normal entries, `x_true` keeps the `s` largest-magnitude
/// entries of a standard normal vector, and `b = A x_true + w` with
/// `w ~ N(0, noise_var)`.
pub fn gen_lasso(m: usize, d: usize, s: usize, tau: f64, noise_var: f64, seed: u64) -> Result<LassoInstance> {
    if m == 0 || d == 0 {
        return Err(Error::param("d", "dimensions must be positive"));
    }
    if s == 0 || s > d {
        return Err(Error::param("s", format!("must satisfy 0 < s <= d = {d}, got {s}")));
    }
    if !(noise_var >= 0.0) {
        return Err(Error::param("noise_var", "must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = normal_matrix(&mut rng, m, d);
    let raw = normal_vector(&mut rng, d);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| raw[j].abs().total_cmp(&raw[i].abs()).then(i.cmp(&j)));
    let mut x_true = Vector::zeros(d);
    for &i in &order[..s] {
        x_true[i] = raw[i];
    }
    let noise = Normal::new(0.0, noise_var.sqrt()).map_err(|e| Error::param("noise_var", e.to_string()))?;
    let w = Vector::from_fn(m, |_, _| noise.sample(&mut rng));
    let b = &a * &x_true + w;
    let least_squares = Arc::new(LeastSquares::new(a, b)?);
    let problem = CompositeProblem::new(least_squares.clone(), Arc::new(L1Norm::new(tau)?));
    Ok(LassoInstance {
        problem,
        least_squares,
        x_true,
        tau,
    })
}

/// Box-constrained quadratic program on `[-1, 1]^d` whose `Q` has condition
/// number `cond` and `lambda_max = 1`.
pub fn gen_boxqp(d: usize, cond: f64, seed: u64) -> Result<CompositeProblem> {
    gen_boxqp_scaled(d, cond, 1.0, seed)
}

/// [`gen_boxqp`] with the linear term multiplied by `p_scale`. Smaller scales
/// move the unconstrained minimizer toward the box and shrink the active set
/// at the solution.
pub fn gen_boxqp_scaled(d: usize, cond: f64, p_scale: f64, seed: u64) -> Result<CompositeProblem> {
    if !(cond >= 1.0) || !cond.is_finite() {
        return Err(Error::param("cond", format!("must be finite and >= 1, got {cond}")));
    }
    if d < 2 {
        return Err(Error::param("d", format!("must be >= 2, got {d}")));
    }
    if !p_scale.is_finite() {
        return Err(Error::param("p_scale", "must be finite"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut quad = rescaled_spectrum_quadratic(d, 1.0 / cond, &mut rng)?;
    if p_scale != 1.0 {
        let (v, l, p) = (
            quad.eigenvectors().clone(),
            quad.eigenvalues().clone(),
            quad.p() * p_scale,
        );
        quad = QuadraticProblem::from_spectrum(v, l, p)?;
    }
    let bounds = BoxIndicator::new(Vector::from_element(d, -1.0), Vector::from_element(d, 1.0))?;
    Ok(CompositeProblem::new(Arc::new(quad), Arc::new(bounds)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::spectral::sorted_symmetric_eigen;
    use crate::oracles::testing::max_fd_gradient_error;
    use crate::oracles::SmoothOracle;
    use rand::Rng;

    #[test]
    fn unit_q_gives_identity_spectrum() {
        let prob = gen_quadratic(2, 1.0, 3).unwrap();
        assert_eq!(prob.eigenvalues().as_slice(), &[1.0, 1.0]);
        assert!((prob.q() - Matrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn spectrum_hits_target_ratio() {
        let prob = gen_quadratic(50, 0.01, 7).unwrap();
        let (vals, _) = sorted_symmetric_eigen(prob.q());
        assert!((vals[0] - 0.01).abs() < 1e-12, "{}", vals[0]);
        assert!((vals[49] - 1.0).abs() < 1e-12, "{}", vals[49]);
        assert_eq!(prob.lipschitz(), 1.0);
        assert_eq!(prob.strong_convexity(), Some(0.01));
    }

    #[test]
    fn rejects_bad_condition_ratio() {
        assert!(gen_quadratic(5, 0.0, 1).is_err());
        assert!(gen_quadratic(5, 1.5, 1).is_err());
        assert!(gen_quadratic(1, 0.5, 1).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_quadratic(20, 0.1, 42).unwrap();
        let b = gen_quadratic(20, 0.1, 42).unwrap();
        assert_eq!(a.q(), b.q());
        assert_eq!(a.p(), b.p());
        let c = gen_quadratic(20, 0.1, 43).unwrap();
        assert_ne!(a.p(), c.p());
    }

    #[test]
    fn case2_values() {
        let prob = fixed_quadratic_case2();
        assert_eq!(prob.eigenvalues().as_slice(), &[0.01, 1.0]);
        let x0 = Vector::from_vec(vec![0.2, 1.0]);
        assert!((prob.value(&x0) - 0.5002).abs() < 1e-15);
        assert_eq!(prob.gradient(&Vector::zeros(2)).norm(), 0.0);
        assert_eq!(prob.x_star().unwrap().norm(), 0.0);
    }

    #[test]
    fn quadratic_is_strongly_convex_on_samples() {
        let prob = gen_quadratic(10, 0.05, 1).unwrap();
        let mu = prob.strong_convexity().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let x = Vector::from_fn(10, |_, _| rng.random_range(-3.0..3.0));
            let y = Vector::from_fn(10, |_, _| rng.random_range(-3.0..3.0));
            let lower = prob.value(&y) + prob.gradient(&y).dot(&(&x - &y)) + 0.5 * mu * (&x - &y).norm_squared();
            assert!(prob.value(&x) >= lower - 1e-10);
        }
    }

    #[test]
    fn lipschitz_bounds_gradient_differences() {
        let lasso = gen_lasso(30, 60, 5, 1.0, 0.1, 4).unwrap();
        let f = &lasso.least_squares;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let x = Vector::from_fn(60, |_, _| rng.random_range(-1.0..1.0));
            let y = Vector::from_fn(60, |_, _| rng.random_range(-1.0..1.0));
            let lhs = (f.gradient(&x) - f.gradient(&y)).norm();
            assert!(lhs <= f.lipschitz() * (&x - &y).norm() * (1.0 + 1e-12));
        }
        assert!(max_fd_gradient_error(f.as_ref(), 20, 11) <= 1e-6);
    }

    #[test]
    fn lasso_sparsity_and_determinism() {
        let a = gen_lasso(200, 400, 20, 1.0, 0.1, 3).unwrap();
        let b = gen_lasso(200, 400, 20, 1.0, 0.1, 3).unwrap();
        assert_eq!(a.x_true.iter().filter(|v| **v != 0.0).count(), 20);
        let ax_a = a.least_squares.a() * &a.x_true;
        let ax_b = b.least_squares.a() * &b.x_true;
        assert_eq!(ax_a, ax_b);
        assert_eq!(a.least_squares.b(), b.least_squares.b());
    }

    #[test]
    fn lasso_dense_when_s_equals_d() {
        let inst = gen_lasso(10, 8, 8, 1.0, 0.1, 1).unwrap();
        assert!(inst.x_true.iter().all(|v| *v != 0.0));
        assert!(gen_lasso(10, 8, 9, 1.0, 0.1, 1).is_err());
    }

    #[test]
    fn boxqp_condition_number() {
        let prob = gen_boxqp(40, 1e7, 11).unwrap();
        assert_eq!(prob.smooth.lipschitz(), 1.0);
        assert_eq!(prob.smooth.strong_convexity(), Some(1e-7));
        let unit = gen_boxqp(5, 1.0, 2).unwrap();
        assert_eq!(unit.smooth.strong_convexity(), Some(1.0));
    }

    #[test]
    fn boxqp_linear_term_scaling() {
        let zero = Vector::zeros(30);
        let full = gen_boxqp(30, 1e3, 5).unwrap().smooth.gradient(&zero);
        let same = gen_boxqp_scaled(30, 1e3, 1.0, 5).unwrap().smooth.gradient(&zero);
        assert_eq!(full, same);
        let small = gen_boxqp_scaled(30, 1e3, 0.01, 5).unwrap().smooth.gradient(&zero);
        assert!((small - full * 0.01).amax() < 1e-15);
        assert!(gen_boxqp_scaled(30, 1e3, f64::NAN, 5).is_err());
    }
}
