use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::spectral::lambda_max_gram;
use super::SmoothOracle;
use crate::{Error, Matrix, Result, Vector};

/// `f(x) = eta * log(sum_i exp((a_i^T x - b_i) / eta))`.
///
/// Smooth but not strongly convex; `L = lambda_max(A^T A) / eta`.
#[derive(Debug, Clone)]
pub struct LogSumExp {
    a: Matrix,
    b: Vector,
    eta: f64,
    lipschitz: f64,
}

/// Builds the log-sum-exp oracle for rows `a_i` of `a`.
pub fn logsumexp_oracle(a: Matrix, b: Vector, eta: f64) -> Result<LogSumExp> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::param("eta", format!("must be positive, got {eta}")));
    }
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    let lipschitz = lambda_max_gram(&a) / eta;
    Ok(LogSumExp { a, b, eta, lipschitz })
}

/// Random log-sum-exp instance with standard normal `A` (m x d) and `b`.
pub fn gen_logsumexp(m: usize, d: usize, eta: f64, seed: u64) -> Result<LogSumExp> {
    if m == 0 || d == 0 {
        return Err(Error::param("m", "dimensions must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Matrix::from_fn(m, d, |_, _| StandardNormal.sample(&mut rng));
    let b = Vector::from_fn(m, |_, _| StandardNormal.sample(&mut rng));
    logsumexp_oracle(a, b, eta)
}

impl LogSumExp {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Scaled residuals `(A x - b) / eta` and their maximum.
    fn scaled(&self, x: &Vector) -> (Vector, f64) {
        let z = (&self.a * x - &self.b) / self.eta;
        let max = z.max();
        (z, max)
    }
}

impl SmoothOracle for LogSumExp {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &Vector) -> f64 {
        let (z, max) = self.scaled(x);
        let sum: f64 = z.iter().map(|zi| (zi - max).exp()).sum();
        self.eta * (max + sum.ln())
    }

    fn gradient(&self, x: &Vector) -> Vector {
        self.value_and_gradient(x).1
    }

    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        let (z, max) = self.scaled(x);
        let mut s = z.map(|zi| (zi - max).exp());
        let sum = s.sum();
        s /= sum;
        (self.eta * (max + sum.ln()), self.a.tr_mul(&s))
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::testing::max_fd_gradient_error;

    #[test]
    fn symmetric_pair_has_zero_gradient_at_origin() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 0.0, -1.0, 0.0]);
        let f = logsumexp_oracle(a, Vector::zeros(2), 1.0).unwrap();
        assert_eq!(f.gradient(&Vector::zeros(2)).norm(), 0.0);
    }

    #[test]
    fn single_row_is_affine() {
        let a = Matrix::from_row_slice(1, 3, &[1.0, -2.0, 0.5]);
        let b = Vector::from_vec(vec![0.25]);
        for eta in [0.1, 1.0, 10.0] {
            let f = logsumexp_oracle(a.clone(), b.clone(), eta).unwrap();
            let x = Vector::from_vec(vec![0.3, 0.1, -2.0]);
            let expected = 0.3 - 0.2 - 1.0 - 0.25;
            assert!((f.value(&x) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn no_overflow_for_huge_arguments() {
        let a = Matrix::from_row_slice(2, 1, &[1.0, 2.0]);
        let f = logsumexp_oracle(a, Vector::zeros(2), 1e-3).unwrap();
        let x = Vector::from_vec(vec![10.0]);
        let v = f.value(&x);
        assert!(v.is_finite());
        assert!((v - 20.0).abs() < 1e-10);
        assert!(f.gradient(&x).iter().all(|g| g.is_finite()));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = gen_logsumexp(100, 20, 1.0, 5).unwrap();
        let err = max_fd_gradient_error(&f, 20, 9);
        assert!(err <= 1e-6, "fd error {err}");
    }

    #[test]
    fn rejects_nonpositive_eta() {
        assert!(logsumexp_oracle(Matrix::zeros(1, 1), Vector::zeros(1), 0.0).is_err());
    }
}
