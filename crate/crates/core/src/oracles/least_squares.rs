use super::spectral::lambda_max_gram;
use super::SmoothOracle;
use crate::{Error, Matrix, Result, Vector};

/// `f(x) = 1/2 |A x - b|^2` with `L = lambda_max(A^T A)`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: Matrix,
    b: Vector,
    lipschitz: f64,
}

impl LeastSquares {
    pub fn new(a: Matrix, b: Vector) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: b.len(),
            });
        }
        let lipschitz = lambda_max_gram(&a);
        Ok(Self { a, b, lipschitz })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }
}

impl SmoothOracle for LeastSquares {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &Vector) -> f64 {
        0.5 * (&self.a * x - &self.b).norm_squared()
    }

    fn gradient(&self, x: &Vector) -> Vector {
        self.a.tr_mul(&(&self.a * x - &self.b))
    }

    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        let r = &self.a * x - &self.b;
        (0.5 * r.norm_squared(), self.a.tr_mul(&r))
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}
