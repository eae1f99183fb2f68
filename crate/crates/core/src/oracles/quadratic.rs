use super::spectral::sorted_symmetric_eigen;
use super::SmoothOracle;
use crate::{Error, Matrix, Result, Vector};

/// `f(x) = 1/2 x^T Q x - p^T x` with `Q` symmetric positive semidefinite.
///
/// The eigendecomposition `Q = V diag(lambda) V^T` is kept with ascending
/// eigenvalues, so `L = lambda_d` and `mu = lambda_1`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    q: Matrix,
    p: Vector,
    eigenvalues: Vector,
    eigenvectors: Matrix,
    x_star: Option<Vector>,
}

impl QuadraticProblem {
    /// Builds the problem from an explicit `Q`, eigendecomposing it.
    pub fn new(q: Matrix, p: Vector) -> Result<Self> {
        let d = q.nrows();
        if q.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: q.ncols(),
            });
        }
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
        let asym = (&q - q.transpose()).amax();
        if asym > 1e-12 * q.amax().max(1.0) {
            return Err(Error::param("Q", "matrix is not symmetric"));
        }
        let (eigenvalues, eigenvectors) = sorted_symmetric_eigen(&q);
        if eigenvalues[0] < -1e-12 * eigenvalues[d - 1].abs().max(1.0) {
            return Err(Error::param("Q", "matrix is not positive semidefinite"));
        }
        Ok(Self::assemble(q, p, eigenvalues, eigenvectors))
    }

    /// Builds `Q = V diag(eigenvalues) V^T` from a known spectrum. The stored
    /// eigenvalues are exactly the ones passed in.
    pub fn from_spectrum(eigenvectors: Matrix, eigenvalues: Vector, p: Vector) -> Result<Self> {
        let d = eigenvalues.len();
        if eigenvectors.shape() != (d, d) || p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
        if eigenvalues.iter().zip(eigenvalues.iter().skip(1)).any(|(a, b)| a > b) {
            return Err(Error::param("eigenvalues", "must be ascending"));
        }
        if eigenvalues[0] < 0.0 {
            return Err(Error::param("eigenvalues", "must be nonnegative"));
        }
        let scaled = Matrix::from_fn(d, d, |i, j| eigenvectors[(i, j)] * eigenvalues[j]);
        let q = &scaled * eigenvectors.transpose();
        let q = (&q + q.transpose()) * 0.5;
        Ok(Self::assemble(q, p, eigenvalues, eigenvectors))
    }

    fn assemble(q: Matrix, p: Vector, eigenvalues: Vector, eigenvectors: Matrix) -> Self {
        let x_star = (eigenvalues[0] > 0.0).then(|| {
            let coords = eigenvectors.tr_mul(&p).component_div(&eigenvalues);
            &eigenvectors * coords
        });
        Self {
            q,
            p,
            eigenvalues,
            eigenvectors,
            x_star,
        }
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn p(&self) -> &Vector {
        &self.p
    }

    /// Ascending eigenvalues of `Q`.
    pub fn eigenvalues(&self) -> &Vector {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors of `Q`, one column per eigenvalue.
    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    /// Minimizer `Q^{-1} p` when `Q` is nonsingular.
    pub fn x_star(&self) -> Option<&Vector> {
        self.x_star.as_ref()
    }

    /// `f(x_*)`, when the minimizer exists.
    pub fn optimal_value(&self) -> Option<f64> {
        self.x_star.as_ref().map(|x| -0.5 * self.p.dot(x))
    }

    /// `mu / L`.
    pub fn condition_ratio(&self) -> f64 {
        self.eigenvalues[0] / self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// The same `Q` with `p = 0`, so the minimizer is the origin. Iterating on
    /// it from `x0 - x_*` reproduces the error dynamics of the original.
    pub fn centered(&self) -> Self {
        Self {
            q: self.q.clone(),
            p: Vector::zeros(self.p.len()),
            eigenvalues: self.eigenvalues.clone(),
            eigenvectors: self.eigenvectors.clone(),
            x_star: self.x_star.as_ref().map(|x| Vector::zeros(x.len())),
        }
    }
}

impl SmoothOracle for QuadraticProblem {
    fn dim(&self) -> usize {
        self.p.len()
    }

    fn value(&self, x: &Vector) -> f64 {
        0.5 * x.dot(&(&self.q * x)) - self.p.dot(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        &self.q * x - &self.p
    }

    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        let qx = &self.q * x;
        let value = 0.5 * x.dot(&qx) - self.p.dot(x);
        (value, qx - &self.p)
    }

    fn lipschitz(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    fn strong_convexity(&self) -> Option<f64> {
        Some(self.eigenvalues[0])
    }
}
