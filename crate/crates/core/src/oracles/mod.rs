//! Problem abstractions and the seeded test-problem families.
//!
//! A [`SmoothOracle`] supplies values and gradients of a differentiable convex
//! `f` with a known gradient Lipschitz constant `L`. A [`ProxOracle`] supplies
//! values (possibly `+inf`) and the proximity operator of a convex `phi`.
//! [`CompositeProblem`] pairs the two as `F = f + phi`.

mod counting;
mod generate;
mod least_squares;
mod logsumexp;
mod prox;
mod quadratic;
pub(crate) mod spectral;

use std::sync::Arc;

pub use counting::{CountingOracle, CountingProx};
pub use generate::{fixed_quadratic_case2, gen_boxqp, gen_boxqp_scaled, gen_lasso, gen_quadratic, LassoInstance};
pub use least_squares::LeastSquares;
pub use logsumexp::{gen_logsumexp, logsumexp_oracle, LogSumExp};
pub use prox::{box_projection, soft_threshold, BoxIndicator, L1Norm, Zero};
pub use quadratic::QuadraticProblem;

use crate::Vector;

/// Value and gradient access to a smooth convex function.
pub trait SmoothOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &Vector) -> f64;

    fn gradient(&self, x: &Vector) -> Vector;

    /// Both at once. Implementations override this when the two share work.
    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        (self.value(x), self.gradient(x))
    }

    /// Lipschitz constant `L` of the gradient.
    fn lipschitz(&self) -> f64;

    /// Strong convexity parameter `mu`, when known.
    fn strong_convexity(&self) -> Option<f64> {
        None
    }
}

/// A convex, possibly nonsmooth or extended-valued function with a cheap
/// proximity operator `prox(z, zeta) = argmin_x 1/2 |z - x|^2 + zeta * phi(x)`.
pub trait ProxOracle: Send + Sync {
    fn value(&self, x: &Vector) -> f64;

    fn prox(&self, z: &Vector, zeta: f64) -> Vector;
}

/// `F(x) = f(x) + phi(x)`.
#[derive(Clone)]
pub struct CompositeProblem {
    pub smooth: Arc<dyn SmoothOracle>,
    pub nonsmooth: Arc<dyn ProxOracle>,
    /// Certified optimum value, when one has been computed.
    pub reference: Option<f64>,
}

impl CompositeProblem {
    pub fn new(smooth: Arc<dyn SmoothOracle>, nonsmooth: Arc<dyn ProxOracle>) -> Self {
        Self {
            smooth,
            nonsmooth,
            reference: None,
        }
    }

    /// A composite problem with `phi = 0`.
    pub fn smooth_only(smooth: Arc<dyn SmoothOracle>) -> Self {
        Self::new(smooth, Arc::new(Zero))
    }

    pub fn dim(&self) -> usize {
        self.smooth.dim()
    }

    pub fn objective(&self, x: &Vector) -> f64 {
        let phi = self.nonsmooth.value(x);
        if phi.is_infinite() {
            return phi;
        }
        self.smooth.value(x) + phi
    }
}

impl std::fmt::Debug for CompositeProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompositeProblem")
            .field("dim", &self.dim())
            .field("lipschitz", &self.smooth.lipschitz())
            .field("reference", &self.reference)
            .finish()
    }
}

/// Number of coordinates of `x` that sit on a bound of `[lower, upper]`.
pub fn active_set_size(x: &Vector, lower: &Vector, upper: &Vector, tol: f64) -> usize {
    x.iter()
        .zip(lower.iter().zip(upper.iter()))
        .filter(|(xi, (l, u))| (**xi - **l).abs() <= tol || (**u - **xi).abs() <= tol)
        .count()
}

#[cfg(test)]
pub(crate) mod testing {
    //! Finite-difference and sampling checks shared by the oracle unit tests.
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Largest relative error between the analytic gradient and central
    /// differences with step `1e-6 * (1 + |x_i|)`, over `points` seeded points.
    pub fn max_fd_gradient_error(oracle: &dyn SmoothOracle, points: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = oracle.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..points {
            let x = Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
            let g = oracle.gradient(&x);
            let fd = Vector::from_fn(d, |i, _| {
                let h = 1e-6 * (1.0 + x[i].abs());
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                (oracle.value(&xp) - oracle.value(&xm)) / (2.0 * h)
            });
            let err = (&g - &fd).norm() / g.norm().max(1.0);
            worst = worst.max(err);
        }
        worst
    }
}
