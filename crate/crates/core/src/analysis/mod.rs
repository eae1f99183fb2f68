//! Spectral analysis of the constant-coefficient iteration on strongly convex
//! quadratics.
//!
//! For an eigenvalue `lambda` of `Q`, each mode evolves by the 2x2 system
//! whose characteristic polynomial is
//!
//! ```text
//! r^2 - ((1 + beta)(1 - alpha lambda) - gamma alpha lambda) r + beta (1 - alpha lambda)
//! ```
//!
//! Everything here uses the normalization `L = 1`, so `alpha` is the step in
//! units of `1/L` and `lambda` ranges over `[q, 1]`.

mod modes;

pub use modes::{beta_i_star, psi, repeated_root, simulate_modes, ModeTrace, Regime, REGIME_TOL};

use num_complex::Complex64;

use crate::schedules::Coefficients;
use crate::{Error, Matrix, Result};

/// Linear and constant terms `(b, c)` of the polynomial `r^2 - b r + c`.
fn poly_terms(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> (f64, f64) {
    let damp = 1.0 - alpha * lambda;
    ((1.0 + beta) * damp - gamma * alpha * lambda, beta * damp)
}

/// `Delta = ((1 + beta)(1 - alpha lambda) - gamma alpha lambda)^2 - 4 beta (1 - alpha lambda)`.
pub fn discriminant(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> f64 {
    let (b, c) = poly_terms(alpha, beta, gamma, lambda);
    b * b - 4.0 * c
}

/// Roots of the characteristic polynomial, larger magnitude first.
///
/// A discriminant within rounding of zero is treated as an exact double root.
pub fn char_roots(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> (Complex64, Complex64) {
    let (b, c) = poly_terms(alpha, beta, gamma, lambda);
    let delta = b * b - 4.0 * c;
    let noise = 8.0 * f64::EPSILON * (b * b + 4.0 * c.abs());
    if delta.abs() <= noise {
        let r = Complex64::new(0.5 * b, 0.0);
        return (r, r);
    }
    if delta > 0.0 {
        // Cancellation-free pair: the larger root from the sum, the other from
        // the product.
        let big = 0.5 * (b + b.signum() * delta.sqrt());
        let small = if big != 0.0 { c / big } else { 0.0 };
        (Complex64::new(big, 0.0), Complex64::new(small, 0.0))
    } else {
        let im = 0.5 * (-delta).sqrt();
        (Complex64::new(0.5 * b, im), Complex64::new(0.5 * b, -im))
    }
}

/// Spectral radius of the 2x2 mode matrix at eigenvalue `lambda`.
pub fn rho_t_lambda(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> f64 {
    let (r1, r2) = char_roots(alpha, beta, gamma, lambda);
    r1.norm().max(r2.norm())
}

/// Constant coefficients together with the spectrum they act on.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSystem {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Ascending eigenvalues normalized so the largest is 1.
    pub lambdas: Vec<f64>,
}

impl QuadSystem {
    /// Normalizes `lambdas` by their maximum and sorts them.
    pub fn new(coeffs: Coefficients, lambdas: &[f64]) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::param("lambdas", "need at least one eigenvalue"));
        }
        if coeffs.gamma < -1.0 {
            return Err(Error::param("gamma", "must be >= -1"));
        }
        let mut sorted: Vec<f64> = lambdas.to_vec();
        sorted.sort_by(f64::total_cmp);
        let top = sorted[sorted.len() - 1];
        if !(top > 0.0) || sorted[0] < 0.0 {
            return Err(Error::param(
                "lambdas",
                "eigenvalues must be >= 0 with a positive maximum",
            ));
        }
        for l in &mut sorted {
            *l /= top;
        }
        Ok(Self {
            q: sorted[0],
            alpha: coeffs.alpha,
            beta: coeffs.beta,
            gamma: coeffs.gamma,
            lambdas: sorted,
        })
    }

    /// The two-point spectrum `{q, 1}`.
    pub fn from_q(q: f64, coeffs: Coefficients) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::param("q", format!("must lie in (0, 1], got {q}")));
        }
        Self::new(coeffs, &[q, 1.0])
    }

    pub fn coefficients(&self) -> Coefficients {
        Coefficients::new(self.alpha, self.beta, self.gamma)
    }

    pub fn rho(&self) -> f64 {
        rho_t(self)
    }
}

/// Spectral radius of the full system: the larger of the two endpoint values,
/// since `rho_t_lambda` is quasi-convex in `lambda`.
pub fn rho_t(sys: &QuadSystem) -> f64 {
    let lo = rho_t_lambda(sys.alpha, sys.beta, sys.gamma, sys.q);
    let hi = rho_t_lambda(sys.alpha, sys.beta, sys.gamma, 1.0);
    lo.max(hi)
}

/// The momentum that makes `lambda = mu` critically damped for a given
/// `gamma` (with `alpha = 1/L`).
pub fn beta_star_of_gamma(q: f64, gamma: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::param("q", format!("must lie in (0, 1), got {q}")));
    }
    if gamma < -1.0 {
        return Err(Error::param("gamma", "must be >= -1"));
    }
    let s = 1.0 - (q * (1.0 + gamma)).sqrt();
    Ok(s * s / (1.0 - q))
}

/// The optimal constant pair for `alpha = 1/L` and its spectral radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OgmQ {
    pub beta: f64,
    pub gamma: f64,
    pub rho: f64,
}

/// `gamma* = (2 + q - sqrt(q^2 + 8q)) / 2`, `beta* = gamma*^2 / (1 - q)`,
/// `rho* = gamma*`.
pub fn ogm_q_coeffs(q: f64) -> Result<OgmQ> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::param("q", format!("must lie in (0, 1], got {q}")));
    }
    let gamma = 0.5 * (2.0 + q - (q * q + 8.0 * q).sqrt());
    let beta = if q < 1.0 { gamma * gamma / (1.0 - q) } else { 0.0 };
    Ok(OgmQ {
        beta,
        gamma,
        rho: gamma,
    })
}

/// One row of the optimally tuned coefficient comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Table3Row {
    pub method: &'static str,
    /// Step in units of `1/L`.
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Closed-form spectral radius.
    pub rho: f64,
}

/// GM-q, FGM-q, FGM'-q and OGM-q with their closed-form spectral radii.
pub fn table3_summary(q: f64) -> Result<Vec<Table3Row>> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::param("q", format!("must lie in (0, 1), got {q}")));
    }
    let sq = q.sqrt();
    let a = (3.0 + q).sqrt();
    let ogm = ogm_q_coeffs(q)?;
    Ok(vec![
        Table3Row {
            method: "GM-q",
            alpha: 2.0 / (1.0 + q),
            beta: 0.0,
            gamma: 0.0,
            rho: (1.0 - q) / (1.0 + q),
        },
        Table3Row {
            method: "FGM-q",
            alpha: 1.0,
            beta: (1.0 - sq) / (1.0 + sq),
            gamma: 0.0,
            rho: 1.0 - sq,
        },
        Table3Row {
            method: "FGM'-q",
            alpha: 4.0 / (q + 3.0),
            beta: (a - 2.0 * sq) / (a + 2.0 * sq),
            gamma: 0.0,
            rho: 1.0 - 2.0 * sq / a,
        },
        Table3Row {
            method: "OGM-q",
            alpha: 1.0,
            beta: ogm.beta,
            gamma: ogm.gamma,
            rho: ogm.rho,
        },
    ])
}

/// One sample of the per-eigenvalue root magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoPoint {
    pub lambda: f64,
    pub r1_abs: f64,
    pub r2_abs: f64,
    pub rho: f64,
}

/// `|r_1|`, `|r_2|` and their maximum on `n` evenly spaced `lambda in [q, 1]`.
pub fn rho_curve(q: f64, coeffs: Coefficients, n: usize) -> Result<Vec<RhoPoint>> {
    if n < 2 {
        return Err(Error::param("n_lambda", "need at least two samples"));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::param("q", format!("must lie in (0, 1], got {q}")));
    }
    Ok((0..n)
        .map(|i| {
            let lambda = if i + 1 == n {
                1.0
            } else {
                q + (1.0 - q) * i as f64 / (n - 1) as f64
            };
            let (r1, r2) = char_roots(coeffs.alpha, coeffs.beta, coeffs.gamma, lambda);
            RhoPoint {
                lambda,
                r1_abs: r1.norm(),
                r2_abs: r2.norm(),
                rho: r1.norm().max(r2.norm()),
            }
        })
        .collect())
}

/// The `2d x 2d` matrix propagating `(x_k - x_*, x_{k-1} - x_*)` for step
/// `step` (absolute, not scaled by `1/L`).
pub fn assemble_system_matrix(q: &Matrix, step: f64, beta: f64, gamma: f64) -> Matrix {
    let d = q.nrows();
    let eye = Matrix::identity(d, d);
    let damp = &eye - q * step;
    let top_left = &damp * (1.0 + beta) - q * (gamma * step);
    let top_right = &damp * (-beta);
    let mut t = Matrix::zeros(2 * d, 2 * d);
    t.view_mut((0, 0), (d, d)).copy_from(&top_left);
    t.view_mut((0, d), (d, d)).copy_from(&top_right);
    t.view_mut((d, 0), (d, d)).copy_from(&eye);
    t
}
