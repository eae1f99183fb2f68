//! Per-eigenmode evolution of the constant-coefficient iteration.
//!
//! In the eigenbasis of `Q` (with `x_* = 0`) the primary coefficients
//! `w_k = V^T y_k` and secondary coefficients `v_k = V^T x_k` each follow
//! the same scalar second-order recurrence per mode; only the first step
//! differs.

use super::QuadSystem;
use crate::{Error, Matrix, Result};

/// Half-width of the band around `beta_i*` labelled [`Regime::Optimal`].
pub const REGIME_TOL: f64 = 1e-9;

/// Momentum regime of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Over-damped: two real roots, slow monotone decay.
    Low,
    /// Critically damped: repeated real root.
    Optimal,
    /// Under-damped: complex roots, oscillation.
    High,
}

/// `(1 - sqrt((1 + gamma) q_i))^2 / (1 - q_i)`, the smaller zero of the
/// discriminant in `beta` for the mode with `q_i = lambda_i / L`.
pub fn beta_i_star(q_i: f64, gamma: f64) -> Result<f64> {
    if q_i >= 1.0 {
        return Err(Error::param(
            "q_i",
            "the top mode has no critical momentum (always low momentum)",
        ));
    }
    if !(q_i > 0.0) {
        return Err(Error::param("q_i", format!("must be positive, got {q_i}")));
    }
    let s = 1.0 - ((1.0 + gamma) * q_i).sqrt();
    Ok(s * s / (1.0 - q_i))
}

/// Root of the critically damped mode, `1 - sqrt((1 + gamma) q_i)`.
pub fn repeated_root(q_i: f64, gamma: f64) -> f64 {
    1.0 - ((1.0 + gamma) * q_i).sqrt()
}

/// Oscillation frequency (radians per iteration) of an under-damped mode.
pub fn psi(beta: f64, gamma: f64, lambda_ratio: f64) -> Result<f64> {
    let damp = 1.0 - lambda_ratio;
    let radial = beta * damp;
    if !(radial > 0.0) {
        return Err(Error::NotUnderDamped(f64::NAN));
    }
    let arg = ((1.0 + beta) * damp - gamma * lambda_ratio) / (2.0 * radial.sqrt());
    if arg.abs() > 1.0 + 1e-12 {
        return Err(Error::NotUnderDamped(arg));
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// Simulated primary (`w`) and secondary (`v`) mode coefficients.
#[derive(Debug, Clone)]
pub struct ModeTrace {
    /// Row `k`, column `i`: `w_{k,i}`.
    pub w: Matrix,
    /// Row `k`, column `i`: `v_{k,i}`.
    pub v: Matrix,
    pub regimes: Vec<Regime>,
}

impl ModeTrace {
    /// Largest violation of the shared recurrence over all interior indices,
    /// relative to the largest coefficient magnitude of that mode.
    pub fn recurrence_residual(&self, sys: &QuadSystem) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &lambda) in sys.lambdas.iter().enumerate() {
            let (b, c) = mode_terms(sys, lambda);
            for m in [&self.w, &self.v] {
                let scale = m.column(i).amax().max(f64::MIN_POSITIVE);
                for k in 2..m.nrows() {
                    let r = m[(k, i)] - (b * m[(k - 1, i)] - c * m[(k - 2, i)]);
                    worst = worst.max(r.abs() / scale);
                }
            }
        }
        worst
    }
}

fn mode_terms(sys: &QuadSystem, lambda: f64) -> (f64, f64) {
    let s = sys.alpha * lambda;
    ((1.0 + sys.beta) * (1.0 - s) - sys.gamma * s, sys.beta * (1.0 - s))
}

fn classify(sys: &QuadSystem, lambda: f64) -> Regime {
    let s = sys.alpha * lambda;
    match beta_i_star(s, sys.gamma) {
        Err(_) => Regime::Low,
        Ok(critical) if (sys.beta - critical).abs() <= REGIME_TOL => Regime::Optimal,
        Ok(critical) if sys.beta < critical => Regime::Low,
        Ok(_) => Regime::High,
    }
}

/// Evolves every mode for `iters` steps from `w_0 = v_0 = w0`.
pub fn simulate_modes(sys: &QuadSystem, w0: &[f64], iters: usize) -> Result<ModeTrace> {
    let modes = sys.lambdas.len();
    if w0.len() != modes {
        return Err(Error::DimensionMismatch {
            expected: modes,
            got: w0.len(),
        });
    }
    let rows = iters + 1;
    let mut w = Matrix::zeros(rows, modes);
    let mut v = Matrix::zeros(rows, modes);
    for (i, &lambda) in sys.lambdas.iter().enumerate() {
        let s = sys.alpha * lambda;
        let (b, c) = mode_terms(sys, lambda);
        w[(0, i)] = w0[i];
        v[(0, i)] = w0[i];
        if rows > 1 {
            let mix = sys.beta + sys.gamma;
            w[(1, i)] = (1.0 - s) * w0[i];
            v[(1, i)] = ((1.0 + mix) * (1.0 - s) - mix) * w0[i];
        }
        for k in 2..rows {
            w[(k, i)] = b * w[(k - 1, i)] - c * w[(k - 2, i)];
            v[(k, i)] = b * v[(k - 1, i)] - c * v[(k - 2, i)];
        }
    }
    let regimes = sys.lambdas.iter().map(|&l| classify(sys, l)).collect();
    Ok(ModeTrace { w, v, regimes })
}
