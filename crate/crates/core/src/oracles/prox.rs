use super::ProxOracle;
use crate::{Error, Result, Vector};

/// Elementwise `sgn(z_i) * max(|z_i| - t, 0)`; the prox of `tau |.|_1` at
/// step `zeta` with `t = zeta * tau`.
pub fn soft_threshold(z: &Vector, t: f64) -> Vector {
    debug_assert!(t >= 0.0);
    z.map(|zi| {
        if zi > t {
            zi - t
        } else if zi < -t {
            zi + t
        } else {
            0.0
        }
    })
}

/// Elementwise `min(max(z, lower), upper)`.
pub fn box_projection(z: &Vector, lower: &Vector, upper: &Vector) -> Result<Vector> {
    if lower.len() != z.len() || upper.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            got: lower.len().min(upper.len()),
        });
    }
    if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
        return Err(Error::param("lower", "lower bound exceeds upper bound"));
    }
    Ok(clamp(z, lower, upper))
}

fn clamp(z: &Vector, lower: &Vector, upper: &Vector) -> Vector {
    Vector::from_fn(z.len(), |i, _| z[i].max(lower[i]).min(upper[i]))
}

/// `phi = 0`; its prox is the identity.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl ProxOracle for Zero {
    fn value(&self, _x: &Vector) -> f64 {
        0.0
    }

    fn prox(&self, z: &Vector, _zeta: f64) -> Vector {
        z.clone()
    }
}

/// `phi(x) = tau |x|_1`.
#[derive(Debug, Clone, Copy)]
pub struct L1Norm {
    tau: f64,
}

impl L1Norm {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::param("tau", format!("must be finite and >= 0, got {tau}")));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl ProxOracle for L1Norm {
    fn value(&self, x: &Vector) -> f64 {
        self.tau * x.lp_norm(1)
    }

    fn prox(&self, z: &Vector, zeta: f64) -> Vector {
        soft_threshold(z, zeta * self.tau)
    }
}

/// Indicator of the box `lower <= x <= upper`.
#[derive(Debug, Clone)]
pub struct BoxIndicator {
    lower: Vector,
    upper: Vector,
}

impl BoxIndicator {
    pub fn new(lower: Vector, upper: Vector) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::param("lower", "lower bound exceeds upper bound"));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &Vector {
        &self.lower
    }

    pub fn upper(&self) -> &Vector {
        &self.upper
    }
}

impl ProxOracle for BoxIndicator {
    fn value(&self, x: &Vector) -> f64 {
        let inside = x
            .iter()
            .zip(self.lower.iter().zip(self.upper.iter()))
            .all(|(xi, (l, u))| xi >= l && xi <= u);
        if inside {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, z: &Vector, _zeta: f64) -> Vector {
        clamp(z, &self.lower, &self.upper)
    }
}
