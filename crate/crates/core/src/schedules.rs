//! Per-iteration coefficients `(alpha, beta, gamma)` of the accelerated
//! first-order iteration
//!
//! ```text
//! y_{k+1} = x_k - (alpha / L) grad f(x_k)
//! x_{k+1} = y_{k+1} + beta_k (y_{k+1} - y_k) + gamma_k (y_{k+1} - x_k)
//! ```
//!
//! `alpha` is expressed in units of `1/L`.

use std::fmt;

use crate::analysis::ogm_q_coeffs;
use crate::{Error, Result};

/// One step's coefficients. `alpha` is in units of `1/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Coefficients {
    pub const fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }
}

/// The named coefficient schedules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleKind {
    /// Gradient method, `(1, 0, 0)`.
    Gm,
    /// Gradient method with step `2 / (mu + L)`.
    GmQ { q: f64 },
    /// Nesterov's fast gradient method with `t_k` momentum.
    Fgm,
    /// Constant-momentum FGM for known `q`.
    FgmQ { q: f64 },
    /// FGM with jointly tuned `(alpha, beta)` for known `q`.
    FgmPrimeQ { q: f64 },
    /// Optimized gradient method for a fixed horizon `n` (damped last step).
    Ogm { n: usize },
    /// OGM' : optimized gradient method using `t_k` throughout.
    OgmPrime,
    /// Constant `(beta*, gamma*)` minimizing the quadratic spectral radius.
    OgmQ { q: f64 },
    /// Arbitrary constant coefficients.
    Constant(Coefficients),
}

impl ScheduleKind {
    /// Parses a CLI method name. `q` is required by the `*-q` methods and
    /// `n` by `ogm`.
    pub fn from_name(name: &str, q: Option<f64>, n: Option<usize>) -> Result<Self> {
        let need_q = || q.ok_or_else(|| Error::param("q", format!("method `{name}` needs q")));
        let kind = match name {
            "gm" => ScheduleKind::Gm,
            "gm-q" => ScheduleKind::GmQ { q: need_q()? },
            "fgm" => ScheduleKind::Fgm,
            "fgm-q" => ScheduleKind::FgmQ { q: need_q()? },
            "fgmp-q" => ScheduleKind::FgmPrimeQ { q: need_q()? },
            "ogm" => ScheduleKind::Ogm {
                n: n.ok_or_else(|| Error::param("n", "method `ogm` needs an iteration horizon"))?,
            },
            "ogmp" => ScheduleKind::OgmPrime,
            "ogm-q" => ScheduleKind::OgmQ { q: need_q()? },
            other => return Err(Error::UnknownSolver(other.to_string())),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScheduleKind::Gm => "gm",
            ScheduleKind::GmQ { .. } => "gm-q",
            ScheduleKind::Fgm => "fgm",
            ScheduleKind::FgmQ { .. } => "fgm-q",
            ScheduleKind::FgmPrimeQ { .. } => "fgmp-q",
            ScheduleKind::Ogm { .. } => "ogm",
            ScheduleKind::OgmPrime => "ogmp",
            ScheduleKind::OgmQ { .. } => "ogm-q",
            ScheduleKind::Constant(_) => "const",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ScheduleKind::GmQ { q }
            | ScheduleKind::FgmQ { q }
            | ScheduleKind::FgmPrimeQ { q }
            | ScheduleKind::OgmQ { q } => {
                if !(q > 0.0 && q <= 1.0) {
                    return Err(Error::param("q", format!("must lie in (0, 1], got {q}")));
                }
            }
            ScheduleKind::Ogm { n } => {
                if n == 0 {
                    return Err(Error::param("n", "must be >= 1"));
                }
            }
            ScheduleKind::Constant(c) => {
                if !(c.alpha > 0.0) || !c.beta.is_finite() || !c.gamma.is_finite() {
                    return Err(Error::param("coefficients", format!("{c:?}")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Whether the momentum follows the `t_k` / `theta_k` recursion, which is
    /// what a restart resets.
    pub fn is_momentum_sequence(&self) -> bool {
        matches!(
            self,
            ScheduleKind::Fgm | ScheduleKind::OgmPrime | ScheduleKind::Ogm { .. }
        )
    }

    /// Whether the schedule carries a nonzero over-relaxation `gamma`.
    pub fn has_over_relaxation(&self) -> bool {
        match self {
            ScheduleKind::Ogm { .. } | ScheduleKind::OgmPrime | ScheduleKind::OgmQ { .. } => true,
            ScheduleKind::Constant(c) => c.gamma != 0.0,
            _ => false,
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2`.
pub fn t_next(t: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt())
}

/// `theta` recursion: the `4 theta^2` branch, or `8 theta^2` on the last step.
pub fn theta_next(theta: f64, is_last: bool) -> f64 {
    let c = if is_last { 8.0 } else { 4.0 };
    0.5 * (1.0 + (1.0 + c * theta * theta).sqrt())
}

/// Running state of a momentum sequence: `t_k` (or `theta_k`) at step `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleState {
    pub t: f64,
    pub k: usize,
}

impl Default for ScheduleState {
    fn default() -> Self {
        Self { t: 1.0, k: 0 }
    }
}

/// Coefficients of step `k` given the running `t_k` in `state`.
///
/// Also returns the next momentum parameter `t_{k+1}` (unchanged for the
/// constant schedules).
pub fn coefficients(kind: &ScheduleKind, state: &ScheduleState) -> Result<(Coefficients, f64)> {
    kind.validate()?;
    let t = state.t;
    let out = match *kind {
        ScheduleKind::Gm => (Coefficients::new(1.0, 0.0, 0.0), t),
        ScheduleKind::GmQ { q } => (Coefficients::new(2.0 / (1.0 + q), 0.0, 0.0), t),
        ScheduleKind::Fgm => {
            let tn = t_next(t);
            (Coefficients::new(1.0, (t - 1.0) / tn, 0.0), tn)
        }
        ScheduleKind::FgmQ { q } => {
            let s = q.sqrt();
            (Coefficients::new(1.0, (1.0 - s) / (1.0 + s), 0.0), t)
        }
        ScheduleKind::FgmPrimeQ { q } => {
            let a = (3.0 + q).sqrt();
            let b = 2.0 * q.sqrt();
            (Coefficients::new(4.0 / (q + 3.0), (a - b) / (a + b), 0.0), t)
        }
        ScheduleKind::OgmPrime => {
            let tn = t_next(t);
            (Coefficients::new(1.0, (t - 1.0) / tn, t / tn), tn)
        }
        ScheduleKind::Ogm { n } => {
            let tn = theta_next(t, state.k + 1 == n);
            (Coefficients::new(1.0, (t - 1.0) / tn, t / tn), tn)
        }
        ScheduleKind::OgmQ { q } => {
            let opt = ogm_q_coeffs(q)?;
            (Coefficients::new(1.0, opt.beta, opt.gamma), t)
        }
        ScheduleKind::Constant(c) => (c, t),
    };
    Ok(out)
}

/// Iterator-style schedule owned by one solver run.
#[derive(Debug, Clone)]
pub struct Schedule {
    kind: ScheduleKind,
    state: ScheduleState,
    constant: Option<Coefficients>,
}

impl Schedule {
    pub fn new(kind: ScheduleKind) -> Result<Self> {
        kind.validate()?;
        let constant = if kind.is_momentum_sequence() {
            None
        } else {
            Some(coefficients(&kind, &ScheduleState::default())?.0)
        };
        Ok(Self {
            kind,
            state: ScheduleState::default(),
            constant,
        })
    }

    pub fn kind(&self) -> &ScheduleKind {
        &self.kind
    }

    pub fn state(&self) -> ScheduleState {
        self.state
    }

    /// Coefficients for the current step; advances `t_k` and `k`.
    pub fn next_coefficients(&mut self) -> Coefficients {
        let c = match self.constant {
            Some(c) => c,
            None => {
                let (c, tn) = coefficients(&self.kind, &self.state).expect("validated at construction");
                self.state.t = tn;
                c
            }
        };
        self.state.k += 1;
        c
    }

    /// Discards accumulated momentum: `t <- 1`, `k <- 0`.
    pub fn restart(&mut self) {
        self.state = ScheduleState::default();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    #[test]
    fn t_sequence_values() {
        let t1 = t_next(1.0);
        assert_relative_eq!(t1, GOLDEN, max_relative = 1e-15);
        // t2 = (1 + sqrt(1 + 4 t1^2)) / 2 with t1^2 = t1 + 1.
        let t2 = 0.5 * (1.0 + (5.0 + 4.0 * GOLDEN).sqrt());
        assert_relative_eq!(t_next(t1), t2, max_relative = 1e-15);
        assert!((t_next(t1) - 2.193527).abs() < 1e-6);
    }

    #[test]
    fn t_grows_by_about_one_half() {
        let mut t = 1.0;
        for _ in 0..10_000 {
            let tn = t_next(t);
            assert!(tn > t + 0.5 - 1e-12);
            t = tn;
        }
        assert!((t_next(t) - t - 0.5).abs() < 1e-4);
    }

    #[test]
    fn theta_branches() {
        assert_relative_eq!(theta_next(1.0, false), GOLDEN, max_relative = 1e-15);
        assert_eq!(theta_next(1.0, true), 2.0);
        assert!(theta_next(1.0, true) >= GOLDEN);
    }

    #[test]
    fn named_coefficients() {
        let s = ScheduleState::default();
        let (c, _) = coefficients(&ScheduleKind::FgmQ { q: 0.1 }, &s).unwrap();
        assert!((c.beta - 0.519493).abs() < 1e-6);
        let (c, _) = coefficients(&ScheduleKind::OgmQ { q: 0.1 }, &s).unwrap();
        assert!((c.beta - 0.4).abs() < 1e-12 && (c.gamma - 0.6).abs() < 1e-12);
        let (c, _) = coefficients(&ScheduleKind::FgmQ { q: 1.0 }, &s).unwrap();
        assert_eq!(c.beta, 0.0);
        let (c, _) = coefficients(&ScheduleKind::GmQ { q: 0.5 }, &s).unwrap();
        assert_relative_eq!(c.alpha, 2.0 / 1.5);
        let (c, _) = coefficients(&ScheduleKind::FgmPrimeQ { q: 0.1 }, &s).unwrap();
        assert_relative_eq!(c.alpha, 4.0 / 3.1);
    }

    #[test]
    fn ogm_prime_coefficient_bounds() {
        let mut sched = Schedule::new(ScheduleKind::OgmPrime).unwrap();
        for _ in 0..5000 {
            let t = sched.state().t;
            let c = sched.next_coefficients();
            let tn = sched.state().t;
            assert!((0.0..1.0).contains(&c.beta) && (0.0..1.0).contains(&c.gamma));
            assert_relative_eq!(c.beta + c.gamma, (2.0 * t - 1.0) / tn, max_relative = 1e-14);
            assert!(c.beta + c.gamma < 2.0);
        }
    }

    #[test]
    fn ogm_differs_from_ogm_prime_only_at_last_step() {
        let n = 12;
        let mut ogm = Schedule::new(ScheduleKind::Ogm { n }).unwrap();
        let mut prime = Schedule::new(ScheduleKind::OgmPrime).unwrap();
        for k in 0..n {
            let a = ogm.next_coefficients();
            let b = prime.next_coefficients();
            if k + 1 < n {
                assert_eq!(a, b, "step {k}");
            } else {
                assert!(a.beta < b.beta && a.gamma < b.gamma);
            }
        }
    }

    #[test]
    fn fgm_q_matches_optimal_beta_at_zero_gamma() {
        for q in [1e-4, 0.01, 0.3, 0.9] {
            let (c, _) = coefficients(&ScheduleKind::FgmQ { q }, &ScheduleState::default()).unwrap();
            let b = crate::analysis::beta_star_of_gamma(q, 0.0).unwrap();
            assert_relative_eq!(c.beta, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn restart_resets_momentum() {
        let mut s = Schedule::new(ScheduleKind::Fgm).unwrap();
        let first = s.next_coefficients();
        s.next_coefficients();
        s.restart();
        assert_eq!(s.next_coefficients(), first);
    }

    #[test]
    fn parse_names() {
        for name in ["gm", "fgm", "ogmp"] {
            assert_eq!(ScheduleKind::from_name(name, None, None).unwrap().name(), name);
        }
        for name in ["gm-q", "fgm-q", "fgmp-q", "ogm-q"] {
            assert!(ScheduleKind::from_name(name, None, None).is_err());
            assert_eq!(ScheduleKind::from_name(name, Some(0.1), None).unwrap().name(), name);
        }
        assert!(ScheduleKind::from_name("ogm", None, None).is_err());
        assert!(ScheduleKind::from_name("ogm", None, Some(10)).is_ok());
        assert!(matches!(
            ScheduleKind::from_name("heavy-ball", None, None),
            Err(Error::UnknownSolver(_))
        ));
        assert!(ScheduleKind::from_name("fgm-q", Some(0.0), None).is_err());
    }
}
