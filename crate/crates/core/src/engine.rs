//! Iteration loops and their traces.
//!
//! Every loop evaluates one smooth gradient per record and, for composite
//! problems, at most one proximity operator per record. Record `k` describes
//! the iterate `x_k` (and `y_k`) together with the policy events decided in
//! the step that produced it.

use std::io::Write;

use crate::oracles::{CompositeProblem, SmoothOracle};
use crate::schedules::{coefficients, Schedule, ScheduleKind, ScheduleState};
use crate::{Error, Result, Vector};

/// Default multiplicative decrease of the over-relaxation weight.
pub const DEFAULT_SIGMA_BAR: f64 = 0.8;

/// Header of the trace CSV.
pub const TRACE_HEADER: &str = "k,f_y,F_x,grad_norm,restart,gd_gamma,sigma,beta,gamma";

/// Adaptive restart policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Restart {
    #[default]
    None,
    /// Restart when the monitored objective increases. The increasing step is
    /// rejected, so the monitored sequence is nonincreasing.
    Function,
    /// Restart when the (composite) gradient and the step form an obtuse angle.
    Gradient,
}

/// Decreasing-`gamma` policy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum GammaDecrease {
    #[default]
    Off,
    On {
        sigma_bar: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub schedule: ScheduleKind,
    pub restart: Restart,
    pub gamma_decrease: GammaDecrease,
    pub max_iters: usize,
    /// Stop once the (composite) gradient norm at `x_k` is at most this.
    pub grad_tol: f64,
    pub fixed_restart_interval: Option<usize>,
    /// Keep a copy of every `(x_k, y_k)` in the trace.
    pub record_iterates: bool,
}

impl SolverConfig {
    pub fn new(schedule: ScheduleKind, max_iters: usize) -> Self {
        Self {
            schedule,
            restart: Restart::None,
            gamma_decrease: GammaDecrease::Off,
            max_iters,
            grad_tol: 0.0,
            fixed_restart_interval: None,
            record_iterates: false,
        }
    }

    pub fn with_restart(mut self, restart: Restart) -> Self {
        self.restart = restart;
        self
    }

    pub fn with_gamma_decrease(mut self, sigma_bar: f64) -> Self {
        self.gamma_decrease = GammaDecrease::On { sigma_bar };
        self
    }

    pub fn with_grad_tol(mut self, tol: f64) -> Self {
        self.grad_tol = tol;
        self
    }

    pub fn with_fixed_restart(mut self, interval: usize) -> Self {
        self.fixed_restart_interval = Some(interval);
        self
    }

    pub fn recording(mut self) -> Self {
        self.record_iterates = true;
        self
    }

    /// Checks the configuration for a smooth run.
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        self.validate_common()?;
        if let GammaDecrease::On { .. } = self.gamma_decrease {
            if !self.schedule.has_over_relaxation() {
                return Err(Error::InvalidConfig(format!(
                    "decreasing gamma needs a schedule with over-relaxation, got `{}`",
                    self.schedule
                )));
            }
        }
        let restarts = self.restart != Restart::None || self.fixed_restart_interval.is_some();
        if restarts && !self.schedule.is_momentum_sequence() {
            return Err(Error::InvalidConfig(format!(
                "schedule `{}` has no momentum sequence to restart",
                self.schedule
            )));
        }
        Ok(())
    }

    fn validate_common(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::param("max_iters", "must be >= 1"));
        }
        if !(self.grad_tol >= 0.0) {
            return Err(Error::param("grad_tol", format!("must be >= 0, got {}", self.grad_tol)));
        }
        if let GammaDecrease::On { sigma_bar } = self.gamma_decrease {
            if !(0.0..=1.0).contains(&sigma_bar) {
                return Err(Error::param(
                    "sigma_bar",
                    format!("must lie in [0, 1], got {sigma_bar}"),
                ));
            }
        }
        match self.fixed_restart_interval {
            Some(0) => return Err(Error::param("fixed_restart_interval", "must be >= 1")),
            Some(_) if self.restart != Restart::None => {
                return Err(Error::InvalidConfig("fixed and adaptive restart are exclusive".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIters,
    /// A NaN or infinite gradient appeared; the offending record is kept.
    NonFinite,
}

/// Which sequence a method reports as its output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monitor {
    /// `F(y_k)`.
    Primary,
    /// `F(x_k)`.
    Secondary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub k: usize,
    /// `F(y_k)`; may be `+inf` for proximal methods whose `y_k` is infeasible.
    pub f_y: f64,
    /// `F(x_k)`.
    pub f_x: f64,
    /// `|grad f(x_k)|`, or the composite gradient mapping norm.
    pub grad_norm: f64,
    pub restart: bool,
    pub gd_gamma: bool,
    /// Over-relaxation weight after the step's policy update.
    pub sigma: f64,
    pub beta: f64,
    /// Effective over-relaxation, `sigma` times the schedule's `gamma`.
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub x: Vector,
    pub y: Vector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<Record>,
    pub status: Status,
    pub monitor: Monitor,
    /// Empty unless iterate recording was requested.
    pub iterates: Vec<Snapshot>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn f_y(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.f_y).collect()
    }

    pub fn f_x(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.f_x).collect()
    }

    /// The sequence the method reports as output.
    pub fn monitored(&self) -> Vec<f64> {
        match self.monitor {
            Monitor::Primary => self.f_y(),
            Monitor::Secondary => self.f_x(),
        }
    }

    pub fn restarts(&self) -> usize {
        self.records.iter().filter(|r| r.restart).count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{TRACE_HEADER}")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e}",
                r.k,
                r.f_y,
                r.f_x,
                r.grad_norm,
                u8::from(r.restart),
                u8::from(r.gd_gamma),
                r.sigma,
                r.beta,
                r.gamma
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// `(F - F_ref) / (F_0 - F_ref)`, floored at `1e-16`.
pub fn relative_gap(value: f64, initial: f64, reference: f64) -> f64 {
    let scale = initial - reference;
    if !(scale > 0.0) {
        return if value <= reference { 1e-16 } else { f64::INFINITY };
    }
    ((value - reference) / scale).max(1e-16)
}

/// First index whose relative gap is at most `tol`.
pub fn iterations_to_gap(values: &[f64], reference: f64, tol: f64) -> Option<usize> {
    let initial = *values.first()?;
    values.iter().position(|&v| relative_gap(v, initial, reference) <= tol)
}

/// True iff `<-grad, y_next - y> < 0`.
pub fn gr_condition(grad: &Vector, y_next: &Vector, y: &Vector) -> bool {
    -grad.dot(&(y_next - y)) < 0.0
}

/// True iff `<grad, grad_prev> < 0`.
pub fn gdgamma_condition(grad: &Vector, grad_prev: &Vector) -> bool {
    grad.dot(grad_prev) < 0.0
}

/// `grad - (x_next - z_next) / zeta`.
pub fn composite_gradient_mapping(grad: &Vector, x_next: &Vector, z_next: &Vector, zeta: f64) -> Vector {
    grad - (x_next - z_next) / zeta
}

/// `e * sqrt(2 / q)`, the restart interval minimizing the fixed-restart rate bound.
pub fn k_fixed(q: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::param("q", format!("must be positive, got {q}")));
    }
    Ok(std::f64::consts::E * (2.0 / q).sqrt())
}

/// `ceil(k_fixed(q))`.
pub fn fixed_restart_interval(q: f64) -> Result<usize> {
    Ok(k_fixed(q)?.ceil() as usize)
}

#[derive(Debug, Clone, Copy, Default)]
struct Events {
    restart: bool,
    gd_gamma: bool,
    beta: f64,
    gamma: f64,
}

struct Recorder {
    records: Vec<Record>,
    iterates: Vec<Snapshot>,
    keep_iterates: bool,
}

impl Recorder {
    fn new(cfg: &SolverConfig) -> Self {
        Self {
            records: Vec::with_capacity(cfg.max_iters + 1),
            iterates: Vec::new(),
            keep_iterates: cfg.record_iterates,
        }
    }

    /// Stores record `k`; returns the terminal status if the run must stop.
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        cfg: &SolverConfig,
        f_y: f64,
        f_x: f64,
        grad_norm: f64,
        ev: Events,
        sigma: f64,
        x: &Vector,
        y: &Vector,
    ) -> Option<Status> {
        let k = self.records.len();
        self.records.push(Record {
            k,
            f_y,
            f_x,
            grad_norm,
            restart: ev.restart,
            gd_gamma: ev.gd_gamma,
            sigma,
            beta: ev.beta,
            gamma: ev.gamma,
        });
        if self.keep_iterates {
            self.iterates.push(Snapshot {
                x: x.clone(),
                y: y.clone(),
            });
        }
        if !grad_norm.is_finite() || f_x.is_nan() || f_y.is_nan() {
            Some(Status::NonFinite)
        } else if grad_norm <= cfg.grad_tol {
            Some(Status::Converged)
        } else if k == cfg.max_iters {
            Some(Status::MaxIters)
        } else {
            None
        }
    }

    fn finish(self, status: Status, monitor: Monitor) -> Trace {
        Trace {
            records: self.records,
            status,
            monitor,
            iterates: self.iterates,
        }
    }
}

fn check_start(dim: usize, x0: &Vector, lipschitz: f64) -> Result<()> {
    if x0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x0.len(),
        });
    }
    if !(lipschitz > 0.0 && lipschitz.is_finite()) {
        return Err(Error::param(
            "lipschitz",
            format!("must be positive and finite, got {lipschitz}"),
        ));
    }
    Ok(())
}

fn sigma_bar(cfg: &SolverConfig) -> Option<f64> {
    match cfg.gamma_decrease {
        GammaDecrease::Off => None,
        GammaDecrease::On { sigma_bar } => Some(sigma_bar),
    }
}

/// The general smooth loop: any schedule with optional adaptive or fixed
/// restart and decreasing `gamma`.
pub fn smooth_run(oracle: &dyn SmoothOracle, cfg: &SolverConfig, x0: &Vector) -> Result<Trace> {
    cfg.validate()?;
    let lip = oracle.lipschitz();
    check_start(oracle.dim(), x0, lip)?;
    let step = coefficients(&cfg.schedule, &ScheduleState::default())?.0.alpha / lip;
    let sigma_bar = sigma_bar(cfg);
    let mut schedule = Schedule::new(cfg.schedule)?;
    let mut rec = Recorder::new(cfg);

    let mut x = x0.clone();
    let mut y = x0.clone();
    let mut f_y = f64::NAN;
    let mut g_prev: Option<Vector> = None;
    let mut sigma = 1.0;
    let mut ev = Events::default();

    for k in 0.. {
        let (f_x, g) = oracle.value_and_gradient(&x);
        if k == 0 {
            f_y = f_x;
        }
        if let Some(status) = rec.push(cfg, f_y, f_x, g.norm(), ev, sigma, &x, &y) {
            return Ok(rec.finish(status, Monitor::Primary));
        }

        let y_next = &x - step * &g;
        let f_y_next = oracle.value(&y_next);
        let mut restart = false;
        let mut gd_gamma = false;

        if let Some(m) = cfg.fixed_restart_interval {
            restart = k > 0 && k % m == 0;
        }
        match cfg.restart {
            Restart::Function if f_y_next > f_y => {
                // Reject the increasing step and restart from y_k.
                schedule.restart();
                sigma = 1.0;
                g_prev = None;
                x = y.clone();
                ev = Events {
                    restart: true,
                    ..Events::default()
                };
                continue;
            }
            Restart::Gradient => restart = gr_condition(&g, &y_next, &y),
            _ => {}
        }
        if restart {
            schedule.restart();
            sigma = 1.0;
        } else if let (Some(sb), Some(gp)) = (sigma_bar, &g_prev) {
            if gdgamma_condition(&g, gp) {
                sigma *= sb;
                gd_gamma = true;
            }
        }

        let c = schedule.next_coefficients();
        let gamma = sigma * c.gamma;
        let x_next = &y_next + c.beta * (&y_next - &y) + gamma * (&y_next - &x);
        x = x_next;
        y = y_next;
        f_y = f_y_next;
        g_prev = Some(g);
        ev = Events {
            restart,
            gd_gamma,
            beta: c.beta,
            gamma,
        };
    }
    unreachable!("the loop returns once max_iters is reached")
}

/// Plain accelerated iteration with the given schedule for `iters` steps.
pub fn afm_run(oracle: &dyn SmoothOracle, schedule: ScheduleKind, x0: &Vector, iters: usize) -> Result<Trace> {
    if iters == 0 {
        return Err(Error::param("iters", "must be >= 1"));
    }
    smooth_run(oracle, &SolverConfig::new(schedule, iters), x0)
}

/// OGM' with adaptive restart and optional decreasing `gamma`.
pub fn ogm_restart_run(oracle: &dyn SmoothOracle, cfg: &SolverConfig, x0: &Vector) -> Result<Trace> {
    if cfg.schedule != ScheduleKind::OgmPrime {
        return Err(Error::InvalidConfig(format!(
            "expected the ogmp schedule, got `{}`",
            cfg.schedule
        )));
    }
    smooth_run(oracle, cfg, x0)
}

/// Restarts `schedule` every `interval` iterations, `outer` times in total.
/// Outer iteration `j` starts from `x_{j * interval}`; the step leaving that
/// point is the restarted one, so record `j * interval + 1` carries the flag.
pub fn fixed_restart_run(
    oracle: &dyn SmoothOracle,
    schedule: ScheduleKind,
    x0: &Vector,
    interval: usize,
    outer: usize,
) -> Result<Trace> {
    if interval == 0 || outer == 0 {
        return Err(Error::param("interval", "interval and outer count must be >= 1"));
    }
    let cfg = SolverConfig::new(schedule, interval * outer).with_fixed_restart(interval);
    smooth_run(oracle, &cfg, x0)
}

fn validate_composite(problem: &CompositeProblem, cfg: &SolverConfig, x0: &Vector) -> Result<f64> {
    cfg.schedule.validate()?;
    cfg.validate_common()?;
    if cfg.fixed_restart_interval.is_some() {
        return Err(Error::InvalidConfig(
            "fixed restart is only supported for smooth runs".into(),
        ));
    }
    let lip = problem.smooth.lipschitz();
    check_start(problem.dim(), x0, lip)?;
    Ok(lip)
}

/// Proximal OGM' with restart and decreasing `gamma`. Reports `F(x_k)`.
///
/// `x0` should be feasible; the loop starts with `x_0 = u_0 = z_0 = y_0`.
pub fn pogm_restart_run(problem: &CompositeProblem, cfg: &SolverConfig, x0: &Vector) -> Result<Trace> {
    if cfg.schedule != ScheduleKind::OgmPrime {
        return Err(Error::InvalidConfig(format!(
            "expected the ogmp schedule, got `{}`",
            cfg.schedule
        )));
    }
    let lip = validate_composite(problem, cfg, x0)?;
    let step = 1.0 / lip;
    let sigma_bar = sigma_bar(cfg);
    let mut schedule = Schedule::new(cfg.schedule)?;
    let mut rec = Recorder::new(cfg);

    let mut x = x0.clone();
    let mut u = x0.clone();
    let mut z = x0.clone();
    let mut y = x0.clone();
    let mut zeta = step;
    let mut f_x = problem.objective(&x);
    let mut f_y = f_x;
    let mut big_g_prev: Option<Vector> = None;
    let mut sigma = 1.0;
    let mut ev = Events::default();

    loop {
        let g = problem.smooth.gradient(&x);
        let u_next = &x - step * &g;
        let c = schedule.next_coefficients();
        let gamma = sigma * c.gamma;
        let mut z_next = &u_next + c.beta * (&u_next - &u) + gamma * (&u_next - &x);
        if c.beta != 0.0 {
            z_next -= (c.beta * step / zeta) * (&x - &z);
        }
        let zeta_next = step * (1.0 + c.beta + gamma);
        let x_next = problem.nonsmooth.prox(&z_next, zeta_next);
        let big_g = composite_gradient_mapping(&g, &x_next, &z_next, zeta_next);

        if let Some(status) = rec.push(cfg, f_y, f_x, big_g.norm(), ev, sigma, &x, &y) {
            return Ok(rec.finish(status, Monitor::Secondary));
        }

        let y_next = &x - step * &big_g;
        let f_x_next = problem.objective(&x_next);
        let mut restart = false;
        let mut gd_gamma = false;
        match cfg.restart {
            Restart::Function if f_x_next > f_x => {
                // Reject the increasing step and restart from x_k.
                schedule.restart();
                sigma = 1.0;
                big_g_prev = None;
                u = x.clone();
                z = x.clone();
                y = x.clone();
                f_y = f_x;
                zeta = step;
                ev = Events {
                    restart: true,
                    ..Events::default()
                };
                continue;
            }
            Restart::Gradient => restart = gr_condition(&big_g, &y_next, &y),
            _ => {}
        }
        if restart {
            schedule.restart();
            sigma = 1.0;
        } else if let (Some(sb), Some(gp)) = (sigma_bar, &big_g_prev) {
            if gdgamma_condition(&big_g, gp) {
                sigma *= sb;
                gd_gamma = true;
            }
        }

        f_y = problem.objective(&y_next);
        x = x_next;
        u = u_next;
        z = z_next;
        y = y_next;
        zeta = zeta_next;
        f_x = f_x_next;
        big_g_prev = Some(big_g);
        ev = Events {
            restart,
            gd_gamma,
            beta: c.beta,
            gamma,
        };
    }
}

/// ISTA (`gm` schedule) or FISTA (`fgm` schedule) with optional restart.
/// Reports `F(y_k)`, the prox outputs.
pub fn prox_gradient_run(problem: &CompositeProblem, cfg: &SolverConfig, x0: &Vector) -> Result<Trace> {
    if !matches!(cfg.schedule, ScheduleKind::Gm | ScheduleKind::Fgm) {
        return Err(Error::InvalidConfig(format!(
            "proximal gradient runs use the gm or fgm schedule, got `{}`",
            cfg.schedule
        )));
    }
    if cfg.gamma_decrease != GammaDecrease::Off {
        return Err(Error::InvalidConfig(
            "proximal gradient runs have no over-relaxation".into(),
        ));
    }
    if cfg.restart != Restart::None && cfg.schedule == ScheduleKind::Gm {
        return Err(Error::InvalidConfig(
            "the gm schedule has no momentum to restart".into(),
        ));
    }
    let lip = validate_composite(problem, cfg, x0)?;
    let step = 1.0 / lip;
    let mut schedule = Schedule::new(cfg.schedule)?;
    let mut rec = Recorder::new(cfg);

    let mut x = x0.clone();
    let mut y = x0.clone();
    let mut f_y = problem.objective(&y);
    let mut ev = Events::default();
    let mut first = true;

    loop {
        let g = problem.smooth.gradient(&x);
        let y_next = problem.nonsmooth.prox(&(&x - step * &g), step);
        let big_g = (&x - &y_next) * lip;
        let f_x = if first { f_y } else { problem.objective(&x) };
        first = false;

        if let Some(status) = rec.push(cfg, f_y, f_x, big_g.norm(), ev, 1.0, &x, &y) {
            return Ok(rec.finish(status, Monitor::Primary));
        }

        let f_y_next = problem.objective(&y_next);
        let mut restart = false;
        match cfg.restart {
            Restart::Function if f_y_next > f_y => {
                schedule.restart();
                x = y.clone();
                ev = Events {
                    restart: true,
                    ..Events::default()
                };
                continue;
            }
            Restart::Gradient => restart = gr_condition(&big_g, &y_next, &y),
            _ => {}
        }
        if restart {
            schedule.restart();
        }
        let c = schedule.next_coefficients();
        x = &y_next + c.beta * (&y_next - &y);
        y = y_next;
        f_y = f_y_next;
        ev = Events {
            restart,
            gd_gamma: false,
            beta: c.beta,
            gamma: 0.0,
        };
    }
}

/// Best objective value found by a long function-restarted proximal OGM' run.
pub fn reference_value(problem: &CompositeProblem, x0: &Vector, iters: usize) -> Result<f64> {
    let cfg = SolverConfig::new(ScheduleKind::OgmPrime, iters).with_restart(Restart::Function);
    let trace = pogm_restart_run(problem, &cfg, x0)?;
    Ok(trace.f_x().into_iter().fold(f64::INFINITY, f64::min))
}
