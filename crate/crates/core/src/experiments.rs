//! The experiment catalog behind the `ogmr` binary: problem families,
//! solver-name grammar, trace and summary output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::analysis::{rho_curve, table3_summary};
use crate::engine::{
    iterations_to_gap, pogm_restart_run, prox_gradient_run, reference_value, relative_gap, smooth_run, GammaDecrease,
    Restart, SolverConfig, Trace, DEFAULT_SIGMA_BAR,
};
use crate::oracles::{
    fixed_quadratic_case2, gen_boxqp_scaled, gen_lasso, gen_logsumexp, gen_quadratic, CompositeProblem, SmoothOracle,
};
use crate::schedules::{coefficients, Coefficients, ScheduleKind, ScheduleState};
use crate::{Error, Result, Vector};

/// Smooth method names accepted in solver lists.
pub const SMOOTH_METHODS: [&str; 8] = ["gm", "gm-q", "fgm", "fgm-q", "fgmp-q", "ogm", "ogmp", "ogm-q"];
/// Proximal method names accepted in solver lists.
pub const PROX_METHODS: [&str; 3] = ["ista", "fista", "pogm"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Experiment {
    Case1,
    Case2,
    LogSumExp,
    Lasso,
    BoxQp,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Case1,
        Experiment::Case2,
        Experiment::LogSumExp,
        Experiment::Lasso,
        Experiment::BoxQp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Case1 => "case1",
            Experiment::Case2 => "case2",
            Experiment::LogSumExp => "logsumexp",
            Experiment::Lasso => "lasso",
            Experiment::BoxQp => "boxqp",
        }
    }

    fn is_composite(self) -> bool {
        matches!(self, Experiment::Lasso | Experiment::BoxQp)
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExperiment(s.to_string()))
    }
}

/// Restart suffix of a solver name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartChoice {
    None,
    Function,
    Gradient,
    /// Restart every `ceil(e sqrt(2/q))` iterations.
    Fixed,
}

/// A parsed solver name: `method[+fr|+gr|+fixed][@sigma_bar]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSpec {
    pub method: String,
    pub restart: RestartChoice,
    /// Explicit decreasing-`gamma` factor.
    pub sigma_bar: Option<f64>,
}

impl SolverSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let unknown = || Error::UnknownSolver(text.to_string());
        let (head, sigma_bar) = match text.split_once('@') {
            Some((h, s)) => (h, Some(s.parse::<f64>().map_err(|_| unknown())?)),
            None => (text, None),
        };
        let (method, restart) = match head.split_once('+') {
            Some((m, "fr")) => (m, RestartChoice::Function),
            Some((m, "gr")) => (m, RestartChoice::Gradient),
            Some((m, "fixed")) => (m, RestartChoice::Fixed),
            Some(_) => return Err(unknown()),
            None => (head, RestartChoice::None),
        };
        if !SMOOTH_METHODS.contains(&method) && !PROX_METHODS.contains(&method) {
            return Err(unknown());
        }
        if let Some(sb) = sigma_bar {
            if !(0.0..=1.0).contains(&sb) {
                return Err(Error::param("sigma_bar", format!("must lie in [0, 1], got {sb}")));
            }
        }
        Ok(Self {
            method: method.to_string(),
            restart,
            sigma_bar,
        })
    }

    pub fn is_proximal(&self) -> bool {
        PROX_METHODS.contains(&self.method.as_str())
    }

    /// File-name-safe label.
    pub fn label(&self) -> String {
        let mut s = self.method.clone();
        match self.restart {
            RestartChoice::None => {}
            RestartChoice::Function => s.push_str("_fr"),
            RestartChoice::Gradient => s.push_str("_gr"),
            RestartChoice::Fixed => s.push_str("_fixed"),
        }
        if let Some(sb) = self.sigma_bar {
            let _ = write!(s, "_s{sb}");
        }
        s
    }
}

impl std::fmt::Display for SolverSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.method)?;
        match self.restart {
            RestartChoice::None => {}
            RestartChoice::Function => f.write_str("+fr")?,
            RestartChoice::Gradient => f.write_str("+gr")?,
            RestartChoice::Fixed => f.write_str("+fixed")?,
        }
        if let Some(sb) = self.sigma_bar {
            write!(f, "@{sb}")?;
        }
        Ok(())
    }
}

/// Everything needed to run one experiment family.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub d: usize,
    pub q: f64,
    pub m: usize,
    pub s: usize,
    pub tau: f64,
    pub eta: Vec<f64>,
    pub cond: f64,
    pub noise_var: f64,
    /// Multiplier of the box-QP linear term.
    pub p_scale: f64,
    pub solvers: Vec<SolverSpec>,
    pub iters: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Default decreasing-`gamma` factor for restarted ogmp/pogm solvers.
    pub sigma_bar: f64,
    /// Restart applied to solvers listed without a suffix.
    pub restart: Option<Restart>,
    /// Relative-gap level reported in the summary.
    pub tol: f64,
    /// Iterations of the reference run for problems without a closed-form optimum.
    pub ref_iters: usize,
}

fn solvers(names: &[&str]) -> Vec<SolverSpec> {
    names
        .iter()
        .map(|n| SolverSpec::parse(n).expect("static solver name"))
        .collect()
}

impl ExperimentSpec {
    pub fn defaults(experiment: Experiment) -> Self {
        let mut spec = Self {
            experiment,
            d: 500,
            q: 1e-4,
            m: 100,
            s: 100,
            tau: 2.0,
            eta: vec![1.0, 10.0],
            cond: 1e7,
            noise_var: 0.1,
            p_scale: 0.01,
            solvers: Vec::new(),
            iters: 1000,
            seed: 0,
            out: PathBuf::from("out"),
            sigma_bar: DEFAULT_SIGMA_BAR,
            restart: None,
            tol: 1e-8,
            ref_iters: 10_000,
        };
        match experiment {
            Experiment::Case1 => {
                spec.iters = 4000;
                spec.solvers = solvers(&[
                    "gm", "fgm", "ogmp", "fgm-q", "ogm-q", "fgm+fr", "fgm+gr", "ogmp+fr", "ogmp+gr",
                ]);
            }
            Experiment::Case2 => {
                spec.d = 2;
                spec.q = 0.01;
                spec.iters = 200;
                spec.solvers = solvers(&["gm", "fgm+gr", "ogmp+gr@1", "ogmp+gr@0.8", "ogmp+gr@0.5"]);
            }
            Experiment::LogSumExp => {
                spec.m = 100;
                spec.d = 20;
                spec.iters = 2000;
                spec.solvers = solvers(&["gm", "fgm", "fgm+fr", "fgm+gr", "ogmp", "ogmp+fr", "ogmp+gr"]);
            }
            Experiment::Lasso => {
                spec.m = 500;
                spec.d = 2000;
                spec.s = 100;
                spec.tau = 2.0;
                spec.noise_var = 0.1;
                spec.iters = 1000;
                spec.solvers = solvers(&["ista", "fista", "fista+fr", "fista+gr", "pogm", "pogm+fr", "pogm+gr"]);
            }
            Experiment::BoxQp => {
                spec.d = 500;
                spec.cond = 1e7;
                spec.iters = 3000;
                spec.solvers = solvers(&["ista", "fista", "fista+fr", "fista+gr", "pogm", "pogm+fr", "pogm+gr"]);
            }
        }
        spec.ref_iters = 10 * spec.iters;
        spec
    }

    /// Applies one `key=value` setting from a config file or flag.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &'static str, v: &str) -> Result<T> {
            v.trim()
                .parse()
                .map_err(|_| Error::param(key, format!("cannot parse `{v}`")))
        }
        match key.trim() {
            "d" => self.d = num("d", value)?,
            "q" => self.q = num("q", value)?,
            "m" => self.m = num("m", value)?,
            "s" => self.s = num("s", value)?,
            "tau" => self.tau = num("tau", value)?,
            "eta" => {
                self.eta = value.split(',').map(|v| num("eta", v)).collect::<Result<_>>()?;
            }
            "cond" => self.cond = num("cond", value)?,
            "noise_var" => self.noise_var = num("noise_var", value)?,
            "p_scale" => self.p_scale = num("p_scale", value)?,
            "iters" => {
                self.iters = num("iters", value)?;
            }
            "ref_iters" => self.ref_iters = num("ref_iters", value)?,
            "seed" => self.seed = num("seed", value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "sigma_bar" => self.sigma_bar = num("sigma_bar", value)?,
            "tol" => self.tol = num("tol", value)?,
            "restart" => self.restart = Some(parse_restart(value.trim())?),
            "solvers" => {
                self.solvers = value
                    .split(',')
                    .map(|s| SolverSpec::parse(s.trim()))
                    .collect::<Result<_>>()?;
            }
            other => return Err(Error::InvalidConfig(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Reads a plain `key=value` file; `#` starts a comment.
    pub fn apply_config_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)?;
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Checks parameters and solver/problem compatibility.
    pub fn validate(&self) -> Result<()> {
        if self.iters == 0 {
            return Err(Error::param("iters", "must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.sigma_bar) {
            return Err(Error::param(
                "sigma_bar",
                format!("must lie in [0, 1], got {}", self.sigma_bar),
            ));
        }
        if self.solvers.is_empty() {
            return Err(Error::InvalidConfig("empty solver list".into()));
        }
        for s in &self.solvers {
            if self.experiment.is_composite() && !s.is_proximal() {
                return Err(Error::InvalidConfig(format!(
                    "`{s}` is not a proximal method; {} needs one of {}",
                    self.experiment.name(),
                    PROX_METHODS.join(", ")
                )));
            }
        }
        Ok(())
    }
}

pub fn parse_restart(s: &str) -> Result<Restart> {
    match s {
        "none" => Ok(Restart::None),
        "fr" => Ok(Restart::Function),
        "gr" => Ok(Restart::Gradient),
        other => Err(Error::InvalidConfig(format!(
            "unknown restart `{other}` (none, fr, gr)"
        ))),
    }
}

/// One problem instance of an experiment.
struct Instance {
    label: String,
    problem: CompositeProblem,
    /// Present for smooth problems, which also admit the smooth methods.
    smooth: Option<Arc<dyn SmoothOracle>>,
    x0: Vector,
    /// `mu / L` when known.
    q: Option<f64>,
}

fn instances(spec: &ExperimentSpec) -> Result<Vec<Instance>> {
    let seed = spec.seed;
    let smooth_instance = |label: String, oracle: Arc<dyn SmoothOracle>, x0: Vector, reference: Option<f64>| {
        let q = oracle.strong_convexity().map(|mu| mu / oracle.lipschitz());
        let mut problem = CompositeProblem::smooth_only(oracle.clone());
        problem.reference = reference;
        Instance {
            label,
            problem,
            smooth: Some(oracle),
            x0,
            q,
        }
    };
    let out = match spec.experiment {
        Experiment::Case1 => {
            let p = gen_quadratic(spec.d, spec.q, seed)?;
            let f_star = p.optimal_value();
            vec![smooth_instance(
                "quad".into(),
                Arc::new(p),
                Vector::zeros(spec.d),
                f_star,
            )]
        }
        Experiment::Case2 => {
            let p = fixed_quadratic_case2();
            let x0 = Vector::from_vec(vec![0.2, 1.0]);
            vec![smooth_instance("quad".into(), Arc::new(p), x0, Some(0.0))]
        }
        Experiment::LogSumExp => spec
            .eta
            .iter()
            .map(|&eta| {
                let p = gen_logsumexp(spec.m, spec.d, eta, seed)?;
                Ok(smooth_instance(
                    format!("eta{eta}"),
                    Arc::new(p),
                    Vector::zeros(spec.d),
                    None,
                ))
            })
            .collect::<Result<_>>()?,
        Experiment::Lasso => {
            let inst = gen_lasso(spec.m, spec.d, spec.s, spec.tau, spec.noise_var, seed)?;
            vec![Instance {
                label: "lasso".into(),
                problem: inst.problem,
                smooth: None,
                x0: Vector::zeros(spec.d),
                q: None,
            }]
        }
        Experiment::BoxQp => {
            let problem = gen_boxqp_scaled(spec.d, spec.cond, spec.p_scale, seed)?;
            vec![Instance {
                label: "boxqp".into(),
                problem,
                smooth: None,
                x0: Vector::zeros(spec.d),
                q: None,
            }]
        }
    };
    Ok(out)
}

fn solver_config(spec: &ExperimentSpec, solver: &SolverSpec, q: Option<f64>) -> Result<SolverConfig> {
    solver_config_for(solver, spec.iters, q, spec.restart, spec.sigma_bar)
}

/// Builds the configuration for `solver`. `default_restart` applies to
/// unsuffixed momentum methods and `default_sigma_bar` to restarted
/// ogmp/pogm without an explicit `@sigma_bar`.
pub fn solver_config_for(
    solver: &SolverSpec,
    iters: usize,
    q: Option<f64>,
    default_restart: Option<Restart>,
    default_sigma_bar: f64,
) -> Result<SolverConfig> {
    let need_q = || {
        q.ok_or_else(|| {
            Error::InvalidConfig(format!(
                "`{solver}` needs a known condition ratio, the problem has none"
            ))
        })
    };
    let kind = match solver.method.as_str() {
        "ista" => ScheduleKind::Gm,
        "fista" => ScheduleKind::Fgm,
        "pogm" => ScheduleKind::OgmPrime,
        "ogm" => ScheduleKind::Ogm { n: iters },
        m if m.ends_with("-q") => ScheduleKind::from_name(m, Some(need_q()?), None)?,
        m => ScheduleKind::from_name(m, None, None)?,
    };
    let mut cfg = SolverConfig::new(kind, iters);
    let restart = match solver.restart {
        RestartChoice::Function => Restart::Function,
        RestartChoice::Gradient => Restart::Gradient,
        RestartChoice::Fixed => {
            cfg = cfg.with_fixed_restart(crate::engine::fixed_restart_interval(need_q()?)?);
            Restart::None
        }
        RestartChoice::None if kind.is_momentum_sequence() && solver.method != "ista" => {
            default_restart.unwrap_or(Restart::None)
        }
        RestartChoice::None => Restart::None,
    };
    cfg = cfg.with_restart(restart);
    let over_relaxed = matches!(kind, ScheduleKind::OgmPrime);
    match solver.sigma_bar {
        Some(sb) => cfg = cfg.with_gamma_decrease(sb),
        None if over_relaxed && restart != Restart::None => cfg = cfg.with_gamma_decrease(default_sigma_bar),
        None => {}
    }
    if cfg.gamma_decrease != GammaDecrease::Off && !kind.has_over_relaxation() {
        return Err(Error::InvalidConfig(format!(
            "`{solver}`: decreasing gamma needs ogmp, ogm-q or pogm"
        )));
    }
    Ok(cfg)
}

/// Runs `solver` on a problem instance.
fn run_solver(spec: &ExperimentSpec, inst: &Instance, solver: &SolverSpec) -> Result<Trace> {
    let cfg = solver_config(spec, solver, inst.q)?;
    dispatch_solver(solver, &cfg, &inst.problem, inst.smooth.as_deref(), &inst.x0)
}

/// Runs `cfg` with the loop that `solver.method` names. Smooth methods need
/// `smooth`, the proximal ones use `problem`.
pub fn dispatch_solver(
    solver: &SolverSpec,
    cfg: &SolverConfig,
    problem: &CompositeProblem,
    smooth: Option<&dyn SmoothOracle>,
    x0: &Vector,
) -> Result<Trace> {
    match solver.method.as_str() {
        "ista" | "fista" => prox_gradient_run(problem, cfg, x0),
        "pogm" => pogm_restart_run(problem, cfg, x0),
        _ => {
            let oracle = smooth.ok_or_else(|| Error::InvalidConfig(format!("`{solver}` needs a smooth problem")))?;
            smooth_run(oracle, cfg, x0)
        }
    }
}

/// One summary row.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub problem: String,
    pub solver: String,
    pub records: usize,
    pub restarts: usize,
    /// First `k` whose monitored relative gap is at most the tolerance.
    pub iters_to_tol: Option<usize>,
    pub final_rel_gap: f64,
    /// Same for the secondary sequence `F(x_k)`.
    pub iters_to_tol_x: Option<usize>,
    pub final_rel_gap_x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<SummaryRow>,
    /// `(problem label, reference optimum)`.
    pub references: Vec<(String, f64)>,
    pub files: Vec<PathBuf>,
}

pub const SUMMARY_HEADER: &str =
    "problem,solver,records,restarts,iters_to_tol,final_rel_gap,iters_to_tol_x,final_rel_gap_x";

fn summarize(problem: &str, solver: &SolverSpec, trace: &Trace, f0: f64, f_ref: f64, tol: f64) -> SummaryRow {
    let monitored = trace.monitored();
    let fx = trace.f_x();
    SummaryRow {
        problem: problem.to_string(),
        solver: solver.to_string(),
        records: trace.len(),
        restarts: trace.restarts(),
        iters_to_tol: iterations_to_gap(&monitored, f_ref, tol),
        final_rel_gap: relative_gap(*monitored.last().unwrap_or(&f0), f0, f_ref),
        iters_to_tol_x: iterations_to_gap(&fx, f_ref, tol),
        final_rel_gap_x: relative_gap(*fx.last().unwrap_or(&f0), f0, f_ref),
    }
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let opt = |v: Option<usize>| v.map_or_else(|| "NA".to_string(), |k| k.to_string());
    let mut s = String::new();
    let _ = writeln!(s, "{SUMMARY_HEADER}");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{:.16e},{},{:.16e}",
            r.problem,
            r.solver,
            r.records,
            r.restarts,
            opt(r.iters_to_tol),
            r.final_rel_gap,
            opt(r.iters_to_tol_x),
            r.final_rel_gap_x
        );
    }
    s
}

/// Runs every (solver, problem) pair, writing one trace CSV per pair plus
/// `summary.csv` and `reference.csv` under `spec.out`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    let mut insts = instances(spec)?;
    for inst in &mut insts {
        if inst.problem.reference.is_none() {
            inst.problem.reference = Some(reference_value(&inst.problem, &inst.x0, spec.ref_iters.max(1))?);
        }
    }
    let pairs: Vec<(usize, usize)> = (0..insts.len())
        .flat_map(|i| (0..spec.solvers.len()).map(move |j| (i, j)))
        .collect();
    let traces: Vec<Trace> = pairs
        .par_iter()
        .map(|&(i, j)| run_solver(spec, &insts[i], &spec.solvers[j]))
        .collect::<Result<_>>()?;

    fs::create_dir_all(&spec.out)?;
    let mut files = Vec::new();
    let mut rows = Vec::new();
    let mut seen = BTreeMap::new();
    for (&(i, j), trace) in pairs.iter().zip(&traces) {
        let inst = &insts[i];
        let solver = &spec.solvers[j];
        let base = format!("{}_{}_{}", spec.experiment.name(), inst.label, solver.label());
        let count = seen.entry(base.clone()).or_insert(0usize);
        *count += 1;
        let name = if *count == 1 {
            format!("{base}.csv")
        } else {
            format!("{base}_{count}.csv")
        };
        let path = spec.out.join(name);
        fs::write(&path, trace.to_csv())?;
        files.push(path);
        let f0 = inst.problem.objective(&inst.x0);
        let f_ref = inst.problem.reference.expect("set above");
        rows.push(summarize(&inst.label, solver, trace, f0, f_ref, spec.tol));
    }
    let summary_path = spec.out.join(format!("{}_summary.csv", spec.experiment.name()));
    fs::write(&summary_path, summary_csv(&rows))?;
    files.push(summary_path);

    let references: Vec<(String, f64)> = insts
        .iter()
        .map(|i| (i.label.clone(), i.problem.reference.expect("set above")))
        .collect();
    let mut ref_csv = String::from("problem,f_ref\n");
    for (label, v) in &references {
        let _ = writeln!(ref_csv, "{label},{v:.16e}");
    }
    let ref_path = spec.out.join(format!("{}_reference.csv", spec.experiment.name()));
    fs::write(&ref_path, ref_csv)?;
    files.push(ref_path);

    Ok(ExperimentOutput {
        rows,
        references,
        files,
    })
}

/// The four tuned-coefficient rows as CSV: `method,alpha,beta,gamma,rho`
/// with `alpha` in units of `1/L`.
pub fn table3_csv(q: f64) -> Result<String> {
    let mut s = String::from("method,alpha,beta,gamma,rho\n");
    for r in table3_summary(q)? {
        let _ = writeln!(
            s,
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.method, r.alpha, r.beta, r.gamma, r.rho
        );
    }
    Ok(s)
}

/// Coefficients of a named constant schedule at condition ratio `q`.
pub fn named_coefficients(method: &str, q: f64) -> Result<Coefficients> {
    let kind = ScheduleKind::from_name(method, Some(q), None)?;
    if kind.is_momentum_sequence() {
        return Err(Error::InvalidConfig(format!("`{method}` has no constant coefficients")));
    }
    Ok(coefficients(&kind, &ScheduleState::default())?.0)
}

/// Root magnitudes over `n` equally spaced `lambda` in `[q, 1]`:
/// `method,lambda,r1_abs,r2_abs,rho`.
pub fn rho_curve_csv(q: f64, method: &str, coeffs: Coefficients, n: usize) -> Result<String> {
    let mut s = String::from("method,lambda,r1_abs,r2_abs,rho\n");
    for p in rho_curve(q, coeffs, n)? {
        let _ = writeln!(
            s,
            "{method},{:.16e},{:.16e},{:.16e},{:.16e}",
            p.lambda, p.r1_abs, p.r2_abs, p.rho
        );
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_grammar() {
        let s = SolverSpec::parse("ogmp+gr@0.5").unwrap();
        assert_eq!(s.method, "ogmp");
        assert_eq!(s.restart, RestartChoice::Gradient);
        assert_eq!(s.sigma_bar, Some(0.5));
        assert_eq!(s.to_string(), "ogmp+gr@0.5");
        assert_eq!(SolverSpec::parse("fista+fr").unwrap().restart, RestartChoice::Function);
        assert_eq!(SolverSpec::parse("fgm+fixed").unwrap().restart, RestartChoice::Fixed);
        for bad in ["nope", "fgm+xr", "ogmp@x", "ogmp+gr@2", ""] {
            assert!(SolverSpec::parse(bad).is_err(), "{bad}");
        }
        assert!(matches!(SolverSpec::parse("adam"), Err(Error::UnknownSolver(_))));
    }

    #[test]
    fn experiment_names() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!(matches!(
            "case3".parse::<Experiment>(),
            Err(Error::UnknownExperiment(_))
        ));
    }

    #[test]
    fn defaults_match_catalog() {
        let c1 = ExperimentSpec::defaults(Experiment::Case1);
        assert_eq!((c1.d, c1.q), (500, 1e-4));
        let names: Vec<String> = c1.solvers.iter().map(|s| s.to_string()).collect();
        assert_eq!(
            names,
            ["gm", "fgm", "ogmp", "fgm-q", "ogm-q", "fgm+fr", "fgm+gr", "ogmp+fr", "ogmp+gr"]
        );
        let c2 = ExperimentSpec::defaults(Experiment::Case2);
        let bars: Vec<Option<f64>> = c2.solvers.iter().map(|s| s.sigma_bar).collect();
        assert_eq!(bars, [None, None, Some(1.0), Some(0.8), Some(0.5)]);
        let lse = ExperimentSpec::defaults(Experiment::LogSumExp);
        assert_eq!((lse.m, lse.d, lse.eta.clone()), (100, 20, vec![1.0, 10.0]));
        let lasso = ExperimentSpec::defaults(Experiment::Lasso);
        assert_eq!((lasso.m, lasso.d, lasso.s, lasso.tau), (500, 2000, 100, 2.0));
    }

    #[test]
    fn composite_problems_need_proximal_solvers() {
        let mut spec = ExperimentSpec::defaults(Experiment::BoxQp);
        spec.set("solvers", "fgm").unwrap();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn config_keys() {
        let mut spec = ExperimentSpec::defaults(Experiment::Case1);
        spec.set("eta", "1, 2.5").unwrap();
        spec.set("restart", "gr").unwrap();
        assert_eq!(spec.eta, vec![1.0, 2.5]);
        assert_eq!(spec.restart, Some(Restart::Gradient));
        assert!(spec.set("bogus", "1").is_err());
        assert!(spec.set("iters", "many").is_err());
    }

    #[test]
    fn table3_rows() {
        let csv = table3_csv(0.1).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        let ogm: Vec<f64> = lines[4].split(',').skip(1).map(|v| v.parse().unwrap()).collect();
        for (a, b) in ogm.iter().zip([1.0, 0.4, 0.6, 0.6]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn named_constant_coefficients() {
        let c = named_coefficients("ogm-q", 0.1).unwrap();
        assert!((c.beta - 0.4).abs() < 1e-12 && (c.gamma - 0.6).abs() < 1e-12);
        assert!(named_coefficients("fgm", 0.1).is_err());
    }
}
