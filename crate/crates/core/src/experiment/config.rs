//! Flat `key = value` experiment files.
//!
//! One key per line, `#` starts a comment, blank lines are ignored. Keys may
//! appear at most once; unknown keys are rejected.
//!
//! ```text
//! # required
//! problem  = problem1        # problem1 | deb2dk | uf4 | uf7
//! n_agents = 100
//! k_max    = 500
//! seed     = 42
//! # optional (defaults shown)
//! dim             = 2        # problem default: 2 for problem1/deb2dk, 5 for uf4/uf7
//! lambda          = 1
//! sigma           = 4
//! dt              = 0.01
//! alpha           = 100000
//! p               = inf      # or a number >= 1
//! mode            = plain    # plain | greedy
//! runs            = 1
//! metrics         = err2,igd # default: err2,igd when d <= 3, else igd; `none` disables
//! out             = out
//! parallel_runs   = true
//! parallel_agents = false
//! oracle_budget   = 10000
//! front_points    = 1000     # analytic fronts (uf4, uf7)
//! reference_points = 500     # oracle-derived fronts (problem1, deb2dk)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::problems::{Problem, MIN_ORACLE_BUDGET};
use crate::scalarization::ScalarizationOrder;
use crate::solver::{SolverConfig, UpdateMode};

use super::{run_seed, SEED_MIX};

/// Which metrics a run records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricSelection {
    pub err2: bool,
    pub igd: bool,
}

impl MetricSelection {
    fn parse(s: &str) -> std::result::Result<Self, String> {
        let mut sel = Self {
            err2: false,
            igd: false,
        };
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") {
            return Ok(sel);
        }
        for part in s.split(',').map(str::trim) {
            match part.to_ascii_lowercase().as_str() {
                "err2" => sel.err2 = true,
                "igd" => sel.igd = true,
                other => return Err(format!("unknown metric `{other}` (expected err2, igd or none)")),
            }
        }
        Ok(sel)
    }

    fn render(self) -> String {
        match (self.err2, self.igd) {
            (true, true) => "err2,igd".into(),
            (true, false) => "err2".into(),
            (false, true) => "igd".into(),
            (false, false) => "none".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: String,
    pub dim: usize,
    pub solver: SolverConfig,
    pub runs: usize,
    pub metrics: MetricSelection,
    pub out_dir: PathBuf,
    pub parallel_runs: bool,
    pub oracle_budget: usize,
    pub front_points: usize,
    pub reference_points: usize,
}

const KEYS: &[&str] = &[
    "problem",
    "dim",
    "n_agents",
    "k_max",
    "seed",
    "lambda",
    "sigma",
    "dt",
    "alpha",
    "p",
    "mode",
    "runs",
    "metrics",
    "out",
    "parallel_runs",
    "parallel_agents",
    "oracle_budget",
    "front_points",
    "reference_points",
];

struct Entry {
    line: usize,
    value: String,
}

fn err(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

struct Entries(HashMap<&'static str, Entry>);

impl Entries {
    fn line(&self, key: &str) -> usize {
        self.0.get(key).map_or(0, |e| e.line)
    }

    fn get<T: FromStr>(&self, key: &'static str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|_| err(e.line, key, format!("cannot parse `{}`", e.value))),
        }
    }

    fn require<T: FromStr>(&self, key: &'static str) -> Result<T> {
        self.get(key)?.ok_or(Error::MissingKey(key))
    }

    fn check(&self, key: &'static str, ok: bool, message: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(err(self.line(key), key, message))
        }
    }
}

/// Parses and fully validates an experiment file.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut entries = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, content, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(err(line, key, "unknown key"));
        };
        if value.is_empty() {
            return Err(err(line, key, "empty value"));
        }
        if let Some(prev) = entries.get(known) {
            let prev: &Entry = prev;
            return Err(err(
                line,
                key,
                format!("duplicate key (first set on line {})", prev.line),
            ));
        }
        entries.insert(
            known,
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    let e = Entries(entries);

    let problem_name: String = e.require("problem")?;
    let problem_name = problem_name.to_ascii_lowercase();
    let dim: Option<usize> = e.get("dim")?;
    let problem = Problem::by_name(&problem_name, dim).map_err(|x| {
        let key = if dim.is_some() && !matches!(x, Error::UnknownProblem(_)) {
            "dim"
        } else {
            "problem"
        };
        err(e.line(key), key, x.to_string())
    })?;

    let n_agents: usize = e.require("n_agents")?;
    let k_max: usize = e.require("k_max")?;
    let seed: u64 = e.require("seed")?;
    let mut solver = SolverConfig::new(n_agents, k_max, seed);
    if let Some(v) = e.get("lambda")? {
        solver.lambda = v;
    }
    if let Some(v) = e.get("sigma")? {
        solver.sigma = v;
    }
    if let Some(v) = e.get("dt")? {
        solver.dt = v;
    }
    if let Some(v) = e.get("alpha")? {
        solver.alpha = v;
    }
    if let Some(v) = e.get::<ScalarizationOrder>("p")? {
        solver.p = v;
    }
    if let Some(v) = e.get::<UpdateMode>("mode")? {
        solver.mode = v;
    }
    if let Some(v) = e.get("parallel_agents")? {
        solver.parallel = v;
    }

    e.check("n_agents", n_agents >= 2, "n_agents must be >= 2")?;
    e.check("k_max", k_max >= 1, "k_max must be >= 1")?;
    e.check("lambda", solver.lambda.is_finite() && solver.lambda > 0.0, "lambda must be > 0")?;
    e.check("sigma", solver.sigma.is_finite() && solver.sigma >= 0.0, "sigma must be >= 0")?;
    e.check("dt", solver.dt.is_finite() && solver.dt > 0.0, "dt must be > 0")?;
    e.check("alpha", solver.alpha.is_finite() && solver.alpha > 0.0, "alpha must be > 0")?;
    let product_key = if e.line("dt") >= e.line("lambda") { "dt" } else { "lambda" };
    e.check(product_key, solver.lambda * solver.dt <= 1.0, "lambda * dt must be <= 1")?;
    solver
        .validate()
        .map_err(|x| err(0, "solver", x.to_string()))?;

    let runs: usize = e.get("runs")?.unwrap_or(1);
    e.check("runs", runs >= 1, "runs must be >= 1")?;

    let metrics = match e.0.get("metrics") {
        Some(entry) => MetricSelection::parse(&entry.value).map_err(|m| err(entry.line, "metrics", m))?,
        None => MetricSelection {
            err2: problem.supports_oracle(),
            igd: true,
        },
    };
    e.check(
        "metrics",
        !metrics.err2 || problem.supports_oracle(),
        "err2 needs oracle ground truth, available only for d <= 3",
    )?;

    let oracle_budget: usize = e.get("oracle_budget")?.unwrap_or(10_000);
    e.check(
        "oracle_budget",
        oracle_budget >= MIN_ORACLE_BUDGET,
        &format!("oracle_budget must be >= {MIN_ORACLE_BUDGET}"),
    )?;
    let front_points: usize = e.get("front_points")?.unwrap_or(1000);
    e.check("front_points", front_points >= 1, "front_points must be >= 1")?;
    let reference_points: usize = e.get("reference_points")?.unwrap_or(500);
    e.check("reference_points", reference_points >= 2, "reference_points must be >= 2")?;
    e.check(
        "metrics",
        !metrics.igd || problem.has_analytic_front() || problem.supports_oracle(),
        "igd needs an analytic front or oracle ground truth (d <= 3)",
    )?;

    Ok(ExperimentConfig {
        problem: problem_name,
        dim: problem.dim(),
        solver,
        runs,
        metrics,
        out_dir: PathBuf::from(e.get::<String>("out")?.unwrap_or_else(|| "out".into())),
        parallel_runs: e.get("parallel_runs")?.unwrap_or(true),
        oracle_budget,
        front_points,
        reference_points,
    })
}

impl ExperimentConfig {
    pub fn problem(&self) -> Result<Problem> {
        Problem::by_name(&self.problem, Some(self.dim))
    }

    /// Re-validates after programmatic edits (e.g. command-line overrides).
    pub fn validate(&self) -> Result<()> {
        parse_config(&self.to_config_text()).map(|_| ())
    }

    /// Every key with its effective value, in a form [`parse_config`] reads
    /// back to an equal config.
    pub fn to_config_text(&self) -> String {
        let s = &self.solver;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("problem", self.problem.clone());
        kv("dim", self.dim.to_string());
        kv("n_agents", s.n_agents.to_string());
        kv("k_max", s.k_max.to_string());
        kv("seed", s.seed.to_string());
        kv("lambda", s.lambda.to_string());
        kv("sigma", s.sigma.to_string());
        kv("dt", s.dt.to_string());
        kv("alpha", s.alpha.to_string());
        kv("p", s.p.to_string());
        kv("mode", s.mode.to_string());
        kv("runs", self.runs.to_string());
        kv("metrics", self.metrics.render());
        kv("out", self.out_dir.display().to_string());
        kv("parallel_runs", self.parallel_runs.to_string());
        kv("parallel_agents", s.parallel.to_string());
        kv("oracle_budget", self.oracle_budget.to_string());
        kv("front_points", self.front_points.to_string());
        kv("reference_points", self.reference_points.to_string());
        out
    }

    /// The config text preceded by comment lines recording the per-run seeds.
    pub fn to_manifest(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# mcbo experiment manifest");
        let _ = writeln!(
            out,
            "# run r uses seed XOR (r * {SEED_MIX:#018x}), wrapping multiplication"
        );
        for r in 0..self.runs {
            let _ = writeln!(out, "# run {r} seed = {}", run_seed(self.solver.seed, r));
        }
        out.push_str(&self.to_config_text());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "problem = problem1\nn_agents = 100\nk_max = 500\nseed = 7\n";

    #[test]
    fn defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.solver.lambda, 1.0);
        assert_eq!(c.solver.dt, 0.01);
        assert_eq!(c.solver.alpha, 1e5);
        assert_eq!(c.solver.p, ScalarizationOrder::Infinity);
        assert_eq!(c.solver.mode, UpdateMode::Plain);
        assert_eq!(c.solver.sigma, 4.0);
        assert_eq!(c.runs, 1);
        assert_eq!(c.dim, 2);
        assert_eq!(c.metrics, MetricSelection { err2: true, igd: true });

        let uf = parse_config("problem = uf7\nn_agents = 10\nk_max = 5\nseed = 1\n").unwrap();
        assert_eq!(uf.dim, 5);
        assert_eq!(uf.metrics, MetricSelection { err2: false, igd: true });
    }

    #[test]
    fn negative_sigma_is_rejected() {
        let text = format!("{MINIMAL}sigma = -1\n");
        let e = parse_config(&text).unwrap_err();
        match e {
            Error::Parse { line, key, message } => {
                assert_eq!((line, key.as_str()), (5, "sigma"));
                assert!(message.contains("sigma must be >= 0"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let text = format!("{MINIMAL}lambda = 1\nlambda = 2\n");
        let e = parse_config(&text).unwrap_err();
        assert!(
            matches!(&e, Error::Parse { line: 6, key, message } if key == "lambda" && message.contains("duplicate")),
            "{e}"
        );
    }

    #[test]
    fn unknown_and_missing_keys() {
        let e = parse_config(&format!("{MINIMAL}beta = 3\n")).unwrap_err();
        assert!(matches!(&e, Error::Parse { line: 5, key, .. } if key == "beta"), "{e}");
        let e = parse_config("problem = problem1\nn_agents = 10\nk_max = 3\n").unwrap_err();
        assert!(matches!(e, Error::MissingKey("seed")));
        let e = parse_config("problem = problem1\nn_agents 10\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn invariant_violations() {
        for (extra, key) in [
            ("lambda = 2\ndt = 0.6\n", "dt"),
            ("runs = 0\n", "runs"),
            ("alpha = 0\n", "alpha"),
            ("p = 0.5\n", "p"),
            ("mode = lazy\n", "mode"),
            ("metrics = hv\n", "metrics"),
            ("oracle_budget = 10\n", "oracle_budget"),
        ] {
            let e = parse_config(&format!("{MINIMAL}{extra}")).unwrap_err();
            assert!(matches!(&e, Error::Parse { key: k, .. } if k == key), "{extra}: {e}");
        }
        let e = parse_config("problem = uf7\ndim = 5\nn_agents = 10\nk_max = 5\nseed = 1\nmetrics = err2\n")
            .unwrap_err();
        assert!(matches!(&e, Error::Parse { key, .. } if key == "metrics"), "{e}");
        let e = parse_config("problem = problem1\ndim = 3\nn_agents = 10\nk_max = 5\nseed = 1\n").unwrap_err();
        assert!(matches!(&e, Error::Parse { line: 2, key, .. } if key == "dim"), "{e}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nproblem = deb2dk   # trailing\nn_agents=4\nk_max=2\nseed=3\nmode = greedy\np = 2\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.problem, "deb2dk");
        assert_eq!(c.solver.mode, UpdateMode::Greedy);
        assert_eq!(c.solver.p, ScalarizationOrder::Finite(2.0));
    }

    #[test]
    fn manifest_round_trip() {
        let text = format!("{MINIMAL}runs = 3\nsigma = 0.1234567890123\np = 1.5\nout = some/dir\n");
        let c = parse_config(&text).unwrap();
        let manifest = c.to_manifest();
        assert!(manifest.contains("# run 2 seed = "));
        assert_eq!(parse_config(&manifest).unwrap(), c);
    }
}
