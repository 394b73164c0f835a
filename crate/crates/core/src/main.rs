use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use mcbo::experiment::{parse_config, run_experiment, write_outputs, write_reference_set};
use mcbo::problems::{reference_solutions, Problem, ProblemKind};
use mcbo::scalarization::{generate_uniform_weights, ScalarizationOrder};
use mcbo::{Error, Result};

#[derive(Parser)]
#[command(name = "mcbo", version, about = "Multi-objective consensus-based optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file (or a manifest).
    Run {
        config: PathBuf,
        /// Output directory (overrides `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of runs (overrides `runs`).
        #[arg(long)]
        runs: Option<usize>,
        /// Master seed (overrides `seed`).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print oracle solutions of N uniformly weighted sub-problems as CSV.
    Oracle {
        problem: String,
        n: usize,
        /// Scalarization order: a number >= 1 or `inf`.
        p: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// List the built-in problems.
    Problems,
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mcbo: error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            runs,
            seed,
        } => {
            let text = fs::read_to_string(&config).map_err(|source| Error::Io {
                path: config.clone(),
                source,
            })?;
            let mut cfg = parse_config(&text)?;
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            if let Some(runs) = runs {
                cfg.runs = runs;
            }
            if let Some(seed) = seed {
                cfg.solver.seed = seed;
            }
            cfg.validate()?;

            let started = Instant::now();
            let outcome = run_experiment(&cfg)?;
            write_outputs(&outcome.records, &outcome.summary, &cfg, &cfg.out_dir)?;
            if let (Some(first), Some(last)) = (outcome.summary.rows.first(), outcome.summary.rows.last()) {
                let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6e}"));
                eprintln!(
                    "{} x{} runs, k = {}: err2 {} -> {}, igd {} -> {} ({:.1?}); wrote {}",
                    cfg.problem,
                    cfg.runs,
                    last.iteration,
                    show(first.err2),
                    show(last.err2),
                    show(first.igd),
                    show(last.igd),
                    started.elapsed(),
                    cfg.out_dir.display()
                );
            }
            Ok(())
        }
        Command::Oracle {
            problem,
            n,
            p,
            dim,
            budget,
        } => {
            let problem = Problem::by_name(&problem, dim)?;
            let p: ScalarizationOrder = p.parse()?;
            let weights = generate_uniform_weights(n, problem.n_objectives())?;
            let set = reference_solutions(&problem, &weights, p, budget, true)?;
            write_reference_set(&set, io::stdout().lock())
        }
        Command::Problems => {
            for kind in ProblemKind::ALL {
                println!(
                    "{:<10} d={:<3} {}",
                    kind.name(),
                    kind.default_dim(),
                    kind.description()
                );
            }
            Ok(())
        }
    }
}
