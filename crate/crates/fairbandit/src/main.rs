//! Experiment CLI: `run` a config, or inspect its exact geometry with
//! `gamma` / `vertices`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fairbandit::error::Error;
use fairbandit::polytope::{gap_lower_bound, FairPolytope, GapValue};
use fairbandit::rational::format_rational;
use fairbandit::{parse_config, run_experiment, with_thread_pool, write_artifacts};

#[derive(Parser)]
#[command(
    name = "fairbandit",
    version,
    about = "Group-fair contextual bandit experiments over an exact constraint polytope"
)]
struct Cli {
    /// Worker threads for replications and geometry scans
    /// (default: FAIRBANDIT_THREADS env var, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment and write trace/summary artifacts.
    Run {
        config: PathBuf,
        /// Override the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print the per-context optimality gap and its structural lower bound.
    Gamma { config: PathBuf },
    /// Print the exact vertex set of the fairness polytope.
    Vertices { config: PathBuf },
}

fn load_config(path: &PathBuf) -> Result<fairbandit::ExperimentConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ConfigSyntax(format!("cannot read `{}`: {e}", path.display())))?;
    parse_config(&text)
}

fn cmd_run(config: PathBuf, seed: Option<u64>, out_dir: Option<PathBuf>) -> Result<(), Error> {
    let mut cfg = load_config(&config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(dir) = out_dir {
        cfg.output_dir = dir;
    }
    let output = run_experiment(&cfg)?;
    let written = write_artifacts(&output, &cfg.output_dir)?;
    let s = &output.summary;
    println!(
        "ran {} polic{} x {} runs x {} steps (seed {})",
        s.policies.len(),
        if s.policies.len() == 1 { "y" } else { "ies" },
        s.replications,
        s.horizon,
        s.seed
    );
    println!(
        "instance: {} vertices, gamma_min = {}, lower bound = {}",
        s.instance.vertex_count, s.instance.gamma_min, s.instance.gamma_lower_bound
    );
    for p in &s.policies {
        let last = p.fair_regret_pseudo.last().expect("checkpoints nonempty");
        println!(
            "  {:<20} fair regret @ {:>8}: {:>12.3} +- {:.3}   fairness {:.3}   violations {}",
            p.name, last.checkpoint, last.mean, last.stderr, p.fairness.overall, p.violation_count
        );
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_gamma(config: PathBuf) -> Result<(), Error> {
    let cfg = load_config(&config)?;
    let polytope = FairPolytope::new(cfg.structure.clone(), cfg.bounds.clone())?;
    if !polytope.is_feasible() {
        return Err(Error::Infeasible);
    }
    let verts = polytope.vertices()?;
    println!("vertices: {}", verts.len());
    for s in 0..cfg.env.context_count() {
        let gap = polytope.optimality_gap(cfg.env.means(s))?;
        let best = format_vertex(&gap.best);
        match (&gap.gap, &gap.runner_up) {
            (GapValue::Infinite, _) => {
                println!(
                    "context {}: gamma = inf (single vertex), best = {best}",
                    cfg.env.labels()[s]
                );
            }
            (GapValue::Finite(g), Some(second)) => {
                println!(
                    "context {}: gamma = {}{}, best = {best}, runner_up = {}",
                    cfg.env.labels()[s],
                    format_rational(g),
                    if gap.degenerate { " (degenerate)" } else { "" },
                    format_vertex(second)
                );
            }
            (GapValue::Finite(g), None) => {
                println!(
                    "context {}: gamma = {}, best = {best}",
                    cfg.env.labels()[s],
                    format_rational(g)
                );
            }
        }
    }
    let means_denom = cfg.env.means_denominator();
    let bounds_denom = cfg.bounds.common_denominator();
    println!("overlap_degree = {}", cfg.structure.overlap_degree());
    println!("means_denominator M = {means_denom}, bounds_denominator N = {bounds_denom}");
    println!(
        "gamma_lower_bound = {}",
        format_rational(&gap_lower_bound(
            &cfg.structure,
            &means_denom,
            &bounds_denom
        ))
    );
    Ok(())
}

fn cmd_vertices(config: PathBuf) -> Result<(), Error> {
    let cfg = load_config(&config)?;
    let polytope = FairPolytope::new(cfg.structure.clone(), cfg.bounds.clone())?;
    let verts = polytope.vertices()?;
    println!("vertices: {}", verts.len());
    for v in verts {
        println!("{}", format_vertex(v));
    }
    Ok(())
}

fn format_vertex(v: &[fairbandit::rational::Rational]) -> String {
    let coords: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", coords.join(", "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("FAIRBANDIT_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let result = with_thread_pool(threads, || match cli.command {
        Command::Run {
            config,
            seed,
            out_dir,
        } => cmd_run(config, seed, out_dir),
        Command::Gamma { config } => cmd_gamma(config),
        Command::Vertices { config } => cmd_vertices(config),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
