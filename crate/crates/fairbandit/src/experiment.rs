//! Configuration-driven experiment runner.
//!
//! A run is `replications` independent seeded simulations of each configured
//! policy against the environment. Replications execute in parallel (one
//! policy state, RNG and accumulator set per run); aggregation is keyed by
//! run index, so outputs do not depend on scheduling. Seeds derive only from
//! the base seed and the run index, which makes every artifact byte
//! deterministic apart from the wall-clock field in the summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ExperimentConfig, PolicySpec};
use crate::env::{
    optimal_fair_policy, optimal_unconstrained_policy, Environment, FairOptimum,
    UnconstrainedOptimum,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::metrics::{violation_magnitude, FAIRNESS_TOL};
use crate::policy::{ContextualPolicy, PolicyKind};
use crate::polytope::{gap_lower_bound, FairPolytope, GapValue};
use crate::rational::format_rational;

/// Decorrelates the environment stream from the policy streams.
const ENV_STREAM_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Mean and standard error of the pseudo regret at one checkpoint.
#[derive(Debug, Clone, Serialize)]
pub struct CheckpointStat {
    pub checkpoint: u64,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FairnessSummary {
    /// Per-group minimum over steps of the cross-context score.
    pub per_group: Vec<f64>,
    /// Minimum over groups; 1 when there are no groups.
    pub overall: f64,
}

/// JSON-facing per-policy aggregate.
#[derive(Debug, Clone, Serialize)]
pub struct PolicySummary {
    pub name: String,
    pub kind: String,
    pub fair_regret_pseudo: Vec<CheckpointStat>,
    pub regret_pseudo: Vec<CheckpointStat>,
    pub fairness: FairnessSummary,
    pub violation_count: u64,
    pub max_violation: f64,
}

/// Exact geometry of the configured instance.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub arm_count: usize,
    pub context_labels: Vec<String>,
    pub vertex_count: usize,
    pub overlap_degree: usize,
    /// Top-two vertex gap per context, exact rational strings ("inf" for a
    /// single-vertex set).
    pub gamma_per_context: Vec<String>,
    pub gamma_min: String,
    pub gamma_lower_bound: String,
    pub means_denominator: String,
    pub bounds_denominator: String,
    /// Constructive per-group fairness floor `1 - (upper - lower)`, exact.
    /// Guaranteed for any band-respecting policy; distinct from the
    /// empirical scores reported per policy.
    pub fairness_guarantees: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSummary {
    pub horizon: u64,
    pub replications: u32,
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    pub instance: InstanceSummary,
    pub policies: Vec<PolicySummary>,
    /// Informational only; excluded from the reproducibility contract.
    pub wall_clock_seconds: f64,
}

/// Everything a policy's replications produced, including what the JSON
/// summary does not carry (per-step scores, final laws, trace rows).
#[derive(Debug, Clone)]
pub struct PolicyOutcome {
    pub name: String,
    pub kind: PolicyKind,
    pub fair_regret_pseudo: Vec<CheckpointStat>,
    pub regret_pseudo: Vec<CheckpointStat>,
    /// Pseudo fair regret per run at each checkpoint, `[run][checkpoint]`.
    pub fair_by_run: Vec<Vec<f64>>,
    /// Cross-context fairness score per group and step, pooled over runs.
    pub step_scores: Vec<Vec<f64>>,
    pub fairness: FairnessSummary,
    pub violation_count: u64,
    pub max_violation: f64,
    /// Conditional laws per context after the final step of run 0.
    pub final_laws: Vec<Vec<f64>>,
    pub trace_csv: Option<String>,
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub summary: ExperimentSummary,
    pub outcomes: Vec<PolicyOutcome>,
}

struct RunProduct {
    fair_at: Vec<f64>,
    regret_at: Vec<f64>,
    /// `(min, max)` group mass across contexts, per `t * groups + group`.
    spread: Vec<(f64, f64)>,
    violation_count: u64,
    max_violation: f64,
    final_laws: Vec<Vec<f64>>,
    rows: Option<String>,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[allow(clippy::too_many_arguments)]
fn simulate_run(
    env: &Environment,
    polytope: &Arc<FairPolytope>,
    fair_opt: &FairOptimum,
    unc_opt: &UnconstrainedOptimum,
    spec: &PolicySpec,
    horizon: u64,
    checkpoints: &[u64],
    base_seed: u64,
    run_index: u32,
    want_rows: bool,
) -> Result<RunProduct> {
    let run_seed = base_seed.wrapping_add(run_index as u64);
    let mut env_rng = ChaCha8Rng::seed_from_u64(run_seed ^ ENV_STREAM_SALT);
    let mut bundle = ContextualPolicy::new(
        spec.kind,
        env.context_count(),
        Arc::clone(polytope),
        spec.params,
        run_seed,
    )?;
    let structure = polytope.structure();
    let groups = structure.group_count();
    let contexts = env.context_count();
    let fair_values: Vec<f64> = fair_opt.per_context.iter().map(|c| c.value_f64).collect();

    let mut fair_pseudo = 0.0f64;
    let mut reg_pseudo = 0.0f64;
    let mut cum_reward = 0.0f64;
    let mut fair_at = Vec::with_capacity(checkpoints.len());
    let mut regret_at = Vec::with_capacity(checkpoints.len());
    let mut next_checkpoint = 0usize;
    let mut spread = vec![(f64::INFINITY, f64::NEG_INFINITY); horizon as usize * groups];
    let mut violation_count = 0u64;
    let mut max_violation = 0.0f64;
    let mut rows = want_rows.then(String::new);

    for t in 0..horizon {
        let s = env.draw_context(&mut env_rng);
        let p = bundle.select(s);
        let laws = bundle.laws();
        let a = bundle.sample(s, &p)?;
        let r = env.draw_reward_unchecked(s, a, &mut env_rng);
        bundle.update(s, a, r)?;

        let means = env.means_f64(s);
        let emitted_value: f64 = p.iter().zip(means).map(|(x, m)| x * m).sum();
        fair_pseudo += fair_values[s] - emitted_value;
        reg_pseudo += unc_opt.per_context_value_f64[s] - emitted_value;
        cum_reward += r;

        let base = t as usize * groups;
        for i in 0..groups {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for law in &laws {
                let m = structure.group_mass_f64(i, law);
                lo = lo.min(m);
                hi = hi.max(m);
            }
            spread[base + i] = (lo, hi);
        }

        if !polytope.contains(&p, FAIRNESS_TOL)? {
            violation_count += 1;
            max_violation = max_violation.max(violation_magnitude(polytope, &p));
        }

        if let Some(buf) = rows.as_mut() {
            let fair_realized = (t + 1) as f64 * fair_opt.expected_value_f64 - cum_reward;
            write!(
                buf,
                "{run_index},{t},{},{a},{},{},{},{}",
                env.labels()[s],
                fmt_f64(r),
                fmt_f64(fair_realized),
                fmt_f64(fair_pseudo),
                fmt_f64(reg_pseudo)
            )
            .expect("write to string");
            for i in 0..groups {
                for law in laws.iter().take(contexts) {
                    let m = structure.group_mass_f64(i, law);
                    write!(buf, ",{}", fmt_f64(m)).expect("write to string");
                }
            }
            buf.push('\n');
        }

        if next_checkpoint < checkpoints.len() && t + 1 == checkpoints[next_checkpoint] {
            fair_at.push(fair_pseudo);
            regret_at.push(reg_pseudo);
            next_checkpoint += 1;
        }
    }

    Ok(RunProduct {
        fair_at,
        regret_at,
        spread,
        violation_count,
        max_violation,
        final_laws: bundle.laws(),
        rows,
    })
}

fn stats_over_runs(checkpoints: &[u64], by_run: &[Vec<f64>]) -> Vec<CheckpointStat> {
    let r = by_run.len() as f64;
    checkpoints
        .iter()
        .enumerate()
        .map(|(c, &checkpoint)| {
            let mean = by_run.iter().map(|run| run[c]).sum::<f64>() / r;
            let stderr = if by_run.len() < 2 {
                0.0
            } else {
                let var = by_run
                    .iter()
                    .map(|run| (run[c] - mean).powi(2))
                    .sum::<f64>()
                    / (r - 1.0);
                (var / r).sqrt()
            };
            CheckpointStat {
                checkpoint,
                mean,
                stderr,
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn run_policy_impl(
    env: &Environment,
    polytope: &Arc<FairPolytope>,
    spec: &PolicySpec,
    horizon: u64,
    replications: u32,
    base_seed: u64,
    checkpoints: &[u64],
    want_rows: bool,
    sequential: bool,
) -> Result<PolicyOutcome> {
    let fair_opt = optimal_fair_policy(env, polytope)?;
    let unc_opt = optimal_unconstrained_policy(env);

    let one = |j: usize| {
        simulate_run(
            env,
            polytope,
            &fair_opt,
            &unc_opt,
            spec,
            horizon,
            checkpoints,
            base_seed,
            j as u32,
            want_rows,
        )
    };
    let products: Vec<Result<RunProduct>> = if sequential {
        (0..replications as usize).map(one).collect()
    } else {
        exec::map_range(replications as usize, one)
    };
    let products: Vec<RunProduct> = products.into_iter().collect::<Result<Vec<_>>>()?;

    let fair_by_run: Vec<Vec<f64>> = products.iter().map(|p| p.fair_at.clone()).collect();
    let regret_by_run: Vec<Vec<f64>> = products.iter().map(|p| p.regret_at.clone()).collect();
    let fair_stats = stats_over_runs(checkpoints, &fair_by_run);
    let regret_stats = stats_over_runs(checkpoints, &regret_by_run);

    let groups = polytope.structure().group_count();
    let horizon_usize = horizon as usize;
    let mut step_scores = vec![vec![1.0f64; horizon_usize]; groups];
    for (i, row) in step_scores.iter_mut().enumerate() {
        for (t, slot) in row.iter_mut().enumerate() {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for p in &products {
                let (l, h) = p.spread[t * groups + i];
                lo = lo.min(l);
                hi = hi.max(h);
            }
            *slot = (1.0 - (hi - lo)).clamp(0.0, 1.0);
        }
    }
    let per_group: Vec<f64> = step_scores
        .iter()
        .map(|row| row.iter().copied().fold(1.0, f64::min))
        .collect();
    let overall = per_group.iter().copied().fold(1.0, f64::min);

    let violation_count = products.iter().map(|p| p.violation_count).sum();
    let max_violation = products.iter().map(|p| p.max_violation).fold(0.0, f64::max);

    let trace_csv = want_rows.then(|| {
        let mut csv = String::from(
            "run,t,context,arm,reward,fair_regret_realized,fair_regret_pseudo,regret_pseudo",
        );
        for i in 0..groups {
            for label in env.labels() {
                write!(csv, ",g{i}_{label}").expect("write to string");
            }
        }
        csv.push('\n');
        for p in &products {
            csv.push_str(p.rows.as_deref().unwrap_or(""));
        }
        csv
    });

    Ok(PolicyOutcome {
        name: spec.name.clone(),
        kind: spec.kind,
        fair_regret_pseudo: fair_stats,
        regret_pseudo: regret_stats,
        fair_by_run,
        step_scores,
        fairness: FairnessSummary { per_group, overall },
        violation_count,
        max_violation,
        final_laws: products
            .first()
            .map(|p| p.final_laws.clone())
            .unwrap_or_default(),
        trace_csv,
    })
}

/// Runs one policy for `replications` seeded runs; parallel across runs when
/// the `parallel` feature is enabled. No trace rows are kept.
#[allow(clippy::too_many_arguments)]
pub fn run_policy(
    env: &Environment,
    polytope: &Arc<FairPolytope>,
    spec: &PolicySpec,
    horizon: u64,
    replications: u32,
    base_seed: u64,
    checkpoints: &[u64],
) -> Result<PolicyOutcome> {
    run_policy_impl(
        env,
        polytope,
        spec,
        horizon,
        replications,
        base_seed,
        checkpoints,
        false,
        false,
    )
}

/// Strictly sequential twin of [`run_policy`]; exists for the bench suite.
#[allow(clippy::too_many_arguments)]
pub fn run_policy_sequential(
    env: &Environment,
    polytope: &Arc<FairPolytope>,
    spec: &PolicySpec,
    horizon: u64,
    replications: u32,
    base_seed: u64,
    checkpoints: &[u64],
) -> Result<PolicyOutcome> {
    run_policy_impl(
        env,
        polytope,
        spec,
        horizon,
        replications,
        base_seed,
        checkpoints,
        false,
        true,
    )
}

/// Runs every configured policy and assembles the summary plus trace rows.
/// Fails with [`Error::Infeasible`] before any simulation when the fairness
/// set is empty.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let started = Instant::now();
    let polytope = Arc::new(FairPolytope::new(
        config.structure.clone(),
        config.bounds.clone(),
    )?);
    if !polytope.is_feasible() {
        return Err(Error::Infeasible);
    }

    // Exact instance geometry.
    let verts = polytope.vertices()?;
    let vertex_count = verts.len();
    if vertex_count == 0 {
        return Err(Error::Infeasible);
    }
    let mut gamma_per_context = Vec::with_capacity(config.env.context_count());
    let mut gamma_min: Option<crate::rational::Rational> = None;
    for s in 0..config.env.context_count() {
        let gap = polytope.optimality_gap(config.env.means(s))?;
        if let GapValue::Finite(g) = &gap.gap {
            if gamma_min.as_ref().is_none_or(|m| g < m) {
                gamma_min = Some(g.clone());
            }
        }
        gamma_per_context.push(gap.gap.display());
    }
    let means_denom = config.env.means_denominator();
    let bounds_denom = config.bounds.common_denominator();
    let instance = InstanceSummary {
        arm_count: config.env.arm_count(),
        context_labels: config.env.labels().to_vec(),
        vertex_count,
        overlap_degree: config.structure.overlap_degree(),
        gamma_per_context,
        gamma_min: gamma_min
            .map(|g| format_rational(&g))
            .unwrap_or_else(|| "inf".into()),
        gamma_lower_bound: format_rational(&gap_lower_bound(
            &config.structure,
            &means_denom,
            &bounds_denom,
        )),
        means_denominator: means_denom.to_string(),
        bounds_denominator: bounds_denom.to_string(),
        fairness_guarantees: config
            .bounds
            .lower()
            .iter()
            .zip(config.bounds.upper())
            .map(|(l, u)| {
                let one = crate::rational::Rational::from_integer(1.into());
                format_rational(&(&one - &(u - l)))
            })
            .collect(),
    };

    let mut outcomes = Vec::with_capacity(config.policies.len());
    for spec in &config.policies {
        outcomes.push(run_policy_impl(
            &config.env,
            &polytope,
            spec,
            config.horizon,
            config.replications,
            config.seed,
            &config.checkpoints,
            true,
            false,
        )?);
    }

    let policies = outcomes
        .iter()
        .map(|o| PolicySummary {
            name: o.name.clone(),
            kind: o.kind.name().to_string(),
            fair_regret_pseudo: o.fair_regret_pseudo.clone(),
            regret_pseudo: o.regret_pseudo.clone(),
            fairness: o.fairness.clone(),
            violation_count: o.violation_count,
            max_violation: o.max_violation,
        })
        .collect();

    let summary = ExperimentSummary {
        horizon: config.horizon,
        replications: config.replications,
        seed: config.seed,
        checkpoints: config.checkpoints.clone(),
        instance,
        policies,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    Ok(ExperimentOutput { summary, outcomes })
}

/// Long-format plot table: one row per (policy, checkpoint).
pub fn emit_plot_data(summary: &ExperimentSummary) -> String {
    let mut out = String::from("policy,checkpoint,mean,stderr\n");
    for policy in &summary.policies {
        for stat in &policy.fair_regret_pseudo {
            writeln!(
                out,
                "{},{},{},{}",
                policy.name,
                stat.checkpoint,
                fmt_f64(stat.mean),
                fmt_f64(stat.stderr)
            )
            .expect("write to string");
        }
    }
    out
}

/// Writes `trace_<policy>.csv` per policy, `summary.json` and
/// `plot_data.csv` under `dir`. Returns the paths written.
pub fn write_artifacts(output: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for outcome in &output.outcomes {
        if let Some(csv) = &outcome.trace_csv {
            let path = dir.join(format!("trace_{}.csv", outcome.name));
            std::fs::write(&path, csv)?;
            written.push(path);
        }
    }
    let summary_path = dir.join("summary.json");
    let mut json = serde_json::to_string_pretty(&output.summary)
        .map_err(|e| Error::InvalidArgument(format!("summary serialization: {e}")))?;
    json.push('\n');
    std::fs::write(&summary_path, json)?;
    written.push(summary_path);

    let plot_path = dir.join("plot_data.csv");
    std::fs::write(&plot_path, emit_plot_data(&output.summary))?;
    written.push(plot_path);
    Ok(written)
}
