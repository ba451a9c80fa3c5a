//! History recording, regret accounting and the empirical fairness score.
//!
//! Regret comes in three flavors per baseline: the realized trace
//! (`t * baseline - sum of observed rewards`, a random variable), the
//! sampled-arm pseudo trace (true means in place of rewards) and the
//! expected-value pseudo trace (`<means, p_t>` in place of the sampled arm).
//! Experiments bind to the expected-value variant: it is nonnegative and
//! nondecreasing for any policy confined to the fairness set.

use crate::env::{Environment, FairOptimum, UnconstrainedOptimum};
use crate::error::{Error, Result};
use crate::polytope::{FairPolytope, FairnessBounds, GroupStructure};

/// One step of one run: the observed context, the emitted distribution, the
/// sampled arm and reward, plus the policy's conditional law for *every*
/// context (group masses only), which is what cross-context fairness reads.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: u64,
    pub context: usize,
    pub arm: usize,
    pub reward: f64,
    /// Distribution actually sampled from, full `k` vector.
    pub distribution: Vec<f64>,
    /// Group masses of the conditional law per context, flattened
    /// `[context * groups + group]`.
    pub group_mass: Vec<f64>,
}

/// Column-stored run history.
#[derive(Debug, Clone, Default)]
pub struct History {
    contexts: usize,
    arms: usize,
    groups: usize,
    ctx: Vec<u32>,
    arm: Vec<u32>,
    reward: Vec<f64>,
    dist: Vec<f64>,
    gmass: Vec<f64>,
}

impl History {
    pub fn new(contexts: usize, arms: usize, groups: usize) -> Self {
        Self {
            contexts,
            arms,
            groups,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.ctx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ctx.is_empty()
    }

    pub fn context_count(&self) -> usize {
        self.contexts
    }

    pub fn arm_count(&self) -> usize {
        self.arms
    }

    pub fn group_count(&self) -> usize {
        self.groups
    }

    /// Appends the next step; `record.t` must equal the current length.
    pub fn append_step(&mut self, record: StepRecord) -> Result<()> {
        if record.t != self.len() as u64 {
            return Err(Error::InvalidArgument(format!(
                "out-of-order step: got t = {}, expected {}",
                record.t,
                self.len()
            )));
        }
        if record.context >= self.contexts || record.arm >= self.arms {
            return Err(Error::InvalidArgument(
                "step record indices out of range".into(),
            ));
        }
        if record.distribution.len() != self.arms {
            return Err(Error::DimensionMismatch {
                context: "step distribution",
                expected: self.arms,
                actual: record.distribution.len(),
            });
        }
        if record.group_mass.len() != self.contexts * self.groups {
            return Err(Error::DimensionMismatch {
                context: "step group masses",
                expected: self.contexts * self.groups,
                actual: record.group_mass.len(),
            });
        }
        if !(0.0..=1.0).contains(&record.reward) {
            return Err(Error::InvalidArgument(format!(
                "reward {} outside [0, 1]",
                record.reward
            )));
        }
        let sum: f64 = record.distribution.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "step distribution sums to {sum}, expected 1"
            )));
        }
        self.ctx.push(record.context as u32);
        self.arm.push(record.arm as u32);
        self.reward.push(record.reward);
        self.dist.extend_from_slice(&record.distribution);
        self.gmass.extend_from_slice(&record.group_mass);
        Ok(())
    }

    pub fn context(&self, t: usize) -> usize {
        self.ctx[t] as usize
    }

    pub fn arm(&self, t: usize) -> usize {
        self.arm[t] as usize
    }

    pub fn reward(&self, t: usize) -> f64 {
        self.reward[t]
    }

    pub fn distribution(&self, t: usize) -> &[f64] {
        &self.dist[t * self.arms..(t + 1) * self.arms]
    }

    /// Group mass of the conditional law at step `t` for `(context, group)`.
    pub fn group_mass(&self, t: usize, context: usize, group: usize) -> f64 {
        self.gmass[t * self.contexts * self.groups + context * self.groups + group]
    }

    pub fn record(&self, t: usize) -> StepRecord {
        let width = self.contexts * self.groups;
        StepRecord {
            t: t as u64,
            context: self.context(t),
            arm: self.arm(t),
            reward: self.reward(t),
            distribution: self.distribution(t).to_vec(),
            group_mass: self.gmass[t * width..(t + 1) * width].to_vec(),
        }
    }
}

/// Cumulative regret traces against one baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    /// `t * expected-baseline - observed rewards so far`.
    pub realized: Vec<f64>,
    /// Expected-value pseudo trace, `sum of (baseline(s) - <means(s), p>)`.
    pub pseudo: Vec<f64>,
    /// Sampled-arm pseudo trace, `sum of (baseline(s) - mean(arm, s))`.
    pub pseudo_sampled: Vec<f64>,
}

impl RegretTrace {
    pub fn len(&self) -> usize {
        self.realized.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realized.is_empty()
    }
}

fn trace_against(
    history: &History,
    env: &Environment,
    per_context_value: &[f64],
    expected_value: f64,
) -> Result<RegretTrace> {
    if history.context_count() != env.context_count()
        || history.arm_count() != env.arm_count()
        || per_context_value.len() != env.context_count()
    {
        return Err(Error::DimensionMismatch {
            context: "regret baseline",
            expected: env.context_count(),
            actual: history.context_count(),
        });
    }
    let n = history.len();
    let mut realized = Vec::with_capacity(n);
    let mut pseudo = Vec::with_capacity(n);
    let mut pseudo_sampled = Vec::with_capacity(n);
    let mut cum_reward = 0.0;
    let mut cum_pseudo = 0.0;
    let mut cum_sampled = 0.0;
    for t in 0..n {
        let s = history.context(t);
        let means = env.means_f64(s);
        cum_reward += history.reward(t);
        let emitted_value: f64 = history
            .distribution(t)
            .iter()
            .zip(means)
            .map(|(p, m)| p * m)
            .sum();
        cum_pseudo += per_context_value[s] - emitted_value;
        cum_sampled += per_context_value[s] - means[history.arm(t)];
        realized.push((t + 1) as f64 * expected_value - cum_reward);
        pseudo.push(cum_pseudo);
        pseudo_sampled.push(cum_sampled);
    }
    Ok(RegretTrace {
        realized,
        pseudo,
        pseudo_sampled,
    })
}

/// Regret against the best fair policy.
pub fn fair_regret(
    history: &History,
    env: &Environment,
    optimum: &FairOptimum,
) -> Result<RegretTrace> {
    let values: Vec<f64> = optimum.per_context.iter().map(|c| c.value_f64).collect();
    trace_against(history, env, &values, optimum.expected_value_f64)
}

/// Regret against the best unconstrained policy.
pub fn regret(
    history: &History,
    env: &Environment,
    optimum: &UnconstrainedOptimum,
) -> Result<RegretTrace> {
    trace_against(
        history,
        env,
        &optimum.per_context_value_f64,
        optimum.expected_value_f64,
    )
}

/// Empirical fairness: per group and step, one minus the worst group-mass
/// spread across contexts and recorded runs, clamped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct FairnessReport {
    /// `step_scores[group][t]`.
    pub step_scores: Vec<Vec<f64>>,
    /// Per-group minimum over steps.
    pub group_scores: Vec<f64>,
    /// Minimum over groups (1 when there are no groups).
    pub overall: f64,
    /// Steps whose *emitted* distribution broke a group band at tol 1e-9.
    pub violation_count: u64,
    /// Worst band excess observed.
    pub max_violation: f64,
}

pub const FAIRNESS_TOL: f64 = 1e-9;

/// Builds the fairness report over one or more runs of equal shape.
pub fn empirical_fairness(
    histories: &[History],
    structure: &GroupStructure,
    bounds: &FairnessBounds,
) -> Result<FairnessReport> {
    if histories.is_empty() {
        return Err(Error::InvalidArgument("no histories supplied".into()));
    }
    let first = &histories[0];
    if structure.group_count() != first.group_count() || structure.arm_count() != first.arm_count()
    {
        return Err(Error::DimensionMismatch {
            context: "fairness report structure",
            expected: structure.group_count(),
            actual: first.group_count(),
        });
    }
    for h in histories {
        if h.len() != first.len()
            || h.context_count() != first.context_count()
            || h.arm_count() != first.arm_count()
            || h.group_count() != first.group_count()
        {
            return Err(Error::InvalidArgument(
                "histories have heterogeneous shapes".into(),
            ));
        }
    }
    let horizon = first.len();
    let contexts = first.context_count();
    let groups = structure.group_count();
    let lower: Vec<f64> = bounds.lower().iter().map(crate::rational::to_f64).collect();
    let upper: Vec<f64> = bounds.upper().iter().map(crate::rational::to_f64).collect();

    let mut step_scores = vec![vec![1.0f64; horizon]; groups];
    for (i, row) in step_scores.iter_mut().enumerate() {
        for (t, slot) in row.iter_mut().enumerate() {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for h in histories {
                for s in 0..contexts {
                    let m = h.group_mass(t, s, i);
                    lo = lo.min(m);
                    hi = hi.max(m);
                }
            }
            *slot = (1.0 - (hi - lo)).clamp(0.0, 1.0);
        }
    }
    let group_scores: Vec<f64> = step_scores
        .iter()
        .map(|row| row.iter().copied().fold(1.0, f64::min))
        .collect();
    let overall = group_scores.iter().copied().fold(1.0, f64::min);

    let mut violation_count = 0u64;
    let mut max_violation = 0.0f64;
    for h in histories {
        for t in 0..horizon {
            let p = h.distribution(t);
            let mut worst = 0.0f64;
            for i in 0..groups {
                let mass = structure.group_mass_f64(i, p);
                worst = worst.max(lower[i] - mass).max(mass - upper[i]);
            }
            if worst > FAIRNESS_TOL {
                violation_count += 1;
                max_violation = max_violation.max(worst);
            }
        }
    }
    Ok(FairnessReport {
        step_scores,
        group_scores,
        overall,
        violation_count,
        max_violation,
    })
}

/// Worst constraint excess of `p` against the polytope: group band excess,
/// negativity and simplex-sum error all count.
pub fn violation_magnitude(polytope: &FairPolytope, p: &[f64]) -> f64 {
    let structure = polytope.structure();
    let bounds = polytope.bounds();
    let mut worst = (p.iter().sum::<f64>() - 1.0).abs();
    for &x in p {
        worst = worst.max(-x);
    }
    for i in 0..structure.group_count() {
        let mass = structure.group_mass_f64(i, p);
        let lo = crate::rational::to_f64(&bounds.lower()[i]);
        let hi = crate::rational::to_f64(&bounds.upper()[i]);
        worst = worst.max(lo - mass).max(mass - hi);
    }
    worst.max(0.0)
}

/// Steps whose emitted distribution falls outside the polytope at tol 1e-9,
/// with the worst excess magnitude.
pub fn constraint_violations(history: &History, polytope: &FairPolytope) -> (u64, f64) {
    let mut count = 0u64;
    let mut magnitude = 0.0f64;
    for t in 0..history.len() {
        let p = history.distribution(t);
        if !polytope.contains(p, FAIRNESS_TOL).unwrap_or(false) {
            count += 1;
            magnitude = magnitude.max(violation_magnitude(polytope, p));
        }
    }
    (count, magnitude)
}
