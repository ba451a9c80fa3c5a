//! Simulated stochastic contextual environment: context draws, reward draws
//! with known rational means, and the exact optimal fair / unconstrained
//! policies used as regret baselines.

use num::bigint::BigInt;
use num::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polytope::FairPolytope;
use crate::rational::{common_denominator, in_unit_interval, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    /// Reward is 1 with probability equal to the mean, else 0.
    Bernoulli,
    /// Reward equals the mean exactly; turns noise off for deterministic tests.
    Fixed,
}

/// Stationary environment: categorical context distribution plus a
/// contexts-by-arms matrix of exact mean rewards in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Environment {
    labels: Vec<String>,
    context_probs: Vec<Rational>,
    /// Cumulative context probabilities as floats, for the sampling path.
    context_cdf: Vec<f64>,
    means: Vec<Vec<Rational>>,
    means_f64: Vec<Vec<f64>>,
    noise: NoiseModel,
}

impl Environment {
    pub fn new(
        labels: Vec<String>,
        context_probs: Vec<Rational>,
        means: Vec<Vec<Rational>>,
        noise: NoiseModel,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument(
                "environment needs at least one context".into(),
            ));
        }
        // Labels name trace-file columns, so they must be distinct.
        let unique: std::collections::BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(Error::InvalidArgument(
                "context labels must be unique".into(),
            ));
        }
        if context_probs.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                context: "context probabilities",
                expected: labels.len(),
                actual: context_probs.len(),
            });
        }
        let mut total = Rational::zero();
        for (i, p) in context_probs.iter().enumerate() {
            if !in_unit_interval(p) {
                return Err(Error::InvalidArgument(format!(
                    "context probability {i} outside [0, 1]"
                )));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!(
                "context probabilities sum to {total}, expected 1"
            )));
        }
        if means.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                context: "mean matrix rows",
                expected: labels.len(),
                actual: means.len(),
            });
        }
        let k = means.first().map_or(0, |row| row.len());
        if k == 0 {
            return Err(Error::InvalidArgument("mean matrix has no arms".into()));
        }
        for (s, row) in means.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    context: "mean matrix columns",
                    expected: k,
                    actual: row.len(),
                });
            }
            for (a, m) in row.iter().enumerate() {
                if !in_unit_interval(m) {
                    return Err(Error::InvalidArgument(format!(
                        "mean for context {s}, arm {a} outside [0, 1]"
                    )));
                }
            }
        }
        let mut context_cdf = Vec::with_capacity(labels.len());
        let mut acc = Rational::zero();
        for p in &context_probs {
            acc += p;
            context_cdf.push(to_f64(&acc));
        }
        let means_f64 = means
            .iter()
            .map(|row| row.iter().map(to_f64).collect())
            .collect();
        Ok(Self {
            labels,
            context_probs,
            context_cdf,
            means,
            means_f64,
            noise,
        })
    }

    pub fn context_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arm_count(&self) -> usize {
        self.means[0].len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn context_probs(&self) -> &[Rational] {
        &self.context_probs
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn means(&self, context: usize) -> &[Rational] {
        &self.means[context]
    }

    pub fn means_f64(&self, context: usize) -> &[f64] {
        &self.means_f64[context]
    }

    /// Smallest `M` with every mean in `(1/M)·Z`, across all contexts.
    pub fn means_denominator(&self) -> BigInt {
        let flat: Vec<Rational> = self.means.iter().flatten().cloned().collect();
        common_denominator(&flat)
    }

    /// Categorical context draw (inverse CDF).
    pub fn draw_context(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.gen();
        for (s, edge) in self.context_cdf.iter().enumerate() {
            if u < *edge {
                return s;
            }
        }
        self.labels.len() - 1
    }

    /// One reward draw for `(context, arm)` under the configured noise model.
    pub fn draw_reward(&self, context: usize, arm: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
        if context >= self.context_count() || arm >= self.arm_count() {
            return Err(Error::InvalidArgument(format!(
                "reward query out of range: context {context}, arm {arm}"
            )));
        }
        Ok(self.draw_reward_unchecked(context, arm, rng))
    }

    /// Hot-path variant; indices must be valid.
    pub(crate) fn draw_reward_unchecked(
        &self,
        context: usize,
        arm: usize,
        rng: &mut ChaCha8Rng,
    ) -> f64 {
        let mean = self.means_f64[context][arm];
        match self.noise {
            NoiseModel::Fixed => mean,
            NoiseModel::Bernoulli => {
                if rng.gen::<f64>() < mean {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Best fair policy: per context, the distribution in the fairness set with
/// the highest expected reward, all values exact.
#[derive(Debug, Clone)]
pub struct FairOptimum {
    pub per_context: Vec<ContextOptimum>,
    pub expected_value: Rational,
    pub expected_value_f64: f64,
}

#[derive(Debug, Clone)]
pub struct ContextOptimum {
    pub distribution: Vec<Rational>,
    pub value: Rational,
    pub value_f64: f64,
}

/// Best unconstrained policy: per context, the single best arm.
#[derive(Debug, Clone)]
pub struct UnconstrainedOptimum {
    pub per_context: Vec<(usize, Rational)>,
    pub per_context_value_f64: Vec<f64>,
    pub expected_value: Rational,
    pub expected_value_f64: f64,
}

/// Exact best fair policy for `env` over `polytope`.
pub fn optimal_fair_policy(env: &Environment, polytope: &FairPolytope) -> Result<FairOptimum> {
    let mut per_context = Vec::with_capacity(env.context_count());
    let mut expected = Rational::zero();
    for s in 0..env.context_count() {
        let (distribution, value) = polytope.maximize_linear(env.means(s))?;
        expected += &env.context_probs[s] * &value;
        per_context.push(ContextOptimum {
            value_f64: to_f64(&value),
            distribution,
            value,
        });
    }
    Ok(FairOptimum {
        expected_value_f64: to_f64(&expected),
        per_context,
        expected_value: expected,
    })
}

/// Exact best unconstrained policy (ties go to the smallest arm index).
pub fn optimal_unconstrained_policy(env: &Environment) -> UnconstrainedOptimum {
    let mut per_context = Vec::with_capacity(env.context_count());
    let mut values_f64 = Vec::with_capacity(env.context_count());
    let mut expected = Rational::zero();
    for s in 0..env.context_count() {
        let means = env.means(s);
        let mut best = 0;
        for a in 1..means.len() {
            if means[a] > means[best] {
                best = a;
            }
        }
        let value = means[best].clone();
        expected += &env.context_probs[s] * &value;
        values_f64.push(to_f64(&value));
        per_context.push((best, value));
    }
    UnconstrainedOptimum {
        expected_value_f64: to_f64(&expected),
        per_context,
        per_context_value_f64: values_f64,
        expected_value: expected,
    }
}
