//! Fairness-constrained bandit policies.
//!
//! Every fair policy emits, at each step, a full distribution over arms that
//! lies inside the fairness set, samples the arm from it, and updates from
//! the observed reward only. Selection works on the cached float image of
//! the exact vertex set; scanning vertices in their (lexicographic) cache
//! order makes every tie-break deterministic.
//!
//! Two optimistic variants are provided:
//!
//! * [`PolicyKind::FairUcb`] keeps one confidence interval per arm and
//!   maximizes the upper-index vector over the fairness set. The group mass
//!   floors feed every arm samples at a linear rate, so its mistakes die out
//!   and cumulative regret converges to a constant.
//! * [`PolicyKind::FairVertexUcb`] treats the vertex set as the action set:
//!   value estimates come from the per-arm means, while the exploration
//!   bonus is tracked per vertex. Its regret grows logarithmically with a
//!   coefficient governed by the top-two vertex gap, which is the behavior
//!   the regret-growth and gap-sensitivity experiments measure.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polytope::FairPolytope;
use crate::rational::to_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    /// Per-arm upper confidence indices maximized linearly over the set.
    FairUcb,
    /// Optimism over the vertex set with per-vertex exploration bonuses.
    FairVertexUcb,
    /// Explore toward the most uniform fair point, else exploit the means.
    FairEpsGreedy,
    /// Always play the most uniform fair distribution.
    StaticFair,
    /// Classic UCB point mass on the best arm; ignores the fairness set.
    UnconstrainedUcb,
}

impl PolicyKind {
    pub fn is_fair(self) -> bool {
        !matches!(self, PolicyKind::UnconstrainedUcb)
    }

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::FairUcb => "fair_ucb",
            PolicyKind::FairVertexUcb => "fair_vertex_ucb",
            PolicyKind::FairEpsGreedy => "fair_eps_greedy",
            PolicyKind::StaticFair => "static_fair",
            PolicyKind::UnconstrainedUcb => "unconstrained_ucb",
        }
    }
}

impl std::str::FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fair_ucb" => Ok(PolicyKind::FairUcb),
            "fair_vertex_ucb" => Ok(PolicyKind::FairVertexUcb),
            "fair_eps_greedy" => Ok(PolicyKind::FairEpsGreedy),
            "static_fair" => Ok(PolicyKind::StaticFair),
            "unconstrained_ucb" => Ok(PolicyKind::UnconstrainedUcb),
            other => Err(Error::InvalidArgument(format!(
                "unknown policy kind `{other}`"
            ))),
        }
    }
}

/// Confidence and exploration parameters.
#[derive(Debug, Clone, Copy)]
pub struct PolicyParams {
    /// Confidence failure probability in the index width.
    pub delta: f64,
    /// Multiplier on the confidence radius.
    pub width_scale: f64,
    /// Epsilon-greedy schedule numerator: `eps_t = min(1, eps_scale / t)`.
    pub eps_scale: f64,
}

impl Default for PolicyParams {
    fn default() -> Self {
        Self {
            delta: 0.05,
            width_scale: 1.0,
            eps_scale: 5.0,
        }
    }
}

impl PolicyParams {
    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument(
                "delta must lie strictly between 0 and 1".into(),
            ));
        }
        // NaN fails both checks.
        let nonneg = |x: f64| x.is_finite() && x >= 0.0;
        if !nonneg(self.width_scale) || !nonneg(self.eps_scale) {
            return Err(Error::InvalidArgument(
                "width_scale and eps_scale must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Mutable per-policy learning state; single-writer between steps.
#[derive(Debug, Clone)]
pub struct PolicyState {
    kind: PolicyKind,
    params: PolicyParams,
    polytope: Arc<FairPolytope>,
    pulls: Vec<u64>,
    means: Vec<f64>,
    step: u64,
    vertex_pulls: Vec<u64>,
    last_vertex: Option<usize>,
    anchor: Option<Vec<f64>>,
    rng: ChaCha8Rng,
}

impl PolicyState {
    /// Fresh state: zero counts, zero means, optimistic indices. Fair kinds
    /// fail on an empty fairness set.
    pub fn new(
        kind: PolicyKind,
        polytope: Arc<FairPolytope>,
        params: PolicyParams,
        seed: u64,
    ) -> Result<Self> {
        params.validate()?;
        let k = polytope.arm_count();
        let mut vertex_pulls = Vec::new();
        let mut anchor = None;
        if kind.is_fair() {
            let verts = polytope.vertices()?;
            if verts.is_empty() {
                return Err(Error::Infeasible);
            }
            if kind == PolicyKind::FairVertexUcb {
                vertex_pulls = vec![0u64; verts.len()];
            }
            if matches!(kind, PolicyKind::StaticFair | PolicyKind::FairEpsGreedy) {
                anchor = Some(polytope.most_uniform()?.iter().map(to_f64).collect());
            }
        }
        Ok(Self {
            kind,
            params,
            polytope,
            pulls: vec![0; k],
            means: vec![0.0; k],
            step: 0,
            vertex_pulls,
            last_vertex: None,
            anchor,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    pub fn empirical_means(&self) -> &[f64] {
        &self.means
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    fn log_term(&self, actions: usize) -> f64 {
        let t = self.step.max(1) as f64;
        (t * t * actions as f64 / self.params.delta).ln()
    }

    /// Per-arm optimistic index: `min(1, mean + width)`, 1 while unpulled.
    fn arm_indices(&self) -> Vec<f64> {
        let log_term = self.log_term(self.pulls.len());
        self.pulls
            .iter()
            .zip(&self.means)
            .map(|(&n, &m)| {
                if n == 0 {
                    1.0
                } else {
                    let width = self.params.width_scale * (2.0 * log_term / n as f64).sqrt();
                    (m + width).min(1.0)
                }
            })
            .collect()
    }

    /// Arm means with unpulled arms held at the optimistic maximum.
    fn optimistic_means(&self) -> Vec<f64> {
        self.pulls
            .iter()
            .zip(&self.means)
            .map(|(&n, &m)| if n == 0 { 1.0 } else { m })
            .collect()
    }

    /// Vertex chosen by the vertex-level optimism rule (pure).
    fn vertex_choice(&self) -> usize {
        let verts = self
            .polytope
            .vertices_f64()
            .expect("fair state holds a nonempty vertex set");
        let est = self.optimistic_means();
        let log_term = self.log_term(verts.len());
        let mut best = 0usize;
        let mut best_score = f64::NEG_INFINITY;
        for (i, v) in verts.iter().enumerate() {
            let n = self.vertex_pulls[i];
            let score = if n == 0 {
                1.0
            } else {
                let value: f64 = v.iter().zip(&est).map(|(a, b)| a * b).sum();
                let bonus = self.params.width_scale * (2.0 * log_term / n as f64).sqrt();
                (value + bonus).min(1.0)
            };
            if score > best_score {
                best_score = score;
                best = i;
            }
        }
        best
    }

    fn exploit_vertex(&self) -> Vec<f64> {
        let (i, _) = self
            .polytope
            .maximize_linear_f64(&self.means)
            .expect("fair state holds a nonempty vertex set");
        self.polytope.vertices_f64().unwrap()[i].clone()
    }

    fn unconstrained_point_mass(&self) -> Vec<f64> {
        let indices = self.arm_indices();
        let mut best = 0;
        for a in 1..indices.len() {
            if indices[a] > indices[best] {
                best = a;
            }
        }
        let mut p = vec![0.0; indices.len()];
        p[best] = 1.0;
        p
    }

    fn eps_now(&self) -> f64 {
        if self.step == 0 {
            1.0
        } else {
            (self.params.eps_scale / self.step as f64).min(1.0)
        }
    }

    /// Emits the distribution to sample from this step. Mutates only the
    /// exploration bookkeeping (coin flips, chosen-vertex attribution).
    pub fn select_distribution(&mut self) -> Vec<f64> {
        let p = match self.kind {
            PolicyKind::FairUcb => {
                let indices = self.arm_indices();
                let (i, _) = self
                    .polytope
                    .maximize_linear_f64(&indices)
                    .expect("fair state holds a nonempty vertex set");
                self.polytope.vertices_f64().unwrap()[i].clone()
            }
            PolicyKind::FairVertexUcb => {
                let i = self.vertex_choice();
                self.last_vertex = Some(i);
                self.polytope.vertices_f64().unwrap()[i].clone()
            }
            PolicyKind::FairEpsGreedy => {
                let coin: f64 = self.rng.gen();
                if coin < self.eps_now() {
                    self.anchor.clone().expect("anchor present for fair kinds")
                } else {
                    self.exploit_vertex()
                }
            }
            PolicyKind::StaticFair => self.anchor.clone().expect("anchor present for fair kinds"),
            PolicyKind::UnconstrainedUcb => self.unconstrained_point_mass(),
        };
        debug_assert!(
            !self.kind.is_fair() || self.polytope.contains(&p, 1e-9).unwrap_or(false),
            "fair policy emitted a distribution outside the fairness set"
        );
        p
    }

    /// The distribution this state would select an arm from right now, as a
    /// pure function of the state: the epsilon-greedy branch coin is
    /// marginalized into its mixture, everything else is deterministic.
    pub fn conditional_law(&self) -> Vec<f64> {
        match self.kind {
            PolicyKind::FairUcb => {
                let indices = self.arm_indices();
                let (i, _) = self
                    .polytope
                    .maximize_linear_f64(&indices)
                    .expect("fair state holds a nonempty vertex set");
                self.polytope.vertices_f64().unwrap()[i].clone()
            }
            PolicyKind::FairVertexUcb => {
                let i = self.vertex_choice();
                self.polytope.vertices_f64().unwrap()[i].clone()
            }
            PolicyKind::FairEpsGreedy => {
                let eps = self.eps_now();
                let anchor = self.anchor.as_ref().expect("anchor present");
                let exploit = self.exploit_vertex();
                anchor
                    .iter()
                    .zip(&exploit)
                    .map(|(a, e)| eps * a + (1.0 - eps) * e)
                    .collect()
            }
            PolicyKind::StaticFair => self.anchor.clone().expect("anchor present"),
            PolicyKind::UnconstrainedUcb => self.unconstrained_point_mass(),
        }
    }

    /// Inverse-CDF draw of an arm from `p` using this state's generator.
    pub fn sample_arm(&mut self, p: &[f64]) -> Result<usize> {
        if p.len() != self.pulls.len() {
            return Err(Error::DimensionMismatch {
                context: "sampling distribution",
                expected: self.pulls.len(),
                actual: p.len(),
            });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || p.iter().any(|&x| x < -1e-9) {
            return Err(Error::InvalidArgument(
                "sampling distribution is not a probability vector".into(),
            ));
        }
        let u: f64 = self.rng.gen();
        let mut acc = 0.0;
        for (a, &mass) in p.iter().enumerate() {
            acc += mass.max(0.0);
            if u < acc {
                return Ok(a);
            }
        }
        Ok(p.len() - 1)
    }

    /// Bandit feedback: bumps the arm's pull count and running mean.
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<()> {
        if arm >= self.pulls.len() {
            return Err(Error::InvalidArgument(format!("arm {arm} out of range")));
        }
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::InvalidArgument(format!(
                "reward {reward} outside [0, 1]"
            )));
        }
        self.pulls[arm] += 1;
        let n = self.pulls[arm] as f64;
        self.means[arm] += (reward - self.means[arm]) / n;
        self.step += 1;
        if let Some(v) = self.last_vertex.take() {
            if self.kind == PolicyKind::FairVertexUcb {
                self.vertex_pulls[v] += 1;
            }
        }
        Ok(())
    }
}

/// One independent policy state per context; selection and updates dispatch
/// on the observed context, so learning never leaks across contexts.
#[derive(Debug, Clone)]
pub struct ContextualPolicy {
    states: Vec<PolicyState>,
}

impl ContextualPolicy {
    pub fn new(
        kind: PolicyKind,
        context_count: usize,
        polytope: Arc<FairPolytope>,
        params: PolicyParams,
        seed: u64,
    ) -> Result<Self> {
        if context_count == 0 {
            return Err(Error::InvalidArgument("need at least one context".into()));
        }
        let states = (0..context_count)
            .map(|c| {
                PolicyState::new(
                    kind,
                    Arc::clone(&polytope),
                    params,
                    seed.wrapping_add(c as u64),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { states })
    }

    pub fn context_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, context: usize) -> &PolicyState {
        &self.states[context]
    }

    pub fn select(&mut self, context: usize) -> Vec<f64> {
        self.states[context].select_distribution()
    }

    pub fn law(&self, context: usize) -> Vec<f64> {
        self.states[context].conditional_law()
    }

    /// Conditional laws for every context at the current step.
    pub fn laws(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(PolicyState::conditional_law)
            .collect()
    }

    pub fn sample(&mut self, context: usize, p: &[f64]) -> Result<usize> {
        self.states[context].sample_arm(p)
    }

    pub fn update(&mut self, context: usize, arm: usize, reward: f64) -> Result<()> {
        self.states[context].update(arm, reward)
    }
}
