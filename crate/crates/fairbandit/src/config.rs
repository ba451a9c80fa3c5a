//! Experiment configuration: one TOML file with environment, fairness,
//! policy and run blocks. Rationals travel as `"a/b"` strings (finite
//! decimals are also accepted) so the geometry stays exact end to end.
//! Unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;

use crate::env::{Environment, NoiseModel};
use crate::error::{Error, Result};
use crate::policy::{PolicyKind, PolicyParams};
use crate::polytope::{FairnessBounds, GroupStructure};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    horizon: u64,
    replications: u32,
    seed: u64,
    checkpoints: Option<Vec<u64>>,
    output_dir: Option<String>,
    environment: RawEnvironment,
    fairness: RawFairness,
    policies: Vec<RawPolicy>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnvironment {
    contexts: Vec<String>,
    context_probs: Vec<String>,
    /// `means[context][arm]` as rational strings.
    means: Vec<Vec<String>>,
    noise: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFairness {
    groups: Vec<Vec<usize>>,
    lower: Vec<String>,
    upper: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolicy {
    kind: String,
    name: Option<String>,
    delta: Option<f64>,
    width_scale: Option<f64>,
    eps_scale: Option<f64>,
}

/// A named policy to run against the configured instance.
#[derive(Debug, Clone)]
pub struct PolicySpec {
    pub name: String,
    pub kind: PolicyKind,
    pub params: PolicyParams,
}

/// Fully validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub horizon: u64,
    pub replications: u32,
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    pub output_dir: PathBuf,
    pub env: Environment,
    pub structure: GroupStructure,
    pub bounds: FairnessBounds,
    pub policies: Vec<PolicySpec>,
}

fn parse_rational_field(field: &str, value: &str) -> Result<Rational> {
    parse_rational(value).map_err(|e| Error::config(field, e.to_string()))
}

/// Parses and validates a config file. Errors name the offending field.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigSyntax(e.to_string()))?;

    if raw.horizon < 1 {
        return Err(Error::config("horizon", "must be at least 1"));
    }
    if raw.replications < 1 {
        return Err(Error::config("replications", "must be at least 1"));
    }
    let checkpoints = match raw.checkpoints {
        None => vec![raw.horizon],
        Some(cs) => {
            if cs.is_empty() {
                return Err(Error::config("checkpoints", "must not be empty"));
            }
            for w in cs.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::config("checkpoints", "must be strictly increasing"));
                }
            }
            if cs[0] < 1 || *cs.last().unwrap() > raw.horizon {
                return Err(Error::config("checkpoints", "must lie within [1, horizon]"));
            }
            cs
        }
    };

    // Environment block.
    let e = &raw.environment;
    if e.contexts.is_empty() {
        return Err(Error::config("environment.contexts", "must not be empty"));
    }
    let mut probs = Vec::with_capacity(e.context_probs.len());
    for p in &e.context_probs {
        probs.push(parse_rational_field("environment.context_probs", p)?);
    }
    let mut means = Vec::with_capacity(e.means.len());
    for row in &e.means {
        let mut r = Vec::with_capacity(row.len());
        for m in row {
            r.push(parse_rational_field("environment.means", m)?);
        }
        means.push(r);
    }
    let noise = match e.noise.as_str() {
        "bernoulli" => NoiseModel::Bernoulli,
        "fixed" => NoiseModel::Fixed,
        other => {
            return Err(Error::config(
                "environment.noise",
                format!("unknown noise model `{other}` (expected `bernoulli` or `fixed`)"),
            ))
        }
    };
    let env = Environment::new(e.contexts.clone(), probs, means, noise)
        .map_err(|err| Error::config("environment", err.to_string()))?;

    // Fairness block.
    let f = &raw.fairness;
    let structure = GroupStructure::new(env.arm_count(), f.groups.clone())
        .map_err(|err| Error::config("fairness.groups", err.to_string()))?;
    let mut lower = Vec::with_capacity(f.lower.len());
    for b in &f.lower {
        lower.push(parse_rational_field("fairness.lower", b)?);
    }
    let mut upper = Vec::with_capacity(f.upper.len());
    for b in &f.upper {
        upper.push(parse_rational_field("fairness.upper", b)?);
    }
    let bounds = FairnessBounds::new(lower, upper)
        .map_err(|err| Error::config("fairness", err.to_string()))?;
    if bounds.len() != structure.group_count() {
        return Err(Error::config(
            "fairness",
            format!(
                "{} groups but {} bound pairs",
                structure.group_count(),
                bounds.len()
            ),
        ));
    }

    // Policy blocks.
    if raw.policies.is_empty() {
        return Err(Error::config("policies", "at least one policy required"));
    }
    let mut names = BTreeSet::new();
    let mut policies = Vec::with_capacity(raw.policies.len());
    for p in &raw.policies {
        let kind = PolicyKind::from_str(&p.kind)
            .map_err(|err| Error::config("policies.kind", err.to_string()))?;
        let defaults = PolicyParams::default();
        let params = PolicyParams {
            delta: p.delta.unwrap_or(defaults.delta),
            width_scale: p.width_scale.unwrap_or(defaults.width_scale),
            eps_scale: p.eps_scale.unwrap_or(defaults.eps_scale),
        };
        let name = p.name.clone().unwrap_or_else(|| kind.name().to_string());
        if !names.insert(name.clone()) {
            return Err(Error::config(
                "policies.name",
                format!("duplicate policy name `{name}`; set distinct `name` keys"),
            ));
        }
        policies.push(PolicySpec { name, kind, params });
    }

    Ok(ExperimentConfig {
        horizon: raw.horizon,
        replications: raw.replications,
        seed: raw.seed,
        checkpoints,
        output_dir: PathBuf::from(raw.output_dir.unwrap_or_else(|| "results".into())),
        env,
        structure,
        bounds,
        policies,
    })
}
