//! Group-fair contextual bandit simulation.
//!
//! The library has four layers:
//!
//! * [`polytope`] — the fairness constraint set (a simplex slice carved out
//!   by per-group mass bands) with exact rational vertex enumeration, linear
//!   maximization, the top-two vertex optimality gap, its structural lower
//!   bound, a total-unimodularity checker and exact uniform projection.
//! * [`env`] — stochastic contextual reward environments with exact mean
//!   matrices, plus the exact optimal fair and unconstrained baselines.
//! * [`policy`] / [`metrics`] — fairness-constrained bandit policies that
//!   emit a feasible distribution every step, and the regret / empirical
//!   fairness accounting around them.
//! * [`experiment`] / [`config`] — a seeded, replicated, config-driven
//!   experiment runner with CSV/JSON artifacts.
//!
//! Geometry is exact (`num::BigRational`); simulation hot loops run on
//! floats. With the default `parallel` feature, replications and the
//! combinatorial scans fan out through rayon.

pub mod config;
pub mod env;
pub mod error;
mod exec;
pub mod experiment;
pub mod linalg;
pub mod metrics;
pub mod policy;
pub mod polytope;
mod projection;
pub mod rational;
mod simplex;

pub use config::{parse_config, ExperimentConfig, PolicySpec};
pub use env::{
    optimal_fair_policy, optimal_unconstrained_policy, Environment, FairOptimum, NoiseModel,
    UnconstrainedOptimum,
};
pub use error::{Error, Result};
pub use exec::with_thread_pool;
pub use experiment::{
    emit_plot_data, run_experiment, run_policy, run_policy_sequential, write_artifacts,
    ExperimentOutput, ExperimentSummary, PolicyOutcome,
};
pub use metrics::{
    constraint_violations, empirical_fairness, fair_regret, regret, FairnessReport, History,
    RegretTrace, StepRecord,
};
pub use policy::{ContextualPolicy, PolicyKind, PolicyParams, PolicyState};
pub use polytope::{
    constraint_matrix, gap_lower_bound, is_totally_unimodular, is_totally_unimodular_with_cap,
    FairPolytope, FairnessBounds, GapResult, GapValue, GroupStructure,
};
