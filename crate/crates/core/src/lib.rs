//! Risk-averse scalarization for multiobjective stochastic programs.
//!
//! A decision evaluated under `K` criteria and `J` scenarios yields a matrix
//! of values to be minimized. This crate reduces that matrix to a single
//! scalar in two tail-averse steps:
//!
//! 1. per criterion, the **beta-average** over scenarios: the probability-
//!    weighted average of the worst scenarios whose probabilities accumulate
//!    to `beta` (the (1-beta)-CVaR when the boundary is exact);
//! 2. across criteria, the **r-OWA**: the importance-weighted average of the
//!    worst criteria whose importances accumulate to `r`.
//!
//! The composition `h` induces a dominance relation (smaller h dominates)
//! under which minimizers are weakly efficient; a second filtering phase
//! recovers an efficient one among ties. On top of the kernel the crate
//! ships:
//!
//! - [`enumeration`]: the finite-alternative procedure with optional min-max
//!   normalization and (beta, r) parameter sweeps;
//! - [`knapsack`]: seeded instance generation, an exact branch-and-bound
//!   minimizer of `h` over knapsack selections, the naive expectation
//!   baseline, and batch experiments comparing the two;
//! - [`lp`]: export of the flattened mixed-integer model in CPLEX LP text;
//! - [`io`]: the CSV/JSON formats spoken by the `riskowa` CLI.
//!
//! The aggregation kernel is generic over the scalar type through [`Real`];
//! every type defaults to `f64`, which is what the solvers and file formats
//! use.

pub mod aggregation;
pub mod enumeration;
pub mod error;
pub mod io;
pub mod knapsack;
pub mod lp;
pub mod real;

pub use aggregation::{
    beta_average, dominates, evaluate_h, owa_weights, r_owa, r_owa_polytope_oracle, CriteriaSet,
    HEvaluation, OutcomeMatrix, OwaWeights, RiskParams, ScenarioSet,
};
pub use enumeration::{
    normalize, second_phase, solve_enumeration, sweep, AlternativeSet, RankedResult, SweepCell,
    SweepGrid,
};
pub use error::{Error, Result};
pub use knapsack::{
    compute_deltas, exhaustive_oracle, exhaustive_oracle_naive, generate_instance,
    mean_objective, objective_matrix, solve_msp, solve_msp_with_budget, solve_naive,
    tail_objective, DeltaReport, KnapsackInstance, KnapsackSolution,
};
pub use real::Real;
