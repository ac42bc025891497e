//! Multiobjective stochastic knapsack: seeded instance generation, an exact
//! tail-averse solver, the naive expectation baseline, and the comparison
//! metrics between the two.
//!
//! The knapsack is phrased as a minimization: choosing items leaves the value
//! of the *unchosen* items on the table, and that leftover value is what gets
//! aggregated. Everything in this module works in `f64`.

mod generate;
mod solve;

pub mod experiment;

pub use generate::generate_instance;
pub use solve::{
    exhaustive_oracle, exhaustive_oracle_naive, solve_msp, solve_msp_with_budget, solve_naive,
};

use crate::aggregation::{evaluate_h, CriteriaSet, OutcomeMatrix, RiskParams, ScenarioSet};
use crate::error::{Error, Result};

/// Slack for capacity feasibility checks.
pub(crate) const CAPACITY_TOL: f64 = 1e-9;

/// One knapsack instance: item weights, a capacity, and a benefit for each
/// item under every criterion and scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    weights: Vec<f64>,
    capacity: f64,
    /// Flattened `[item][criterion][scenario]`.
    benefits: Vec<f64>,
    scenarios: ScenarioSet,
    criteria: CriteriaSet,
    seed: u64,
}

impl KnapsackInstance {
    pub fn new(
        weights: Vec<f64>,
        capacity: f64,
        benefits: Vec<f64>,
        scenarios: ScenarioSet,
        criteria: CriteriaSet,
        seed: u64,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("knapsack items"));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidSize(format!("item {i} weight {w} must be > 0")));
            }
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(Error::InvalidSize(format!("capacity {capacity} must be > 0")));
        }
        let expect = weights.len() * criteria.len() * scenarios.len();
        if benefits.len() != expect {
            return Err(Error::DimensionMismatch {
                what: "benefit tensor size",
                expected: expect,
                got: benefits.len(),
            });
        }
        for (idx, &b) in benefits.iter().enumerate() {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::NonFinite(format!("benefit entry {idx} ({b})")));
            }
        }
        Ok(Self {
            weights,
            capacity,
            benefits,
            scenarios,
            criteria,
            seed,
        })
    }

    pub fn n_items(&self) -> usize {
        self.weights.len()
    }

    pub fn n_criteria(&self) -> usize {
        self.criteria.len()
    }

    pub fn n_scenarios(&self) -> usize {
        self.scenarios.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn scenarios(&self) -> &ScenarioSet {
        &self.scenarios
    }

    pub fn criteria(&self) -> &CriteriaSet {
        &self.criteria
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Benefit of item `i` under criterion `k` and scenario `j`.
    pub fn benefit(&self, i: usize, k: usize, j: usize) -> f64 {
        let (nk, nj) = (self.n_criteria(), self.n_scenarios());
        self.benefits[(i * nk + k) * nj + j]
    }

    /// Flat benefit block of one item, criterion-major.
    pub fn benefit_block(&self, i: usize) -> &[f64] {
        let stride = self.n_criteria() * self.n_scenarios();
        &self.benefits[i * stride..(i + 1) * stride]
    }

    /// Importance-and-probability weighted total benefit of item `i`; the
    /// item's contribution to the naive objective.
    pub fn mean_benefit(&self, i: usize) -> f64 {
        let w = self.criteria.importances();
        let p = self.scenarios.probs();
        let mut total = 0.0;
        for (k, &wk) in w.iter().enumerate() {
            for (j, &pj) in p.iter().enumerate() {
                total += wk * pj * self.benefit(i, k, j);
            }
        }
        total
    }

    /// Total weight of the selected items.
    pub fn selection_weight(&self, x: &[bool]) -> f64 {
        x.iter()
            .zip(&self.weights)
            .filter(|(&sel, _)| sel)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Whether a selection respects the capacity (within slack).
    pub fn is_feasible(&self, x: &[bool]) -> bool {
        self.selection_weight(x) <= self.capacity + CAPACITY_TOL
    }
}

/// A selection together with its objective value and solve statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSolution {
    /// Selection vector, one entry per item.
    pub x: Vec<bool>,
    /// Objective of the model that produced the solution: h of the leftover
    /// matrix for the tail-averse model, weighted mean of the leftover for
    /// the naive one.
    pub objective: f64,
    /// Branch-and-bound nodes explored (0 for exhaustive enumeration).
    pub nodes: u64,
    /// Wall-clock seconds spent solving.
    pub wall_secs: f64,
    /// Relative optimality gap; 0 for exact solves, positive when a node
    /// budget stopped the search early.
    pub gap: f64,
}

/// Outcome matrix of a selection: entry (k, j) sums the benefits of the
/// items *not* selected.
pub fn objective_matrix(inst: &KnapsackInstance, x: &[bool]) -> Result<OutcomeMatrix> {
    if x.len() != inst.n_items() {
        return Err(Error::DimensionMismatch {
            what: "selection vector vs item count",
            expected: inst.n_items(),
            got: x.len(),
        });
    }
    let (nk, nj) = (inst.n_criteria(), inst.n_scenarios());
    let mut data = vec![0.0; nk * nj];
    for (i, &taken) in x.iter().enumerate() {
        if taken {
            continue;
        }
        let block = inst.benefit_block(i);
        for (cell, &b) in data.iter_mut().zip(block) {
            *cell += b;
        }
    }
    OutcomeMatrix::from_flat(nk, nj, data)
}

/// Weighted-mean objective of a selection (the naive model's objective).
pub fn mean_objective(inst: &KnapsackInstance, x: &[bool]) -> Result<f64> {
    if x.len() != inst.n_items() {
        return Err(Error::DimensionMismatch {
            what: "selection vector vs item count",
            expected: inst.n_items(),
            got: x.len(),
        });
    }
    Ok((0..inst.n_items())
        .filter(|&i| !x[i])
        .map(|i| inst.mean_benefit(i))
        .sum())
}

/// Tail objective of a selection: h of the leftover matrix.
pub fn tail_objective(inst: &KnapsackInstance, rp: &RiskParams, x: &[bool]) -> Result<f64> {
    let m = objective_matrix(inst, x)?;
    Ok(evaluate_h(&m, &inst.scenarios, &inst.criteria, rp)?.h)
}

/// Comparison of the tail-averse solution against the naive one on a single
/// instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    pub t_msp: f64,
    pub t_mip: f64,
    /// `t_msp / t_mip`; hardware-dependent, reported but never asserted on.
    pub delta_time: f64,
    /// Percent loss of the tail-averse solution in the naive objective.
    pub delta_avg: f64,
    /// Percent gain of the tail-averse solution in the tail objective.
    pub delta_tail: f64,
    /// Optimal tail objective, `h(x_msp)`.
    pub z_msp: f64,
    /// Optimal naive objective, `mean(x_mip)`.
    pub z_mip: f64,
    /// Tail objective of the naive solution, `h(x_mip)`.
    pub f_msp_of_mip: f64,
    /// Naive objective of the tail-averse solution, `mean(x_msp)`.
    pub f_mip_of_msp: f64,
    /// Set when a delta ratio had a vanishing denominator with a
    /// non-vanishing numerator.
    pub degenerate: bool,
}

/// Rates the effect of choosing the tail-averse solution over the naive one:
/// `delta_avg = 100 (mean(x_msp) - z_mip) / z_mip` and
/// `delta_tail = 100 (h(x_mip) - z_msp) / h(x_mip)`.
///
/// When a denominator is zero the ratio is reported as 0 if its numerator is
/// below 1e-12, and the report is flagged degenerate otherwise.
pub fn compute_deltas(
    inst: &KnapsackInstance,
    rp: &RiskParams,
    msp_sol: &KnapsackSolution,
    naive_sol: &KnapsackSolution,
    t_msp: f64,
    t_mip: f64,
) -> Result<DeltaReport> {
    let z_msp = tail_objective(inst, rp, &msp_sol.x)?;
    let z_mip = mean_objective(inst, &naive_sol.x)?;
    let f_msp_of_mip = tail_objective(inst, rp, &naive_sol.x)?;
    let f_mip_of_msp = mean_objective(inst, &msp_sol.x)?;

    let mut degenerate = false;
    let mut guarded_ratio = |numerator: f64, denominator: f64| -> f64 {
        if denominator.abs() <= 1e-12 {
            if numerator.abs() <= 1e-12 {
                0.0
            } else {
                degenerate = true;
                0.0
            }
        } else {
            100.0 * numerator / denominator
        }
    };
    let delta_avg = guarded_ratio(f_mip_of_msp - z_mip, z_mip);
    let delta_tail = guarded_ratio(f_msp_of_mip - z_msp, f_msp_of_mip);

    Ok(DeltaReport {
        t_msp,
        t_mip,
        delta_time: t_msp / t_mip,
        delta_avg,
        delta_tail,
        z_msp,
        z_mip,
        f_msp_of_mip,
        f_mip_of_msp,
        degenerate,
    })
}
