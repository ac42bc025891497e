//! Exact solvers for the knapsack models.
//!
//! `solve_msp` minimizes the h-value of the leftover benefits with a
//! best-first branch-and-bound. A node fixes a prefix of the items (in
//! efficiency order) as taken or excluded. Its lower bound has two parts:
//!
//! * the h-value of the already-excluded benefits, with every undecided item
//!   treated as taken — valid because benefits are nonnegative and h is
//!   componentwise nondecreasing in the leftover matrix;
//! * a capacity term: every completion must exclude undecided items whose
//!   weights cover the capacity deficit, and under the optimal aggregation
//!   weights of the first part each exclusion adds at least its weighted
//!   benefit, so the cheapest fractional cover is a valid increment.
//!
//! `solve_naive` minimizes the weighted-mean leftover, equivalent to a
//! classic 0/1 knapsack with the fractional-relaxation bound.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::{
    mean_objective, tail_objective, KnapsackInstance, KnapsackSolution, CAPACITY_TOL,
};
use crate::aggregation::{beta_average, r_owa, RiskParams};
use crate::error::{Error, Result};

/// Pruning tolerance: a node survives only if its bound beats the incumbent
/// by more than this.
const PRUNE_TOL: f64 = 1e-9;

const MAX_BB_ITEMS: usize = 256;

/// Fixed-width item set; supports instances up to [`MAX_BB_ITEMS`] items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct ItemSet([u64; 4]);

impl ItemSet {
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    fn with(mut self, i: usize) -> Self {
        self.0[i / 64] |= 1 << (i % 64);
        self
    }
}

struct Node {
    bound: f64,
    depth: usize,
    taken_weight: f64,
    excluded: ItemSet,
    seq: u64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap pops the maximum; order so that the smallest bound wins,
        // then the deepest node, then insertion order.
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap()
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Assigns each entry its capped share of the budget in value-descending
/// order; the mass vector of an optimal aggregation weighting.
fn capped_masses(values: &[f64], masses: &[f64], budget: f64, out: &mut [f64]) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let mut cum = 0.0;
    for &i in &order {
        let m = masses[i];
        out[i] = if cum + m <= budget {
            m
        } else {
            (budget - cum).max(0.0)
        };
        cum += m;
    }
}

/// Scratch evaluator for node bounds; reuses buffers across the many bound
/// evaluations of one solve.
struct BoundEvaluator<'a> {
    inst: &'a KnapsackInstance,
    rp: &'a RiskParams,
    /// Leftover matrix of the current exclusion set, row-major K x J.
    matrix: Vec<f64>,
    /// Per-criterion beta-averages of `matrix`.
    g: Vec<f64>,
    /// Optimal scenario masses per criterion row, K x J.
    row_masses: Vec<f64>,
    /// Optimal importance masses across criteria.
    g_masses: Vec<f64>,
    /// Per item, its benefit weighted by the optimal aggregation cells: the
    /// least it adds to h if excluded.
    item_cost: Vec<f64>,
    /// Scratch for the fractional cover.
    cover_buf: Vec<(f64, f64)>,
}

impl<'a> BoundEvaluator<'a> {
    fn new(inst: &'a KnapsackInstance, rp: &'a RiskParams) -> Self {
        let cells = inst.n_criteria() * inst.n_scenarios();
        Self {
            inst,
            rp,
            matrix: vec![0.0; cells],
            g: vec![0.0; inst.n_criteria()],
            row_masses: vec![0.0; cells],
            g_masses: vec![0.0; inst.n_criteria()],
            item_cost: vec![0.0; inst.n_items()],
            cover_buf: Vec::with_capacity(inst.n_items()),
        }
    }

    /// h of the exclusion set's leftover matrix, and as a side effect the
    /// per-item exclusion costs under the optimal aggregation weights.
    fn evaluate(&mut self, excluded: &ItemSet) -> f64 {
        let inst = self.inst;
        let (nk, nj) = (inst.n_criteria(), inst.n_scenarios());
        self.matrix.fill(0.0);
        for i in 0..inst.n_items() {
            if excluded.contains(i) {
                let block = inst.benefit_block(i);
                for (cell, &b) in self.matrix.iter_mut().zip(block) {
                    *cell += b;
                }
            }
        }
        let probs = inst.scenarios().probs();
        for k in 0..nk {
            let row = &self.matrix[k * nj..(k + 1) * nj];
            self.g[k] =
                beta_average(row, inst.scenarios(), self.rp.beta()).expect("validated dimensions");
            capped_masses(
                row,
                probs,
                self.rp.beta(),
                &mut self.row_masses[k * nj..(k + 1) * nj],
            );
        }
        let h = r_owa(&self.g, inst.criteria(), self.rp.r()).expect("validated dimensions");
        capped_masses(
            &self.g,
            inst.criteria().importances(),
            self.rp.r(),
            &mut self.g_masses,
        );

        // Cell weights c_kj = (lambda_k / r) * (pi_hat_kj / beta) form a
        // distribution; the cost of excluding item i is <c, benefits_i>.
        let scale = 1.0 / (self.rp.r() * self.rp.beta());
        for i in 0..inst.n_items() {
            let block = inst.benefit_block(i);
            let mut cost = 0.0;
            for k in 0..nk {
                let lk = self.g_masses[k];
                if lk == 0.0 {
                    continue;
                }
                let row_m = &self.row_masses[k * nj..(k + 1) * nj];
                let b_row = &block[k * nj..(k + 1) * nj];
                let mut inner = 0.0;
                for (m, b) in row_m.iter().zip(b_row) {
                    inner += m * b;
                }
                cost += lk * inner;
            }
            self.item_cost[i] = cost * scale;
        }
        h
    }

    /// Cheapest way to pick exclusions totaling `weight_required` from the
    /// undecided items, fractionally, at the costs of the last `evaluate`.
    fn fractional_cover(&mut self, undecided: &[usize], weight_required: f64) -> f64 {
        if weight_required <= 0.0 {
            return 0.0;
        }
        self.cover_buf.clear();
        for &i in undecided {
            self.cover_buf
                .push((self.item_cost[i], self.inst.weights()[i]));
        }
        self.cover_buf
            .sort_by(|a, b| (a.0 * b.1).partial_cmp(&(b.0 * a.1)).unwrap());
        let mut need = weight_required;
        let mut cost = 0.0;
        for &(c, w) in &self.cover_buf {
            if w >= need {
                cost += c * (need / w);
                return cost;
            }
            cost += c;
            need -= w;
        }
        cost
    }
}

/// Items sorted by mean-benefit-to-weight ratio, best first; ties keep the
/// original order.
fn efficiency_order(inst: &KnapsackInstance) -> (Vec<usize>, Vec<f64>) {
    let ratios: Vec<f64> = (0..inst.n_items())
        .map(|i| inst.mean_benefit(i) / inst.weights()[i])
        .collect();
    let mut order: Vec<usize> = (0..inst.n_items()).collect();
    order.sort_by(|&a, &b| ratios[b].partial_cmp(&ratios[a]).unwrap());
    (order, ratios)
}

/// Greedy selection in efficiency order; the starting incumbent.
fn greedy_selection(inst: &KnapsackInstance, order: &[usize]) -> Vec<bool> {
    let mut x = vec![false; inst.n_items()];
    let mut weight = 0.0;
    for &i in order {
        if weight + inst.weights()[i] <= inst.capacity() + CAPACITY_TOL {
            weight += inst.weights()[i];
            x[i] = true;
        }
    }
    x
}

/// Exact minimizer of the tail objective `h(leftover)`.
pub fn solve_msp(inst: &KnapsackInstance, rp: &RiskParams) -> Result<KnapsackSolution> {
    solve_msp_with_budget(inst, rp, None)
}

/// Like [`solve_msp`], but stops after exploring `max_nodes` nodes when a
/// budget is given, returning the incumbent and a positive relative gap.
pub fn solve_msp_with_budget(
    inst: &KnapsackInstance,
    rp: &RiskParams,
    max_nodes: Option<u64>,
) -> Result<KnapsackSolution> {
    if inst.n_items() > MAX_BB_ITEMS {
        return Err(Error::TooLarge {
            what: "branch-and-bound solver",
            max: MAX_BB_ITEMS,
            got: inst.n_items(),
        });
    }
    let start = Instant::now();
    let n = inst.n_items();
    let (order, _) = efficiency_order(inst);
    // Undecided weight below each depth of the decision order.
    let mut suffix_weight = vec![0.0; n + 1];
    for d in (0..n).rev() {
        suffix_weight[d] = suffix_weight[d + 1] + inst.weights()[order[d]];
    }
    let mut eval = BoundEvaluator::new(inst, rp);

    let mut best_x = greedy_selection(inst, &order);
    let mut best_obj = {
        let mut excluded = ItemSet::default();
        for (i, &taken) in best_x.iter().enumerate() {
            if !taken {
                excluded = excluded.with(i);
            }
        }
        eval.evaluate(&excluded)
    };

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    {
        let h = eval.evaluate(&ItemSet::default());
        let deficit = suffix_weight[0] - inst.capacity();
        let bound = h + eval.fractional_cover(&order, deficit);
        heap.push(Node {
            bound,
            depth: 0,
            taken_weight: 0.0,
            excluded: ItemSet::default(),
            seq,
        });
    }

    let mut nodes = 0u64;
    let mut gap = 0.0;
    while let Some(node) = heap.pop() {
        if node.bound >= best_obj - PRUNE_TOL {
            // Best-first: every remaining node is at least as bad.
            break;
        }
        nodes += 1;
        if let Some(budget) = max_nodes {
            if nodes > budget {
                gap = ((best_obj - node.bound) / best_obj.abs().max(1e-12)).max(0.0);
                break;
            }
        }

        let item = order[node.depth];
        let depth = node.depth + 1;
        let undecided = &order[depth..];
        let leaf = depth == n;
        let h_here = eval.evaluate(&node.excluded);

        // Take the item: the leftover matrix is untouched, but the remaining
        // capacity shrinks.
        let new_weight = node.taken_weight + inst.weights()[item];
        if new_weight <= inst.capacity() + CAPACITY_TOL {
            if leaf {
                if h_here < best_obj - PRUNE_TOL {
                    best_obj = h_here;
                    best_x = selection_from(&node.excluded, n);
                }
            } else {
                let deficit = suffix_weight[depth] + new_weight - inst.capacity();
                let bound = h_here + eval.fractional_cover(undecided, deficit);
                if bound < best_obj - PRUNE_TOL {
                    seq += 1;
                    heap.push(Node {
                        bound,
                        depth,
                        taken_weight: new_weight,
                        excluded: node.excluded,
                        seq,
                    });
                }
            }
        }

        // Exclude the item: its benefits join the leftover matrix.
        let excluded = node.excluded.with(item);
        let h_excl = eval.evaluate(&excluded);
        if leaf {
            if h_excl < best_obj - PRUNE_TOL {
                best_obj = h_excl;
                best_x = selection_from(&excluded, n);
            }
        } else {
            let deficit = suffix_weight[depth] + node.taken_weight - inst.capacity();
            let bound = h_excl + eval.fractional_cover(undecided, deficit);
            if bound < best_obj - PRUNE_TOL {
                seq += 1;
                heap.push(Node {
                    bound,
                    depth,
                    taken_weight: node.taken_weight,
                    excluded,
                    seq,
                });
            }
        }
    }

    // Report the objective through the canonical evaluation path.
    let objective = tail_objective(inst, rp, &best_x)?;
    Ok(KnapsackSolution {
        x: best_x,
        objective,
        nodes,
        wall_secs: start.elapsed().as_secs_f64(),
        gap,
    })
}

fn selection_from(excluded: &ItemSet, n: usize) -> Vec<bool> {
    (0..n).map(|i| !excluded.contains(i)).collect()
}

/// Exact minimizer of the weighted-mean leftover; a plain 0/1 knapsack that
/// maximizes the mean benefit of the selection under the capacity.
pub fn solve_naive(inst: &KnapsackInstance) -> Result<KnapsackSolution> {
    if inst.n_items() > MAX_BB_ITEMS {
        return Err(Error::TooLarge {
            what: "branch-and-bound solver",
            max: MAX_BB_ITEMS,
            got: inst.n_items(),
        });
    }
    let start = Instant::now();
    let n = inst.n_items();
    let (order, ratios) = efficiency_order(inst);
    let values: Vec<f64> = (0..n).map(|i| inst.mean_benefit(i)).collect();

    struct Dfs<'a> {
        inst: &'a KnapsackInstance,
        order: &'a [usize],
        ratios: &'a [f64],
        values: &'a [f64],
        taken: Vec<bool>,
        best_x: Vec<bool>,
        best_value: f64,
        nodes: u64,
    }

    impl Dfs<'_> {
        /// Fractional-knapsack bound on the value still collectable.
        fn upper_bound(&self, depth: usize, remaining_cap: f64) -> f64 {
            let mut bound = 0.0;
            let mut cap = remaining_cap;
            for &i in &self.order[depth..] {
                let w = self.inst.weights()[i];
                if w <= cap {
                    bound += self.values[i];
                    cap -= w;
                } else {
                    bound += self.ratios[i] * cap;
                    break;
                }
            }
            bound
        }

        fn run(&mut self, depth: usize, value: f64, remaining_cap: f64) {
            self.nodes += 1;
            if depth == self.order.len() {
                if value > self.best_value + 1e-12 {
                    self.best_value = value;
                    self.best_x = self.taken.clone();
                }
                return;
            }
            if value + self.upper_bound(depth, remaining_cap) <= self.best_value + 1e-12 {
                return;
            }
            let i = self.order[depth];
            let w = self.inst.weights()[i];
            if w <= remaining_cap + CAPACITY_TOL {
                self.taken[i] = true;
                self.run(depth + 1, value + self.values[i], remaining_cap - w);
                self.taken[i] = false;
            }
            self.run(depth + 1, value, remaining_cap);
        }
    }

    let mut dfs = Dfs {
        inst,
        order: &order,
        ratios: &ratios,
        values: &values,
        taken: vec![false; n],
        best_x: greedy_selection(inst, &order),
        best_value: 0.0,
        nodes: 0,
    };
    dfs.best_value = dfs
        .best_x
        .iter()
        .enumerate()
        .filter(|(_, &t)| t)
        .map(|(i, _)| values[i])
        .sum();
    dfs.run(0, 0.0, inst.capacity());

    let x = dfs.best_x;
    let objective = mean_objective(inst, &x)?;
    Ok(KnapsackSolution {
        x,
        objective,
        nodes: dfs.nodes,
        wall_secs: start.elapsed().as_secs_f64(),
        gap: 0.0,
    })
}

const MAX_EXHAUSTIVE_ITEMS: usize = 20;

/// Enumerates every feasible selection and returns the tail-objective
/// minimizer. Test oracle; capped at 20 items.
pub fn exhaustive_oracle(inst: &KnapsackInstance, rp: &RiskParams) -> Result<KnapsackSolution> {
    exhaustive_by(inst, |x| tail_objective(inst, rp, x))
}

/// Enumerates every feasible selection and returns the mean-objective
/// minimizer. Test oracle; capped at 20 items.
pub fn exhaustive_oracle_naive(inst: &KnapsackInstance) -> Result<KnapsackSolution> {
    exhaustive_by(inst, |x| mean_objective(inst, x))
}

fn exhaustive_by<F: FnMut(&[bool]) -> Result<f64>>(
    inst: &KnapsackInstance,
    mut objective: F,
) -> Result<KnapsackSolution> {
    let n = inst.n_items();
    if n > MAX_EXHAUSTIVE_ITEMS {
        return Err(Error::TooLarge {
            what: "exhaustive oracle",
            max: MAX_EXHAUSTIVE_ITEMS,
            got: n,
        });
    }
    let start = Instant::now();
    let mut best_x: Option<Vec<bool>> = None;
    let mut best_obj = f64::INFINITY;
    let mut evaluated = 0u64;
    for mask in 0u64..(1 << n) {
        let x: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        if !inst.is_feasible(&x) {
            continue;
        }
        evaluated += 1;
        let obj = objective(&x)?;
        if obj < best_obj {
            best_obj = obj;
            best_x = Some(x);
        }
    }
    Ok(KnapsackSolution {
        // The empty selection is always feasible, so a minimizer exists.
        x: best_x.expect("empty selection is feasible"),
        objective: best_obj,
        nodes: evaluated,
        wall_secs: start.elapsed().as_secs_f64(),
        gap: 0.0,
    })
}
