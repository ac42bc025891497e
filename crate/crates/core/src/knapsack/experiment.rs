//! Batch comparison of the tail-averse and naive solvers over a factorial
//! design of instance sizes, seeds and risk parameters.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::{
    compute_deltas, generate_instance, solve_msp_with_budget, solve_naive, DeltaReport,
    KnapsackInstance, KnapsackSolution,
};
use crate::aggregation::RiskParams;
use crate::error::{Error, Result};

/// Factor lists and execution limits for one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n_items: Vec<usize>,
    pub n_scenarios: Vec<usize>,
    pub n_criteria: Vec<usize>,
    pub betas: Vec<f64>,
    pub rs: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Instances up to this many items are solved exactly; larger ones run
    /// under `node_budget` and may report a positive gap.
    pub exact_cap: usize,
    /// Node budget for instances above `exact_cap`.
    pub node_budget: u64,
    /// Worker threads; instances are independent and run in parallel, rows
    /// keep configuration order regardless of completion order.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_items: vec![],
            n_scenarios: vec![],
            n_criteria: vec![],
            betas: vec![],
            rs: vec![],
            seeds: vec![],
            exact_cap: 30,
            node_budget: 2_000_000,
            threads: 1,
        }
    }
}

/// One (instance, beta, r) cell of the design.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n_items: usize,
    pub n_scenarios: usize,
    pub n_criteria: usize,
    pub beta: f64,
    pub r: f64,
    pub seed: u64,
    pub report: DeltaReport,
    /// Gap of the tail-averse solve; positive when the node budget ran out.
    pub gap: f64,
}

/// Runs the full factorial design. Instance axes iterate outermost
/// (items, scenarios, criteria, seed) and the (beta, r) pairs innermost;
/// rows come back in exactly that order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if config.n_items.is_empty()
        || config.n_scenarios.is_empty()
        || config.n_criteria.is_empty()
        || config.betas.is_empty()
        || config.rs.is_empty()
        || config.seeds.is_empty()
    {
        return Err(Error::Empty("experiment factor list"));
    }
    // Fail fast on bad parameters instead of inside a worker.
    for &beta in &config.betas {
        for &r in &config.rs {
            RiskParams::new(beta, r)?;
        }
    }
    let mut tasks = Vec::new();
    for &ni in &config.n_items {
        for &nj in &config.n_scenarios {
            for &nk in &config.n_criteria {
                if ni == 0 || nj == 0 || nk == 0 {
                    return Err(Error::InvalidSize(
                        "experiment dimensions must be positive".into(),
                    ));
                }
                for &seed in &config.seeds {
                    tasks.push((ni, nj, nk, seed));
                }
            }
        }
    }

    let results: Mutex<Vec<Option<Vec<ExperimentRow>>>> =
        Mutex::new(vec![None; tasks.len()]);
    let next_task = AtomicUsize::new(0);
    let workers = config.threads.clamp(1, tasks.len().max(1));

    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::new();
        for _ in 0..workers {
            handles.push(scope.spawn(|| -> Result<()> {
                loop {
                    let t = next_task.fetch_add(1, Ordering::Relaxed);
                    if t >= tasks.len() {
                        return Ok(());
                    }
                    let (ni, nj, nk, seed) = tasks[t];
                    let rows = run_instance(config, ni, nj, nk, seed)?;
                    results.lock().unwrap()[t] = Some(rows);
                }
            }));
        }
        for handle in handles {
            handle.join().expect("experiment worker panicked")?;
        }
        Ok(())
    })?;

    let mut rows = Vec::new();
    for slot in results.into_inner().unwrap() {
        rows.extend(slot.expect("every task produces rows"));
    }
    Ok(rows)
}

fn run_instance(
    config: &ExperimentConfig,
    n_items: usize,
    n_scenarios: usize,
    n_criteria: usize,
    seed: u64,
) -> Result<Vec<ExperimentRow>> {
    let inst = generate_instance(n_items, n_scenarios, n_criteria, seed)?;
    let naive_start = Instant::now();
    let naive_sol = solve_naive(&inst)?;
    let t_mip = naive_start.elapsed().as_secs_f64();

    let mut rows = Vec::with_capacity(config.betas.len() * config.rs.len());
    for &beta in &config.betas {
        for &r in &config.rs {
            let rp = RiskParams::new(beta, r)?;
            let (msp_sol, t_msp) = solve_for_cell(config, &inst, &rp)?;
            let report = compute_deltas(&inst, &rp, &msp_sol, &naive_sol, t_msp, t_mip)?;
            rows.push(ExperimentRow {
                n_items,
                n_scenarios,
                n_criteria,
                beta,
                r,
                seed,
                report,
                gap: msp_sol.gap,
            });
        }
    }
    Ok(rows)
}

fn solve_for_cell(
    config: &ExperimentConfig,
    inst: &KnapsackInstance,
    rp: &RiskParams,
) -> Result<(KnapsackSolution, f64)> {
    let budget = if inst.n_items() <= config.exact_cap {
        None
    } else {
        Some(config.node_budget)
    };
    let start = Instant::now();
    let sol = solve_msp_with_budget(inst, rp, budget)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok((sol, elapsed))
}

/// Header of the experiment CSV.
pub const CSV_HEADER: &str =
    "n_items,n_scenarios,n_criteria,beta,r,seed,t_msp,t_mip,delta_time,delta_avg,delta_tail,gap";

/// Renders rows to CSV. Every non-timing column is deterministic for a fixed
/// configuration; `t_msp`, `t_mip` and `delta_time` vary with the hardware.
pub fn write_experiment_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.n_items,
            row.n_scenarios,
            row.n_criteria,
            row.beta,
            row.r,
            row.seed,
            row.report.t_msp,
            row.report.t_mip,
            row.report.delta_time,
            row.report.delta_avg,
            row.report.delta_tail,
            row.gap,
        ));
    }
    out
}
