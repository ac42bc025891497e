//! Command-line front end for the riskowa library.
//!
//! Exit codes: 0 on success, 2 on usage or data errors, 3 when a node budget
//! ran out and the result carries a positive optimality gap (outputs are
//! still written).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use riskowa::io::{AlternativesFile, InstanceFile};
use riskowa::knapsack::experiment::{run_experiment, write_experiment_csv, ExperimentConfig};
use riskowa::{
    compute_deltas, normalize, solve_msp_with_budget, solve_naive, sweep, AlternativeSet,
    KnapsackInstance, KnapsackSolution, RiskParams,
};

#[derive(Parser)]
#[command(
    name = "riskowa",
    version,
    about = "Tail-averse aggregation and exact solvers for multiobjective stochastic knapsacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the beta-averages and h-value of one outcome matrix
    Eval {
        /// CSV matrix: one criterion per row, one scenario per column
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated scenario probabilities
        #[arg(long)]
        probs: String,
        /// Comma-separated criterion importances
        #[arg(long)]
        importances: String,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        r: f64,
    },
    /// Rank the alternatives of a JSON file at one (beta, r)
    Rank {
        /// Alternatives JSON file
        #[arg(long)]
        alternatives: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        r: f64,
        /// Min-max normalize criteria across the set first
        #[arg(long)]
        normalize: bool,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every cell of a (beta, r) grid and emit one CSV row per cell
    Sweep {
        #[arg(long)]
        alternatives: PathBuf,
        /// Comma-separated beta values
        #[arg(long)]
        betas: String,
        /// Comma-separated r values
        #[arg(long)]
        rs: String,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded random instance (JSON)
    Gen {
        #[arg(long)]
        items: usize,
        #[arg(long)]
        scenarios: usize,
        #[arg(long)]
        criteria: usize,
        #[arg(long)]
        seed: u64,
        /// Override the default capacity (= number of items)
        #[arg(long)]
        capacity: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance file with the tail-averse model, the naive model,
    /// or both
    #[command(group(ArgGroup::new("mode").required(true).args(["msp", "naive", "both"])))]
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Minimize h of the leftover benefits
        #[arg(long)]
        msp: bool,
        /// Minimize the weighted-mean leftover
        #[arg(long)]
        naive: bool,
        /// Solve both models and report the comparison deltas
        #[arg(long)]
        both: bool,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        /// Node budget for the tail-averse solve; exact when omitted
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a factorial experiment and write the report CSV
    Experiment {
        /// Item counts (comma list; a..b ranges allowed)
        #[arg(long)]
        items: String,
        #[arg(long)]
        scenarios: String,
        #[arg(long)]
        criteria: String,
        #[arg(long)]
        betas: String,
        #[arg(long)]
        rs: String,
        /// Seeds (comma list; a..b ranges allowed)
        #[arg(long)]
        seeds: String,
        /// Largest size solved exactly; bigger instances get the node budget
        #[arg(long, default_value_t = 30)]
        exact_cap: usize,
        #[arg(long, default_value_t = 2_000_000)]
        node_budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export the flattened mixed-integer model in CPLEX LP format
    Export {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Eval {
            matrix,
            probs,
            importances,
            beta,
            r,
        } => cmd_eval(&matrix, &probs, &importances, beta, r),
        Command::Rank {
            alternatives,
            beta,
            r,
            normalize,
            out,
        } => cmd_sweep(&alternatives, &[beta], &[r], normalize, out.as_deref()),
        Command::Sweep {
            alternatives,
            betas,
            rs,
            normalize,
            out,
        } => {
            let betas = parse_f64_list(&betas)?;
            let rs = parse_f64_list(&rs)?;
            cmd_sweep(&alternatives, &betas, &rs, normalize, out.as_deref())
        }
        Command::Gen {
            items,
            scenarios,
            criteria,
            seed,
            capacity,
            out,
        } => cmd_gen(items, scenarios, criteria, seed, capacity, out.as_deref()),
        Command::Solve {
            instance,
            msp,
            naive: _,
            both,
            beta,
            r,
            node_budget,
            out,
        } => {
            let mode = if both {
                SolveMode::Both
            } else if msp {
                SolveMode::Msp
            } else {
                SolveMode::Naive
            };
            cmd_solve(&instance, mode, beta, r, node_budget, out.as_deref())
        }
        Command::Experiment {
            items,
            scenarios,
            criteria,
            betas,
            rs,
            seeds,
            exact_cap,
            node_budget,
            out,
        } => {
            let config = ExperimentConfig {
                n_items: parse_usize_list(&items)?,
                n_scenarios: parse_usize_list(&scenarios)?,
                n_criteria: parse_usize_list(&criteria)?,
                betas: parse_f64_list(&betas)?,
                rs: parse_f64_list(&rs)?,
                seeds: parse_u64_list(&seeds)?,
                exact_cap,
                node_budget,
                threads: worker_threads(),
            };
            cmd_experiment(&config, &out)
        }
        Command::Export {
            instance,
            beta,
            r,
            out,
        } => cmd_export(&instance, beta, r, &out),
    }
}

/// Worker count for experiments: the available parallelism, capped by the
/// RISKOWA_THREADS environment variable.
fn worker_threads() -> usize {
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("RISKOWA_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(cap) if cap >= 1 => available.min(cap),
        _ => available,
    }
}

fn cmd_eval(
    matrix_path: &Path,
    probs: &str,
    importances: &str,
    beta: f64,
    r: f64,
) -> Result<ExitCode, String> {
    let text = read_file(matrix_path)?;
    let rows = riskowa::io::read_matrix_csv(&text).map_err(|e| e.to_string())?;
    let matrix = riskowa::OutcomeMatrix::from_rows(rows).map_err(|e| e.to_string())?;
    let scen = riskowa::ScenarioSet::new(
        riskowa::io::parse_number_list(probs).map_err(|e| format!("--probs: {e}"))?,
    )
    .map_err(|e| e.to_string())?;
    let crit = riskowa::CriteriaSet::new(
        riskowa::io::parse_number_list(importances).map_err(|e| format!("--importances: {e}"))?,
    )
    .map_err(|e| e.to_string())?;
    let rp = RiskParams::new(beta, r).map_err(|e| e.to_string())?;
    let eval = riskowa::evaluate_h(&matrix, &scen, &crit, &rp).map_err(|e| e.to_string())?;
    for (k, g) in eval.g.iter().enumerate() {
        println!("g_{} = {:.6}", k + 1, g);
    }
    println!("h = {:.6}", eval.h);
    Ok(ExitCode::SUCCESS)
}

fn load_alternatives(path: &Path, normalize_flag: bool) -> Result<AlternativeSet, String> {
    let text = read_file(path)?;
    let set = AlternativesFile::parse(&text)
        .and_then(|file| file.to_alternative_set())
        .map_err(|e| e.to_string())?;
    Ok(if normalize_flag { normalize(&set) } else { set })
}

fn cmd_sweep(
    alternatives: &Path,
    betas: &[f64],
    rs: &[f64],
    normalize_flag: bool,
    out: Option<&Path>,
) -> Result<ExitCode, String> {
    let set = load_alternatives(alternatives, normalize_flag)?;
    let grid = sweep(&set, betas, rs).map_err(|e| e.to_string())?;
    let mut csv = String::from("beta,r,winner,h\n");
    for (bi, &beta) in grid.betas.iter().enumerate() {
        for (ri, &r) in grid.rs.iter().enumerate() {
            let cell = grid.cell(bi, ri);
            csv.push_str(&format!(
                "{},{},{},{}\n",
                beta,
                r,
                set.names()[cell.winner],
                cell.h
            ));
        }
    }
    emit(out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(
    items: usize,
    scenarios: usize,
    criteria: usize,
    seed: u64,
    capacity: Option<f64>,
    out: Option<&Path>,
) -> Result<ExitCode, String> {
    let mut inst =
        riskowa::generate_instance(items, scenarios, criteria, seed).map_err(|e| e.to_string())?;
    if let Some(capacity) = capacity {
        inst = override_capacity(&inst, capacity).map_err(|e| e.to_string())?;
    }
    emit(out, &InstanceFile::from_instance(&inst).to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn override_capacity(inst: &KnapsackInstance, capacity: f64) -> riskowa::Result<KnapsackInstance> {
    KnapsackInstance::new(
        inst.weights().to_vec(),
        capacity,
        (0..inst.n_items())
            .flat_map(|i| inst.benefit_block(i).to_vec())
            .collect(),
        inst.scenarios().clone(),
        inst.criteria().clone(),
        inst.seed(),
    )
}

#[derive(Clone, Copy)]
enum SolveMode {
    Msp,
    Naive,
    Both,
}

fn cmd_solve(
    instance: &Path,
    mode: SolveMode,
    beta: Option<f64>,
    r: Option<f64>,
    node_budget: Option<u64>,
    out: Option<&Path>,
) -> Result<ExitCode, String> {
    let inst = load_instance(instance)?;
    let rp = match mode {
        SolveMode::Naive => None,
        _ => {
            let beta = beta.ok_or("--beta is required for the tail-averse model")?;
            let r = r.ok_or("--r is required for the tail-averse model")?;
            Some(RiskParams::new(beta, r).map_err(|e| e.to_string())?)
        }
    };

    let mut gap = 0.0;
    let mut doc = String::from("{\n");
    let msp_result = match mode {
        SolveMode::Msp | SolveMode::Both => {
            let start = std::time::Instant::now();
            let sol = solve_msp_with_budget(&inst, rp.as_ref().unwrap(), node_budget)
                .map_err(|e| e.to_string())?;
            gap = sol.gap;
            Some((sol, start.elapsed().as_secs_f64()))
        }
        SolveMode::Naive => None,
    };
    let naive_result = match mode {
        SolveMode::Naive | SolveMode::Both => {
            let start = std::time::Instant::now();
            let sol = solve_naive(&inst).map_err(|e| e.to_string())?;
            Some((sol, start.elapsed().as_secs_f64()))
        }
        SolveMode::Msp => None,
    };

    if let Some((sol, _)) = &msp_result {
        doc.push_str(&solution_json("msp", sol));
    }
    if let Some((sol, _)) = &naive_result {
        if msp_result.is_some() {
            doc.push_str(",\n");
        }
        doc.push_str(&solution_json("naive", sol));
    }
    if let (Some((msp, t_msp)), Some((naive, t_mip))) = (&msp_result, &naive_result) {
        let report = compute_deltas(&inst, rp.as_ref().unwrap(), msp, naive, *t_msp, *t_mip)
            .map_err(|e| e.to_string())?;
        doc.push_str(&format!(
            ",\n  \"deltas\": {{\n    \"delta_avg\": {},\n    \"delta_tail\": {},\n    \
             \"z_msp\": {},\n    \"z_mip\": {},\n    \"f_msp_of_mip\": {},\n    \
             \"f_mip_of_msp\": {},\n    \"degenerate\": {}\n  }}",
            report.delta_avg,
            report.delta_tail,
            report.z_msp,
            report.z_mip,
            report.f_msp_of_mip,
            report.f_mip_of_msp,
            report.degenerate
        ));
    }
    doc.push_str("\n}\n");
    emit(out, &doc)?;
    Ok(if gap > 0.0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

/// Renders one solution as a JSON member; timings are deliberately omitted so
/// that reruns are byte-identical.
fn solution_json(label: &str, sol: &KnapsackSolution) -> String {
    let x: Vec<&str> = sol.x.iter().map(|&b| if b { "1" } else { "0" }).collect();
    format!(
        "  \"{label}\": {{\n    \"x\": [{}],\n    \"objective\": {},\n    \"nodes\": {},\n    \
         \"gap\": {}\n  }}",
        x.join(", "),
        sol.objective,
        sol.nodes,
        sol.gap
    )
}

fn cmd_experiment(config: &ExperimentConfig, out: &Path) -> Result<ExitCode, String> {
    let rows = run_experiment(config).map_err(|e| e.to_string())?;
    let csv = write_experiment_csv(&rows);
    fs::write(out, csv).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    let exhausted = rows.iter().any(|row| row.gap > 0.0);
    Ok(if exhausted {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_export(instance: &Path, beta: f64, r: f64, out: &Path) -> Result<ExitCode, String> {
    let inst = load_instance(instance)?;
    let rp = RiskParams::new(beta, r).map_err(|e| e.to_string())?;
    let model = riskowa::lp::build_lp_model(&inst, &rp);
    let text = riskowa::lp::write_lp_text(&model);
    fs::write(out, text).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn load_instance(path: &Path) -> Result<KnapsackInstance, String> {
    let text = read_file(path)?;
    InstanceFile::parse(&text)
        .and_then(|file| file.to_instance())
        .map_err(|e| e.to_string())
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, String> {
    riskowa::io::parse_number_list(text).map_err(|e| e.to_string())
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>, String> {
    parse_u64_list(text).map(|v| v.into_iter().map(|n| n as usize).collect())
}

/// Comma-separated integers; each token may be a single value or an
/// inclusive `a..b` range.
fn parse_u64_list(text: &str) -> Result<Vec<u64>, String> {
    let mut values = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if let Some((lo, hi)) = token.split_once("..") {
            let lo: u64 = lo
                .trim()
                .parse()
                .map_err(|_| format!("invalid range start {lo:?}"))?;
            let hi: u64 = hi
                .trim()
                .parse()
                .map_err(|_| format!("invalid range end {hi:?}"))?;
            if lo > hi {
                return Err(format!("empty range {token:?}"));
            }
            values.extend(lo..=hi);
        } else {
            values.push(
                token
                    .parse()
                    .map_err(|_| format!("invalid integer {token:?}"))?,
            );
        }
    }
    Ok(values)
}
