//! Export of the flattened tail-averse knapsack model in CPLEX LP text form,
//! for cross-validation with external MILP solvers.
//!
//! The exported model minimizes `z + sum_k (w_k/r) v_k` subject to one
//! `owa_k{k}` row per criterion linking the outer and inner duals, one
//! `beta_k{k}_j{j}` row per criterion-scenario pair bounding the leftover
//! value, and the `cap` knapsack row. For any fixed selection, minimizing
//! the continuous variables of this model reproduces the h-value of the
//! leftover matrix; [`fixed_decision_lp_value`] evaluates that continuous
//! optimum in closed form.

use std::fmt::Write as _;

use crate::aggregation::RiskParams;
use crate::error::{Error, Result};
use crate::knapsack::KnapsackInstance;

/// Direction of a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Ge,
    Le,
}

/// One `coefficient * variable` term.
#[derive(Debug, Clone, PartialEq)]
pub struct LpTerm {
    pub coef: f64,
    pub var: String,
}

/// A named linear constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<LpTerm>,
    pub sense: RowSense,
    pub rhs: f64,
}

/// A linear model with free-variable declarations and binary variables.
/// Variables without a declaration default to `>= 0`, as in the LP format.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub objective: Vec<LpTerm>,
    pub rows: Vec<LpRow>,
    pub free_vars: Vec<String>,
    pub binary_vars: Vec<String>,
}

impl LpModel {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of distinct variables mentioned anywhere in the model.
    pub fn n_vars(&self) -> usize {
        let mut names: Vec<&str> = self
            .objective
            .iter()
            .chain(self.rows.iter().flat_map(|r| r.terms.iter()))
            .map(|t| t.var.as_str())
            .chain(self.free_vars.iter().map(String::as_str))
            .chain(self.binary_vars.iter().map(String::as_str))
            .collect();
        names.sort_unstable();
        names.dedup();
        names.len()
    }
}

fn term(coef: f64, var: String) -> LpTerm {
    LpTerm { coef, var }
}

/// Builds the flattened model for an instance. Constant benefit sums are
/// moved to the right-hand side, so the `beta` rows read
/// `zk_k + y_kj + sum_i b x_i >= sum_i b`. Zero coefficients are dropped.
pub fn build_lp_model(inst: &KnapsackInstance, rp: &RiskParams) -> LpModel {
    let n_k = inst.n_criteria();
    let n_j = inst.n_scenarios();
    let n_i = inst.n_items();
    let w = inst.criteria().importances();
    let probs = inst.scenarios().probs();

    let mut objective = vec![term(1.0, "z".into())];
    for (k, &wk) in w.iter().enumerate() {
        objective.push(term(wk / rp.r(), format!("v_k{}", k + 1)));
    }

    let mut rows = Vec::with_capacity(n_k + n_k * n_j + 1);
    for k in 0..n_k {
        let mut terms = vec![
            term(1.0, "z".into()),
            term(1.0, format!("v_k{}", k + 1)),
            term(-1.0, format!("zk_k{}", k + 1)),
        ];
        for (j, &pj) in probs.iter().enumerate() {
            let coef = -pj / rp.beta();
            if coef != 0.0 {
                terms.push(term(coef, format!("y_k{}_j{}", k + 1, j + 1)));
            }
        }
        rows.push(LpRow {
            name: format!("owa_k{}", k + 1),
            terms,
            sense: RowSense::Ge,
            rhs: 0.0,
        });
    }
    for k in 0..n_k {
        for j in 0..n_j {
            let mut terms = vec![
                term(1.0, format!("zk_k{}", k + 1)),
                term(1.0, format!("y_k{}_j{}", k + 1, j + 1)),
            ];
            let mut total = 0.0;
            for i in 0..n_i {
                let b = inst.benefit(i, k, j);
                total += b;
                if b != 0.0 {
                    terms.push(term(b, format!("x_i{}", i + 1)));
                }
            }
            rows.push(LpRow {
                name: format!("beta_k{}_j{}", k + 1, j + 1),
                terms,
                sense: RowSense::Ge,
                rhs: total,
            });
        }
    }
    let cap_terms = inst
        .weights()
        .iter()
        .enumerate()
        .map(|(i, &v)| term(v, format!("x_i{}", i + 1)))
        .collect();
    rows.push(LpRow {
        name: "cap".into(),
        terms: cap_terms,
        sense: RowSense::Le,
        rhs: inst.capacity(),
    });

    let mut free_vars = vec!["z".to_string()];
    free_vars.extend((1..=n_k).map(|k| format!("zk_k{k}")));
    let binary_vars = (1..=n_i).map(|i| format!("x_i{i}")).collect();

    LpModel {
        objective,
        rows,
        free_vars,
        binary_vars,
    }
}

/// 17 significant digits; enough to reproduce any `f64` exactly.
fn fmt_coef(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_terms(out: &mut String, terms: &[LpTerm]) {
    for (i, t) in terms.iter().enumerate() {
        let sign = if t.coef < 0.0 { "-" } else { "+" };
        if i == 0 {
            if t.coef < 0.0 {
                let _ = write!(out, "- {} {}", fmt_coef(-t.coef), t.var);
            } else {
                let _ = write!(out, "{} {}", fmt_coef(t.coef), t.var);
            }
        } else {
            let _ = write!(out, " {} {} {}", sign, fmt_coef(t.coef.abs()), t.var);
        }
    }
}

/// Renders the model as CPLEX LP text: Minimize / Subject To / Bounds /
/// Binaries / End, one row per line. Byte-identical across runs for the
/// same model.
pub fn write_lp_text(model: &LpModel) -> String {
    let mut out = String::new();
    out.push_str("Minimize\n obj: ");
    write_terms(&mut out, &model.objective);
    out.push_str("\nSubject To\n");
    for row in &model.rows {
        let _ = write!(out, " {}: ", row.name);
        write_terms(&mut out, &row.terms);
        let sense = match row.sense {
            RowSense::Ge => ">=",
            RowSense::Le => "<=",
        };
        let _ = writeln!(out, " {} {}", sense, fmt_coef(row.rhs));
    }
    if !model.free_vars.is_empty() {
        out.push_str("Bounds\n");
        for v in &model.free_vars {
            let _ = writeln!(out, " {v} free");
        }
    }
    if !model.binary_vars.is_empty() {
        out.push_str("Binaries\n");
        for v in &model.binary_vars {
            let _ = writeln!(out, " {v}");
        }
    }
    out.push_str("End\n");
    out
}

/// Parses text produced by [`write_lp_text`] back into a model; the
/// round-trip is structurally exact. Accepts one row per line.
pub fn parse_lp_text(text: &str) -> Result<LpModel> {
    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Objective,
        Rows,
        Bounds,
        Binaries,
        Done,
    }
    let mut section = Section::Preamble;
    let mut model = LpModel {
        objective: Vec::new(),
        rows: Vec::new(),
        free_vars: Vec::new(),
        binary_vars: Vec::new(),
    };
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "Minimize" => {
                section = Section::Objective;
                continue;
            }
            "Subject To" => {
                section = Section::Rows;
                continue;
            }
            "Bounds" => {
                section = Section::Bounds;
                continue;
            }
            "Binaries" => {
                section = Section::Binaries;
                continue;
            }
            "End" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Preamble | Section::Done => {
                return Err(Error::Parse(format!("unexpected line: {line}")));
            }
            Section::Objective => {
                let (_, expr) = split_label(line)?;
                let (terms, rest) = parse_terms(expr)?;
                if !rest.is_empty() {
                    return Err(Error::Parse(format!("trailing tokens in objective: {rest:?}")));
                }
                model.objective = terms;
            }
            Section::Rows => {
                let (name, expr) = split_label(line)?;
                let (terms, rest) = parse_terms(expr)?;
                let (sense, rhs) = match rest.as_slice() {
                    [s, v] => {
                        let sense = match *s {
                            ">=" => RowSense::Ge,
                            "<=" => RowSense::Le,
                            other => {
                                return Err(Error::Parse(format!("bad sense {other:?} in {name}")))
                            }
                        };
                        let rhs = v
                            .parse::<f64>()
                            .map_err(|_| Error::Parse(format!("bad rhs {v:?} in {name}")))?;
                        (sense, rhs)
                    }
                    other => {
                        return Err(Error::Parse(format!(
                            "missing sense/rhs in row {name}: {other:?}"
                        )))
                    }
                };
                model.rows.push(LpRow {
                    name: name.to_string(),
                    terms,
                    sense,
                    rhs,
                });
            }
            Section::Bounds => {
                let mut parts = line.split_whitespace();
                match (parts.next(), parts.next(), parts.next()) {
                    (Some(name), Some("free"), None) => model.free_vars.push(name.to_string()),
                    _ => return Err(Error::Parse(format!("unsupported bound: {line}"))),
                }
            }
            Section::Binaries => {
                for name in line.split_whitespace() {
                    model.binary_vars.push(name.to_string());
                }
            }
        }
    }
    if section != Section::Done {
        return Err(Error::Parse("missing End marker".into()));
    }
    Ok(model)
}

fn split_label(line: &str) -> Result<(&str, &str)> {
    line.split_once(':')
        .map(|(name, rest)| (name.trim(), rest.trim()))
        .ok_or_else(|| Error::Parse(format!("missing row label in: {line}")))
}

/// Parses `[-] coef var (+|- coef var)*`, returning the terms and any tokens
/// after them (the sense and right-hand side for constraint rows).
fn parse_terms(expr: &str) -> Result<(Vec<LpTerm>, Vec<&str>)> {
    let tokens: Vec<&str> = expr.split_whitespace().collect();
    let mut terms = Vec::new();
    let mut idx = 0;
    let mut sign = 1.0;
    let mut sign_pending = false;
    while idx < tokens.len() {
        match tokens[idx] {
            "+" => {
                sign = 1.0;
                sign_pending = true;
                idx += 1;
            }
            "-" => {
                sign = -1.0;
                sign_pending = true;
                idx += 1;
            }
            ">=" | "<=" => break,
            tok => {
                let coef: f64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("expected coefficient, got {tok:?}")))?;
                let var = tokens
                    .get(idx + 1)
                    .ok_or_else(|| Error::Parse(format!("coefficient {tok} without variable")))?;
                terms.push(term(sign * coef, (*var).to_string()));
                sign = 1.0;
                sign_pending = false;
                idx += 2;
            }
        }
    }
    if sign_pending {
        return Err(Error::Parse("dangling sign in expression".into()));
    }
    Ok((terms, tokens[idx..].to_vec()))
}

/// Continuous optimum of the exported model for a fixed selection, in closed
/// form: the inner dual takes `zk_k` at the scenario value where the sorted
/// probabilities reach `beta` and `y_kj` as the positive parts above it; the
/// outer dual does the same across criteria with `r`.
///
/// Equals the h-value of the selection's leftover matrix; useful as an
/// independent check of the model.
pub fn fixed_decision_lp_value(
    inst: &KnapsackInstance,
    rp: &RiskParams,
    x: &[bool],
) -> Result<f64> {
    let m = crate::knapsack::objective_matrix(inst, x)?;
    let probs = inst.scenarios().probs();
    let g: Vec<f64> = (0..m.n_criteria())
        .map(|k| threshold_value(m.row(k), probs, rp.beta()))
        .collect();
    Ok(threshold_value(&g, inst.criteria().importances(), rp.r()))
}

/// `z* + (1/budget) * sum_i mass_i * max(0, value_i - z*)` where `z*` is the
/// value at which the descending-sorted masses accumulate to `budget`.
fn threshold_value(values: &[f64], masses: &[f64], budget: f64) -> f64 {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let mut cum = 0.0;
    let mut threshold = values[order[order.len() - 1]];
    for &i in &order {
        cum += masses[i];
        if cum >= budget {
            threshold = values[i];
            break;
        }
    }
    let mut excess = 0.0;
    for (i, &v) in values.iter().enumerate() {
        if v > threshold {
            excess += masses[i] * (v - threshold);
        }
    }
    threshold + excess / budget
}
