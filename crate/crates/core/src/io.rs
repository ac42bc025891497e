//! Textual interchange formats used by the CLI: a numeric CSV matrix for
//! single evaluations, a JSON schema for named alternative sets, and a JSON
//! schema for knapsack instances. All emitters are deterministic.

use serde::{Deserialize, Serialize};

use crate::aggregation::{CriteriaSet, OutcomeMatrix, ScenarioSet};
use crate::enumeration::AlternativeSet;
use crate::error::{Error, Result};
use crate::knapsack::KnapsackInstance;

/// Parses a CSV matrix of numbers: one criterion per row, one scenario per
/// column. Errors name the offending cell.
pub fn read_matrix_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (ci, cell) in line.split(',').enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "matrix row {}, column {}: invalid number {:?}",
                    li + 1,
                    ci + 1,
                    cell.trim()
                ))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix file has no rows".into()));
    }
    Ok(rows)
}

/// Parses a comma-separated list of numbers (used for probability and
/// importance flags).
pub fn parse_number_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|cell| {
            cell.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid number {:?}", cell.trim())))
        })
        .collect()
}

/// JSON schema for a named set of alternatives sharing probabilities and
/// importances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlternativesFile {
    pub probs: Vec<f64>,
    pub importances: Vec<f64>,
    pub alternatives: Vec<NamedMatrix>,
}

/// One alternative: a name and its criterion-by-scenario value matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    /// Rows are criteria, columns are scenarios.
    pub values: Vec<Vec<f64>>,
}

impl AlternativesFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("alternatives file: {e}")))
    }

    pub fn to_alternative_set(&self) -> Result<AlternativeSet> {
        let scenarios = ScenarioSet::new(self.probs.clone())?;
        let criteria = CriteriaSet::new(self.importances.clone())?;
        let mut names = Vec::with_capacity(self.alternatives.len());
        let mut matrices = Vec::with_capacity(self.alternatives.len());
        for alt in &self.alternatives {
            names.push(alt.name.clone());
            matrices.push(OutcomeMatrix::from_rows(alt.values.clone())?);
        }
        AlternativeSet::new(names, matrices, scenarios, criteria)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// JSON schema for a knapsack instance. Benefits are item-major, then
/// criterion, then scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub weights: Vec<f64>,
    pub capacity: f64,
    pub benefits: Vec<Vec<Vec<f64>>>,
    pub probs: Vec<f64>,
    pub importances: Vec<f64>,
    pub seed: u64,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance file: {e}")))
    }

    pub fn from_instance(inst: &KnapsackInstance) -> Self {
        let (nk, nj) = (inst.n_criteria(), inst.n_scenarios());
        let benefits = (0..inst.n_items())
            .map(|i| {
                (0..nk)
                    .map(|k| (0..nj).map(|j| inst.benefit(i, k, j)).collect())
                    .collect()
            })
            .collect();
        Self {
            weights: inst.weights().to_vec(),
            capacity: inst.capacity(),
            benefits,
            probs: inst.scenarios().probs().to_vec(),
            importances: inst.criteria().importances().to_vec(),
            seed: inst.seed(),
        }
    }

    pub fn to_instance(&self) -> Result<KnapsackInstance> {
        let n_items = self.weights.len();
        let n_criteria = self.importances.len();
        let n_scenarios = self.probs.len();
        let mut flat = Vec::with_capacity(n_items * n_criteria * n_scenarios);
        if self.benefits.len() != n_items {
            return Err(Error::DimensionMismatch {
                what: "benefit tensor items",
                expected: n_items,
                got: self.benefits.len(),
            });
        }
        for per_item in &self.benefits {
            if per_item.len() != n_criteria {
                return Err(Error::DimensionMismatch {
                    what: "benefit tensor criteria",
                    expected: n_criteria,
                    got: per_item.len(),
                });
            }
            for per_criterion in per_item {
                if per_criterion.len() != n_scenarios {
                    return Err(Error::DimensionMismatch {
                        what: "benefit tensor scenarios",
                        expected: n_scenarios,
                        got: per_criterion.len(),
                    });
                }
                flat.extend_from_slice(per_criterion);
            }
        }
        KnapsackInstance::new(
            self.weights.clone(),
            self.capacity,
            flat,
            ScenarioSet::new(self.probs.clone())?,
            CriteriaSet::new(self.importances.clone())?,
            self.seed,
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}
