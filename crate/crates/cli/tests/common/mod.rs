//! Shared reference data: the four-alternative walkthrough (five scenarios,
//! six criteria) and the two-alternative tie whose second phase matters.
//!
//! Each test binary uses its own subset of these items.
#![allow(dead_code)]

use riskowa::io::{AlternativesFile, NamedMatrix};
use riskowa::{AlternativeSet, CriteriaSet, OutcomeMatrix, ScenarioSet};

pub const WALKTHROUGH_PROBS: [f64; 5] = [0.15, 0.20, 0.30, 0.25, 0.10];
pub const WALKTHROUGH_IMPORTANCES: [f64; 6] = [0.20, 0.10, 0.20, 0.25, 0.15, 0.10];
pub const WALKTHROUGH_BETA: f64 = 0.3;
/// The reference tables label r as 0.17; the printed h-values correspond to
/// r = 1/6 (0.17 is its two-decimal display).
pub const WALKTHROUGH_R: f64 = 1.0 / 6.0;

/// Scenario-major tables (one row per scenario, one column per criterion),
/// exactly as printed.
pub const ALT_TABLES: [[[f64; 6]; 5]; 4] = [
    [
        [0.51, 0.27, 0.39, 0.45, 0.75, 0.76],
        [0.58, 0.65, 0.47, 0.26, 0.90, 0.24],
        [0.48, 0.44, 0.90, 0.50, 0.93, 0.65],
        [0.76, 0.18, 0.01, 0.90, 0.56, 0.02],
        [0.86, 0.36, 0.21, 0.28, 0.63, 0.72],
    ],
    [
        [0.40, 0.58, 0.39, 0.45, 0.54, 0.18],
        [0.68, 0.74, 0.70, 0.15, 0.54, 0.72],
        [0.93, 0.52, 0.23, 0.82, 0.21, 0.03],
        [0.37, 0.85, 0.07, 0.42, 0.52, 0.22],
        [0.92, 0.13, 0.71, 0.39, 0.90, 0.87],
    ],
    [
        [0.80, 0.90, 0.61, 0.28, 0.94, 0.09],
        [0.29, 0.48, 0.26, 0.23, 0.21, 0.07],
        [0.73, 0.65, 0.32, 0.56, 0.95, 0.65],
        [0.58, 0.39, 0.21, 0.66, 0.70, 0.93],
        [0.73, 0.22, 0.33, 0.31, 0.32, 0.38],
    ],
    [
        [0.30, 0.52, 0.12, 0.68, 0.46, 0.73],
        [1.00, 0.57, 0.46, 0.82, 0.90, 0.72],
        [0.18, 0.76, 0.30, 0.34, 0.54, 0.99],
        [0.53, 0.21, 0.13, 0.12, 0.66, 0.86],
        [0.98, 0.46, 0.50, 0.29, 0.27, 0.40],
    ],
];

/// Printed beta-average vectors (three decimals).
pub const EXPECTED_G: [[f64; 6]; 4] = [
    [0.793, 0.580, 0.900, 0.833, 0.930, 0.728],
    [0.930, 0.832, 0.703, 0.820, 0.660, 0.770],
    [0.765, 0.775, 0.468, 0.643, 0.950, 0.883],
    [0.993, 0.760, 0.473, 0.773, 0.820, 0.990],
];

/// Printed h-values (three decimals).
pub const EXPECTED_H: [f64; 4] = [0.927, 0.930, 0.943, 0.993];

/// Criterion-major matrix of one alternative (transposed from the printed
/// scenario-major layout).
pub fn alt_matrix(index: usize) -> OutcomeMatrix {
    let table = &ALT_TABLES[index];
    let rows: Vec<Vec<f64>> = (0..6).map(|k| (0..5).map(|j| table[j][k]).collect()).collect();
    OutcomeMatrix::from_rows(rows).unwrap()
}

pub fn walkthrough_set() -> AlternativeSet {
    AlternativeSet::new(
        (1..=4).map(|i| format!("alt{i}")).collect(),
        (0..4).map(alt_matrix).collect(),
        ScenarioSet::new(WALKTHROUGH_PROBS.to_vec()).unwrap(),
        CriteriaSet::new(WALKTHROUGH_IMPORTANCES.to_vec()).unwrap(),
    )
    .unwrap()
}

/// The walkthrough data as the JSON file schema the CLI reads.
pub fn walkthrough_file() -> AlternativesFile {
    AlternativesFile {
        probs: WALKTHROUGH_PROBS.to_vec(),
        importances: WALKTHROUGH_IMPORTANCES.to_vec(),
        alternatives: (0..4)
            .map(|i| NamedMatrix {
                name: format!("alt{}", i + 1),
                values: (0..6)
                    .map(|k| (0..5).map(|j| ALT_TABLES[i][j][k]).collect())
                    .collect(),
            })
            .collect(),
    }
}

/// Two equiprobable scenarios, three equally important criteria; both
/// alternatives tie at h = 0.725 under beta = 1/2, r = 2/3, and the first
/// one's beta-averages dominate the second's.
pub fn dominated_pair_set() -> AlternativeSet {
    let alt1 = OutcomeMatrix::from_rows(vec![
        vec![0.80, 0.60],
        vec![0.40, 0.20],
        vec![0.30, 0.65],
    ])
    .unwrap();
    let alt2 = OutcomeMatrix::from_rows(vec![
        vec![0.70, 0.80],
        vec![0.45, 0.30],
        vec![0.65, 0.50],
    ])
    .unwrap();
    AlternativeSet::new(
        vec!["alt1".into(), "alt2".into()],
        vec![alt1, alt2],
        ScenarioSet::new(vec![0.5, 0.5]).unwrap(),
        CriteriaSet::uniform(3).unwrap(),
    )
    .unwrap()
}
