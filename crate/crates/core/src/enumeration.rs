//! Solution procedure for finite decision spaces: evaluate every alternative,
//! pick the h-minimizer, and break ties in favor of an alternative whose
//! beta-average vector is not Pareto-dominated within the tie set.

use crate::aggregation::{evaluate_h, CriteriaSet, HEvaluation, OutcomeMatrix, RiskParams, ScenarioSet};
use crate::error::{Error, Result};
use crate::real::Real;

/// A finite list of alternatives sharing one scenario set and one criteria
/// set, each evaluated by its own outcome matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternativeSet<S: Real = f64> {
    names: Vec<String>,
    matrices: Vec<OutcomeMatrix<S>>,
    scenarios: ScenarioSet<S>,
    criteria: CriteriaSet<S>,
}

impl<S: Real> AlternativeSet<S> {
    pub fn new(
        names: Vec<String>,
        matrices: Vec<OutcomeMatrix<S>>,
        scenarios: ScenarioSet<S>,
        criteria: CriteriaSet<S>,
    ) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::Empty("alternative set"));
        }
        if names.len() != matrices.len() {
            return Err(Error::DimensionMismatch {
                what: "alternative names vs matrices",
                expected: matrices.len(),
                got: names.len(),
            });
        }
        for m in &matrices {
            if m.n_scenarios() != scenarios.len() {
                return Err(Error::DimensionMismatch {
                    what: "alternative matrix columns vs scenario count",
                    expected: scenarios.len(),
                    got: m.n_scenarios(),
                });
            }
            if m.n_criteria() != criteria.len() {
                return Err(Error::DimensionMismatch {
                    what: "alternative matrix rows vs criteria count",
                    expected: criteria.len(),
                    got: m.n_criteria(),
                });
            }
        }
        Ok(Self {
            names,
            matrices,
            scenarios,
            criteria,
        })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn matrices(&self) -> &[OutcomeMatrix<S>] {
        &self.matrices
    }

    pub fn scenarios(&self) -> &ScenarioSet<S> {
        &self.scenarios
    }

    pub fn criteria(&self) -> &CriteriaSet<S> {
        &self.criteria
    }
}

/// Outcome of [`solve_enumeration`]: every alternative's evaluation, the set
/// of h-minimizers, and the efficient representative chosen among them.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult<S: Real = f64> {
    /// One evaluation per alternative, in input order.
    pub evaluations: Vec<HEvaluation<S>>,
    /// Indices of all alternatives whose h lies within tolerance of the
    /// minimum.
    pub argmin: Vec<usize>,
    /// The member of `argmin` selected by the second phase.
    pub representative: usize,
}

impl<S: Real> RankedResult<S> {
    /// h-value of the winner.
    pub fn optimal_h(&self) -> S {
        self.evaluations[self.representative].h
    }
}

/// One cell of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell<S: Real = f64> {
    pub winner: usize,
    pub h: S,
}

/// Winners and optimal h-values over a grid of (beta, r) pairs. Cells are
/// stored row-major: one row per beta, one column per r.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid<S: Real = f64> {
    pub betas: Vec<S>,
    pub rs: Vec<S>,
    pub cells: Vec<SweepCell<S>>,
}

impl<S: Real> SweepGrid<S> {
    pub fn cell(&self, bi: usize, ri: usize) -> &SweepCell<S> {
        &self.cells[bi * self.rs.len() + ri]
    }
}

/// Rescales every criterion to [0, 1] across all alternatives and scenarios
/// (min-max). Criteria that are constant over the whole set pass through
/// unchanged. The input is left untouched.
///
/// Applying it twice gives the same set as applying it once.
pub fn normalize<S: Real>(alts: &AlternativeSet<S>) -> AlternativeSet<S> {
    let n_criteria = alts.criteria.len();
    let mut lo = vec![S::infinity(); n_criteria];
    let mut hi = vec![S::neg_infinity(); n_criteria];
    for m in &alts.matrices {
        for k in 0..n_criteria {
            for &v in m.row(k) {
                if v < lo[k] {
                    lo[k] = v;
                }
                if v > hi[k] {
                    hi[k] = v;
                }
            }
        }
    }
    let matrices = alts
        .matrices
        .iter()
        .map(|m| {
            let rows = (0..n_criteria)
                .map(|k| {
                    let range = hi[k] - lo[k];
                    m.row(k)
                        .iter()
                        .map(|&v| {
                            if range > S::zero() {
                                (v - lo[k]) / range
                            } else {
                                v
                            }
                        })
                        .collect()
                })
                .collect();
            OutcomeMatrix::from_rows(rows).expect("normalization preserves shape")
        })
        .collect();
    AlternativeSet {
        names: alts.names.clone(),
        matrices,
        scenarios: alts.scenarios.clone(),
        criteria: alts.criteria.clone(),
    }
}

/// Evaluates h for every alternative and returns the minimizers plus the
/// efficient representative picked by [`second_phase`].
pub fn solve_enumeration<S: Real>(
    alts: &AlternativeSet<S>,
    rp: &RiskParams<S>,
) -> Result<RankedResult<S>> {
    let mut evaluations = Vec::with_capacity(alts.len());
    for m in &alts.matrices {
        evaluations.push(evaluate_h(m, &alts.scenarios, &alts.criteria, rp)?);
    }
    let min_h = evaluations
        .iter()
        .map(|e| e.h)
        .fold(S::infinity(), |a, b| a.min(b));
    let argmin: Vec<usize> = evaluations
        .iter()
        .enumerate()
        .filter(|(_, e)| (e.h - min_h).abs() <= S::TOL)
        .map(|(i, _)| i)
        .collect();
    let tied: Vec<HEvaluation<S>> = argmin.iter().map(|&i| evaluations[i].clone()).collect();
    let representative = argmin[second_phase(&tied)];
    Ok(RankedResult {
        evaluations,
        argmin,
        representative,
    })
}

/// Picks an efficient member of a tie set: evaluations whose beta-average
/// vector is Pareto-dominated by another tied evaluation are discarded, and
/// among the survivors the one with the smallest component sum wins (lowest
/// index on a further tie).
///
/// Panics if `tied` is empty; callers pass at least one evaluation.
pub fn second_phase<S: Real>(tied: &[HEvaluation<S>]) -> usize {
    assert!(!tied.is_empty(), "second phase requires at least one tie");
    let dominated = |a: &HEvaluation<S>, b: &HEvaluation<S>| {
        // b strictly Pareto-dominates a in g-space.
        let mut strict = false;
        for (&ga, &gb) in a.g.iter().zip(&b.g) {
            if gb > ga {
                return false;
            }
            if gb < ga {
                strict = true;
            }
        }
        strict
    };
    let mut best: Option<(usize, S)> = None;
    for (i, cand) in tied.iter().enumerate() {
        if tied.iter().any(|other| dominated(cand, other)) {
            continue;
        }
        let sum = cand.g.iter().fold(S::zero(), |a, &b| a + b);
        match best {
            Some((_, best_sum)) if best_sum <= sum => {}
            _ => best = Some((i, sum)),
        }
    }
    // Every finite tie set has at least one nondominated member.
    best.expect("nonempty tie set has a nondominated member").0
}

/// Runs [`solve_enumeration`] on every (beta, r) pair of the grid.
pub fn sweep<S: Real>(alts: &AlternativeSet<S>, betas: &[S], rs: &[S]) -> Result<SweepGrid<S>> {
    if betas.is_empty() {
        return Err(Error::Empty("beta grid"));
    }
    if rs.is_empty() {
        return Err(Error::Empty("r grid"));
    }
    let mut cells = Vec::with_capacity(betas.len() * rs.len());
    for &beta in betas {
        for &r in rs {
            let rp = RiskParams::new(beta, r)?;
            let ranked = solve_enumeration(alts, &rp)?;
            cells.push(SweepCell {
                winner: ranked.representative,
                h: ranked.optimal_h(),
            });
        }
    }
    Ok(SweepGrid {
        betas: betas.to_vec(),
        rs: rs.to_vec(),
        cells,
    })
}
