//! Ordered-average aggregation kernel.
//!
//! Two operators share the same mechanics: the beta-average, which averages a
//! criterion over the worst scenarios until their probabilities accumulate to
//! `beta`, and the r-OWA, which averages the worst criteria until their
//! importances accumulate to `r`. Composing them yields the scalarization
//! `h = r_owa(beta_average(row_1), ..., beta_average(row_K))` and the induced
//! dominance relation `a dominates b  iff  a.h <= b.h`.
//!
//! All operations are pure; nothing here holds shared mutable state.

use crate::error::{Error, Result};
use crate::real::Real;

/// Discrete probability measure over scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet<S: Real = f64> {
    probs: Vec<S>,
}

impl<S: Real> ScenarioSet<S> {
    /// Validates and wraps a probability vector: nonempty, entries finite and
    /// nonnegative, sum within `S::TOL` of one. Inputs failing the tolerance
    /// are rejected, not renormalized.
    pub fn new(probs: Vec<S>) -> Result<Self> {
        validate_measure(&probs).map_err(Error::InvalidProbabilities)?;
        Ok(Self { probs })
    }

    /// Equiprobable measure over `n` scenarios.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("scenario count"));
        }
        let p = S::one() / S::from_usize(n).unwrap();
        Ok(Self { probs: vec![p; n] })
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Importance measure over criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaSet<S: Real = f64> {
    importances: Vec<S>,
}

impl<S: Real> CriteriaSet<S> {
    /// Validates and wraps an importance vector; same rules as
    /// [`ScenarioSet::new`].
    pub fn new(importances: Vec<S>) -> Result<Self> {
        validate_measure(&importances).map_err(Error::InvalidImportances)?;
        Ok(Self { importances })
    }

    /// Equally important criteria.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("criteria count"));
        }
        let w = S::one() / S::from_usize(n).unwrap();
        Ok(Self {
            importances: vec![w; n],
        })
    }

    pub fn importances(&self) -> &[S] {
        &self.importances
    }

    pub fn len(&self) -> usize {
        self.importances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.importances.is_empty()
    }
}

fn validate_measure<S: Real>(entries: &[S]) -> std::result::Result<(), String> {
    if entries.is_empty() {
        return Err("vector is empty".into());
    }
    let mut sum = S::zero();
    for (i, &e) in entries.iter().enumerate() {
        if !e.is_finite() {
            return Err(format!("entry {i} is not finite ({e})"));
        }
        if e < S::zero() {
            return Err(format!("entry {i} is negative ({e})"));
        }
        sum = sum + e;
    }
    if (sum - S::one()).abs() > S::TOL {
        return Err(format!("sum is {sum}, must be 1 within {}", S::TOL));
    }
    Ok(())
}

/// Evaluation of one decision under every criterion (row) and scenario
/// (column). Entries are criterion values to be minimized.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeMatrix<S: Real = f64> {
    data: Vec<S>,
    n_criteria: usize,
    n_scenarios: usize,
}

impl<S: Real> OutcomeMatrix<S> {
    /// Builds a matrix from criterion rows. Rows must be nonempty, of equal
    /// length, and finite throughout.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("outcome matrix rows"));
        }
        let n_scenarios = rows[0].len();
        if n_scenarios == 0 {
            return Err(Error::Empty("outcome matrix columns"));
        }
        let mut data = Vec::with_capacity(rows.len() * n_scenarios);
        for (k, row) in rows.iter().enumerate() {
            if row.len() != n_scenarios {
                return Err(Error::DimensionMismatch {
                    what: "outcome matrix row length",
                    expected: n_scenarios,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("criterion {k}, scenario {j}")));
                }
                data.push(v);
            }
        }
        Ok(Self {
            data,
            n_criteria: rows.len(),
            n_scenarios,
        })
    }

    /// Builds a matrix from a row-major flat buffer.
    pub fn from_flat(n_criteria: usize, n_scenarios: usize, data: Vec<S>) -> Result<Self> {
        if n_criteria == 0 || n_scenarios == 0 {
            return Err(Error::Empty("outcome matrix dimensions"));
        }
        if data.len() != n_criteria * n_scenarios {
            return Err(Error::DimensionMismatch {
                what: "outcome matrix buffer",
                expected: n_criteria * n_scenarios,
                got: data.len(),
            });
        }
        for (i, &v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!(
                    "criterion {}, scenario {}",
                    i / n_scenarios,
                    i % n_scenarios
                )));
            }
        }
        Ok(Self {
            data,
            n_criteria,
            n_scenarios,
        })
    }

    pub fn n_criteria(&self) -> usize {
        self.n_criteria
    }

    pub fn n_scenarios(&self) -> usize {
        self.n_scenarios
    }

    /// Criterion row `k` across all scenarios.
    pub fn row(&self, k: usize) -> &[S] {
        &self.data[k * self.n_scenarios..(k + 1) * self.n_scenarios]
    }

    pub fn entry(&self, k: usize, j: usize) -> S {
        self.data[k * self.n_scenarios + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.n_scenarios)
    }
}

/// Tail-aversion levels: `beta` over scenarios, `r` over criteria, both in
/// (0,1]. Small values focus the aggregation on the worst outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskParams<S: Real = f64> {
    beta: S,
    r: S,
}

impl<S: Real> RiskParams<S> {
    /// Rejects parameters outside (0,1]; zero is not admitted.
    pub fn new(beta: S, r: S) -> Result<Self> {
        check_unit_param("beta", beta)?;
        check_unit_param("r", r)?;
        Ok(Self { beta, r })
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    pub fn r(&self) -> S {
        self.r
    }
}

fn check_unit_param<S: Real>(name: &'static str, value: S) -> Result<()> {
    if !(value > S::zero() && value <= S::one()) {
        return Err(Error::ParamOutOfRange {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// OWA weights produced by the truncated-linear weight generating function,
/// aligned to the value-descending ordering they were derived for.
#[derive(Debug, Clone, PartialEq)]
pub struct OwaWeights<S: Real = f64> {
    /// Rank weights, one per position of the sorted vector.
    pub lambdas: Vec<S>,
    /// Cumulative importances `T_j` in sorted order.
    pub cumulative: Vec<S>,
    /// First position (0-based) where the cumulative importance reaches `r`;
    /// all weights after it are zero.
    pub cutoff_index: usize,
}

/// Result of scalarizing one decision: the per-criterion beta-averages and
/// the r-OWA across them.
#[derive(Debug, Clone, PartialEq)]
pub struct HEvaluation<S: Real = f64> {
    /// Beta-average of each criterion row.
    pub g: Vec<S>,
    /// r-OWA of `g`.
    pub h: S,
}

impl<S: Real> HEvaluation<S> {
    /// Dominance relation induced by the scalarization: `self` dominates
    /// `other` when its h-value is no larger. Both evaluations must come from
    /// the same scenario set, criteria set and risk parameters. Reflexive and
    /// transitive, but not antisymmetric: distinct decisions can tie.
    pub fn dominates(&self, other: &Self) -> bool {
        self.h <= other.h
    }
}

/// See [`HEvaluation::dominates`].
pub fn dominates<S: Real>(a: &HEvaluation<S>, b: &HEvaluation<S>) -> bool {
    a.dominates(b)
}

/// Average of the worst scenarios for one criterion row, with probabilities
/// accumulating to `beta`.
///
/// Scenarios are taken in value-descending order; each contributes its full
/// probability while the running total stays below `beta`, the scenario that
/// crosses the boundary contributes only the residual, and later scenarios
/// contribute nothing (the `min(T, beta)` capping rule). The result does not
/// depend on how ties are ordered.
pub fn beta_average<S: Real>(row: &[S], scen: &ScenarioSet<S>, beta: S) -> Result<S> {
    check_unit_param("beta", beta)?;
    if row.len() != scen.len() {
        return Err(Error::DimensionMismatch {
            what: "row length vs scenario count",
            expected: scen.len(),
            got: row.len(),
        });
    }
    check_finite(row)?;
    Ok(capped_ordered_average(row, scen.probs(), beta))
}

fn check_finite<S: Real>(values: &[S]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(format!("aggregated value {i}"))),
        None => Ok(()),
    }
}

/// OWA weights for the truncated-linear generating function
/// `f(x) = min(x/r, 1)`.
///
/// `sorted_importances` must be given in the value-descending order of the
/// quantities being aggregated. The weights are
/// `lambda_j = (min(T_j, r) - min(T_{j-1}, r)) / r` with `T_0 = 0`.
pub fn owa_weights<S: Real>(sorted_importances: &[S], r: S) -> Result<OwaWeights<S>> {
    check_unit_param("r", r)?;
    validate_measure(sorted_importances).map_err(Error::InvalidImportances)?;
    let n = sorted_importances.len();
    let mut cumulative = Vec::with_capacity(n);
    let mut lambdas = Vec::with_capacity(n);
    let mut cutoff_index = n - 1;
    let mut cutoff_found = false;
    let mut t_prev = S::zero();
    for (j, &u) in sorted_importances.iter().enumerate() {
        let t = t_prev + u;
        cumulative.push(t);
        lambdas.push((t.min(r) - t_prev.min(r)) / r);
        if !cutoff_found && t >= r {
            cutoff_index = j;
            cutoff_found = true;
        }
        t_prev = t;
    }
    Ok(OwaWeights {
        lambdas,
        cumulative,
        cutoff_index,
    })
}

/// OWA of `values` under the truncated-linear weight generating function:
/// the importance-weighted average of the worst values, with importances
/// accumulating to `r`.
///
/// Values are sorted descending (stable), importances follow the permutation,
/// and the capped rank weights of [`owa_weights`] are applied. The result
/// does not depend on how ties are ordered.
pub fn r_owa<S: Real>(values: &[S], crit: &CriteriaSet<S>, r: S) -> Result<S> {
    check_unit_param("r", r)?;
    if values.len() != crit.len() {
        return Err(Error::DimensionMismatch {
            what: "value count vs criteria count",
            expected: crit.len(),
            got: values.len(),
        });
    }
    check_finite(values)?;
    Ok(capped_ordered_average(values, crit.importances(), r))
}

/// Shared mechanics of the beta-average and the r-OWA: average the largest
/// values weighted by their masses, with the total mass capped at `budget`,
/// then divide by `budget`.
///
/// Structured so that permuting entries with equal values leaves the result
/// bit-for-bit unchanged: entries are processed as runs of equal value, and
/// the masses inside a run are summed in a canonical (sorted) order.
fn capped_ordered_average<S: Real>(values: &[S], masses: &[S], budget: S) -> S {
    debug_assert_eq!(values.len(), masses.len());
    let n = values.len();

    // Equal-mass shortcut: when budget * n is an integer count, the result is
    // the plain average of the largest `count` values. This keeps the
    // coincidence with (1-beta)-CVaR (and the n-centrum special case) exact.
    if masses.windows(2).all(|w| w[0] == w[1]) {
        let t = budget * S::from_usize(n).unwrap();
        let count = t.round();
        let drift = S::epsilon() * S::from_usize(4 * n).unwrap();
        if count >= S::one() && (t - count).abs() <= drift {
            let count = count.to_usize().unwrap().min(n);
            let mut sorted = values.to_vec();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let mut acc = S::zero();
            for &v in &sorted[..count] {
                acc = acc + v;
            }
            return acc / S::from_usize(count).unwrap();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());

    let mut acc = S::zero();
    let mut t_before = S::zero();
    let mut run_masses: Vec<S> = Vec::new();
    let mut start = 0;
    while start < n && t_before < budget {
        let value = values[order[start]];
        let mut end = start + 1;
        while end < n && values[order[end]] == value {
            end += 1;
        }
        run_masses.clear();
        run_masses.extend(order[start..end].iter().map(|&i| masses[i]));
        run_masses.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut run_mass = S::zero();
        for &m in &run_masses {
            run_mass = run_mass + m;
        }
        let t_after = t_before + run_mass;
        if t_before.is_zero() && t_after >= budget {
            // The whole budget lands on the first run: value * budget / budget.
            return value;
        }
        let assigned = if t_after <= budget {
            run_mass
        } else {
            (budget - t_before).max(S::zero())
        };
        acc = acc + value * assigned;
        t_before = t_after;
        start = end;
    }
    acc / budget
}

/// Reference implementation of the r-OWA as a maximization over the weight
/// polytope `{ lam : 0 <= lam_k <= w_k, sum lam_k = r }`: the polytope is
/// filled greedily along every value-descending ordering of the entries
/// (all permutations of tied groups) and the best objective is kept.
///
/// Exhaustive in the tie structure, so it is capped at 10 entries. Intended
/// as an independent cross-check for [`r_owa`].
pub fn r_owa_polytope_oracle<S: Real>(values: &[S], crit: &CriteriaSet<S>, r: S) -> Result<S> {
    check_unit_param("r", r)?;
    if values.len() != crit.len() {
        return Err(Error::DimensionMismatch {
            what: "value count vs criteria count",
            expected: crit.len(),
            got: values.len(),
        });
    }
    if values.len() > 10 {
        return Err(Error::TooLarge {
            what: "polytope oracle",
            max: 10,
            got: values.len(),
        });
    }
    check_finite(values)?;

    // Group indices by equal value, descending.
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if values[g[0]] == values[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }

    let weights = crit.importances();
    let mut best = S::neg_infinity();
    let mut ordering: Vec<usize> = Vec::with_capacity(values.len());
    visit_group_permutations(&mut groups, 0, &mut ordering, &mut |ordering| {
        let mut remaining = r;
        let mut obj = S::zero();
        for &i in ordering {
            if remaining <= S::zero() {
                break;
            }
            let take = weights[i].min(remaining);
            obj = obj + take * values[i];
            remaining = remaining - take;
        }
        let candidate = obj / r;
        if candidate > best {
            best = candidate;
        }
    });
    Ok(best)
}

/// Calls `f` once per concatenation of permutations of each group.
fn visit_group_permutations<F: FnMut(&[usize])>(
    groups: &mut [Vec<usize>],
    gi: usize,
    ordering: &mut Vec<usize>,
    f: &mut F,
) {
    if gi == groups.len() {
        f(ordering);
        return;
    }
    let len = groups[gi].len();
    permute_group(groups, gi, len, ordering, f);
}

fn permute_group<F: FnMut(&[usize])>(
    groups: &mut [Vec<usize>],
    gi: usize,
    k: usize,
    ordering: &mut Vec<usize>,
    f: &mut F,
) {
    if k <= 1 {
        let base = ordering.len();
        let items: Vec<usize> = groups[gi].clone();
        ordering.extend_from_slice(&items);
        visit_group_permutations(groups, gi + 1, ordering, f);
        ordering.truncate(base);
        return;
    }
    for i in 0..k {
        permute_group(groups, gi, k - 1, ordering, f);
        if k.is_multiple_of(2) {
            groups[gi].swap(i, k - 1);
        } else {
            groups[gi].swap(0, k - 1);
        }
    }
}

/// Scalarizes one decision's outcome matrix: beta-average every criterion
/// row over the scenarios, then take the r-OWA across criteria.
pub fn evaluate_h<S: Real>(
    m: &OutcomeMatrix<S>,
    scen: &ScenarioSet<S>,
    crit: &CriteriaSet<S>,
    rp: &RiskParams<S>,
) -> Result<HEvaluation<S>> {
    if m.n_scenarios() != scen.len() {
        return Err(Error::DimensionMismatch {
            what: "matrix columns vs scenario count",
            expected: scen.len(),
            got: m.n_scenarios(),
        });
    }
    if m.n_criteria() != crit.len() {
        return Err(Error::DimensionMismatch {
            what: "matrix rows vs criteria count",
            expected: crit.len(),
            got: m.n_criteria(),
        });
    }
    let mut g = Vec::with_capacity(m.n_criteria());
    for row in m.rows() {
        g.push(beta_average(row, scen, rp.beta())?);
    }
    let h = r_owa(&g, crit, rp.r())?;
    Ok(HEvaluation { g, h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scen(p: &[f64]) -> ScenarioSet {
        ScenarioSet::new(p.to_vec()).unwrap()
    }

    fn crit(w: &[f64]) -> CriteriaSet {
        CriteriaSet::new(w.to_vec()).unwrap()
    }

    const ROW: [f64; 5] = [10.0, 7.0, 4.0, 3.0, 2.0];
    const PROBS: [f64; 5] = [0.2, 0.1, 0.3, 0.25, 0.15];

    #[test]
    fn beta_average_small_example() {
        let s = scen(&PROBS);
        assert!((beta_average(&ROW, &s, 0.2).unwrap() - 10.0).abs() < 1e-9);
        assert!((beta_average(&ROW, &s, 0.3).unwrap() - 9.0).abs() < 1e-9);
        assert!((beta_average(&ROW, &s, 0.5).unwrap() - 7.0).abs() < 1e-9);
    }

    #[test]
    fn beta_average_full_tail_is_expectation() {
        let s = scen(&PROBS);
        let expectation: f64 = ROW.iter().zip(&PROBS).map(|(v, p)| v * p).sum();
        assert!((beta_average(&ROW, &s, 1.0).unwrap() - expectation).abs() < 1e-12);
    }

    #[test]
    fn beta_average_worked_column() {
        // First criterion of the four-alternative walkthrough.
        let row = [0.51, 0.58, 0.48, 0.76, 0.86];
        let s = scen(&[0.15, 0.20, 0.30, 0.25, 0.10]);
        let g = beta_average(&row, &s, 0.3).unwrap();
        assert!((g - (0.1 * 0.86 + 0.2 * 0.76) / 0.3).abs() < 1e-12);
        assert!((g - 0.7933333333333333).abs() < 1e-9);
    }

    #[test]
    fn beta_average_rejects_bad_inputs() {
        let s = scen(&PROBS);
        assert!(matches!(
            beta_average(&ROW, &s, 0.0),
            Err(Error::ParamOutOfRange { name: "beta", .. })
        ));
        assert!(matches!(
            beta_average(&ROW, &s, 1.5),
            Err(Error::ParamOutOfRange { .. })
        ));
        assert!(matches!(
            beta_average(&ROW[..3], &s, 0.5),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            beta_average(&[1.0, 2.0, f64::NAN, 4.0, 5.0], &s, 0.5),
            Err(Error::NonFinite(_))
        ));
        assert!(ScenarioSet::new(vec![0.5, 0.4]).is_err());
        assert!(ScenarioSet::new(vec![1.2, -0.2]).is_err());
        assert!(ScenarioSet::new(Vec::<f64>::new()).is_err());
    }

    #[test]
    fn owa_weights_truncated_linear() {
        // Importances already in value-descending order.
        let w = owa_weights(&PROBS, 0.5).unwrap();
        let expected = [0.4, 0.2, 0.4, 0.0, 0.0];
        for (l, e) in w.lambdas.iter().zip(expected) {
            assert!((l - e).abs() < 1e-12, "{:?}", w.lambdas);
        }
        assert_eq!(w.cutoff_index, 2);
        assert_eq!(w.lambdas[3], 0.0);
        assert_eq!(w.lambdas[4], 0.0);
        let total: f64 = w.lambdas.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn owa_weights_r_one_recovers_importances() {
        let w = owa_weights(&PROBS, 1.0).unwrap();
        for (l, u) in w.lambdas.iter().zip(&PROBS) {
            assert!((l - u).abs() < 1e-12);
        }
    }

    #[test]
    fn owa_weights_tiny_r_is_maximum() {
        let w = owa_weights(&[0.2f64; 5], 0.2).unwrap();
        assert!((w.lambdas[0] - 1.0).abs() < 1e-12);
        assert!(w.lambdas[1..].iter().all(|&l| l == 0.0));
        assert_eq!(w.cutoff_index, 0);
    }

    #[test]
    fn r_owa_small_example() {
        let c = crit(&PROBS);
        assert!((r_owa(&ROW, &c, 0.2).unwrap() - 10.0).abs() < 1e-9);
        assert!((r_owa(&ROW, &c, 0.3).unwrap() - 9.0).abs() < 1e-9);
        assert!((r_owa(&ROW, &c, 0.5).unwrap() - 7.0).abs() < 1e-9);
    }

    #[test]
    fn r_owa_three_criteria() {
        let c = crit(&[1.0 / 3.0; 3]);
        let v = [0.8, 0.4, 0.65];
        assert!((r_owa(&v, &c, 2.0 / 3.0).unwrap() - 0.725).abs() < 1e-9);
    }

    #[test]
    fn r_owa_n_centrum_exact() {
        // Uniform importances with r = n/K: the mean of the n largest values,
        // bit for bit.
        let v = [0.3, 0.9, 0.1, 0.7, 0.5];
        let c = CriteriaSet::uniform(5).unwrap();
        let mut sorted = v;
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for n in 1..=5usize {
            let got = r_owa(&v, &c, n as f64 / 5.0).unwrap();
            let plain = sorted[..n].iter().sum::<f64>() / n as f64;
            assert!(got == plain, "n={n}: {got} != {plain}");
        }
    }

    #[test]
    fn polytope_oracle_matches_r_owa() {
        let c = crit(&PROBS);
        for r in [0.2, 0.3, 0.5, 0.77, 1.0] {
            let direct = r_owa(&ROW, &c, r).unwrap();
            let oracle = r_owa_polytope_oracle(&ROW, &c, r).unwrap();
            assert!((direct - oracle).abs() < 1e-9, "r={r}");
        }
    }

    #[test]
    fn polytope_oracle_constant_vector() {
        let c = crit(&[0.5, 0.25, 0.25]);
        for r in [0.1, 0.5, 1.0] {
            let v = r_owa_polytope_oracle(&[3.25; 3], &c, r).unwrap();
            assert!((v - 3.25).abs() < 1e-12);
        }
    }

    #[test]
    fn polytope_oracle_rejects_large_inputs() {
        let c = CriteriaSet::uniform(11).unwrap();
        let v = vec![1.0; 11];
        assert!(matches!(
            r_owa_polytope_oracle(&v, &c, 0.5),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn evaluate_h_degenerate() {
        let m = OutcomeMatrix::from_rows(vec![vec![4.25]]).unwrap();
        let s = ScenarioSet::uniform(1).unwrap();
        let c = CriteriaSet::uniform(1).unwrap();
        let rp = RiskParams::new(0.4, 0.9).unwrap();
        let e = evaluate_h(&m, &s, &c, &rp).unwrap();
        assert_eq!(e.g, vec![4.25]);
        assert_eq!(e.h, 4.25);
    }

    #[test]
    fn dominance_is_h_comparison() {
        let a = HEvaluation {
            g: vec![0.9],
            h: 0.927,
        };
        let b = HEvaluation {
            g: vec![0.95],
            h: 0.930,
        };
        assert!(a.dominates(&b));
        assert!(!b.dominates(&a));
        assert!(a.dominates(&a));
        // Equal h-values dominate each other; the relation is not antisymmetric.
        let c = HEvaluation {
            g: vec![0.99],
            h: 0.927,
        };
        assert!(a.dominates(&c) && c.dominates(&a));
        // Transitive through b.
        let d = HEvaluation {
            g: vec![1.0],
            h: 0.993,
        };
        assert!(b.dominates(&d));
        assert!(a.dominates(&d));
    }

    #[test]
    fn risk_params_reject_zero_and_nan() {
        assert!(RiskParams::new(0.0, 0.5).is_err());
        assert!(RiskParams::new(0.5, 0.0).is_err());
        assert!(RiskParams::new(f64::NAN, 0.5).is_err());
        assert!(RiskParams::new(1.0, 1.0).is_ok());
    }

    #[test]
    fn kernel_works_in_f32() {
        let s = ScenarioSet::<f32>::new(vec![0.2, 0.1, 0.3, 0.25, 0.15]).unwrap();
        let row = [10.0f32, 7.0, 4.0, 3.0, 2.0];
        assert!((beta_average(&row, &s, 0.3f32).unwrap() - 9.0).abs() < 1e-5);
        let c = CriteriaSet::<f32>::uniform(3).unwrap();
        let e = evaluate_h(
            &OutcomeMatrix::<f32>::from_rows(vec![vec![1.0, 3.0], vec![2.0, 4.0], vec![0.5, 0.5]])
                .unwrap(),
            &ScenarioSet::<f32>::uniform(2).unwrap(),
            &c,
            &RiskParams::<f32>::new(0.5, 1.0).unwrap(),
        )
        .unwrap();
        assert!((e.h - (3.0 + 4.0 + 0.5) / 3.0).abs() < 1e-5);
    }

    #[test]
    fn outcome_matrix_shape_checks() {
        assert!(OutcomeMatrix::<f64>::from_rows(vec![]).is_err());
        assert!(OutcomeMatrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(OutcomeMatrix::from_rows(vec![vec![f64::NAN]]).is_err());
        let m = OutcomeMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.entry(1, 0), 3.0);
        assert_eq!(m.row(0), &[1.0, 2.0]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Values drawn from a small pool so ties are frequent, paired with
        /// masses normalized before any shuffling.
        fn tied_pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
            prop::collection::vec((0..5usize, 0.01..1.0f64), 1..9).prop_map(|raw| {
                let pool = [-2.0, 0.5, 0.5, 3.25, 7.0];
                let total: f64 = raw.iter().map(|(_, m)| m).sum();
                raw.into_iter()
                    .map(|(vi, m)| (pool[vi], m / total))
                    .collect()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(256))]

            #[test]
            fn tie_permutation_leaves_result_unchanged(
                pairs in tied_pairs().prop_flat_map(|p| (Just(p.clone()), Just(p).prop_shuffle())),
                budget in 0.01..=1.0f64,
            ) {
                let (original, shuffled) = pairs;
                let (v1, m1): (Vec<f64>, Vec<f64>) = original.into_iter().unzip();
                let (v2, m2): (Vec<f64>, Vec<f64>) = shuffled.into_iter().unzip();
                let a = capped_ordered_average(&v1, &m1, budget);
                let b = capped_ordered_average(&v2, &m2, budget);
                prop_assert!(a == b, "{a} != {b}");
            }

            #[test]
            fn nonincreasing_in_budget(
                pairs in tied_pairs(),
                b1 in 0.01..=1.0f64,
                b2 in 0.01..=1.0f64,
            ) {
                let (v, m): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
                let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
                let at_lo = capped_ordered_average(&v, &m, lo);
                let at_hi = capped_ordered_average(&v, &m, hi);
                prop_assert!(at_hi <= at_lo + 1e-12);
            }

            #[test]
            fn bounded_by_extremes(pairs in tied_pairs(), budget in 0.01..=1.0f64) {
                let (v, m): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
                let out = capped_ordered_average(&v, &m, budget);
                let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(out >= lo - 1e-12 && out <= hi + 1e-12);
            }

            #[test]
            fn affine_equivariance(
                values in prop::collection::vec(-10.0..10.0f64, 1..8),
                scale in 0.0..5.0f64,
                shift in -5.0..5.0f64,
                budget in 0.01..=1.0f64,
            ) {
                let n = values.len();
                let c = CriteriaSet::uniform(n).unwrap();
                let mapped: Vec<f64> = values.iter().map(|v| scale * v + shift).collect();
                let direct = r_owa(&mapped, &c, budget).unwrap();
                let composed = scale * r_owa(&values, &c, budget).unwrap() + shift;
                prop_assert!((direct - composed).abs() < 1e-9, "{direct} vs {composed}");
            }

            #[test]
            fn cvar_coincidence_exact(
                values in prop::collection::vec(-10.0..10.0f64, 1..12),
                take in 1..12usize,
            ) {
                let j = values.len();
                let take = take.min(j);
                let s = ScenarioSet::uniform(j).unwrap();
                let beta = take as f64 / j as f64;
                let avg = beta_average(&values, &s, beta).unwrap();
                let mut sorted = values.clone();
                sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
                let plain = sorted[..take].iter().sum::<f64>() / take as f64;
                prop_assert!(avg == plain, "{avg} != {plain}");
            }

            #[test]
            fn weighted_mean_at_full_budget(pairs in tied_pairs()) {
                let (v, m): (Vec<f64>, Vec<f64>) = pairs.clone().into_iter().unzip();
                let out = capped_ordered_average(&v, &m, 1.0);
                let mean: f64 = v.iter().zip(&m).map(|(v, m)| v * m).sum();
                prop_assert!((out - mean).abs() < 1e-12);
            }

            #[test]
            fn maximum_at_tiny_budget(pairs in tied_pairs()) {
                let (v, m): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
                let tiny = m.iter().cloned().fold(f64::INFINITY, f64::min) * 0.5;
                prop_assume!(tiny > 0.0);
                let out = capped_ordered_average(&v, &m, tiny);
                let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(out == hi, "{out} != {hi}");
            }

            #[test]
            fn oracle_agrees_with_r_owa(
                values in prop::collection::vec(-10.0..10.0f64, 1..7),
                raw_w in prop::collection::vec(0.05..1.0f64, 1..7),
                r in 0.01..=1.0f64,
            ) {
                let n = values.len().min(raw_w.len());
                let values = &values[..n];
                let total: f64 = raw_w[..n].iter().sum();
                let w: Vec<f64> = raw_w[..n].iter().map(|x| x / total).collect();
                let c = CriteriaSet::new(w).unwrap();
                let direct = r_owa(values, &c, r).unwrap();
                let oracle = r_owa_polytope_oracle(values, &c, r).unwrap();
                prop_assert!((direct - oracle).abs() < 1e-9, "{direct} vs {oracle}");
            }

            #[test]
            fn h_monotone_in_both_params(
                rows in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 4), 3),
                beta1 in 0.05..=1.0f64,
                beta2 in 0.05..=1.0f64,
                r1 in 0.05..=1.0f64,
                r2 in 0.05..=1.0f64,
            ) {
                let m = OutcomeMatrix::from_rows(rows).unwrap();
                let s = ScenarioSet::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
                let c = CriteriaSet::new(vec![0.5, 0.3, 0.2]).unwrap();
                let (b_lo, b_hi) = if beta1 <= beta2 { (beta1, beta2) } else { (beta2, beta1) };
                let (r_lo, r_hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
                let h = |b: f64, r: f64| {
                    evaluate_h(&m, &s, &c, &RiskParams::new(b, r).unwrap()).unwrap().h
                };
                prop_assert!(h(b_hi, r_lo) <= h(b_lo, r_lo) + 1e-12);
                prop_assert!(h(b_lo, r_hi) <= h(b_lo, r_lo) + 1e-12);
            }

            #[test]
            fn g_and_h_respect_bounds(
                rows in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 3), 2),
                beta in 0.05..=1.0f64,
                r in 0.05..=1.0f64,
            ) {
                let m = OutcomeMatrix::from_rows(rows).unwrap();
                let s = ScenarioSet::new(vec![0.25, 0.35, 0.4]).unwrap();
                let c = CriteriaSet::new(vec![0.6, 0.4]).unwrap();
                let e = evaluate_h(&m, &s, &c, &RiskParams::new(beta, r).unwrap()).unwrap();
                for (k, &g) in e.g.iter().enumerate() {
                    let row = m.row(k);
                    let lo = row.iter().cloned().fold(f64::INFINITY, f64::min);
                    let hi = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    prop_assert!(g >= lo - 1e-12 && g <= hi + 1e-12);
                }
                let lo = e.g.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = e.g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(e.h >= lo - 1e-12 && e.h <= hi + 1e-12);
            }
        }
    }
}
