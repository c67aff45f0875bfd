//! Per-source rate problems.
//!
//! Realizing a target on a fixed edge set decouples by source: the rates on
//! edges leaving `y` only have to reproduce `w_y`.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::exact::{lp_feasible, FeasibilityCertificate, LpProblem, Rat, RatMat, RatVec, VarKind};

/// Allowed targets for each source.
pub type Support = BTreeMap<RatVec, Vec<RatVec>>;

pub(crate) fn source_problem(
    y: &RatVec,
    w: &RatVec,
    targets: &[RatVec],
    kinds: Vec<VarKind>,
) -> LpProblem {
    let cols: Vec<RatVec> = targets.iter().map(|t| t.sub(y)).collect();
    LpProblem::new(RatMat::from_columns(y.dim(), &cols), w.clone(), kinds)
        .expect("dimensions agree")
}

fn solve(p: &LpProblem) -> FeasibilityCertificate {
    lp_feasible(p).expect("certified LP")
}

/// Strictly positive rates on every target with `Σ k (t − y) = w`.
pub(crate) fn strict_rates(y: &RatVec, w: &RatVec, targets: &[RatVec]) -> Option<Vec<Rat>> {
    if targets.is_empty() {
        return w.is_zero().then(Vec::new);
    }
    let p = source_problem(y, w, targets, vec![VarKind::Positive; targets.len()]);
    solve(&p).solution().map(|x| x.entries().to_vec())
}

/// Indices of targets that carry positive rate in some nonnegative
/// decomposition of `w`. Empty when there is none.
pub(crate) fn active_targets(y: &RatVec, w: &RatVec, targets: &[RatVec]) -> Vec<usize> {
    let mut active = vec![false; targets.len()];
    let mut decided = vec![false; targets.len()];
    for j in 0..targets.len() {
        if decided[j] {
            continue;
        }
        let mut kinds = vec![VarKind::NonNeg; targets.len()];
        kinds[j] = VarKind::Positive;
        let p = source_problem(y, w, targets, kinds);
        match solve(&p).solution() {
            Some(x) => {
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_positive() {
                        active[i] = true;
                        decided[i] = true;
                    }
                }
            }
            None => decided[j] = true,
        }
    }
    (0..targets.len()).filter(|&i| active[i]).collect()
}

/// Restricts every source to its active targets. Returns `None` when some
/// source with a nonzero net vector is left without targets.
pub(crate) fn densify(targets_of: &Support, nets: &BTreeMap<RatVec, RatVec>) -> Option<Support> {
    let mut out = Support::new();
    for (y, ts) in targets_of {
        let w = &nets[y];
        let keep: Vec<RatVec> = active_targets(y, w, ts)
            .into_iter()
            .map(|i| ts[i].clone())
            .collect();
        if keep.is_empty() {
            if !w.is_zero() {
                return None;
            }
            continue;
        }
        out.insert(y.clone(), keep);
    }
    Some(out)
}

pub(crate) fn edge_count(s: &Support) -> usize {
    s.values().map(Vec::len).sum()
}

pub(crate) fn edges_of(s: &Support) -> Vec<(RatVec, RatVec)> {
    s.iter()
        .flat_map(|(y, ts)| ts.iter().map(move |t| (y.clone(), t.clone())))
        .collect()
}
