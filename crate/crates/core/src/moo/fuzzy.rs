//! Fuzzy best-compromise selection on a Pareto front.

use crate::error::{Error, Result};
use crate::objectives::ObjectiveVector;

/// Strictly decreasing linear membership: 1 at or below `f_min`, 0 at or
/// above `f_max`, linear in between. A degenerate objective
/// (`f_min == f_max`) carries no discrimination and maps to 1.
pub fn fuzzy_membership(f: f64, f_min: f64, f_max: f64) -> Result<f64> {
    if f_min > f_max {
        return Err(Error::MembershipBounds { f_min, f_max });
    }
    if f_min == f_max || f <= f_min {
        return Ok(1.0);
    }
    if f >= f_max {
        return Ok(0.0);
    }
    Ok((f_max - f) / (f_max - f_min))
}

/// Membership table and normalized satisfaction of every front member, plus
/// the selected best-compromise index.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CompromiseReport {
    /// memberships[k][i]: membership of solution k in objective i.
    pub memberships: Vec<Vec<f64>>,
    /// Normalized satisfaction of each solution; sums to 1 over the front.
    pub satisfaction: Vec<f64>,
    /// Index of the selected solution (ties broken by lowest index).
    pub selected: usize,
}

/// Selects the best-compromise member of a feasible front: per-objective
/// min/max over the front feed the memberships, satisfactions are
/// sum-normalized, and the argmax wins.
pub fn best_compromise(front: &[ObjectiveVector]) -> Result<CompromiseReport> {
    if front.is_empty() {
        return Err(Error::EmptyFront);
    }
    debug_assert!(front.iter().all(|v| v.feasible));
    let m = front[0].values.len();
    let mut mins = vec![f64::INFINITY; m];
    let mut maxs = vec![f64::NEG_INFINITY; m];
    for v in front {
        for i in 0..m {
            mins[i] = mins[i].min(v.values[i]);
            maxs[i] = maxs[i].max(v.values[i]);
        }
    }

    let mut memberships = Vec::with_capacity(front.len());
    let mut row_sums = Vec::with_capacity(front.len());
    for v in front {
        let row: Vec<f64> = (0..m)
            .map(|i| fuzzy_membership(v.values[i], mins[i], maxs[i]).expect("min <= max"))
            .collect();
        row_sums.push(row.iter().sum::<f64>());
        memberships.push(row);
    }
    let total: f64 = row_sums.iter().sum();
    let satisfaction: Vec<f64> = row_sums.iter().map(|s| s / total).collect();

    let mut selected = 0;
    for (k, s) in satisfaction.iter().enumerate() {
        if *s > satisfaction[selected] {
            selected = k;
        }
    }
    Ok(CompromiseReport {
        memberships,
        satisfaction,
        selected,
    })
}
