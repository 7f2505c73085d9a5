//! Exhaustive certifiers for the two sensitivity programs on small instances.
//!
//! The cardinal oracle scans a uniform grid over `[ε, 1]^n`; it is a lower
//! bound on the continuous optimum. The ordinal oracle enumerates every subset
//! of the complement and is exact. Neither shares code with the gradient
//! attacks beyond the aggregation rules themselves.

use serde::{Deserialize, Serialize};

use crate::benchmark::{
    cardinal_aggregate, ranks_per_task, winning_means, winning_rate_matrix, ModelSplit, ScoreMatrix,
};
use crate::error::{Error, Result};
use crate::rank::{kendall_tau, rankdata_desc, Ranking};
use crate::sensitivity::{AttackResult, Perturbation};

pub const MAX_GRID_EVALUATIONS: f64 = 1e7;
pub const MAX_COMPLEMENT: usize = 20;

/// Uniform grid over the clean fraction of each task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points_per_task: usize,
    pub epsilon: f64,
}

impl GridSpec {
    pub fn new(points_per_task: usize, epsilon: f64) -> Result<Self> {
        if points_per_task < 2 {
            return Err(Error::invalid("grid needs at least two points per task"));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1)")));
        }
        Ok(GridSpec {
            points_per_task,
            epsilon,
        })
    }

    /// Grid values, `ε` first and `1` last.
    pub fn values(&self) -> Vec<f64> {
        let last = self.points_per_task - 1;
        (0..self.points_per_task)
            .map(|k| {
                if k == last {
                    1.0
                } else {
                    self.epsilon + (1.0 - self.epsilon) * k as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Best grid point for the label-noise program; ties keep the
/// lexicographically smallest `α`.
pub fn brute_force_cardinal(scores: &ScoreMatrix, grid: GridSpec) -> Result<AttackResult> {
    GridSpec::new(grid.points_per_task, grid.epsilon)?;
    let rows = scores.dense_rows()?;
    if scores.models() < 2 {
        return Err(Error::invalid("cardinal oracle needs at least two models"));
    }
    let n = scores.tasks();
    let estimate = (grid.points_per_task as f64).powi(n as i32);
    if estimate > MAX_GRID_EVALUATIONS {
        return Err(Error::GuardExceeded {
            estimate,
            limit: MAX_GRID_EVALUATIONS,
        });
    }
    let baseline = cardinal_aggregate(scores)?;
    let values = grid.values();

    let mut digits = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>, Ranking)> = None;
    loop {
        let noisy_totals: Vec<f64> = rows
            .iter()
            .map(|row| row.iter().zip(&digits).map(|(s, &d)| values[d] * s).sum())
            .collect();
        let ranking = rankdata_desc(&noisy_totals)?;
        let tau = kendall_tau(&baseline, &ranking)?;
        if best.as_ref().is_none_or(|b| tau > b.0) {
            best = Some((tau, digits.clone(), ranking));
        }
        // odometer, last task fastest, so visits are in lexicographic order
        let Some(pos) = digits.iter().rposition(|&d| d + 1 < grid.points_per_task) else {
            break;
        };
        digits[pos] += 1;
        digits[pos + 1..].iter_mut().for_each(|d| *d = 0);
    }

    let (_, digits, ranking) = best.expect("grid is non-empty");
    let alpha: Vec<f64> = digits.iter().map(|&d| values[d]).collect();
    let max = alpha.iter().copied().fold(f64::MIN, f64::max);
    let alpha = alpha.into_iter().map(|a| a / max).collect();
    AttackResult::new(baseline, ranking, Perturbation::Alpha(alpha))
}

/// Exact optimum of the irrelevant-model program over all `2^l` subsets.
///
/// Each candidate pool is aggregated from scratch: winning means are taken
/// over the kept models plus the selected ones, then restricted to the kept
/// models. Ties keep the lexicographically smallest `β`.
pub fn brute_force_ordinal(scores: &ScoreMatrix, split: &ModelSplit) -> Result<AttackResult> {
    ModelSplit::new(
        split.kept.clone(),
        split.complement.clone(),
        scores.models(),
    )?;
    if split.kept.len() < 2 {
        return Err(Error::invalid(
            "ordinal oracle needs at least two kept models",
        ));
    }
    let l = split.complement.len();
    if l > MAX_COMPLEMENT {
        return Err(Error::GuardExceeded {
            estimate: 2f64.powi(l as i32),
            limit: 2f64.powi(MAX_COMPLEMENT as i32),
        });
    }
    let rates = winning_rate_matrix(&ranks_per_task(scores)?);
    let m = split.kept.len();
    let pool_ranking = |mask: u32| -> Result<Ranking> {
        let mut pool = split.kept.clone();
        // bit l-1-c selects complement c, so counting order is lexicographic in β
        pool.extend(
            (0..l)
                .filter(|c| mask >> (l - 1 - c) & 1 == 1)
                .map(|c| split.complement[c]),
        );
        let means = winning_means(&rates.restrict(&pool));
        rankdata_desc(&means[..m])
    };

    let baseline = pool_ranking(0)?;
    let mut best = (0.0, 0u32, baseline.clone());
    for mask in 1..(1u32 << l) {
        let ranking = pool_ranking(mask)?;
        let tau = kendall_tau(&baseline, &ranking)?;
        if tau > best.0 {
            best = (tau, mask, ranking);
        }
    }
    let (_, mask, ranking) = best;
    let beta = (0..l).map(|c| (mask >> (l - 1 - c) & 1) as u8).collect();
    AttackResult::new(baseline, ranking, Perturbation::Beta(beta))
}
