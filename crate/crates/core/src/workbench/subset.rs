use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::benchmark::{ranks_per_task, BenchmarkKind, ScoreMatrix};
use crate::error::{Error, Result};
use crate::rank::{kendall_tau, mrc, rankdata_desc, Ranking};

/// Closest approximation of the full ranking by task subsets of one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetLevel {
    pub size: usize,
    pub samples: usize,
    /// Every subset of this size was evaluated.
    pub exhaustive: bool,
    pub min_tau: f64,
    pub min_mrc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetAnalysis {
    pub kind: BenchmarkKind,
    pub levels: Vec<SubsetLevel>,
}

/// Per-model, per-task contribution whose sum over a task subset orders
/// models the same way the aggregation rule does on that subset.
struct TaskContributions {
    // model-major, one value per task
    values: Vec<f64>,
    tasks: usize,
}

impl TaskContributions {
    fn new(scores: &ScoreMatrix, kind: BenchmarkKind) -> Result<Self> {
        let values = match kind {
            BenchmarkKind::Cardinal => scores.dense_rows()?.into_iter().flatten().collect(),
            BenchmarkKind::Ordinal => {
                // opponents strictly beaten in each task
                let ranks = ranks_per_task(scores)?;
                let m = scores.models();
                let mut beaten = vec![0.0; m * scores.tasks()];
                for (j, col) in ranks.columns().iter().enumerate() {
                    let mut sorted: Vec<f64> = col.as_slice().to_vec();
                    sorted.sort_by(f64::total_cmp);
                    for i in 0..m {
                        let at_or_above = sorted.partition_point(|r| *r <= col[i]);
                        beaten[i * scores.tasks() + j] = (m - at_or_above) as f64;
                    }
                }
                beaten
            }
        };
        Ok(TaskContributions {
            values,
            tasks: scores.tasks(),
        })
    }

    fn ranking(&self, subset: &[usize]) -> Result<Ranking> {
        let totals: Vec<f64> = self
            .values
            .chunks(self.tasks)
            .map(|row| subset.iter().map(|&j| row[j]).sum())
            .collect();
        rankdata_desc(&totals)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(pos) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[pos] += 1;
    for i in pos + 1..k {
        combo[i] = combo[i - 1] + 1;
    }
    true
}

/// For each subset size `1..=max_k`, the smallest tau and the smallest MRC
/// between the ranking aggregated on a task subset and the full ranking.
///
/// Sizes with at most `samples` subsets are enumerated exhaustively; otherwise
/// `samples` subsets are drawn uniformly (repeats across draws allowed). Tau
/// and MRC are minimised independently.
pub fn subset_analysis(
    scores: &ScoreMatrix,
    kind: BenchmarkKind,
    max_k: usize,
    samples: usize,
    seed: u64,
) -> Result<SubsetAnalysis> {
    let n = scores.tasks();
    if max_k == 0 || max_k > n {
        return Err(Error::invalid(format!("max_k {max_k} outside 1..={n}")));
    }
    if samples == 0 {
        return Err(Error::invalid("subset analysis needs at least one sample"));
    }
    if scores.models() < 2 {
        return Err(Error::invalid("subset analysis needs at least two models"));
    }
    let contributions = TaskContributions::new(scores, kind)?;
    let full = kind.aggregate(scores)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut levels = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let mut min_tau = f64::INFINITY;
        let mut min_mrc = f64::INFINITY;
        let mut visit = |subset: &[usize]| -> Result<()> {
            let r = contributions.ranking(subset)?;
            min_tau = min_tau.min(kendall_tau(&full, &r)?);
            min_mrc = min_mrc.min(mrc(&full, &r)?);
            Ok(())
        };
        let exhaustive = binomial(n, k) <= samples as f64;
        let evaluated = if exhaustive {
            let mut combo: Vec<usize> = (0..k).collect();
            let mut count = 0;
            loop {
                visit(&combo)?;
                count += 1;
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
            count
        } else {
            for _ in 0..samples {
                let mut subset = index::sample(&mut rng, n, k).into_vec();
                subset.sort_unstable();
                visit(&subset)?;
            }
            samples
        };
        levels.push(SubsetLevel {
            size: k,
            samples: evaluated,
            exhaustive,
            min_tau,
            min_mrc,
        });
    }
    Ok(SubsetAnalysis { kind, levels })
}
