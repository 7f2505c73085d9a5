//! Rank construction and rank-comparison statistics.
//!
//! Rank 1 is always the best model: larger scores (or winning rates) map to
//! smaller ranks. Exact ties share the average of the positions they span, so
//! every ranking of `m` models sums to `m(m+1)/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance under which two values are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[inline]
pub(crate) fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * 1f64.max(a.abs()).max(b.abs())
}

/// A rank vector over `m` models; fractional entries encode ties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ranking(Vec<f64>);

impl Ranking {
    /// Wraps an existing rank vector after checking it is a valid ranking.
    pub fn new(ranks: Vec<f64>) -> Result<Self> {
        let m = ranks.len();
        if m == 0 {
            return Err(Error::invalid("ranking must contain at least one model"));
        }
        let hi = m as f64;
        if let Some(r) = ranks
            .iter()
            .find(|r| !r.is_finite() || **r < 1.0 - TIE_TOLERANCE || **r > hi + TIE_TOLERANCE)
        {
            return Err(Error::invalid(format!("rank {r} outside [1, {m}]")));
        }
        let sum: f64 = ranks.iter().sum();
        let expected = hi * (hi + 1.0) / 2.0;
        if (sum - expected).abs() > 1e-9 * expected {
            return Err(Error::invalid(format!(
                "ranks sum to {sum}, expected {expected}"
            )));
        }
        Ok(Ranking(ranks))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Restricts the ranking to `indices` and re-ranks the survivors.
    pub fn restrict(&self, indices: &[usize]) -> Ranking {
        let neg: Vec<f64> = indices.iter().map(|&i| -self.0[i]).collect();
        rank_desc_unchecked(&neg)
    }
}

impl std::ops::Index<usize> for Ranking {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Per-task rankings: column `j` ranks all `m` models under task `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankMatrix {
    models: usize,
    columns: Vec<Ranking>,
}

impl RankMatrix {
    pub fn from_columns(columns: Vec<Ranking>) -> Result<Self> {
        let models = columns
            .first()
            .map(Ranking::len)
            .ok_or_else(|| Error::invalid("rank matrix needs at least one task"))?;
        if let Some(c) = columns.iter().find(|c| c.len() != models) {
            return Err(Error::invalid(format!(
                "task column ranks {} models, expected {models}",
                c.len()
            )));
        }
        Ok(RankMatrix { models, columns })
    }

    pub fn models(&self) -> usize {
        self.models
    }

    pub fn tasks(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, task: usize) -> &Ranking {
        &self.columns[task]
    }

    pub fn columns(&self) -> &[Ranking] {
        &self.columns
    }

    #[inline]
    pub fn get(&self, model: usize, task: usize) -> f64 {
        self.columns[task][model]
    }
}

/// Groups tied values and assigns average ranks, largest value first.
/// Caller guarantees a non-empty, finite input.
fn rank_desc_unchecked(values: &[f64]) -> Ranking {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let head = values[order[start]];
        let mut end = start + 1;
        while end < order.len() && approx_eq(head, values[order[end]]) {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let shared = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = shared;
        }
        start = end;
    }
    Ranking(ranks)
}

/// Ranks `values` so the maximum receives rank 1; ties get average ranks.
pub fn rankdata_desc(values: &[f64]) -> Result<Ranking> {
    if values.is_empty() {
        return Err(Error::invalid("cannot rank an empty vector"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("cannot rank non-finite value {v}")));
    }
    Ok(rank_desc_unchecked(values))
}

fn check_pair(r: &Ranking, r_prime: &Ranking) -> Result<usize> {
    if r.len() != r_prime.len() {
        return Err(Error::invalid(format!(
            "ranking lengths differ: {} vs {}",
            r.len(),
            r_prime.len()
        )));
    }
    if r.len() < 2 {
        return Err(Error::invalid("rank distances need at least two models"));
    }
    Ok(r.len())
}

/// Dense tie-group ids in ascending rank order.
fn tie_groups(r: &[f64]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..r.len()).collect();
    order.sort_by(|&a, &b| r[a].total_cmp(&r[b]));
    let mut groups = vec![0u32; r.len()];
    let mut group = 0u32;
    let mut head = r[order[0]];
    for &idx in &order {
        if !approx_eq(head, r[idx]) {
            group += 1;
            head = r[idx];
        }
        groups[idx] = group;
    }
    groups
}

/// Number of pairs `(a, b)` with `a < b` that share a key in a sorted slice.
fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Counts strict inversions with a bottom-up merge sort.
fn count_inversions(values: &mut Vec<u32>) -> u64 {
    let n = values.len();
    let mut buf = vec![0u32; n];
    let mut swaps = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if values[j] < values[i] {
                    buf[k] = values[j];
                    swaps += (mid - i) as u64;
                    j += 1;
                } else {
                    buf[k] = values[i];
                    i += 1;
                }
                k += 1;
            }
            buf[k..k + (mid - i)].copy_from_slice(&values[i..mid]);
            k += mid - i;
            buf[k..k + (hi - j)].copy_from_slice(&values[j..hi]);
            lo = hi;
        }
        std::mem::swap(values, &mut buf);
        width *= 2;
    }
    swaps
}

/// Fraction of model pairs whose strict order differs between two rankings.
///
/// A pair tied in exactly one ranking is discordant; a pair tied in both is
/// concordant. Runs in `O(m log m)`.
pub fn kendall_tau(r: &Ranking, r_prime: &Ranking) -> Result<f64> {
    let m = check_pair(r, r_prime)?;
    let gx = tie_groups(r.as_slice());
    let gy = tie_groups(r_prime.as_slice());

    let mut pairs: Vec<(u32, u32)> = gx.iter().copied().zip(gy.iter().copied()).collect();
    pairs.sort_unstable();
    let xs: Vec<u32> = pairs.iter().map(|p| p.0).collect();
    let tied_x = tied_pairs(&xs);
    let tied_both = tied_pairs(&pairs);

    let mut ys: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    let swaps = count_inversions(&mut ys);
    // merge sort leaves ys sorted
    let tied_y = tied_pairs(&ys);

    let discordant = swaps + (tied_x - tied_both) + (tied_y - tied_both);
    let total = (m * (m - 1) / 2) as f64;
    Ok(discordant as f64 / total)
}

/// Largest single-model rank displacement, normalized by `m - 1`.
pub fn mrc(r: &Ranking, r_prime: &Ranking) -> Result<f64> {
    let m = check_pair(r, r_prime)?;
    let max = r
        .as_slice()
        .iter()
        .zip(r_prime.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(max / (m - 1) as f64)
}

/// Reversed Kendall's coefficient of concordance over per-task rankings.
///
/// Returns 0 when every task ranks the models identically and approaches 1
/// as task rankings become unrelated.
pub fn diversity_kendall_w(ranks: &RankMatrix) -> Result<f64> {
    let m = ranks.models();
    let n = ranks.tasks();
    if m < 2 {
        return Err(Error::invalid("diversity needs at least two models"));
    }
    let totals: Vec<f64> = (0..m)
        .map(|i| ranks.columns().iter().map(|c| c[i]).sum())
        .collect();
    let centre = n as f64 * (m as f64 + 1.0) / 2.0;
    let spread: f64 = totals.iter().map(|t| (t - centre).powi(2)).sum();
    let (mf, nf) = (m as f64, n as f64);
    let w = 1.0 - 12.0 * spread / (nf * nf * (mf * mf * mf - mf));
    Ok(w.clamp(0.0, 1.0))
}

fn check_paired(x: &[f64], y: &[f64], min_len: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "sample lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < min_len {
        return Err(Error::invalid(format!(
            "need at least {min_len} paired samples, got {}",
            x.len()
        )));
    }
    Ok(())
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_paired(x, y, 2)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::degenerate(
            "pearson correlation of a constant sample",
        ));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Least-squares slope of a line forced through the origin.
pub fn regression_through_origin(x: &[f64], y: &[f64]) -> Result<f64> {
    check_paired(x, y, 1)?;
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    if sxx == 0.0 {
        return Err(Error::degenerate(
            "regression predictor is identically zero",
        ));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Ok(sxy / sxx)
}
