//! Score matrices and the two aggregation rules.
//!
//! A cardinal benchmark ranks models by their mean score across tasks. An
//! ordinal benchmark only looks at per-task rankings and ranks models by their
//! average pairwise winning rate.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank::{rankdata_desc, RankMatrix, Ranking};

/// Models × tasks matrix of scores, higher is better. Cells may be missing.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    model_names: Vec<String>,
    task_names: Vec<String>,
    // row-major, model i task j at i * n + j
    cells: Vec<Option<f64>>,
}

fn check_unique(kind: &str, names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::invalid(format!("duplicate {kind} name {name:?}")));
        }
    }
    Ok(())
}

impl ScoreMatrix {
    pub fn new(
        model_names: Vec<String>,
        task_names: Vec<String>,
        cells: Vec<Option<f64>>,
    ) -> Result<Self> {
        let (m, n) = (model_names.len(), task_names.len());
        if m == 0 || n == 0 {
            return Err(Error::invalid(
                "score matrix needs at least one model and one task",
            ));
        }
        if cells.len() != m * n {
            return Err(Error::invalid(format!(
                "expected {} cells for {m} models x {n} tasks, got {}",
                m * n,
                cells.len()
            )));
        }
        if let Some(pos) = cells
            .iter()
            .position(|c| matches!(c, Some(v) if !v.is_finite()))
        {
            return Err(Error::invalid(format!(
                "non-finite score for model {:?}, task {:?}",
                model_names[pos / n],
                task_names[pos % n]
            )));
        }
        check_unique("model", &model_names)?;
        check_unique("task", &task_names)?;
        Ok(ScoreMatrix {
            model_names,
            task_names,
            cells,
        })
    }

    /// Builds a complete matrix from rows, naming models `model_0..` and tasks `task_0..`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "ragged rows: {} vs {n} tasks",
                r.len()
            )));
        }
        let cells = rows.iter().flatten().map(|&v| Some(v)).collect();
        ScoreMatrix::new(
            default_names("model", rows.len()),
            default_names("task", n),
            cells,
        )
    }

    pub fn models(&self) -> usize {
        self.model_names.len()
    }

    pub fn tasks(&self) -> usize {
        self.task_names.len()
    }

    pub fn model_names(&self) -> &[String] {
        &self.model_names
    }

    pub fn task_names(&self) -> &[String] {
        &self.task_names
    }

    #[inline]
    pub fn get(&self, model: usize, task: usize) -> Option<f64> {
        self.cells[model * self.tasks() + task]
    }

    pub fn missing_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.missing_count() == 0
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        match self.missing_count() {
            0 => Ok(()),
            missing => Err(Error::MustImpute { missing }),
        }
    }

    /// Scores of one task across all models; `None` if any cell is missing.
    pub fn task_column(&self, task: usize) -> Option<Vec<f64>> {
        (0..self.models()).map(|i| self.get(i, task)).collect()
    }

    /// Complete matrix as dense rows.
    pub fn dense_rows(&self) -> Result<Vec<Vec<f64>>> {
        self.require_complete()?;
        Ok(self
            .cells
            .chunks(self.tasks())
            .map(|row| row.iter().map(|c| c.unwrap_or_default()).collect())
            .collect())
    }

    /// Keeps the given task columns, in the given order.
    pub fn select_tasks(&self, tasks: &[usize]) -> Result<ScoreMatrix> {
        let names = tasks.iter().map(|&j| self.task_names[j].clone()).collect();
        let cells = (0..self.models())
            .flat_map(|i| tasks.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        ScoreMatrix::new(self.model_names.clone(), names, cells)
    }

    /// Keeps the given model rows, in the given order.
    pub fn select_models(&self, models: &[usize]) -> Result<ScoreMatrix> {
        let names = models
            .iter()
            .map(|&i| self.model_names[i].clone())
            .collect();
        let cells = models
            .iter()
            .flat_map(|&i| (0..self.tasks()).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        ScoreMatrix::new(names, self.task_names.clone(), cells)
    }

    pub(crate) fn with_cells(&self, cells: Vec<Option<f64>>) -> Result<ScoreMatrix> {
        ScoreMatrix::new(self.model_names.clone(), self.task_names.clone(), cells)
    }
}

pub(crate) fn default_names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}_{i}")).collect()
}

/// Per-task rankings of a complete score matrix.
pub fn ranks_per_task(scores: &ScoreMatrix) -> Result<RankMatrix> {
    scores.require_complete()?;
    let columns = (0..scores.tasks())
        .map(|j| rankdata_desc(&scores.task_column(j).unwrap_or_default()))
        .collect::<Result<Vec<_>>>()?;
    RankMatrix::from_columns(columns)
}

/// Per-model mean score across tasks.
pub fn mean_scores(scores: &ScoreMatrix) -> Result<Vec<f64>> {
    let rows = scores.dense_rows()?;
    let n = scores.tasks() as f64;
    Ok(rows.iter().map(|r| r.iter().sum::<f64>() / n).collect())
}

/// Ranks models by mean score.
pub fn cardinal_aggregate(scores: &ScoreMatrix) -> Result<Ranking> {
    rankdata_desc(&mean_scores(scores)?)
}

/// Pairwise winning rates: `w[i][j]` is the fraction of tasks where model `i`
/// strictly outranks model `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinningRateMatrix {
    size: usize,
    rates: Vec<f64>,
}

impl WinningRateMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rates[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rates[i * self.size..(i + 1) * self.size]
    }

    /// Sub-matrix over `models`, in the given order.
    pub fn restrict(&self, models: &[usize]) -> WinningRateMatrix {
        let rates = models
            .iter()
            .flat_map(|&i| models.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        WinningRateMatrix {
            size: models.len(),
            rates,
        }
    }
}

pub fn winning_rate_matrix(ranks: &RankMatrix) -> WinningRateMatrix {
    let m = ranks.models();
    let n = ranks.tasks() as f64;
    let mut wins = vec![0u32; m * m];
    for col in ranks.columns() {
        let r = col.as_slice();
        for i in 0..m {
            for j in 0..m {
                if r[i] < r[j] {
                    wins[i * m + j] += 1;
                }
            }
        }
    }
    WinningRateMatrix {
        size: m,
        rates: wins.into_iter().map(|w| w as f64 / n).collect(),
    }
}

/// Row means `w̄_i = (1/m) Σ_j w_ij`, diagonal included.
pub fn winning_means(rates: &WinningRateMatrix) -> Vec<f64> {
    let m = rates.size() as f64;
    (0..rates.size())
        .map(|i| rates.row(i).iter().sum::<f64>() / m)
        .collect()
}

/// Ranks models by mean winning rate.
pub fn ordinal_aggregate(rates: &WinningRateMatrix) -> Result<Ranking> {
    if rates.size() < 2 {
        return Err(Error::invalid(
            "ordinal aggregation needs at least two models",
        ));
    }
    rankdata_desc(&winning_means(rates))
}

/// Shorthand for ranking a complete score matrix by winning rate.
pub fn ordinal_aggregate_scores(scores: &ScoreMatrix) -> Result<Ranking> {
    ordinal_aggregate(&winning_rate_matrix(&ranks_per_task(scores)?))
}

/// Which aggregation rule a benchmark uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkKind {
    Cardinal,
    Ordinal,
}

impl BenchmarkKind {
    pub fn aggregate(self, scores: &ScoreMatrix) -> Result<Ranking> {
        match self {
            BenchmarkKind::Cardinal => cardinal_aggregate(scores),
            BenchmarkKind::Ordinal => ordinal_aggregate_scores(scores),
        }
    }
}

impl std::fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BenchmarkKind::Cardinal => "cardinal",
            BenchmarkKind::Ordinal => "ordinal",
        })
    }
}

/// Evaluated models and the pool of candidate irrelevant models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSplit {
    pub kept: Vec<usize>,
    pub complement: Vec<usize>,
}

impl ModelSplit {
    /// Checks the split partitions `0..total` with a non-empty kept list.
    pub fn new(kept: Vec<usize>, complement: Vec<usize>, total: usize) -> Result<Self> {
        if kept.is_empty() {
            return Err(Error::invalid("split must keep at least one model"));
        }
        let mut seen = vec![false; total];
        for &i in kept.iter().chain(&complement) {
            match seen.get_mut(i) {
                Some(s) if !*s => *s = true,
                Some(_) => return Err(Error::invalid(format!("model {i} appears twice in split"))),
                None => return Err(Error::invalid(format!("model {i} out of range 0..{total}"))),
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("model {i} missing from split")));
        }
        Ok(ModelSplit { kept, complement })
    }
}

/// Keeps the best `ceil(fraction * m)` models under the chosen aggregation.
pub fn top_fraction_split(
    scores: &ScoreMatrix,
    fraction: f64,
    kind: BenchmarkKind,
) -> Result<ModelSplit> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid(format!(
            "split fraction {fraction} outside (0, 1]"
        )));
    }
    let m = scores.models();
    // guard against 0.2 * 10 = 2.0000000000000004 style round-up
    let keep = ((fraction * m as f64) - 1e-9).ceil().max(1.0) as usize;
    if keep < 2 {
        return Err(Error::invalid(format!(
            "fraction {fraction} keeps only {keep} of {m} models; at least two required"
        )));
    }
    let ranking = kind.aggregate(scores)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| ranking[a].total_cmp(&ranking[b]));
    let complement = order.split_off(keep);
    ModelSplit::new(order, complement, m)
}
