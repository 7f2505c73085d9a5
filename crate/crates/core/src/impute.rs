//! Nearest-neighbour imputation of missing scores.

use crate::benchmark::ScoreMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_NEIGHBOURS: usize = 5;

/// Euclidean distance over co-present columns, scaled up by the fraction of
/// columns that could be compared. `None` when nothing is co-present.
fn nan_euclidean(scores: &ScoreMatrix, a: usize, b: usize) -> Option<f64> {
    let n = scores.tasks();
    let (mut sum, mut shared) = (0.0, 0usize);
    for j in 0..n {
        if let (Some(x), Some(y)) = (scores.get(a, j), scores.get(b, j)) {
            sum += (x - y) * (x - y);
            shared += 1;
        }
    }
    (shared > 0).then(|| (sum * n as f64 / shared as f64).sqrt())
}

/// Fills each missing cell with the mean of that task's score among the `k`
/// nearest models that report it.
///
/// Distances are computed on the original matrix, so imputed values never
/// feed into other imputations. If no model with the task present shares a
/// column with the target, the task's overall mean is used.
pub fn knn_impute(scores: &ScoreMatrix, k: usize) -> Result<ScoreMatrix> {
    if k == 0 {
        return Err(Error::invalid("knn imputation needs k >= 1"));
    }
    let (m, n) = (scores.models(), scores.tasks());
    for i in 0..m {
        if (0..n).all(|j| scores.get(i, j).is_none()) {
            return Err(Error::invalid(format!(
                "model {:?} has no scores",
                scores.model_names()[i]
            )));
        }
    }
    for j in 0..n {
        if (0..m).all(|i| scores.get(i, j).is_none()) {
            return Err(Error::invalid(format!(
                "task {:?} has no scores",
                scores.task_names()[j]
            )));
        }
    }
    if scores.is_complete() {
        return Ok(scores.clone());
    }

    let mut cells = Vec::with_capacity(m * n);
    for i in 0..m {
        let needs_fill = (0..n).any(|j| scores.get(i, j).is_none());
        let distances: Vec<Option<f64>> = (0..m)
            .map(|c| {
                if needs_fill && c != i {
                    nan_euclidean(scores, i, c)
                } else {
                    None
                }
            })
            .collect();
        for j in 0..n {
            if let Some(v) = scores.get(i, j) {
                cells.push(Some(v));
                continue;
            }
            let mut donors: Vec<(f64, f64)> = (0..m)
                .filter_map(|c| Some((distances[c]?, scores.get(c, j)?)))
                .collect();
            let fill = if donors.is_empty() {
                let present: Vec<f64> = (0..m).filter_map(|c| scores.get(c, j)).collect();
                present.iter().sum::<f64>() / present.len() as f64
            } else {
                // stable: equal distances keep model order
                donors.sort_by(|a, b| a.0.total_cmp(&b.0));
                donors.truncate(k);
                donors.iter().map(|d| d.1).sum::<f64>() / donors.len() as f64
            };
            cells.push(Some(fill));
        }
    }
    scores.with_cells(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::default_names;

    fn matrix(rows: &[&[Option<f64>]]) -> ScoreMatrix {
        let n = rows[0].len();
        ScoreMatrix::new(
            default_names("m", rows.len()),
            default_names("t", n),
            rows.iter().flat_map(|r| r.iter().copied()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn complete_matrix_is_unchanged() {
        let s = ScoreMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(knn_impute(&s, 5).unwrap(), s);
    }

    #[test]
    fn single_neighbour_donates_its_value() {
        // distances from row 2 over task 0: |5 - 1| = 4, |5 - 1.2| = 3.8
        let s = matrix(&[
            &[Some(1.0), Some(10.0)],
            &[Some(1.2), Some(20.0)],
            &[Some(5.0), None],
        ]);
        let out = knn_impute(&s, 1).unwrap();
        assert_eq!(out.get(2, 1), Some(20.0));
        let both = knn_impute(&s, 2).unwrap();
        assert_eq!(both.get(2, 1), Some(15.0));
        // asking for more neighbours than exist uses all of them
        assert_eq!(knn_impute(&s, 10).unwrap().get(2, 1), Some(15.0));
    }

    #[test]
    fn distance_scales_by_shared_columns() {
        let s = matrix(&[&[Some(0.0), None, Some(0.0)], &[Some(3.0), Some(4.0), None]]);
        // shared column 0 only: sqrt(3/1 * 9)
        assert!((nan_euclidean(&s, 0, 1).unwrap() - 27f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn constant_column_imputes_constant() {
        let s = matrix(&[
            &[Some(0.1), Some(0.7)],
            &[Some(0.9), None],
            &[Some(0.4), Some(0.7)],
            &[None, Some(0.7)],
        ]);
        let out = knn_impute(&s, 2).unwrap();
        assert_eq!(out.get(1, 1), Some(0.7));
        assert!(out.is_complete());
    }

    #[test]
    fn falls_back_to_column_mean_without_overlap() {
        let s = matrix(&[&[Some(1.0), None], &[None, Some(4.0)], &[None, Some(6.0)]]);
        let out = knn_impute(&s, 1).unwrap();
        assert_eq!(out.get(0, 1), Some(5.0));
        assert_eq!(out.get(1, 0), Some(1.0));
    }

    #[test]
    fn empty_rows_and_columns_are_rejected() {
        let row = matrix(&[&[None, None], &[Some(1.0), Some(2.0)]]);
        assert!(matches!(knn_impute(&row, 1), Err(Error::InvalidInput(_))));
        let col = matrix(&[&[Some(1.0), None], &[Some(2.0), None]]);
        assert!(matches!(knn_impute(&col, 1), Err(Error::InvalidInput(_))));
        let ok = ScoreMatrix::from_rows(&[vec![1.0]]).unwrap();
        assert!(knn_impute(&ok, 0).is_err());
    }
}
