use crate::error::{Error, Result};

/// A piecewise-smooth relaxed loss over unconstrained parameters.
pub trait RelaxedObjective {
    fn dim(&self) -> usize;

    /// Loss value and analytic gradient at `theta`.
    fn evaluate(&self, theta: &[f64]) -> (f64, Vec<f64>);

    /// Linear/clamped state of every hinge at `theta`. Two points with the
    /// same pattern lie on the same smooth piece.
    fn hinge_pattern(&self, theta: &[f64]) -> Vec<bool>;
}

/// Compares the analytic gradient with central differences of step `h`.
///
/// Returns the largest per-coordinate relative error
/// `|fd - analytic| / max(|fd|, |analytic|)`, with coordinates where both are
/// zero counting as exact. Fails with [`Error::InconclusiveCheck`] if any probe
/// crosses a hinge kink.
pub fn finite_difference_check(
    objective: &dyn RelaxedObjective,
    point: &[f64],
    h: f64,
) -> Result<f64> {
    if point.len() != objective.dim() {
        return Err(Error::invalid(format!(
            "point has {} coordinates, objective expects {}",
            point.len(),
            objective.dim()
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step {h} must be positive")));
    }
    let (_, analytic) = objective.evaluate(point);
    let pattern = objective.hinge_pattern(point);
    let mut probe = point.to_vec();
    let mut worst = 0.0f64;
    for k in 0..point.len() {
        probe[k] = point[k] + h;
        let (plus, plus_pattern) = (
            objective.evaluate(&probe).0,
            objective.hinge_pattern(&probe),
        );
        probe[k] = point[k] - h;
        let (minus, minus_pattern) = (
            objective.evaluate(&probe).0,
            objective.hinge_pattern(&probe),
        );
        probe[k] = point[k];
        if plus_pattern != pattern || minus_pattern != pattern {
            return Err(Error::InconclusiveCheck(format!(
                "coordinate {k} crosses a hinge kink within h = {h}"
            )));
        }
        let fd = (plus - minus) / (2.0 * h);
        let scale = fd.abs().max(analytic[k].abs());
        if scale > 0.0 {
            worst = worst.max((fd - analytic[k]).abs() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::{ModelSplit, ScoreMatrix};
    use crate::sensitivity::{CardinalObjective, OrdinalObjective};

    fn scores() -> ScoreMatrix {
        ScoreMatrix::from_rows(&[
            vec![0.9, 0.2, 0.5],
            vec![0.6, 0.7, 0.3],
            vec![0.1, 0.8, 0.9],
            vec![0.4, 0.3, 0.2],
        ])
        .unwrap()
    }

    #[test]
    fn cardinal_gradient_in_linear_region() {
        let obj = CardinalObjective::new(&scores(), 0.01, 0.0, Some(&[0.5, 0.1, 0.3])).unwrap();
        let err = finite_difference_check(&obj, &[0.3, -0.4, 1.1], 1e-6).unwrap();
        assert!(err <= 1e-4, "relative error {err}");
    }

    #[test]
    fn fully_clamped_region_is_exact() {
        // the weights already reverse the only ordered pair by a wide margin
        let s = ScoreMatrix::from_rows(&[vec![1.0, 0.0], vec![0.4, 0.5]]).unwrap();
        let obj = CardinalObjective::new(&s, 0.01, 0.0, None).unwrap();
        let theta = [-5.0, 5.0];
        let (_, grad) = obj.evaluate(&theta);
        assert!(grad.iter().all(|g| *g == 0.0));
        assert_eq!(finite_difference_check(&obj, &theta, 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn kink_straddling_point_is_inconclusive() {
        // perturbed means tie exactly when alpha_0 / alpha_1 = 0.9
        let s = ScoreMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.9]]).unwrap();
        let obj = CardinalObjective::new(&s, 0.01, 0.0, None).unwrap();
        let c: f64 = 0.01 / 0.99;
        let q = 0.9 * (0.5 + c) - c;
        let theta = [(q / (1.0 - q)).ln(), 0.0];
        assert!(matches!(
            finite_difference_check(&obj, &theta, 1e-6),
            Err(Error::InconclusiveCheck(_))
        ));
    }

    #[test]
    fn ordinal_gradient_in_linear_region() {
        let s = crate::generate::generate_random(9, 4, 2).unwrap();
        let split = ModelSplit::new(vec![0, 1, 2, 3], vec![4, 5, 6, 7, 8], 9).unwrap();
        let obj = OrdinalObjective::new(&s, &split, 0.0).unwrap();
        let err = finite_difference_check(&obj, &[0.2, -0.7, 0.4, 1.3, -0.1], 1e-6).unwrap();
        assert!(err <= 1e-4, "relative error {err}");
    }

    #[test]
    fn rejects_wrong_dimension() {
        let obj = CardinalObjective::new(&scores(), 0.01, 0.0, None).unwrap();
        assert!(finite_difference_check(&obj, &[0.0], 1e-6).is_err());
        assert!(finite_difference_check(&obj, &[0.0; 3], 0.0).is_err());
    }
}
