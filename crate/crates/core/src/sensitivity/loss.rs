use crate::rank::Ranking;

/// Value and gradient of a hinge-relaxed ranking loss.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedLoss {
    pub value: f64,
    pub gradient: Vec<f64>,
}

/// `Σ_{i,j : r_i < r_j} max(x_i - x_j, -λ)`.
///
/// Minimising it pushes every pair the baseline orders toward the opposite
/// order. At the kink the linear branch is taken.
fn pairwise_hinge(x: &[f64], baseline: &Ranking, lambda: f64) -> RelaxedLoss {
    assert_eq!(
        x.len(),
        baseline.len(),
        "loss input and baseline lengths differ"
    );
    let r = baseline.as_slice();
    let mut value = 0.0;
    let mut gradient = vec![0.0; x.len()];
    for i in 0..x.len() {
        for j in 0..x.len() {
            if r[i] < r[j] {
                let diff = x[i] - x[j];
                if diff >= -lambda {
                    value += diff;
                    gradient[i] += 1.0;
                    gradient[j] -= 1.0;
                } else {
                    value -= lambda;
                }
            }
        }
    }
    RelaxedLoss { value, gradient }
}

/// Which baseline-ordered pairs sit on the linear branch, in row-major pair order.
pub(crate) fn hinge_pattern(x: &[f64], baseline: &Ranking, lambda: f64) -> Vec<bool> {
    let r = baseline.as_slice();
    let mut out = Vec::new();
    for i in 0..x.len() {
        for j in 0..x.len() {
            if r[i] < r[j] {
                out.push(x[i] - x[j] >= -lambda);
            }
        }
    }
    out
}

/// Relaxed label-noise loss over perturbed mean scores.
///
/// # Panics
///
/// If `s_bar_prime` and `baseline` differ in length.
pub fn relaxed_cardinal_loss(s_bar_prime: &[f64], baseline: &Ranking, lambda: f64) -> RelaxedLoss {
    pairwise_hinge(s_bar_prime, baseline, lambda)
}

/// Relaxed irrelevant-model loss over perturbed winning means.
///
/// # Panics
///
/// If `w_bar_prime` and `baseline` differ in length.
pub fn relaxed_ordinal_loss(w_bar_prime: &[f64], baseline: &Ranking, lambda: f64) -> RelaxedLoss {
    pairwise_hinge(w_bar_prime, baseline, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rk(v: &[f64]) -> Ranking {
        Ranking::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_active_pair() {
        let l = relaxed_cardinal_loss(&[0.5, 0.45], &rk(&[1.0, 2.0]), 0.0);
        assert!((l.value - 0.05).abs() < 1e-12);
        assert_eq!(l.gradient, vec![1.0, -1.0]);
    }

    #[test]
    fn reversed_scores_clamp_every_pair() {
        let base = rk(&[1.0, 2.0, 3.0, 4.0]);
        let x = [0.0, 1.0, 2.0, 3.0];
        let l = relaxed_cardinal_loss(&x, &base, 0.5);
        assert!((l.value + 0.5 * 6.0).abs() < 1e-12);
        assert!(l.gradient.iter().all(|g| *g == 0.0));
        let l = relaxed_ordinal_loss(&x, &base, 0.5);
        assert!((l.value + 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_input_with_zero_margin() {
        let l = relaxed_cardinal_loss(&[0.3; 3], &rk(&[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(l.value, 0.0);
        let l = relaxed_ordinal_loss(&[0.2; 3], &rk(&[3.0, 1.0, 2.0]), 0.0);
        assert_eq!(l.value, 0.0);
    }

    #[test]
    fn ordered_gaps_sum() {
        // baseline 1 < 2 < 3, gaps 0.1 and 0.3: pairs contribute 0.1 + 0.4 + 0.3
        let l = relaxed_ordinal_loss(&[0.8, 0.7, 0.4], &rk(&[1.0, 2.0, 3.0]), 0.0);
        assert!((l.value - 0.8).abs() < 1e-12);
        assert_eq!(l.gradient, vec![2.0, 0.0, -2.0]);
    }

    #[test]
    fn tied_baseline_pairs_are_ignored() {
        let l = relaxed_ordinal_loss(&[0.1, 0.9], &rk(&[1.5, 1.5]), 0.0);
        assert_eq!(l.value, 0.0);
        assert!(hinge_pattern(&[0.1, 0.9], &rk(&[1.5, 1.5]), 0.0).is_empty());
    }

    #[test]
    fn kink_takes_linear_branch() {
        let l = relaxed_cardinal_loss(&[0.0, 0.25], &rk(&[1.0, 2.0]), 0.25);
        assert_eq!(l.gradient, vec![1.0, -1.0]);
        assert_eq!(l.value, -0.25);
    }
}
