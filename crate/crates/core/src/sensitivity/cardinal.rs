use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::gradcheck::RelaxedObjective;
use super::loss::{hinge_pattern, relaxed_cardinal_loss};
use super::{logistic, restart_rng, AttackResult, CardinalAttackConfig, Perturbation};
use crate::benchmark::{cardinal_aggregate, ScoreMatrix};
use crate::error::{Error, Result};
use crate::rank::{rankdata_desc, Ranking};

/// Per-model totals `Σ_j α_j s_ij + (1 - α_j) p_j` after label noise.
///
/// # Panics
///
/// If `alpha` or `p` does not have one entry per task.
pub fn perturbed_means(rows: &[Vec<f64>], alpha: &[f64], p: &[f64]) -> Vec<f64> {
    let noise: f64 = alpha.iter().zip(p).map(|(a, p)| (1.0 - a) * p).sum();
    rows.iter()
        .map(|row| {
            assert_eq!(row.len(), alpha.len(), "alpha must have one entry per task");
            row.iter().zip(alpha).map(|(s, a)| a * s).sum::<f64>() + noise
        })
        .collect()
}

/// Relaxed label-noise loss as a function of the unconstrained parameters.
///
/// `θ ↦ α = normalize_l1(σ(θ) + ε/(1-ε)) ↦ s̄' ↦ ℓ^c`.
#[derive(Debug, Clone)]
pub struct CardinalObjective {
    rows: Vec<Vec<f64>>,
    p: Vec<f64>,
    baseline: Ranking,
    offset: f64,
    lambda: f64,
}

impl CardinalObjective {
    pub fn new(scores: &ScoreMatrix, epsilon: f64, lambda: f64, p: Option<&[f64]>) -> Result<Self> {
        let rows = scores.dense_rows()?;
        let n = scores.tasks();
        let p = match p {
            Some(p) if p.len() != n => {
                return Err(Error::invalid(format!(
                    "random-label scores have {} entries for {n} tasks",
                    p.len()
                )))
            }
            Some(p) => p.to_vec(),
            None => vec![0.0; n],
        };
        Ok(CardinalObjective {
            rows,
            p,
            baseline: cardinal_aggregate(scores)?,
            offset: epsilon / (1.0 - epsilon),
            lambda,
        })
    }

    pub fn baseline(&self) -> &Ranking {
        &self.baseline
    }

    fn unnormalized(&self, theta: &[f64]) -> Vec<f64> {
        theta.iter().map(|&t| logistic(t) + self.offset).collect()
    }

    fn sum_normalized(&self, theta: &[f64]) -> Vec<f64> {
        let u = self.unnormalized(theta);
        let total: f64 = u.iter().sum();
        u.into_iter().map(|v| v / total).collect()
    }

    /// Final clean fractions: scaled so the largest equals 1.
    pub fn alpha(&self, theta: &[f64]) -> Vec<f64> {
        let u = self.unnormalized(theta);
        let max = u.iter().copied().fold(f64::MIN, f64::max);
        u.into_iter().map(|v| v / max).collect()
    }

    pub fn means(&self, alpha: &[f64]) -> Vec<f64> {
        perturbed_means(&self.rows, alpha, &self.p)
    }
}

impl RelaxedObjective for CardinalObjective {
    fn dim(&self) -> usize {
        self.p.len()
    }

    fn evaluate(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let u = self.unnormalized(theta);
        let total: f64 = u.iter().sum();
        let alpha: Vec<f64> = u.iter().map(|v| v / total).collect();
        let means = self.means(&alpha);
        let loss = relaxed_cardinal_loss(&means, &self.baseline, self.lambda);

        // dℓ/dα_j = Σ_i g_i (s_ij - p_j)
        let n = self.dim();
        let mut d_alpha = vec![0.0; n];
        for (row, g) in self.rows.iter().zip(&loss.gradient) {
            if *g == 0.0 {
                continue;
            }
            for j in 0..n {
                d_alpha[j] += g * (row[j] - self.p[j]);
            }
        }
        // through α = u / Σu, then u = σ(θ) + c
        let weighted: f64 = alpha.iter().zip(&d_alpha).map(|(a, d)| a * d).sum();
        let grad = theta
            .iter()
            .zip(&d_alpha)
            .map(|(&t, d)| {
                let s = logistic(t);
                (d - weighted) / total * s * (1.0 - s)
            })
            .collect();
        (loss.value, grad)
    }

    fn hinge_pattern(&self, theta: &[f64]) -> Vec<bool> {
        let means = self.means(&self.sum_normalized(theta));
        hinge_pattern(&means, &self.baseline, self.lambda)
    }
}

fn run_restart(
    objective: &CardinalObjective,
    cfg: &CardinalAttackConfig,
    restart: usize,
) -> Result<AttackResult> {
    let mut rng = restart_rng(cfg.seed, restart);
    let mut theta: Vec<f64> = (0..objective.dim())
        .map(|_| rng.sample(StandardNormal))
        .collect();
    for _ in 0..cfg.iterations {
        let (_, grad) = objective.evaluate(&theta);
        for (t, g) in theta.iter_mut().zip(&grad) {
            *t -= cfg.step_size * g;
        }
    }
    let alpha = objective.alpha(&theta);
    let perturbed = rankdata_desc(&objective.means(&alpha))?;
    AttackResult::new(
        objective.baseline.clone(),
        perturbed,
        Perturbation::Alpha(alpha),
    )
}

/// Searches per-task label-noise levels that most disturb the mean-score ranking.
///
/// Runs `cfg.restarts` independent gradient descents and keeps the one with
/// the largest Kendall tau against the clean ranking (lowest restart index on
/// ties). The returned tau is a lower bound on the true maximum.
pub fn cardinal_sensitivity(
    scores: &ScoreMatrix,
    cfg: &CardinalAttackConfig,
) -> Result<AttackResult> {
    cfg.validate()?;
    if scores.models() < 2 {
        return Err(Error::invalid(
            "cardinal sensitivity needs at least two models",
        ));
    }
    let objective = CardinalObjective::new(
        scores,
        cfg.epsilon,
        cfg.lambda,
        cfg.random_label_scores.as_deref(),
    )?;
    let results = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(&objective, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(AttackResult::best(results).expect("at least one restart"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_constant;
    use crate::rank::kendall_tau;

    fn flip_pair() -> ScoreMatrix {
        ScoreMatrix::from_rows(&[vec![1.0, 0.0], vec![0.4, 0.5]]).unwrap()
    }

    #[test]
    fn clean_alpha_reproduces_mean_ranking() {
        let s = ScoreMatrix::from_rows(&[vec![0.9, 0.1], vec![0.5, 0.6], vec![0.2, 0.8]]).unwrap();
        let rows = s.dense_rows().unwrap();
        let means = perturbed_means(&rows, &[1.0, 1.0], &[0.0, 0.0]);
        assert!((means[1] - 1.1).abs() < 1e-12);
        assert_eq!(
            rankdata_desc(&means).unwrap(),
            cardinal_aggregate(&s).unwrap()
        );
    }

    #[test]
    fn hand_computed_flip() {
        let rows = flip_pair().dense_rows().unwrap();
        let means = perturbed_means(&rows, &[0.01, 1.0], &[0.0, 0.0]);
        assert!((means[0] - 0.01).abs() < 1e-12);
        assert!((means[1] - 0.504).abs() < 1e-12);
        let clean = rankdata_desc(&perturbed_means(&rows, &[1.0, 1.0], &[0.0, 0.0])).unwrap();
        assert_eq!(clean.as_slice(), &[1.0, 2.0]);
        assert_eq!(rankdata_desc(&means).unwrap().as_slice(), &[2.0, 1.0]);
    }

    #[test]
    fn noise_floor_does_not_change_order() {
        let rows = flip_pair().dense_rows().unwrap();
        let alpha = [0.3, 0.9];
        let a = rankdata_desc(&perturbed_means(&rows, &alpha, &[0.0, 0.0])).unwrap();
        let b = rankdata_desc(&perturbed_means(&rows, &alpha, &[0.5, 0.25])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn attack_flips_two_model_instance() {
        let cfg = CardinalAttackConfig {
            epsilon: 0.01,
            ..Default::default()
        };
        let res = cardinal_sensitivity(&flip_pair(), &cfg).unwrap();
        assert_eq!(res.tau, 1.0);
        assert_eq!(res.mrc, 1.0);
        let Perturbation::Alpha(alpha) = &res.perturbation else {
            panic!("expected alpha")
        };
        assert!(alpha.iter().all(|a| *a >= 0.01 - 1e-12 && *a <= 1.0));
        assert_eq!(alpha.iter().copied().fold(0.0, f64::max), 1.0);
    }

    #[test]
    fn constant_benchmark_is_stable() {
        let s = generate_constant(20, 6, 4).unwrap();
        let cfg = CardinalAttackConfig {
            iterations: 200,
            ..Default::default()
        };
        let res = cardinal_sensitivity(&s, &cfg).unwrap();
        assert_eq!((res.tau, res.mrc), (0.0, 0.0));
    }

    #[test]
    fn single_task_cannot_move() {
        let s = ScoreMatrix::from_rows(&[vec![0.3], vec![0.9], vec![0.5]]).unwrap();
        let res = cardinal_sensitivity(&s, &CardinalAttackConfig::default()).unwrap();
        assert_eq!(res.tau, 0.0);
    }

    #[test]
    fn result_is_consistent_and_deterministic() {
        let s = crate::generate::generate_random(8, 4, 21).unwrap();
        let cfg = CardinalAttackConfig {
            iterations: 300,
            seed: 5,
            ..Default::default()
        };
        let a = cardinal_sensitivity(&s, &cfg).unwrap();
        let b = cardinal_sensitivity(&s, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.tau,
            kendall_tau(&a.baseline_ranking, &a.perturbed_ranking).unwrap()
        );
        let Perturbation::Alpha(alpha) = &a.perturbation else {
            panic!("expected alpha")
        };
        let objective = CardinalObjective::new(&s, cfg.epsilon, 0.0, None).unwrap();
        assert_eq!(
            rankdata_desc(&objective.means(alpha)).unwrap(),
            a.perturbed_ranking
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let one = ScoreMatrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        assert!(cardinal_sensitivity(&one, &CardinalAttackConfig::default()).is_err());
        let cfg = CardinalAttackConfig {
            random_label_scores: Some(vec![0.5]),
            ..Default::default()
        };
        assert!(cardinal_sensitivity(&flip_pair(), &cfg).is_err());
    }
}
