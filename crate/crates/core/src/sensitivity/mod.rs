//! Adversarial sensitivity of aggregated rankings.
//!
//! Two irrelevant changes are searched for with gradient descent on a hinge
//! relaxation of Kendall's tau:
//!
//! * cardinal benchmarks: per-task label noise, parameterised by the clean
//!   fraction `alpha_j` kept in task `j`;
//! * ordinal benchmarks: adding a subset `beta` of lower-ranked models to the
//!   comparison pool, optimised with a straight-through Bernoulli estimator.
//!
//! Both attacks report a lower bound on the true worst case.

mod cardinal;
mod gradcheck;
mod loss;
mod ordinal;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::benchmark::ScoreMatrix;
use crate::error::{Error, Result};
use crate::rank::{kendall_tau, mrc, Ranking};

pub use cardinal::{cardinal_sensitivity, perturbed_means, CardinalObjective};
pub use gradcheck::{finite_difference_check, RelaxedObjective};
pub use loss::{relaxed_cardinal_loss, relaxed_ordinal_loss, RelaxedLoss};
pub use ordinal::{ordinal_sensitivity, perturbed_winning_means, OrdinalObjective};

/// Label-noise attack settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardinalAttackConfig {
    /// Smallest clean fraction any task may keep.
    pub epsilon: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub step_size: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Score under fully random labels, per task. Zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_label_scores: Option<Vec<f64>>,
}

impl Default for CardinalAttackConfig {
    fn default() -> Self {
        CardinalAttackConfig {
            epsilon: 0.01,
            lambda: 0.0,
            iterations: 1000,
            step_size: 0.1,
            restarts: 10,
            seed: 0,
            random_label_scores: None,
        }
    }
}

impl CardinalAttackConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid(format!(
                "epsilon {} outside (0, 1)",
                self.epsilon
            )));
        }
        check_common(self.lambda, self.iterations, self.step_size, self.restarts)
    }
}

/// Irrelevant-model attack settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinalAttackConfig {
    pub lambda: f64,
    pub iterations: usize,
    pub step_size: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OrdinalAttackConfig {
    fn default() -> Self {
        OrdinalAttackConfig {
            lambda: 0.01,
            iterations: 100,
            step_size: 0.5,
            restarts: 10,
            seed: 0,
        }
    }
}

impl OrdinalAttackConfig {
    pub fn validate(&self) -> Result<()> {
        check_common(self.lambda, self.iterations, self.step_size, self.restarts)
    }
}

fn check_common(lambda: f64, iterations: usize, step: f64, restarts: usize) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "lambda {lambda} must be finite and >= 0"
        )));
    }
    if iterations == 0 || restarts == 0 {
        return Err(Error::invalid("iterations and restarts must be at least 1"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("step size {step} must be positive")));
    }
    Ok(())
}

/// The change an attack applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Perturbation {
    /// Clean fraction per task, in `[epsilon, 1]` with maximum exactly 1.
    Alpha(Vec<f64>),
    /// Inclusion flag per complement model.
    Beta(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackResult {
    pub tau: f64,
    pub mrc: f64,
    pub perturbation: Perturbation,
    pub perturbed_ranking: Ranking,
    pub baseline_ranking: Ranking,
}

impl AttackResult {
    pub(crate) fn new(
        baseline: Ranking,
        perturbed: Ranking,
        perturbation: Perturbation,
    ) -> Result<Self> {
        let (tau, mrc) = if baseline.len() < 2 {
            (0.0, 0.0)
        } else {
            (
                kendall_tau(&baseline, &perturbed)?,
                mrc(&baseline, &perturbed)?,
            )
        };
        Ok(AttackResult {
            tau,
            mrc,
            perturbation,
            perturbed_ranking: perturbed,
            baseline_ranking: baseline,
        })
    }

    /// Keeps the result with the larger tau; earlier wins ties.
    pub(crate) fn best(results: impl IntoIterator<Item = AttackResult>) -> Option<AttackResult> {
        results
            .into_iter()
            .reduce(|best, r| if r.tau > best.tau { r } else { best })
    }
}

/// `min(0.01, std_min / std_max)` over per-task population standard
/// deviations. Constant tasks carry no ranking signal and are skipped.
pub fn epsilon_rule(scores: &ScoreMatrix) -> Result<f64> {
    let stds: Vec<f64> = (0..scores.tasks())
        .filter_map(|j| {
            let v: Vec<f64> = (0..scores.models())
                .filter_map(|i| scores.get(i, j))
                .collect();
            if v.is_empty() {
                return None;
            }
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64;
            // rounding in the mean leaves constant tasks a tiny spread
            let std = var.sqrt();
            (std > 1e-12 * mean.abs().max(1.0)).then_some(std)
        })
        .collect();
    if stds.is_empty() {
        return Err(Error::degenerate("every task has constant scores"));
    }
    let lo = stds.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = stds.iter().copied().fold(0.0, f64::max);
    Ok(0.01f64.min(lo / hi))
}

/// Random stream for one restart, independent across restarts.
pub(crate) fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

#[inline]
pub(crate) fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
