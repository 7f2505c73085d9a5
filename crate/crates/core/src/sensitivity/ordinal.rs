use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::gradcheck::RelaxedObjective;
use super::loss::{hinge_pattern, relaxed_ordinal_loss};
use super::{logistic, restart_rng, AttackResult, OrdinalAttackConfig, Perturbation};
use crate::benchmark::{
    ordinal_aggregate, ranks_per_task, winning_rate_matrix, ModelSplit, ScoreMatrix,
    WinningRateMatrix,
};
use crate::error::{Error, Result};
use crate::rank::{rankdata_desc, Ranking};

/// Winning means of the kept models once the `beta`-weighted complement
/// models join the opponent pool:
/// `w̄'_i = (Σ_{j∈kept} w_ij + Σ_c β_c w_ic) / (m + ‖β‖₁)`.
///
/// # Panics
///
/// If `beta` does not have one entry per complement model.
pub fn perturbed_winning_means(
    rates: &WinningRateMatrix,
    split: &ModelSplit,
    beta: &[f64],
) -> Vec<f64> {
    assert_eq!(
        beta.len(),
        split.complement.len(),
        "beta must cover the complement"
    );
    let denom = split.kept.len() as f64 + beta.iter().sum::<f64>();
    split
        .kept
        .iter()
        .map(|&i| {
            let own: f64 = split.kept.iter().map(|&j| rates.get(i, j)).sum();
            let added: f64 = split
                .complement
                .iter()
                .zip(beta)
                .map(|(&c, b)| b * rates.get(i, c))
                .sum();
            (own + added) / denom
        })
        .collect()
}

/// Relaxed irrelevant-model loss as a function of logits `θ` over the
/// complement models.
///
/// [`RelaxedObjective::evaluate`] uses the deterministic relaxation
/// `β = σ(θ)`; the attack itself feeds sampled binary `β` forward through
/// [`OrdinalObjective::straight_through`].
#[derive(Debug, Clone)]
pub struct OrdinalObjective {
    // kept-vs-kept row sums
    own: Vec<f64>,
    // kept x complement winning rates, row-major
    cross: Vec<f64>,
    kept: usize,
    complement: usize,
    baseline: Ranking,
    lambda: f64,
}

impl OrdinalObjective {
    pub fn new(scores: &ScoreMatrix, split: &ModelSplit, lambda: f64) -> Result<Self> {
        if split.kept.len() < 2 {
            return Err(Error::invalid(
                "ordinal sensitivity needs at least two kept models",
            ));
        }
        ModelSplit::new(
            split.kept.clone(),
            split.complement.clone(),
            scores.models(),
        )?;
        let rates = winning_rate_matrix(&ranks_per_task(scores)?);
        Ok(Self::from_rates(&rates, split, lambda))
    }

    pub(crate) fn from_rates(rates: &WinningRateMatrix, split: &ModelSplit, lambda: f64) -> Self {
        let baseline = ordinal_aggregate(&rates.restrict(&split.kept))
            .expect("kept list has at least two models");
        let own = split
            .kept
            .iter()
            .map(|&i| split.kept.iter().map(|&j| rates.get(i, j)).sum())
            .collect();
        let cross = split
            .kept
            .iter()
            .flat_map(|&i| split.complement.iter().map(move |&c| rates.get(i, c)))
            .collect();
        OrdinalObjective {
            own,
            cross,
            kept: split.kept.len(),
            complement: split.complement.len(),
            baseline,
            lambda,
        }
    }

    pub fn baseline(&self) -> &Ranking {
        &self.baseline
    }

    pub fn means(&self, beta: &[f64]) -> Vec<f64> {
        let denom = self.kept as f64 + beta.iter().sum::<f64>();
        self.own
            .iter()
            .zip(self.cross.chunks(self.complement.max(1)))
            .map(|(own, row)| {
                let added: f64 = row.iter().zip(beta).map(|(w, b)| w * b).sum();
                (own + added) / denom
            })
            .collect()
    }

    /// Loss at the forward selection `beta` and its gradient with respect to
    /// `beta`, so the caller can route it to whatever parameterisation produced it.
    fn loss_and_beta_gradient(&self, beta: &[f64]) -> (f64, Vec<f64>) {
        let means = self.means(beta);
        let loss = relaxed_ordinal_loss(&means, &self.baseline, self.lambda);
        let denom = self.kept as f64 + beta.iter().sum::<f64>();
        let mut grad = vec![0.0; self.complement];
        for (i, g) in loss.gradient.iter().enumerate() {
            if *g == 0.0 {
                continue;
            }
            let row = &self.cross[i * self.complement..(i + 1) * self.complement];
            for (c, w) in row.iter().enumerate() {
                grad[c] += g * (w - means[i]) / denom;
            }
        }
        (loss.value, grad)
    }

    /// Straight-through estimate: loss evaluated at the sampled binary
    /// `beta`, gradient passed to `θ` as if `∂β/∂q = 1`.
    pub fn straight_through(&self, theta: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
        let (value, d_beta) = self.loss_and_beta_gradient(beta);
        let grad = theta
            .iter()
            .zip(d_beta)
            .map(|(&t, d)| {
                let q = logistic(t);
                d * q * (1.0 - q)
            })
            .collect();
        (value, grad)
    }
}

impl RelaxedObjective for OrdinalObjective {
    fn dim(&self) -> usize {
        self.complement
    }

    fn evaluate(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let q: Vec<f64> = theta.iter().map(|&t| logistic(t)).collect();
        self.straight_through(theta, &q)
    }

    fn hinge_pattern(&self, theta: &[f64]) -> Vec<bool> {
        let q: Vec<f64> = theta.iter().map(|&t| logistic(t)).collect();
        hinge_pattern(&self.means(&q), &self.baseline, self.lambda)
    }
}

fn run_restart(
    objective: &OrdinalObjective,
    cfg: &OrdinalAttackConfig,
    restart: usize,
) -> Result<AttackResult> {
    let mut rng = restart_rng(cfg.seed, restart);
    let mut theta: Vec<f64> = (0..objective.dim())
        .map(|_| rng.sample(StandardNormal))
        .collect();
    let mut beta = vec![0.0; theta.len()];
    for _ in 0..cfg.iterations {
        for (b, &t) in beta.iter_mut().zip(&theta) {
            *b = if rng.random::<f64>() < logistic(t) {
                1.0
            } else {
                0.0
            };
        }
        let (_, grad) = objective.straight_through(&theta, &beta);
        for (t, g) in theta.iter_mut().zip(&grad) {
            *t -= cfg.step_size * g;
        }
    }
    let selected: Vec<u8> = theta.iter().map(|&t| u8::from(logistic(t) > 0.5)).collect();
    let beta: Vec<f64> = selected.iter().map(|&b| b as f64).collect();
    let perturbed = rankdata_desc(&objective.means(&beta))?;
    AttackResult::new(
        objective.baseline.clone(),
        perturbed,
        Perturbation::Beta(selected),
    )
}

/// Searches for a subset of complement models whose addition most reorders
/// the kept models under winning-rate aggregation.
///
/// The baseline ranks the kept models among themselves. Each restart draws
/// one Bernoulli selection per iteration; the final selection thresholds the
/// learned probabilities at 0.5. The returned tau is a lower bound on the
/// true maximum.
pub fn ordinal_sensitivity(
    scores: &ScoreMatrix,
    split: &ModelSplit,
    cfg: &OrdinalAttackConfig,
) -> Result<AttackResult> {
    cfg.validate()?;
    let objective = OrdinalObjective::new(scores, split, cfg.lambda)?;
    if split.complement.is_empty() {
        let base = objective.baseline.clone();
        return AttackResult::new(base.clone(), base, Perturbation::Beta(Vec::new()));
    }
    let results = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(&objective, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(AttackResult::best(results).expect("at least one restart"))
}
