//! End-to-end audits: diversity plus sensitivity for one benchmark, task
//! subset analysis, and the diversity/sensitivity trade-off fit across many.

pub mod io;
mod subset;
mod tradeoff;

use serde::{Deserialize, Serialize};

use crate::benchmark::{
    ranks_per_task, top_fraction_split, BenchmarkKind, ModelSplit, ScoreMatrix,
};
use crate::error::{Error, Result};
use crate::impute::{knn_impute, DEFAULT_NEIGHBOURS};
use crate::oracle::{brute_force_cardinal, brute_force_ordinal, GridSpec};
use crate::rank::diversity_kendall_w;
use crate::sensitivity::{
    cardinal_sensitivity, epsilon_rule, ordinal_sensitivity, AttackResult, CardinalAttackConfig,
    OrdinalAttackConfig, Perturbation,
};

pub use io::{load_leaderboard, parse_leaderboard, save_leaderboard};
pub use subset::{subset_analysis, SubsetAnalysis, SubsetLevel};
pub use tradeoff::{tradeoff_csv, tradeoff_fit, FitLine, TradeoffFit};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_SPLIT_FRACTION: f64 = 0.2;
pub const DEFAULT_GRID_POINTS: usize = 21;

/// Where the minimal clean fraction comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonSource {
    /// `min(0.01, std_min / std_max)` over the benchmark's tasks.
    Rule,
    Fixed(f64),
}

impl EpsilonSource {
    pub fn resolve(self, scores: &ScoreMatrix) -> Result<f64> {
        match self {
            EpsilonSource::Rule => epsilon_rule(scores),
            EpsilonSource::Fixed(e) => Ok(e),
        }
    }
}

/// How the sensitivity search treats models with missing scores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    /// Refuse to run.
    #[default]
    Reject,
    /// Run on the models whose scores are complete.
    DropIncomplete,
}

/// Which models an ordinal audit evaluates; the rest may be added.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitChoice {
    /// The best-ranked fraction of all models.
    TopFraction(f64),
    /// Models named explicitly.
    Named(Vec<String>),
}

impl SplitChoice {
    pub fn resolve(&self, scores: &ScoreMatrix) -> Result<ModelSplit> {
        match self {
            SplitChoice::TopFraction(f) => top_fraction_split(scores, *f, BenchmarkKind::Ordinal),
            SplitChoice::Named(names) => {
                let kept = names
                    .iter()
                    .map(|name| {
                        scores
                            .model_names()
                            .iter()
                            .position(|n| n == name)
                            .ok_or_else(|| Error::invalid(format!("unknown model {name:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let complement = (0..scores.models()).filter(|i| !kept.contains(i)).collect();
                ModelSplit::new(kept, complement, scores.models())
            }
        }
    }
}

impl Default for SplitChoice {
    fn default() -> Self {
        SplitChoice::TopFraction(DEFAULT_SPLIT_FRACTION)
    }
}

/// The search used to estimate sensitivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityMethod {
    Cardinal {
        epsilon: EpsilonSource,
        attack: CardinalAttackConfig,
    },
    Ordinal {
        split: SplitChoice,
        attack: OrdinalAttackConfig,
    },
    CardinalGrid {
        epsilon: EpsilonSource,
        points_per_task: usize,
    },
    OrdinalExhaustive {
        split: SplitChoice,
    },
}

impl SensitivityMethod {
    pub fn cardinal() -> Self {
        SensitivityMethod::Cardinal {
            epsilon: EpsilonSource::Rule,
            attack: CardinalAttackConfig::default(),
        }
    }

    pub fn ordinal() -> Self {
        SensitivityMethod::Ordinal {
            split: SplitChoice::default(),
            attack: OrdinalAttackConfig::default(),
        }
    }

    pub fn kind(&self) -> BenchmarkKind {
        match self {
            SensitivityMethod::Cardinal { .. } | SensitivityMethod::CardinalGrid { .. } => {
                BenchmarkKind::Cardinal
            }
            SensitivityMethod::Ordinal { .. } | SensitivityMethod::OrdinalExhaustive { .. } => {
                BenchmarkKind::Ordinal
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    pub method: SensitivityMethod,
    /// Neighbours used to impute missing scores before measuring diversity.
    pub impute_k: usize,
    #[serde(default)]
    pub missing: MissingPolicy,
}

impl AuditOptions {
    pub fn new(method: SensitivityMethod) -> Self {
        AuditOptions {
            method,
            impute_k: DEFAULT_NEIGHBOURS,
            missing: MissingPolicy::Reject,
        }
    }
}

/// Configuration actually used, with the clean-fraction floor resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub method: SensitivityMethod,
    pub impute_k: usize,
    pub missing: MissingPolicy,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    /// Names of the evaluated models in an ordinal split.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kept_models: Option<Vec<String>>,
    /// Models left out of the sensitivity run for missing scores.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub dropped_models: Vec<String>,
}

/// One benchmark's position on the diversity/sensitivity plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub benchmark_name: String,
    pub kind: BenchmarkKind,
    pub m: usize,
    pub n: usize,
    pub diversity: f64,
    pub sensitivity_tau: f64,
    pub sensitivity_mrc: f64,
    pub perturbation: Perturbation,
    pub config: ConfigEcho,
    pub tool_version: String,
}

/// Reversed Kendall's W over all models, imputing missing scores first.
pub fn diversity(scores: &ScoreMatrix, impute_k: usize) -> Result<f64> {
    let ranks = if scores.is_complete() {
        ranks_per_task(scores)?
    } else {
        ranks_per_task(&knn_impute(scores, impute_k)?)?
    };
    diversity_kendall_w(&ranks)
}

fn complete_models(
    scores: &ScoreMatrix,
    policy: MissingPolicy,
) -> Result<(ScoreMatrix, Vec<String>)> {
    if scores.is_complete() {
        return Ok((scores.clone(), Vec::new()));
    }
    match policy {
        MissingPolicy::Reject => Err(Error::MustImpute {
            missing: scores.missing_count(),
        }),
        MissingPolicy::DropIncomplete => {
            let (keep, drop): (Vec<usize>, Vec<usize>) = (0..scores.models())
                .partition(|&i| (0..scores.tasks()).all(|j| scores.get(i, j).is_some()));
            if keep.is_empty() {
                return Err(Error::invalid("every model has a missing score"));
            }
            let names = drop
                .iter()
                .map(|&i| scores.model_names()[i].clone())
                .collect();
            Ok((scores.select_models(&keep)?, names))
        }
    }
}

/// Measures diversity over all models and sensitivity with the chosen method.
pub fn audit(name: &str, scores: &ScoreMatrix, options: &AuditOptions) -> Result<AuditReport> {
    let diversity = diversity(scores, options.impute_k)?;
    let (complete, dropped_models) = complete_models(scores, options.missing)?;

    let mut epsilon = None;
    let mut kept_models = None;
    let mut kept_names = |split: &ModelSplit| {
        kept_models = Some(
            split
                .kept
                .iter()
                .map(|&i| complete.model_names()[i].clone())
                .collect(),
        );
    };
    let result: AttackResult = match &options.method {
        SensitivityMethod::Cardinal {
            epsilon: source,
            attack,
        } => {
            let e = source.resolve(&complete)?;
            epsilon = Some(e);
            let cfg = CardinalAttackConfig {
                epsilon: e,
                ..attack.clone()
            };
            cardinal_sensitivity(&complete, &cfg)?
        }
        SensitivityMethod::CardinalGrid {
            epsilon: source,
            points_per_task,
        } => {
            let e = source.resolve(&complete)?;
            epsilon = Some(e);
            brute_force_cardinal(&complete, GridSpec::new(*points_per_task, e)?)?
        }
        SensitivityMethod::Ordinal { split, attack } => {
            let split = split.resolve(&complete)?;
            kept_names(&split);
            ordinal_sensitivity(&complete, &split, attack)?
        }
        SensitivityMethod::OrdinalExhaustive { split } => {
            let split = split.resolve(&complete)?;
            kept_names(&split);
            brute_force_ordinal(&complete, &split)?
        }
    };

    Ok(AuditReport {
        benchmark_name: name.to_string(),
        kind: options.method.kind(),
        m: scores.models(),
        n: scores.tasks(),
        diversity,
        sensitivity_tau: result.tau,
        sensitivity_mrc: result.mrc,
        perturbation: result.perturbation,
        config: ConfigEcho {
            method: options.method.clone(),
            impute_k: options.impute_k,
            missing: options.missing,
            epsilon,
            kept_models,
            dropped_models,
        },
        tool_version: TOOL_VERSION.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::default_names;
    use crate::generate::generate_random;

    #[test]
    fn cardinal_audit_resolves_epsilon() {
        let s = generate_random(10, 4, 3).unwrap();
        let mut options = AuditOptions::new(SensitivityMethod::cardinal());
        if let SensitivityMethod::Cardinal { attack, .. } = &mut options.method {
            attack.iterations = 50;
        }
        let report = audit("rand", &s, &options).unwrap();
        assert_eq!(report.config.epsilon, Some(epsilon_rule(&s).unwrap()));
        assert_eq!((report.m, report.n), (10, 4));
        assert!(matches!(report.perturbation, Perturbation::Alpha(ref a) if a.len() == 4));
        assert_eq!(report.tool_version, TOOL_VERSION);
    }

    #[test]
    fn ordinal_audit_records_split() {
        let s = generate_random(20, 5, 3).unwrap();
        let report = audit("rand", &s, &AuditOptions::new(SensitivityMethod::ordinal())).unwrap();
        assert_eq!(report.config.kept_models.as_ref().unwrap().len(), 4);
        assert!(matches!(report.perturbation, Perturbation::Beta(ref b) if b.len() == 16));
    }

    fn with_gap() -> ScoreMatrix {
        let mut cells: Vec<Option<f64>> = generate_random(12, 3, 9)
            .unwrap()
            .dense_rows()
            .unwrap()
            .into_iter()
            .flatten()
            .map(Some)
            .collect();
        cells[4] = None;
        ScoreMatrix::new(default_names("m", 12), default_names("t", 3), cells).unwrap()
    }

    #[test]
    fn named_split_certifies_arrow_flip() {
        use crate::benchmark::fixtures::arrow_profile;
        let names = ["model_0", "model_1", "model_2"].map(String::from).to_vec();
        let options = AuditOptions::new(SensitivityMethod::OrdinalExhaustive {
            split: SplitChoice::Named(names.clone()),
        });
        let report = audit("arrow", &arrow_profile(4), &options).unwrap();
        assert!((report.sensitivity_tau - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.perturbation, Perturbation::Beta(vec![1]));
        assert_eq!(report.config.kept_models, Some(names));

        let unknown = SplitChoice::Named(vec!["nobody".into()]);
        assert!(unknown.resolve(&arrow_profile(4)).is_err());
    }

    #[test]
    fn missing_scores_block_sensitivity() {
        let s = with_gap();
        assert!(diversity(&s, 5).is_ok());
        let err = audit("gap", &s, &AuditOptions::new(SensitivityMethod::ordinal())).unwrap_err();
        assert!(matches!(err, Error::MustImpute { missing: 1 }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn incomplete_models_can_be_dropped() {
        let mut options = AuditOptions::new(SensitivityMethod::OrdinalExhaustive {
            split: SplitChoice::TopFraction(0.2),
        });
        options.missing = MissingPolicy::DropIncomplete;
        let report = audit("gap", &with_gap(), &options).unwrap();
        assert_eq!(report.config.dropped_models, vec!["m_1".to_string()]);
        assert_eq!(report.m, 12);
    }
}
