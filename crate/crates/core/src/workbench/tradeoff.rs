use serde::{Deserialize, Serialize};

use super::AuditReport;
use crate::error::{Error, Result};
use crate::rank::{pearson, regression_through_origin};

/// Zero-intercept fit of sensitivity against diversity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitLine {
    pub slope: f64,
    /// Absent when either coordinate has zero variance.
    pub pearson: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffFit {
    pub points: usize,
    pub tau: FitLine,
    pub mrc: FitLine,
}

fn fit(x: &[f64], y: &[f64]) -> Result<FitLine> {
    let slope = regression_through_origin(x, y)?;
    let pearson = match pearson(x, y) {
        Ok(r) => Some(r),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(FitLine { slope, pearson })
}

/// Fits sensitivity (tau and MRC) against diversity across audited benchmarks.
pub fn tradeoff_fit(reports: &[AuditReport]) -> Result<TradeoffFit> {
    if reports.len() < 2 {
        return Err(Error::invalid("trade-off fit needs at least two reports"));
    }
    let x: Vec<f64> = reports.iter().map(|r| r.diversity).collect();
    let tau: Vec<f64> = reports.iter().map(|r| r.sensitivity_tau).collect();
    let mrc: Vec<f64> = reports.iter().map(|r| r.sensitivity_mrc).collect();
    Ok(TradeoffFit {
        points: reports.len(),
        tau: fit(&x, &tau)?,
        mrc: fit(&x, &mrc)?,
    })
}

/// Plot-ready points, one row per benchmark.
pub fn tradeoff_csv(reports: &[AuditReport]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["benchmark", "kind", "diversity", "tau", "mrc"])
        .expect("in-memory write");
    for r in reports {
        writer
            .write_record([
                r.benchmark_name.clone(),
                r.kind.to_string(),
                r.diversity.to_string(),
                r.sensitivity_tau.to_string(),
                r.sensitivity_mrc.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::BenchmarkKind;
    use crate::sensitivity::Perturbation;
    use crate::workbench::{AuditOptions, ConfigEcho, SensitivityMethod, TOOL_VERSION};

    fn point(name: &str, diversity: f64, tau: f64, mrc: f64) -> AuditReport {
        let options = AuditOptions::new(SensitivityMethod::cardinal());
        AuditReport {
            benchmark_name: name.into(),
            kind: BenchmarkKind::Cardinal,
            m: 3,
            n: 2,
            diversity,
            sensitivity_tau: tau,
            sensitivity_mrc: mrc,
            perturbation: Perturbation::Alpha(vec![1.0, 0.5]),
            config: ConfigEcho {
                method: options.method,
                impute_k: options.impute_k,
                missing: options.missing,
                epsilon: Some(0.01),
                kept_models: None,
                dropped_models: vec![],
            },
            tool_version: TOOL_VERSION.into(),
        }
    }

    #[test]
    fn two_point_identity_line() {
        let f = tradeoff_fit(&[point("a", 0.0, 0.0, 0.0), point("b", 1.0, 1.0, 1.0)]).unwrap();
        assert!((f.tau.slope - 1.0).abs() < 1e-12);
        assert!((f.tau.pearson.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_sensitivity_has_zero_slope() {
        let f = tradeoff_fit(&[point("a", 0.2, 0.0, 0.0), point("b", 0.7, 0.0, 0.0)]).unwrap();
        assert_eq!(f.tau.slope, 0.0);
        assert_eq!(f.mrc.pearson, None);
    }

    #[test]
    fn three_point_slope() {
        let reports = [
            point("a", 0.2, 0.1, 0.3),
            point("b", 0.5, 0.3, 0.3),
            point("c", 0.9, 0.5, 0.4),
        ];
        let f = tradeoff_fit(&reports).unwrap();
        let expected = (0.2 * 0.1 + 0.5 * 0.3 + 0.9 * 0.5) / (0.04 + 0.25 + 0.81);
        assert!((f.tau.slope - expected).abs() < 1e-12);
        assert!((f.tau.slope - 0.62 / 1.10).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(tradeoff_fit(&[point("a", 0.2, 0.1, 0.1)]).is_err());
        let zero = [point("a", 0.0, 0.1, 0.1), point("b", 0.0, 0.2, 0.1)];
        assert!(matches!(tradeoff_fit(&zero), Err(Error::Degenerate(_))));
    }

    #[test]
    fn csv_has_one_row_per_report() {
        let text = tradeoff_csv(&[point("a", 0.5, 0.25, 0.75), point("b", 1.0, 0.0, 0.0)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "benchmark,kind,diversity,tau,mrc");
        assert_eq!(lines[1], "a,cardinal,0.5,0.25,0.75");
        assert_eq!(lines.len(), 3);
    }
}
