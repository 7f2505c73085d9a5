//! Diversity against sensitivity across benchmarks that mix the constant
//! and random generators in different proportions.
//!
//!     cargo run --release --example tradeoff

use benchaudit::workbench::{audit, tradeoff_csv, tradeoff_fit, AuditOptions, SensitivityMethod};
use benchaudit::{generate_constant, generate_random, ScoreMatrix};

fn blend(tasks: usize, random_tasks: usize, seed: u64) -> benchaudit::Result<ScoreMatrix> {
    let a = generate_constant(15, tasks, seed)?.dense_rows()?;
    let b = generate_random(15, tasks, seed)?.dense_rows()?;
    let rows: Vec<Vec<f64>> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| {
            (0..tasks)
                .map(|j| if j < random_tasks { y[j] } else { x[j] })
                .collect()
        })
        .collect();
    ScoreMatrix::from_rows(&rows)
}

fn main() -> benchaudit::Result<()> {
    let mut options = AuditOptions::new(SensitivityMethod::cardinal());
    if let SensitivityMethod::Cardinal { attack, .. } = &mut options.method {
        attack.iterations = 300;
    }
    let mut reports = Vec::new();
    for random_tasks in [0, 2, 4, 6, 8] {
        let scores = blend(8, random_tasks, 3)?;
        reports.push(audit(&format!("mix{random_tasks}"), &scores, &options)?);
    }
    print!("{}", tradeoff_csv(&reports));
    let fit = tradeoff_fit(&reports)?;
    println!(
        "tau ~ {:.3} x diversity, pearson {:?}",
        fit.tau.slope, fit.tau.pearson
    );
    println!(
        "mrc ~ {:.3} x diversity, pearson {:?}",
        fit.mrc.slope, fit.mrc.pearson
    );
    Ok(())
}
