//! Filling gaps in a leaderboard and choosing the models to evaluate.
//!
//!     cargo run --example impute_and_split

use benchaudit::workbench::parse_leaderboard;
use benchaudit::{knn_impute, top_fraction_split, BenchmarkKind};

const BOARD: &str = "\
model,reasoning,coding,math,reading
alpha,0.81,0.62,0.70,0.90
beta,0.78,,0.66,0.88
gamma,0.52,0.49,0.41,
delta,0.60,0.55,0.47,0.71
eps,0.33,0.31,,0.52
";

fn main() -> benchaudit::Result<()> {
    let scores = parse_leaderboard(BOARD)?;
    println!("{} missing cells", scores.missing_count());

    let filled = knn_impute(&scores, 2)?;
    for (i, name) in filled.model_names().iter().enumerate() {
        let row: Vec<String> = (0..filled.tasks())
            .map(|j| format!("{:.3}", filled.get(i, j).unwrap()))
            .collect();
        println!("{name:>6} {}", row.join(" "));
    }

    let split = top_fraction_split(&filled, 0.4, BenchmarkKind::Cardinal)?;
    let names = |ix: &[usize]| -> Vec<String> {
        ix.iter()
            .map(|&i| filled.model_names()[i].clone())
            .collect()
    };
    println!(
        "kept {:?}, candidates {:?}",
        names(&split.kept),
        names(&split.complement)
    );
    Ok(())
}
