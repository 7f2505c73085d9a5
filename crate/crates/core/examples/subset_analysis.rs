//! How closely small task subsets reproduce the full ranking.
//!
//!     cargo run --release --example subset_analysis

use benchaudit::workbench::subset_analysis;
use benchaudit::{generate_constant, generate_random, BenchmarkKind};

fn main() -> benchaudit::Result<()> {
    let boards = [
        ("constant", generate_constant(30, 12, 0)?),
        ("random", generate_random(30, 12, 0)?),
    ];
    for (name, scores) in &boards {
        let analysis = subset_analysis(scores, BenchmarkKind::Cardinal, 6, 500, 1)?;
        println!("{name}");
        for level in analysis.levels {
            println!(
                "  k={} min tau {:.3} min mrc {:.3}{}",
                level.size,
                level.min_tau,
                level.min_mrc,
                if level.exhaustive {
                    " (all subsets)"
                } else {
                    ""
                }
            );
        }
    }
    Ok(())
}
