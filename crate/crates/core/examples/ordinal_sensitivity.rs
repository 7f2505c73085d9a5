//! Irrelevant-model attack on a winning-rate benchmark: the top fifth of
//! models is evaluated, and any of the others may join the opponent pool.
//!
//!     cargo run --release --example ordinal_sensitivity

use benchaudit::{
    generate_random, ordinal_sensitivity, top_fraction_split, BenchmarkKind, OrdinalAttackConfig,
    Perturbation,
};

fn main() -> benchaudit::Result<()> {
    let scores = generate_random(40, 10, 5)?;
    let split = top_fraction_split(&scores, 0.2, BenchmarkKind::Ordinal)?;
    let result = ordinal_sensitivity(&scores, &split, &OrdinalAttackConfig::default())?;

    println!("evaluated models {:?}", split.kept);
    if let Perturbation::Beta(beta) = &result.perturbation {
        let added: Vec<usize> = split
            .complement
            .iter()
            .zip(beta)
            .filter(|(_, &b)| b == 1)
            .map(|(&c, _)| c)
            .collect();
        println!("added opponents  {added:?}");
    }
    println!("baseline  {:?}", result.baseline_ranking);
    println!("perturbed {:?}", result.perturbed_ranking);
    println!("tau {:.4}, mrc {:.4}", result.tau, result.mrc);
    Ok(())
}
