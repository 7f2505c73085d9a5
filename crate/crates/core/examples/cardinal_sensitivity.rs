//! Label-noise attack on a score-averaging benchmark.
//!
//!     cargo run --release --example cardinal_sensitivity

use benchaudit::{
    cardinal_aggregate, cardinal_sensitivity, epsilon_rule, generate_random, CardinalAttackConfig,
    Perturbation,
};

fn main() -> benchaudit::Result<()> {
    let scores = generate_random(20, 8, 7)?;
    let epsilon = epsilon_rule(&scores)?;
    let cfg = CardinalAttackConfig {
        epsilon,
        ..Default::default()
    };
    let result = cardinal_sensitivity(&scores, &cfg)?;

    println!("epsilon {epsilon:.4}");
    println!("baseline  {:?}", cardinal_aggregate(&scores)?);
    println!("perturbed {:?}", result.perturbed_ranking);
    if let Perturbation::Alpha(alpha) = &result.perturbation {
        let shown: Vec<String> = alpha.iter().map(|a| format!("{a:.3}")).collect();
        println!("clean fraction per task [{}]", shown.join(", "));
    }
    println!("tau {:.4}, mrc {:.4}", result.tau, result.mrc);
    Ok(())
}
