//! Compares both attacks with exhaustive search on small instances.
//!
//!     cargo run --release --example oracle_certify

use benchaudit::oracle::{brute_force_cardinal, brute_force_ordinal, GridSpec};
use benchaudit::{
    cardinal_sensitivity, generate_random, ordinal_sensitivity, top_fraction_split, BenchmarkKind,
    CardinalAttackConfig, OrdinalAttackConfig,
};

fn main() -> benchaudit::Result<()> {
    let grid = GridSpec::new(21, 0.05)?;
    let cfg = CardinalAttackConfig {
        epsilon: 0.05,
        ..Default::default()
    };
    println!("cardinal, 6 models x 3 tasks");
    for seed in 0..5 {
        let s = generate_random(6, 3, seed)?;
        let attack = cardinal_sensitivity(&s, &cfg)?.tau;
        let exact = brute_force_cardinal(&s, grid)?.tau;
        println!("  seed {seed}: attack {attack:.3}, grid {exact:.3}");
    }

    println!("ordinal, 3 kept + 9 candidates, 6 tasks");
    for seed in 0..5 {
        let s = generate_random(12, 6, seed)?;
        let split = top_fraction_split(&s, 0.25, BenchmarkKind::Ordinal)?;
        let attack = ordinal_sensitivity(&s, &split, &OrdinalAttackConfig::default())?.tau;
        let exact = brute_force_ordinal(&s, &split)?.tau;
        println!("  seed {seed}: attack {attack:.3}, exhaustive {exact:.3}");
    }
    Ok(())
}
