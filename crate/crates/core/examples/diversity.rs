//! Diversity of the two synthetic reference benchmarks.
//!
//!     cargo run --release --example diversity

use benchaudit::workbench::diversity;
use benchaudit::{generate_constant, generate_random};

fn main() -> benchaudit::Result<()> {
    for seed in 0..3 {
        let constant = diversity(&generate_constant(100, 100, seed)?, 5)?;
        let random = diversity(&generate_random(100, 100, seed)?, 5)?;
        println!("seed {seed}: constant {constant:.4}, random {random:.4}");
    }
    Ok(())
}
