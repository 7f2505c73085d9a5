//! Synthetic reference benchmarks at the two ends of the diversity scale.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::benchmark::{default_names, ScoreMatrix};
use crate::error::{Error, Result};

fn check_size(models: usize, tasks: usize) -> Result<()> {
    if models == 0 || tasks == 0 {
        return Err(Error::invalid(
            "generated benchmarks need at least one model and task",
        ));
    }
    Ok(())
}

/// One uniform score column repeated across every task.
pub fn generate_constant(models: usize, tasks: usize, seed: u64) -> Result<ScoreMatrix> {
    check_size(models, tasks)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let column: Vec<f64> = (0..models).map(|_| rng.random::<f64>()).collect();
    let cells = column
        .iter()
        .flat_map(|&v| std::iter::repeat_n(Some(v), tasks))
        .collect();
    ScoreMatrix::new(
        default_names("model", models),
        default_names("task", tasks),
        cells,
    )
}

/// Independent uniform scores for every model and task.
pub fn generate_random(models: usize, tasks: usize, seed: u64) -> Result<ScoreMatrix> {
    check_size(models, tasks)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = (0..models * tasks)
        .map(|_| Some(rng.random::<f64>()))
        .collect();
    ScoreMatrix::new(
        default_names("model", models),
        default_names("task", tasks),
        cells,
    )
}
