//! Adding a model that is never evaluated reorders the others.
//!
//! Nine tasks over four models; L4 sits in the opponent pool only.
//!
//!     cargo run --example arrow_counterexample

use benchaudit::oracle::brute_force_ordinal;
use benchaudit::sensitivity::perturbed_winning_means;
use benchaudit::{
    ordinal_aggregate, rankdata_desc, ranks_per_task, winning_means, winning_rate_matrix,
    ModelSplit, ScoreMatrix,
};

fn main() -> benchaudit::Result<()> {
    let orders: [([usize; 4], usize); 3] =
        [([0, 1, 3, 2], 4), ([1, 3, 2, 0], 3), ([2, 0, 1, 3], 2)];
    let mut rows = vec![Vec::new(); 4];
    for (order, tasks) in orders {
        for _ in 0..tasks {
            for (pos, &model) in order.iter().enumerate() {
                rows[model].push(4.0 - pos as f64);
            }
        }
    }
    let scores = ScoreMatrix::from_rows(&rows)?;
    let rates = winning_rate_matrix(&ranks_per_task(&scores)?);
    let split = ModelSplit::new(vec![0, 1, 2], vec![3], 4)?;

    let kept = rates.restrict(&split.kept);
    println!("without L4: means {:?}", winning_means(&kept));
    println!("            ranking {:?}", ordinal_aggregate(&kept)?);

    let with_l4 = perturbed_winning_means(&rates, &split, &[1.0]);
    println!("with L4:    means {with_l4:?}");
    println!("            ranking {:?}", rankdata_desc(&with_l4)?);

    let certified = brute_force_ordinal(&scores, &split)?;
    println!("exhaustive sensitivity tau = {:.4}", certified.tau);
    Ok(())
}
