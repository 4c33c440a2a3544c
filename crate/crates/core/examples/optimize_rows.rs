//! Chooses one weight-4 pointed shape per anchor row to maximize the
//! distance on a 4 x 5 lattice, then checks the answer against an
//! exhaustive search over all assignments.
//!
//! Run: cargo run --release --example optimize_rows

use ldpc_cat::distance::EmbeddedSolver;
use ldpc_cat::search::{exhaustive_row_optimum, optimize_row_shapes, OptimizeConfig};

fn main() -> ldpc_cat::Result<()> {
    let (h, l) = (4, 5);
    let cfg = OptimizeConfig::weight4();
    let res = optimize_row_shapes(h, l, &cfg, &EmbeddedSolver)?;
    println!(
        "SAT-guided: d = {} (optimal: {}), {} solver calls, {} seeds",
        res.d, res.optimal, res.sat_calls, res.seeds_used
    );
    for s in &res.row_shapes {
        println!("  {s}");
    }

    let (_, best) = exhaustive_row_optimum(h, l, cfg.seed_rows, &cfg.candidates);
    println!("exhaustive over {} candidates per row: d = {best}", cfg.candidates.len());
    Ok(())
}
