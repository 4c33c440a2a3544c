//! Computes the distance of the H = 3, L = 10 tee code both by enumeration
//! and by a sequence of SAT weight-bound queries, and writes the final
//! unsatisfiable query as a DIMACS file.
//!
//! Run: cargo run --release --example sat_distance

use ldpc_cat::distance::{distance_bruteforce, distance_sat, EmbeddedSolver, SatOptions};
use ldpc_cat::lattice::{build_code, tee, Boundary};

fn main() -> ldpc_cat::Result<()> {
    let code = build_code(3, 10, &[tee()], Boundary::Periodic)?;
    let brute = distance_bruteforce(&code, 20)?;

    let dimacs = std::env::temp_dir().join("tee_3x10_below_d.cnf");
    let opts = SatOptions { dimacs_out: Some(dimacs.clone()), ..Default::default() };
    let sat = distance_sat(&code, &EmbeddedSolver, None, &opts)?;

    println!("[{}, {}] code", code.n(), code.k());
    println!("enumeration: d = {}", brute.d);
    println!("SAT:         d = {} (no word of weight <= {})", sat.d, sat.certified_lower_bound);
    println!("minimum-weight word:\n{}", code.render(&sat.witness_vector(code.n())));
    println!("DIMACS query written to {}", dimacs.display());
    Ok(())
}
