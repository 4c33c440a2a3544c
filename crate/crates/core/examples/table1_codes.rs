//! Builds the five optimized code families at their minimal width and
//! certifies the distance of the smaller ones by exhaustive enumeration.
//!
//! Run: cargo run --release --example table1_codes

use std::time::Instant;

use ldpc_cat::distance::distance_bruteforce;
use ldpc_cat::lattice::TABLE1;

fn main() -> ldpc_cat::Result<()> {
    for fam in TABLE1.iter() {
        let code = fam.code(0);
        print!(
            "row {}: H = {}, L* = {}, [{}, {}, {}]",
            fam.row,
            fam.height,
            fam.l_star,
            code.n(),
            code.k(),
            fam.distance
        );
        if code.k() <= 22 {
            let t = Instant::now();
            let r = distance_bruteforce(&code, 22)?;
            print!("  enumerated d = {} in {:.2?}", r.d, t.elapsed());
        }
        println!();
        for (i, s) in fam.row_shapes().iter().enumerate() {
            println!("    anchor row {}: {s}", i + code.first_anchor_row());
        }
    }

    let fam = &TABLE1[4];
    let planar = fam.planar_code(33);
    println!(
        "planar row 5 at ell = 33: n = {}, k = {}, checks = {}, n + checks = {}",
        planar.n(),
        planar.k(),
        planar.num_checks(),
        planar.n() + planar.num_checks()
    );
    Ok(())
}
