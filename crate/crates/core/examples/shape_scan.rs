//! Scans every shape of the 3x3 window on a small periodic lattice and
//! prints the best code found for each distance.
//!
//! Run: cargo run --release --example shape_scan -- 4 8

use ldpc_cat::lattice::Boundary;
use ldpc_cat::search::{characteristic_line, dedup_reflections, pareto_by_distance, scan_single_shapes, DistanceOptions};

fn main() -> ldpc_cat::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (h, l) = match args.as_slice() {
        [h, l, ..] => (*h, *l),
        _ => (4, 8),
    };

    let records = scan_single_shapes(h, l, Boundary::Periodic, &DistanceOptions::default())?;
    let distinct = dedup_reflections(&records);
    let degenerate = records.iter().filter(|r| r.is_degenerate()).count();
    println!("{h}x{l} lattice: {} shapes fit, {} up to reflection, {degenerate} with k = 0", records.len(), distinct.len());

    println!("{:>3} {:>4} {:>4} {:>7} {:>5}  shape", "d", "n", "k", "kd/n", "CA");
    for r in pareto_by_distance(&records) {
        println!(
            "{:>3} {:>4} {:>4} {:>7.3} {:>5}  {}",
            r.d.unwrap(),
            r.n,
            r.k,
            r.overhead_factor().unwrap(),
            r.is_ca,
            r.row_shapes[0]
        );
    }

    // Automaton codes cannot beat (m - 1) d / H.
    for d in [3, 5, 7] {
        println!("characteristic line m = 3, d = {d}: {:.3}", characteristic_line(3, h, d));
    }
    Ok(())
}
