//! Compares the physical-qubit cost of 100 logical memory qubits at a
//! 1e-8 logical error rate across four architectures, then shows how the
//! LDPC-cat phase-flip rate moves with kappa_1/kappa_2.
//!
//! Run: cargo run --release --example footprint

use ldpc_cat::estimator::{paper_ldpccat_fit, reference_comparison};
use ldpc_cat::experiments::extrapolate_pzl;

fn main() -> ldpc_cat::Result<()> {
    println!("{:<16} {:>9} {:>6} {:>10}", "architecture", "qubits", "d", "eps_L");
    for r in reference_comparison()? {
        println!(
            "{:<16} {:>9} {:>6} {:>10.2e}",
            format!("{:?}", r.arch),
            r.total_qubits,
            r.distance.map_or("-".into(), |d| d.to_string()),
            r.eps_l
        );
    }

    let fit = paper_ldpccat_fit();
    println!("\nphase-flip rate of the d = 22 family:");
    for kappa in [1e-5, 3e-5, 1e-4, 2e-4, 3e-4] {
        println!("  kappa1/kappa2 = {kappa:.0e}: {:.2e}", extrapolate_pzl(&fit, kappa, 22));
    }
    Ok(())
}
