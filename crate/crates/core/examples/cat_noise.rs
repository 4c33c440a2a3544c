//! Prints the per-operation phase-flip probabilities of the three noise
//! models, including the cat-qubit reference point.
//!
//! Run: cargo run --release --example cat_noise

use ldpc_cat::noise::{error_probabilities, NoiseModel};

fn main() -> ldpc_cat::Result<()> {
    let cat = error_probabilities(&NoiseModel::cat(11.0, 1e-4))?;
    println!("cat qubits, nbar = 11, kappa1/kappa2 = 1e-4:");
    println!("  preparation / measurement   {:.2e}", cat.prep);
    println!("  idle during a CNOT          {:.2e}", cat.idle_cx);
    println!("  CNOT (control, target, both) {:.2e} {:.2e} {:.2e}", cat.cx_control, cat.cx_target, cat.cx_both);
    println!("  CNOT total                  {:.2e}", cat.cnot_total());

    for nbar in [4.0, 8.0, 16.0, 32.0] {
        let p = error_probabilities(&NoiseModel::cat(nbar, 1e-4))?;
        println!("  nbar = {nbar:>4}: CNOT total {:.2e}", p.cnot_total());
    }

    let generic = error_probabilities(&NoiseModel::generic(1e-3))?;
    println!("generic circuit model, p = 1e-3: {:?}", generic.all());
    let phen = error_probabilities(&NoiseModel::phenomenological(1e-2, Some(2e-2)))?;
    println!("phenomenological, p = 1e-2, q = 2e-2: data {:.0e}, meas {:.0e}", phen.idle_prep, phen.meas);
    Ok(())
}
