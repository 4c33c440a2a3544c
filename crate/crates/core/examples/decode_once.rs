//! Compiles the syndrome-extraction circuit of a distance-3 repetition code
//! into a decoding problem, samples one fault configuration and decodes it
//! with BP+OSD.
//!
//! Run: cargo run --release --example decode_once

use ldpc_cat::decoder::{BPConfig, Decoder, OSDConfig};
use ldpc_cat::experiments::shot_rng;
use ldpc_cat::lattice::{build_code, vertical_domino, Boundary};
use ldpc_cat::noise::{build_syndrome_circuit, compile_decoding_problem, NoiseModel};

fn main() -> ldpc_cat::Result<()> {
    let code = build_code(3, 1, &[vertical_domino()], Boundary::Planar)?;
    let circuit = build_syndrome_circuit(&code, 3, &NoiseModel::generic(0.03))?;
    let problem = compile_decoding_problem(&circuit, &code)?;
    println!(
        "{} detectors, {} fault mechanisms, {} logical",
        problem.num_detectors,
        problem.num_mechanisms(),
        problem.num_logicals
    );

    let mut decoder = Decoder::new(&problem, BPConfig::default(), OSDConfig::default());
    for shot in 0..8 {
        let faults = problem.sample(&mut shot_rng(7, shot));
        let syndrome = problem.syndrome_of(&faults);
        let out = decoder.decode(&syndrome);
        let actual = problem.logical_of(&faults);
        println!(
            "shot {shot}: {} faults, {} detectors fired, BP converged {}, OSD {}, logical {}",
            faults.weight(),
            syndrome.weight(),
            out.converged,
            out.used_osd,
            if out.predicted_logical == actual { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
