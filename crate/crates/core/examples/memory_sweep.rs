//! Sweeps the phenomenological error rate for repetition codes of distance
//! 3, 5 and 7, writes the results as a sweep CSV and fits the
//! `A d (B p)^(C (d+1)/2)` ansatz.
//!
//! Run: cargo run --release --example memory_sweep

use ldpc_cat::experiments::{fit_ansatz, run_memory_experiment, write_sweep_csv, DecoderSettings, FitPoint, StopRule, SweepRow};
use ldpc_cat::lattice::{build_code, vertical_domino, Boundary};
use ldpc_cat::noise::NoiseModel;

fn main() -> ldpc_cat::Result<()> {
    let stop = StopRule { target_failures: 50, max_shots: 2_000_000 };
    let settings = DecoderSettings::with_max_iters(100);
    let mut rows = Vec::new();
    for d in [3, 5, 7] {
        let code = build_code(d, 1, &[vertical_domino()], Boundary::Planar)?;
        for p in [2e-2, 3e-2, 5e-2] {
            let r = run_memory_experiment(&code, d, &NoiseModel::phenomenological(p, None), d, &stop, &settings, 1)?;
            println!("d = {d}, p = {p:.0e}: {} / {} shots, p_tot = {:.3e}", r.failing_shots, r.shots, r.p_tot);
            rows.push(SweepRow::from(&r));
        }
    }

    let path = std::env::temp_dir().join("repetition_sweep.csv");
    write_sweep_csv(&rows, std::fs::File::create(&path)?)?;
    println!("sweep written to {}", path.display());

    let points: Vec<FitPoint> = rows.iter().map(SweepRow::fit_point).collect();
    let fit = fit_ansatz(&points)?;
    println!("fit: A = {:.3}, B = {:.2}, C = {:.3} from {} points", fit.a, fit.b, fit.c, fit.points_used.len());
    Ok(())
}
