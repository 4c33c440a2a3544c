//! Monte-Carlo memory experiments and the logical-error ansatz.

mod fit;
mod sweep;

pub use fit::{
    crossing_point, extrapolate_pzl, fit_ansatz, fit_ansatz_pinned_a, logical_bitflip, FitPoint,
    FitResult, FIT_SATURATION,
};
pub use sweep::{read_sweep_csv, write_sweep_csv, SweepRow};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{BPConfig, Decoder, OSDConfig};
use crate::error::Result;
use crate::lattice::LatticeCode;
use crate::noise::{build_syndrome_circuit, compile_decoding_problem, DecodingProblem, NoiseModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub target_failures: u64,
    pub max_shots: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { target_failures: 100, max_shots: 10_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DecoderSettings {
    pub bp: BPConfig,
    pub osd: OSDConfig,
}

impl DecoderSettings {
    /// Default decoder with BP capped at `max_iters` iterations.
    pub fn with_max_iters(max_iters: usize) -> Self {
        Self { bp: BPConfig { max_iters, ..BPConfig::default() }, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCResult {
    pub model: NoiseModel,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub rounds: usize,
    pub shots: u64,
    pub failing_shots: u64,
    pub p_tot: f64,
    pub p_per_round: f64,
    pub std_err: f64,
    pub seed: u64,
    /// Set when the shot budget ran out before a single failure.
    pub upper_bound_only: bool,
    /// FNV-1a hash of the JSON-encoded configuration.
    pub config_digest: String,
}

/// `1 - (1 - F/N)^(1/k)` and its delta-method standard error.
pub fn per_qubit_failure(failures: u64, shots: u64, k: usize) -> (f64, f64) {
    assert!(shots > 0 && k > 0 && failures <= shots);
    let f = failures as f64 / shots as f64;
    let inv_k = 1.0 / k as f64;
    let p = 1.0 - (1.0 - f).powf(inv_k);
    let sigma_f = (f * (1.0 - f) / shots as f64).sqrt();
    let slope = if f < 1.0 { inv_k * (1.0 - f).powf(inv_k - 1.0) } else { f64::INFINITY };
    (p, if sigma_f == 0.0 { 0.0 } else { slope * sigma_f })
}

/// The RNG of shot `shot` under `seed`, independent of scheduling.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

fn digest(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Samples and decodes shots of an already compiled problem until
/// `stop.target_failures` failing shots or `stop.max_shots` shots.
///
/// Shots are evaluated in parallel batches but the stopping point is the
/// first shot index at which the failure count reaches the target, so the
/// outcome does not depend on the thread count. Returns `(shots, failures)`.
pub fn sample_failures(
    problem: &DecodingProblem,
    settings: &DecoderSettings,
    stop: &StopRule,
    seed: u64,
) -> (u64, u64) {
    let batch = 4096u64;
    let (mut shots, mut failures) = (0u64, 0u64);
    while shots < stop.max_shots && failures < stop.target_failures {
        let end = (shots + batch * rayon::current_num_threads() as u64).min(stop.max_shots);
        let outcomes: Vec<bool> = (shots..end)
            .into_par_iter()
            .map_init(
                || Decoder::new(problem, settings.bp, settings.osd),
                |dec, shot| {
                    let mut rng = shot_rng(seed, shot);
                    let faults = problem.sample(&mut rng);
                    let syndrome = problem.syndrome_of(&faults);
                    let actual = problem.logical_of(&faults);
                    if syndrome.is_zero() {
                        return !actual.is_zero();
                    }
                    dec.decode(&syndrome).predicted_logical != actual
                },
            )
            .collect();
        for failed in outcomes {
            shots += 1;
            failures += failed as u64;
            if failures == stop.target_failures {
                break;
            }
        }
    }
    (shots, failures)
}

/// Runs the `rounds`-round memory experiment of `code` under `model`.
///
/// `d` is only used for the per-round estimate `p_tot / d`.
pub fn run_memory_experiment(
    code: &LatticeCode,
    d: usize,
    model: &NoiseModel,
    rounds: usize,
    stop: &StopRule,
    settings: &DecoderSettings,
    seed: u64,
) -> Result<MCResult> {
    let circuit = build_syndrome_circuit(code, rounds, model)?;
    let problem = compile_decoding_problem(&circuit, code)?;
    let (shots, failures) = sample_failures(&problem, settings, stop, seed);
    let (p_tot, std_err) = per_qubit_failure(failures, shots, code.k());
    let config = serde_json::json!({
        "model": model,
        "rounds": rounds,
        "stop": stop,
        "decoder": settings,
        "parity_check": code.checks().iter().map(|c| &c.support).collect::<Vec<_>>(),
    });
    Ok(MCResult {
        model: *model,
        n: code.n(),
        k: code.k(),
        d,
        rounds,
        shots,
        failing_shots: failures,
        p_tot,
        p_per_round: p_tot / d.max(1) as f64,
        std_err,
        seed,
        upper_bound_only: failures == 0,
        config_digest: digest(&config.to_string()),
    })
}
