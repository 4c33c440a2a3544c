use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lattice::{build_code, tee, vertical_domino, Boundary};
use crate::noise::{build_syndrome_circuit, compile_decoding_problem, NoiseModel};

fn problem_for(h: usize, l: usize, shape_tee: bool, rounds: usize, model: NoiseModel) -> DecodingProblem {
    let shape = if shape_tee { tee() } else { vertical_domino() };
    let code = build_code(h, l, &[shape], Boundary::Periodic).unwrap();
    let c = build_syndrome_circuit(&code, rounds, &model).unwrap();
    compile_decoding_problem(&c, &code).unwrap()
}

fn toy(columns: Vec<Vec<u32>>, priors: Vec<f64>, dets: usize) -> DecodingProblem {
    let n = columns.len();
    DecodingProblem {
        num_detectors: dets,
        num_logicals: 1,
        columns,
        logical_columns: vec![vec![]; n],
        priors,
    }
}

#[test]
fn zero_syndrome_converges_immediately() {
    let p = problem_for(3, 1, false, 3, NoiseModel::generic(0.01));
    let out = bp_min_sum(&p, &BitVector::zeros(p.num_detectors), &BPConfig::default());
    assert!(out.converged);
    assert_eq!(out.iterations, 1);
    assert!(out.hard.is_zero());
    let d = decode(&p, &BitVector::zeros(p.num_detectors), &BPConfig::default(), &OSDConfig::default());
    assert!(d.correction.is_zero() && d.predicted_logical.is_zero() && !d.used_osd);
}

#[test]
fn likely_column_explains_detector_pair() {
    let p = toy(vec![vec![0, 1], vec![0], vec![1]], vec![0.1, 0.001, 0.001], 2);
    let s = BitVector::from_support(2, &[0, 1]);
    let out = bp_min_sum(&p, &s, &BPConfig::default());
    assert!(out.converged);
    assert_eq!(out.hard.support(), vec![0]);
}

#[test]
fn pairs_only_sweep_at_order_60_has_1770_configurations() {
    let cfg = OSDConfig { include_singles: false, ..OSDConfig::default() };
    assert_eq!(cfg.configurations(), 1770);
    assert_eq!(OSDConfig::default().configurations(), 1830);
    assert_eq!(OSDConfig::order0().configurations(), 0);
}

#[test]
fn osd0_solves_on_pivots() {
    let p = problem_for(3, 4, true, 2, NoiseModel::generic(0.02));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = p.detector_matrix();
    for _ in 0..50 {
        let e = p.sample(&mut rng);
        let s = p.syndrome_of(&e);
        let soft: Vec<f64> = p.priors.iter().map(|&q| ((1.0 - q) / q).ln()).collect();
        let c = osd_postprocess(&p, &s, &soft, &OSDConfig::order0());
        assert_eq!(h.mul_vec(&c), s);
    }
}

#[test]
fn every_decode_matches_the_syndrome() {
    let p = problem_for(3, 4, true, 3, NoiseModel::generic(0.03));
    let h = p.detector_matrix();
    let l = p.logical_matrix();
    let cfg = BPConfig { max_iters: 20, ..BPConfig::default() };
    let mut dec = Decoder::new(&p, cfg, OSDConfig { order: 10, ..OSDConfig::default() });
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut osd_calls = 0;
    for _ in 0..300 {
        let e = p.sample(&mut rng);
        let s = p.syndrome_of(&e);
        let out = dec.decode(&s);
        assert_eq!(h.mul_vec(&out.correction), s);
        assert_eq!(l.mul_vec(&out.correction), out.predicted_logical);
        osd_calls += out.used_osd as usize;
    }
    assert!(osd_calls > 0);
}

/// Exact failure probabilities over all 2^M fault subsets: (ML, decoder).
fn exhaustive_failure(p: &DecodingProblem, osd: OSDConfig) -> (f64, f64) {
    let m = p.num_mechanisms();
    assert!(m <= 20);
    let mut classes: HashMap<(Vec<bool>, Vec<bool>), f64> = HashMap::new();
    for mask in 0u32..(1 << m) {
        let mut prob = 1.0;
        let mut syn = vec![false; p.num_detectors];
        let mut log = vec![false; p.num_logicals];
        for j in 0..m {
            if mask >> j & 1 == 1 {
                prob *= p.priors[j];
                for &d in &p.columns[j] {
                    syn[d as usize] ^= true;
                }
                for &d in &p.logical_columns[j] {
                    log[d as usize] ^= true;
                }
            } else {
                prob *= 1.0 - p.priors[j];
            }
        }
        *classes.entry((syn, log)).or_default() += prob;
    }
    let mut best: HashMap<Vec<bool>, f64> = HashMap::new();
    let mut total: HashMap<Vec<bool>, f64> = HashMap::new();
    for ((s, _), &pr) in &classes {
        let b = best.entry(s.clone()).or_default();
        *b = b.max(pr);
        *total.entry(s.clone()).or_default() += pr;
    }
    let ml_fail: f64 = total.iter().map(|(s, t)| t - best[s]).sum();
    let mut dec = Decoder::new(p, BPConfig::default(), osd);
    let mut guesses: HashMap<Vec<bool>, Vec<bool>> = HashMap::new();
    let mut dec_fail = 0.0;
    for ((s, l), &pr) in &classes {
        let guess = guesses
            .entry(s.clone())
            .or_insert_with(|| dec.decode(&BitVector::from_bools(s)).predicted_logical.to_bools());
        if guess != l {
            dec_fail += pr;
        }
    }
    (ml_fail, dec_fail)
}

#[test]
fn matches_maximum_likelihood_on_small_problems() {
    let osd = OSDConfig { order: 10, always: true, ..OSDConfig::default() };
    let mut checked = 0;
    for boundary in [Boundary::Periodic, Boundary::Planar] {
        for rounds in 1..=4 {
            for model in [
                NoiseModel::phenomenological(0.01, None),
                NoiseModel::phenomenological(0.05, None),
                NoiseModel::generic(0.01),
                NoiseModel::generic(0.05),
            ] {
                let code = build_code(3, 1, &[vertical_domino()], boundary).unwrap();
                let c = build_syndrome_circuit(&code, rounds, &model).unwrap();
                let prob = compile_decoding_problem(&c, &code).unwrap();
                if prob.num_mechanisms() > 20 {
                    continue;
                }
                let (ml, bposd) = exhaustive_failure(&prob, osd);
                assert!(bposd <= 1.1 * ml, "{boundary:?} r{rounds} {model:?}: {bposd} vs ML {ml}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 10);
}

#[test]
fn class_selection_beats_single_candidate_on_ties() {
    let code = build_code(3, 1, &[vertical_domino()], Boundary::Periodic).unwrap();
    let c = build_syndrome_circuit(&code, 3, &NoiseModel::phenomenological(0.01, None)).unwrap();
    let prob = compile_decoding_problem(&c, &code).unwrap();
    let base = OSDConfig { order: 10, always: true, ..OSDConfig::default() };
    let (ml, aware) = exhaustive_failure(&prob, base);
    let (_, single) = exhaustive_failure(&prob, OSDConfig { degeneracy_aware: false, ..base });
    assert!(aware <= single);
    assert!(aware <= 1.1 * ml);
}

#[test]
fn decoding_is_deterministic() {
    let p = problem_for(3, 4, true, 2, NoiseModel::generic(0.03));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shots: Vec<BitVector> = (0..40).map(|_| p.syndrome_of(&p.sample(&mut rng))).collect();
    let run = || {
        let mut d = Decoder::new(&p, BPConfig { max_iters: 30, ..Default::default() }, OSDConfig::default());
        shots.iter().map(|s| d.decode(s).correction).collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}
