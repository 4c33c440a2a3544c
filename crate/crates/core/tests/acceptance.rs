//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria known to be out of reach are listed in `EXPECTED_RED`; they are
//! reported as FAIL with the reason but do not fail the run. Set
//! `ACCEPTANCE_ONLY=2,8` to run a subset.
//!
//! Run: cargo test --release --test acceptance

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ldpc_cat::decoder::{BPConfig, Decoder, OSDConfig};
use ldpc_cat::distance::{distance_bruteforce, distance_sat, EmbeddedSolver, ExternalSolver, SatOptions};
use ldpc_cat::estimator::reference_comparison;
use ldpc_cat::experiments::{
    crossing_point, extrapolate_pzl, logical_bitflip, run_memory_experiment, sample_failures,
    shot_rng, DecoderSettings, FitResult, StopRule,
};
use ldpc_cat::gf2::{nullspace_basis, rank, BitMatrix, BitVector};
use ldpc_cat::lattice::{
    build_code, make_planar, table1_family, tee, vertical_domino, Boundary, LatticeCode,
    StabilizerShape,
};
use ldpc_cat::noise::{
    build_syndrome_circuit, compile_decoding_problem, error_probabilities, DecodingProblem,
    NoiseModel,
};
use ldpc_cat::search::{row_candidates, scan_single_shapes, DistanceOptions};

const EXPECTED_RED: &[usize] = &[7];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn main() {
    let only: Option<BTreeSet<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [(usize, &str, fn() -> Verdict); 10] = [
        (1, "code parameters", code_parameters),
        (2, "H=3 L=10 tee distance", tee_anchor),
        (3, "weight-2 shapes are repetition codes", repetition_equivalence),
        (4, "cat error constants", cat_constants),
        (5, "Monte Carlo vs published fits", monte_carlo_vs_fits),
        (6, "threshold halving", threshold_halving),
        (7, "extrapolation pipeline", extrapolation),
        (8, "footprint table", footprint_table),
        (9, "decoder vs exhaustive ML", decoder_parity),
        (10, "property suites", property_suites),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let v = run();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status}  {name}: {} [{:.1?}]", v.detail, t.elapsed());
        if !v.pass && !EXPECTED_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

/// Published `(n, k, d)` of the five families at their minimal width.
const TABLE1_PUBLISHED: [(usize, usize, usize); 5] =
    [(20, 10, 5), (55, 22, 9), (78, 26, 12), (119, 34, 16), (136, 34, 22)];

fn code_parameters() -> Verdict {
    let external = ExternalSolver::from_env();
    let mut parts = Vec::new();
    let mut ok = true;
    for (row, &(n, k, d)) in (1..=5).zip(TABLE1_PUBLISHED.iter()) {
        let code = table1_family(row).unwrap().code(0);
        let brute = distance_bruteforce(&code, 34).unwrap();
        let mut line = format!("row{row} [{},{},{}]", code.n(), code.k(), brute.d);
        ok &= (code.n(), code.k(), brute.d) == (n, k, d);
        let sat = match (row, &external) {
            (1..=3, _) => Some(distance_sat(&code, &EmbeddedSolver, None, &SatOptions::default())),
            (_, Some(solver)) => Some(distance_sat(&code, solver, None, &SatOptions::default())),
            _ => None,
        };
        if let Some(sat) = sat {
            let sat = sat.unwrap();
            ok &= sat.complete && sat.d == brute.d;
            line += &format!(" sat={}", sat.d);
        }
        parts.push(line);
    }
    verdict(ok, parts.join(", "))
}

fn tee_anchor() -> Verdict {
    let t = Instant::now();
    let code = build_code(3, 10, &[tee()], Boundary::Periodic).unwrap();
    let d = distance_bruteforce(&code, 20).unwrap().d;
    let elapsed = t.elapsed();
    verdict(d == 7 && elapsed < Duration::from_secs(1), format!("d = {d} in {elapsed:.1?}"))
}

fn repetition_equivalence() -> Verdict {
    // A weight-2 shape splits the lattice into independent repetition
    // chains. With an even height every chain has the same length and
    // kd/n = 1 exactly; with an odd height a vertical gap of two leaves
    // chains of unequal length (or rows no check touches), so kd/n < 1.
    let weight2 = |h: usize, l: usize| {
        scan_single_shapes(h, l, Boundary::Periodic, &DistanceOptions::default())
            .unwrap()
            .into_iter()
            .filter(|r| r.row_shapes[0].weight() == 2)
            .collect::<Vec<_>>()
    };
    let mut exact = 0;
    let mut bad = Vec::new();
    for (h, l) in [(2, 7), (4, 8), (4, 5), (6, 6)] {
        for r in weight2(h, l) {
            exact += 1;
            if r.overhead_ratio() != Some((r.n, r.n)) {
                bad.push(format!("{h}x{l} mask {:?}", r.shape_mask));
            }
        }
    }
    let mut below = 0;
    for (h, l) in [(3, 7), (5, 6)] {
        for r in weight2(h, l) {
            match r.overhead_ratio() {
                Some((kd, n)) if kd <= n => below += (kd < n) as usize,
                _ => bad.push(format!("{h}x{l} mask {:?} beats repetition", r.shape_mask)),
            }
        }
    }
    verdict(
        bad.is_empty() && exact > 0,
        format!("{exact} weight-2 codes on even heights all at kd/n = 1; odd heights: {below} below 1, none above; violations {bad:?}"),
    )
}

fn cat_constants() -> Verdict {
    let p = error_probabilities(&NoiseModel::cat(11.0, 1e-4)).unwrap();
    let spam = format!("{:.1e}", p.prep);
    let cnot = format!("{:.1e}", p.cnot_total());
    verdict(
        spam == "1.1e-3" && cnot == "1.6e-2" && p.meas == p.prep,
        format!("eps_SPAM = {spam}, eps_CNOT = {cnot}"),
    )
}

fn repetition(d: usize) -> LatticeCode {
    build_code(d, 1, &[vertical_domino()], Boundary::Planar).unwrap()
}

fn sweep_settings() -> DecoderSettings {
    DecoderSettings::with_max_iters(100)
}

/// Each point's MC/fit ratio must lie in [1/2, 2] up to two standard
/// errors of the Monte-Carlo estimate.
fn monte_carlo_vs_fits() -> Verdict {
    let stop = StopRule { target_failures: 100, max_shots: 20_000_000 };
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, fit, model) in [
        ("phen", FitResult::from_params(0.32, 6.2, 1.0), NoiseModel::phenomenological as fn(f64, Option<f64>) -> NoiseModel),
        ("generic", FitResult::from_params(0.12, 23.0, 0.99), |p, _| NoiseModel::generic(p)),
    ] {
        let t = Instant::now();
        let mut ratios = Vec::new();
        let mut edge = 0;
        for d in [3, 5, 7] {
            for p in [1e-2, 2e-2] {
                let r = run_memory_experiment(&repetition(d), d, &model(p, None), d, &stop, &sweep_settings(), 5)
                    .unwrap();
                let predicted = fit.predict_total(p, d);
                let (q, sq) = (r.p_tot / predicted, r.std_err / predicted);
                ok &= q + 2.0 * sq >= 0.5 && q - 2.0 * sq <= 2.0;
                edge += !(0.5..=2.0).contains(&q) as usize;
                ratios.push(q);
            }
        }
        let elapsed = t.elapsed();
        ok &= elapsed < Duration::from_secs(1800);
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        parts.push(format!(
            "{label} MC/fit in [{lo:.2}, {hi:.2}], {edge} of 6 inside only within 2 sigma ({elapsed:.0?})"
        ));
    }
    verdict(ok, parts.join("; "))
}

fn pseudo_threshold(low: &LatticeCode, d_low: usize, high: &LatticeCode, d_high: usize, xs: &[f64], failures: u64) -> Option<f64> {
    let stop = StopRule { target_failures: failures, max_shots: 20_000_000 };
    let curve = |code: &LatticeCode, d: usize| -> Vec<f64> {
        xs.iter()
            .map(|&x| {
                run_memory_experiment(code, d, &NoiseModel::generic(x), d, &stop, &sweep_settings(), 11)
                    .unwrap()
                    .p_tot
            })
            .collect()
    };
    crossing_point(xs, &curve(low, d_low), &curve(high, d_high))
}

fn threshold_halving() -> Verdict {
    let rep = pseudo_threshold(
        &repetition(5),
        5,
        &repetition(7),
        7,
        &[1.6e-2, 2e-2, 2.5e-2, 3.2e-2, 4e-2, 5e-2, 6.4e-2],
        100,
    );
    let tee5 = build_code(3, 4, &[tee()], Boundary::Periodic).unwrap();
    let tee7 = build_code(3, 10, &[tee()], Boundary::Periodic).unwrap();
    let ca = pseudo_threshold(&tee5, 5, &tee7, 7, &[8e-3, 1e-2, 1.3e-2, 1.6e-2, 2e-2, 2.5e-2, 3.2e-2, 4e-2], 200);
    match (rep, ca) {
        (Some(r), Some(c)) => {
            let ratio = r / c;
            verdict(
                (1.5..=3.0).contains(&ratio),
                format!("repetition d5/d7 crossing {r:.4}, tee d5/d7 crossing {c:.4}, ratio {ratio:.2}"),
            )
        }
        _ => verdict(false, format!("no crossing found: repetition {rep:?}, tee {ca:?}")),
    }
}

fn extrapolation() -> Verdict {
    let fit = FitResult::from_params(0.1, 1613.0, 0.94);
    let pzl = extrapolate_pzl(&fit, 1e-4, 22);
    let oracle = 0.1 * (0.94 * 11.0 * (1613.0f64 * 1e-4).ln()).exp();
    let ulp = f64::EPSILON * oracle;
    let formula_ok = (pzl - oracle).abs() <= 4.0 * ulp && format!("{pzl:.1e}") == "6.4e-10";

    let code = table1_family(5).unwrap().planar_code(33);
    let n_cx: usize = code.checks().iter().map(|c| c.support.len()).sum();
    let bit_oracle = n_cx as f64 * 0.5 * (-22.0f64).exp() / code.k() as f64;
    let bit = logical_bitflip(11.0, code.total_check_weight(), code.k());
    let eps_l = pzl + bit;
    let budget_ok = (code.n(), code.k()) == (429, 100)
        && (bit - bit_oracle).abs() <= 4.0 * f64::EPSILON * bit_oracle
        && (eps_l / 2.5e-9 - 1.0).abs() <= 0.1;

    // Inside the regeneration window the published fit predicts values far
    // above 1 at d = 22, so no simulated probability can come within a
    // factor 2 of it.
    let window: Vec<f64> = [3e-3, 5e-3, 1e-2].iter().map(|&k| fit.predict_total(k, 22)).collect();
    let window_ok = window.iter().all(|&p| p <= 2.0);
    verdict(
        formula_ok && budget_ok && window_ok,
        format!(
            "p_ZL = {pzl:.2e} (oracle diff {:.1e}), N_CX = {n_cx}, p_XL = {bit:.2e}, eps_L = {eps_l:.2e}; \
             window predictions at d=22 {:.1e}..{:.1e} exceed 1, regeneration cannot match",
            (pzl - oracle).abs(),
            window[0],
            window[window.len() - 1]
        ),
    )
}

fn footprint_table() -> Verdict {
    let t = Instant::now();
    let rows = reference_comparison().unwrap();
    let elapsed = t.elapsed();
    let totals: Vec<usize> = rows.iter().map(|r| r.total_qubits).collect();
    verdict(
        totals == [33_700, 2_400, 2_100, 758] && elapsed < Duration::from_secs(1),
        format!("{totals:?} in {elapsed:.1?}"),
    )
}

/// `(ML failure, decoder failure)` probabilities by summing over all `2^m`
/// fault configurations.
fn exhaustive_failure(p: &DecodingProblem, osd: OSDConfig) -> (f64, f64) {
    let m = p.num_mechanisms();
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
                for &l in &p.logical_columns[j] {
                    log[l as usize] ^= true;
                }
            } else {
                prob *= 1.0 - p.priors[j];
            }
        }
        *classes.entry((syn, log)).or_default() += prob;
    }
    let mut best: HashMap<&Vec<bool>, f64> = HashMap::new();
    let mut total: HashMap<&Vec<bool>, f64> = HashMap::new();
    for ((s, _), &pr) in &classes {
        let b = best.entry(s).or_default();
        *b = b.max(pr);
        *total.entry(s).or_default() += pr;
    }
    let ml: f64 = total.iter().map(|(s, t)| t - best[s]).sum();
    let mut dec = Decoder::new(p, BPConfig::default(), osd);
    let mut guesses: HashMap<&Vec<bool>, Vec<bool>> = HashMap::new();
    let mut fail = 0.0;
    for ((s, l), &pr) in &classes {
        let g = guesses
            .entry(s)
            .or_insert_with(|| dec.decode(&BitVector::from_bools(s)).predicted_logical.to_bools());
        if g != l {
            fail += pr;
        }
    }
    (ml, fail)
}

fn decoder_parity() -> Verdict {
    let osd = OSDConfig { always: true, ..OSDConfig::default() };
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for code in [
        build_code(3, 1, &[vertical_domino()], Boundary::Planar).unwrap(),
        build_code(3, 1, &[vertical_domino()], Boundary::Periodic).unwrap(),
    ] {
        for rounds in 1..=6 {
            for model in [
                NoiseModel::phenomenological(0.01, None),
                NoiseModel::phenomenological(0.05, None),
                NoiseModel::phenomenological(0.1, Some(0.02)),
                NoiseModel::generic(0.01),
                NoiseModel::generic(0.05),
                NoiseModel::cat(11.0, 1e-3),
            ] {
                let circuit = build_syndrome_circuit(&code, rounds, &model).unwrap();
                let problem = compile_decoding_problem(&circuit, &code).unwrap();
                if problem.num_mechanisms() > 20 {
                    continue;
                }
                let (ml, dec) = exhaustive_failure(&problem, osd);
                worst = worst.max(dec / ml);
                checked += 1;
            }
        }
    }
    verdict(
        checked >= 10 && worst <= 1.1,
        format!("{checked} problems, worst BP+OSD/ML failure ratio {worst:.4}"),
    )
}

fn property_suites() -> Verdict {
    let suites: [(&str, fn() -> bool); 5] = [
        ("rank-nullity", rank_nullity),
        ("CA seeds = kernel", ca_seed_kernel),
        ("syndrome consistency", syndrome_consistency),
        ("planarization", planarization),
        ("replay", replay),
    ];
    let results: Vec<(&str, bool)> = suites.iter().map(|(n, f)| (*n, f())).collect();
    let detail = results
        .iter()
        .map(|(n, ok)| format!("{n} {}", if *ok { "ok" } else { "FAILED" }))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(results.iter().all(|r| r.1), detail)
}

fn rank_nullity() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..300).all(|_| {
        let (r, c) = (rng.random_range(1..40), rng.random_range(1..90));
        let mut m = BitMatrix::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                if rng.random_bool(0.3) {
                    m.set(i, j, true);
                }
            }
        }
        let basis = nullspace_basis(&m);
        rank(&m) + basis.rows() == c
            && rank(&basis) == basis.rows()
            && (0..basis.rows()).all(|i| m.mul_vec(&basis.row(i)).is_zero())
    })
}

fn ca_seed_kernel() -> bool {
    let mut shapes: Vec<StabilizerShape> = Vec::new();
    for w in 2..=4 {
        shapes.extend(StabilizerShape::pointed_candidates(w));
    }
    let mut ok = true;
    for s in &shapes {
        for h in 3..=6usize {
            for l in 2..=20 / h {
                let Ok(code) = build_code(h, l, &[s.clone()], Boundary::Periodic) else { continue };
                let masks: Vec<u32> = code
                    .checks()
                    .iter()
                    .map(|c| c.support.iter().fold(0, |a, &q| a | 1 << q))
                    .collect();
                let kernel: BTreeSet<u32> = (0u32..1 << code.n())
                    .filter(|x| masks.iter().all(|m| (x & m).count_ones() % 2 == 0))
                    .collect();
                let k = code.seed_sites().len();
                let expanded: BTreeSet<u32> = (0u32..1 << k)
                    .map(|seed| {
                        let bools: Vec<bool> = (0..k).map(|i| seed >> i & 1 == 1).collect();
                        let w = code.ca_codeword_from_seed(&BitVector::from_bools(&bools)).unwrap();
                        w.iter_ones().fold(0, |a, q| a | 1 << q)
                    })
                    .collect();
                ok &= kernel == expanded && code.k() == k;
            }
        }
    }
    ok
}

fn syndrome_consistency() -> bool {
    let codes = [
        repetition(3),
        repetition(5),
        build_code(3, 4, &[tee()], Boundary::Periodic).unwrap(),
        table1_family(1).unwrap().planar_code(0),
    ];
    let mut ok = true;
    for (i, code) in codes.iter().enumerate() {
        for model in [NoiseModel::phenomenological(0.03, None), NoiseModel::generic(0.02), NoiseModel::cat(11.0, 3e-3)] {
            let circuit = build_syndrome_circuit(code, 2, &model).unwrap();
            let problem = compile_decoding_problem(&circuit, code).unwrap();
            let mut dec = Decoder::new(&problem, BPConfig { max_iters: 50, ..BPConfig::default() }, OSDConfig::default());
            for shot in 0..100 {
                let faults = problem.sample(&mut shot_rng(i as u64, shot));
                let syndrome = problem.syndrome_of(&faults);
                let out = dec.decode(&syndrome);
                ok &= problem.syndrome_of(&out.correction) == syndrome
                    && problem.logical_of(&out.correction) == out.predicted_logical;
            }
        }
    }
    ok
}

fn planarization() -> bool {
    let cands = row_candidates(&[4], 3);
    let mut ok = true;
    for l in [4, 5] {
        for a in &cands {
            for b in &cands {
                let periodic = build_code(4, l, &[a.clone(), b.clone()], Boundary::Periodic).unwrap();
                let planar = make_planar(&periodic, None).unwrap();
                let dp = distance_bruteforce(&periodic, 24).unwrap().d;
                let dq = distance_bruteforce(&planar, 24).unwrap().d;
                ok &= planar.k() == periodic.k() && dq >= dp;
            }
        }
    }
    let fam = table1_family(1).unwrap();
    ok && (0..3).all(|ell| distance_bruteforce(&fam.planar_code(ell), 24).unwrap().d == fam.distance)
}

fn replay() -> bool {
    let code = repetition(3);
    let problem =
        compile_decoding_problem(&build_syndrome_circuit(&code, 3, &NoiseModel::generic(0.04)).unwrap(), &code).unwrap();
    let stop = StopRule { target_failures: 30, max_shots: 1_000_000 };
    let settings = DecoderSettings::with_max_iters(50);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_failures(&problem, &settings, &stop, 77))
    };
    let a = run(1);
    a == run(1) && a == run(4) && a.1 == 30
}
