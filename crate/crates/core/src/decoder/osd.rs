use std::collections::HashMap;

use super::{OSDConfig, OsdMethod};
use crate::gf2::BitVector;
use crate::noise::DecodingProblem;

#[inline]
fn bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

/// Columns ordered from most to least likely to have fired according to
/// the BP posterior, ties by index.
fn column_order(soft: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..soft.len()).collect();
    order.sort_by(|&a, &b| soft[a].total_cmp(&soft[b]).then(a.cmp(&b)));
    order
}

/// Candidate reduced to the pivot coordinates: XOR of the selected
/// non-pivot columns and the reduced syndrome, scored by prior weight.
fn cost(pivot_bits: &[u64], pivot_weights: &[f64], extra: f64) -> f64 {
    let mut total = extra;
    for (wi, &w) in pivot_bits.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            total += pivot_weights[wi * 64 + w.trailing_zeros() as usize];
            w &= w - 1;
        }
    }
    total
}

pub(super) fn postprocess(
    problem: &DecodingProblem,
    weights: &[f64],
    syndrome: &BitVector,
    soft: &[f64],
    cfg: &OSDConfig,
) -> BitVector {
    let nvars = problem.num_mechanisms();
    let ndet = problem.num_detectors;
    let order = column_order(soft);
    let mut pos_of = vec![0usize; nvars];
    for (j, &v) in order.iter().enumerate() {
        pos_of[v] = j;
    }
    // Augmented rows over permuted columns, the syndrome in column `nvars`.
    let words = (nvars + 1).div_ceil(64);
    let mut rows = vec![0u64; ndet * words];
    for (v, col) in problem.columns.iter().enumerate() {
        let j = pos_of[v];
        for &d in col {
            rows[d as usize * words + j / 64] |= 1 << (j % 64);
        }
    }
    for d in syndrome.iter_ones() {
        rows[d * words + nvars / 64] |= 1 << (nvars % 64);
    }
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for j in 0..nvars {
        if rank == ndet {
            break;
        }
        let Some(p) = (rank..ndet).find(|&r| bit(&rows[r * words..(r + 1) * words], j)) else {
            continue;
        };
        if p != rank {
            for w in 0..words {
                rows.swap(p * words + w, rank * words + w);
            }
        }
        let start = j / 64;
        for r in 0..ndet {
            if r != rank && bit(&rows[r * words..(r + 1) * words], j) {
                for w in start..words {
                    let x = rows[rank * words + w];
                    rows[r * words + w] ^= x;
                }
            }
        }
        pivots.push(j);
        rank += 1;
    }
    let row = |r: usize| &rows[r * words..(r + 1) * words];

    // Reduced syndrome and reduced non-pivot columns, indexed by pivot row.
    let pwords = rank.div_ceil(64).max(1);
    let pack = |col: usize| -> Vec<u64> {
        let mut out = vec![0u64; pwords];
        for r in 0..rank {
            if bit(row(r), col) {
                out[r / 64] |= 1 << (r % 64);
            }
        }
        out
    };
    let base = pack(nvars);
    let pivot_weights: Vec<f64> = pivots.iter().map(|&j| weights[order[j]]).collect();

    let mut is_pivot = vec![false; nvars];
    for &j in &pivots {
        is_pivot[j] = true;
    }
    let sweep: Vec<usize> = (0..nvars).filter(|&j| !is_pivot[j]).take(cfg.order).collect();
    let reduced: Vec<Vec<u64>> = sweep.iter().map(|&j| pack(j)).collect();
    let sweep_weights: Vec<f64> = sweep.iter().map(|&j| weights[order[j]]).collect();

    // Logical action of each pivot column and each swept column.
    let lwords = problem.num_logicals.div_ceil(64).max(1);
    let logical_words = |v: usize| -> Vec<u64> {
        let mut out = vec![0u64; lwords];
        for &l in &problem.logical_columns[v] {
            out[l as usize / 64] ^= 1 << (l % 64);
        }
        out
    };
    let pivot_logicals: Vec<Vec<u64>> = pivots.iter().map(|&j| logical_words(order[j])).collect();
    let sweep_logicals: Vec<Vec<u64>> = sweep.iter().map(|&j| logical_words(order[j])).collect();

    // Per logical class: (log of summed likelihood, best cost, its flips).
    let mut classes: HashMap<Vec<u64>, (f64, f64, Vec<usize>)> = HashMap::new();
    let mut first_class: Vec<Vec<u64>> = Vec::new();
    let mut scratch = vec![0u64; pwords];
    let mut consider = |flips: &[usize], scratch: &mut Vec<u64>| {
        scratch.copy_from_slice(&base);
        let mut extra = 0.0;
        let mut logical = vec![0u64; lwords];
        for &f in flips {
            for (s, c) in scratch.iter_mut().zip(&reduced[f]) {
                *s ^= c;
            }
            for (a, b) in logical.iter_mut().zip(&sweep_logicals[f]) {
                *a ^= b;
            }
            extra += sweep_weights[f];
        }
        let c = cost(scratch, &pivot_weights, extra);
        for (wi, &w) in scratch.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let r = wi * 64 + w.trailing_zeros() as usize;
                for (a, b) in logical.iter_mut().zip(&pivot_logicals[r]) {
                    *a ^= b;
                }
                w &= w - 1;
            }
        }
        match classes.get_mut(&logical) {
            Some(entry) => {
                let (hi, lo) = if -c > entry.0 { (-c, entry.0) } else { (entry.0, -c) };
                entry.0 = hi + (lo - hi).exp().ln_1p();
                if c < entry.1 {
                    entry.1 = c;
                    entry.2 = flips.to_vec();
                }
            }
            None => {
                first_class.push(logical.clone());
                classes.insert(logical, (-c, c, flips.to_vec()));
            }
        }
    };
    consider(&[], &mut scratch);
    let w = sweep.len();
    match cfg.method {
        OsdMethod::CombinationSweep => {
            if cfg.include_singles {
                for a in 0..w {
                    consider(&[a], &mut scratch);
                }
            }
            for a in 0..w {
                for b in a + 1..w {
                    consider(&[a, b], &mut scratch);
                }
            }
        }
        OsdMethod::Exhaustive => {
            assert!(w < 32, "exhaustive OSD order must stay below 32");
            let mut flips = Vec::with_capacity(w);
            for mask in 1u64..(1 << w) {
                flips.clear();
                flips.extend((0..w).filter(|&i| mask >> i & 1 == 1));
                consider(&flips, &mut scratch);
            }
        }
    }
    // Most likely class (summed over its candidates, or its single best
    // candidate when degeneracy is ignored); earlier classes win ties.
    let score = |e: &(f64, f64, Vec<usize>)| if cfg.degeneracy_aware { e.0 } else { -e.1 };
    let mut chosen = &classes[&first_class[0]];
    for key in &first_class[1..] {
        let e = &classes[key];
        if score(e) > score(chosen) {
            chosen = e;
        }
    }
    let best_flips = chosen.2.clone();
    let mut best_bits = base.clone();
    for &f in &best_flips {
        for (s, c) in best_bits.iter_mut().zip(&reduced[f]) {
            *s ^= c;
        }
    }

    let mut correction = BitVector::zeros(nvars);
    for (r, &j) in pivots.iter().enumerate() {
        if best_bits[r / 64] >> (r % 64) & 1 == 1 {
            correction.set(order[j], true);
        }
    }
    for &f in &best_flips {
        correction.set(order[sweep[f]], true);
    }
    correction
}
