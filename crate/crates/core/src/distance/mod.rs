//! Exact minimum distance of a lattice code.
//!
//! Two independent routes: exhaustive Gray-code enumeration of the `2^k - 1`
//! nonzero codewords, and a dichotomic search over SAT queries "is there a
//! nonzero codeword of weight at most `d'`?".

mod cnf;
mod sat;
mod solver;

pub use cnf::{encode_weight_bound_cnf, Cnf, WeightBoundEncoding};
pub use sat::{distance_sat, SatOptions};
pub use solver::{
    default_solver, parse_solver_output, EmbeddedSolver, ExternalSolver, SatAnswer, SolverHandle,
    SOLVER_ENV,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::lattice::LatticeCode;

/// Largest `k` enumerated by default.
pub const DEFAULT_BRUTEFORCE_CAP: usize = 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bruteforce,
    Sat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub d: usize,
    /// A nonzero codeword of weight `d` (support list).
    pub witness: Vec<usize>,
    pub method: Method,
    /// Largest `d'` proven to admit no nonzero codeword of weight `<= d'`.
    pub certified_lower_bound: usize,
    /// False when a SAT search stopped early; `d` is then only an upper bound.
    pub complete: bool,
}

impl DistanceResult {
    pub fn witness_vector(&self, n: usize) -> BitVector {
        BitVector::from_support(n, &self.witness)
    }
}

/// Minimum nonzero weight in the row span of `generators` by enumeration.
///
/// Returns `(weight, combination)` where `combination` selects the generator
/// rows summing to a minimum-weight word.
pub fn min_weight_bruteforce(generators: &BitMatrix) -> Option<(usize, u64)> {
    let k = generators.rows();
    if k == 0 {
        return None;
    }
    assert!(k < 64, "enumeration over 2^{k} words");
    let stride = generators.row_words(0).len();
    let rows: Vec<u64> = (0..k)
        .flat_map(|r| generators.row_words(r).iter().copied())
        .collect();
    let total: u64 = 1 << k;
    // Chunks of the Gray sequence; each chunk is independent.
    let chunk_bits = k.min(22);
    let chunk: u64 = 1 << chunk_bits;
    let chunks = total / chunk;
    let best = (0..chunks)
        .into_par_iter()
        .map(|ci| scan_chunk(&rows, stride, k, ci * chunk, chunk))
        .reduce(
            || (usize::MAX, 0),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    (best.0 != usize::MAX).then_some(best)
}

/// Scans Gray indices `start..start + len`, returning `(min weight, gray code)`.
fn scan_chunk(rows: &[u64], stride: usize, k: usize, start: u64, len: u64) -> (usize, u64) {
    match stride {
        1 => scan_fixed::<1>(rows, k, start, len),
        2 => scan_fixed::<2>(rows, k, start, len),
        3 => scan_fixed::<3>(rows, k, start, len),
        4 => scan_fixed::<4>(rows, k, start, len),
        5 => scan_fixed::<5>(rows, k, start, len),
        6 => scan_fixed::<6>(rows, k, start, len),
        7 => scan_fixed::<7>(rows, k, start, len),
        8 => scan_fixed::<8>(rows, k, start, len),
        _ => scan_dyn(rows, stride, k, start, len),
    }
}

fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

fn scan_fixed<const S: usize>(rows: &[u64], k: usize, start: u64, len: u64) -> (usize, u64) {
    let mut cur = [0u64; S];
    let g0 = gray(start);
    for r in 0..k {
        if g0 >> r & 1 == 1 {
            for w in 0..S {
                cur[w] ^= rows[r * S + w];
            }
        }
    }
    let mut best = (usize::MAX, 0);
    let weight = |c: &[u64; S]| c.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    if start != 0 {
        best = (weight(&cur), g0);
    }
    for i in start + 1..start + len {
        let bit = i.trailing_zeros() as usize;
        let row = &rows[bit * S..bit * S + S];
        for w in 0..S {
            cur[w] ^= row[w];
        }
        let wt = weight(&cur);
        if wt < best.0 {
            best = (wt, gray(i));
        }
    }
    best
}

fn scan_dyn(rows: &[u64], stride: usize, k: usize, start: u64, len: u64) -> (usize, u64) {
    let mut cur = vec![0u64; stride];
    let g0 = gray(start);
    for r in 0..k {
        if g0 >> r & 1 == 1 {
            for w in 0..stride {
                cur[w] ^= rows[r * stride + w];
            }
        }
    }
    let weight = |c: &[u64]| c.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    let mut best = (usize::MAX, 0);
    if start != 0 {
        best = (weight(&cur), g0);
    }
    for i in start + 1..start + len {
        let bit = i.trailing_zeros() as usize;
        for w in 0..stride {
            cur[w] ^= rows[bit * stride + w];
        }
        let wt = weight(&cur);
        if wt < best.0 {
            best = (wt, gray(i));
        }
    }
    best
}

/// Exact distance by enumerating all nonzero codewords.
///
/// Cellular automaton codes use their seed-grown basis; other codes use a
/// kernel basis of the parity-check matrix.
pub fn distance_bruteforce(code: &LatticeCode, cap: usize) -> Result<DistanceResult> {
    let k = code.k();
    if k > cap {
        return Err(Error::EnumerationCap { k, cap });
    }
    if k == 0 {
        return Err(Error::InvalidCode("code has no nonzero codeword (k = 0)".into()));
    }
    let basis = code.codeword_basis();
    let (d, combo) = min_weight_bruteforce(&basis).expect("k > 0");
    let mut witness = BitVector::zeros(code.n());
    for r in 0..k {
        if combo >> r & 1 == 1 {
            witness.xor_assign(&basis.row(r));
        }
    }
    debug_assert_eq!(witness.weight(), d);
    Ok(DistanceResult {
        d,
        witness: witness.support(),
        method: Method::Bruteforce,
        certified_lower_bound: d - 1,
        complete: true,
    })
}

/// Brute force when `k <= auto_threshold`, SAT otherwise.
pub fn distance_auto(
    code: &LatticeCode,
    solver: &dyn SolverHandle,
    auto_threshold: usize,
) -> Result<DistanceResult> {
    if code.k() <= auto_threshold {
        distance_bruteforce(code, auto_threshold)
    } else {
        distance_sat(code, solver, None, &SatOptions::default())
    }
}
