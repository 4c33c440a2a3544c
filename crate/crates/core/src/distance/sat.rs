use std::path::PathBuf;
use std::time::Duration;

use super::cnf::encode_weight_bound_cnf;
use super::solver::{SatAnswer, SolverHandle};
use super::{DistanceResult, Method};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::lattice::{Boundary, LatticeCode};

#[derive(Clone, Debug, Default)]
pub struct SatOptions {
    /// Per-query time limit.
    pub timeout: Option<Duration>,
    /// Require a selected seed in column 0 (periodic automaton codes only).
    pub symmetry_breaking: bool,
    /// Where to write the DIMACS file of the query at `d - 1`.
    pub dimacs_out: Option<PathBuf>,
}

/// Distance by dichotomic search over weight-bound SAT queries.
///
/// The bracket starts at `(0, w]` where `w` is the lightest generator. When
/// a query is left undecided the search stops and the result is flagged
/// incomplete, carrying the bracket reached so far.
pub fn distance_sat(
    code: &LatticeCode,
    solver: &dyn SolverHandle,
    d_hint: Option<usize>,
    opts: &SatOptions,
) -> Result<DistanceResult> {
    if code.k() == 0 {
        return Err(Error::InvalidCode("code has no nonzero codeword (k = 0)".into()));
    }
    let basis = code.codeword_basis();
    let must_select: Vec<usize> = if opts.symmetry_breaking
        && code.boundary() == Boundary::Periodic
        && code.is_cellular_automaton()
    {
        (0..code.first_anchor_row()).collect()
    } else {
        Vec::new()
    };

    let mut best: BitVector = (0..basis.rows())
        .map(|r| basis.row(r))
        .min_by_key(|v| v.weight())
        .expect("k > 0");
    let mut lo = 0usize;
    let mut hi = best.weight();

    let query = |bound: usize| -> Result<(SatAnswer, Option<BitVector>)> {
        let enc = encode_weight_bound_cnf(&basis, bound, &must_select);
        let answer = solver.solve(&enc.cnf, opts.timeout)?;
        let word = match &answer {
            SatAnswer::Sat(model) => {
                let w = enc.decode(model);
                if w.is_zero() || w.weight() > bound || !code.is_codeword(&w) {
                    return Err(Error::Solver(format!(
                        "{} returned an invalid model at bound {bound}",
                        solver.name()
                    )));
                }
                Some(w)
            }
            _ => None,
        };
        Ok((answer, word))
    };

    let mut probes: Vec<usize> = Vec::new();
    if let Some(h) = d_hint {
        if h >= 1 && h <= hi {
            probes.push(h - 1);
            probes.push(h);
        }
    }
    let mut complete = true;
    while lo + 1 < hi {
        let mid = loop {
            match probes.first().copied() {
                Some(p) => {
                    probes.remove(0);
                    if p > lo && p < hi {
                        break p;
                    }
                }
                None => break (lo + hi) / 2,
            }
        };
        match query(mid)? {
            (SatAnswer::Sat(_), Some(w)) => {
                hi = w.weight();
                best = w;
            }
            (SatAnswer::Unsat, _) => lo = mid,
            _ => {
                complete = false;
                break;
            }
        }
    }
    if complete {
        if let Some(path) = &opts.dimacs_out {
            let enc = encode_weight_bound_cnf(&basis, hi - 1, &must_select);
            enc.cnf
                .write_dimacs(std::io::BufWriter::new(std::fs::File::create(path)?))?;
        }
    }
    Ok(DistanceResult {
        d: hi,
        witness: best.support(),
        method: Method::Sat,
        certified_lower_bound: lo,
        complete,
    })
}
