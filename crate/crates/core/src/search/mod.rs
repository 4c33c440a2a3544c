//! Code searches: the exhaustive scan over the 511 non-empty shapes of the
//! 3x3 window, and the optimization of one pointed shape per row.

mod automaton;
mod optimize;
mod rows;

pub use automaton::{windowed_seeds, RowAutomaton};
pub use optimize::{
    exhaustive_row_optimum, optimize_row_shapes, row_candidates, OptimizeConfig, OptimizeResult,
};
pub use rows::{exhaustive_row_search, filter_assignments};

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{distance_bruteforce, distance_sat, EmbeddedSolver, Method, SatOptions};
use crate::error::Result;
use crate::lattice::{build_code, Boundary, LatticeCode, StabilizerShape};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    /// Window mask for single-shape codes.
    pub shape_mask: Option<u16>,
    pub row_shapes: Vec<StabilizerShape>,
    #[serde(rename = "H")]
    pub height: usize,
    #[serde(rename = "L")]
    pub width: usize,
    pub boundary: Boundary,
    pub n: usize,
    pub k: usize,
    /// `None` when `k = 0`.
    pub d: Option<usize>,
    pub is_ca: bool,
    pub m: usize,
    pub method: Option<Method>,
    pub runtime_s: f64,
    /// Distance carried over from the family base rather than recomputed.
    #[serde(default)]
    pub family_extrapolated: bool,
}

impl SearchRecord {
    pub fn is_degenerate(&self) -> bool {
        self.k == 0
    }

    /// `k d / n` as the exact pair `(k d, n)`.
    pub fn overhead_ratio(&self) -> Option<(usize, usize)> {
        self.d.map(|d| (self.k * d, self.n))
    }

    pub fn overhead_factor(&self) -> Option<f64> {
        self.overhead_ratio().map(|(a, b)| a as f64 / b as f64)
    }

    pub fn code(&self) -> Result<LatticeCode> {
        build_code(self.height, self.width, &self.row_shapes, self.boundary)
    }
}

/// Options shared by the searches.
#[derive(Clone, Debug)]
pub struct DistanceOptions {
    /// Largest `k` computed by enumeration; above it the SAT route is used.
    pub bruteforce_cap: usize,
    /// Skip the distance (record `d = None`) when `k` exceeds this.
    pub k_limit: Option<usize>,
    pub sat: SatOptions,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self { bruteforce_cap: 24, k_limit: None, sat: SatOptions::default() }
    }
}

/// Exact distance of `code` by enumeration or SAT, whichever `opts` picks.
pub fn certified_distance(
    code: &LatticeCode,
    opts: &DistanceOptions,
) -> Result<Option<(usize, Method)>> {
    if code.k() == 0 || opts.k_limit.is_some_and(|lim| code.k() > lim) {
        return Ok(None);
    }
    if code.k() <= opts.bruteforce_cap {
        let r = distance_bruteforce(code, opts.bruteforce_cap)?;
        return Ok(Some((r.d, r.method)));
    }
    let r = distance_sat(code, &EmbeddedSolver, None, &opts.sat)?;
    Ok(r.complete.then_some((r.d, r.method)))
}

fn record_for(
    shapes: Vec<StabilizerShape>,
    mask: Option<u16>,
    code: &LatticeCode,
    opts: &DistanceOptions,
) -> Result<SearchRecord> {
    let start = Instant::now();
    let dist = certified_distance(code, opts)?;
    Ok(SearchRecord {
        shape_mask: mask,
        m: shapes.iter().map(|s| s.span()).max().unwrap_or(1),
        is_ca: code.is_cellular_automaton(),
        row_shapes: shapes,
        height: code.height(),
        width: code.width(),
        boundary: code.boundary(),
        n: code.n(),
        k: code.k(),
        d: dist.map(|x| x.0),
        method: dist.map(|x| x.1),
        runtime_s: start.elapsed().as_secs_f64(),
        family_extrapolated: false,
    })
}

/// Builds and measures the code of every non-empty window shape.
///
/// Shapes that do not fit the lattice height are skipped; shapes giving
/// `k = 0` are kept as degenerate records. Output is ordered by mask.
pub fn scan_single_shapes(
    height: usize,
    width: usize,
    boundary: Boundary,
    opts: &DistanceOptions,
) -> Result<Vec<SearchRecord>> {
    let masks: Vec<u16> = StabilizerShape::all_window_masks().collect();
    let records: Vec<Option<SearchRecord>> = masks
        .par_iter()
        .map(|&mask| {
            let shape = StabilizerShape::from_mask(mask)?;
            let Ok(code) = build_code(height, width, &[shape.clone()], boundary) else {
                return Ok(None);
            };
            record_for(vec![shape], Some(mask), &code, opts).map(Some)
        })
        .collect::<Result<_>>()?;
    Ok(records.into_iter().flatten().collect())
}

/// Keeps one record per class of shapes related by translation or mirror
/// image (the first in input order).
pub fn dedup_reflections(records: &[SearchRecord]) -> Vec<SearchRecord> {
    let mut seen = std::collections::HashSet::new();
    records
        .iter()
        .filter(|r| {
            let key: Vec<StabilizerShape> = {
                let a = r.row_shapes.clone();
                let b: Vec<StabilizerShape> = a.iter().map(|s| s.reflected()).collect();
                a.min(b)
            };
            seen.insert((key, r.height, r.width))
        })
        .cloned()
        .collect()
}

/// Best record per distance: largest `kd/n`, ties broken by smaller `n`,
/// then by input order. Sorted by distance.
pub fn pareto_by_distance(records: &[SearchRecord]) -> Vec<SearchRecord> {
    let mut best: std::collections::BTreeMap<usize, &SearchRecord> = Default::default();
    for r in records {
        let (Some(d), Some((num, den))) = (r.d, r.overhead_ratio()) else { continue };
        match best.get(&d) {
            Some(b) => {
                let (bn, bd) = b.overhead_ratio().unwrap();
                let better = num * bd > bn * den || (num * bd == bn * den && r.n < b.n);
                if better {
                    best.insert(d, r);
                }
            }
            None => {
                best.insert(d, r);
            }
        }
    }
    best.into_values().cloned().collect()
}

/// `(m - 1) d / H`, the overhead factor of an automaton code of height `H`.
pub fn characteristic_line(m: usize, height: usize, d: usize) -> f64 {
    assert!(m >= 2 && height >= m, "need m >= 2 and H >= m");
    ((m - 1) * d) as f64 / height as f64
}

/// The member of `base`'s family `ell` columns wider.
///
/// The distance is recomputed when `k <= verify_cap`; otherwise it is
/// carried over from `base` and flagged as extrapolated.
pub fn grow_family(base: &SearchRecord, ell: usize, verify_cap: usize) -> Result<SearchRecord> {
    let code = build_code(base.height, base.width + ell, &base.row_shapes, base.boundary)?;
    let opts = DistanceOptions {
        bruteforce_cap: verify_cap,
        k_limit: Some(verify_cap),
        ..Default::default()
    };
    let mut rec = record_for(base.row_shapes.clone(), base.shape_mask, &code, &opts)?;
    if rec.d.is_none() && rec.k > 0 {
        rec.d = base.d;
        rec.method = base.method;
        rec.family_extrapolated = true;
    }
    Ok(rec)
}

/// Writes records as CSV with one row per code.
pub fn write_records_csv<W: Write>(records: &[SearchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "shape_mask", "shapes", "H", "L", "n", "k", "d", "kd_over_n", "is_ca", "m", "method",
        "runtime_s",
    ])?;
    for r in records {
        let shapes: Vec<String> = r.row_shapes.iter().map(|s| s.to_string()).collect();
        w.write_record([
            r.shape_mask.map_or(String::new(), |m| m.to_string()),
            shapes.join(" "),
            r.height.to_string(),
            r.width.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.d.map_or(String::new(), |d| d.to_string()),
            r.overhead_factor().map_or(String::new(), |f| format!("{f:.6}")),
            r.is_ca.to_string(),
            r.m.to_string(),
            r.method
                .map_or(String::new(), |m| format!("{m:?}").to_lowercase()),
            format!("{:.6}", r.runtime_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}
