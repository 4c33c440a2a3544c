use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::automaton::{windowed_seeds, RowAutomaton};
use crate::distance::{Cnf, SatAnswer, SolverHandle};
use crate::error::{Error, Result};
use crate::lattice::StabilizerShape;

/// Pointed shapes allowed on each row: weights in `weights`, tail within one
/// column of the anchor and at most `m - 1` rows below it.
pub fn row_candidates(weights: &[usize], m: usize) -> Vec<StabilizerShape> {
    let mut out: Vec<StabilizerShape> = weights
        .iter()
        .flat_map(|&w| StabilizerShape::pointed_candidates(w))
        .filter(|s| s.span() <= m && s.weight() >= 2)
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug)]
pub struct OptimizeConfig {
    /// `m - 1`: number of seed rows.
    pub seed_rows: usize,
    pub candidates: Vec<StabilizerShape>,
    /// First target distance tried; the search climbs from there.
    pub start_distance: usize,
    /// Stop once this distance is reached (no attempt beyond it).
    pub max_distance: Option<usize>,
    /// Seed windows used as cheap counterexample filters.
    pub filter_window: usize,
    pub deadline: Option<Duration>,
    pub query_timeout: Option<Duration>,
}

impl OptimizeConfig {
    /// Weight-4 shapes spanning up to three rows.
    pub fn weight4() -> Self {
        Self {
            seed_rows: 2,
            candidates: row_candidates(&[4], 3),
            start_distance: 1,
            max_distance: None,
            filter_window: 4,
            deadline: None,
            query_timeout: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub row_shapes: Vec<StabilizerShape>,
    /// Exact distance of `row_shapes`.
    pub d: usize,
    /// True when `d + 1` was proven unattainable with these candidates.
    pub optimal: bool,
    pub sat_calls: usize,
    /// Seeds accumulated as counterexamples.
    pub seeds_used: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Lit {
    Const(bool),
    Var(i32),
}

struct Encoder {
    cnf: Cnf,
    xor_memo: HashMap<(i32, i32), i32>,
}

impl Encoder {
    fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        match (a, b) {
            (Lit::Const(x), Lit::Const(y)) => Lit::Const(x ^ y),
            (Lit::Const(c), Lit::Var(v)) | (Lit::Var(v), Lit::Const(c)) => {
                Lit::Var(if c { -v } else { v })
            }
            (Lit::Var(x), Lit::Var(y)) => {
                if x == y {
                    return Lit::Const(false);
                }
                if x == -y {
                    return Lit::Const(true);
                }
                // Normalize signs: (-x) ^ y = !(x ^ y).
                let flip = (x < 0) ^ (y < 0);
                let (p, q) = (x.abs().min(y.abs()), x.abs().max(y.abs()));
                let t = match self.xor_memo.get(&(p, q)) {
                    Some(&t) => t,
                    None => {
                        let t = self.cnf.new_var();
                        self.cnf.add_xor(t, p, q);
                        self.xor_memo.insert((p, q), t);
                        t
                    }
                };
                Lit::Var(if flip { -t } else { t })
            }
        }
    }
}

/// Builds the query "some choice of one candidate per row makes every seed
/// in `seeds` grow a codeword of weight at least `target`".
///
/// Returns the formula and the selector variable of each (row, candidate).
fn encode_shape_query(
    height: usize,
    width: usize,
    cfg: &OptimizeConfig,
    seeds: &[Vec<u64>],
    target: usize,
) -> (Cnf, Vec<Vec<i32>>) {
    let anchors = height - cfg.seed_rows;
    let mut enc = Encoder { cnf: Cnf::default(), xor_memo: HashMap::new() };
    let select: Vec<Vec<i32>> = (0..anchors)
        .map(|_| cfg.candidates.iter().map(|_| enc.cnf.new_var()).collect())
        .collect();
    for row in &select {
        enc.cnf.add(row.clone());
        for i in 0..row.len() {
            for j in i + 1..row.len() {
                enc.cnf.add(vec![-row[i], -row[j]]);
            }
        }
    }
    let tails: Vec<Vec<(usize, i32)>> = cfg
        .candidates
        .iter()
        .map(|s| s.tail().map(|c| (c.down as usize, c.right as i32)).collect())
        .collect();
    let l = width as i32;
    for seed in seeds {
        let mut rows: Vec<Vec<Lit>> = seed
            .iter()
            .map(|&bits| (0..width).map(|c| Lit::Const(bits >> c & 1 == 1)).collect())
            .collect();
        for a in 0..anchors {
            let r = cfg.seed_rows + a;
            let mut new_row = Vec::with_capacity(width);
            for col in 0..l {
                let parities: Vec<Lit> = tails
                    .iter()
                    .map(|tail| {
                        tail.iter().fold(Lit::Const(false), |acc, &(down, right)| {
                            let cell = rows[r - down][(col + right).rem_euclid(l) as usize];
                            enc.xor(acc, cell)
                        })
                    })
                    .collect();
                let first = parities[0];
                if parities.iter().all(|p| *p == first) {
                    new_row.push(first);
                    continue;
                }
                let v = enc.cnf.new_var();
                for (ci, p) in parities.iter().enumerate() {
                    let x = select[a][ci];
                    match *p {
                        Lit::Const(true) => enc.cnf.add(vec![-x, v]),
                        Lit::Const(false) => enc.cnf.add(vec![-x, -v]),
                        Lit::Var(p) => {
                            enc.cnf.add(vec![-x, -v, p]);
                            enc.cnf.add(vec![-x, v, -p]);
                        }
                    }
                }
                new_row.push(Lit::Var(v));
            }
            rows.push(new_row);
        }
        let mut fixed = 0usize;
        let mut vars = Vec::new();
        for lit in rows.iter().flatten() {
            match *lit {
                Lit::Const(true) => fixed += 1,
                Lit::Const(false) => {}
                Lit::Var(v) => vars.push(v),
            }
        }
        enc.cnf.add_at_least(&vars, target.saturating_sub(fixed));
    }
    (enc.cnf, select)
}

/// Chooses one pointed shape per anchor row to maximise the distance of the
/// periodic `H x L` automaton code.
///
/// Each round asks the solver for shapes under which a growing set of seeds
/// all yield codewords of weight at least the target. A returned assignment
/// is checked against windowed seeds and then by exact enumeration; any
/// light codeword found joins the seed set. An unsatisfiable query proves the
/// target out of reach, because the seed set only relaxes the true condition.
pub fn optimize_row_shapes(
    height: usize,
    width: usize,
    cfg: &OptimizeConfig,
    solver: &dyn SolverHandle,
) -> Result<OptimizeResult> {
    if height <= cfg.seed_rows {
        return Err(Error::InvalidCode(format!(
            "height {height} leaves no anchor rows above {} seed rows",
            cfg.seed_rows
        )));
    }
    if width > 64 || cfg.seed_rows * width >= 64 {
        return Err(Error::OutOfRange(format!("width {width} too large for exact checks")));
    }
    if cfg.candidates.is_empty() {
        return Err(Error::InvalidShape("no candidate shapes".into()));
    }
    let start = Instant::now();
    let out_of_time = || cfg.deadline.is_some_and(|d| start.elapsed() > d);
    let window_seeds = windowed_seeds(cfg.seed_rows, width, cfg.filter_window);
    let mut seeds: Vec<Vec<u64>> = windowed_seeds(cfg.seed_rows, width, 1);
    let mut best: Option<(Vec<StabilizerShape>, usize)> = None;
    let mut target = cfg.start_distance.max(1);
    let mut sat_calls = 0;
    let mut optimal = false;

    'targets: loop {
        if cfg.max_distance.is_some_and(|m| target > m) {
            break;
        }
        loop {
            if out_of_time() {
                break 'targets;
            }
            let (cnf, select) = encode_shape_query(height, width, cfg, &seeds, target);
            sat_calls += 1;
            let model = match solver.solve(&cnf, cfg.query_timeout)? {
                SatAnswer::Sat(m) => m,
                SatAnswer::Unsat => {
                    optimal = best.is_some();
                    break 'targets;
                }
                SatAnswer::Unknown => break 'targets,
            };
            let shapes: Vec<StabilizerShape> = select
                .iter()
                .map(|row| {
                    let ci = row
                        .iter()
                        .position(|&v| model[v as usize - 1])
                        .expect("one-hot row");
                    cfg.candidates[ci].clone()
                })
                .collect();
            let auto = RowAutomaton::new(width, cfg.seed_rows, &shapes);
            let light = window_seeds
                .iter()
                .map(|s| (auto.weight(s), s))
                .min_by_key(|x| x.0)
                .filter(|x| (x.0 as usize) < target)
                .map(|x| x.1.clone());
            let counter = match light {
                Some(s) => s,
                None => {
                    let (d, seed) = auto.exact_distance();
                    let d = d as usize;
                    if best.as_ref().map_or(true, |b| d > b.1) {
                        best = Some((shapes.clone(), d));
                    }
                    if d >= target {
                        target = d + 1;
                        continue 'targets;
                    }
                    seed
                }
            };
            let canon = canonical_translate(&counter, width);
            if !seeds.contains(&canon) {
                seeds.push(canon);
            }
        }
    }
    let (row_shapes, d) =
        best.ok_or_else(|| Error::Solver("no assignment reached the first target".into()))?;
    Ok(OptimizeResult { row_shapes, d, optimal, sat_calls, seeds_used: seeds.len() })
}

/// Smallest translate of a seed (by its row words), so translates coincide.
fn canonical_translate(seed: &[u64], width: usize) -> Vec<u64> {
    let auto = RowAutomaton::new(width, seed.len(), &[]);
    (0..width as i32)
        .map(|s| seed.iter().map(|&r| auto.shift(r, s)).collect::<Vec<u64>>())
        .min()
        .expect("width >= 1")
}

/// Exhaustive oracle: best distance over all per-row assignments, by exact
/// enumeration of each code. Small instances only.
pub fn exhaustive_row_optimum(
    height: usize,
    width: usize,
    seed_rows: usize,
    candidates: &[StabilizerShape],
) -> (Vec<StabilizerShape>, usize) {
    let anchors = height - seed_rows;
    let total = candidates.len().pow(anchors as u32);
    let mut best = (Vec::new(), 0usize);
    for idx in 0..total {
        let mut x = idx;
        let shapes: Vec<StabilizerShape> = (0..anchors)
            .map(|_| {
                let s = candidates[x % candidates.len()].clone();
                x /= candidates.len();
                s
            })
            .collect();
        let (d, _) = RowAutomaton::new(width, seed_rows, &shapes).exact_distance();
        if d as usize > best.1 {
            best = (shapes, d as usize);
        }
    }
    best
}
