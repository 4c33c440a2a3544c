use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::Rng;

use super::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::lattice::LatticeCode;

/// Detector-by-mechanism description of a noisy memory experiment.
///
/// Detector `r * checks + c` is the parity of check `c`'s outcomes in
/// rounds `r - 1` and `r` (round 0 compares against the known initial
/// value). Each mechanism is an independent fault flipping a fixed set of
/// detectors and logicals.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodingProblem {
    pub num_detectors: usize,
    pub num_logicals: usize,
    /// Sorted detector indices of each mechanism.
    pub columns: Vec<Vec<u32>>,
    /// Sorted logical indices of each mechanism.
    pub logical_columns: Vec<Vec<u32>>,
    pub priors: Vec<f64>,
}

impl DecodingProblem {
    pub fn num_mechanisms(&self) -> usize {
        self.columns.len()
    }

    pub fn detector_matrix(&self) -> BitMatrix {
        columns_to_matrix(self.num_detectors, &self.columns)
    }

    pub fn logical_matrix(&self) -> BitMatrix {
        columns_to_matrix(self.num_logicals, &self.logical_columns)
    }

    pub fn syndrome_of(&self, faults: &BitVector) -> BitVector {
        xor_columns(self.num_detectors, &self.columns, faults)
    }

    pub fn logical_of(&self, faults: &BitVector) -> BitVector {
        xor_columns(self.num_logicals, &self.logical_columns, faults)
    }

    /// Draws every mechanism independently with its prior.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        let mut faults = BitVector::zeros(self.num_mechanisms());
        for (j, &p) in self.priors.iter().enumerate() {
            if rng.random::<f64>() < p {
                faults.set(j, true);
            }
        }
        faults
    }

    /// Text export: a `detectors mechanisms logicals` header, then one line
    /// per mechanism `prior ; detectors ; logicals`.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {}", self.num_detectors, self.num_mechanisms(), self.num_logicals)?;
        for j in 0..self.num_mechanisms() {
            let dets: Vec<String> = self.columns[j].iter().map(|d| d.to_string()).collect();
            let logs: Vec<String> = self.logical_columns[j].iter().map(|d| d.to_string()).collect();
            writeln!(out, "{:e} ; {} ; {}", self.priors[j], dets.join(" "), logs.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty problem file".into()))??;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        let [num_detectors, mechanisms, num_logicals] = dims[..] else {
            return Err(Error::Parse(format!("bad header `{header}`")));
        };
        let mut p = DecodingProblem {
            num_detectors,
            num_logicals,
            columns: Vec::with_capacity(mechanisms),
            logical_columns: Vec::with_capacity(mechanisms),
            priors: Vec::with_capacity(mechanisms),
        };
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(';').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad mechanism line `{line}`")));
            }
            let prior: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prior in `{line}`")))?;
            let list = |s: &str, bound: usize| -> Result<Vec<u32>> {
                s.split_whitespace()
                    .map(|t| match t.parse::<u32>() {
                        Ok(v) if (v as usize) < bound => Ok(v),
                        _ => Err(Error::Parse(format!("bad index `{t}` in `{line}`"))),
                    })
                    .collect()
            };
            p.priors.push(prior);
            p.columns.push(list(parts[1], num_detectors)?);
            p.logical_columns.push(list(parts[2], num_logicals)?);
        }
        if p.priors.len() != mechanisms {
            return Err(Error::Parse(format!(
                "header declares {mechanisms} mechanisms, found {}",
                p.priors.len()
            )));
        }
        Ok(p)
    }
}

fn columns_to_matrix(rows: usize, cols: &[Vec<u32>]) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for &r in col {
            m.set(r as usize, j, true);
        }
    }
    m
}

fn xor_columns(len: usize, cols: &[Vec<u32>], faults: &BitVector) -> BitVector {
    let mut out = BitVector::zeros(len);
    for j in faults.iter_ones() {
        for &r in &cols[j] {
            out.toggle(r as usize);
        }
    }
    out
}

/// Accumulates fault mechanisms, merging identical signatures.
struct Collector {
    index: HashMap<(Vec<u32>, Vec<u32>), usize>,
    problem: DecodingProblem,
}

impl Collector {
    fn add(&mut self, p: f64, mut dets: Vec<u32>, mut logs: Vec<u32>) {
        if p <= 0.0 {
            return;
        }
        dets.sort_unstable();
        logs.sort_unstable();
        cancel_pairs(&mut dets);
        cancel_pairs(&mut logs);
        if dets.is_empty() && logs.is_empty() {
            return;
        }
        let key = (dets, logs);
        match self.index.get(&key) {
            Some(&j) => {
                let q = self.problem.priors[j];
                self.problem.priors[j] = p * (1.0 - q) + q * (1.0 - p);
            }
            None => {
                self.index.insert(key.clone(), self.problem.priors.len());
                self.problem.columns.push(key.0);
                self.problem.logical_columns.push(key.1);
                self.problem.priors.push(p);
            }
        }
    }
}

/// Removes elements appearing an even number of times from a sorted list.
fn cancel_pairs(v: &mut Vec<u32>) {
    let mut out: Vec<u32> = Vec::with_capacity(v.len());
    for &x in v.iter() {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    *v = out;
}

/// Propagates every single Z fault of `circuit` to its detectors and
/// logical flips.
///
/// Under the ancilla-control CNOTs a Z on a data qubit copies onto the
/// ancilla of every later CNOT it meets, while a Z on an ancilla stays put
/// and flips that round's outcome. A logical is flipped when the final data
/// error hits its weight-one X representative (see
/// [`LatticeCode::logical_x_sites`]).
pub fn compile_decoding_problem(circuit: &Circuit, code: &LatticeCode) -> Result<DecodingProblem> {
    let n = circuit.num_data;
    let m = circuit.num_checks;
    if n != code.n() || m != code.num_checks() {
        return Err(Error::InvalidCode("circuit was not built from this code".into()));
    }
    let rounds = circuit.rounds;
    let depth = circuit.layers.len();
    // (check, layer) pairs touching each data qubit.
    let mut touches: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (j, layer) in circuit.layers.iter().enumerate() {
        for &(c, q) in layer {
            touches[q].push((c, j));
        }
    }
    let mut logical_of_site = vec![None; n];
    for (i, q) in code.logical_x_sites().into_iter().enumerate() {
        logical_of_site[q] = Some(i as u32);
    }
    let num_logicals = code.logical_x_sites().len();
    let det = |c: usize, r: usize| (r * m + c) as u32;

    // Data Z on q in round r after layer `after` (None: before every CNOT).
    let data_fault = |q: usize, r: usize, after: Option<usize>| -> (Vec<u32>, Vec<u32>) {
        let dets = touches[q]
            .iter()
            .map(|&(c, j)| if after.map_or(true, |a| j > a) { det(c, r) } else { det(c, r + 1) })
            .collect();
        (dets, logical_of_site[q].into_iter().collect())
    };
    let anc_fault = |c: usize, r: usize| vec![det(c, r), det(c, r + 1)];

    let pr = circuit.probs;
    let mut col = Collector {
        index: HashMap::new(),
        problem: DecodingProblem {
            num_detectors: m * (rounds + 1),
            num_logicals,
            columns: Vec::new(),
            logical_columns: Vec::new(),
            priors: Vec::new(),
        },
    };
    for r in 0..rounds {
        for c in 0..m {
            col.add(pr.prep, anc_fault(c, r), vec![]);
        }
        for q in 0..n {
            let (d, l) = data_fault(q, r, None);
            col.add(pr.idle_prep, d, l);
        }
        for (j, layer) in circuit.layers.iter().enumerate() {
            let mut busy_anc = vec![false; m];
            let mut busy_data = vec![false; n];
            for &(c, q) in layer {
                busy_anc[c] = true;
                busy_data[q] = true;
                col.add(pr.cx_control, anc_fault(c, r), vec![]);
                let (d, l) = data_fault(q, r, Some(j));
                col.add(pr.cx_target, d.clone(), l.clone());
                let mut both = d;
                both.extend(anc_fault(c, r));
                col.add(pr.cx_both, both, l);
            }
            for c in (0..m).filter(|&c| !busy_anc[c]) {
                col.add(pr.idle_cx, anc_fault(c, r), vec![]);
            }
            for q in (0..n).filter(|&q| !busy_data[q]) {
                let (d, l) = data_fault(q, r, Some(j));
                col.add(pr.idle_cx, d, l);
            }
        }
        for c in 0..m {
            col.add(pr.meas, anc_fault(c, r), vec![]);
        }
        for q in 0..n {
            let (d, l) = data_fault(q, r, Some(depth));
            col.add(pr.idle_meas, d, l);
        }
    }
    let problem = col.problem;
    if let Some(j) = (0..problem.num_mechanisms())
        .find(|&j| problem.columns[j].is_empty() && !problem.logical_columns[j].is_empty())
    {
        return Err(Error::InvalidCode(format!(
            "mechanism {j} flips logicals {:?} without triggering any detector",
            problem.logical_columns[j]
        )));
    }
    Ok(problem)
}
