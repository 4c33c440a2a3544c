use serde::{Deserialize, Serialize};

use super::{error_probabilities, ErrorProbabilities, NoiseModel};
use crate::error::{Error, Result};
use crate::lattice::LatticeCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    PrepPlus(usize),
    MeasX(usize),
    Cnot { control: usize, target: usize },
    Idle(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Prep,
    Cnot(usize),
    Meas,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timestep {
    pub kind: StepKind,
    pub round: usize,
    pub noiseless: bool,
    pub ops: Vec<Op>,
}

/// Repeated syndrome extraction. Qubits `0..n` are data, `n + c` is the
/// ancilla of check `c`. Ancillas are CNOT controls, data qubits targets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_data: usize,
    pub num_checks: usize,
    /// Noisy rounds; one more noiseless round follows them.
    pub rounds: usize,
    /// `layers[j]` lists the `(check, data qubit)` CNOTs of layer `j`.
    pub layers: Vec<Vec<(usize, usize)>>,
    pub timesteps: Vec<Timestep>,
    pub probs: ErrorProbabilities,
}

impl Circuit {
    pub fn cnot_depth(&self) -> usize {
        self.layers.len()
    }

    /// CNOTs per round.
    pub fn cnots_per_round(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    /// Checks the structural invariants: no qubit twice in a timestep and
    /// every check's CNOTs falling between its preparation and measurement.
    pub fn validate(&self) -> Result<()> {
        let total = self.num_data + self.num_checks;
        for (i, step) in self.timesteps.iter().enumerate() {
            let mut seen = vec![false; total];
            for op in &step.ops {
                let qubits: &[usize] = match op {
                    Op::PrepPlus(q) | Op::MeasX(q) | Op::Idle(q) => std::slice::from_ref(q),
                    Op::Cnot { control, target } => &[*control, *target],
                };
                for &q in qubits {
                    if seen[q] {
                        return Err(Error::Schedule(format!("qubit {q} used twice in timestep {i}")));
                    }
                    seen[q] = true;
                }
            }
        }
        Ok(())
    }
}

/// How CNOTs are assigned to layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchedulePolicy {
    /// Layer `i` holds every check's CNOT on its shape's `i`-th cell; a
    /// conflict is an error.
    CellOrder,
    /// Cell order when conflict-free, otherwise a proper edge colouring of
    /// the check-qubit graph with as many layers as its maximum degree.
    Auto,
}

/// Assigns each check-qubit incidence of `code` to a CNOT layer.
pub fn schedule_cnots(code: &LatticeCode, policy: SchedulePolicy) -> Result<Vec<Vec<(usize, usize)>>> {
    match cell_order(code) {
        Ok(layers) => Ok(layers),
        Err(e) if policy == SchedulePolicy::CellOrder => Err(e),
        Err(_) => Ok(edge_colouring(code)),
    }
}

fn cell_order(code: &LatticeCode) -> Result<Vec<Vec<(usize, usize)>>> {
    let mut layers: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut owner: Vec<Vec<Option<usize>>> = Vec::new();
    for (ci, check) in code.checks().iter().enumerate() {
        let mut used = Vec::new();
        for (slot, q) in check.slots.iter().enumerate() {
            let Some(q) = *q else { continue };
            if used.contains(&q) || check.support.binary_search(&q).is_err() {
                continue;
            }
            used.push(q);
            while layers.len() <= slot {
                layers.push(Vec::new());
                owner.push(vec![None; code.n()]);
            }
            if let Some(other) = owner[slot][q] {
                return Err(Error::Schedule(format!(
                    "checks anchored at {:?} and {:?} both need qubit {q} in layer {slot}",
                    code.checks()[other].anchor,
                    check.anchor
                )));
            }
            owner[slot][q] = Some(ci);
            layers[slot].push((ci, q));
        }
    }
    layers.retain(|l| !l.is_empty());
    Ok(layers)
}

/// Bipartite edge colouring with maximum-degree many colours, by
/// alternating-path recolouring.
fn edge_colouring(code: &LatticeCode) -> Vec<Vec<(usize, usize)>> {
    let m = code.num_checks();
    let n = code.n();
    let mut degree = vec![0usize; n];
    for c in code.checks() {
        for &q in &c.support {
            degree[q] += 1;
        }
    }
    let delta = code
        .checks()
        .iter()
        .map(|c| c.support.len())
        .chain(degree.iter().copied())
        .max()
        .unwrap_or(0);
    // at_check[c][colour] = qubit, at_qubit[q][colour] = check.
    let mut at_check = vec![vec![None::<usize>; delta]; m];
    let mut at_qubit = vec![vec![None::<usize>; delta]; n];
    for (ci, check) in code.checks().iter().enumerate() {
        for &q in &check.support {
            let a = (0..delta).find(|&c| at_check[ci][c].is_none()).expect("degree bound");
            if at_qubit[q][a].is_some() {
                let b = (0..delta).find(|&c| at_qubit[q][c].is_none()).expect("degree bound");
                // Swap colours a and b along the path leaving q by colour a.
                let mut path = Vec::new();
                let (mut node, mut on_qubit, mut colour) = (q, true, a);
                loop {
                    let next = if on_qubit { at_qubit[node][colour] } else { at_check[node][colour] };
                    let Some(next) = next else { break };
                    let (c_node, q_node) = if on_qubit { (next, node) } else { (node, next) };
                    path.push((c_node, q_node, colour));
                    node = next;
                    on_qubit = !on_qubit;
                    colour = if colour == a { b } else { a };
                }
                for &(c_node, q_node, col) in &path {
                    at_check[c_node][col] = None;
                    at_qubit[q_node][col] = None;
                }
                for &(c_node, q_node, col) in &path {
                    let swapped = if col == a { b } else { a };
                    at_check[c_node][swapped] = Some(q_node);
                    at_qubit[q_node][swapped] = Some(c_node);
                }
            }
            at_check[ci][a] = Some(q);
            at_qubit[q][a] = Some(ci);
        }
    }
    let mut layers = vec![Vec::new(); delta];
    for (ci, cols) in at_check.iter().enumerate() {
        for (colour, q) in cols.iter().enumerate() {
            if let Some(q) = q {
                layers[colour].push((ci, *q));
            }
        }
    }
    layers.retain(|l| !l.is_empty());
    layers
}

/// `rounds` noisy extraction rounds followed by one noiseless round.
pub fn build_syndrome_circuit(code: &LatticeCode, rounds: usize, model: &NoiseModel) -> Result<Circuit> {
    if rounds == 0 {
        return Err(Error::OutOfRange("at least one round is required".into()));
    }
    let probs = error_probabilities(model)?;
    let layers = schedule_cnots(code, SchedulePolicy::Auto)?;
    let n = code.n();
    let m = code.num_checks();
    let mut timesteps = Vec::new();
    for round in 0..=rounds {
        let noiseless = round == rounds;
        let mut prep: Vec<Op> = (0..m).map(|c| Op::PrepPlus(n + c)).collect();
        prep.extend((0..n).map(Op::Idle));
        timesteps.push(Timestep { kind: StepKind::Prep, round, noiseless, ops: prep });
        for (j, layer) in layers.iter().enumerate() {
            let mut busy = vec![false; n + m];
            let mut ops: Vec<Op> = layer
                .iter()
                .map(|&(c, q)| {
                    busy[n + c] = true;
                    busy[q] = true;
                    Op::Cnot { control: n + c, target: q }
                })
                .collect();
            ops.extend((0..n + m).filter(|&q| !busy[q]).map(Op::Idle));
            timesteps.push(Timestep { kind: StepKind::Cnot(j), round, noiseless, ops });
        }
        let mut meas: Vec<Op> = (0..m).map(|c| Op::MeasX(n + c)).collect();
        meas.extend((0..n).map(Op::Idle));
        timesteps.push(Timestep { kind: StepKind::Meas, round, noiseless, ops: meas });
    }
    let circuit = Circuit { num_data: n, num_checks: m, rounds, layers, timesteps, probs };
    circuit.validate()?;
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_code, table1_family, tee, vertical_domino, Boundary};

    fn assert_proper(code: &LatticeCode, layers: &[Vec<(usize, usize)>]) {
        let mut count = 0;
        for layer in layers {
            let mut qs: Vec<usize> = layer.iter().map(|x| x.1).collect();
            let mut cs: Vec<usize> = layer.iter().map(|x| x.0).collect();
            qs.sort();
            cs.sort();
            assert!(qs.windows(2).all(|w| w[0] != w[1]));
            assert!(cs.windows(2).all(|w| w[0] != w[1]));
            for &(c, q) in layer {
                assert!(code.checks()[c].support.contains(&q));
            }
            count += layer.len();
        }
        assert_eq!(count, code.total_check_weight());
    }

    #[test]
    fn depth_two_for_repetition_and_four_for_tee() {
        let rep = build_code(5, 1, &[vertical_domino()], Boundary::Periodic).unwrap();
        let c = build_syndrome_circuit(&rep, 3, &NoiseModel::generic(0.01)).unwrap();
        assert_eq!(c.cnot_depth(), 2);
        let ca = build_code(3, 10, &[tee()], Boundary::Periodic).unwrap();
        let c = build_syndrome_circuit(&ca, 7, &NoiseModel::generic(0.01)).unwrap();
        assert_eq!(c.cnot_depth(), 4);
        assert_eq!(c.cnots_per_round(), ca.total_check_weight());
        assert_eq!(c.timesteps.len(), 8 * (4 + 2));
        assert!(c.timesteps.last().unwrap().noiseless);
    }

    #[test]
    fn mixed_rows_fall_back_to_colouring() {
        for fam in crate::lattice::TABLE1.iter() {
            let code = fam.code(0);
            let layers = schedule_cnots(&code, SchedulePolicy::Auto).unwrap();
            assert_proper(&code, &layers);
            assert!(layers.len() <= 4, "{} needs {} layers", fam.name(), layers.len());
        }
        let code = table1_family(5).unwrap().planar_code(0);
        let layers = schedule_cnots(&code, SchedulePolicy::Auto).unwrap();
        assert_proper(&code, &layers);
    }

    #[test]
    fn cell_order_reports_conflicts() {
        let code = table1_family(1).unwrap().code(0);
        match schedule_cnots(&code, SchedulePolicy::CellOrder) {
            Err(Error::Schedule(msg)) => assert!(msg.contains("layer")),
            Ok(layers) => assert_proper(&code, &layers),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn colouring_is_proper_on_random_codes() {
        let shapes = crate::lattice::StabilizerShape::pointed_candidates(4);
        for i in 0..10 {
            let rows = vec![shapes[i].clone(), shapes[(i * 7 + 3) % 20].clone(), shapes[(i * 3 + 5) % 20].clone()];
            let code = build_code(5, 6, &rows, Boundary::Periodic).unwrap();
            let layers = edge_colouring(&code);
            assert_proper(&code, &layers);
        }
    }
}
