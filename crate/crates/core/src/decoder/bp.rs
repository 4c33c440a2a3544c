use super::BPConfig;
use crate::gf2::BitVector;
use crate::noise::DecodingProblem;

/// Channel log-likelihood ratio, clamped away from infinities.
pub(super) fn llr(p: f64) -> f64 {
    let p = p.clamp(1e-300, 1.0 - 1e-16);
    ((1.0 - p) / p).ln()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpOutput {
    /// Posterior log-likelihood ratio per mechanism; negative means "fired".
    pub soft: Vec<f64>,
    pub hard: BitVector,
    pub converged: bool,
    pub iterations: usize,
}

/// Edge lists in check-major order plus the transpose index.
pub(super) struct TannerGraph {
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
}

impl TannerGraph {
    pub(super) fn new(problem: &DecodingProblem) -> Self {
        let m = problem.num_detectors;
        let nvars = problem.num_mechanisms();
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (v, col) in problem.columns.iter().enumerate() {
            for &d in col {
                rows[d as usize].push(v);
            }
        }
        let mut check_ptr = vec![0];
        let mut edge_var = Vec::new();
        for r in &rows {
            edge_var.extend_from_slice(r);
            check_ptr.push(edge_var.len());
        }
        let mut per_var: Vec<Vec<usize>> = vec![Vec::new(); nvars];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v].push(e);
        }
        let mut var_ptr = vec![0];
        let mut var_edges = Vec::new();
        for es in &per_var {
            var_edges.extend_from_slice(es);
            var_ptr.push(var_edges.len());
        }
        Self { check_ptr, edge_var, var_ptr, var_edges }
    }

    fn num_checks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    fn num_vars(&self) -> usize {
        self.var_ptr.len() - 1
    }
}

pub(super) struct BpState {
    to_check: Vec<f64>,
    to_var: Vec<f64>,
}

impl BpState {
    pub(super) fn new(g: &TannerGraph) -> Self {
        Self { to_check: vec![0.0; g.edge_var.len()], to_var: vec![0.0; g.edge_var.len()] }
    }

    pub(super) fn run(
        &mut self,
        g: &TannerGraph,
        channel: &[f64],
        syndrome: &BitVector,
        cfg: &BPConfig,
    ) -> BpOutput {
        for (e, &v) in g.edge_var.iter().enumerate() {
            self.to_check[e] = channel[v];
        }
        let mut soft = channel.to_vec();
        let mut hard = BitVector::zeros(g.num_vars());
        for it in 1..=cfg.max_iters {
            for c in 0..g.num_checks() {
                let edges = g.check_ptr[c]..g.check_ptr[c + 1];
                let mut negative = syndrome.get(c);
                let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                for e in edges.clone() {
                    let x = self.to_check[e];
                    negative ^= x < 0.0;
                    let a = x.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        arg = e;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for e in edges {
                    let mag = if e == arg { min2 } else { min1 };
                    let neg = negative ^ (self.to_check[e] < 0.0);
                    let msg = cfg.scale * mag;
                    self.to_var[e] = if neg { -msg } else { msg };
                }
            }
            for v in 0..g.num_vars() {
                let es = &g.var_edges[g.var_ptr[v]..g.var_ptr[v + 1]];
                let total = channel[v] + es.iter().map(|&e| self.to_var[e]).sum::<f64>();
                for &e in es {
                    self.to_check[e] = total - self.to_var[e];
                }
                soft[v] = total;
                hard.set(v, total < 0.0);
            }
            let satisfied = (0..g.num_checks()).all(|c| {
                let parity = g.edge_var[g.check_ptr[c]..g.check_ptr[c + 1]]
                    .iter()
                    .fold(false, |acc, &v| acc ^ hard.get(v));
                parity == syndrome.get(c)
            });
            if satisfied {
                return BpOutput { soft, hard, converged: true, iterations: it };
            }
        }
        BpOutput { soft, hard, converged: false, iterations: cfg.max_iters }
    }
}
