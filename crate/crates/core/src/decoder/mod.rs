//! BP+OSD decoding of [`DecodingProblem`]s.
//!
//! [`Decoder`] owns the Tanner graph and all scratch buffers, so one
//! instance per worker thread serves any number of shots without
//! allocation churn. The free functions are one-shot conveniences.

mod bp;
mod osd;

use serde::{Deserialize, Serialize};

use crate::gf2::BitVector;
use crate::noise::DecodingProblem;

pub use bp::BpOutput;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BPConfig {
    pub max_iters: usize,
    /// Multiplier applied to every check-to-variable message.
    pub scale: f64,
}

impl Default for BPConfig {
    fn default() -> Self {
        Self { max_iters: 10_000, scale: 0.625 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OsdMethod {
    /// Single flips and pairs among the first `order` non-pivot columns.
    CombinationSweep,
    /// Every subset of the first `order` non-pivot columns.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OSDConfig {
    pub order: usize,
    pub method: OsdMethod,
    /// Also try single flips in the combination sweep.
    pub include_singles: bool,
    /// Run OSD even when BP already satisfies the syndrome.
    pub always: bool,
    /// Pick the logical class with the largest summed likelihood over the
    /// swept candidates instead of the single most likely candidate.
    pub degeneracy_aware: bool,
}

impl Default for OSDConfig {
    fn default() -> Self {
        Self { order: 60, method: OsdMethod::CombinationSweep, include_singles: true, always: false, degeneracy_aware: true }
    }
}

impl OSDConfig {
    pub fn order0() -> Self {
        Self { order: 0, ..Self::default() }
    }

    /// Number of candidates tried beyond the OSD-0 solution when at least
    /// `order` non-pivot columns are available.
    pub fn configurations(&self) -> u128 {
        let w = self.order as u128;
        match self.method {
            OsdMethod::CombinationSweep => w * w.saturating_sub(1) / 2 + if self.include_singles { w } else { 0 },
            OsdMethod::Exhaustive => (1u128 << self.order.min(127)) - 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub correction: BitVector,
    pub converged: bool,
    pub used_osd: bool,
    pub predicted_logical: BitVector,
}

/// Reusable BP+OSD decoder bound to one problem.
pub struct Decoder<'a> {
    problem: &'a DecodingProblem,
    bp_cfg: BPConfig,
    osd_cfg: OSDConfig,
    graph: bp::TannerGraph,
    bp_state: bp::BpState,
    /// `ln((1 - p) / p)` of each mechanism's prior.
    weights: Vec<f64>,
}

impl<'a> Decoder<'a> {
    pub fn new(problem: &'a DecodingProblem, bp_cfg: BPConfig, osd_cfg: OSDConfig) -> Self {
        assert!(bp_cfg.scale > 0.0 && bp_cfg.scale <= 1.0, "BP scale must lie in (0, 1]");
        assert!(bp_cfg.max_iters >= 1, "BP needs at least one iteration");
        let graph = bp::TannerGraph::new(problem);
        let weights: Vec<f64> = problem.priors.iter().map(|&p| bp::llr(p)).collect();
        let bp_state = bp::BpState::new(&graph);
        Self { problem, bp_cfg, osd_cfg, graph, bp_state, weights }
    }

    pub fn problem(&self) -> &DecodingProblem {
        self.problem
    }

    pub fn bp(&mut self, syndrome: &BitVector) -> BpOutput {
        assert_eq!(syndrome.len(), self.problem.num_detectors, "syndrome length");
        self.bp_state.run(&self.graph, &self.weights, syndrome, &self.bp_cfg)
    }

    pub fn osd(&self, syndrome: &BitVector, soft: &[f64]) -> BitVector {
        osd::postprocess(self.problem, &self.weights, syndrome, soft, &self.osd_cfg)
    }

    pub fn decode(&mut self, syndrome: &BitVector) -> DecodeOutcome {
        let out = self.bp(syndrome);
        let (correction, used_osd) = if out.converged && !self.osd_cfg.always {
            (out.hard, false)
        } else {
            (self.osd(syndrome, &out.soft), true)
        };
        let predicted_logical = self.problem.logical_of(&correction);
        DecodeOutcome { correction, converged: out.converged, used_osd, predicted_logical }
    }
}

pub fn bp_min_sum(problem: &DecodingProblem, syndrome: &BitVector, cfg: &BPConfig) -> BpOutput {
    Decoder::new(problem, *cfg, OSDConfig::default()).bp(syndrome)
}

/// Ordered-statistics post-processing of BP soft output `soft`
/// (posterior log-likelihood ratios).
pub fn osd_postprocess(
    problem: &DecodingProblem,
    syndrome: &BitVector,
    soft: &[f64],
    cfg: &OSDConfig,
) -> BitVector {
    let weights: Vec<f64> = problem.priors.iter().map(|&p| bp::llr(p)).collect();
    osd::postprocess(problem, &weights, syndrome, soft, cfg)
}

pub fn decode(
    problem: &DecodingProblem,
    syndrome: &BitVector,
    bp_cfg: &BPConfig,
    osd_cfg: &OSDConfig,
) -> DecodeOutcome {
    Decoder::new(problem, *bp_cfg, *osd_cfg).decode(syndrome)
}

#[cfg(test)]
mod tests;
