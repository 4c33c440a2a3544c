//! Noise models, syndrome-extraction circuits and their compilation into
//! space-time decoding problems.

mod circuit;
mod compile;

pub use circuit::{
    build_syndrome_circuit, schedule_cnots, Circuit, Op, SchedulePolicy, StepKind, Timestep,
};
pub use compile::{compile_decoding_problem, DecodingProblem};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Phenomenological,
    GenericCircuit,
    CatCircuit,
}

/// One of the three phase-flip noise models.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    /// Data flip (phenomenological) or operation infidelity (generic).
    pub p: f64,
    /// Measurement flip of the phenomenological model; `p` when absent.
    pub q: Option<f64>,
    pub nbar: f64,
    /// `kappa_1 / kappa_2`.
    pub kappa_ratio: f64,
    /// Durations in units of `1 / kappa_2`.
    pub t_prep: f64,
    pub t_meas: f64,
    pub t_cx: f64,
}

impl NoiseModel {
    pub fn phenomenological(p: f64, q: Option<f64>) -> Self {
        Self { kind: NoiseKind::Phenomenological, p, q, ..Self::base() }
    }

    pub fn generic(p: f64) -> Self {
        Self { kind: NoiseKind::GenericCircuit, p, ..Self::base() }
    }

    /// Cat-qubit model with all operations lasting `1 / kappa_2`.
    pub fn cat(nbar: f64, kappa_ratio: f64) -> Self {
        Self { kind: NoiseKind::CatCircuit, nbar, kappa_ratio, ..Self::base() }
    }

    fn base() -> Self {
        Self {
            kind: NoiseKind::GenericCircuit,
            p: 0.0,
            q: None,
            nbar: 11.0,
            kappa_ratio: 0.0,
            t_prep: 1.0,
            t_meas: 1.0,
            t_cx: 1.0,
        }
    }

    /// The physical parameter swept in experiments (`p` or `kappa_1/kappa_2`).
    pub fn abscissa(&self) -> f64 {
        match self.kind {
            NoiseKind::CatCircuit => self.kappa_ratio,
            _ => self.p,
        }
    }

    /// The same model with its swept parameter replaced.
    pub fn with_abscissa(&self, x: f64) -> Self {
        let mut m = *self;
        match m.kind {
            NoiseKind::CatCircuit => m.kappa_ratio = x,
            _ => {
                m.p = x;
                if m.kind == NoiseKind::Phenomenological {
                    m.q = None;
                }
            }
        }
        m
    }
}

/// Phase-flip probability of every noisy location.
///
/// `idle_*` apply to each qubit left idle during a preparation, CNOT or
/// measurement step. `prep` is a flip right after the ancilla is prepared,
/// `meas` a flipped outcome, and `cx_*` the three Z-type CNOT faults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorProbabilities {
    pub prep: f64,
    pub meas: f64,
    pub idle_prep: f64,
    pub idle_cx: f64,
    pub idle_meas: f64,
    pub cx_control: f64,
    pub cx_target: f64,
    pub cx_both: f64,
}

impl ErrorProbabilities {
    pub fn cnot_total(&self) -> f64 {
        self.cx_control + self.cx_target + self.cx_both
    }

    pub fn all(&self) -> [f64; 8] {
        [
            self.prep,
            self.meas,
            self.idle_prep,
            self.idle_cx,
            self.idle_meas,
            self.cx_control,
            self.cx_target,
            self.cx_both,
        ]
    }
}

pub fn error_probabilities(model: &NoiseModel) -> Result<ErrorProbabilities> {
    let probs = match model.kind {
        NoiseKind::Phenomenological => ErrorProbabilities {
            idle_prep: model.p,
            meas: model.q.unwrap_or(model.p),
            ..Default::default()
        },
        NoiseKind::GenericCircuit => {
            let p = model.p;
            ErrorProbabilities {
                prep: p,
                meas: p,
                idle_prep: p,
                idle_cx: p,
                idle_meas: p,
                cx_control: p / 3.0,
                cx_target: p / 3.0,
                cx_both: p / 3.0,
            }
        }
        NoiseKind::CatCircuit => {
            if model.nbar <= 0.0 || model.t_cx <= 0.0 {
                return Err(Error::InvalidModel("nbar and T_CX must be positive".into()));
            }
            let loss = |t: f64| model.nbar * model.kappa_ratio * t;
            let nonadiabatic = std::f64::consts::PI.powi(2) / (64.0 * model.nbar * model.t_cx);
            ErrorProbabilities {
                prep: loss(model.t_prep),
                meas: loss(model.t_meas),
                idle_prep: loss(model.t_prep),
                idle_cx: loss(model.t_cx),
                idle_meas: loss(model.t_meas),
                cx_control: loss(model.t_cx) + nonadiabatic,
                cx_target: 0.5 * loss(model.t_cx),
                cx_both: 0.5 * loss(model.t_cx),
            }
        }
    };
    if let Some(bad) = probs.all().iter().find(|p| !(0.0..=1.0).contains(*p) || p.is_nan()) {
        return Err(Error::InvalidModel(format!(
            "derived probability {bad} is outside [0, 1] for {model:?}"
        )));
    }
    Ok(probs)
}
