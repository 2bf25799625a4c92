//! Episode-level controller evaluation metrics: control cost (CC), distance covered
//! (DC), margin of satisfaction (MoS) and safety satisfaction (SAT).
//!
//! MoS and SAT always use classical robustness. Both range over the valid anchors
//! `t ∈ [0, T - 1 - horizon]` of the formula, since robustness is undefined past them.

use crate::formula::Formula;
use crate::monitor::Evaluator;
use crate::semantics::SemanticsConfig;
use crate::{Error, Result, Scalar, Trace};

/// States and controls of one episode, sharing the time axis.
#[derive(Debug, Clone)]
pub struct EpisodeTrace<T: Scalar> {
    states: Trace<T>,
    controls: Trace<T>,
    distance_signal: String,
}

impl<T: Scalar> EpisodeTrace<T> {
    pub fn new(states: Trace<T>, controls: Trace<T>, distance_signal: impl Into<String>) -> Result<Self> {
        let distance_signal = distance_signal.into();
        if states.len() != controls.len() {
            return Err(Error::InvalidTrace(format!(
                "states have {} steps but controls have {}",
                states.len(),
                controls.len()
            )));
        }
        if states.signal(&distance_signal).is_none() {
            return Err(Error::MissingSignal(distance_signal));
        }
        Ok(Self { states, controls, distance_signal })
    }

    pub fn states(&self) -> &Trace<T> {
        &self.states
    }

    pub fn controls(&self) -> &Trace<T> {
        &self.controls
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn distance_signal(&self) -> &str {
        &self.distance_signal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport<T> {
    pub cc: T,
    pub dc: T,
    pub mos: T,
    pub sat: u8,
}

/// Mean over time of the per-step mean squared control, `(1/T) Σ_t (1/q) Σ_i (u_t^i)²`.
pub fn control_cost<T: Scalar>(ep: &EpisodeTrace<T>) -> T {
    control_cost_of(&ep.controls)
}

pub(crate) fn control_cost_of<T: Scalar>(controls: &Trace<T>) -> T {
    let q = T::from_usize_lossy(controls.names().len());
    let len = controls.len();
    let columns: Vec<&[T]> = controls.names().iter().filter_map(|n| controls.signal(n)).collect();
    let total = (0..len).fold(T::zero(), |acc, t| {
        let sq = columns.iter().fold(T::zero(), |s, c| s + c[t] * c[t]);
        acc + sq / q
    });
    total / T::from_usize_lossy(len)
}

/// Final value of the distance signal.
pub fn distance_covered<T: Scalar>(ep: &EpisodeTrace<T>) -> T {
    let xs = ep.states.signal(&ep.distance_signal).expect("checked at construction");
    xs[xs.len() - 1]
}

fn classical_values<T: Scalar>(f: &Formula, states: &Trace<T>) -> Result<Vec<T>> {
    Evaluator::new(f, SemanticsConfig::classical()).robustness_all(states)
}

/// Mean classical robustness of `f` over all valid anchors.
pub fn margin_of_satisfaction<T: Scalar>(f: &Formula, ep: &EpisodeTrace<T>) -> Result<T> {
    mean_robustness(f, &ep.states, &SemanticsConfig::classical())
}

/// Mean robustness of `f` over the valid anchors of `trace` under `cfg`.
pub fn mean_robustness<T: Scalar>(f: &Formula, trace: &Trace<T>, cfg: &SemanticsConfig<T>) -> Result<T> {
    let values = Evaluator::new(f, cfg.clone()).robustness_all(trace)?;
    let n = T::from_usize_lossy(values.len());
    Ok(values.into_iter().fold(T::zero(), |a, v| a + v) / n)
}

/// 1 iff the minimum classical robustness of `safety` over all valid anchors is
/// strictly positive. A zero minimum counts as violated.
pub fn safety_sat<T: Scalar>(safety: &Formula, ep: &EpisodeTrace<T>) -> Result<u8> {
    let values = classical_values(safety, &ep.states)?;
    let min = values.into_iter().fold(T::infinity(), T::min);
    Ok(u8::from(min > T::zero()))
}

/// All four metrics. MoS is computed for `spec`, SAT for `safety`.
pub fn evaluate_episode<T: Scalar>(spec: &Formula, safety: &Formula, ep: &EpisodeTrace<T>) -> Result<MetricsReport<T>> {
    Ok(MetricsReport {
        cc: control_cost(ep),
        dc: distance_covered(ep),
        mos: margin_of_satisfaction(spec, ep)?,
        sat: safety_sat(safety, ep)?,
    })
}
