//! Quantitative Signal Temporal Logic monitoring.
//!
//! Formulas over named real-valued signals are parsed from text ([`parse_formula`]) and
//! evaluated to a robustness value whose sign tells satisfaction and whose magnitude
//! tells by how much. Three aggregation semantics are built in:
//!
//! * **classical**: exact `min`/`max`;
//! * **lse**: log-sum-exp smooth `min`/`max` with sharpness `η`;
//! * **sss**: mean of the operands minus an erf-smoothed estimate of their spread, which
//!   is smooth and lets every operand influence the result.
//!
//! Robustness can be computed offline over a whole [`Trace`] ([`Evaluator`],
//! [`robustness_offline`]) or online one sample at a time ([`OnlineMonitor`]); the two
//! agree bit for bit. The [`metrics`] module scores whole episodes.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below fix the common `f64` case.
//!
//! ```
//! use stlrob::{parse_formula, Config64, OnlineMonitor64, Sample, StepResult};
//!
//! let f = parse_formula("alw[0:2](x > 0)").unwrap();
//! let mut m = OnlineMonitor64::new(&f, Config64::classical());
//! let rho: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&x| m.step(&Sample::new().with("x", x)).unwrap()).collect();
//! assert_eq!(rho, [StepResult::WarmUp, StepResult::WarmUp, StepResult::Value(1.0)]);
//! ```

mod domain;
mod error;
pub mod formula;
pub mod metrics;
pub mod monitor;
mod scalar;
pub mod semantics;
mod trace;

pub use domain::{Domains, SignalDomain};
pub use error::{Error, ParseError, Result};
pub use formula::{parse_formula, Cmp, Formula, Interval, Predicate};
pub use metrics::{EpisodeTrace, MetricsReport};
pub use monitor::{robustness_offline, signed_distance, Evaluator, OnlineMonitor, StepResult, Verdict};
pub use scalar::Scalar;
pub use semantics::{conj, delta_max_smooth, disj, erf, neg, smooth_abs, SemanticsConfig, SemanticsKind, TemporalAgg};
pub use trace::{Sample, Trace};

pub type Config64 = SemanticsConfig<f64>;
pub type Trace64 = Trace<f64>;
pub type Sample64 = Sample<f64>;
pub type Evaluator64 = Evaluator<f64>;
pub type OnlineMonitor64 = OnlineMonitor<f64>;
pub type EpisodeTrace64 = EpisodeTrace<f64>;

pub type Config32 = SemanticsConfig<f32>;
pub type Trace32 = Trace<f32>;
pub type OnlineMonitor32 = OnlineMonitor<f32>;
