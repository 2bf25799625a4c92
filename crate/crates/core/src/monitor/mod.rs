//! Robustness of traces: atomic signed distances, offline evaluation at any anchor,
//! and the incremental [`OnlineMonitor`].

mod engine;
mod online;

use std::fmt;

pub use engine::{AggEvent, AggSite};
pub use online::{OnlineMonitor, StepResult};

use engine::{Eval, Memo, Program, Rows};

use crate::formula::{Formula, Predicate};
use crate::semantics::SemanticsConfig;
use crate::{Domains, Error, Result, Scalar, Trace};

/// Signed distance from `x` to the satisfaction set of `p`: positive inside, negative
/// outside, magnitude equal to the distance to the set boundary.
///
/// With `domains`, the distance is divided by the width of the signal's declared
/// domain, which makes it dimensionless.
pub fn signed_distance<T: Scalar>(x: T, p: &Predicate, domains: Option<&Domains>) -> Result<T> {
    let d = signed_distance_raw(x, p);
    match domains {
        None => Ok(d),
        Some(ds) => {
            let dom = ds.get(p.signal()).ok_or_else(|| Error::MissingDomain(p.signal().to_owned()))?;
            Ok(d / T::lit(dom.width()))
        }
    }
}

pub(crate) fn signed_distance_raw<T: Scalar>(x: T, p: &Predicate) -> T {
    match p {
        Predicate::Comparison { op, threshold, .. } => {
            let c = T::lit(*threshold);
            if op.is_lower_bound() {
                x - c
            } else {
                c - x
            }
        }
        Predicate::Membership { lo, hi, .. } => (x - T::lit(*lo)).min(T::lit(*hi) - x),
    }
}

/// Boolean reading of a robustness value. Zero is inconclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
    Marginal,
}

impl Verdict {
    pub fn of<T: Scalar>(rho: T) -> Self {
        if rho > T::zero() {
            Verdict::Satisfied
        } else if rho < T::zero() {
            Verdict::Violated
        } else {
            Verdict::Marginal
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::Marginal => "marginal",
        })
    }
}

struct TraceRows<'a, T> {
    columns: Vec<&'a [T]>,
}

impl<T: Scalar> Rows<T> for TraceRows<'_, T> {
    fn value(&self, time: usize, slot: usize) -> T {
        self.columns[slot][time]
    }
}

/// Offline robustness evaluation of one formula under one configuration.
#[derive(Debug, Clone)]
pub struct Evaluator<T: Scalar> {
    formula: Formula,
    cfg: SemanticsConfig<T>,
    program: Program<T>,
}

impl<T: Scalar> Evaluator<T> {
    pub fn new(formula: &Formula, cfg: SemanticsConfig<T>) -> Self {
        let program = Program::compile(formula, None).expect("compiling without domains cannot fail");
        Self { formula: formula.clone(), cfg, program }
    }

    /// Evaluator whose atomic robustness is normalized by `domains`. Every signal of
    /// the formula needs a domain.
    pub fn normalized(formula: &Formula, cfg: SemanticsConfig<T>, domains: &Domains) -> Result<Self> {
        let program = Program::compile(formula, Some(domains))?;
        Ok(Self { formula: formula.clone(), cfg, program })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn config(&self) -> &SemanticsConfig<T> {
        &self.cfg
    }

    pub fn horizon(&self) -> usize {
        self.program.horizon
    }

    /// Anchors `t` with `t + horizon <= len - 1`; empty when the trace is too short.
    pub fn valid_anchors(&self, trace: &Trace<T>) -> std::ops::Range<usize> {
        0..(trace.len() + 1).saturating_sub(self.program.horizon + 1)
    }

    fn rows<'a>(&self, trace: &'a Trace<T>) -> Result<TraceRows<'a, T>> {
        let columns = self
            .program
            .signals
            .iter()
            .map(|s| trace.column_index(s).map(|i| trace.column(i)).ok_or_else(|| Error::MissingSignal(s.clone())))
            .collect::<Result<_>>()?;
        Ok(TraceRows { columns })
    }

    fn check_anchor(&self, trace: &Trace<T>, t: usize) -> Result<()> {
        if t + self.program.horizon >= trace.len() {
            return Err(Error::TraceTooShort { len: trace.len(), t, horizon: self.program.horizon });
        }
        Ok(())
    }

    /// Robustness at anchor `t`.
    pub fn robustness(&self, trace: &Trace<T>, t: usize) -> Result<T> {
        self.robustness_observed(trace, t, |_| {})
    }

    /// Like [`Evaluator::robustness`], reporting every aggregation to `observer`.
    pub fn robustness_observed(&self, trace: &Trace<T>, t: usize, observer: impl FnMut(AggEvent<'_, T>)) -> Result<T> {
        self.check_anchor(trace, t)?;
        let rows = self.rows(trace)?;
        let mut memo = Memo::new(self.program.nodes.len());
        let mut eval = Eval { program: &self.program, cfg: &self.cfg, rows: &rows, memo: &mut memo, observer };
        Ok(eval.value(self.program.root(), t))
    }

    /// Robustness at every valid anchor, sharing intermediate results.
    pub fn robustness_all(&self, trace: &Trace<T>) -> Result<Vec<T>> {
        self.check_anchor(trace, 0)?;
        let rows = self.rows(trace)?;
        let mut memo = Memo::new(self.program.nodes.len());
        let mut eval = Eval {
            program: &self.program,
            cfg: &self.cfg,
            rows: &rows,
            memo: &mut memo,
            observer: |_: AggEvent<'_, T>| {},
        };
        Ok(self.valid_anchors(trace).map(|t| eval.value(self.program.root(), t)).collect())
    }
}

/// Robustness of `trace` against `f` at anchor `t`.
///
/// Requires `t + horizon(f) <= len - 1`; there is no truncated end-of-trace semantics.
pub fn robustness_offline<T: Scalar>(f: &Formula, trace: &Trace<T>, t: usize, cfg: &SemanticsConfig<T>) -> Result<T> {
    Evaluator::new(f, cfg.clone()).robustness(trace, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Cmp};
    use crate::semantics::TemporalAgg;
    use crate::SignalDomain;

    fn trace(cols: &[(&str, &[f64])]) -> Trace<f64> {
        Trace::from_columns(cols.iter().map(|(n, v)| (*n, v.to_vec()))).unwrap()
    }

    fn eval(text: &str, tr: &Trace<f64>, t: usize) -> Result<f64> {
        robustness_offline(&parse_formula(text).unwrap(), tr, t, &SemanticsConfig::classical())
    }

    #[test]
    fn signed_distance_examples() {
        let gt = Predicate::comparison("v", Cmp::Gt, 0.5);
        assert!((signed_distance(0.7f64, &gt, None).unwrap() - 0.2).abs() < 1e-15);
        let m = Predicate::membership("a", -1.0, 1.0).unwrap();
        assert!((signed_distance(0.2f64, &m, None).unwrap() - 0.8).abs() < 1e-15);
        let doms: Domains = [SignalDomain::new("a", -8.0, 8.0).unwrap()].into_iter().collect();
        assert!((signed_distance(0.2f64, &m, Some(&doms)).unwrap() - 0.05).abs() < 1e-15);
        assert_eq!(signed_distance(0.2, &gt, Some(&doms)), Err(Error::MissingDomain("v".into())));
    }

    #[test]
    fn strictness_does_not_change_robustness() {
        let lt = Predicate::comparison("x", Cmp::Lt, 1.0);
        let le = Predicate::comparison("x", Cmp::Le, 1.0);
        assert_eq!(signed_distance(0.25, &lt, None).unwrap(), signed_distance(0.25, &le, None).unwrap());
        assert_eq!(Verdict::of(0.0), Verdict::Marginal);
        assert_eq!(Verdict::of(-1e-300), Verdict::Violated);
    }

    #[test]
    fn offline_examples() {
        let x = trace(&[("x", &[1.0, 2.0, 3.0])]);
        assert_eq!(eval("alw[0:2](x>0)", &x, 0).unwrap(), 1.0);
        assert_eq!(eval("ev[0:2](x>2)", &x, 0).unwrap(), 1.0);
        let xy = trace(&[("x", &[1.0, 1.0, 1.0]), ("y", &[-1.0, -1.0, 1.0])]);
        assert_eq!(eval("(x>0) until[0:2] (y>0)", &xy, 0).unwrap(), 1.0);
        assert_eq!(eval("true", &x, 2).unwrap(), f64::INFINITY);
        assert_eq!(eval("(x > 2) implies (x > 0)", &x, 0).unwrap(), 1.0);
    }

    #[test]
    fn offline_errors() {
        let x = trace(&[("x", &[1.0, 2.0, 3.0])]);
        assert_eq!(eval("alw[0:2](x>0)", &x, 1), Err(Error::TraceTooShort { len: 3, t: 1, horizon: 2 }));
        assert_eq!(eval("y > 0", &x, 0), Err(Error::MissingSignal("y".into())));
    }

    #[test]
    fn robustness_all_matches_single_anchor() {
        let x = trace(&[("x", &[0.3, -1.0, 2.0, 0.5, 0.1]), ("y", &[1.0, 0.0, -0.5, 2.0, 1.5])]);
        let f = parse_formula("ev[0:1]((x > 0) and (alw[0:1](y > 0.2)))").unwrap();
        let ev = Evaluator::new(&f, SemanticsConfig::sss(0.3, 300.0).unwrap());
        let all = ev.robustness_all(&x).unwrap();
        assert_eq!(all.len(), 3);
        for (t, v) in all.iter().enumerate() {
            assert_eq!(v.to_bits(), ev.robustness(&x, t).unwrap().to_bits());
        }
    }

    #[test]
    fn pointwise_windows_are_exact() {
        let x = trace(&[("x", &[0.3, -1.0, 2.0, 0.5])]);
        let f = parse_formula("alw[0:3](x > 0)").unwrap();
        let cfg = SemanticsConfig::sss(0.3, 300.0).unwrap().with_temporal_agg(TemporalAgg::Pointwise);
        assert_eq!(robustness_offline(&f, &x, 0, &cfg).unwrap(), -1.0);
    }

    #[test]
    fn normalized_evaluator_requires_domains() {
        let f = parse_formula("(a in [-1, 1]) and (v > 0)").unwrap();
        let doms: Domains = [SignalDomain::new("a", -8.0, 8.0).unwrap()].into_iter().collect();
        let err = Evaluator::<f64>::normalized(&f, SemanticsConfig::classical(), &doms).unwrap_err();
        assert_eq!(err, Error::MissingDomain("v".into()));
    }
}
