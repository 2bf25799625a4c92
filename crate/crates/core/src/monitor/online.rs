use std::collections::VecDeque;

use super::engine::{AggEvent, Eval, Memo, Program, Rows};
use crate::formula::Formula;
use crate::semantics::SemanticsConfig;
use crate::{Domains, Error, Result, Sample, Scalar};

/// Outcome of feeding one sample to an [`OnlineMonitor`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepResult<T> {
    /// Fewer than `horizon + 1` samples seen so far.
    WarmUp,
    Value(T),
}

impl<T: Copy> StepResult<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            StepResult::WarmUp => None,
            StepResult::Value(v) => Some(*v),
        }
    }
}

#[derive(Debug, Clone)]
struct Window<T> {
    base: usize,
    rows: VecDeque<Vec<T>>,
}

impl<T: Scalar> Rows<T> for Window<T> {
    fn value(&self, time: usize, slot: usize) -> T {
        self.rows[time - self.base][slot]
    }
}

/// Incremental robustness monitor over a stream of samples.
///
/// Keeps the last `horizon + 1` samples. Once the window is full, each step reports
/// the robustness anchored `horizon` steps in the past, which equals the offline value
/// of the same trace at that anchor bit for bit. Subformula values already computed
/// for earlier anchors are reused.
#[derive(Clone)]
pub struct OnlineMonitor<T: Scalar> {
    formula: Formula,
    cfg: SemanticsConfig<T>,
    program: Program<T>,
    window: Window<T>,
    memo: Memo<T>,
    consumed: usize,
}

impl<T: Scalar> std::fmt::Debug for OnlineMonitor<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OnlineMonitor")
            .field("formula", &self.formula.to_string())
            .field("semantics", &self.cfg.kind().name())
            .field("horizon", &self.program.horizon)
            .field("consumed", &self.consumed)
            .finish()
    }
}

impl<T: Scalar> OnlineMonitor<T> {
    pub fn new(formula: &Formula, cfg: SemanticsConfig<T>) -> Self {
        let program = Program::compile(formula, None).expect("compiling without domains cannot fail");
        Self::with_program(formula, cfg, program)
    }

    /// Monitor with atomic robustness normalized by `domains`.
    pub fn normalized(formula: &Formula, cfg: SemanticsConfig<T>, domains: &Domains) -> Result<Self> {
        let program = Program::compile(formula, Some(domains))?;
        Ok(Self::with_program(formula, cfg, program))
    }

    fn with_program(formula: &Formula, cfg: SemanticsConfig<T>, program: Program<T>) -> Self {
        let memo = Memo::new(program.nodes.len());
        let window = Window { base: 0, rows: VecDeque::with_capacity(program.horizon + 1) };
        Self { formula: formula.clone(), cfg, program, window, memo, consumed: 0 }
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

    /// Number of samples consumed since creation or the last reset.
    pub fn steps(&self) -> usize {
        self.consumed
    }

    /// Consumes one sample. On error the monitor is left unchanged.
    pub fn step(&mut self, sample: &Sample<T>) -> Result<StepResult<T>> {
        let row = self
            .program
            .signals
            .iter()
            .map(|s| match sample.get(s) {
                None => Err(Error::MissingSignal(s.clone())),
                Some(v) if !v.is_finite() => Err(Error::NonFinite { signal: s.clone(), step: self.consumed }),
                Some(v) => Ok(v),
            })
            .collect::<Result<Vec<T>>>()?;

        let h = self.program.horizon;
        self.window.rows.push_back(row);
        self.consumed += 1;
        if self.window.rows.len() > h + 1 {
            self.window.rows.pop_front();
            self.window.base += 1;
        }
        if self.consumed <= h {
            return Ok(StepResult::WarmUp);
        }
        let anchor = self.window.base;
        self.memo.advance_to(anchor);
        let mut eval = Eval {
            program: &self.program,
            cfg: &self.cfg,
            rows: &self.window,
            memo: &mut self.memo,
            observer: |_: AggEvent<'_, T>| {},
        };
        Ok(StepResult::Value(eval.value(self.program.root(), anchor)))
    }

    /// Clears the window and the step counter; formula and configuration are kept.
    pub fn reset(&mut self) {
        self.window.rows.clear();
        self.window.base = 0;
        self.memo.clear();
        self.consumed = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn x(v: f64) -> Sample<f64> {
        Sample::new().with("x", v)
    }

    #[test]
    fn always_window_warms_up() {
        let f = parse_formula("alw[0:2](x>0)").unwrap();
        let mut m = OnlineMonitor::new(&f, SemanticsConfig::classical());
        assert_eq!(m.horizon(), 2);
        assert_eq!(m.step(&x(1.0)).unwrap(), StepResult::WarmUp);
        assert_eq!(m.step(&x(2.0)).unwrap(), StepResult::WarmUp);
        assert_eq!(m.step(&x(3.0)).unwrap(), StepResult::Value(1.0));
        assert_eq!(m.step(&x(-1.0)).unwrap(), StepResult::Value(-1.0));
    }

    #[test]
    fn predicate_has_no_warm_up() {
        let f = parse_formula("v > 0.5").unwrap();
        let mut m = OnlineMonitor::new(&f, SemanticsConfig::classical());
        let r: f64 = m.step(&Sample::new().with("v", 0.4)).unwrap().value().unwrap();
        assert!((r + 0.1).abs() < 1e-15);
    }

    #[test]
    fn hopper_constant_stream() {
        let f = parse_formula("ev[0:15](v > 0.5) and alw[0:20]((z > 0.7) and (abs(a) < 1))").unwrap();
        let mut m = OnlineMonitor::new(&f, SemanticsConfig::classical());
        assert_eq!(m.horizon(), 20);
        let s = Sample::new().with("v", 0.6).with("z", 0.9).with("a", 0.0);
        for _ in 0..20 {
            assert_eq!(m.step(&s).unwrap(), StepResult::WarmUp);
        }
        let r: f64 = m.step(&s).unwrap().value().unwrap();
        assert!((r - 0.1).abs() < 1e-12, "{r}");
    }

    #[test]
    fn missing_signal_is_reported_at_step_time() {
        let f = parse_formula("(x > 0) and (y > 0)").unwrap();
        let mut m = OnlineMonitor::new(&f, SemanticsConfig::classical());
        assert_eq!(m.step(&x(1.0)), Err(Error::MissingSignal("y".into())));
        assert_eq!(m.steps(), 0);
        assert!(m.step(&x(1.0).with("y", f64::NAN)).is_err());
    }

    #[test]
    fn reset_restarts_warm_up() {
        let f = parse_formula("ev[0:3](x > 0)").unwrap();
        let cfg = SemanticsConfig::sss(0.3, 300.0).unwrap();
        let mut m = OnlineMonitor::new(&f, cfg);
        m.reset();
        let xs = [0.5, -0.2, 1.5, 0.0, 3.0, -2.0];
        let first: Vec<_> = xs.iter().map(|&v| m.step(&x(v)).unwrap()).collect();
        m.step(&x(9.0)).unwrap();
        m.reset();
        assert_eq!(m.steps(), 0);
        let second: Vec<_> = xs.iter().map(|&v| m.step(&x(v)).unwrap()).collect();
        assert_eq!(first, second);
        m.reset();
        m.step(&x(1.0)).unwrap();
        m.reset();
        assert_eq!(m.step(&x(1.0)).unwrap(), StepResult::WarmUp);
    }
}
