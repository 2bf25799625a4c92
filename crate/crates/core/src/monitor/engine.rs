//! Memoized bottom-up evaluation of a compiled formula.
//!
//! A formula is flattened into an arena of nodes. The value of node `n` at absolute
//! time `τ` depends only on samples in `[τ, τ + horizon(n)]`, so it is computed once and
//! cached. Offline evaluation caches over the whole trace; the online monitor slides
//! the cache forward with its sample window. Both paths run the exact same arithmetic
//! for a given (node, time), which is what makes the online stream bit-identical to
//! offline evaluation.

use std::collections::VecDeque;

use super::signed_distance_raw;
use crate::formula::{Formula, Predicate};
use crate::semantics::{conj_nonempty, disj_nonempty, SemanticsConfig, SemanticsKind, TemporalAgg};
use crate::{Domains, Error, Result, Scalar};

#[derive(Debug, Clone)]
pub(crate) enum Node<T> {
    True,
    Atom { slot: usize, pred: Predicate, scale: Option<T> },
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Implies(usize, usize),
    Eventually { lo: usize, hi: usize, body: usize },
    Always { lo: usize, hi: usize, body: usize },
    Until { lo: usize, hi: usize, lhs: usize, rhs: usize },
}

/// Formula lowered to an arena, children before parents; the root is last.
#[derive(Debug, Clone)]
pub(crate) struct Program<T> {
    pub nodes: Vec<Node<T>>,
    pub signals: Vec<String>,
    pub horizon: usize,
}

impl<T: Scalar> Program<T> {
    pub fn compile(f: &Formula, domains: Option<&Domains>) -> Result<Self> {
        let mut p = Program { nodes: Vec::new(), signals: Vec::new(), horizon: f.horizon() };
        p.lower(f, domains)?;
        Ok(p)
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    fn slot(&mut self, signal: &str) -> usize {
        match self.signals.iter().position(|s| s == signal) {
            Some(i) => i,
            None => {
                self.signals.push(signal.to_owned());
                self.signals.len() - 1
            }
        }
    }

    fn lower(&mut self, f: &Formula, domains: Option<&Domains>) -> Result<usize> {
        let node = match f {
            Formula::True => Node::True,
            Formula::Pred(p) => {
                let scale = match domains {
                    None => None,
                    Some(d) => {
                        let dom = d.get(p.signal()).ok_or_else(|| Error::MissingDomain(p.signal().to_owned()))?;
                        Some(T::lit(dom.width()))
                    }
                };
                Node::Atom { slot: self.slot(p.signal()), pred: p.clone(), scale }
            }
            Formula::Not(x) => Node::Not(self.lower(x, domains)?),
            Formula::And(xs) => Node::And(xs.iter().map(|x| self.lower(x, domains)).collect::<Result<_>>()?),
            Formula::Or(xs) => Node::Or(xs.iter().map(|x| self.lower(x, domains)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => {
                let a = self.lower(a, domains)?;
                Node::Implies(a, self.lower(b, domains)?)
            }
            Formula::Eventually(i, x) => Node::Eventually { lo: i.lo(), hi: i.hi(), body: self.lower(x, domains)? },
            Formula::Always(i, x) => Node::Always { lo: i.lo(), hi: i.hi(), body: self.lower(x, domains)? },
            Formula::Until(i, a, b) => {
                let lhs = self.lower(a, domains)?;
                let rhs = self.lower(b, domains)?;
                Node::Until { lo: i.lo(), hi: i.hi(), lhs, rhs }
            }
        };
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }
}

/// Source of signal values by absolute time and signal slot.
pub(crate) trait Rows<T> {
    fn value(&self, time: usize, slot: usize) -> T;
}

/// Which operator an aggregation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggSite {
    And,
    Or,
    Implies,
    Eventually,
    Always,
    /// The inner `min(ψ(t'), inf φ)` of an until.
    UntilStep,
    /// The outer `sup` over `t'` of an until.
    Until,
}

impl AggSite {
    /// True for reductions over a time window.
    pub fn is_temporal(&self) -> bool {
        matches!(self, AggSite::Eventually | AggSite::Always | AggSite::UntilStep | AggSite::Until)
    }
}

/// One aggregation performed during evaluation, reported to an observer.
#[derive(Debug, Clone, Copy)]
pub struct AggEvent<'a, T> {
    pub site: AggSite,
    /// `true` for a conjunction, `false` for a disjunction.
    pub conjunctive: bool,
    pub time: usize,
    pub inputs: &'a [T],
    pub output: T,
}

/// Per-node cache of values for times `base..`.
#[derive(Debug, Clone)]
pub(crate) struct Memo<T> {
    base: usize,
    slots: Vec<VecDeque<Option<T>>>,
}

impl<T: Scalar> Memo<T> {
    pub fn new(nodes: usize) -> Self {
        Self { base: 0, slots: (0..nodes).map(|_| VecDeque::new()).collect() }
    }

    /// Forgets every cached value before `base`.
    pub fn advance_to(&mut self, base: usize) {
        debug_assert!(base >= self.base);
        let drop = base - self.base;
        for s in &mut self.slots {
            let n = drop.min(s.len());
            s.drain(..n);
        }
        self.base = base;
    }

    pub fn clear(&mut self) {
        self.base = 0;
        for s in &mut self.slots {
            s.clear();
        }
    }
}

pub(crate) struct Eval<'a, T: Scalar, R, O> {
    pub program: &'a Program<T>,
    pub cfg: &'a SemanticsConfig<T>,
    pub rows: &'a R,
    pub memo: &'a mut Memo<T>,
    pub observer: O,
}

impl<T, R, O> Eval<'_, T, R, O>
where
    T: Scalar,
    R: Rows<T>,
    O: FnMut(AggEvent<'_, T>),
{
    pub fn value(&mut self, node: usize, time: usize) -> T {
        let idx = time - self.memo.base;
        if let Some(Some(v)) = self.memo.slots[node].get(idx) {
            return *v;
        }
        let v = self.compute(node, time);
        let slot = &mut self.memo.slots[node];
        if slot.len() <= idx {
            slot.resize(idx + 1, None);
        }
        slot[idx] = Some(v);
        v
    }

    fn reduce(&mut self, site: AggSite, conjunctive: bool, time: usize, inputs: &[T]) -> T {
        let classical = SemanticsKind::Classical;
        let kind = if site.is_temporal() && self.cfg.temporal_agg() == TemporalAgg::Pointwise {
            &classical
        } else {
            self.cfg.kind()
        };
        let output =
            if conjunctive { conj_nonempty(inputs, kind, self.cfg) } else { disj_nonempty(inputs, kind, self.cfg) };
        (self.observer)(AggEvent { site, conjunctive, time, inputs, output });
        output
    }

    fn compute(&mut self, node: usize, time: usize) -> T {
        let program = self.program;
        match &program.nodes[node] {
            Node::True => T::infinity(),
            Node::Atom { slot, pred, scale } => {
                let d = signed_distance_raw(self.rows.value(time, *slot), pred);
                match scale {
                    Some(w) => d / *w,
                    None => d,
                }
            }
            Node::Not(c) => -self.value(*c, time),
            Node::And(cs) => {
                let vals: Vec<T> = cs.iter().map(|&c| self.value(c, time)).collect();
                self.reduce(AggSite::And, true, time, &vals)
            }
            Node::Or(cs) => {
                let vals: Vec<T> = cs.iter().map(|&c| self.value(c, time)).collect();
                self.reduce(AggSite::Or, false, time, &vals)
            }
            Node::Implies(a, b) => {
                let vals = [-self.value(*a, time), self.value(*b, time)];
                self.reduce(AggSite::Implies, false, time, &vals)
            }
            Node::Eventually { lo, hi, body } => {
                let vals: Vec<T> = (time + lo..=time + hi).map(|s| self.value(*body, s)).collect();
                self.reduce(AggSite::Eventually, false, time, &vals)
            }
            Node::Always { lo, hi, body } => {
                let vals: Vec<T> = (time + lo..=time + hi).map(|s| self.value(*body, s)).collect();
                self.reduce(AggSite::Always, true, time, &vals)
            }
            Node::Until { lo, hi, lhs, rhs } => {
                let mut candidates = Vec::with_capacity(hi - lo + 1);
                for tp in time + lo..=time + hi {
                    let hold: Vec<T> = (time..=tp).map(|s| self.value(*lhs, s)).collect();
                    let held = self.reduce(AggSite::UntilStep, true, time, &hold);
                    let step = [self.value(*rhs, tp), held];
                    candidates.push(self.reduce(AggSite::UntilStep, true, time, &step));
                }
                self.reduce(AggSite::Until, false, time, &candidates)
            }
        }
    }
}
