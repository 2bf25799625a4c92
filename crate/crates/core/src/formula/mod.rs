//! Bounded STL formulas: the AST, its canonical text form and structural analysis.
//!
//! Time is discrete with a unit step, so every temporal operator carries an integer
//! [`Interval`] of steps. Conjunctions and disjunctions are n-ary and kept flat: an
//! `And` never has an `And` child and an `Or` never has an `Or` child. This matters for
//! the smooth semantics, which aggregate all n children at once and would produce a
//! different value for a nested binary tree.

mod parser;
mod print;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::parse_formula;

/// Closed window `[lo, hi]` of time steps, `0 <= lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    /// Returns `None` when `lo > hi`.
    pub fn new(lo: usize, hi: usize) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    /// Number of steps in the window.
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Comparison operator of an atomic predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn as_str(&self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Cmp::Lt | Cmp::Gt)
    }

    /// True for `>` and `>=`, whose satisfaction set lies above the threshold.
    pub fn is_lower_bound(&self) -> bool {
        matches!(self, Cmp::Gt | Cmp::Ge)
    }
}

/// Atomic predicate over a single named signal.
#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    /// `signal op threshold`
    Comparison { signal: String, op: Cmp, threshold: f64 },
    /// `signal in [lo, hi]`, with `lo < hi`.
    Membership { signal: String, lo: f64, hi: f64 },
}

impl Predicate {
    pub fn comparison(signal: impl Into<String>, op: Cmp, threshold: f64) -> Self {
        Predicate::Comparison { signal: signal.into(), op, threshold }
    }

    /// Returns `None` unless `lo < hi` and both bounds are finite.
    pub fn membership(signal: impl Into<String>, lo: f64, hi: f64) -> Option<Self> {
        (lo.is_finite() && hi.is_finite() && lo < hi).then(|| Predicate::Membership { signal: signal.into(), lo, hi })
    }

    pub fn signal(&self) -> &str {
        match self {
            Predicate::Comparison { signal, .. } | Predicate::Membership { signal, .. } => signal,
        }
    }
}

/// STL formula with bounded temporal operators.
///
/// Build values through the associated constructors ([`Formula::and`], [`Formula::or`],
/// ...) or [`parse_formula`]; they maintain the flattening invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    True,
    Pred(Predicate),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Until(Interval, Box<Formula>, Box<Formula>),
    Eventually(Interval, Box<Formula>),
    Always(Interval, Box<Formula>),
}

impl Formula {
    pub fn pred(p: Predicate) -> Self {
        Formula::Pred(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// N-ary conjunction. Nested conjunctions are spliced in place and a single
    /// operand is returned unchanged.
    ///
    /// # Panics
    ///
    /// Panics if `operands` is empty.
    pub fn and(operands: impl IntoIterator<Item = Formula>) -> Self {
        let mut flat = Vec::new();
        for f in operands {
            match f {
                Formula::And(children) => flat.extend(children),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => panic!("conjunction needs at least one operand"),
            1 => flat.pop().unwrap(),
            _ => Formula::And(flat),
        }
    }

    /// N-ary disjunction, flattened like [`Formula::and`].
    ///
    /// # Panics
    ///
    /// Panics if `operands` is empty.
    pub fn or(operands: impl IntoIterator<Item = Formula>) -> Self {
        let mut flat = Vec::new();
        for f in operands {
            match f {
                Formula::Or(children) => flat.extend(children),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => panic!("disjunction needs at least one operand"),
            1 => flat.pop().unwrap(),
            _ => Formula::Or(flat),
        }
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn until(window: Interval, lhs: Formula, rhs: Formula) -> Self {
        Formula::Until(window, Box::new(lhs), Box::new(rhs))
    }

    pub fn eventually(window: Interval, f: Formula) -> Self {
        Formula::Eventually(window, Box::new(f))
    }

    pub fn always(window: Interval, f: Formula) -> Self {
        Formula::Always(window, Box::new(f))
    }

    /// Number of future steps the value at time `t` depends on.
    pub fn horizon(&self) -> usize {
        match self {
            Formula::True | Formula::Pred(_) => 0,
            Formula::Not(f) => f.horizon(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::horizon).max().unwrap_or(0),
            Formula::Implies(a, b) => a.horizon().max(b.horizon()),
            Formula::Eventually(i, f) | Formula::Always(i, f) => i.hi() + f.horizon(),
            Formula::Until(i, a, b) => i.hi() + a.horizon().max(b.horizon()),
        }
    }

    /// Names of all signals referenced by the formula.
    pub fn signals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Pred(p) = f {
                out.insert(p.signal().to_owned());
            }
        });
        out
    }

    /// Depth of the AST, counting a leaf as 1.
    pub fn depth(&self) -> usize {
        1 + self.children().map(Formula::depth).max().unwrap_or(0)
    }

    /// Direct subformulas in evaluation order.
    pub fn children(&self) -> impl Iterator<Item = &Formula> {
        let slice: Vec<&Formula> = match self {
            Formula::True | Formula::Pred(_) => vec![],
            Formula::Not(f) | Formula::Eventually(_, f) | Formula::Always(_, f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Until(_, a, b) => vec![a, b],
        };
        slice.into_iter()
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Checks the structural invariants (flat n-ary nodes with at least two children,
    /// nonempty signal names, finite constants).
    pub fn is_well_formed(&self) -> bool {
        let here = match self {
            Formula::And(fs) => fs.len() >= 2 && !fs.iter().any(|c| matches!(c, Formula::And(_))),
            Formula::Or(fs) => fs.len() >= 2 && !fs.iter().any(|c| matches!(c, Formula::Or(_))),
            Formula::Pred(Predicate::Comparison { signal, threshold, .. }) => {
                !signal.is_empty() && threshold.is_finite()
            }
            Formula::Pred(Predicate::Membership { signal, lo, hi }) => {
                !signal.is_empty() && lo.is_finite() && hi.is_finite() && lo < hi
            }
            _ => true,
        };
        here && self.children().all(Formula::is_well_formed)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(f, self)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_predicate(f, self)
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
