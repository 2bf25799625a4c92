use std::fmt::{self, Formatter};

use super::{Formula, Predicate};

// Every operand of a compound node is parenthesized, so the output parses back to the
// same tree without any precedence reasoning.

pub(super) fn write_predicate(f: &mut Formatter<'_>, p: &Predicate) -> fmt::Result {
    match p {
        Predicate::Comparison { signal, op, threshold } => {
            write!(f, "{signal} {} {threshold}", op.as_str())
        }
        Predicate::Membership { signal, lo, hi } => write!(f, "{signal} in [{lo}, {hi}]"),
    }
}

pub(super) fn write_formula(f: &mut Formatter<'_>, formula: &Formula) -> fmt::Result {
    match formula {
        Formula::True => f.write_str("true"),
        Formula::Pred(p) => write_predicate(f, p),
        Formula::Not(x) => write!(f, "not ({x})"),
        Formula::And(xs) => write_nary(f, "and", xs),
        Formula::Or(xs) => write_nary(f, "or", xs),
        Formula::Implies(a, b) => write!(f, "({a}) implies ({b})"),
        Formula::Until(i, a, b) => write!(f, "({a}) until[{}:{}] ({b})", i.lo(), i.hi()),
        Formula::Eventually(i, x) => write!(f, "ev[{}:{}] ({x})", i.lo(), i.hi()),
        Formula::Always(i, x) => write!(f, "alw[{}:{}] ({x})", i.lo(), i.hi()),
    }
}

fn write_nary(f: &mut Formatter<'_>, keyword: &str, xs: &[Formula]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, " {keyword} ")?;
        }
        write!(f, "({x})")?;
    }
    Ok(())
}
