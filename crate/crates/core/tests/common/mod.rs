//! Test-only oracles and generators. Nothing here calls into the production
//! evaluator; the naive evaluator below is written straight from the recursive
//! definition of classical robustness.

#![allow(dead_code)]

use rand::Rng;
use stlrob::{Cmp, Formula, Interval, Predicate, Trace};

pub const SIGNALS: [&str; 3] = ["x", "y", "z"];

fn value(trace: &Trace<f64>, signal: &str, t: usize) -> f64 {
    trace.signal(signal).expect("signal present")[t]
}

fn atom_distance(p: &Predicate, x: f64) -> f64 {
    match p {
        Predicate::Comparison { op: Cmp::Gt | Cmp::Ge, threshold, .. } => x - threshold,
        Predicate::Comparison { op: Cmp::Lt | Cmp::Le, threshold, .. } => threshold - x,
        Predicate::Membership { lo, hi, .. } => {
            let below = x - lo;
            let above = hi - x;
            if below < above {
                below
            } else {
                above
            }
        }
    }
}

/// Classical robustness by direct recursion, with no caching and no shared code.
pub fn naive_rho(f: &Formula, trace: &Trace<f64>, t: usize) -> f64 {
    let min = |a: f64, b: f64| if b < a { b } else { a };
    let max = |a: f64, b: f64| if b > a { b } else { a };
    match f {
        Formula::True => f64::INFINITY,
        Formula::Pred(p) => atom_distance(p, value(trace, p.signal(), t)),
        Formula::Not(g) => -naive_rho(g, trace, t),
        Formula::And(gs) => gs.iter().map(|g| naive_rho(g, trace, t)).fold(f64::INFINITY, min),
        Formula::Or(gs) => gs.iter().map(|g| naive_rho(g, trace, t)).fold(f64::NEG_INFINITY, max),
        Formula::Implies(a, b) => max(-naive_rho(a, trace, t), naive_rho(b, trace, t)),
        Formula::Eventually(i, g) => {
            (t + i.lo()..=t + i.hi()).map(|s| naive_rho(g, trace, s)).fold(f64::NEG_INFINITY, max)
        }
        Formula::Always(i, g) => (t + i.lo()..=t + i.hi()).map(|s| naive_rho(g, trace, s)).fold(f64::INFINITY, min),
        Formula::Until(i, a, b) => {
            let mut best = f64::NEG_INFINITY;
            for tp in t + i.lo()..=t + i.hi() {
                let hold = (t..=tp).map(|s| naive_rho(a, trace, s)).fold(f64::INFINITY, min);
                best = max(best, min(naive_rho(b, trace, tp), hold));
            }
            best
        }
    }
}

/// Boolean satisfaction by brute force.
pub fn satisfies(f: &Formula, trace: &Trace<f64>, t: usize) -> bool {
    match f {
        Formula::True => true,
        Formula::Pred(Predicate::Comparison { signal, op, threshold }) => {
            let x = value(trace, signal, t);
            match op {
                Cmp::Lt => x < *threshold,
                Cmp::Le => x <= *threshold,
                Cmp::Gt => x > *threshold,
                Cmp::Ge => x >= *threshold,
            }
        }
        Formula::Pred(Predicate::Membership { signal, lo, hi }) => {
            let x = value(trace, signal, t);
            *lo <= x && x <= *hi
        }
        Formula::Not(g) => !satisfies(g, trace, t),
        Formula::And(gs) => gs.iter().all(|g| satisfies(g, trace, t)),
        Formula::Or(gs) => gs.iter().any(|g| satisfies(g, trace, t)),
        Formula::Implies(a, b) => !satisfies(a, trace, t) || satisfies(b, trace, t),
        Formula::Eventually(i, g) => (t + i.lo()..=t + i.hi()).any(|s| satisfies(g, trace, s)),
        Formula::Always(i, g) => (t + i.lo()..=t + i.hi()).all(|s| satisfies(g, trace, s)),
        Formula::Until(i, a, b) => {
            (t + i.lo()..=t + i.hi()).any(|tp| satisfies(b, trace, tp) && (t..=tp).all(|s| satisfies(a, trace, s)))
        }
    }
}

fn random_interval(rng: &mut impl Rng, max_window: usize) -> Interval {
    let lo = rng.gen_range(0..=max_window);
    let hi = rng.gen_range(lo..=max_window);
    Interval::new(lo, hi).unwrap()
}

fn random_predicate(rng: &mut impl Rng) -> Formula {
    let signal = SIGNALS[rng.gen_range(0..SIGNALS.len())];
    let c = (rng.gen_range(-200..=200) as f64) / 100.0;
    if rng.gen_bool(0.2) {
        let w = rng.gen_range(1..=150) as f64 / 100.0;
        Formula::Pred(Predicate::membership(signal, c - w, c + w).unwrap())
    } else {
        let op = [Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge][rng.gen_range(0..4)];
        Formula::Pred(Predicate::comparison(signal, op, c))
    }
}

/// Random well-formed formula of depth at most `depth` with windows inside
/// `[0, max_window]`.
pub fn random_formula(rng: &mut impl Rng, depth: usize, max_window: usize) -> Formula {
    if depth <= 1 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.05) { Formula::True } else { random_predicate(rng) };
    }
    let d = depth - 1;
    match rng.gen_range(0..8) {
        0 => Formula::not(random_formula(rng, d, max_window)),
        1 => Formula::and((0..rng.gen_range(2..=3)).map(|_| random_formula(rng, d, max_window)).collect::<Vec<_>>()),
        2 => Formula::or((0..rng.gen_range(2..=3)).map(|_| random_formula(rng, d, max_window)).collect::<Vec<_>>()),
        3 => Formula::implies(random_formula(rng, d, max_window), random_formula(rng, d, max_window)),
        4 => Formula::eventually(random_interval(rng, max_window), random_formula(rng, d, max_window)),
        5 => Formula::always(random_interval(rng, max_window), random_formula(rng, d, max_window)),
        _ => Formula::until(
            random_interval(rng, max_window),
            random_formula(rng, d, max_window),
            random_formula(rng, d, max_window),
        ),
    }
}

/// Steps tried, coarse to fine, when looking for the asymptotic regime of a
/// central difference.
pub const STEP_LADDER: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];

/// Error ratio of central differences of `f` along coordinate `i` at `x`,
/// with steps `h` and `h / 2`, against the Richardson extrapolation of the
/// `h / 2` and `h / 4` differences. A second-order smooth function gives a
/// ratio near 4.
pub fn halving_ratio(f: &dyn Fn(&[f64]) -> f64, x: &[f64], i: usize, h: f64) -> f64 {
    let d = |step: f64| {
        let mut up = x.to_vec();
        let mut down = x.to_vec();
        up[i] += step;
        down[i] -= step;
        (f(&up) - f(&down)) / (2.0 * step)
    };
    let (d1, d2, d4) = (d(h), d(h / 2.0), d(h / 4.0));
    let reference = (4.0 * d4 - d2) / 3.0;
    (d1 - reference).abs() / (d2 - reference).abs()
}

/// True when some step of [`STEP_LADDER`] shows second-order convergence,
/// i.e. a halving ratio inside `[3, 5]`.
pub fn second_order_somewhere(f: &dyn Fn(&[f64]) -> f64, x: &[f64], i: usize) -> bool {
    STEP_LADDER.iter().any(|&h| (3.0..=5.0).contains(&halving_ratio(f, x, i, h)))
}

/// Index of the largest entry.
pub fn argmax(x: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if *v > x[best] {
            best = i;
        }
    }
    best
}

/// Trace over [`SIGNALS`] with values uniform in `[-2, 2]`.
pub fn random_trace(rng: &mut impl Rng, len: usize) -> Trace<f64> {
    Trace::from_columns(SIGNALS.iter().map(|s| (*s, (0..len).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<f64>>())))
        .unwrap()
}
