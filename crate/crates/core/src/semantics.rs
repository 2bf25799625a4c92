//! Quantitative aggregation operators: negation, conjunction and disjunction under the
//! classical, log-sum-exp (LSE) and smoothened-summation-subtraction (SSS) semantics.
//!
//! Disjunction is always derived from conjunction by duality, `disj(ρ) = -conj(-ρ)`, so
//! De Morgan's law holds exactly for every semantics, including plugins that only
//! supply a conjunction.
//!
//! The `+∞` robustness of `true` is a sentinel: it is dropped from conjunctions (and
//! so dominates disjunctions) before any smooth arithmetic happens.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result, Scalar};

/// User-supplied conjunction semantics, registered by name.
///
/// `conj` only ever sees finite values and at least two of them; sentinels and the
/// single-operand case are handled before dispatch.
pub trait Aggregation<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;

    fn conj(&self, rho: &[T], cfg: &SemanticsConfig<T>) -> T;
}

#[derive(Clone)]
pub enum SemanticsKind<T: Scalar> {
    Classical,
    Lse,
    Sss,
    Plugin(Arc<dyn Aggregation<T>>),
}

impl<T: Scalar> SemanticsKind<T> {
    pub fn name(&self) -> &str {
        match self {
            SemanticsKind::Classical => "classical",
            SemanticsKind::Lse => "lse",
            SemanticsKind::Sss => "sss",
            SemanticsKind::Plugin(p) => p.name(),
        }
    }

    /// Resolves one of the built-in names `classical`, `lse` or `sss`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "classical" => Some(SemanticsKind::Classical),
            "lse" => Some(SemanticsKind::Lse),
            "sss" => Some(SemanticsKind::Sss),
            _ => None,
        }
    }
}

impl<T: Scalar> fmt::Debug for SemanticsKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsKind::Plugin(p) => write!(f, "Plugin({:?})", p.name()),
            other => f.write_str(other.name()),
        }
    }
}

impl<T: Scalar> PartialEq for SemanticsKind<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SemanticsKind::Plugin(a), SemanticsKind::Plugin(b)) => Arc::ptr_eq(a, b),
            (a, b) => std::mem::discriminant(a) == std::mem::discriminant(b),
        }
    }
}

/// How temporal windows (`ev`, `alw`, `until`) reduce their values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TemporalAgg {
    /// Windows reduce with the active semantics' conjunction/disjunction.
    #[default]
    Semantic,
    /// Windows always reduce with exact min/max; only boolean connectives are smoothed.
    Pointwise,
}

impl TemporalAgg {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "semantic" => Some(TemporalAgg::Semantic),
            "pointwise" => Some(TemporalAgg::Pointwise),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TemporalAgg::Semantic => "semantic",
            TemporalAgg::Pointwise => "pointwise",
        }
    }
}

/// Which aggregation semantics to use, with its parameters.
///
/// `mu` is the SSS smoothing of `|x|`, `eta` the sharpness of the LSE-style min/max
/// approximations. `beta` and `nu` are carried for plugin semantics and unused by
/// the built-ins.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticsConfig<T: Scalar> {
    kind: SemanticsKind<T>,
    mu: T,
    eta: T,
    beta: T,
    nu: T,
    temporal_agg: TemporalAgg,
}

pub const DEFAULT_MU: f64 = 0.3;
pub const DEFAULT_ETA: f64 = 300.0;
pub const DEFAULT_BETA: f64 = 1.0;
pub const DEFAULT_NU: f64 = 3.0;

impl<T: Scalar> Default for SemanticsConfig<T> {
    fn default() -> Self {
        Self::classical()
    }
}

impl<T: Scalar> SemanticsConfig<T> {
    pub fn new(kind: SemanticsKind<T>) -> Self {
        Self {
            kind,
            mu: T::lit(DEFAULT_MU),
            eta: T::lit(DEFAULT_ETA),
            beta: T::lit(DEFAULT_BETA),
            nu: T::lit(DEFAULT_NU),
            temporal_agg: TemporalAgg::Semantic,
        }
    }

    pub fn classical() -> Self {
        Self::new(SemanticsKind::Classical)
    }

    pub fn lse(eta: T) -> Result<Self> {
        Self::new(SemanticsKind::Lse).with_eta(eta)
    }

    pub fn sss(mu: T, eta: T) -> Result<Self> {
        Self::new(SemanticsKind::Sss).with_mu(mu)?.with_eta(eta)
    }

    /// Built-in semantics by name, or a plugin from `registry`.
    pub fn by_name(name: &str, registry: Option<&PluginRegistry<T>>) -> Result<Self> {
        SemanticsKind::builtin(name)
            .or_else(|| registry.and_then(|r| r.get(name)).map(SemanticsKind::Plugin))
            .map(Self::new)
            .ok_or_else(|| Error::UnknownSemantics(name.to_owned()))
    }

    pub fn with_mu(mut self, mu: T) -> Result<Self> {
        if !(mu > T::zero() && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be positive and finite, got {mu}")));
        }
        self.mu = mu;
        Ok(self)
    }

    pub fn with_eta(mut self, eta: T) -> Result<Self> {
        if !(eta > T::zero() && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("eta must be positive and finite, got {eta}")));
        }
        self.eta = eta;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: T) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_nu(mut self, nu: T) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_temporal_agg(mut self, agg: TemporalAgg) -> Self {
        self.temporal_agg = agg;
        self
    }

    pub fn kind(&self) -> &SemanticsKind<T> {
        &self.kind
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn temporal_agg(&self) -> TemporalAgg {
        self.temporal_agg
    }

    /// Conjunction under this configuration. See [`conj`].
    pub fn conj(&self, rho: &[T]) -> Result<T> {
        conj(rho, self)
    }

    /// Disjunction under this configuration. See [`disj`].
    pub fn disj(&self, rho: &[T]) -> Result<T> {
        disj(rho, self)
    }
}

/// Named plugin semantics.
pub struct PluginRegistry<T: Scalar> {
    plugins: HashMap<String, Arc<dyn Aggregation<T>>>,
}

impl<T: Scalar> Default for PluginRegistry<T> {
    fn default() -> Self {
        Self { plugins: HashMap::new() }
    }
}

impl<T: Scalar> PluginRegistry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `plugin` under its own name, replacing any previous entry.
    /// Built-in names cannot be shadowed.
    pub fn register(&mut self, plugin: Arc<dyn Aggregation<T>>) -> Result<()> {
        let name = plugin.name().to_owned();
        if SemanticsKind::<T>::builtin(&name).is_some() {
            return Err(Error::InvalidParameter(format!("`{name}` is a built-in semantics")));
        }
        self.plugins.insert(name, plugin);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Aggregation<T>>> {
        self.plugins.get(name).cloned()
    }
}

pub fn neg<T: Scalar>(r: T) -> T {
    -r
}

/// Gauss error function, accurate to a few ulps in `f64`.
///
/// Uses the positive-term series `erf(x) = 2/√π · e^{-x²} · Σ (2x²)^k x / (2k+1)!!`
/// below `|x| = 3` and a continued fraction for `erfc` above.
pub fn erf<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let three = T::lit(3.0);
    let v = if ax < three {
        let two_x2 = ax * ax + ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut k = T::one();
        for _ in 0..200 {
            term = term * two_x2 / (k + k + T::one());
            sum = sum + term;
            if term <= sum * T::epsilon() {
                break;
            }
            k = k + T::one();
        }
        T::FRAC_2_SQRT_PI() * (-ax * ax).exp() * sum
    } else if ax.is_infinite() {
        T::one()
    } else {
        T::one() - erfc_continued_fraction(ax)
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}

// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), evaluated bottom-up.
fn erfc_continued_fraction<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    let mut f = x;
    for k in (1..=60).rev() {
        f = x + T::from_usize_lossy(k) * half / f;
    }
    (-x * x).exp() / (T::PI().sqrt() * f)
}

/// Smooth approximation of `|x|`: `x · erf(μx)`. Even in `x`, with value in `[0, |x|]`.
pub fn smooth_abs<T: Scalar>(x: T, mu: T) -> T {
    x * erf(mu * x)
}

/// Smooth estimate of the spread `max(ρ) - min(ρ)`:
///
/// ```text
/// δ̂ = ln(n + Σ_{i≠j} exp(η(ρ_i - ρ_j))) / η
/// ```
///
/// The double sum factors as `(Σ e^{ηρ_i})(Σ e^{-ηρ_j})`, which is evaluated shifted by
/// the max and the min so that no exponent is positive. The result lies in
/// `[δ, δ + 2 ln(n)/η]`.
pub fn delta_max_smooth<T: Scalar>(rho: &[T], eta: T) -> Result<T> {
    if rho.len() < 2 {
        return Err(Error::TooFewValues(rho.len()));
    }
    Ok(delta_max_unchecked(rho, eta))
}

fn delta_max_unchecked<T: Scalar>(rho: &[T], eta: T) -> T {
    let (lo, hi) = min_max(rho);
    let above: T = rho.iter().fold(T::zero(), |acc, &r| acc + (eta * (r - hi)).exp());
    let below: T = rho.iter().fold(T::zero(), |acc, &r| acc + (eta * (lo - r)).exp());
    (hi - lo) + (above.ln() + below.ln()) / eta
}

fn min_max<T: Scalar>(rho: &[T]) -> (T, T) {
    rho.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &r| (lo.min(r), hi.max(r)))
}

/// Conjunction of `rho` under `cfg`.
///
/// * classical: `min(ρ)`
/// * lse: `-(1/η) ln Σ exp(-η ρ_i)`
/// * sss: `(Σ ρ_i - δ̂ · erf(μ δ̂)) / n` with `δ̂` from [`delta_max_smooth`]
///
/// A single operand is returned unchanged. `+∞` operands are ignored and a `-∞`
/// operand makes the result `-∞`.
pub fn conj<T: Scalar>(rho: &[T], cfg: &SemanticsConfig<T>) -> Result<T> {
    if rho.is_empty() {
        return Err(Error::EmptyAggregation);
    }
    Ok(conj_nonempty(rho, &cfg.kind, cfg))
}

/// Disjunction of `rho` under `cfg`, defined as `-conj(-ρ)`.
pub fn disj<T: Scalar>(rho: &[T], cfg: &SemanticsConfig<T>) -> Result<T> {
    if rho.is_empty() {
        return Err(Error::EmptyAggregation);
    }
    Ok(disj_nonempty(rho, &cfg.kind, cfg))
}

pub(crate) fn disj_nonempty<T: Scalar>(rho: &[T], kind: &SemanticsKind<T>, cfg: &SemanticsConfig<T>) -> T {
    let negated: Vec<T> = rho.iter().map(|&r| neg(r)).collect();
    neg(conj_nonempty(&negated, kind, cfg))
}

pub(crate) fn conj_nonempty<T: Scalar>(rho: &[T], kind: &SemanticsKind<T>, cfg: &SemanticsConfig<T>) -> T {
    if rho.len() == 1 {
        return rho[0];
    }
    if rho.iter().any(|r| r.is_nan()) {
        return T::nan();
    }
    if rho.iter().any(|&r| r == T::neg_infinity()) {
        return T::neg_infinity();
    }
    let finite: Cow<'_, [T]> = if rho.iter().any(|&r| r == T::infinity()) {
        Cow::Owned(rho.iter().copied().filter(|&r| r != T::infinity()).collect())
    } else {
        Cow::Borrowed(rho)
    };
    match finite.len() {
        0 => return T::infinity(),
        1 => return finite[0],
        _ => {}
    }
    let rho = &*finite;
    match kind {
        SemanticsKind::Classical => min_max(rho).0,
        SemanticsKind::Lse => {
            let (lo, _) = min_max(rho);
            let eta = cfg.eta;
            let s = rho.iter().fold(T::zero(), |acc, &r| acc + (-eta * (r - lo)).exp());
            lo - s.ln() / eta
        }
        SemanticsKind::Sss => {
            let n = T::from_usize_lossy(rho.len());
            let sum = rho.iter().fold(T::zero(), |acc, &r| acc + r);
            let spread = delta_max_unchecked(rho, cfg.eta);
            (sum - smooth_abs(spread, cfg.mu)) / n
        }
        SemanticsKind::Plugin(p) => p.conj(rho, cfg),
    }
}
