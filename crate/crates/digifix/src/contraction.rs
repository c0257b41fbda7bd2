//! Contraction-type conditions on digital metric spaces and their checkers.
//!
//! A condition couples a self-map `f` to an inequality over ordered point
//! pairs. [`check_condition`] scans every ordered pair and reports the
//! verdict, the first violating pair, and the tightest margin. Eight
//! condition shapes are supported:
//!
//! * `banach(alpha)` — `d(fx, fy) < alpha * d(x, y)`, strict, over distinct
//!   pairs, `alpha` in `[0, 1)`. Distinct pairs only: at `x = y` both sides
//!   vanish and a strict inequality could never hold.
//! * `quasi(c)` — `d(fx, fy) <= c * max{d(x,y), d(x,fx), d(y,fy), d(x,fy),
//!   d(y,fx)}`, `c` in `[0, 1/2)`.
//! * `sum_type(a, b)` — `d(fx, fy) <= a*(d(x,fx) + d(y,fy)) + b*(d(x,fy) +
//!   d(y,fx))`, nonnegative, `a + b < 1/2`.
//! * `rational(a, b, c)` — `d(fx, fy) + a*d(y, fx) <= b*d(x, fx)^2 / d(x, y)
//!   + c*d(x, y)` over distinct pairs, nonnegative, `b + c < 1`.
//! * `expansive(delta3)` — `d(fx, fy) >= delta3 * d(x, y)`, `delta3 >= 0`.
//! * `oaa_g(a, b, c)` — three clauses, each over all ordered pairs:
//!   `d(fx,fy) <= a*d(x,y)`, `<= b*(d(x,fx) + d(y,fy))` and
//!   `<= c*(d(x,fy) + d(y,fx))` jointly, nonnegative, `a + b + c < 1`.
//! * `oaa_iterated(e, f, g, h, i)` — a five-coefficient bound on the twice
//!   iterated map: `d(ffx, ffy) <= e*d(fx,fy) + f*d(fx,ffx) + g*d(fy,ffy) +
//!   h*d(fx,ffy) + i*d(fy,ffx)`, nonnegative, sum `< 1`.
//! * `saljah(k1, k2, k3)` — `d(fx, fy) <= k1^2*d(x,y) + k2^2*(d(x,fx) +
//!   d(y,fy)) + k3^2*sqrt(d(x,y) * min{d(x,fx), d(y,fy)})`, nonnegative,
//!   `k1^2 + k2^2 + k3^2 < 1`.
//!
//! Coefficient domains are enforced at construction, so a `ConditionSpec`
//! in hand is always well-formed. Verdicts apply the shared absolute
//! tolerance; reports carry raw margins.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::SelfMap;
use crate::metrics::DigitalMetricSpace;
use crate::scalar::{default_tolerance, Real};

/// Errors from condition construction and coefficient analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConditionError {
    #[error("invalid {family} coefficients: {detail}")]
    InvalidCoefficients {
        family: ConditionFamily,
        detail: String,
    },
    #[error("{operation} does not support the {family} family")]
    UnsupportedFamily {
        family: ConditionFamily,
        operation: &'static str,
    },
    #[error("the bound min_separation / diameter needs at least two points")]
    SingletonSpace,
    #[error("unknown condition variant `{0}`")]
    UnknownVariant(String),
}

/// Tag for the eight condition shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionFamily {
    Banach,
    Quasi,
    SumType,
    Rational,
    Expansive,
    OaaG,
    OaaIterated,
    Saljah,
}

impl ConditionFamily {
    pub const ALL: [ConditionFamily; 8] = [
        ConditionFamily::Banach,
        ConditionFamily::Quasi,
        ConditionFamily::SumType,
        ConditionFamily::Rational,
        ConditionFamily::Expansive,
        ConditionFamily::OaaG,
        ConditionFamily::OaaIterated,
        ConditionFamily::Saljah,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionFamily::Banach => "banach",
            ConditionFamily::Quasi => "quasi",
            ConditionFamily::SumType => "sum_type",
            ConditionFamily::Rational => "rational",
            ConditionFamily::Expansive => "expansive",
            ConditionFamily::OaaG => "oaa_g",
            ConditionFamily::OaaIterated => "oaa_iterated",
            ConditionFamily::Saljah => "saljah",
        }
    }
}

impl fmt::Display for ConditionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionFamily {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConditionFamily::ALL
            .into_iter()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| ConditionError::UnknownVariant(s.to_string()))
    }
}

/// Coefficients of one condition shape. Build values through the
/// [`ConditionSpec`] constructors so the domain constraints hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditionKind<T: Real> {
    Banach { alpha: T },
    Quasi { c: T },
    SumType { a: T, b: T },
    Rational { a: T, b: T, c: T },
    Expansive { delta3: T },
    OaaG { a: T, b: T, c: T },
    OaaIterated { e: T, f: T, g: T, h: T, i: T },
    Saljah { k1: T, k2: T, k3: T },
}

/// A validated condition: shape plus coefficients inside the legal domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionSpec<T: Real> {
    kind: ConditionKind<T>,
}

fn half<T: Real>() -> T {
    T::from_f64(0.5).expect("0.5 converts into the scalar type")
}

fn nonneg<T: Real>(v: T) -> bool {
    v.is_finite() && v >= T::zero()
}

impl<T: Real> ConditionSpec<T> {
    pub fn banach(alpha: T) -> Result<Self, ConditionError> {
        if !(nonneg(alpha) && alpha < T::one()) {
            return Err(invalid(ConditionFamily::Banach, "alpha must lie in [0, 1)"));
        }
        Ok(Self::wrap(ConditionKind::Banach { alpha }))
    }

    pub fn quasi(c: T) -> Result<Self, ConditionError> {
        if !(nonneg(c) && c < half()) {
            return Err(invalid(ConditionFamily::Quasi, "c must lie in [0, 1/2)"));
        }
        Ok(Self::wrap(ConditionKind::Quasi { c }))
    }

    pub fn sum_type(a: T, b: T) -> Result<Self, ConditionError> {
        if !(nonneg(a) && nonneg(b) && a + b < half()) {
            return Err(invalid(
                ConditionFamily::SumType,
                "a, b must be nonnegative with a + b < 1/2",
            ));
        }
        Ok(Self::wrap(ConditionKind::SumType { a, b }))
    }

    pub fn rational(a: T, b: T, c: T) -> Result<Self, ConditionError> {
        if !(nonneg(a) && nonneg(b) && nonneg(c) && b + c < T::one()) {
            return Err(invalid(
                ConditionFamily::Rational,
                "a, b, c must be nonnegative with b + c < 1",
            ));
        }
        Ok(Self::wrap(ConditionKind::Rational { a, b, c }))
    }

    pub fn expansive(delta3: T) -> Result<Self, ConditionError> {
        if !nonneg(delta3) {
            return Err(invalid(
                ConditionFamily::Expansive,
                "delta3 must be nonnegative and finite",
            ));
        }
        Ok(Self::wrap(ConditionKind::Expansive { delta3 }))
    }

    pub fn oaa_g(a: T, b: T, c: T) -> Result<Self, ConditionError> {
        if !(nonneg(a) && nonneg(b) && nonneg(c) && a + b + c < T::one()) {
            return Err(invalid(
                ConditionFamily::OaaG,
                "a, b, c must be nonnegative with a + b + c < 1",
            ));
        }
        Ok(Self::wrap(ConditionKind::OaaG { a, b, c }))
    }

    pub fn oaa_iterated(e: T, f: T, g: T, h: T, i: T) -> Result<Self, ConditionError> {
        let all_nonneg = nonneg(e) && nonneg(f) && nonneg(g) && nonneg(h) && nonneg(i);
        if !(all_nonneg && e + f + g + h + i < T::one()) {
            return Err(invalid(
                ConditionFamily::OaaIterated,
                "coefficients must be nonnegative and sum below 1",
            ));
        }
        Ok(Self::wrap(ConditionKind::OaaIterated { e, f, g, h, i }))
    }

    pub fn saljah(k1: T, k2: T, k3: T) -> Result<Self, ConditionError> {
        let squares = k1 * k1 + k2 * k2 + k3 * k3;
        if !(nonneg(k1) && nonneg(k2) && nonneg(k3) && squares < T::one()) {
            return Err(invalid(
                ConditionFamily::Saljah,
                "k1, k2, k3 must be nonnegative with k1^2 + k2^2 + k3^2 < 1",
            ));
        }
        Ok(Self::wrap(ConditionKind::Saljah { k1, k2, k3 }))
    }

    /// Validates an explicit kind. The typed constructors are sugar over this.
    pub fn from_kind(kind: ConditionKind<T>) -> Result<Self, ConditionError> {
        match kind {
            ConditionKind::Banach { alpha } => Self::banach(alpha),
            ConditionKind::Quasi { c } => Self::quasi(c),
            ConditionKind::SumType { a, b } => Self::sum_type(a, b),
            ConditionKind::Rational { a, b, c } => Self::rational(a, b, c),
            ConditionKind::Expansive { delta3 } => Self::expansive(delta3),
            ConditionKind::OaaG { a, b, c } => Self::oaa_g(a, b, c),
            ConditionKind::OaaIterated { e, f, g, h, i } => Self::oaa_iterated(e, f, g, h, i),
            ConditionKind::Saljah { k1, k2, k3 } => Self::saljah(k1, k2, k3),
        }
    }

    fn wrap(kind: ConditionKind<T>) -> Self {
        ConditionSpec { kind }
    }

    pub fn kind(&self) -> &ConditionKind<T> {
        &self.kind
    }

    pub fn family(&self) -> ConditionFamily {
        match self.kind {
            ConditionKind::Banach { .. } => ConditionFamily::Banach,
            ConditionKind::Quasi { .. } => ConditionFamily::Quasi,
            ConditionKind::SumType { .. } => ConditionFamily::SumType,
            ConditionKind::Rational { .. } => ConditionFamily::Rational,
            ConditionKind::Expansive { .. } => ConditionFamily::Expansive,
            ConditionKind::OaaG { .. } => ConditionFamily::OaaG,
            ConditionKind::OaaIterated { .. } => ConditionFamily::OaaIterated,
            ConditionKind::Saljah { .. } => ConditionFamily::Saljah,
        }
    }

    /// Coefficients in declaration order, for display and serialization.
    pub fn coefficients(&self) -> Vec<T> {
        match self.kind {
            ConditionKind::Banach { alpha } => vec![alpha],
            ConditionKind::Quasi { c } => vec![c],
            ConditionKind::SumType { a, b } => vec![a, b],
            ConditionKind::Rational { a, b, c } => vec![a, b, c],
            ConditionKind::Expansive { delta3 } => vec![delta3],
            ConditionKind::OaaG { a, b, c } => vec![a, b, c],
            ConditionKind::OaaIterated { e, f, g, h, i } => vec![e, f, g, h, i],
            ConditionKind::Saljah { k1, k2, k3 } => vec![k1, k2, k3],
        }
    }
}

impl<T: Real> fmt::Display for ConditionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family())?;
        for (i, c) in self.coefficients().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn invalid(family: ConditionFamily, detail: &str) -> ConditionError {
    ConditionError::InvalidCoefficients {
        family,
        detail: detail.to_string(),
    }
}

/// Outcome of a condition scan over ordered pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport<T: Real> {
    pub holds: bool,
    /// First violating ordered pair in scan order; present iff `holds` is
    /// false.
    pub witness: Option<(usize, usize)>,
    /// Pair with the smallest margin, first in scan order among ties;
    /// `None` when no pair was scanned.
    pub tightest: Option<(usize, usize)>,
    /// Raw slack of the inequality at the tightest pair, `+inf` when no pair
    /// was scanned. Positive means the inequality holds with room.
    pub margin: T,
    pub pairs_checked: usize,
}

/// Checks `cond` for `f` on `space` with the default tolerance.
pub fn check_condition<T: Real>(
    space: &DigitalMetricSpace<T>,
    f: &SelfMap,
    cond: &ConditionSpec<T>,
) -> CheckReport<T> {
    check_condition_with(space, f, cond, default_tolerance())
}

/// Checks `cond` for `f` on `space` with an explicit tolerance.
///
/// Panics if the map size does not match the space.
pub fn check_condition_with<T: Real>(
    space: &DigitalMetricSpace<T>,
    f: &SelfMap,
    cond: &ConditionSpec<T>,
    tol: T,
) -> CheckReport<T> {
    assert_eq!(space.len(), f.len(), "map must cover the space");
    check_condition_partial(space, |i| Some(f.apply(i)), cond, tol)
}

/// Checks `cond` over the pairs where a partial point assignment is defined.
///
/// Pairs with an undefined image (and, for the iterated shape, an undefined
/// second image) are skipped. This is how map rules on truncated windows of
/// infinite images are checked: the verdict covers exactly the representable
/// pairs.
pub fn check_condition_partial<T, F>(
    space: &DigitalMetricSpace<T>,
    f: F,
    cond: &ConditionSpec<T>,
    tol: T,
) -> CheckReport<T>
where
    T: Real,
    F: Fn(usize) -> Option<usize>,
{
    let n = space.len();
    let strict = matches!(cond.kind, ConditionKind::Banach { .. });
    let mut pairs_checked = 0usize;
    let mut min_margin = T::infinity();
    let mut tightest = None;
    let mut witness = None;
    for i in 0..n {
        let Some(fi) = f(i) else { continue };
        for j in 0..n {
            let Some(fj) = f(j) else { continue };
            let Some(margin) = pair_margin(space, &f, &cond.kind, i, j, fi, fj) else {
                continue;
            };
            pairs_checked += 1;
            if margin < min_margin {
                min_margin = margin;
                tightest = Some((i, j));
            }
            let violated = if strict {
                !(margin > tol)
            } else {
                margin < -tol
            };
            if violated && witness.is_none() {
                witness = Some((i, j));
            }
        }
    }
    CheckReport {
        holds: witness.is_none(),
        witness,
        tightest,
        margin: min_margin,
        pairs_checked,
    }
}

/// Slack of the inequality at one ordered pair; `None` when the pair is not
/// scanned for this shape.
fn pair_margin<T, F>(
    space: &DigitalMetricSpace<T>,
    f: &F,
    kind: &ConditionKind<T>,
    i: usize,
    j: usize,
    fi: usize,
    fj: usize,
) -> Option<T>
where
    T: Real,
    F: Fn(usize) -> Option<usize>,
{
    let d = |a: usize, b: usize| space.distance(a, b);
    let margin = match *kind {
        ConditionKind::Banach { alpha } => {
            if i == j {
                return None;
            }
            alpha * d(i, j) - d(fi, fj)
        }
        ConditionKind::Quasi { c } => {
            let kernel = d(i, j)
                .max(d(i, fi))
                .max(d(j, fj))
                .max(d(i, fj))
                .max(d(j, fi));
            c * kernel - d(fi, fj)
        }
        ConditionKind::SumType { a, b } => {
            a * (d(i, fi) + d(j, fj)) + b * (d(i, fj) + d(j, fi)) - d(fi, fj)
        }
        ConditionKind::Rational { a, b, c } => {
            if i == j {
                return None;
            }
            let dij = d(i, j);
            b * d(i, fi) * d(i, fi) / dij + c * dij - (d(fi, fj) + a * d(j, fi))
        }
        ConditionKind::Expansive { delta3 } => d(fi, fj) - delta3 * d(i, j),
        ConditionKind::OaaG { a, b, c } => {
            let lhs = d(fi, fj);
            let m1 = a * d(i, j) - lhs;
            let m2 = b * (d(i, fi) + d(j, fj)) - lhs;
            let m3 = c * (d(i, fj) + d(j, fi)) - lhs;
            m1.min(m2).min(m3)
        }
        ConditionKind::OaaIterated { e, f: cf, g, h, i: ci } => {
            let ffi = f(fi)?;
            let ffj = f(fj)?;
            e * d(fi, fj) + cf * d(fi, ffi) + g * d(fj, ffj) + h * d(fi, ffj) + ci * d(fj, ffi)
                - d(ffi, ffj)
        }
        ConditionKind::Saljah { k1, k2, k3 } => {
            let mixed = (d(i, j) * d(i, fi).min(d(j, fj))).sqrt();
            k1 * k1 * d(i, j) + k2 * k2 * (d(i, fi) + d(j, fj)) + k3 * k3 * mixed - d(fi, fj)
        }
    };
    Some(margin)
}

/// Extremal coefficient of a one-parameter family for a fixed map.
///
/// For `banach` and `quasi` this is the infimum coefficient inside the legal
/// domain for which the condition holds, for `expansive` the largest
/// `delta3`. Returns `+inf` when no legal coefficient works, e.g. the
/// identity map under `banach`: every ratio equals one and no `alpha < 1`
/// can beat it.
pub fn tightest_coefficient<T: Real>(
    space: &DigitalMetricSpace<T>,
    f: &SelfMap,
    family: ConditionFamily,
) -> Result<T, ConditionError> {
    assert_eq!(space.len(), f.len(), "map must cover the space");
    tightest_coefficient_partial(space, |i| Some(f.apply(i)), family)
}

/// Partial-map twin of [`tightest_coefficient`], scanning pairs with defined
/// images only.
pub fn tightest_coefficient_partial<T, F>(
    space: &DigitalMetricSpace<T>,
    f: F,
    family: ConditionFamily,
) -> Result<T, ConditionError>
where
    T: Real,
    F: Fn(usize) -> Option<usize>,
{
    let n = space.len();
    let d = |a: usize, b: usize| space.distance(a, b);
    match family {
        ConditionFamily::Banach => {
            let mut worst = T::zero();
            for i in 0..n {
                let Some(fi) = f(i) else { continue };
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let Some(fj) = f(j) else { continue };
                    worst = worst.max(d(fi, fj) / d(i, j));
                }
            }
            Ok(if worst < T::one() { worst } else { T::infinity() })
        }
        ConditionFamily::Quasi => {
            let mut worst = T::zero();
            for i in 0..n {
                let Some(fi) = f(i) else { continue };
                for j in 0..n {
                    let Some(fj) = f(j) else { continue };
                    let lhs = d(fi, fj);
                    let kernel = d(i, j)
                        .max(d(i, fi))
                        .max(d(j, fj))
                        .max(d(i, fj))
                        .max(d(j, fi));
                    if kernel == T::zero() {
                        if lhs > T::zero() {
                            return Ok(T::infinity());
                        }
                        continue;
                    }
                    worst = worst.max(lhs / kernel);
                }
            }
            Ok(if worst < half() { worst } else { T::infinity() })
        }
        ConditionFamily::Expansive => {
            let mut best = T::infinity();
            for i in 0..n {
                let Some(fi) = f(i) else { continue };
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let Some(fj) = f(j) else { continue };
                    best = best.min(d(fi, fj) / d(i, j));
                }
            }
            Ok(best)
        }
        other => Err(ConditionError::UnsupportedFamily {
            family: other,
            operation: "tightest_coefficient",
        }),
    }
}

/// Minimal slack of the auxiliary strict bound `d(fx, fy) < beta *
/// max{d(x,y), (d(x,fx)+d(y,fy))/2, (d(x,fy)+d(y,fx))/2}` over all ordered
/// pairs. Reported as a margin only: the bound admits no satisfiable
/// pass/fail reading at fixed points, where both sides vanish.
pub fn beta_clause_margin<T: Real>(space: &DigitalMetricSpace<T>, f: &SelfMap, beta: T) -> T {
    assert_eq!(space.len(), f.len(), "map must cover the space");
    let n = space.len();
    let d = |a: usize, b: usize| space.distance(a, b);
    let two = T::one() + T::one();
    let mut min_margin = T::infinity();
    for i in 0..n {
        for j in 0..n {
            let (fi, fj) = (f.apply(i), f.apply(j));
            let kernel = d(i, j)
                .max((d(i, fi) + d(j, fj)) / two)
                .max((d(i, fj) + d(j, fi)) / two);
            min_margin = min_margin.min(beta * kernel - d(fi, fj));
        }
    }
    min_margin
}

/// Consecutive Picard step ratio `c / (1 - c)` of the quasi shape, with the
/// verdict of the comparison against one.
///
/// The ratio drops below one exactly when `c < 1/2`; at `c = 1/2` it equals
/// one, which is why the quasi domain stops short of `1/2`.
pub fn picard_step_ratio<T: Real>(c: T) -> Result<StepRatio<T>, ConditionError> {
    if !(nonneg(c) && c < T::one()) {
        return Err(invalid(ConditionFamily::Quasi, "c must lie in [0, 1)"));
    }
    let value = c / (T::one() - c);
    Ok(StepRatio {
        value,
        contractive: value < T::one(),
    })
}

/// A step ratio and whether it certifies contraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRatio<T: Real> {
    pub value: T,
    pub contractive: bool,
}

/// Step ratio `(e + f + h) / (1 - g - h)` of the five-coefficient iterated
/// shape. The coefficient sum staying below one does not force this ratio
/// below one; the report carries both facts so the gap is visible.
pub fn iterated_step_ratio<T: Real>(
    e: T,
    f: T,
    g: T,
    h: T,
    i: T,
) -> Result<IteratedStepRatio<T>, ConditionError> {
    let all_nonneg = nonneg(e) && nonneg(f) && nonneg(g) && nonneg(h) && nonneg(i);
    if !all_nonneg {
        return Err(invalid(
            ConditionFamily::OaaIterated,
            "coefficients must be nonnegative",
        ));
    }
    if !(g + h < T::one()) {
        return Err(invalid(
            ConditionFamily::OaaIterated,
            "g + h must stay below 1 for the denominator",
        ));
    }
    let value = (e + f + h) / (T::one() - g - h);
    Ok(IteratedStepRatio {
        value,
        sum_below_one: e + f + g + h + i < T::one(),
        ratio_below_one: value < T::one(),
    })
}

/// Step ratio of the iterated shape together with the two separate verdicts
/// it is often conflated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IteratedStepRatio<T: Real> {
    pub value: T,
    pub sum_below_one: bool,
    pub ratio_below_one: bool,
}

/// The collapse threshold `min_separation / diameter` of a space with at
/// least two points. Any map moving every pair closer by a factor below this
/// bound is forced to be constant: a non-constant map must separate some
/// image pair by at least `min_separation`, yet no argument pair is farther
/// apart than `diameter`.
pub fn constant_collapse_bound<T: Real>(
    space: &DigitalMetricSpace<T>,
) -> Result<T, ConditionError> {
    if space.len() < 2 {
        return Err(ConditionError::SingletonSpace);
    }
    Ok(space.min_separation() / space.diameter())
}
