//! Falsification tooling: built-in counterexamples, random witnesses for
//! satisfiability, and exhaustive searches for condition-satisfying maps
//! without fixed points.
//!
//! A fixed point assertion claims that every map satisfying some condition
//! on some class of spaces fixes a point. Evidence against is a concrete
//! space and map where the condition holds and no point is fixed. Evidence
//! for is an exhausted search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::contraction::{
    check_condition, check_condition_partial, tightest_coefficient, CheckReport, ConditionFamily,
    ConditionSpec,
};
use crate::fixedpoint::fixed_points;
use crate::lattice::{cu_adjacent, DigitalImage, LatticePoint, SelfMap};
use crate::metrics::{build_space, DigitalMetricSpace, MetricSpec};
use crate::scalar::{default_tolerance, real, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FalsifyError {
    #[error("window must lie in 2..=60, got {0}")]
    WindowOutOfRange(usize),
    #[error("invalid search pool: {0}")]
    InvalidPool(String),
}

/// A truncated view of the doubling map on powers of two.
///
/// The full space `{2^k : k >= 1}` is infinite, so checks run on the first
/// `window` points with the map defined where it stays representable:
/// index `i` maps to `i + shift` when that lands inside the window. Pair
/// scans then cover exactly the defined pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowedFamily {
    window: usize,
    shift: usize,
}

impl WindowedFamily {
    /// Window sizes run 2..=60 so every point value fits in `i64`.
    pub fn new(window: usize, shift: usize) -> Result<Self, FalsifyError> {
        if !(2..=60).contains(&window) {
            return Err(FalsifyError::WindowOutOfRange(window));
        }
        Ok(WindowedFamily { window, shift })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// The sample points `2, 4, ..., 2^window`.
    pub fn points(&self) -> Vec<i64> {
        (1..=self.window).map(|k| 1i64 << k).collect()
    }

    /// Exact value of the point at `index`.
    pub fn value(&self, index: usize) -> i128 {
        1i128 << (index + 1)
    }

    /// Image of `index` under the shift, when it stays in the window.
    pub fn map_index(&self, index: usize) -> Option<usize> {
        let target = index.checked_add(self.shift)?;
        (index < self.window && target < self.window).then_some(target)
    }

    pub fn image(&self) -> DigitalImage {
        DigitalImage::line(&self.points()).expect("distinct ascending powers form an image")
    }

    /// The window as a metric space under the 1-norm.
    pub fn space<T: Real>(&self) -> DigitalMetricSpace<T> {
        build_space(self.image(), MetricSpec::lp(real(1.0)).expect("1 is a valid exponent"))
            .expect("window spaces always build")
    }

    /// Indices whose image value equals their own value, compared exactly.
    pub fn in_window_fixed_points(&self) -> Vec<usize> {
        (0..self.window)
            .filter(|&i| {
                self.map_index(i)
                    .is_some_and(|target| self.value(target) == self.value(i))
            })
            .collect()
    }
}

/// Exact-arithmetic audit of the doubling counterexample.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublingReport {
    pub window: usize,
    /// Every sample point doubles onto the next sample point.
    pub doubles_exactly: bool,
    /// `2 * d(fx, fy) >= 3 * d(x, y)` over all sample pairs, in integers.
    pub relation_holds: bool,
    pub fixed_point_free: bool,
    /// Worst-case expansion `d(fx, fy) / d(x, y)`; exactly 2 for doubling.
    pub expansion_ratio: f64,
    pub pairs_checked: u64,
}

/// Audits the map `x -> 2x` on `{2, 4, ..., 2^window}` in `i128`.
///
/// The map expands every pair, satisfies the growth relation with room,
/// and fixes nothing; any assertion promising fixed points under such a
/// relation is contradicted by this family at every window size.
pub fn builtin_doubling_counterexample(window: usize) -> Result<DoublingReport, FalsifyError> {
    if !(2..=60).contains(&window) {
        return Err(FalsifyError::WindowOutOfRange(window));
    }
    let values: Vec<i128> = (1..=window as u32).map(|k| 1i128 << k).collect();
    let image = |v: i128| 2 * v;

    let doubles_exactly = (0..values.len() - 1).all(|i| image(values[i]) == values[i + 1]);
    let fixed_point_free = values.iter().all(|&v| image(v) != v);

    let mut relation_holds = true;
    let mut pairs_checked = 0u64;
    let mut expansion_ratio = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = values[j] - values[i];
            let fd = image(values[j]) - image(values[i]);
            relation_holds &= 2 * fd >= 3 * d;
            expansion_ratio = expansion_ratio.min(fd as f64 / d as f64);
            pairs_checked += 1;
        }
    }
    Ok(DoublingReport {
        window,
        doubles_exactly,
        relation_holds,
        fixed_point_free,
        expansion_ratio,
        pairs_checked,
    })
}

/// The two-point involution audit: everything about `x -> 1 - x` on
/// `{0, 1}`.
#[derive(Debug, Clone)]
pub struct InvolutionReport {
    pub space: DigitalMetricSpace<f64>,
    pub map: SelfMap,
    pub condition: ConditionSpec<f64>,
    /// `k1^2 + k2^2 + k3^2`, the quantity the coefficient domain bounds.
    pub coefficient_sum: f64,
    pub check: CheckReport<f64>,
    pub fixed_points: Vec<usize>,
}

/// Builds the involution `x -> 1 - x` on `{0, 1}` and checks it against
/// the square-coefficient condition with `k1 = 0`, `k2 = sqrt(0.9)`,
/// `k3 = 0.3`.
///
/// The coefficients sit inside the legal domain (squares sum to 0.99), the
/// condition holds with a wide margin, and the map fixes nothing. One
/// two-point space refutes the uniqueness-of-fixed-points reading of that
/// condition.
pub fn builtin_involution_counterexample() -> InvolutionReport {
    let space = build_space(
        DigitalImage::interval(0, 1).expect("unit interval"),
        MetricSpec::lp(1.0).expect("1 is a valid exponent"),
    )
    .expect("two point space builds");
    let map = SelfMap::new(vec![1, 0]).expect("swap is a valid table");
    let (k1, k2, k3) = (0.0, 0.9f64.sqrt(), 0.3);
    let condition = ConditionSpec::saljah(k1, k2, k3).expect("squares sum below one");
    let coefficient_sum = k1 * k1 + k2 * k2 + k3 * k3;
    let check = check_condition(&space, &map, &condition);
    let fixed = fixed_points(&map);
    InvolutionReport {
        space,
        map,
        condition,
        coefficient_sum,
        check,
        fixed_points: fixed,
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("no generator for the {family} family")]
    UnsupportedFamily { family: ConditionFamily },
    #[error("no {family} witness found within {attempts} attempts")]
    BudgetExhausted { family: ConditionFamily, attempts: u32 },
}

/// A randomly drawn map together with coefficients fitted around it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedContraction<T: Real> {
    pub map: SelfMap,
    pub condition: ConditionSpec<T>,
    pub attempts: u32,
}

const GENERATE_ATTEMPTS: u32 = 400;

/// Draws random self-maps until one admits legal coefficients for
/// `family`, then returns the map with a condition it satisfies.
///
/// Supported families are the five with satisfiable contraction readings:
/// `banach`, `quasi`, `sum_type`, `rational` and the three-clause shape.
/// Draws mix uniform tables with maps funneled toward a random center, so
/// non-constant witnesses appear regularly; constant maps keep every
/// family feasible, so exhaustion is a seed pathology rather than an
/// expected outcome.
pub fn generate_contraction<T: Real>(
    space: &DigitalMetricSpace<T>,
    family: ConditionFamily,
    seed: u64,
) -> Result<GeneratedContraction<T>, GenerateError> {
    let supported = matches!(
        family,
        ConditionFamily::Banach
            | ConditionFamily::Quasi
            | ConditionFamily::SumType
            | ConditionFamily::Rational
            | ConditionFamily::OaaG
    );
    if !supported {
        return Err(GenerateError::UnsupportedFamily { family });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempts in 1..=GENERATE_ATTEMPTS {
        let map = draw_map(space, &mut rng);
        let Some(condition) = fit_condition(space, &map, family) else {
            continue;
        };
        let report = check_condition(space, &map, &condition);
        if report.holds {
            return Ok(GeneratedContraction {
                map,
                condition,
                attempts,
            });
        }
    }
    Err(GenerateError::BudgetExhausted {
        family,
        attempts: GENERATE_ATTEMPTS,
    })
}

/// Uniform table, or a map funneled toward a random center: each point may
/// only land within `lambda` times its own distance to the center.
fn draw_map<T: Real>(space: &DigitalMetricSpace<T>, rng: &mut ChaCha8Rng) -> SelfMap {
    let n = space.len();
    let table: Vec<usize> = if rng.gen_bool(0.3) {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    } else {
        let center = rng.gen_range(0..n);
        let lambda: T = real([0.0, 0.25, 0.4, 0.6][rng.gen_range(0..4)]);
        (0..n)
            .map(|x| {
                let limit = lambda * space.distance(x, center);
                let candidates: Vec<usize> = (0..n)
                    .filter(|&y| space.distance(y, center) <= limit)
                    .collect();
                candidates[rng.gen_range(0..candidates.len())]
            })
            .collect()
    };
    SelfMap::new(table).expect("drawn tables stay in range")
}

/// Fits legal coefficients to `map`, or `None` when the draw admits none.
fn fit_condition<T: Real>(
    space: &DigitalMetricSpace<T>,
    map: &SelfMap,
    family: ConditionFamily,
) -> Option<ConditionSpec<T>> {
    let n = space.len();
    let d = |a: usize, b: usize| space.distance(a, b);
    let half: T = real(0.5);
    match family {
        ConditionFamily::Banach => {
            let t = tightest_coefficient(space, map, family).expect("family supported");
            (t < real(0.99))
                .then(|| ConditionSpec::banach((t + T::one()) / real(2.0)).expect("below one"))
        }
        ConditionFamily::Quasi => {
            let t = tightest_coefficient(space, map, family).expect("family supported");
            (t < half).then(|| ConditionSpec::quasi((t + half) / real(2.0)).expect("below half"))
        }
        ConditionFamily::SumType => {
            for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let s: T = real(s);
                let mut t = T::zero();
                let mut feasible = true;
                for i in 0..n {
                    for j in 0..n {
                        let lhs = d(map.apply(i), map.apply(j));
                        if lhs == T::zero() {
                            continue;
                        }
                        let s1 = d(i, map.apply(i)) + d(j, map.apply(j));
                        let s2 = d(i, map.apply(j)) + d(j, map.apply(i));
                        let denom = s * s1 + (T::one() - s) * s2;
                        if denom == T::zero() {
                            feasible = false;
                        } else {
                            t = t.max(lhs / denom);
                        }
                    }
                }
                if feasible && t < real(0.4999) {
                    let c = (t + half) / real(2.0);
                    return Some(
                        ConditionSpec::sum_type(s * c, (T::one() - s) * c)
                            .expect("split sums below half"),
                    );
                }
            }
            None
        }
        ConditionFamily::Rational => {
            for a in [0.0, 0.3] {
                let a: T = real(a);
                let mut t = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let lhs = d(map.apply(i), map.apply(j)) + a * d(j, map.apply(i));
                        let dii = d(i, map.apply(i));
                        let denom = dii * dii / d(i, j) + d(i, j);
                        t = t.max(lhs / denom);
                    }
                }
                if t < real(0.4999) {
                    let bc = (t + half) / real(2.0);
                    return Some(ConditionSpec::rational(a, bc, bc).expect("sums below one"));
                }
            }
            None
        }
        ConditionFamily::OaaG => {
            let mut a_min = T::zero();
            let mut b_min = T::zero();
            let mut c_min = T::zero();
            for i in 0..n {
                for j in 0..n {
                    let lhs = d(map.apply(i), map.apply(j));
                    if lhs == T::zero() {
                        continue;
                    }
                    a_min = a_min.max(lhs / d(i, j));
                    let s1 = d(i, map.apply(i)) + d(j, map.apply(j));
                    let s2 = d(i, map.apply(j)) + d(j, map.apply(i));
                    b_min = if s1 == T::zero() {
                        T::infinity()
                    } else {
                        b_min.max(lhs / s1)
                    };
                    c_min = if s2 == T::zero() {
                        T::infinity()
                    } else {
                        c_min.max(lhs / s2)
                    };
                }
            }
            let sum = a_min + b_min + c_min;
            if sum.is_finite() && sum < real(0.99) {
                let pad = real::<T>(0.003).min((T::one() - sum) / real(6.0));
                return Some(
                    ConditionSpec::oaa_g(a_min + pad, b_min + pad, c_min + pad)
                        .expect("padded sum below one"),
                );
            }
            None
        }
        _ => None,
    }
}

/// Metric choice for randomly grown spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricChoice {
    L1,
    L2,
    ShortestPath,
}

/// Grows a random connected image inside a small box and wraps it in a
/// metric space. Deterministic per seed; between 2 and `max_points`
/// points (the box may cap the size).
pub fn random_space<T: Real>(seed: u64, max_points: usize, choice: MetricChoice) -> DigitalMetricSpace<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = if rng.gen_bool(0.5) { 1 } else { 2 };
    let u = rng.gen_range(1..=dim);
    let cells = box_cells(dim, 4);
    let target = rng.gen_range(2..=max_points.max(2));

    let mut chosen: Vec<LatticePoint> = vec![cells[rng.gen_range(0..cells.len())].clone()];
    while chosen.len() < target {
        let candidates: Vec<&LatticePoint> = cells
            .iter()
            .filter(|&cell| {
                !chosen.contains(cell)
                    && chosen
                        .iter()
                        .any(|have| cu_adjacent(cell, have, u).expect("dims match"))
            })
            .collect();
        if candidates.is_empty() {
            break;
        }
        chosen.push(candidates[rng.gen_range(0..candidates.len())].clone());
    }

    let image = DigitalImage::new(chosen, u).expect("grown cells are distinct");
    let metric = match choice {
        MetricChoice::L1 => MetricSpec::lp(real(1.0)).expect("valid exponent"),
        MetricChoice::L2 => MetricSpec::lp(real(2.0)).expect("valid exponent"),
        MetricChoice::ShortestPath => MetricSpec::shortest_path(),
    };
    build_space(image, metric).expect("grown images are connected")
}

/// All cells of `[0, side)^dim` in lexicographic order.
fn box_cells(dim: usize, side: i64) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    let mut coords = vec![0i64; dim];
    loop {
        out.push(LatticePoint::new(coords.clone()));
        let mut pos = dim;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            coords[pos] += 1;
            if coords[pos] < side {
                break;
            }
            coords[pos] = 0;
        }
        coords[pos + 1..].iter_mut().for_each(|c| *c = 0);
    }
}

/// Where a counterexample search draws its spaces from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImagePool {
    /// Every nonempty subset of the box `[0, side)^dim` under `c_u`
    /// adjacency and the 1-norm, by size then lexicographic order.
    BoxSubsets { dim: usize, side: i64, u: usize },
    /// Truncations of the doubling family at one window size, shifts
    /// `0..=max_shift`.
    DoublingWindows { window: usize, max_shift: usize },
}

/// Caps on a counterexample search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest subset size drawn from a box pool.
    pub max_points: usize,
    /// Per image: exhaustive enumeration when `n^n` fits, else this many
    /// sampled tables.
    pub max_maps_per_image: u64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_points: 4,
            max_maps_per_image: 512,
            seed: 0,
        }
    }
}

/// A space and map where the condition holds yet nothing is fixed.
#[derive(Debug, Clone)]
pub enum CounterexampleFound<T: Real> {
    Finite {
        space: DigitalMetricSpace<T>,
        map: SelfMap,
        report: CheckReport<T>,
    },
    Windowed {
        family: WindowedFamily,
        report: CheckReport<T>,
    },
}

#[derive(Debug, Clone)]
pub struct SearchOutcome<T: Real> {
    pub found: Option<CounterexampleFound<T>>,
    pub images_scanned: u64,
    pub maps_checked: u64,
    pub seed: u64,
}

/// Scans a pool for a map satisfying `cond` with no fixed point.
///
/// `None` in the outcome means the pool was exhausted within budget: every
/// satisfying map in range fixed a point. Scans with zero checked pairs
/// never count as counterexamples.
pub fn search_counterexample<T: Real>(
    cond: &ConditionSpec<T>,
    pool: &ImagePool,
    budget: &SearchBudget,
) -> Result<SearchOutcome<T>, FalsifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut images_scanned = 0u64;
    let mut maps_checked = 0u64;

    match *pool {
        ImagePool::BoxSubsets { dim, side, u } => {
            if dim == 0 || side < 1 || u == 0 || u > dim {
                return Err(FalsifyError::InvalidPool(format!(
                    "need dim >= 1, side >= 1 and 1 <= u <= dim, got dim {dim}, side {side}, u {u}"
                )));
            }
            let cells = box_cells(dim, side);
            if cells.len() > 24 {
                return Err(FalsifyError::InvalidPool(format!(
                    "box holds {} cells, over the enumeration limit of 24",
                    cells.len()
                )));
            }
            for k in 1..=budget.max_points.min(cells.len()) {
                for subset in k_subsets_lex(cells.len(), k) {
                    images_scanned += 1;
                    let points: Vec<LatticePoint> =
                        subset.iter().map(|&c| cells[c].clone()).collect();
                    let image = DigitalImage::new(points, u).expect("subset cells are distinct");
                    let space = build_space(image, MetricSpec::lp(real(1.0)).expect("valid"))
                        .expect("lp spaces always build");
                    let total = (k as u128).pow(k as u32);
                    let exhaustive = total <= budget.max_maps_per_image as u128;
                    let count = if exhaustive {
                        total as u64
                    } else {
                        budget.max_maps_per_image
                    };
                    for m in 0..count {
                        let map = if exhaustive {
                            SelfMap::from_numeral(k, m)
                        } else {
                            SelfMap::new((0..k).map(|_| rng.gen_range(0..k)).collect())
                                .expect("sampled tables stay in range")
                        };
                        maps_checked += 1;
                        let report = check_condition(&space, &map, cond);
                        if report.holds
                            && report.pairs_checked >= 1
                            && fixed_points(&map).is_empty()
                        {
                            return Ok(SearchOutcome {
                                found: Some(CounterexampleFound::Finite { space, map, report }),
                                images_scanned,
                                maps_checked,
                                seed: budget.seed,
                            });
                        }
                    }
                }
            }
        }
        ImagePool::DoublingWindows { window, max_shift } => {
            for shift in 0..=max_shift {
                let family = WindowedFamily::new(window, shift)?;
                images_scanned += 1;
                maps_checked += 1;
                let space = family.space::<T>();
                let report =
                    check_condition_partial(&space, |i| family.map_index(i), cond, default_tolerance());
                if report.holds
                    && report.pairs_checked >= 1
                    && family.in_window_fixed_points().is_empty()
                {
                    return Ok(SearchOutcome {
                        found: Some(CounterexampleFound::Windowed { family, report }),
                        images_scanned,
                        maps_checked,
                        seed: budget.seed,
                    });
                }
            }
        }
    }
    Ok(SearchOutcome {
        found: None,
        images_scanned,
        maps_checked,
        seed: budget.seed,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn k_subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
