//! Picard iteration, fixed point inventories, the fixed point property,
//! and the constant-collapse bound.

use thiserror::Error;

use crate::contraction::{
    check_condition_with, CheckReport, ConditionFamily, ConditionSpec,
};
use crate::lattice::{is_digitally_continuous, DigitalImage, SelfMap};
use crate::metrics::DigitalMetricSpace;
use crate::scalar::{default_tolerance, Real};

/// Largest point count [`has_fpp`] accepts by default. Enumeration visits
/// up to `n^n` maps, so the budget guards against accidental blowups.
pub const DEFAULT_FPP_BUDGET: usize = 8;

/// Iteration cap used when none is given: four passes over the space.
/// Maps satisfying one of the solvable condition shapes stabilize within
/// `n` steps because their orbits never revisit a point, so the default
/// leaves generous slack.
pub fn default_max_iter(points: usize) -> usize {
    4 * points
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixedPointError {
    #[error("start index {start} out of range for a space of {size} points")]
    StartOutOfRange { start: usize, size: usize },
    #[error("solving requires a contraction shape with a convergence argument, not {family}")]
    UnsupportedFamily { family: ConditionFamily },
    #[error("the condition fails at pair ({}, {})", witness.0, witness.1)]
    ConditionDoesNotHold { witness: (usize, usize) },
    #[error("orbit did not stabilize within {max_iter} iterations")]
    OrbitDidNotStabilize { max_iter: usize },
    #[error("orbit stabilized at {via_orbit} but the fixed point inventory is {exhaustive:?}")]
    Inconsistent {
        via_orbit: usize,
        exhaustive: Vec<usize>,
    },
    #[error("image has {points} points, over the enumeration budget of {budget}")]
    BudgetExceeded { points: usize, budget: usize },
    #[error("the collapse premise d(fx, fy) <= a * d(x, y) fails at pair ({}, {})", witness.0, witness.1)]
    CollapsePremiseFails { witness: (usize, usize) },
    #[error("coefficient {a} is not below the collapse bound {bound}")]
    CollapseCoefficientTooLarge { a: f64, bound: f64 },
}

/// A Picard orbit: iterates of a start point under a self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitResult {
    /// `x, f(x), f(f(x)), ...`; one entry more than the steps taken.
    pub orbit: Vec<usize>,
    /// Step at which the orbit became constant: smallest `i` with
    /// `orbit[i + 1] == orbit[i]`. `None` if the cap was hit first.
    pub constancy_index: Option<usize>,
}

impl OrbitResult {
    /// The stabilized value, when the orbit reached one.
    pub fn limit(&self) -> Option<usize> {
        self.constancy_index.map(|i| self.orbit[i])
    }
}

/// Iterates `f` from `start`, stopping at exact index equality or after
/// `max_iter` steps.
pub fn picard_orbit(
    f: &SelfMap,
    start: usize,
    max_iter: usize,
) -> Result<OrbitResult, FixedPointError> {
    if start >= f.len() {
        return Err(FixedPointError::StartOutOfRange {
            start,
            size: f.len(),
        });
    }
    let mut orbit = vec![start];
    let mut constancy_index = None;
    for step in 0..max_iter {
        let cur = *orbit.last().expect("orbit starts nonempty");
        let next = f.apply(cur);
        orbit.push(next);
        if next == cur {
            constancy_index = Some(step);
            break;
        }
    }
    Ok(OrbitResult {
        orbit,
        constancy_index,
    })
}

/// All indices fixed by `f`, ascending.
pub fn fixed_points(f: &SelfMap) -> Vec<usize> {
    (0..f.len()).filter(|&i| f.apply(i) == i).collect()
}

/// Result of a successful unique-fixed-point solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T: Real> {
    pub fixed_point: usize,
    pub check: CheckReport<T>,
    pub orbit: OrbitResult,
}

/// Finds the unique fixed point promised by a contraction shape with a
/// convergence argument (`banach`, `quasi`, `sum_type`, `rational`).
///
/// Two routes must agree: Picard iteration from index 0 and the exhaustive
/// inventory. Disagreement is reported as an error rather than glossed
/// over.
pub fn solve_unique_fixed_point<T: Real>(
    space: &DigitalMetricSpace<T>,
    f: &SelfMap,
    cond: &ConditionSpec<T>,
    max_iter: usize,
) -> Result<SolveReport<T>, FixedPointError> {
    solve_unique_fixed_point_with(space, f, cond, max_iter, default_tolerance())
}

/// [`solve_unique_fixed_point`] with an explicit tolerance.
pub fn solve_unique_fixed_point_with<T: Real>(
    space: &DigitalMetricSpace<T>,
    f: &SelfMap,
    cond: &ConditionSpec<T>,
    max_iter: usize,
    tol: T,
) -> Result<SolveReport<T>, FixedPointError> {
    let family = cond.family();
    let solvable = matches!(
        family,
        ConditionFamily::Banach
            | ConditionFamily::Quasi
            | ConditionFamily::SumType
            | ConditionFamily::Rational
    );
    if !solvable {
        return Err(FixedPointError::UnsupportedFamily { family });
    }
    let check = check_condition_with(space, f, cond, tol);
    if !check.holds {
        return Err(FixedPointError::ConditionDoesNotHold {
            witness: check.witness.expect("failed check carries a witness"),
        });
    }
    let orbit = picard_orbit(f, 0, max_iter)?;
    let Some(via_orbit) = orbit.limit() else {
        return Err(FixedPointError::OrbitDidNotStabilize { max_iter });
    };
    let exhaustive = fixed_points(f);
    if exhaustive != [via_orbit] {
        return Err(FixedPointError::Inconsistent {
            via_orbit,
            exhaustive,
        });
    }
    Ok(SolveReport {
        fixed_point: via_orbit,
        check,
        orbit,
    })
}

/// Verdict on the fixed point property of a digital image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FppReport {
    /// True when every continuous self-map fixes some point.
    pub has_property: bool,
    /// A continuous map without fixed points, present iff the property
    /// fails. First such map in table enumeration order.
    pub witness: Option<SelfMap>,
    /// Fixed-point-free candidates that reached the continuity check.
    pub maps_checked: u64,
}

/// Decides the fixed point property by enumerating self-maps.
///
/// Tables are visited in numeral order; blocks sharing a fixed entry are
/// skipped wholesale, so only fixed-point-free candidates pay for a
/// continuity scan. Images above `max_points` (or 15, where counters
/// would overflow) are rejected.
pub fn has_fpp(image: &DigitalImage, max_points: usize) -> Result<FppReport, FixedPointError> {
    let n = image.len();
    let budget = max_points.min(15);
    if n > budget {
        return Err(FixedPointError::BudgetExceeded { points: n, budget });
    }
    let mut table = vec![0usize; n];
    let mut maps_checked = 0u64;
    loop {
        if let Some(fixed) = (0..n).find(|&i| table[i] == i) {
            if !advance(&mut table, fixed, n) {
                break;
            }
            continue;
        }
        maps_checked += 1;
        let candidate = SelfMap::new(table.clone()).expect("odometer stays in range");
        if is_digitally_continuous(image, &candidate).continuous {
            return Ok(FppReport {
                has_property: false,
                witness: Some(candidate),
                maps_checked,
            });
        }
        let last = n - 1;
        if !advance(&mut table, last, n) {
            break;
        }
    }
    Ok(FppReport {
        has_property: true,
        witness: None,
        maps_checked,
    })
}

/// Increments digit `pos` of a base-`n` odometer, zeroing everything less
/// significant. False on overflow past the last table.
fn advance(table: &mut [usize], pos: usize, n: usize) -> bool {
    for k in (0..=pos).rev() {
        table[k] += 1;
        if table[k] < n {
            for d in table[k + 1..].iter_mut() {
                *d = 0;
            }
            return true;
        }
        table[k] = 0;
    }
    false
}

/// Confirms that a coefficient below `min_separation / diameter` collapses
/// `f` to a constant map.
///
/// Premises: `d(fx, fy) <= a * d(x, y)` over all pairs, and `a` strictly
/// below the collapse bound (compared raw, no tolerance). Returns whether
/// the map is constant, which the premises force on every space.
pub fn check_constant_collapse<T: Real>(
    space: &DigitalMetricSpace<T>,
    f: &SelfMap,
    a: T,
) -> Result<bool, FixedPointError> {
    assert_eq!(space.len(), f.len(), "map must cover the space");
    let n = space.len();
    if n < 2 {
        return Ok(true);
    }
    let tol = default_tolerance::<T>();
    for i in 0..n {
        for j in 0..n {
            let margin = a * space.distance(i, j) - space.distance(f.apply(i), f.apply(j));
            if margin < -tol {
                return Err(FixedPointError::CollapsePremiseFails { witness: (i, j) });
            }
        }
    }
    let bound = space.min_separation() / space.diameter();
    if !(a < bound) {
        return Err(FixedPointError::CollapseCoefficientTooLarge {
            a: a.to_f64().unwrap_or(f64::NAN),
            bound: bound.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(f.constant_value().is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DigitalImage;
    use crate::metrics::{build_space, MetricSpec};

    fn l1_space(values: &[i64]) -> DigitalMetricSpace<f64> {
        build_space(
            DigitalImage::line(values).unwrap(),
            MetricSpec::lp(1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn orbits_stop_at_exact_constancy() {
        let id = SelfMap::identity(3);
        let r = picard_orbit(&id, 2, 12).unwrap();
        assert_eq!(r.orbit, vec![2, 2]);
        assert_eq!(r.constancy_index, Some(0));
        assert_eq!(r.limit(), Some(2));

        let constant = SelfMap::constant(3, 1).unwrap();
        let r = picard_orbit(&constant, 0, 12).unwrap();
        assert_eq!(r.orbit, vec![0, 1, 1]);
        assert_eq!(r.constancy_index, Some(1));

        let swap = SelfMap::new(vec![1, 0]).unwrap();
        let r = picard_orbit(&swap, 0, 8).unwrap();
        assert_eq!(r.orbit.len(), 9);
        assert_eq!(r.constancy_index, None);
        assert_eq!(r.limit(), None);

        assert_eq!(
            picard_orbit(&swap, 5, 8),
            Err(FixedPointError::StartOutOfRange { start: 5, size: 2 })
        );
    }

    #[test]
    fn fixed_point_inventories() {
        assert_eq!(fixed_points(&SelfMap::identity(3)), vec![0, 1, 2]);
        assert_eq!(fixed_points(&SelfMap::new(vec![1, 0]).unwrap()), vec![]);
        assert_eq!(
            fixed_points(&SelfMap::new(vec![0, 0, 2]).unwrap()),
            vec![0, 2]
        );
    }

    #[test]
    fn solve_walks_to_the_unique_fixed_point() {
        let space = l1_space(&[0, 1, 3]);
        let fold = SelfMap::new(vec![0, 0, 1]).unwrap();
        let cond = ConditionSpec::banach(0.6).unwrap();
        let report =
            solve_unique_fixed_point(&space, &fold, &cond, default_max_iter(3)).unwrap();
        assert_eq!(report.fixed_point, 0);
        assert!(report.check.holds);
        assert_eq!(report.orbit.orbit, vec![0, 0]);

        // the same map reached from the far end
        let orbit = picard_orbit(&fold, 2, default_max_iter(3)).unwrap();
        assert_eq!(orbit.orbit, vec![2, 1, 0, 0]);
    }

    #[test]
    fn solve_rejects_bad_inputs() {
        let space = l1_space(&[0, 1]);
        let swap = SelfMap::new(vec![1, 0]).unwrap();
        let banach = ConditionSpec::banach(0.9).unwrap();
        assert_eq!(
            solve_unique_fixed_point(&space, &swap, &banach, 8),
            Err(FixedPointError::ConditionDoesNotHold { witness: (0, 1) })
        );

        let expansive = ConditionSpec::expansive(0.0).unwrap();
        assert!(matches!(
            solve_unique_fixed_point(&space, &SelfMap::identity(2), &expansive, 8),
            Err(FixedPointError::UnsupportedFamily {
                family: ConditionFamily::Expansive
            })
        ));

        let fold = SelfMap::constant(2, 1).unwrap();
        let quasi = ConditionSpec::quasi(0.3).unwrap();
        assert_eq!(
            solve_unique_fixed_point(&space, &fold, &quasi, 0),
            Err(FixedPointError::OrbitDidNotStabilize { max_iter: 0 })
        );
    }

    #[test]
    fn only_singletons_have_the_fixed_point_property() {
        let single = DigitalImage::line(&[7]).unwrap();
        let report = has_fpp(&single, DEFAULT_FPP_BUDGET).unwrap();
        assert!(report.has_property);
        assert_eq!(report.witness, None);

        let pair = DigitalImage::interval(0, 1).unwrap();
        let report = has_fpp(&pair, DEFAULT_FPP_BUDGET).unwrap();
        assert!(!report.has_property);
        assert_eq!(report.witness.unwrap().table(), &[1, 0]);

        let triple = DigitalImage::interval(0, 2).unwrap();
        let report = has_fpp(&triple, DEFAULT_FPP_BUDGET).unwrap();
        assert!(!report.has_property);
        let witness = report.witness.unwrap();
        assert_eq!(witness.table(), &[1, 0, 0]);
        assert!(is_digitally_continuous(&triple, &witness).continuous);
        assert!(fixed_points(&witness).is_empty());
    }

    #[test]
    fn fpp_witnesses_exist_without_edges_too() {
        // {0, 2} has no adjacent pair, so every map is continuous
        let gap = DigitalImage::new(vec![crate::lattice::pt(&[0]), crate::lattice::pt(&[2])], 1)
            .unwrap();
        let report = has_fpp(&gap, DEFAULT_FPP_BUDGET).unwrap();
        assert!(!report.has_property);
        assert_eq!(report.witness.unwrap().table(), &[1, 0]);
    }

    #[test]
    fn fpp_respects_the_budget() {
        let big = DigitalImage::interval(0, 8).unwrap();
        assert_eq!(
            has_fpp(&big, 8),
            Err(FixedPointError::BudgetExceeded {
                points: 9,
                budget: 8
            })
        );
    }

    #[test]
    fn collapse_bound_forces_constant_maps() {
        let space = l1_space(&[2, 4, 8, 16]);
        let constant = SelfMap::constant(4, 0).unwrap();
        assert_eq!(check_constant_collapse(&space, &constant, 0.1), Ok(true));

        assert_eq!(
            check_constant_collapse(&space, &constant, 0.2),
            Err(FixedPointError::CollapseCoefficientTooLarge {
                a: 0.2,
                bound: 2.0 / 14.0
            })
        );

        let fold = SelfMap::new(vec![0, 0, 1, 2]).unwrap();
        assert_eq!(
            check_constant_collapse(&space, &fold, 0.1),
            Err(FixedPointError::CollapsePremiseFails { witness: (0, 2) })
        );

        let single = l1_space(&[5]);
        assert_eq!(
            check_constant_collapse(&single, &SelfMap::identity(1), 0.9),
            Ok(true)
        );
    }
}
