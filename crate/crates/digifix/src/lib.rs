//! A verification laboratory for fixed point assertions on digital metric
//! spaces.
//!
//! Finite sets of lattice points carry both an adjacency structure and a
//! metric. Claims of the form "every self-map satisfying condition C has a
//! (unique) fixed point" are checked here computationally: conditions are
//! evaluated pair by pair with explicit margins, fixed points are found
//! both by iteration and by exhaustion, and counterexamples are either
//! built in or searched for.
//!
//! The crate is generic over the scalar type through [`scalar::Real`];
//! `f64` aliases cover the common case.
//!
//! ```
//! use digifix::{build_space, check_condition, Condition, DigitalImage, Metric, SelfMap};
//!
//! let image = DigitalImage::line(&[0, 1, 3]).unwrap();
//! let space = build_space(image, Metric::lp(1.0).unwrap()).unwrap();
//! let fold = SelfMap::new(vec![0, 0, 1]).unwrap();
//! let report = check_condition(&space, &fold, &Condition::banach(0.75).unwrap());
//! assert!(report.holds);
//! ```

pub mod contraction;
pub mod falsify;
pub mod fixedpoint;
pub mod lattice;
pub mod metrics;
pub mod scalar;

pub use contraction::{
    beta_clause_margin, check_condition, check_condition_partial, check_condition_with,
    constant_collapse_bound, iterated_step_ratio, picard_step_ratio, tightest_coefficient,
    tightest_coefficient_partial, CheckReport, ConditionError, ConditionFamily, ConditionKind,
    ConditionSpec, IteratedStepRatio, StepRatio,
};
pub use falsify::{
    builtin_doubling_counterexample, builtin_involution_counterexample, generate_contraction,
    random_space, search_counterexample, CounterexampleFound, DoublingReport, FalsifyError,
    GenerateError, GeneratedContraction, ImagePool, InvolutionReport, MetricChoice, SearchBudget,
    SearchOutcome, WindowedFamily,
};
pub use fixedpoint::{
    check_constant_collapse, default_max_iter, fixed_points, has_fpp, picard_orbit,
    solve_unique_fixed_point, solve_unique_fixed_point_with, FixedPointError, FppReport,
    OrbitResult, SolveReport, DEFAULT_FPP_BUDGET,
};
pub use lattice::{
    cu_adjacent, is_digitally_continuous, pt, ContinuityReport, DigitalImage, DigitalPath,
    LatticeError, LatticePoint, SelfMap,
};
pub use metrics::{
    build_space, is_metrically_continuous, lp_distance, shortest_path_distance,
    DigitalMetricSpace, MetricContinuityReport, MetricError, MetricSpec,
};
pub use scalar::Real;

/// Absolute slack applied to inequality verdicts: non-strict comparisons
/// pass at margins down to `-DEFAULT_TOLERANCE`, strict ones need margins
/// above it.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A digital metric space over `f64`.
pub type Space = metrics::DigitalMetricSpace<f64>;
/// A metric description over `f64`.
pub type Metric = metrics::MetricSpec<f64>;
/// A condition with `f64` coefficients.
pub type Condition = contraction::ConditionSpec<f64>;
/// A check report over `f64`.
pub type Report = contraction::CheckReport<f64>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_matches_the_scalar_helper() {
        assert_eq!(DEFAULT_TOLERANCE, scalar::default_tolerance::<f64>());
    }

    #[test]
    fn aliases_compose() {
        let space: Space = build_space(
            DigitalImage::interval(0, 1).unwrap(),
            Metric::shortest_path(),
        )
        .unwrap();
        let report: Report = check_condition(
            &space,
            &SelfMap::constant(2, 0).unwrap(),
            &Condition::quasi(0.25).unwrap(),
        );
        assert!(report.holds);
    }
}
