//! Property tests: structural invariants, plus a naive re-derivation of
//! every condition formula that the optimized checker must agree with.

use digifix::{
    build_space, check_condition, check_condition_with, cu_adjacent, is_digitally_continuous,
    is_metrically_continuous, lp_distance, pt, shortest_path_distance, tightest_coefficient,
    Condition, ConditionFamily, ConditionKind, DigitalImage, LatticePoint, Metric, SelfMap, Space,
    DEFAULT_TOLERANCE,
};
use proptest::collection::{btree_set, vec as pvec};
use proptest::prelude::*;

/// Strictly increasing 1-D point values, a map table for them, and a
/// metric selector.
fn space_map_input() -> impl Strategy<Value = (Vec<i64>, Vec<usize>, u8)> {
    btree_set(-20i64..=20, 2..=6).prop_flat_map(|set| {
        let values: Vec<i64> = set.into_iter().collect();
        let n = values.len();
        (Just(values), pvec(0..n, n), any::<u8>())
    })
}

/// Line image under one of three metrics; the table metric re-derives its
/// entries from the coordinates so the axioms hold by construction.
fn build_line_space(values: &[i64], selector: u8) -> Space {
    let image = DigitalImage::line(values).expect("strictly increasing values");
    let metric = match selector % 3 {
        0 => Metric::lp(1.0).unwrap(),
        1 => Metric::lp(2.0).unwrap(),
        _ => {
            let n = values.len();
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                0.0
                            } else {
                                1.0 + (values[i] - values[j]).unsigned_abs() as f64
                            }
                        })
                        .collect()
                })
                .collect();
            Metric::table(rows).unwrap()
        }
    };
    build_space(image, metric).unwrap()
}

/// Conditions drawn across all eight shapes, coefficients inside their
/// legal domains by construction.
fn any_condition() -> impl Strategy<Value = Condition> {
    prop_oneof![
        (0.0..0.99f64).prop_map(|a| Condition::banach(a).unwrap()),
        (0.0..0.49f64).prop_map(|c| Condition::quasi(c).unwrap()),
        (0.0..0.25f64, 0.0..0.24f64).prop_map(|(a, b)| Condition::sum_type(a, b).unwrap()),
        (0.0..2.0f64, 0.0..0.5f64, 0.0..0.49f64)
            .prop_map(|(a, b, c)| Condition::rational(a, b, c).unwrap()),
        (0.0..3.0f64).prop_map(|d| Condition::expansive(d).unwrap()),
        (0.0..0.33f64, 0.0..0.33f64, 0.0..0.33f64)
            .prop_map(|(a, b, c)| Condition::oaa_g(a, b, c).unwrap()),
        (
            0.0..0.19f64,
            0.0..0.19f64,
            0.0..0.19f64,
            0.0..0.19f64,
            0.0..0.19f64
        )
            .prop_map(|(e, f, g, h, i)| Condition::oaa_iterated(e, f, g, h, i).unwrap()),
        (0.0..0.5f64, 0.0..0.5f64, 0.0..0.5f64)
            .prop_map(|(a, b, c)| Condition::saljah(a, b, c).unwrap()),
    ]
}

/// Transparent re-statement of each inequality, quantified over ordered
/// pairs, sharing nothing with the checker but the distance matrix.
fn oracle_holds(space: &Space, map: &SelfMap, cond: &Condition, tol: f64) -> bool {
    let n = space.len();
    let d = |a: usize, b: usize| space.distance(a, b);
    let f = |x: usize| map.apply(x);
    let forall = |pred: &dyn Fn(usize, usize) -> bool| (0..n).all(|x| (0..n).all(|y| pred(x, y)));
    match *cond.kind() {
        ConditionKind::Banach { alpha } => {
            forall(&|x, y| x == y || alpha * d(x, y) - d(f(x), f(y)) > tol)
        }
        ConditionKind::Quasi { c } => forall(&|x, y| {
            let kernel = [d(x, y), d(x, f(x)), d(y, f(y)), d(x, f(y)), d(y, f(x))]
                .into_iter()
                .fold(0.0f64, f64::max);
            d(f(x), f(y)) <= c * kernel + tol
        }),
        ConditionKind::SumType { a, b } => forall(&|x, y| {
            d(f(x), f(y)) <= a * (d(x, f(x)) + d(y, f(y))) + b * (d(x, f(y)) + d(y, f(x))) + tol
        }),
        ConditionKind::Rational { a, b, c } => forall(&|x, y| {
            x == y || {
                let lhs = d(f(x), f(y)) + a * d(y, f(x));
                let rhs = b * d(x, f(x)).powi(2) / d(x, y) + c * d(x, y);
                lhs <= rhs + tol
            }
        }),
        ConditionKind::Expansive { delta3 } => {
            forall(&|x, y| d(f(x), f(y)) >= delta3 * d(x, y) - tol)
        }
        ConditionKind::OaaG { a, b, c } => forall(&|x, y| {
            let lhs = d(f(x), f(y));
            lhs <= a * d(x, y) + tol
                && lhs <= b * (d(x, f(x)) + d(y, f(y))) + tol
                && lhs <= c * (d(x, f(y)) + d(y, f(x))) + tol
        }),
        ConditionKind::OaaIterated {
            e,
            f: cf,
            g,
            h,
            i: ci,
        } => forall(&|x, y| {
            let (fx, fy) = (f(x), f(y));
            let (ffx, ffy) = (f(fx), f(fy));
            d(ffx, ffy)
                <= e * d(fx, fy)
                    + cf * d(fx, ffx)
                    + g * d(fy, ffy)
                    + h * d(fx, ffy)
                    + ci * d(fy, ffx)
                    + tol
        }),
        ConditionKind::Saljah { k1, k2, k3 } => forall(&|x, y| {
            let mixed = (d(x, y) * d(x, f(x)).min(d(y, f(y)))).sqrt();
            d(f(x), f(y))
                <= k1 * k1 * d(x, y) + k2 * k2 * (d(x, f(x)) + d(y, f(y))) + k3 * k3 * mixed + tol
        }),
    }
}

/// Maps on an interval built from a start value and clamped unit steps;
/// consecutive images differ by at most one, which is exactly continuity
/// on a path.
fn walk_map(n: usize, start: usize, steps: &[i64]) -> SelfMap {
    let mut cur = start as i64;
    let mut table = vec![start];
    for &s in steps {
        cur = (cur + s).clamp(0, n as i64 - 1);
        table.push(cur as usize);
    }
    SelfMap::new(table).unwrap()
}

proptest! {
    #[test]
    fn adjacency_is_symmetric_irreflexive_and_monotone(
        (a, b) in (1usize..=3).prop_flat_map(|dim| (pvec(-5i64..=5, dim), pvec(-5i64..=5, dim))),
        u_raw in 1usize..=3,
    ) {
        let dim = a.len();
        let u = u_raw.min(dim);
        let x = pt(&a);
        let y = pt(&b);
        prop_assert_eq!(cu_adjacent(&x, &y, u).unwrap(), cu_adjacent(&y, &x, u).unwrap());
        prop_assert!(!cu_adjacent(&x, &x, u).unwrap());
        if u + 1 <= dim && cu_adjacent(&x, &y, u).unwrap() {
            prop_assert!(cu_adjacent(&x, &y, u + 1).unwrap());
        }
    }

    #[test]
    fn metric_axioms_hold_on_every_space((values, _table, sel) in space_map_input()) {
        let space = build_line_space(&values, sel);
        let n = space.len();
        let mut min_off = f64::INFINITY;
        let mut max_d = 0.0f64;
        for i in 0..n {
            prop_assert_eq!(space.distance(i, i), 0.0);
            for j in 0..n {
                let dij = space.distance(i, j);
                prop_assert!(dij >= 0.0);
                prop_assert_eq!(dij, space.distance(j, i));
                if i != j {
                    prop_assert!(dij > 0.0);
                    min_off = min_off.min(dij);
                    max_d = max_d.max(dij);
                }
                for k in 0..n {
                    prop_assert!(space.distance(i, k) <= dij + space.distance(j, k) + 1e-9);
                }
            }
        }
        prop_assert_eq!(space.min_separation(), min_off);
        prop_assert_eq!(space.diameter(), max_d);
    }

    #[test]
    fn lp_distance_is_monotone_in_the_exponent(
        (a, b) in (1usize..=3).prop_flat_map(|dim| (pvec(-9i64..=9, dim), pvec(-9i64..=9, dim))),
        p in 1.0f64..6.0,
        bump in 0.1f64..4.0,
    ) {
        let x = pt(&a);
        let y = pt(&b);
        let dp: f64 = lp_distance(&x, &y, p).unwrap();
        let dq: f64 = lp_distance(&x, &y, p + bump).unwrap();
        prop_assert!(dq <= dp + 1e-9);
    }

    #[test]
    fn continuity_survives_composition(
        (n, s1, st1, s2, st2) in (2usize..=6).prop_flat_map(|n| (
            Just(n),
            0..n,
            pvec(-1i64..=1, n - 1),
            0..n,
            pvec(-1i64..=1, n - 1),
        )),
    ) {
        let image = DigitalImage::interval(0, n as i64 - 1).unwrap();
        let f = walk_map(n, s1, &st1);
        let g = walk_map(n, s2, &st2);
        prop_assert!(is_digitally_continuous(&image, &f).continuous);
        prop_assert!(is_digitally_continuous(&image, &g).continuous);
        prop_assert!(is_digitally_continuous(&image, &f.compose(&g)).continuous);
    }

    #[test]
    fn checker_agrees_with_a_naive_oracle(
        (values, table, sel) in space_map_input(),
        cond in any_condition(),
    ) {
        let space = build_line_space(&values, sel);
        let map = SelfMap::new(table).unwrap();
        let report = check_condition(&space, &map, &cond);
        prop_assert_eq!(report.holds, oracle_holds(&space, &map, &cond, DEFAULT_TOLERANCE));
    }

    #[test]
    fn margins_scale_exactly_with_the_space(
        (values, table, sel) in space_map_input(),
        lam_exp in 1u32..=3,
        coeff in 0.0f64..0.99,
    ) {
        let lam = 1i64 << lam_exp;
        let scaled: Vec<i64> = values.iter().map(|v| v * lam).collect();
        let map = SelfMap::new(table).unwrap();
        let cond = match sel % 3 {
            0 => Condition::banach(coeff).unwrap(),
            1 => Condition::quasi(coeff / 2.0).unwrap(),
            _ => Condition::expansive(coeff * 3.0).unwrap(),
        };
        let plain = build_space(DigitalImage::line(&values).unwrap(), Metric::lp(1.0).unwrap()).unwrap();
        let stretched = build_space(DigitalImage::line(&scaled).unwrap(), Metric::lp(1.0).unwrap()).unwrap();
        let r1 = check_condition_with(&plain, &map, &cond, 0.0);
        let r2 = check_condition_with(&stretched, &map, &cond, 0.0);
        prop_assert_eq!(r1.holds, r2.holds);
        // doubling coordinates is exact in binary floating point
        prop_assert_eq!(r2.margin, lam as f64 * r1.margin);
    }

    #[test]
    fn tightest_coefficients_certify_and_separate((values, table, _sel) in space_map_input()) {
        let space = build_line_space(&values, 0);
        let map = SelfMap::new(table).unwrap();

        let r = tightest_coefficient(&space, &map, ConditionFamily::Banach).unwrap();
        if r.is_finite() && r < 0.98 {
            let cert = Condition::banach((r + 1.0) / 2.0).unwrap();
            prop_assert!(check_condition(&space, &map, &cert).holds);
        }
        if r.is_finite() && r > 0.02 {
            let sep = Condition::banach(r / 2.0).unwrap();
            prop_assert!(!check_condition(&space, &map, &sep).holds);
        }

        let q = tightest_coefficient(&space, &map, ConditionFamily::Quasi).unwrap();
        if q.is_finite() {
            prop_assert!(check_condition(&space, &map, &Condition::quasi(q).unwrap()).holds);
        }
        if q.is_finite() && q > 0.02 {
            prop_assert!(!check_condition(&space, &map, &Condition::quasi(q / 2.0).unwrap()).holds);
        }

        let e = tightest_coefficient(&space, &map, ConditionFamily::Expansive).unwrap();
        if e.is_finite() {
            prop_assert!(check_condition(&space, &map, &Condition::expansive(e).unwrap()).holds);
            let sep = Condition::expansive(e * 1.5 + 0.1).unwrap();
            prop_assert!(!check_condition(&space, &map, &sep).holds);
        }
    }

    #[test]
    fn shortest_path_distance_matches_explicit_paths(lo in -10i64..=10, len in 1i64..=7) {
        let image = DigitalImage::interval(lo, lo + len).unwrap();
        let n = image.len();
        for i in 0..n {
            for j in 0..n {
                let x = image.point(i);
                let y = image.point(j);
                let d = shortest_path_distance(&image, x, y).unwrap();
                prop_assert_eq!(d, shortest_path_distance(&image, y, x).unwrap());
                let path = image.find_path(x, y).unwrap().expect("intervals are connected");
                prop_assert_eq!(path.length() as u64, d);
            }
        }
    }

    #[test]
    fn numeral_codes_round_trip(n in 1usize..=6, k in any::<u64>()) {
        let numeral = k % (n as u64).pow(n as u32);
        let map = SelfMap::from_numeral(n, numeral);
        prop_assert_eq!(map.to_numeral(), numeral);
        prop_assert_eq!(map.len(), n);
    }

    #[test]
    fn components_partition_the_image(
        points in btree_set((-4i64..=4, -4i64..=4), 1..=7)
            .prop_map(|s| s.into_iter().map(|(a, b)| pt(&[a, b])).collect::<Vec<LatticePoint>>()),
        u in 1usize..=2,
    ) {
        let image = DigitalImage::new(points, u).unwrap();
        let comps = image.components();
        let mut owner = vec![usize::MAX; image.len()];
        for (c, comp) in comps.iter().enumerate() {
            for &i in comp {
                prop_assert_eq!(owner[i], usize::MAX);
                owner[i] = c;
            }
        }
        prop_assert!(owner.iter().all(|&c| c != usize::MAX));
        prop_assert_eq!(image.is_connected(), comps.len() == 1);
        for (i, j) in image.edges() {
            prop_assert_eq!(owner[i], owner[j]);
        }
    }

    #[test]
    fn every_map_is_metrically_continuous((values, table, sel) in space_map_input()) {
        let space = build_line_space(&values, sel);
        let map = SelfMap::new(table).unwrap();
        let report = is_metrically_continuous(&space, &map);
        prop_assert!(report.continuous);
        prop_assert!(report.delta > 0.0);
    }
}

#[test]
fn checks_are_shareable_across_threads() {
    use std::sync::Arc;
    use std::thread;

    let space = Arc::new(
        build_space(
            DigitalImage::interval(0, 5).unwrap(),
            Metric::lp(1.0).unwrap(),
        )
        .unwrap(),
    );
    let cond = Condition::quasi(0.3).unwrap();
    let baseline = check_condition(&space, &SelfMap::constant(6, 2).unwrap(), &cond);

    let handles: Vec<_> = (0..4)
        .map(|_| {
            let space = Arc::clone(&space);
            thread::spawn(move || check_condition(&space, &SelfMap::constant(6, 2).unwrap(), &cond))
        })
        .collect();
    for handle in handles {
        assert_eq!(handle.join().unwrap(), baseline);
    }
}
