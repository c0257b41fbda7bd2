//! Command implementations. Each prints a human-readable block, then one
//! machine-readable line `digifix cmd=<name> key=value ...`, and returns
//! the process exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use digifix::{
    builtin_doubling_counterexample, builtin_involution_counterexample,
    check_condition_with, check_constant_collapse, constant_collapse_bound, default_max_iter,
    fixed_points, generate_contraction, has_fpp, is_digitally_continuous,
    is_metrically_continuous, iterated_step_ratio, picard_orbit, picard_step_ratio, pt,
    random_space, search_counterexample, solve_unique_fixed_point_with, tightest_coefficient,
    build_space, Condition, ConditionFamily, CounterexampleFound, DigitalImage, FixedPointError,
    ImagePool, Metric, MetricChoice, SearchBudget, SelfMap, Space,
};

use crate::doc::{metric_label, DocError, Document};

/// Global flags, resolved.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub budget: usize,
    pub max_iter: Option<usize>,
    pub tolerance: f64,
    pub seed: u64,
    pub window: usize,
}

impl Options {
    fn iterations_for(&self, points: usize) -> usize {
        self.max_iter.unwrap_or_else(|| default_max_iter(points))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error("{0}")]
    Semantic(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Doc(_) | CliError::Semantic(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

pub fn load_document(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn machine_line(cmd: &str, fields: &[(&str, String)]) {
    let mut line = format!("digifix cmd={cmd}");
    for (key, value) in fields {
        let _ = write!(line, " {key}={value}");
    }
    println!("{line}");
}

fn pair_field(pair: Option<(usize, usize)>) -> String {
    match pair {
        Some((i, j)) => format!("{i},{j}"),
        None => "-".to_string(),
    }
}

fn describe_space(doc: &Document, space: &Space) -> String {
    let u = space.image().u().expect("documents always use c_u adjacency");
    format!(
        "space: {} points in Z^{}, c_{} adjacency, {} metric",
        space.len(),
        doc.dimension,
        u,
        metric_label(space.metric()),
    )
}

pub fn check(path: &Path, opts: &Options) -> Result<i32, CliError> {
    let doc = load_document(path)?;
    let space = doc.space()?;
    let map = doc.require_map(space.image())?;
    let cond = doc.require_condition()?;

    let report = check_condition_with(&space, &map, &cond, opts.tolerance);
    println!("{}", describe_space(&doc, &space));
    println!("map: {map}");
    println!("condition: {cond}");
    println!("holds: {}", if report.holds { "yes" } else { "no" });
    println!("pairs checked: {}", report.pairs_checked);
    if let Some((i, j)) = report.tightest {
        println!(
            "tightest margin: {} at pair ({i}, {j}), points {} and {}",
            report.margin,
            space.image().point(i),
            space.image().point(j),
        );
    }
    if let Some((i, j)) = report.witness {
        println!(
            "first violation: pair ({i}, {j}), points {} and {}",
            space.image().point(i),
            space.image().point(j),
        );
    }
    machine_line(
        "check",
        &[
            ("holds", report.holds.to_string()),
            ("pairs", report.pairs_checked.to_string()),
            ("margin", report.margin.to_string()),
            ("tightest", pair_field(report.tightest)),
            ("witness", pair_field(report.witness)),
        ],
    );
    Ok(if report.holds { 0 } else { 1 })
}

pub fn cmd_fixed_points(path: &Path, opts: &Options) -> Result<i32, CliError> {
    let doc = load_document(path)?;
    let space = doc.space()?;
    let map = doc.require_map(space.image())?;
    let cond = doc.condition()?;
    let max_iter = opts.iterations_for(space.len());

    println!("{}", describe_space(&doc, &space));
    println!("map: {map}");

    let inventory = fixed_points(&map);
    if inventory.is_empty() {
        println!("fixed points: none");
    } else {
        let listing: Vec<String> = inventory
            .iter()
            .map(|&i| format!("{i} {}", space.image().point(i)))
            .collect();
        println!("fixed points: {}", listing.join(", "));
    }

    let orbit = picard_orbit(&map, 0, max_iter).expect("index 0 exists in nonempty images");
    match orbit.constancy_index {
        Some(k) => println!("orbit from index 0 stabilizes after {k} steps: {:?}", orbit.orbit),
        None => println!(
            "orbit from index 0 still moving after {max_iter} iterations: {:?}",
            orbit.orbit
        ),
    }

    let mut unique = String::from("-");
    if let Some(cond) = cond {
        match solve_unique_fixed_point_with(&space, &map, &cond, max_iter, opts.tolerance) {
            Ok(solved) => {
                println!(
                    "condition {cond} holds: unique fixed point at index {} {}",
                    solved.fixed_point,
                    space.image().point(solved.fixed_point),
                );
                unique = solved.fixed_point.to_string();
            }
            Err(FixedPointError::ConditionDoesNotHold { witness: (i, j) }) => {
                println!(
                    "condition {cond} does not hold (first violation at pair ({i}, {j})); \
                     no uniqueness guarantee, inventory above stands on its own"
                );
            }
            Err(FixedPointError::UnsupportedFamily { family }) => {
                println!(
                    "condition family {family} carries no convergence argument; \
                     inventory above stands on its own"
                );
            }
            Err(err) => return Err(CliError::Semantic(err.to_string())),
        }
    }

    machine_line(
        "fixed-points",
        &[
            ("count", inventory.len().to_string()),
            (
                "fixed",
                if inventory.is_empty() {
                    "-".to_string()
                } else {
                    inventory
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(";")
                },
            ),
            ("unique", unique),
        ],
    );
    Ok(0)
}

pub fn cmd_fpp(path: &Path, opts: &Options) -> Result<i32, CliError> {
    let doc = load_document(path)?;
    let image = doc.image()?;
    let u = image.u().expect("documents always use c_u adjacency");
    println!(
        "image: {} points in Z^{}, c_{} adjacency",
        image.len(),
        doc.dimension,
        u
    );

    let report = match has_fpp(&image, opts.budget) {
        Ok(report) => report,
        Err(err @ FixedPointError::BudgetExceeded { .. }) => {
            return Err(CliError::Budget(err.to_string()))
        }
        Err(err) => return Err(CliError::Semantic(err.to_string())),
    };

    println!(
        "fixed point property: {}",
        if report.has_property { "yes" } else { "no" }
    );
    if let Some(witness) = &report.witness {
        println!("witness map: {witness} (continuous, fixes nothing)");
    }
    println!("candidates examined: {}", report.maps_checked);
    machine_line(
        "fpp",
        &[
            ("has_property", report.has_property.to_string()),
            (
                "witness",
                report
                    .witness
                    .as_ref()
                    .map(|w| {
                        w.table()
                            .iter()
                            .map(|t| t.to_string())
                            .collect::<Vec<_>>()
                            .join(";")
                    })
                    .unwrap_or_else(|| "-".to_string()),
            ),
            ("maps", report.maps_checked.to_string()),
        ],
    );
    Ok(0)
}

pub fn cmd_falsify(path: Option<&Path>, opts: &Options) -> Result<i32, CliError> {
    match path {
        None => falsify_builtins(opts),
        Some(path) => falsify_search(path, opts),
    }
}

fn falsify_builtins(opts: &Options) -> Result<i32, CliError> {
    let doubling = builtin_doubling_counterexample(opts.window)
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    println!("doubling family, window {}:", doubling.window);
    println!(
        "  every sample doubles onto the next: {}",
        yes_no(doubling.doubles_exactly)
    );
    println!(
        "  growth relation 2*d(fx,fy) >= 3*d(x,y): {}",
        yes_no(doubling.relation_holds)
    );
    println!("  fixed point free: {}", yes_no(doubling.fixed_point_free));
    println!("  expansion ratio: {}", doubling.expansion_ratio);
    println!("  pairs checked: {}", doubling.pairs_checked);

    let inv = builtin_involution_counterexample();
    println!("involution x -> 1 - x on {{0, 1}}:");
    println!(
        "  coefficient sum: {} ({})",
        inv.coefficient_sum,
        if inv.coefficient_sum < 1.0 {
            "inside the domain"
        } else {
            "OUTSIDE the domain"
        }
    );
    println!(
        "  condition {} holds: {} (margin {})",
        inv.condition,
        yes_no(inv.check.holds),
        inv.check.margin
    );
    println!(
        "  fixed points: {}",
        if inv.fixed_points.is_empty() {
            "none".to_string()
        } else {
            format!("{:?}", inv.fixed_points)
        }
    );

    let ok = doubling.doubles_exactly
        && doubling.relation_holds
        && doubling.fixed_point_free
        && inv.coefficient_sum < 1.0
        && inv.check.holds
        && inv.fixed_points.is_empty();
    println!(
        "verdict: {}",
        if ok {
            "both built-in counterexamples stand"
        } else {
            "a built-in counterexample FAILED its audit"
        }
    );
    machine_line(
        "falsify",
        &[
            ("mode", "builtin".to_string()),
            ("ok", ok.to_string()),
            ("window", doubling.window.to_string()),
            ("ratio", doubling.expansion_ratio.to_string()),
        ],
    );
    Ok(if ok { 0 } else { 1 })
}

fn falsify_search(path: &Path, opts: &Options) -> Result<i32, CliError> {
    let doc = load_document(path)?;
    let cond = doc.require_condition()?;
    let pool = ImagePool::BoxSubsets {
        dim: 2,
        side: 3,
        u: 1,
    };
    let budget = SearchBudget {
        max_points: opts.budget.min(4),
        max_maps_per_image: 512,
        seed: opts.seed,
    };
    println!("searching subsets of the 3x3 box for a map that satisfies {cond} and fixes nothing");
    let outcome = search_counterexample(&cond, &pool, &budget)
        .map_err(|e| CliError::Semantic(e.to_string()))?;

    let found = outcome.found.is_some();
    match &outcome.found {
        Some(CounterexampleFound::Finite { space, map, report }) => {
            let points: Vec<String> = space
                .image()
                .points()
                .iter()
                .map(|p| p.to_string())
                .collect();
            println!("counterexample found on {{{}}}", points.join(", "));
            println!("  map: {map}");
            println!("  condition margin: {}", report.margin);
            println!("  fixed points: none");
        }
        Some(CounterexampleFound::Windowed { family, report }) => {
            println!(
                "counterexample found in a doubling window (size {}, shift {})",
                family.window(),
                family.shift()
            );
            println!("  condition margin: {}", report.margin);
        }
        None => {
            println!(
                "no counterexample in {} images / {} maps: every satisfying map fixed a point",
                outcome.images_scanned, outcome.maps_checked
            );
        }
    }
    machine_line(
        "falsify",
        &[
            ("mode", "search".to_string()),
            ("found", found.to_string()),
            ("images", outcome.images_scanned.to_string()),
            ("maps", outcome.maps_checked.to_string()),
            ("seed", outcome.seed.to_string()),
        ],
    );
    Ok(0)
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

pub fn cmd_demo(opts: &Options) -> Result<i32, CliError> {
    let items: Vec<(&str, Result<String, String>)> = vec![
        ("step ratio grid", demo_step_ratio_grid()),
        ("iterated ratio gap", demo_iterated_ratio_gap()),
        ("doubling audits", demo_doubling_audits()),
        ("involution audit", demo_involution_audit()),
        ("fixed point property dichotomy", demo_fpp_dichotomy()),
        ("fpp witness soundness", demo_fpp_witness(opts)),
        ("contraction solve sweep", demo_solve_sweep(opts)),
        ("constant collapse trials", demo_collapse_trials()),
        ("commuting constants", demo_commuting_constants()),
        ("non-constant maps exceed the bound", demo_nonconstant_bound()),
        ("negative searches", demo_negative_searches(opts)),
        ("expanding shift search", demo_window_search(opts)),
        ("square-coefficient search", demo_square_search(opts)),
        ("metric axioms", demo_metric_axioms()),
        ("metric vs digital continuity", demo_continuity_contrast()),
    ];

    let total = items.len();
    let mut failed = 0usize;
    for (i, (name, outcome)) in items.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("[{:>2}/{total}] {name}: ok ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[{:>2}/{total}] {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!(
        "demo: {} of {total} items passed",
        total - failed
    );
    machine_line(
        "demo",
        &[
            ("passed", (total - failed).to_string()),
            ("failed", failed.to_string()),
        ],
    );
    Ok(if failed == 0 { 0 } else { 1 })
}

fn demo_step_ratio_grid() -> Result<String, String> {
    let grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    for c in grid {
        let ratio = picard_step_ratio::<f64>(c).map_err(|e| e.to_string())?;
        if ratio.contractive != (c < 0.5) {
            return Err(format!("c={c} misclassified: ratio {}", ratio.value));
        }
    }
    let edge = picard_step_ratio::<f64>(0.5).map_err(|e| e.to_string())?;
    if edge.value != 1.0 {
        return Err(format!("c=0.5 should give exactly 1, got {}", edge.value));
    }
    Ok("contractive exactly below 1/2; the boundary ratio is exactly 1".to_string())
}

fn demo_iterated_ratio_gap() -> Result<String, String> {
    let gap = iterated_step_ratio::<f64>(0.3, 0.0, 0.2, 0.4, 0.0).map_err(|e| e.to_string())?;
    if !gap.sum_below_one || gap.ratio_below_one || (gap.value - 1.75).abs() > 1e-12 {
        return Err(format!(
            "expected sum below one with ratio 1.75, got {} (sum_below_one {})",
            gap.value, gap.sum_below_one
        ));
    }
    let small = iterated_step_ratio::<f64>(0.1, 0.1, 0.1, 0.1, 0.1).map_err(|e| e.to_string())?;
    if !small.ratio_below_one || (small.value - 0.375).abs() > 1e-12 {
        return Err(format!("all-0.1 case should give 0.375, got {}", small.value));
    }
    Ok("coefficient sum below 1 does not bound the step ratio: 0.9 vs 1.75".to_string())
}

fn demo_doubling_audits() -> Result<String, String> {
    for (window, pairs) in [(4u64, 6u64), (10, 45), (30, 435)] {
        let report =
            builtin_doubling_counterexample(window as usize).map_err(|e| e.to_string())?;
        let ok = report.doubles_exactly
            && report.relation_holds
            && report.fixed_point_free
            && report.expansion_ratio == 2.0
            && report.pairs_checked == pairs;
        if !ok {
            return Err(format!("window {window} audit failed: {report:?}"));
        }
    }
    Ok("windows 4, 10, 30 all expand by exactly 2 and fix nothing".to_string())
}

fn demo_involution_audit() -> Result<String, String> {
    let inv = builtin_involution_counterexample();
    let ok = (inv.coefficient_sum - 0.99).abs() < 1e-12
        && inv.coefficient_sum < 1.0
        && inv.check.holds
        && (inv.check.margin - 0.89).abs() < 1e-9
        && inv.fixed_points.is_empty();
    if !ok {
        return Err(format!(
            "sum {}, holds {}, margin {}, fixed {:?}",
            inv.coefficient_sum, inv.check.holds, inv.check.margin, inv.fixed_points
        ));
    }
    Ok("legal coefficients, condition holds, no fixed point".to_string())
}

fn demo_fpp_dichotomy() -> Result<String, String> {
    let cells: Vec<(i64, i64)> = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).collect();
    let mut connected_images = 0u32;
    for mask in 1u16..512 {
        if mask.count_ones() > 5 {
            continue;
        }
        let points: Vec<_> = cells
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &(x, y))| pt(&[x, y]))
            .collect();
        for u in [1, 2] {
            let image = DigitalImage::new(points.clone(), u).map_err(|e| e.to_string())?;
            if !image.is_connected() {
                continue;
            }
            connected_images += 1;
            let report = has_fpp(&image, 8).map_err(|e| e.to_string())?;
            if report.has_property != (image.len() == 1) {
                return Err(format!(
                    "{} points, u={u}: has_property={}",
                    image.len(),
                    report.has_property
                ));
            }
            if let Some(witness) = &report.witness {
                let sound = is_digitally_continuous(&image, witness).continuous
                    && fixed_points(witness).is_empty();
                if !sound {
                    return Err(format!("unsound witness {witness} at u={u}"));
                }
            }
        }
    }
    Ok(format!(
        "{connected_images} connected images: property holds exactly for singletons"
    ))
}

fn demo_fpp_witness(opts: &Options) -> Result<String, String> {
    let image = DigitalImage::interval(0, 2).map_err(|e| e.to_string())?;
    let report = has_fpp(&image, opts.budget).map_err(|e| e.to_string())?;
    let witness = report.witness.as_ref().ok_or("expected a witness")?;
    let ok = !report.has_property
        && is_digitally_continuous(&image, witness).continuous
        && fixed_points(witness).is_empty();
    if !ok {
        return Err(format!("bad witness {witness}"));
    }
    Ok(format!("witness {witness} is continuous and fixes nothing"))
}

fn demo_solve_sweep(opts: &Options) -> Result<String, String> {
    let families = [
        ConditionFamily::Quasi,
        ConditionFamily::SumType,
        ConditionFamily::Rational,
        ConditionFamily::Banach,
    ];
    let metrics = [MetricChoice::L1, MetricChoice::L2, MetricChoice::ShortestPath];
    let trials = 120usize;
    for i in 0..trials {
        let family = families[i % families.len()];
        let metric = metrics[(i / families.len()) % metrics.len()];
        let space = random_space::<f64>(i as u64 * 7 + 1, 8, metric);
        let n = space.len();
        let gen = generate_contraction(&space, family, 9_000 + i as u64)
            .map_err(|e| format!("trial {i}: {e}"))?;
        let solved = solve_unique_fixed_point_with(
            &space,
            &gen.map,
            &gen.condition,
            default_max_iter(n),
            opts.tolerance,
        )
        .map_err(|e| format!("trial {i} ({family}): {e}"))?;
        for start in 0..n {
            let orbit = picard_orbit(&gen.map, start, default_max_iter(n))
                .map_err(|e| e.to_string())?;
            match orbit.constancy_index {
                Some(k) if k <= n => {}
                other => {
                    return Err(format!(
                        "trial {i}: orbit from {start} has constancy {other:?} on {n} points"
                    ))
                }
            }
            if orbit.limit() != Some(solved.fixed_point) {
                return Err(format!("trial {i}: orbit from {start} missed the fixed point"));
            }
        }
    }
    Ok(format!(
        "{trials} generated instances solved; every orbit stabilized within the point count"
    ))
}

fn demo_collapse_trials() -> Result<String, String> {
    let trials = 60u64;
    for seed in 0..trials {
        let space = random_space::<f64>(seed, 8, MetricChoice::L1);
        let n = space.len();
        let target = (seed as usize) % n;
        let map = SelfMap::constant(n, target).map_err(|e| e.to_string())?;
        let bound = constant_collapse_bound(&space).map_err(|e| e.to_string())?;
        let collapsed = check_constant_collapse(&space, &map, 0.9 * bound)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        if !collapsed {
            return Err(format!("seed {seed}: constant map not reported constant"));
        }
    }
    let powers = build_space(
        DigitalImage::line(&[2, 4, 8, 16]).map_err(|e| e.to_string())?,
        Metric::lp(1.0).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let constant = SelfMap::constant(4, 0).map_err(|e| e.to_string())?;
    match check_constant_collapse(&powers, &constant, 0.2) {
        Err(FixedPointError::CollapseCoefficientTooLarge { .. }) => {}
        other => return Err(format!("a=0.2 on separation 2 / diameter 14: {other:?}")),
    }
    Ok(format!(
        "{trials} spaces: coefficients below separation/diameter force constancy"
    ))
}

fn demo_commuting_constants() -> Result<String, String> {
    let c0 = SelfMap::constant(3, 0).map_err(|e| e.to_string())?;
    let c0_again = SelfMap::constant(3, 0).map_err(|e| e.to_string())?;
    let c2 = SelfMap::constant(3, 2).map_err(|e| e.to_string())?;
    let id = SelfMap::identity(3);
    if !c0.commutes_with(&c0_again) {
        return Err("equal constants must commute".to_string());
    }
    if c0.commutes_with(&c2) {
        return Err("distinct constants must not commute".to_string());
    }
    if !c2.commutes_with(&id) {
        return Err("everything commutes with the identity".to_string());
    }
    Ok("equal constants commute, distinct ones do not".to_string())
}

fn demo_nonconstant_bound() -> Result<String, String> {
    let mut checked = 0u32;
    for seed in 0..40u64 {
        let space = random_space::<f64>(seed, 8, MetricChoice::L1);
        let n = space.len();
        let bound = constant_collapse_bound(&space).map_err(|e| e.to_string())?;
        let successor: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let reverse: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
        for table in [successor, reverse, (0..n).collect()] {
            let map = SelfMap::new(table).map_err(|e| e.to_string())?;
            if map.constant_value().is_some() {
                continue;
            }
            let t = tightest_coefficient(&space, &map, ConditionFamily::Banach)
                .map_err(|e| e.to_string())?;
            checked += 1;
            if t < bound - 1e-12 {
                return Err(format!(
                    "seed {seed}: non-constant map contracts to {t}, below the bound {bound}"
                ));
            }
        }
    }
    Ok(format!(
        "{checked} non-constant maps all contract no better than separation/diameter"
    ))
}

fn demo_negative_searches(opts: &Options) -> Result<String, String> {
    let conditions = [
        Condition::banach(0.5).map_err(|e| e.to_string())?,
        Condition::quasi(0.3).map_err(|e| e.to_string())?,
        Condition::sum_type(0.2, 0.2).map_err(|e| e.to_string())?,
        Condition::rational(0.2, 0.2, 0.3).map_err(|e| e.to_string())?,
    ];
    let pools = [
        ImagePool::BoxSubsets {
            dim: 1,
            side: 3,
            u: 1,
        },
        ImagePool::BoxSubsets {
            dim: 2,
            side: 2,
            u: 1,
        },
    ];
    let mut searched = 0u64;
    for cond in &conditions {
        for pool in &pools {
            let budget = SearchBudget {
                max_points: 3,
                max_maps_per_image: 64,
                seed: opts.seed,
            };
            let outcome =
                search_counterexample(cond, pool, &budget).map_err(|e| e.to_string())?;
            if let Some(found) = outcome.found {
                return Err(format!("{cond} unexpectedly falsified: {found:?}"));
            }
            searched += outcome.maps_checked;
        }
    }
    Ok(format!(
        "{searched} maps scanned, every satisfying one fixed a point"
    ))
}

fn demo_window_search(opts: &Options) -> Result<String, String> {
    let cond = Condition::expansive(1.5).map_err(|e| e.to_string())?;
    let pool = ImagePool::DoublingWindows {
        window: opts.window,
        max_shift: 3,
    };
    let outcome = search_counterexample(&cond, &pool, &SearchBudget::default())
        .map_err(|e| e.to_string())?;
    match outcome.found {
        Some(CounterexampleFound::Windowed { family, report }) if report.holds => Ok(format!(
            "shift {} in a window of {} satisfies expansive(1.5) and fixes nothing",
            family.shift(),
            family.window()
        )),
        other => Err(format!("expected a windowed counterexample, got {other:?}")),
    }
}

fn demo_square_search(opts: &Options) -> Result<String, String> {
    let cond = Condition::saljah(0.0, 0.9f64.sqrt(), 0.3).map_err(|e| e.to_string())?;
    let pool = ImagePool::BoxSubsets {
        dim: 1,
        side: 2,
        u: 1,
    };
    let budget = SearchBudget {
        max_points: 2,
        max_maps_per_image: 64,
        seed: opts.seed,
    };
    let outcome = search_counterexample(&cond, &pool, &budget).map_err(|e| e.to_string())?;
    match outcome.found {
        Some(CounterexampleFound::Finite { map, report, .. }) if report.holds => {
            Ok(format!("found {map}, the two-point involution"))
        }
        other => Err(format!("expected the involution, got {other:?}")),
    }
}

fn demo_metric_axioms() -> Result<String, String> {
    let spaces: Vec<Space> = vec![
        build_space(
            DigitalImage::line(&[0, 1, 3]).map_err(|e| e.to_string())?,
            Metric::lp(1.0).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?,
        build_space(
            DigitalImage::new(vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 0]), pt(&[2, 1])], 2)
                .map_err(|e| e.to_string())?,
            Metric::lp(2.0).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?,
        build_space(
            DigitalImage::interval(0, 4).map_err(|e| e.to_string())?,
            Metric::shortest_path(),
        )
        .map_err(|e| e.to_string())?,
        build_space(
            DigitalImage::line(&[0, 2, 5]).map_err(|e| e.to_string())?,
            Metric::table(vec![
                vec![0.0, 3.0, 6.0],
                vec![3.0, 0.0, 4.0],
                vec![6.0, 4.0, 0.0],
            ])
            .map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?,
    ];
    let mut triples = 0u64;
    for space in &spaces {
        let n = space.len();
        for i in 0..n {
            if space.distance(i, i) != 0.0 {
                return Err(format!("d({i},{i}) nonzero"));
            }
            for j in 0..n {
                if space.distance(i, j) != space.distance(j, i) {
                    return Err(format!("asymmetry at ({i},{j})"));
                }
                if i != j && !(space.distance(i, j) > 0.0) {
                    return Err(format!("non-positive distance at ({i},{j})"));
                }
                for k in 0..n {
                    triples += 1;
                    if space.distance(i, k) > space.distance(i, j) + space.distance(j, k) + 1e-9 {
                        return Err(format!("triangle violated at ({i},{j},{k})"));
                    }
                }
            }
        }
    }
    Ok(format!(
        "{triples} triples over four metrics: identity, symmetry, positivity, triangle"
    ))
}

fn demo_continuity_contrast() -> Result<String, String> {
    let image = DigitalImage::interval(0, 2).map_err(|e| e.to_string())?;
    let space = build_space(image, Metric::lp(1.0).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let torn = SelfMap::new(vec![0, 2, 2]).map_err(|e| e.to_string())?;
    let digital = is_digitally_continuous(space.image(), &torn);
    let metric = is_metrically_continuous(&space, &torn);
    if digital.continuous {
        return Err("the torn map should break adjacency".to_string());
    }
    if !metric.continuous {
        return Err("every self-map is metrically continuous".to_string());
    }
    Ok(format!(
        "the torn map breaks adjacency at {:?} yet is metrically continuous with delta {}",
        digital.witness.expect("witness accompanies failure"),
        metric.delta
    ))
}
