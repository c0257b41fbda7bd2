//! Metrics on digital images and the resulting digital metric spaces.
//!
//! Three metric families are supported: the `l_p` metrics for finite
//! `p >= 1`, the shortest-path (hop count) metric of a connected image, and
//! explicit distance tables validated against the metric axioms. A built
//! space precomputes the full distance matrix together with the two derived
//! quantities everything downstream leans on: the minimal separation
//! `eps = min d(x, y) > 0` over distinct pairs and the diameter.
//!
//! Uniform discreteness is what makes fixed point arguments on these spaces
//! finite: any sequence with steps shrinking below `eps` has already become
//! constant.

use thiserror::Error;

use crate::lattice::{DigitalImage, LatticeError, LatticePoint, SelfMap};
use crate::scalar::{default_tolerance, real, real_u64, Real};

/// Errors from metric validation and space construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("l_p exponent must be a finite real >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("the shortest-path metric needs a connected image")]
    Disconnected,
    #[error("distance table must be square: row {row} has {cols} entries for {rows} rows")]
    TableNotSquare { row: usize, cols: usize, rows: usize },
    #[error("distance table is empty")]
    TableEmpty,
    #[error("distance table has {size} rows for an image of {points} points")]
    TableSizeMismatch { size: usize, points: usize },
    #[error("distance table entries must be finite, entry ({i}, {j}) is not")]
    TableNotFinite { i: usize, j: usize },
    #[error("distance table diagonal must be zero, entry ({i}, {i}) is not")]
    TableDiagonalNonZero { i: usize },
    #[error("distance table must be symmetric, entries ({i}, {j}) and ({j}, {i}) differ")]
    TableAsymmetric { i: usize, j: usize },
    #[error("off-diagonal table entries must be positive, entry ({i}, {j}) is not")]
    TableNonPositive { i: usize, j: usize },
    #[error("triangle inequality fails in the table at indices ({i}, {j}, {k})")]
    TableTriangle { i: usize, j: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum MetricKind<T: Real> {
    Lp { p: T },
    ShortestPath,
    Table { rows: Vec<Vec<T>> },
}

/// A validated metric choice for a digital image.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec<T: Real> {
    kind: MetricKind<T>,
}

impl<T: Real> MetricSpec<T> {
    /// The `l_p` metric, finite `p >= 1`.
    pub fn lp(p: T) -> Result<Self, MetricError> {
        if !(p.is_finite() && p >= T::one()) {
            return Err(MetricError::InvalidExponent(
                p.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(MetricSpec {
            kind: MetricKind::Lp { p },
        })
    }

    /// Hop-count metric along adjacency paths. Only connected images admit it.
    pub fn shortest_path() -> Self {
        MetricSpec {
            kind: MetricKind::ShortestPath,
        }
    }

    /// An explicit distance table. The matrix must be square, finite,
    /// symmetric, zero exactly on the diagonal, positive off it, and satisfy
    /// the triangle inequality. Size against the image is checked when a
    /// space is built.
    pub fn table(rows: Vec<Vec<T>>) -> Result<Self, MetricError> {
        let n = rows.len();
        if n == 0 {
            return Err(MetricError::TableEmpty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::TableNotSquare {
                    row,
                    cols: r.len(),
                    rows: n,
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !rows[i][j].is_finite() {
                    return Err(MetricError::TableNotFinite { i, j });
                }
            }
        }
        for i in 0..n {
            if rows[i][i] != T::zero() {
                return Err(MetricError::TableDiagonalNonZero { i });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(MetricError::TableAsymmetric { i, j });
                }
                if rows[i][j] <= T::zero() {
                    return Err(MetricError::TableNonPositive { i, j });
                }
            }
        }
        let tol = default_tolerance::<T>();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if rows[i][k] > rows[i][j] + rows[j][k] + tol {
                        return Err(MetricError::TableTriangle { i, j, k });
                    }
                }
            }
        }
        Ok(MetricSpec {
            kind: MetricKind::Table { rows },
        })
    }

    pub fn is_lp(&self) -> Option<T> {
        match self.kind {
            MetricKind::Lp { p } => Some(p),
            _ => None,
        }
    }

    pub fn is_shortest_path(&self) -> bool {
        matches!(self.kind, MetricKind::ShortestPath)
    }

    pub fn table_rows(&self) -> Option<&[Vec<T>]> {
        match &self.kind {
            MetricKind::Table { rows } => Some(rows),
            _ => None,
        }
    }
}

/// `l_p` distance between two lattice points, finite `p >= 1`.
///
/// `p = 1` is summed in exact integer arithmetic and widened once; `p = 2`
/// sums exact integer squares before the square root.
pub fn lp_distance<T: Real>(
    x: &LatticePoint,
    y: &LatticePoint,
    p: T,
) -> Result<T, MetricError> {
    if x.dim() != y.dim() {
        return Err(MetricError::Lattice(LatticeError::DimensionMismatch(
            x.dim(),
            y.dim(),
        )));
    }
    if !(p.is_finite() && p >= T::one()) {
        return Err(MetricError::InvalidExponent(
            p.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(lp_distance_unchecked(x, y, p))
}

fn lp_distance_unchecked<T: Real>(x: &LatticePoint, y: &LatticePoint, p: T) -> T {
    let diffs = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| a.abs_diff(*b));
    if p == T::one() {
        return real_u64(diffs.sum::<u64>());
    }
    if p == real::<T>(2.0) {
        return real_u64::<T>(diffs.map(|d| d * d).sum::<u64>()).sqrt();
    }
    let sum = diffs.fold(T::zero(), |acc, d| acc + real_u64::<T>(d).powf(p));
    sum.powf(p.recip())
}

/// Hop-count distance between two image points. Errors if either point is
/// missing or no path connects them.
pub fn shortest_path_distance(
    image: &DigitalImage,
    x: &LatticePoint,
    y: &LatticePoint,
) -> Result<u64, MetricError> {
    let xi = image
        .index_of(x)
        .ok_or_else(|| LatticeError::PointNotInImage(x.clone()))?;
    let yi = image
        .index_of(y)
        .ok_or_else(|| LatticeError::PointNotInImage(y.clone()))?;
    image.bfs_distances(xi)[yi]
        .map(u64::from)
        .ok_or(MetricError::Disconnected)
}

/// A digital image equipped with a metric: the working object of every
/// condition check. Distances, minimal separation and diameter are
/// precomputed by exhaustive pair scans at construction.
#[derive(Debug, Clone)]
pub struct DigitalMetricSpace<T: Real> {
    image: DigitalImage,
    metric: MetricSpec<T>,
    dist: Vec<T>,
    min_separation: T,
    diameter: T,
}

impl<T: Real> DigitalMetricSpace<T> {
    pub fn new(image: DigitalImage, metric: MetricSpec<T>) -> Result<Self, MetricError> {
        let n = image.len();
        let mut dist = vec![T::zero(); n * n];
        match &metric.kind {
            MetricKind::Lp { p } => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        let d = lp_distance_unchecked(image.point(i), image.point(j), *p);
                        dist[i * n + j] = d;
                        dist[j * n + i] = d;
                    }
                }
            }
            MetricKind::ShortestPath => {
                for i in 0..n {
                    let hops = image.bfs_distances(i);
                    for j in 0..n {
                        let h = hops[j].ok_or(MetricError::Disconnected)?;
                        dist[i * n + j] = real_u64(u64::from(h));
                    }
                }
            }
            MetricKind::Table { rows } => {
                if rows.len() != n {
                    return Err(MetricError::TableSizeMismatch {
                        size: rows.len(),
                        points: n,
                    });
                }
                for i in 0..n {
                    for j in 0..n {
                        dist[i * n + j] = rows[i][j];
                    }
                }
            }
        }
        // min over distinct pairs; the +inf sentinel marks singletons
        let mut min_separation = T::infinity();
        let mut diameter = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist[i * n + j];
                min_separation = min_separation.min(d);
                diameter = diameter.max(d);
            }
        }
        Ok(DigitalMetricSpace {
            image,
            metric,
            dist,
            min_separation,
            diameter,
        })
    }

    pub fn image(&self) -> &DigitalImage {
        &self.image
    }

    pub fn metric(&self) -> &MetricSpec<T> {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        false // images are never empty
    }

    /// Distance by point index.
    pub fn distance(&self, i: usize, j: usize) -> T {
        self.dist[i * self.image.len() + j]
    }

    /// Smallest distance between distinct points, `+inf` for a singleton.
    /// Always strictly positive: these spaces are uniformly discrete.
    pub fn min_separation(&self) -> T {
        self.min_separation
    }

    /// Largest pairwise distance, zero for a singleton.
    pub fn diameter(&self) -> T {
        self.diameter
    }
}

/// Builds a space from an image and a metric choice.
pub fn build_space<T: Real>(
    image: DigitalImage,
    metric: MetricSpec<T>,
) -> Result<DigitalMetricSpace<T>, MetricError> {
    DigitalMetricSpace::new(image, metric)
}

/// Outcome of a metric continuity check.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricContinuityReport<T: Real> {
    pub continuous: bool,
    /// A delta that works for every epsilon: any step below the minimal
    /// separation is forced to be a zero step.
    pub delta: T,
}

/// Metric (epsilon-delta) continuity of a self-map.
///
/// On a uniformly discrete space every self-map is metrically continuous,
/// with `delta = min_separation` as a uniform witness; the report exists to
/// make that contrast with digital continuity checkable.
///
/// Panics if the map size does not match the space.
pub fn is_metrically_continuous<T: Real>(
    space: &DigitalMetricSpace<T>,
    f: &SelfMap,
) -> MetricContinuityReport<T> {
    assert_eq!(space.len(), f.len(), "map must cover the space");
    MetricContinuityReport {
        continuous: true,
        delta: space.min_separation(),
    }
}
