//! Points of `Z^q`, `c_u`-adjacency, finite digital images and self-maps.
//!
//! A digital image is a finite set of lattice points together with the
//! `c_u` adjacency relation: two distinct points are adjacent when at most
//! `u` coordinates differ by exactly one and every remaining coordinate is
//! equal. `u = 1` in `Z` gives 2-adjacency, `u = 1, 2` in `Z^2` give 4- and
//! 8-adjacency.
//!
//! Points of an image are interned: each point carries a dense index in
//! `0..len()` in insertion order, and everything downstream (paths, maps,
//! distance matrices, reports) speaks indices.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Errors from image, path and self-map construction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("adjacency parameter u={u} out of range 1..={dim}")]
    AdjacencyOutOfRange { u: usize, dim: usize },
    #[error("an image must contain at least one point")]
    EmptyImage,
    #[error("duplicate point {0}")]
    DuplicatePoint(LatticePoint),
    #[error("point {0} is not in the image")]
    PointNotInImage(LatticePoint),
    #[error("adjacency relation must be irreflexive, fails at {0}")]
    RelationReflexive(LatticePoint),
    #[error("adjacency relation must be symmetric, fails on ({0}, {1})")]
    RelationAsymmetric(LatticePoint, LatticePoint),
    #[error("a path needs at least one vertex")]
    EmptyPath,
    #[error("vertex index {0} out of range for image of size {1}")]
    VertexOutOfRange(usize, usize),
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    PathNotAdjacent(usize, usize),
    #[error("self-map table has {got} entries, expected {expected}")]
    BadTableLength { got: usize, expected: usize },
    #[error("self-map sends index {index} to {target}, out of range for size {size}")]
    TargetOutOfRange { index: usize, target: usize, size: usize },
}

/// A point of `Z^q` with exact integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> i64 {
        self.coords[i]
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(coords: Vec<i64>) -> Self {
        LatticePoint::new(coords)
    }
}

impl From<&[i64]> for LatticePoint {
    fn from(coords: &[i64]) -> Self {
        LatticePoint::new(coords.to_vec())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Convenience constructor used throughout the tests.
pub fn pt(coords: &[i64]) -> LatticePoint {
    LatticePoint::from(coords)
}

/// `c_u` adjacency on `Z^q`.
///
/// `x` and `y` are adjacent when they are distinct, at most `u` coordinates
/// differ by exactly one, and all remaining coordinates are equal. Any
/// coordinate gap of two or more rules adjacency out.
pub fn cu_adjacent(x: &LatticePoint, y: &LatticePoint, u: usize) -> Result<bool, LatticeError> {
    if x.dim() != y.dim() {
        return Err(LatticeError::DimensionMismatch(x.dim(), y.dim()));
    }
    if u < 1 || u > x.dim() {
        return Err(LatticeError::AdjacencyOutOfRange { u, dim: x.dim() });
    }
    Ok(cu_adjacent_unchecked(x, y, u))
}

fn cu_adjacent_unchecked(x: &LatticePoint, y: &LatticePoint, u: usize) -> bool {
    let mut unit_diffs = 0usize;
    for (a, b) in x.coords.iter().zip(&y.coords) {
        match a.abs_diff(*b) {
            0 => {}
            1 => unit_diffs += 1,
            _ => return false,
        }
    }
    unit_diffs >= 1 && unit_diffs <= u
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum AdjacencyKind {
    Cu { u: usize },
    Custom,
}

/// A finite digital image: interned points plus a symmetric irreflexive
/// adjacency relation, `c_u` unless built through [`DigitalImage::with_relation`].
#[derive(Debug, Clone)]
pub struct DigitalImage {
    dim: usize,
    kind: AdjacencyKind,
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
    // adjacency matrix plus sorted neighbor lists, both fixed at construction
    matrix: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

impl DigitalImage {
    /// Builds an image with `c_u` adjacency. Points keep their given order;
    /// the index of a point is its position in `points`.
    pub fn new(points: Vec<LatticePoint>, u: usize) -> Result<Self, LatticeError> {
        let dim = Self::common_dim(&points)?;
        if u < 1 || u > dim {
            return Err(LatticeError::AdjacencyOutOfRange { u, dim });
        }
        Self::build(points, dim, AdjacencyKind::Cu { u }, |x, y| {
            cu_adjacent_unchecked(x, y, u)
        })
    }

    /// Extension point for adjacency relations other than `c_u`. The relation
    /// is materialized over the point set and must be symmetric and
    /// irreflexive there.
    pub fn with_relation<F>(points: Vec<LatticePoint>, relation: F) -> Result<Self, LatticeError>
    where
        F: Fn(&LatticePoint, &LatticePoint) -> bool,
    {
        let dim = Self::common_dim(&points)?;
        for p in &points {
            if relation(p, p) {
                return Err(LatticeError::RelationReflexive(p.clone()));
            }
        }
        for a in &points {
            for b in &points {
                if relation(a, b) != relation(b, a) {
                    return Err(LatticeError::RelationAsymmetric(a.clone(), b.clone()));
                }
            }
        }
        Self::build(points, dim, AdjacencyKind::Custom, relation)
    }

    /// The digital interval `[lo, hi]` in `Z` with 2-adjacency.
    pub fn interval(lo: i64, hi: i64) -> Result<Self, LatticeError> {
        if lo > hi {
            return Err(LatticeError::EmptyImage);
        }
        Self::new((lo..=hi).map(|v| pt(&[v])).collect(), 1)
    }

    /// A one-dimensional image over the given values with 2-adjacency.
    pub fn line(values: &[i64]) -> Result<Self, LatticeError> {
        Self::new(values.iter().map(|&v| pt(&[v])).collect(), 1)
    }

    fn common_dim(points: &[LatticePoint]) -> Result<usize, LatticeError> {
        let first = points.first().ok_or(LatticeError::EmptyImage)?;
        let dim = first.dim();
        for p in points {
            if p.dim() != dim {
                return Err(LatticeError::DimensionMismatch(dim, p.dim()));
            }
        }
        Ok(dim)
    }

    fn build<F>(
        points: Vec<LatticePoint>,
        dim: usize,
        kind: AdjacencyKind,
        relation: F,
    ) -> Result<Self, LatticeError>
    where
        F: Fn(&LatticePoint, &LatticePoint) -> bool,
    {
        let n = points.len();
        let mut index = HashMap::with_capacity(n);
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(LatticeError::DuplicatePoint(p.clone()));
            }
        }
        let mut matrix = vec![false; n * n];
        let mut neighbors = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && relation(&points[i], &points[j]) {
                    matrix[i * n + j] = true;
                    neighbors[i].push(j);
                }
            }
        }
        Ok(DigitalImage {
            dim,
            kind,
            points,
            index,
            matrix,
            neighbors,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty point sets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `u` of a `c_u` image, `None` for a custom relation.
    pub fn u(&self) -> Option<usize> {
        match self.kind {
            AdjacencyKind::Cu { u } => Some(u),
            AdjacencyKind::Custom => None,
        }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &LatticePoint {
        &self.points[i]
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.index.contains_key(p)
    }

    /// Adjacency by index. Indices must be in range.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.len() + j]
    }

    /// Neighbor indices of `i`, ascending.
    pub fn neighbor_indices(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Neighbors of a point, ordered by index.
    pub fn neighbors(&self, p: &LatticePoint) -> Result<Vec<LatticePoint>, LatticeError> {
        let i = self
            .index_of(p)
            .ok_or_else(|| LatticeError::PointNotInImage(p.clone()))?;
        Ok(self.neighbors[i]
            .iter()
            .map(|&j| self.points[j].clone())
            .collect())
    }

    /// Unordered adjacent pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| {
            self.neighbors[i]
                .iter()
                .copied()
                .filter(move |&j| i < j)
                .map(move |j| (i, j))
        })
    }

    /// BFS hop counts from `start`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, start: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.len()];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].expect("queued vertices have distances");
            for &w in &self.neighbors[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components as index sets, each ascending, ordered by their
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut part = Vec::new();
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(v) = queue.pop_front() {
                part.push(v);
                for &w in &self.neighbors[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Shortest path from `x` to `y`, `None` if they lie in different
    /// components. Among shortest paths the lexicographically smallest
    /// index sequence is returned.
    pub fn find_path(
        &self,
        x: &LatticePoint,
        y: &LatticePoint,
    ) -> Result<Option<DigitalPath>, LatticeError> {
        let xi = self
            .index_of(x)
            .ok_or_else(|| LatticeError::PointNotInImage(x.clone()))?;
        let yi = self
            .index_of(y)
            .ok_or_else(|| LatticeError::PointNotInImage(y.clone()))?;
        let to_y = self.bfs_distances(yi);
        if to_y[xi].is_none() {
            return Ok(None);
        }
        // Walk greedily toward y, always taking the smallest-index neighbor
        // that still lies on a shortest path.
        let mut vertices = vec![xi];
        let mut cur = xi;
        while cur != yi {
            let need = to_y[cur].expect("on a shortest path") - 1;
            let next = self.neighbors[cur]
                .iter()
                .copied()
                .find(|&w| to_y[w] == Some(need))
                .expect("BFS layer below the current vertex is non-empty");
            vertices.push(next);
            cur = next;
        }
        Ok(Some(DigitalPath { vertices }))
    }
}

/// A path in an image: consecutive vertices are adjacent. Length counts
/// edges, so a single vertex has length zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitalPath {
    vertices: Vec<usize>,
}

impl DigitalPath {
    pub fn new(image: &DigitalImage, vertices: Vec<usize>) -> Result<Self, LatticeError> {
        if vertices.is_empty() {
            return Err(LatticeError::EmptyPath);
        }
        for &v in &vertices {
            if v >= image.len() {
                return Err(LatticeError::VertexOutOfRange(v, image.len()));
            }
        }
        for w in vertices.windows(2) {
            if !image.adjacent(w[0], w[1]) {
                return Err(LatticeError::PathNotAdjacent(w[0], w[1]));
            }
        }
        Ok(DigitalPath { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// A total self-map of an image, stored as an index table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfMap {
    table: Vec<usize>,
}

impl SelfMap {
    /// Builds a map from its table; entry `i` is the image index of point `i`.
    pub fn new(table: Vec<usize>) -> Result<Self, LatticeError> {
        let size = table.len();
        if size == 0 {
            return Err(LatticeError::BadTableLength {
                got: 0,
                expected: 1,
            });
        }
        for (index, &target) in table.iter().enumerate() {
            if target >= size {
                return Err(LatticeError::TargetOutOfRange {
                    index,
                    target,
                    size,
                });
            }
        }
        Ok(SelfMap { table })
    }

    /// Builds a map from a point function. Fails if the image set is not
    /// closed under `f`.
    pub fn from_fn<F>(image: &DigitalImage, f: F) -> Result<Self, LatticeError>
    where
        F: Fn(&LatticePoint) -> LatticePoint,
    {
        let mut table = Vec::with_capacity(image.len());
        for p in image.points() {
            let q = f(p);
            let j = image
                .index_of(&q)
                .ok_or(LatticeError::PointNotInImage(q))?;
            table.push(j);
        }
        Ok(SelfMap { table })
    }

    pub fn identity(size: usize) -> Self {
        SelfMap {
            table: (0..size).collect(),
        }
    }

    pub fn constant(size: usize, target: usize) -> Result<Self, LatticeError> {
        if target >= size {
            return Err(LatticeError::TargetOutOfRange {
                index: 0,
                target,
                size,
            });
        }
        Ok(SelfMap {
            table: vec![target; size],
        })
    }

    /// Decodes a map of the given size from its rank. Tables are ranked as
    /// base-`size` numerals read left to right, so rank order is
    /// lexicographic table order. Sizes above 15 would overflow `u64` ranks.
    pub fn from_numeral(size: usize, mut numeral: u64) -> Self {
        assert!(size >= 1 && size <= 15, "numeral coding supports sizes 1..=15");
        let mut table = vec![0usize; size];
        for slot in table.iter_mut().rev() {
            *slot = (numeral % size as u64) as usize;
            numeral /= size as u64;
        }
        SelfMap { table }
    }

    pub fn to_numeral(&self) -> u64 {
        let size = self.len() as u64;
        self.table
            .iter()
            .fold(0u64, |acc, &t| acc * size + t as u64)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty tables
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `self` after `inner`: the returned map sends `i` to `self(inner(i))`.
    pub fn compose(&self, inner: &SelfMap) -> SelfMap {
        assert_eq!(self.len(), inner.len(), "composed maps must share a size");
        SelfMap {
            table: inner.table.iter().map(|&i| self.table[i]).collect(),
        }
    }

    pub fn commutes_with(&self, other: &SelfMap) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// The constant value if the map collapses everything onto one index.
    pub fn constant_value(&self) -> Option<usize> {
        let first = self.table[0];
        self.table.iter().all(|&t| t == first).then_some(first)
    }
}

impl fmt::Display for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}->{t}")?;
        }
        Ok(())
    }
}

/// Outcome of a digital continuity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityReport {
    pub continuous: bool,
    /// First adjacent pair, in edge order, whose images are neither equal
    /// nor adjacent. Present exactly when `continuous` is false.
    pub witness: Option<(usize, usize)>,
    pub edges_checked: usize,
}

/// Digital continuity of a self-map: for every adjacent pair the images are
/// equal or adjacent. On finite images this is the edge characterization of
/// continuity, so the whole check is a single edge scan.
///
/// Panics if the map size does not match the image.
pub fn is_digitally_continuous(image: &DigitalImage, f: &SelfMap) -> ContinuityReport {
    assert_eq!(image.len(), f.len(), "map must cover the image");
    let mut edges_checked = 0;
    for (i, j) in image.edges() {
        edges_checked += 1;
        let (fi, fj) = (f.apply(i), f.apply(j));
        if fi != fj && !image.adjacent(fi, fj) {
            return ContinuityReport {
                continuous: false,
                witness: Some((i, j)),
                edges_checked,
            };
        }
    }
    ContinuityReport {
        continuous: true,
        witness: None,
        edges_checked,
    }
}
