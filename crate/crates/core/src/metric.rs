//! Points, metrics and axis-aligned hypercubes.
//!
//! Everything downstream addresses points by their index in the input set;
//! a [`Space`] turns a pair of indices into a distance, whether the input was
//! a Euclidean coordinate set or an explicit distance matrix.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Matrices up to this size get an exhaustive triangle-inequality check.
pub const TRIANGLE_CHECK_LIMIT: usize = 500;

const MATRIX_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: impl Into<Vec<f64>>) -> Self {
        Self(coords.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Euclidean distance.
    pub fn distance(&self, other: &Point) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(euclid(&self.0, &other.0))
    }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A validated set of distinct points in R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    /// Validates dimensions, finiteness and distinctness.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty)?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let mut points = points;
        for (index, p) in points.iter_mut().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if p.0.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            // fold -0.0 into +0.0 so the duplicate scan sees them as equal
            for c in p.0.iter_mut() {
                *c += 0.0;
            }
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&i, &j| lex_cmp(&points[i].0, &points[j].0).then(i.cmp(&j)));
        for w in order.windows(2) {
            if points[w[0]].0 == points[w[1]].0 {
                let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(Error::DuplicatePoint { first, second });
            }
        }
        Ok(Self { dim, points })
    }

    pub fn from_coords<I, P>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: Into<Vec<f64>>,
    {
        Self::new(rows.into_iter().map(|r| Point(r.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        &self.points[i].0
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Symmetric matrix of pairwise distances for an abstract metric space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates a full n×n matrix: finite, symmetric, zero diagonal,
    /// positive off-diagonal (points distinct) and, for n up to
    /// [`TRIANGLE_CHECK_LIMIT`], the triangle inequality over all triples.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v.is_nan() {
                    return Err(Error::UndefinedEntry(i, j));
                }
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!("entry ({i}, {j}) = {v}")));
                }
            }
            data.extend_from_slice(row);
        }
        let scale = data.iter().cloned().fold(0.0, f64::max);
        let tol = MATRIX_RTOL * scale.max(f64::MIN_POSITIVE);
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in i + 1..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if (a - b).abs() > tol {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({i}, {j})")));
                }
                if a == 0.0 || b == 0.0 {
                    return Err(Error::DuplicatePoint {
                        first: i,
                        second: j,
                    });
                }
                let m = 0.5 * (a + b);
                data[i * n + j] = m;
                data[j * n + i] = m;
            }
        }
        let m = Self { n, data };
        if n <= TRIANGLE_CHECK_LIMIT {
            m.check_triangle(tol)?;
        }
        Ok(m)
    }

    /// Exhaustive O(n³) triangle-inequality scan with absolute slack `tol`.
    pub fn check_triangle(&self, tol: f64) -> Result<()> {
        let n = self.n;
        for x in 0..n {
            for y in x + 1..n {
                let dxy = self.data[x * n + y];
                for z in 0..n {
                    if z == x || z == y {
                        continue;
                    }
                    if dxy > self.data[x * n + z] + self.data[z * n + y] + tol {
                        return Err(Error::TriangleViolation { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    /// Euclidean distances of a point set, as a matrix.
    pub fn from_points(points: &PointSet) -> Self {
        let n = points.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = euclid(points.coords(i), points.coords(j));
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.n || j >= self.n {
            return Err(Error::UndefinedEntry(i, j));
        }
        Ok(self.data[i * self.n + j])
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n)
    }
}

/// The input points together with the metric that measures them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    Euclidean { points: PointSet },
    Matrix { matrix: DistanceMatrix },
}

impl Space {
    pub fn euclidean(points: PointSet) -> Self {
        Space::Euclidean { points }
    }

    pub fn matrix(matrix: DistanceMatrix) -> Self {
        Space::Matrix { matrix }
    }

    pub fn len(&self) -> usize {
        match self {
            Space::Euclidean { points } => points.len(),
            Space::Matrix { matrix } => matrix.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance between points `i` and `j`; panics if either is out of range.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match self {
            Space::Euclidean { points } => euclid(points.coords(i), points.coords(j)),
            Space::Matrix { matrix } => matrix.data[i * matrix.n + j],
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.len() || j >= self.len() {
            return Err(Error::UndefinedEntry(i, j));
        }
        Ok(self.dist(i, j))
    }

    pub fn points(&self) -> Option<&PointSet> {
        match self {
            Space::Euclidean { points } => Some(points),
            Space::Matrix { .. } => None,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Space::Euclidean { points } => format!("euclidean:{}", points.dim()),
            Space::Matrix { .. } => "matrix".to_string(),
        }
    }
}

/// Maximum pairwise distance by exhaustive enumeration.
pub fn set_diameter(space: &Space, pts: &[usize]) -> Result<f64> {
    if pts.is_empty() {
        return Err(Error::Empty);
    }
    let mut best = 0.0f64;
    for (k, &i) in pts.iter().enumerate() {
        for &j in &pts[k + 1..] {
            best = best.max(space.dist(i, j));
        }
    }
    Ok(best)
}

/// Minimum distance between two point sets by exhaustive enumeration.
pub fn set_distance(space: &Space, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty);
    }
    let mut best = f64::INFINITY;
    for &i in a {
        for &j in b {
            best = best.min(space.dist(i, j));
        }
    }
    Ok(best)
}

/// Axis-aligned cube `[min_i, min_i + side]` in every coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypercube {
    pub min: Vec<f64>,
    pub side: f64,
}

impl Hypercube {
    pub fn new(min: Vec<f64>, side: f64) -> Self {
        debug_assert!(side >= 0.0);
        Self { min, side }
    }

    pub fn unit(dim: usize) -> Self {
        Self::new(vec![0.0; dim], 1.0)
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn diagonal(&self) -> f64 {
        self.side * (self.dim() as f64).sqrt()
    }

    pub fn max_corner(&self) -> Vec<f64> {
        self.min.iter().map(|m| m + self.side).collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.min.iter().map(|m| m + 0.5 * self.side).collect()
    }

    /// Closed containment.
    pub fn contains(&self, p: &[f64]) -> bool {
        let tol = 1e-12 * self.side;
        p.iter()
            .zip(&self.min)
            .all(|(&c, &m)| c >= m - tol && c <= m + self.side + tol)
    }

    /// Containment up to rounding: halving a cube whose corner is not
    /// dyadic can move the child's far face by an ulp.
    pub fn contains_cube(&self, other: &Hypercube) -> bool {
        let tol = 1e-12 * self.side;
        other
            .min
            .iter()
            .zip(&self.min)
            .all(|(&o, &m)| o >= m - tol && o + other.side <= m + self.side + tol)
    }

    /// Index of the half-split sub-cube holding `p`: bit `k` set means the
    /// upper half along axis `k`. Lower halves are closed below and open
    /// above.
    pub fn orthant(&self, p: &[f64]) -> usize {
        let half = 0.5 * self.side;
        p.iter()
            .zip(&self.min)
            .enumerate()
            .fold(0, |acc, (k, (&c, &m))| if c >= m + half { acc | (1 << k) } else { acc })
    }

    pub fn child(&self, orthant: usize) -> Hypercube {
        let half = 0.5 * self.side;
        let min = self
            .min
            .iter()
            .enumerate()
            .map(|(k, &m)| if orthant >> k & 1 == 1 { m + half } else { m })
            .collect();
        Hypercube::new(min, half)
    }
}

/// Minimum Euclidean distance between two closed boxes.
pub fn hypercube_distance(c1: &Hypercube, c2: &Hypercube) -> Result<f64> {
    if c1.dim() != c2.dim() {
        return Err(Error::DimensionMismatch {
            expected: c1.dim(),
            got: c2.dim(),
        });
    }
    Ok(cube_gap(c1, c2))
}

pub(crate) fn cube_gap(c1: &Hypercube, c2: &Hypercube) -> f64 {
    c1.min
        .iter()
        .zip(&c2.min)
        .map(|(&a, &b)| {
            let gap = (b - (a + c1.side)).max(a - (b + c2.side)).max(0.0);
            gap * gap
        })
        .sum::<f64>()
        .sqrt()
}

/// Smallest axis-aligned cube anchored at the coordinate minima that holds
/// every point. A single point gets side 1.
pub fn smallest_enclosing_hypercube(points: &PointSet) -> Result<Hypercube> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    let d = points.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in points.points() {
        for k in 0..d {
            lo[k] = lo[k].min(p.0[k]);
            hi[k] = hi[k].max(p.0[k]);
        }
    }
    let side = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| h - l)
        .fold(0.0, f64::max);
    let side = if side > 0.0 { side } else { 1.0 };
    Ok(Hypercube::new(lo, side))
}
