//! Ambient spaces, points, segments and the Kuratowski embedding.

use serde::{Deserialize, Serialize};

use crate::{tol, Error, Result};

/// Norms supported on `R^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Euclidean,
    L1,
    #[serde(rename = "linf")]
    LInf,
}

impl Norm {
    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::LInf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    /// Norm of a covector `c`, i.e. the Lipschitz constant of `x -> c·x`.
    pub fn dual_of(self, c: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => Norm::Euclidean.of(c),
            Norm::L1 => Norm::LInf.of(c),
            Norm::LInf => Norm::L1.of(c),
        }
    }
}

/// `R^d` with one of the supported norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawVectorSpace")]
pub struct VectorSpace {
    pub dim: usize,
    pub norm: Norm,
}

#[derive(Deserialize)]
struct RawVectorSpace {
    dim: usize,
    norm: Norm,
}

impl TryFrom<RawVectorSpace> for VectorSpace {
    type Error = Error;
    fn try_from(raw: RawVectorSpace) -> Result<Self> {
        VectorSpace::new(raw.dim, raw.norm)
    }
}

impl VectorSpace {
    pub fn new(dim: usize, norm: Norm) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be at least 1".into()));
        }
        Ok(VectorSpace { dim, norm })
    }

    pub fn euclidean(dim: usize) -> Self {
        VectorSpace { dim, norm: Norm::Euclidean }
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        self.norm.of(v)
    }

    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.norm {
            Norm::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt(),
            Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Norm::LInf => a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs())),
        }
    }

    /// `X ⊕ R` with the same norm applied to the extended coordinate vector.
    pub fn lifted(&self) -> VectorSpace {
        VectorSpace { dim: self.dim + 1, norm: self.norm }
    }

    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::PointMismatch(format!("non-finite coordinates {p:?}")));
        }
        Ok(())
    }
}

/// A finite metric space given by its distance matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFiniteMetric")]
pub struct FiniteMetric {
    matrix: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawFiniteMetric {
    matrix: Vec<Vec<f64>>,
}

impl TryFrom<RawFiniteMetric> for FiniteMetric {
    type Error = Error;
    fn try_from(raw: RawFiniteMetric) -> Result<Self> {
        FiniteMetric::new(raw.matrix)
    }
}

impl FiniteMetric {
    /// Validates symmetry, zero diagonal, positivity and the triangle
    /// inequality (O(n³)), all up to τ.
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        let t = tol();
        if n == 0 {
            return Err(Error::InvalidSpace("finite metric space needs at least one point".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSpace(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSpace(format!("row {i} has non-finite entries")));
            }
        }
        for i in 0..n {
            if matrix[i][i].abs() > t {
                return Err(Error::InvalidSpace(format!("D[{i}][{i}] = {} is not zero", matrix[i][i])));
            }
            for j in (i + 1)..n {
                if (matrix[i][j] - matrix[j][i]).abs() > t {
                    return Err(Error::InvalidSpace(format!("matrix not symmetric at ({i},{j})")));
                }
                if matrix[i][j] <= t {
                    return Err(Error::InvalidSpace(format!("D[{i}][{j}] = {} is not positive", matrix[i][j])));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if matrix[i][k] > matrix[i][j] + matrix[j][k] + t {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails for ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        let mut matrix = matrix;
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        Ok(FiniteMetric { matrix })
    }

    /// Distance matrix of a point cloud under the given norm.
    pub fn from_points(points: &[Vec<f64>], norm: Norm) -> Result<Self> {
        let space = VectorSpace { dim: points.first().map_or(1, Vec::len), norm };
        let matrix = points
            .iter()
            .map(|p| points.iter().map(|q| space.dist(p, q)).collect())
            .collect();
        FiniteMetric::new(matrix)
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.matrix[i][j]
    }
}

/// The metric space a molecule or current lives in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AmbientSpace {
    #[serde(rename = "rd")]
    Vector(VectorSpace),
    #[serde(rename = "finite")]
    Finite(FiniteMetric),
}

impl From<VectorSpace> for AmbientSpace {
    fn from(v: VectorSpace) -> Self {
        AmbientSpace::Vector(v)
    }
}

impl From<FiniteMetric> for AmbientSpace {
    fn from(f: FiniteMetric) -> Self {
        AmbientSpace::Finite(f)
    }
}

impl AmbientSpace {
    pub fn as_vector(&self) -> Result<&VectorSpace> {
        match self {
            AmbientSpace::Vector(v) => Ok(v),
            AmbientSpace::Finite(_) => Err(Error::NeedsVectorSpace),
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match (self, p) {
            (AmbientSpace::Vector(v), Point::Coords(c)) => v.check_point(c),
            (AmbientSpace::Finite(f), Point::Index(i)) if *i < f.len() => Ok(()),
            (AmbientSpace::Finite(f), Point::Index(i)) => Err(Error::PointMismatch(format!(
                "index {i} out of range for a {}-point space",
                f.len()
            ))),
            (AmbientSpace::Vector(_), Point::Index(i)) => {
                Err(Error::PointMismatch(format!("index {i} given for a vector space")))
            }
            (AmbientSpace::Finite(_), Point::Coords(c)) => {
                Err(Error::PointMismatch(format!("coordinates {c:?} given for a finite space")))
            }
        }
    }

    /// Distance on validated points. Panics on a space/point mismatch; use
    /// [`distance`] for unchecked input.
    pub fn dist(&self, p: &Point, q: &Point) -> f64 {
        match (self, p, q) {
            (AmbientSpace::Vector(v), Point::Coords(a), Point::Coords(b)) => v.dist(a, b),
            (AmbientSpace::Finite(f), Point::Index(i), Point::Index(j)) => f.dist(*i, *j),
            _ => panic!("point does not belong to the space"),
        }
    }
}

/// A point: coordinates in `R^d` or an index into a finite metric space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Coords(Vec<f64>),
    Index(usize),
}

impl Point {
    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::Coords(c) => Some(c),
            Point::Index(_) => None,
        }
    }

    /// Total order used for deterministic output: lexicographic on
    /// coordinates, numeric on indices.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        match (self, other) {
            (Point::Coords(a), Point::Coords(b)) => lex_cmp(a, b),
            (Point::Index(a), Point::Index(b)) => a.cmp(b),
            (Point::Index(_), Point::Coords(_)) => std::cmp::Ordering::Less,
            (Point::Coords(_), Point::Index(_)) => std::cmp::Ordering::Greater,
        }
    }
}

impl From<Vec<f64>> for Point {
    fn from(c: Vec<f64>) -> Self {
        Point::Coords(c)
    }
}

pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub fn distance(space: &AmbientSpace, p: &Point, q: &Point) -> Result<f64> {
    space.check_point(p)?;
    space.check_point(q)?;
    Ok(space.dist(p, q))
}

/// The oriented segment from `a` to `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Segment {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        Segment { a, b }
    }

    pub fn point_at(&self, t: f64) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(x, y)| x + t * (y - x)).collect()
    }

    pub fn direction(&self) -> Vec<f64> {
        self.b.iter().zip(&self.a).map(|(y, x)| y - x).collect()
    }
}

pub fn segment_length(space: &AmbientSpace, s: &Segment) -> Result<f64> {
    let v = space.as_vector()?;
    v.check_point(&s.a)?;
    v.check_point(&s.b)?;
    Ok(v.dist(&s.a, &s.b))
}

/// Isometric image of a finite metric space inside `(R^n, ‖·‖∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub space: VectorSpace,
    pub points: Vec<Vec<f64>>,
}

/// `x ↦ (d(x, x_h) − d(x_o, x_h))_h` with `x_o` the basepoint and `x_h`
/// ranging over all points.
pub fn kuratowski_embed(space: &FiniteMetric, basepoint: usize) -> Result<Embedding> {
    let n = space.len();
    if basepoint >= n {
        return Err(Error::PointMismatch(format!("basepoint {basepoint} out of range for {n} points")));
    }
    let points = (0..n)
        .map(|x| (0..n).map(|h| space.dist(x, h) - space.dist(basepoint, h)).collect())
        .collect();
    Ok(Embedding { space: VectorSpace { dim: n, norm: Norm::LInf }, points })
}

/// An affine map `x ↦ A x + b` between vector spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    /// Row-major, `target_dim × source_dim`.
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        if matrix.len() != offset.len() {
            return Err(Error::DimensionMismatch { expected: matrix.len(), got: offset.len() });
        }
        if let Some(first) = matrix.first() {
            if matrix.iter().any(|r| r.len() != first.len()) {
                return Err(Error::InvalidValue("ragged affine matrix".into()));
            }
        }
        Ok(AffineMap { matrix, offset })
    }

    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim).map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        AffineMap { matrix, offset: vec![0.0; dim] }
    }

    pub fn translation(v: Vec<f64>) -> Self {
        let mut m = AffineMap::identity(v.len());
        m.offset = v;
        m
    }

    pub fn scaling(dim: usize, s: f64) -> Self {
        let mut m = AffineMap::identity(dim);
        for (i, row) in m.matrix.iter_mut().enumerate() {
            row[i] = s;
        }
        m
    }

    /// Rotation by `angle` in the plane of coordinates `(i, j)`.
    pub fn rotation(dim: usize, i: usize, j: usize, angle: f64) -> Self {
        let mut m = AffineMap::identity(dim);
        let (s, c) = angle.sin_cos();
        m.matrix[i][i] = c;
        m.matrix[i][j] = -s;
        m.matrix[j][i] = s;
        m.matrix[j][j] = c;
        m
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| row.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() + b)
            .collect()
    }
}
