use crate::geometry::{AffineMap, AmbientSpace, FiniteMetric, Point, VectorSpace};
use crate::{tol, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub point: Point,
    pub weight: f64,
}

impl Atom {
    pub fn new(point: impl Into<Point>, weight: f64) -> Self {
        Atom { point: point.into(), weight }
    }
}

/// A finite signed atomic measure with zero total weight.
///
/// Construction normalizes: atoms within τ of each other are merged (weights
/// summed), atoms with `|weight| ≤ τ` are dropped and the rest are sorted
/// lexicographically by position.
#[derive(Clone, Debug, PartialEq)]
pub struct Molecule {
    space: AmbientSpace,
    atoms: Vec<Atom>,
}

impl Molecule {
    pub fn new(space: AmbientSpace, atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            space.check_point(&a.point)?;
            if !a.weight.is_finite() {
                return Err(Error::InvalidValue(format!("non-finite atom weight {}", a.weight)));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        let variation: f64 = atoms.iter().map(|a| a.weight.abs()).sum();
        if total.abs() > tol() * variation.max(1.0) {
            return Err(Error::NonZeroAverage(total));
        }
        Ok(Self::normalized(space, atoms))
    }

    pub fn empty(space: AmbientSpace) -> Self {
        Molecule { space, atoms: Vec::new() }
    }

    /// `δ_y − δ_x`.
    pub fn dipole(space: AmbientSpace, x: impl Into<Point>, y: impl Into<Point>) -> Result<Self> {
        Molecule::new(space, vec![Atom::new(y, 1.0), Atom::new(x, -1.0)])
    }

    /// Builds without the zero-average check; used for sums of boundaries
    /// where the total is zero by construction.
    pub(crate) fn normalized(space: AmbientSpace, mut atoms: Vec<Atom>) -> Self {
        let t = tol();
        atoms.sort_by(|a, b| a.point.lex_cmp(&b.point));
        let n = atoms.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        // Every supported norm dominates each coordinate difference, so a sweep on
        // the first coordinate finds all pairs within τ.
        for i in 0..n {
            for j in (i + 1)..n {
                let close = match (&atoms[i].point, &atoms[j].point) {
                    (Point::Coords(a), Point::Coords(b)) => {
                        if b[0] - a[0] > t {
                            break;
                        }
                        space.dist(&atoms[i].point, &atoms[j].point) <= t
                    }
                    (Point::Index(a), Point::Index(b)) => {
                        if a != b {
                            break;
                        }
                        true
                    }
                    _ => false,
                };
                if close {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                        parent[hi] = lo;
                    }
                }
            }
        }
        let mut sums = vec![0.0; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            sums[r] += atoms[i].weight;
        }
        let atoms = atoms
            .into_iter()
            .enumerate()
            .filter(|(i, _)| parent[*i] == *i && sums[*i].abs() > t)
            .map(|(i, a)| Atom { point: a.point, weight: sums[i] })
            .collect();
        Molecule { space, atoms }
    }

    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Total variation `|m|(X)`.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.abs()).sum()
    }

    pub fn positive_part(&self) -> Vec<Atom> {
        self.atoms.iter().filter(|a| a.weight > 0.0).cloned().collect()
    }

    /// Atoms of `m⁻` with positive weights.
    pub fn negative_part(&self) -> Vec<Atom> {
        self.atoms
            .iter()
            .filter(|a| a.weight < 0.0)
            .map(|a| Atom { point: a.point.clone(), weight: -a.weight })
            .collect()
    }

    pub fn plus(&self, other: &Molecule) -> Result<Molecule> {
        if self.space != other.space {
            return Err(Error::PointMismatch("molecules live in different spaces".into()));
        }
        let atoms = self.atoms.iter().chain(&other.atoms).cloned().collect();
        Ok(Molecule::normalized(self.space.clone(), atoms))
    }

    pub fn scaled(&self, s: f64) -> Molecule {
        let atoms = self.atoms.iter().map(|a| Atom { point: a.point.clone(), weight: s * a.weight }).collect();
        Molecule::normalized(self.space.clone(), atoms)
    }

    pub fn neg(&self) -> Molecule {
        self.scaled(-1.0)
    }

    /// Atom-wise equality within τ: the normalized difference is empty.
    pub fn approx_eq(&self, other: &Molecule) -> bool {
        self.space == other.space && self.plus(&other.neg()).map(|d| d.is_empty()).unwrap_or(false)
    }

    /// Largest atom weight of the difference, `0` when equal.
    pub fn max_residual(&self, other: &Molecule) -> f64 {
        let atoms = self
            .atoms
            .iter()
            .cloned()
            .chain(other.atoms.iter().map(|a| Atom { point: a.point.clone(), weight: -a.weight }))
            .collect();
        let mut d = Molecule { space: self.space.clone(), atoms };
        // merge without dropping small weights
        d = Molecule::merged_keep_small(d);
        d.atoms.iter().fold(0.0, |m, a| m.max(a.weight.abs()))
    }

    fn merged_keep_small(m: Molecule) -> Molecule {
        let Molecule { space, atoms } = m;
        let mut out: Vec<Atom> = Vec::new();
        for a in atoms {
            match out.iter_mut().find(|b| space.dist(&b.point, &a.point) <= tol()) {
                Some(b) => b.weight += a.weight,
                None => out.push(a),
            }
        }
        Molecule { space, atoms: out }
    }

    /// `m ⊕ 0` in `X ⊕ R`.
    pub fn lift(&self) -> Result<Molecule> {
        let v = self.space.as_vector()?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let mut c = a.point.coords().expect("vector point").to_vec();
                c.push(0.0);
                Atom { point: Point::Coords(c), weight: a.weight }
            })
            .collect();
        Ok(Molecule::normalized(v.lifted().into(), atoms))
    }

    pub fn pushforward(&self, map: &AffineMap, target: VectorSpace) -> Result<Molecule> {
        let v = self.space.as_vector()?;
        if map.source_dim() != v.dim {
            return Err(Error::DimensionMismatch { expected: v.dim, got: map.source_dim() });
        }
        if map.target_dim() != target.dim {
            return Err(Error::DimensionMismatch { expected: target.dim, got: map.target_dim() });
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { point: Point::Coords(map.apply(a.point.coords().expect("vector point"))), weight: a.weight })
            .collect();
        Ok(Molecule::normalized(target.into(), atoms))
    }

    /// Image under the Kuratowski embedding of a finite metric space.
    pub fn kuratowski_image(&self, basepoint: usize) -> Result<Molecule> {
        let AmbientSpace::Finite(fm) = &self.space else {
            return Err(Error::InvalidSpace("Kuratowski embedding needs a finite metric space".into()));
        };
        let emb = crate::geometry::kuratowski_embed(fm, basepoint)?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| match a.point {
                Point::Index(i) => Atom { point: Point::Coords(emb.points[i].clone()), weight: a.weight },
                Point::Coords(_) => unreachable!("validated index point"),
            })
            .collect();
        Ok(Molecule::normalized(emb.space.into(), atoms))
    }

    /// Helper for finite spaces: `Σ w_i δ_{index_i}`.
    pub fn on_finite(space: FiniteMetric, atoms: &[(usize, f64)]) -> Result<Molecule> {
        Molecule::new(space.into(), atoms.iter().map(|&(i, w)| Atom::new(Point::Index(i), w)).collect())
    }
}
