use serde::{Deserialize, Serialize};

use crate::currents::{Atom, Molecule, PolyhedralCurrent};
use crate::geometry::VectorSpace;
use crate::{tol, Error, Result};

/// A constant-speed polyline run over `[t0, t1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbvPiece {
    pub t0: f64,
    pub t1: f64,
    pub polyline: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbvJump {
    pub t: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// A piecewise-affine curve `[0,1] → X` of constant metric speed with
/// finitely many jumps and no Cantor part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbvCurve {
    pub pieces: Vec<SbvPiece>,
    pub jumps: Vec<SbvJump>,
    pub speed: f64,
}

fn polyline_length(space: &VectorSpace, pts: &[Vec<f64>]) -> f64 {
    pts.windows(2).map(|w| space.dist(&w[0], &w[1])).sum()
}

/// `dom` and arclength polylines of the fragment `γ_u = u ∘ g_u⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fragment {
    pub domain: Vec<(f64, f64)>,
    pub polylines: Vec<Vec<Vec<f64>>>,
}

impl SbvCurve {
    /// Structural checks: tiling of `[0,1]`, constant speed, jumps at the
    /// piece boundaries.
    pub fn validate(&self, space: &VectorSpace) -> Result<()> {
        let t = tol();
        let bad = |m: String| Err(Error::InvalidCurve(m));
        let (Some(first), Some(last)) = (self.pieces.first(), self.pieces.last()) else {
            return bad("no pieces".into());
        };
        if first.t0.abs() > t || (last.t1 - 1.0).abs() > t {
            return bad("pieces must tile [0, 1]".into());
        }
        if self.jumps.len() + 1 != self.pieces.len() {
            return bad(format!("{} pieces need {} jumps", self.pieces.len(), self.pieces.len() - 1));
        }
        for (k, p) in self.pieces.iter().enumerate() {
            if p.polyline.is_empty() || !(p.t1 > p.t0) {
                return bad(format!("piece {k} is degenerate"));
            }
            let len = polyline_length(space, &p.polyline);
            let expected = self.speed * (p.t1 - p.t0);
            if (len - expected).abs() > t * (1.0 + len) {
                return bad(format!("piece {k} has speed {} instead of {}", len / (p.t1 - p.t0), self.speed));
            }
        }
        for (k, (w, j)) in self.pieces.windows(2).zip(&self.jumps).enumerate() {
            if (w[0].t1 - w[1].t0).abs() > t || (j.t - w[1].t0).abs() > t {
                return bad(format!("jump {k} is not at a piece boundary"));
            }
            if space.dist(w[0].polyline.last().unwrap(), &j.left) > t
                || space.dist(&w[1].polyline[0], &j.right) > t
            {
                return bad(format!("jump {k} does not connect its pieces"));
            }
        }
        Ok(())
    }

    /// `ℓ(u) = ∫_0^1 |u̇|`, which is the speed.
    pub fn length(&self) -> f64 {
        self.speed
    }

    pub fn jump_total(&self, space: &VectorSpace) -> f64 {
        self.jumps.iter().map(|j| space.dist(&j.left, &j.right)).sum()
    }

    pub fn start(&self) -> &[f64] {
        &self.pieces[0].polyline[0]
    }

    /// `u⁻(1)`.
    pub fn end(&self) -> &[f64] {
        self.pieces.last().unwrap().polyline.last().unwrap()
    }

    /// `⟦u⟧^a`: the polylines of the pieces, no connecting segments.
    pub fn current_a(&self, space: VectorSpace) -> PolyhedralCurrent {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            pieces.extend(PolyhedralCurrent::polyline(space, &p.polyline, 1.0).expect("valid points").pieces().iter().cloned());
        }
        PolyhedralCurrent::new(space, pieces).expect("valid points")
    }

    /// `δ_{u⁻(1)} − δ_{u(0)} − Σ (δ_{u⁺(t)} − δ_{u⁻(t)})` over the jumps.
    pub fn boundary(&self, space: VectorSpace) -> Molecule {
        let mut atoms = vec![Atom::new(self.end().to_vec(), 1.0), Atom::new(self.start().to_vec(), -1.0)];
        for j in &self.jumps {
            atoms.push(Atom::new(j.right.clone(), -1.0));
            atoms.push(Atom::new(j.left.clone(), 1.0));
        }
        Molecule::new(space.into(), atoms).expect("balanced by construction")
    }

    /// Whether distinct pieces and edges overlap on sets of positive length.
    pub fn is_h1_injective(&self, space: VectorSpace) -> bool {
        let c = self.current_a(space);
        (c.raw_mass() - c.canonicalize().raw_mass()).abs() <= tol() * (1.0 + c.raw_mass())
    }

    /// `g_u(t) = speed·t + Σ_{jumps ≤ t} d(u⁻, u⁺)`, evaluated at the piece
    /// starts; the images of the pieces form the fragment's domain.
    pub fn fragment(&self, space: &VectorSpace) -> Result<Fragment> {
        if !(self.speed > 0.0) {
            return Err(Error::InvalidCurve("fragment needs positive speed".into()));
        }
        let mut acc = 0.0;
        let mut domain = Vec::with_capacity(self.pieces.len());
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                let j = &self.jumps[k - 1];
                acc += space.dist(&j.left, &j.right);
            }
            let s0 = self.speed * p.t0 + acc;
            domain.push((s0, s0 + self.speed * (p.t1 - p.t0)));
        }
        Ok(Fragment { domain, polylines: self.pieces.iter().map(|p| p.polyline.clone()).collect() })
    }
}

impl Fragment {
    pub fn current(&self, space: VectorSpace) -> PolyhedralCurrent {
        let mut pieces = Vec::new();
        for p in &self.polylines {
            pieces.extend(PolyhedralCurrent::polyline(space, p, 1.0).expect("valid points").pieces().iter().cloned());
        }
        PolyhedralCurrent::new(space, pieces).expect("valid points")
    }

    /// Domain intervals have the lengths of their polylines, so the
    /// arclength parametrization is 1-Lipschitz.
    pub fn is_arclength(&self, space: &VectorSpace) -> bool {
        self.domain.iter().zip(&self.polylines).all(|(&(a, b), p)| {
            let l = polyline_length(space, p);
            ((b - a) - l).abs() <= tol() * (1.0 + l)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> VectorSpace {
        VectorSpace::euclidean(2)
    }

    fn two_piece() -> SbvCurve {
        // unit segments at speed 2 with a jump of length 1 in between
        SbvCurve {
            pieces: vec![
                SbvPiece { t0: 0.0, t1: 0.5, polyline: vec![vec![0.0, 0.0], vec![1.0, 0.0]] },
                SbvPiece { t0: 0.5, t1: 1.0, polyline: vec![vec![2.0, 0.0], vec![3.0, 0.0]] },
            ],
            jumps: vec![SbvJump { t: 0.5, left: vec![1.0, 0.0], right: vec![2.0, 0.0] }],
            speed: 2.0,
        }
    }

    #[test]
    fn validates_and_measures() {
        let u = two_piece();
        u.validate(&plane()).unwrap();
        assert_eq!(u.length(), 2.0);
        assert_eq!(u.jump_total(&plane()), 1.0);
        assert_eq!(u.current_a(plane()).pieces().len(), 2);
        assert_eq!(u.current_a(plane()).mass_total(), u.length());
        assert!(u.is_h1_injective(plane()));
        let mut slow = u.clone();
        slow.speed = 1.0;
        assert!(slow.validate(&plane()).is_err());
    }

    #[test]
    fn boundary_formula() {
        let u = two_piece();
        let b = u.boundary(plane());
        // δ_3 − δ_0 − (δ_2 − δ_1)
        assert_eq!(b.atoms().len(), 4);
        assert!(b.approx_eq(&u.current_a(plane()).boundary()));
        let no_jump = SbvCurve {
            pieces: vec![SbvPiece { t0: 0.0, t1: 1.0, polyline: vec![vec![0.0, 0.0], vec![0.0, 2.0]] }],
            jumps: vec![],
            speed: 2.0,
        };
        let d = Molecule::dipole(plane().into(), vec![0.0, 0.0], vec![0.0, 2.0]).unwrap();
        assert!(no_jump.boundary(plane()).approx_eq(&d));
    }

    #[test]
    fn fragment_domain_has_jump_gap() {
        let f = two_piece().fragment(&plane()).unwrap();
        assert_eq!(f.domain, vec![(0.0, 1.0), (2.0, 3.0)]);
        assert!(f.is_arclength(&plane()));
        assert!(f.current(plane()).approx_eq(&two_piece().current_a(plane())));
        let mut z = two_piece();
        z.speed = 0.0;
        assert!(z.fragment(&plane()).is_err());
    }
}
