use super::form::MetricForm;
use super::molecule::{Atom, Molecule};
use crate::geometry::{lex_cmp, AffineMap, Point, Segment, VectorSpace};
use crate::{tol, Error, Result};

/// One weighted oriented segment `w ⟦a, b⟧`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub w: f64,
}

impl Piece {
    pub fn new(a: Vec<f64>, b: Vec<f64>, w: f64) -> Self {
        Piece { a, b, w }
    }

    pub fn segment(&self) -> Segment {
        Segment::new(self.a.clone(), self.b.clone())
    }
}

/// Axis-aligned half-open box `Π [lo_i, hi_i)`. Bounds may be infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        AxisBox { lo, hi }
    }

    /// `{ |x_last| ≤ half_width }` in a space of dimension `dim`.
    pub fn slab_last(dim: usize, half_width: f64) -> Self {
        let mut lo = vec![f64::NEG_INFINITY; dim];
        let mut hi = vec![f64::INFINITY; dim];
        lo[dim - 1] = -half_width;
        hi[dim - 1] = half_width;
        AxisBox { lo, hi }
    }

    /// Parameter range `[t0, t1] ⊂ [0, 1]` of the segment inside the box.
    fn clip(&self, a: &[f64], b: &[f64]) -> Option<(f64, f64)> {
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for i in 0..a.len() {
            let d = b[i] - a[i];
            if d == 0.0 {
                if !(self.lo[i] <= a[i] && a[i] < self.hi[i]) {
                    return None;
                }
                continue;
            }
            let (mut s0, mut s1) = ((self.lo[i] - a[i]) / d, (self.hi[i] - a[i]) / d);
            if s0 > s1 {
                std::mem::swap(&mut s0, &mut s1);
            }
            t0 = t0.max(s0);
            t1 = t1.min(s1);
        }
        (t1 > t0).then_some((t0, t1))
    }
}

/// The total variation measure of a canonical current: densities `|w|` on
/// interior-disjoint segments.
#[derive(Clone, Debug, PartialEq)]
pub struct MassMeasure {
    space: VectorSpace,
    pub pieces: Vec<(Segment, f64)>,
    pub total: f64,
}

impl MassMeasure {
    pub fn of_box(&self, bx: &AxisBox) -> f64 {
        self.pieces
            .iter()
            .filter_map(|(s, density)| {
                bx.clip(&s.a, &s.b).map(|(t0, t1)| density * (t1 - t0) * self.space.dist(&s.a, &s.b))
            })
            .sum()
    }
}

/// A polyhedral 1-current `Σ w_h ⟦a_h, b_h⟧` in a normed space.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralCurrent {
    space: VectorSpace,
    pieces: Vec<Piece>,
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Line {
    origin: Vec<f64>,
    dir: Vec<f64>,
    // (s_a, s_b, w, a, b)
    entries: Vec<(f64, f64, f64, Vec<f64>, Vec<f64>)>,
}

impl Line {
    fn off_line(&self, p: &[f64]) -> f64 {
        let r = sub(p, &self.origin);
        let s = dot(&r, &self.dir);
        r.iter().zip(&self.dir).map(|(x, u)| (x - s * u).powi(2)).sum::<f64>().sqrt()
    }

    fn param(&self, p: &[f64]) -> f64 {
        dot(&sub(p, &self.origin), &self.dir)
    }
}

impl PolyhedralCurrent {
    pub fn new(space: VectorSpace, pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            space.check_point(&p.a)?;
            space.check_point(&p.b)?;
            if !p.w.is_finite() {
                return Err(Error::InvalidValue(format!("non-finite piece weight {}", p.w)));
            }
        }
        Ok(PolyhedralCurrent { space, pieces })
    }

    pub fn zero(space: VectorSpace) -> Self {
        PolyhedralCurrent { space, pieces: Vec::new() }
    }

    /// Unit-weight polyline current through `points`.
    pub fn polyline(space: VectorSpace, points: &[Vec<f64>], weight: f64) -> Result<Self> {
        let pieces = points.windows(2).map(|w| Piece::new(w[0].clone(), w[1].clone(), weight)).collect();
        PolyhedralCurrent::new(space, pieces)
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn plus(&self, other: &PolyhedralCurrent) -> Result<PolyhedralCurrent> {
        if self.space != other.space {
            return Err(Error::InvalidSpace("currents live in different spaces".into()));
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Ok(PolyhedralCurrent { space: self.space, pieces })
    }

    pub fn scaled(&self, s: f64) -> PolyhedralCurrent {
        let pieces = self.pieces.iter().map(|p| Piece { w: p.w * s, ..p.clone() }).collect();
        PolyhedralCurrent { space: self.space, pieces }
    }

    pub fn neg(&self) -> PolyhedralCurrent {
        self.scaled(-1.0)
    }

    /// `∂T = Σ w (δ_b − δ_a)`, atoms merged within τ.
    pub fn boundary(&self) -> Molecule {
        let atoms = self
            .pieces
            .iter()
            .flat_map(|p| [Atom::new(p.b.clone(), p.w), Atom::new(p.a.clone(), -p.w)])
            .collect();
        Molecule::normalized(self.space.into(), atoms)
    }

    /// Canonical form: pieces are overlaid per supporting line, split at every
    /// endpoint, weights summed, zero-weight parts dropped and adjacent parts
    /// of equal weight re-joined. Output pieces have positive weight and are
    /// sorted lexicographically.
    pub fn canonicalize(&self) -> PolyhedralCurrent {
        let t = tol();
        let mut lines: Vec<Line> = Vec::new();
        for p in &self.pieces {
            if p.w.abs() <= t || self.space.dist(&p.a, &p.b) <= t {
                continue;
            }
            let line = match lines.iter_mut().position(|l| l.off_line(&p.a) <= t && l.off_line(&p.b) <= t) {
                Some(i) => &mut lines[i],
                None => {
                    let d = sub(&p.b, &p.a);
                    let len = dot(&d, &d).sqrt();
                    lines.push(Line {
                        origin: p.a.clone(),
                        dir: d.iter().map(|x| x / len).collect(),
                        entries: Vec::new(),
                    });
                    lines.last_mut().unwrap()
                }
            };
            let (sa, sb) = (line.param(&p.a), line.param(&p.b));
            line.entries.push((sa, sb, p.w, p.a.clone(), p.b.clone()));
        }

        let mut out = Vec::new();
        for line in &lines {
            // breakpoints: (s, entry index, is_b)
            let mut bps: Vec<(f64, usize, bool)> = Vec::with_capacity(2 * line.entries.len());
            for (k, e) in line.entries.iter().enumerate() {
                bps.push((e.0, k, false));
                bps.push((e.1, k, true));
            }
            bps.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut cluster_pts: Vec<Vec<f64>> = Vec::new();
            let mut cluster_s: Vec<f64> = Vec::new();
            let mut idx = vec![[0usize; 2]; line.entries.len()];
            let mut start = f64::NEG_INFINITY;
            for &(s, k, is_b) in &bps {
                if cluster_s.is_empty() || s - start > t {
                    start = s;
                    cluster_s.push(s);
                    let e = &line.entries[k];
                    cluster_pts.push(if is_b { e.4.clone() } else { e.3.clone() });
                }
                idx[k][is_b as usize] = cluster_s.len() - 1;
            }
            let m = cluster_s.len();
            // summed per elementary interval so a single cover keeps its weight bit-exactly
            let mut weights = vec![0.0; m.saturating_sub(1)];
            for (k, e) in line.entries.iter().enumerate() {
                let (i0, i1) = (idx[k][0], idx[k][1]);
                let (lo, hi, w) = if i0 < i1 { (i0, i1, e.2) } else { (i1, i0, -e.2) };
                for x in &mut weights[lo..hi] {
                    *x += w;
                }
            }
            // join runs of equal nonzero weight
            let mut k = 0;
            while k < weights.len() {
                if weights[k].abs() <= t {
                    k += 1;
                    continue;
                }
                let mut j = k + 1;
                let mut weighted = weights[k] * (cluster_s[k + 1] - cluster_s[k]);
                while j < weights.len() && (weights[j] - weights[k]).abs() <= t {
                    weighted += weights[j] * (cluster_s[j + 1] - cluster_s[j]);
                    j += 1;
                }
                let w = if weights[k..j].iter().all(|x| *x == weights[k]) {
                    weights[k]
                } else {
                    weighted / (cluster_s[j] - cluster_s[k])
                };
                let (a, b) = (cluster_pts[k].clone(), cluster_pts[j].clone());
                if w > 0.0 {
                    out.push(Piece::new(a, b, w));
                } else {
                    out.push(Piece::new(b, a, -w));
                }
                k = j;
            }
        }
        out.sort_by(|x, y| lex_cmp(&x.a, &y.a).then_with(|| lex_cmp(&x.b, &y.b)));
        PolyhedralCurrent { space: self.space, pieces: out }
    }

    pub fn mass(&self) -> MassMeasure {
        let c = self.canonicalize();
        let pieces: Vec<(Segment, f64)> = c.pieces.iter().map(|p| (p.segment(), p.w.abs())).collect();
        let total = pieces.iter().map(|(s, d)| d * self.space.dist(&s.a, &s.b)).sum::<f64>() + 0.0;
        MassMeasure { space: self.space, pieces, total }
    }

    pub fn mass_total(&self) -> f64 {
        self.mass().total
    }

    /// `Σ |w| ℓ` over the pieces as given, without cancellation.
    pub fn raw_mass(&self) -> f64 {
        self.pieces.iter().map(|p| p.w.abs() * self.space.dist(&p.a, &p.b)).sum()
    }

    /// Equality as currents: the difference has mass at most τ·(1 + scale).
    pub fn approx_eq(&self, other: &PolyhedralCurrent) -> bool {
        self.space == other.space && self.distance_to(other) <= tol() * (1.0 + self.raw_mass() + other.raw_mass())
    }

    /// Mass of `self − other`.
    pub fn distance_to(&self, other: &PolyhedralCurrent) -> f64 {
        match self.plus(&other.neg()) {
            Ok(d) => d.mass_total(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn restrict(&self, bx: &AxisBox) -> PolyhedralCurrent {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            if let Some((t0, t1)) = bx.clip(&p.a, &p.b) {
                pieces.push(Piece::new(point_at(p, t0), point_at(p, t1), p.w));
            }
        }
        PolyhedralCurrent { space: self.space, pieces }
    }

    /// Restriction to the complement of the box.
    pub fn restrict_complement(&self, bx: &AxisBox) -> PolyhedralCurrent {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            match bx.clip(&p.a, &p.b) {
                None => pieces.push(p.clone()),
                Some((t0, t1)) => {
                    if t0 > 0.0 {
                        pieces.push(Piece::new(p.a.clone(), point_at(p, t0), p.w));
                    }
                    if t1 < 1.0 {
                        pieces.push(Piece::new(point_at(p, t1), p.b.clone(), p.w));
                    }
                }
            }
        }
        PolyhedralCurrent { space: self.space, pieces }
    }

    pub fn pushforward(&self, map: &AffineMap, target: VectorSpace) -> Result<PolyhedralCurrent> {
        if map.source_dim() != self.space.dim {
            return Err(Error::DimensionMismatch { expected: self.space.dim, got: map.source_dim() });
        }
        if map.target_dim() != target.dim {
            return Err(Error::DimensionMismatch { expected: target.dim, got: map.target_dim() });
        }
        let pieces = self.pieces.iter().map(|p| Piece::new(map.apply(&p.a), map.apply(&p.b), p.w)).collect();
        Ok(PolyhedralCurrent { space: target, pieces })
    }

    /// `T(f, π) = Σ w ∫_0^1 f(θ(t)) (π∘θ)'(t) dt` over the pieces.
    pub fn evaluate(&self, form: &MetricForm) -> f64 {
        self.pieces.iter().map(|p| p.w * form.integrate_segment(&self.space, &p.a, &p.b)).sum()
    }

    /// `∫ |f| d‖T‖`, the right-hand side of the finite-mass inequality.
    pub fn abs_integral(&self, form: &MetricForm) -> f64 {
        let c = self.canonicalize();
        c.pieces
            .iter()
            .map(|p| p.w.abs() * self.space.dist(&p.a, &p.b) * form.f.abs_mean_on_segment(&self.space, &p.a, &p.b))
            .sum()
    }

    /// `‖∂T‖_KR`, solved as a transport problem.
    pub fn kr_norm_of_boundary(&self) -> Result<f64> {
        crate::transport::kr_norm(&self.boundary())
    }

    /// `i_# T` for the embedding `x ↦ x ⊕ 0` into `X ⊕ R`.
    pub fn lift(&self) -> PolyhedralCurrent {
        let lift = |x: &Vec<f64>| {
            let mut y = x.clone();
            y.push(0.0);
            y
        };
        let pieces = self.pieces.iter().map(|p| Piece::new(lift(&p.a), lift(&p.b), p.w)).collect();
        PolyhedralCurrent { space: self.space.lifted(), pieces }
    }

    /// Image under the projection `X ⊕ R → X`.
    pub fn project(&self) -> Result<PolyhedralCurrent> {
        if self.space.dim < 2 {
            return Err(Error::InvalidSpace("cannot project a 1-dimensional space".into()));
        }
        let base = VectorSpace { dim: self.space.dim - 1, norm: self.space.norm };
        let drop = |x: &Vec<f64>| x[..x.len() - 1].to_vec();
        let pieces = self.pieces.iter().map(|p| Piece::new(drop(&p.a), drop(&p.b), p.w)).collect();
        Ok(PolyhedralCurrent { space: base, pieces })
    }

    /// Bounding box of the support.
    pub fn support_bounds(&self) -> Option<AxisBox> {
        let first = self.pieces.first()?;
        let mut lo = first.a.clone();
        let mut hi = first.a.clone();
        for p in &self.pieces {
            for x in [&p.a, &p.b] {
                for i in 0..x.len() {
                    lo[i] = lo[i].min(x[i]);
                    hi[i] = hi[i].max(x[i]);
                }
            }
        }
        Some(AxisBox { lo, hi })
    }

    /// Endpoints of the pieces as points.
    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.pieces.iter().flat_map(|p| [Point::Coords(p.a.clone()), Point::Coords(p.b.clone())])
    }
}

fn point_at(p: &Piece, t: f64) -> Vec<f64> {
    if t <= 0.0 {
        p.a.clone()
    } else if t >= 1.0 {
        p.b.clone()
    } else {
        p.a.iter().zip(&p.b).map(|(x, y)| x + t * (y - x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::form::{LipschitzFn, TestFunction};
    use crate::geometry::Norm;

    fn plane() -> VectorSpace {
        VectorSpace::euclidean(2)
    }

    fn seg(a: [f64; 2], b: [f64; 2], w: f64) -> Piece {
        Piece::new(a.to_vec(), b.to_vec(), w)
    }

    fn square() -> PolyhedralCurrent {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]].map(|p| p.to_vec());
        PolyhedralCurrent::polyline(plane(), &pts, 1.0).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let t = PolyhedralCurrent::new(plane(), vec![seg([0.0, 0.0], [1.0, 2.0], 1.0)]).unwrap();
        let expected = Molecule::dipole(plane().into(), vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        assert!(t.boundary().approx_eq(&expected));
        assert!(square().boundary().is_empty());

        let line = VectorSpace::euclidean(1);
        let chain = PolyhedralCurrent::polyline(line, &[vec![0.0], vec![1.0], vec![2.0]], 1.0).unwrap();
        let b = chain.boundary();
        assert_eq!(b.atoms(), &[Atom::new(vec![0.0], -1.0), Atom::new(vec![2.0], 1.0)]);
    }

    #[test]
    fn canonicalize_cancels_and_overlays() {
        let line = VectorSpace::euclidean(1);
        let t = PolyhedralCurrent::new(
            line,
            vec![Piece::new(vec![0.0], vec![1.0], 1.0), Piece::new(vec![1.0], vec![0.0], 1.0)],
        )
        .unwrap();
        assert!(t.canonicalize().is_empty());
        assert_eq!(t.mass_total(), 0.0);

        let t = PolyhedralCurrent::new(
            line,
            vec![Piece::new(vec![0.0], vec![2.0], 1.0), Piece::new(vec![1.0], vec![3.0], 1.0)],
        )
        .unwrap();
        let c = t.canonicalize();
        assert_eq!(
            c.pieces(),
            &[
                Piece::new(vec![0.0], vec![1.0], 1.0),
                Piece::new(vec![1.0], vec![2.0], 2.0),
                Piece::new(vec![2.0], vec![3.0], 1.0),
            ]
        );
        assert_eq!(c.canonicalize(), c);
        assert_eq!(t.mass_total(), 4.0);
    }

    #[test]
    fn canonicalize_joins_and_orients() {
        let t = PolyhedralCurrent::new(
            plane(),
            vec![seg([2.0, 2.0], [1.0, 1.0], 1.0), seg([0.0, 0.0], [1.0, 1.0], -1.0)],
        )
        .unwrap();
        let c = t.canonicalize();
        assert_eq!(c.pieces(), &[seg([2.0, 2.0], [0.0, 0.0], 1.0)]);
        assert!(c.approx_eq(&t));
        assert!(c.boundary().approx_eq(&t.boundary()));
    }

    #[test]
    fn mass_examples() {
        let t = PolyhedralCurrent::new(plane(), vec![seg([0.0, 0.0], [3.0, 0.0], 2.0)]).unwrap();
        assert_eq!(t.mass_total(), 6.0);
        let n = 256;
        let pts: Vec<Vec<f64>> = (0..=n)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let semi = PolyhedralCurrent::polyline(plane(), &pts, 1.0).unwrap();
        let chord_sum = 2.0 * n as f64 * (std::f64::consts::PI / (2.0 * n as f64)).sin();
        assert!((semi.mass_total() - chord_sum).abs() < 1e-12);
        assert!((semi.mass_total() - std::f64::consts::PI).abs() < 1e-4);
    }

    #[test]
    fn restriction_examples() {
        let t = PolyhedralCurrent::new(plane(), vec![seg([0.0, 0.0], [2.0, 0.0], 1.0)]).unwrap();
        let bx = AxisBox::new(vec![0.0, f64::NEG_INFINITY], vec![1.0, f64::INFINITY]);
        assert_eq!(t.restrict(&bx).pieces(), &[seg([0.0, 0.0], [1.0, 0.0], 1.0)]);
        assert_eq!(t.restrict_complement(&bx).pieces(), &[seg([1.0, 0.0], [2.0, 0.0], 1.0)]);
        let far = AxisBox::new(vec![5.0, 5.0], vec![6.0, 6.0]);
        assert!(t.restrict(&far).is_empty());

        // a piece lying on the upper face is excluded, on the lower face included
        let lower = AxisBox::new(vec![-1.0, 0.0], vec![3.0, 1.0]);
        assert_eq!(t.restrict(&lower).mass_total(), 2.0);
        let upper = AxisBox::new(vec![-1.0, -1.0], vec![3.0, 0.0]);
        assert!(t.restrict(&upper).is_empty());
    }

    #[test]
    fn semicircle_restriction_matches_clipped_chords() {
        let n = 64;
        let pts: Vec<Vec<f64>> = (0..=n)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let semi = PolyhedralCurrent::polyline(plane(), &pts, 1.0).unwrap();
        let bx = AxisBox::new(vec![f64::NEG_INFINITY, 0.5], vec![f64::INFINITY, f64::INFINITY]);
        // oracle: clip each chord against y ≥ 1/2 by hand
        let mut expected = 0.0;
        for w in pts.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            let (y0, y1) = (p[1], q[1]);
            let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
            let frac = if y0 >= 0.5 && y1 >= 0.5 {
                1.0
            } else if y0 < 0.5 && y1 < 0.5 {
                0.0
            } else {
                let t = (0.5 - y0) / (y1 - y0);
                if y0 < 0.5 { 1.0 - t } else { t }
            };
            expected += frac * len;
        }
        let r = semi.restrict(&bx);
        assert!((r.mass_total() - expected).abs() < 1e-12);
        let c = semi.restrict_complement(&bx);
        assert!((r.mass_total() + c.mass_total() - semi.mass_total()).abs() < 1e-12);
        assert!((semi.mass().of_box(&bx) - expected).abs() < 1e-12);
    }

    #[test]
    fn pushforward_examples() {
        let t = square();
        let moved = t.pushforward(&AffineMap::translation(vec![3.0, -1.0]), plane()).unwrap();
        assert_eq!(moved.mass_total(), 4.0);
        assert_eq!(moved.pieces()[0].a, vec![3.0, -1.0]);
        let big = t.pushforward(&AffineMap::scaling(2, 2.0), plane()).unwrap();
        assert_eq!(big.mass_total(), 8.0);
        assert!(t.pushforward(&AffineMap::identity(3), plane()).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let line = VectorSpace::euclidean(1);
        let t = PolyhedralCurrent::new(line, vec![Piece::new(vec![0.0], vec![1.0], 1.0)]).unwrap();
        let one = MetricForm::new(TestFunction::Constant { value: 1.0 }, LipschitzFn::Coordinate { index: 0 });
        assert!((t.evaluate(&one) - 1.0).abs() < 1e-15);
        let x = MetricForm::new(
            TestFunction::Affine { a: vec![1.0], b: 0.0 },
            LipschitzFn::Coordinate { index: 0 },
        );
        assert!((t.evaluate(&x) - 0.5).abs() < 1e-15);

        // π is constant near the support of f
        let bump = TestFunction::Bump { center: vec![0.0, 0.0], inner: 0.5, outer: 1.0 };
        let clamped = LipschitzFn::Clamped { inner: Box::new(LipschitzFn::Coordinate { index: 0 }), lo: 5.0, hi: 6.0 };
        let form = MetricForm::new(bump, clamped);
        let t = PolyhedralCurrent::new(plane(), vec![seg([-2.0, 0.1], [2.0, -0.3], 1.5)]).unwrap();
        assert_eq!(t.evaluate(&form), 0.0);
    }

    #[test]
    fn l1_norm_masses() {
        let s = VectorSpace::new(2, Norm::L1).unwrap();
        let t = PolyhedralCurrent::new(s, vec![seg([0.0, 0.0], [1.0, 1.0], 1.0)]).unwrap();
        assert_eq!(t.mass_total(), 2.0);
        let l = t.lift();
        assert_eq!(l.space().dim, 3);
        assert_eq!(l.project().unwrap(), t);
    }
}
