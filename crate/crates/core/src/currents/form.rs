use serde::{Deserialize, Serialize};

use crate::geometry::{Norm, VectorSpace};
use crate::quadrature;
use crate::{Error, Result};

/// The `f` slot of a metric 1-form `(f, π)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    Constant { value: f64 },
    /// `x ↦ a·x + b`.
    Affine { a: Vec<f64>, b: f64 },
    /// `x ↦ c + Σ linear_i x_i + Σ quadratic_i x_i²`.
    Quadratic { c: f64, linear: Vec<f64>, quadratic: Vec<f64> },
    /// `1` within `inner` of `center`, `0` beyond `outer`, linear in the
    /// distance in between.
    Bump { center: Vec<f64>, inner: f64, outer: f64 },
}

/// The `π` slot of a metric 1-form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LipschitzFn {
    /// `x ↦ c·x + e`.
    Affine { c: Vec<f64>, e: f64 },
    Coordinate { index: usize },
    DistanceTo { point: Vec<f64> },
    /// `x ↦ clamp(inner(x), lo, hi)`.
    Clamped { inner: Box<LipschitzFn>, lo: f64, hi: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricForm {
    pub f: TestFunction,
    pub pi: LipschitzFn,
}

fn at(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Zeros of `p(t) = c0 + c1 t + c2 t²` inside `(0, 1)`.
fn poly_roots(c: [f64; 3]) -> Vec<f64> {
    let [c0, c1, c2] = c;
    let mut roots = Vec::new();
    if c2 == 0.0 {
        if c1 != 0.0 {
            roots.push(-c0 / c1);
        }
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc >= 0.0 {
            let sgn = if c1 >= 0.0 { 1.0 } else { -1.0 };
            let q = -0.5 * (c1 + sgn * disc.sqrt());
            if q != 0.0 {
                roots.push(q / c2);
                roots.push(c0 / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    roots.retain(|t| *t > 0.0 && *t < 1.0);
    roots
}

/// Parameters in `(0, 1)` where the convex function `t ↦ ‖a + t(b−a) − p‖`
/// equals `level`.
fn norm_level_crossings(norm: Norm, a: &[f64], b: &[f64], p: &[f64], level: f64) -> Vec<f64> {
    let g = |t: f64| {
        let x = at(a, b, t);
        let r: Vec<f64> = x.iter().zip(p).map(|(u, v)| u - v).collect();
        norm.of(&r) - level
    };
    // golden-section search for the minimum of a convex function
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let phi = 0.618_033_988_749_894_9;
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let m = 0.5 * (lo + hi);
    let mut out = Vec::new();
    if g(m) >= 0.0 {
        return out;
    }
    for (s, e) in [(0.0, m), (m, 1.0)] {
        if g(s).signum() == g(e).signum() {
            continue;
        }
        let (mut x0, mut x1) = (s, e);
        for _ in 0..200 {
            let mid = 0.5 * (x0 + x1);
            if g(mid).signum() == g(x0).signum() {
                x0 = mid;
            } else {
                x1 = mid;
            }
            if x1 - x0 < 1e-16 {
                break;
            }
        }
        let t = 0.5 * (x0 + x1);
        if t > 0.0 && t < 1.0 {
            out.push(t);
        }
    }
    out
}

impl TestFunction {
    pub fn value(&self, space: &VectorSpace, x: &[f64]) -> f64 {
        match self {
            TestFunction::Constant { value } => *value,
            TestFunction::Affine { a, b } => dot(a, x) + b,
            TestFunction::Quadratic { c, linear, quadratic } => {
                c + dot(linear, x) + quadratic.iter().zip(x).map(|(q, xi)| q * xi * xi).sum::<f64>()
            }
            TestFunction::Bump { center, inner, outer } => {
                let r = space.dist(x, center);
                if r <= *inner {
                    1.0
                } else if r >= *outer {
                    0.0
                } else {
                    (outer - r) / (outer - inner)
                }
            }
        }
    }

    /// Coefficients of `t ↦ f(a + t(b−a))` for the polynomial variants.
    fn poly_along(&self, a: &[f64], b: &[f64]) -> Option<[f64; 3]> {
        let d: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        match self {
            TestFunction::Constant { value } => Some([*value, 0.0, 0.0]),
            TestFunction::Affine { a: c, b: e } => Some([dot(c, a) + e, dot(c, &d), 0.0]),
            TestFunction::Quadratic { c, linear, quadratic } => {
                let mut k = [c + dot(linear, a), dot(linear, &d), 0.0];
                for i in 0..a.len().min(quadratic.len()) {
                    k[0] += quadratic[i] * a[i] * a[i];
                    k[1] += 2.0 * quadratic[i] * a[i] * d[i];
                    k[2] += quadratic[i] * d[i] * d[i];
                }
                Some(k)
            }
            TestFunction::Bump { .. } => None,
        }
    }

    fn kinks(&self, space: &VectorSpace, a: &[f64], b: &[f64]) -> Vec<f64> {
        match self {
            TestFunction::Bump { center, inner, outer } => {
                let mut k = norm_level_crossings(space.norm, a, b, center, *inner);
                k.extend(norm_level_crossings(space.norm, a, b, center, *outer));
                k
            }
            _ => Vec::new(),
        }
    }

    pub fn lipschitz(&self, space: &VectorSpace, bound: f64) -> f64 {
        let n = space.norm;
        match self {
            TestFunction::Constant { .. } => 0.0,
            TestFunction::Affine { a, .. } => n.dual_of(a),
            // on the ball of radius `bound`
            TestFunction::Quadratic { linear, quadratic, .. } => {
                let g: Vec<f64> = linear.iter().zip(quadratic).map(|(l, q)| l.abs() + 2.0 * q.abs() * bound).collect();
                n.dual_of(&g)
            }
            TestFunction::Bump { inner, outer, .. } => 1.0 / (outer - inner),
        }
    }

    /// `∫_0^1 |f(a + t(b−a))| dt`.
    pub fn abs_mean_on_segment(&self, space: &VectorSpace, a: &[f64], b: &[f64]) -> f64 {
        let mut cuts = match self.poly_along(a, b) {
            Some(c) => poly_roots(c),
            None => self.kinks(space, a, b),
        };
        cuts.push(0.0);
        cuts.push(1.0);
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2)
            .map(|w| quadrature::integrate(w[0], w[1], |t| self.value(space, &at(a, b, t)).abs()))
            .sum()
    }
}

impl LipschitzFn {
    pub fn value(&self, space: &VectorSpace, x: &[f64]) -> f64 {
        match self {
            LipschitzFn::Affine { c, e } => dot(c, x) + e,
            LipschitzFn::Coordinate { index } => x[*index],
            LipschitzFn::DistanceTo { point } => space.dist(x, point),
            LipschitzFn::Clamped { inner, lo, hi } => inner.value(space, x).clamp(*lo, *hi),
        }
    }

    /// Lipschitz constant with respect to the space's norm.
    pub fn lipschitz(&self, space: &VectorSpace) -> f64 {
        match self {
            LipschitzFn::Affine { c, .. } => space.norm.dual_of(c),
            LipschitzFn::Coordinate { .. } | LipschitzFn::DistanceTo { .. } => 1.0,
            LipschitzFn::Clamped { inner, .. } => inner.lipschitz(space),
        }
    }

    fn affine_along(&self, a: &[f64], b: &[f64]) -> Option<(f64, f64)> {
        match self {
            LipschitzFn::Affine { c, e } => Some((dot(c, a) + e, dot(c, b) - dot(c, a))),
            LipschitzFn::Coordinate { index } => Some((a[*index], b[*index] - a[*index])),
            _ => None,
        }
    }

    /// Derivative of `t ↦ π(a + t(b−a))` at an interior, non-kink `t`.
    fn derivative_along(&self, space: &VectorSpace, a: &[f64], b: &[f64], t: f64) -> f64 {
        match self {
            LipschitzFn::Affine { .. } | LipschitzFn::Coordinate { .. } => self.affine_along(a, b).unwrap().1,
            LipschitzFn::DistanceTo { point } => {
                let x = at(a, b, t);
                let r: Vec<f64> = x.iter().zip(point).map(|(u, v)| u - v).collect();
                let d: Vec<f64> = b.iter().zip(a).map(|(u, v)| u - v).collect();
                match space.norm {
                    Norm::Euclidean => {
                        let n = Norm::Euclidean.of(&r);
                        if n == 0.0 {
                            0.0
                        } else {
                            dot(&r, &d) / n
                        }
                    }
                    Norm::L1 => r.iter().zip(&d).map(|(ri, di)| ri.signum() * di).sum(),
                    Norm::LInf => {
                        let (i, _) = r
                            .iter()
                            .enumerate()
                            .fold((0, -1.0), |(bi, bm), (i, v)| if v.abs() > bm { (i, v.abs()) } else { (bi, bm) });
                        r[i].signum() * d[i]
                    }
                }
            }
            LipschitzFn::Clamped { inner, lo, hi } => {
                let v = inner.value(space, &at(a, b, t));
                if v > *lo && v < *hi {
                    inner.derivative_along(space, a, b, t)
                } else {
                    0.0
                }
            }
        }
    }

    /// Parameters in `(0, 1)` where `t ↦ π(a + t(b−a))` may fail to be smooth.
    fn kinks(&self, space: &VectorSpace, a: &[f64], b: &[f64]) -> Vec<f64> {
        match self {
            LipschitzFn::Affine { .. } | LipschitzFn::Coordinate { .. } => Vec::new(),
            LipschitzFn::DistanceTo { point } => {
                let d: Vec<f64> = b.iter().zip(a).map(|(u, v)| u - v).collect();
                let r0: Vec<f64> = a.iter().zip(point).map(|(u, v)| u - v).collect();
                let mut k = Vec::new();
                match space.norm {
                    Norm::Euclidean => {
                        let dd = dot(&d, &d);
                        if dd > 0.0 {
                            k.push(-dot(&r0, &d) / dd);
                        }
                    }
                    Norm::L1 => {
                        for i in 0..d.len() {
                            if d[i] != 0.0 {
                                k.push(-r0[i] / d[i]);
                            }
                        }
                    }
                    Norm::LInf => {
                        for i in 0..d.len() {
                            if d[i] != 0.0 {
                                k.push(-r0[i] / d[i]);
                            }
                            for j in (i + 1)..d.len() {
                                for s in [1.0, -1.0] {
                                    let den = d[i] - s * d[j];
                                    if den != 0.0 {
                                        k.push((s * r0[j] - r0[i]) / den);
                                    }
                                }
                            }
                        }
                    }
                }
                k.retain(|t| *t > 0.0 && *t < 1.0);
                k
            }
            LipschitzFn::Clamped { inner, lo, hi } => {
                let mut k = inner.kinks(space, a, b);
                let mut cuts = k.clone();
                cuts.push(0.0);
                cuts.push(1.0);
                cuts.sort_by(f64::total_cmp);
                let g = |t: f64| inner.value(space, &at(a, b, t));
                for w in cuts.windows(2) {
                    for level in [*lo, *hi] {
                        k.extend(level_crossings(&g, w[0], w[1], level));
                    }
                }
                k
            }
        }
    }
}

/// Sign changes of `g − level` on `[s, e]`, found by sampling and bisection.
fn level_crossings(g: &impl Fn(f64) -> f64, s: f64, e: f64, level: f64) -> Vec<f64> {
    const SAMPLES: usize = 64;
    let mut out = Vec::new();
    let h = |t: f64| g(t) - level;
    let mut prev_t = s;
    let mut prev = h(s);
    for i in 1..=SAMPLES {
        let t = s + (e - s) * i as f64 / SAMPLES as f64;
        let v = h(t);
        if prev == 0.0 {
            out.push(prev_t);
        } else if prev.signum() != v.signum() && v != 0.0 {
            let (mut x0, mut x1) = (prev_t, t);
            for _ in 0..200 {
                let m = 0.5 * (x0 + x1);
                if h(m).signum() == prev.signum() {
                    x0 = m;
                } else {
                    x1 = m;
                }
                if x1 - x0 < 1e-16 {
                    break;
                }
            }
            out.push(0.5 * (x0 + x1));
        }
        prev_t = t;
        prev = v;
    }
    out.retain(|t| *t > 0.0 && *t < 1.0);
    out
}

impl MetricForm {
    pub fn new(f: TestFunction, pi: LipschitzFn) -> Self {
        MetricForm { f, pi }
    }

    /// Rejects forms whose vectors or coordinate index do not fit `dim`.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        let bad = |got: usize| Err(Error::DimensionMismatch { expected: dim, got });
        match &self.f {
            TestFunction::Affine { a, .. } if a.len() != dim => return bad(a.len()),
            TestFunction::Quadratic { linear, quadratic, .. } if linear.len() != dim || quadratic.len() != dim => {
                return bad(if linear.len() != dim { linear.len() } else { quadratic.len() })
            }
            TestFunction::Bump { center, .. } if center.len() != dim => return bad(center.len()),
            _ => {}
        }
        let mut pi = &self.pi;
        loop {
            match pi {
                LipschitzFn::Affine { c, .. } if c.len() != dim => return bad(c.len()),
                LipschitzFn::DistanceTo { point } if point.len() != dim => return bad(point.len()),
                LipschitzFn::Coordinate { index } if *index >= dim => return bad(index + 1),
                LipschitzFn::Clamped { inner, .. } => pi = inner,
                _ => return Ok(()),
            }
        }
    }

    /// `∫_0^1 f(θ(t)) (π∘θ)'(t) dt` for `θ(t) = a + t(b−a)`.
    ///
    /// Exact (Simpson) for polynomial `f` and affine `π`; otherwise the
    /// segment is cut at the kinks of both factors and each part is integrated
    /// with the 16-point Gauss–Legendre rule, bisected adaptively where the
    /// integrand is close to singular.
    pub fn integrate_segment(&self, space: &VectorSpace, a: &[f64], b: &[f64]) -> f64 {
        if let (Some(p), Some((_, slope))) = (self.f.poly_along(a, b), self.pi.affine_along(a, b)) {
            let val = |t: f64| p[0] + t * (p[1] + t * p[2]);
            return slope * (val(0.0) + 4.0 * val(0.5) + val(1.0)) / 6.0;
        }
        let mut cuts = self.f.kinks(space, a, b);
        cuts.extend(self.pi.kinks(space, a, b));
        cuts.push(0.0);
        cuts.push(1.0);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.windows(2)
            .map(|w| {
                let integrand = |t: f64| {
                    let fx = self.f.value(space, &at(a, b, t));
                    if fx == 0.0 {
                        0.0
                    } else {
                        fx * self.pi.derivative_along(space, a, b, t)
                    }
                };
                quadrature::integrate_adaptive(w[0], w[1], &integrand, 1e-14)
            })
            .sum()
    }

    pub fn lipschitz_pi(&self, space: &VectorSpace) -> f64 {
        self.pi.lipschitz(space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> VectorSpace {
        VectorSpace::euclidean(2)
    }

    #[test]
    fn exact_polynomial_integrals() {
        let f = TestFunction::Quadratic { c: 1.0, linear: vec![0.0, 0.0], quadratic: vec![1.0, 0.0] };
        let form = MetricForm::new(f, LipschitzFn::Coordinate { index: 0 });
        // ∫_0^2 (1 + x²) dx = 2 + 8/3
        let v = form.integrate_segment(&plane(), &[0.0, 0.0], &[2.0, 0.0]);
        assert!((v - (2.0 + 8.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn distance_pi_matches_closed_form() {
        // f ≡ 1 and π = |x|: the integral telescopes to π(b) − π(a).
        let one = TestFunction::Constant { value: 1.0 };
        for norm in [Norm::Euclidean, Norm::L1, Norm::LInf] {
            let s = VectorSpace::new(2, norm).unwrap();
            let pi = LipschitzFn::DistanceTo { point: vec![0.0, 0.0] };
            let form = MetricForm::new(one.clone(), pi.clone());
            let (a, b) = ([-1.0, -0.3], [2.0, 0.5]);
            let v = form.integrate_segment(&s, &a, &b);
            assert!((v - (pi.value(&s, &b) - pi.value(&s, &a))).abs() < 1e-12, "{norm:?}");
        }
    }

    #[test]
    fn clamped_pi_telescopes() {
        let one = TestFunction::Constant { value: 1.0 };
        let pi = LipschitzFn::Clamped { inner: Box::new(LipschitzFn::DistanceTo { point: vec![0.0, 0.0] }), lo: 0.5, hi: 1.5 };
        let form = MetricForm::new(one, pi.clone());
        let (a, b) = ([-2.0, 0.1], [2.0, 0.1]);
        let v = form.integrate_segment(&plane(), &a, &b);
        assert!((v - (pi.value(&plane(), &b) - pi.value(&plane(), &a))).abs() < 1e-12);
        assert_eq!(pi.lipschitz(&plane()), 1.0);
    }

    #[test]
    fn bump_against_coordinate() {
        // ∫ bump along the x-axis from −2 to 2: 2·inner + (outer − inner)
        let f = TestFunction::Bump { center: vec![0.0, 0.0], inner: 0.5, outer: 1.0 };
        let form = MetricForm::new(f, LipschitzFn::Coordinate { index: 0 });
        let v = form.integrate_segment(&plane(), &[-2.0, 0.0], &[2.0, 0.0]);
        assert!((v - 1.5).abs() < 1e-12);
    }

    #[test]
    fn dual_lipschitz_constants() {
        let pi = LipschitzFn::Affine { c: vec![1.0, -2.0], e: 0.0 };
        assert_eq!(pi.lipschitz(&VectorSpace::new(2, Norm::L1).unwrap()), 2.0);
        assert_eq!(pi.lipschitz(&VectorSpace::new(2, Norm::LInf).unwrap()), 3.0);
    }

    #[test]
    fn json_shape() {
        let form: MetricForm = serde_json::from_str(
            r#"{"f":{"kind":"bump","center":[0,0],"inner":1,"outer":2},"pi":{"kind":"distance_to","point":[1,1]}}"#,
        )
        .unwrap();
        assert!(matches!(form.pi, LipschitzFn::DistanceTo { .. }));
    }

    #[test]
    fn poly_roots_in_unit_interval() {
        let mut r = poly_roots([0.21, -1.0, 1.0]); // (t − 0.3)(t − 0.7)
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 0.3).abs() < 1e-14 && (r[1] - 0.7).abs() < 1e-14);
        assert_eq!(poly_roots([1.0, -2.0, 0.0]), vec![0.5]);
    }
}
