use serde::{Deserialize, Serialize};

use crate::currents::{Piece, PolyhedralCurrent};
use crate::geometry::VectorSpace;
use crate::{tol, Error, Result};

/// `u(t) = v0 + slope·(t − t0)` on `[t0, t1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub t0: f64,
    pub t1: f64,
    pub v0: f64,
    pub slope: f64,
}

impl AffinePiece {
    pub fn end_value(&self) -> f64 {
        self.v0 + self.slope * (self.t1 - self.t0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarJump {
    pub t: f64,
    pub left: f64,
    pub right: f64,
}

/// A right-continuous non-decreasing piecewise-affine map `[0,1] → [0,1]`.
///
/// Pieces tile `[0,1]`; the value at `1` is the left limit of the last
/// piece. Jumps sit at piece boundaries where the left limit differs from the
/// next start value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneCadlag {
    pieces: Vec<AffinePiece>,
}

impl MonotoneCadlag {
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        let t = tol();
        let bad = |m: &str| Err(Error::InvalidValue(format!("monotone map: {m}")));
        let (Some(first), Some(last)) = (pieces.first(), pieces.last()) else {
            return bad("no pieces");
        };
        if first.t0.abs() > t || (last.t1 - 1.0).abs() > t {
            return bad("pieces must cover [0, 1]");
        }
        for p in &pieces {
            if !(p.t1 > p.t0) || !p.slope.is_finite() || p.slope < 0.0 || !p.v0.is_finite() {
                return bad("each piece needs t0 < t1 and a finite slope >= 0");
            }
            if p.v0 < -t || p.end_value() > 1.0 + t {
                return bad("values must lie in [0, 1]");
            }
        }
        for w in pieces.windows(2) {
            if (w[0].t1 - w[1].t0).abs() > t {
                return bad("pieces must be contiguous");
            }
            if w[1].v0 < w[0].end_value() - t {
                return bad("map must be non-decreasing");
            }
        }
        Ok(MonotoneCadlag { pieces })
    }

    pub fn constant(value: f64) -> Self {
        MonotoneCadlag { pieces: vec![AffinePiece { t0: 0.0, t1: 1.0, v0: value, slope: 0.0 }] }
    }

    pub fn identity() -> Self {
        MonotoneCadlag { pieces: vec![AffinePiece { t0: 0.0, t1: 1.0, v0: 0.0, slope: 1.0 }] }
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    fn piece_at(&self, t: f64) -> &AffinePiece {
        let k = self.pieces.partition_point(|p| p.t1 <= t);
        &self.pieces[k.min(self.pieces.len() - 1)]
    }

    /// `u(t)`, right-continuous.
    pub fn eval(&self, t: f64) -> f64 {
        let p = self.piece_at(t.clamp(0.0, 1.0));
        p.v0 + p.slope * (t.clamp(p.t0, p.t1) - p.t0)
    }

    /// `u⁻(t)`, with `u⁻(0) = u(0)`.
    pub fn left_limit(&self, t: f64) -> f64 {
        let k = self.pieces.partition_point(|p| p.t0 < t).saturating_sub(1);
        let p = &self.pieces[k];
        p.v0 + p.slope * (t.clamp(p.t0, p.t1) - p.t0)
    }

    pub fn jumps(&self) -> Vec<ScalarJump> {
        self.pieces
            .windows(2)
            .filter(|w| w[1].v0 - w[0].end_value() > tol())
            .map(|w| ScalarJump { t: w[1].t0, left: w[0].end_value(), right: w[1].v0 })
            .collect()
    }

    /// `|D^a u|((0,1))`.
    pub fn absolutely_continuous_variation(&self) -> f64 {
        self.pieces.iter().map(|p| p.slope * (p.t1 - p.t0)).sum()
    }

    pub fn jump_variation(&self) -> f64 {
        self.jumps().iter().map(|j| j.right - j.left).sum()
    }

    pub fn total_variation(&self) -> f64 {
        self.absolutely_continuous_variation() + self.jump_variation()
    }

    /// `⟦u⟧^a` on the line: the images of the affine pieces.
    pub fn current_a(&self) -> PolyhedralCurrent {
        let pieces = self
            .pieces
            .iter()
            .filter(|p| p.slope > 0.0)
            .map(|p| Piece::new(vec![p.v0], vec![p.end_value()], 1.0))
            .collect();
        PolyhedralCurrent::new(VectorSpace::euclidean(1), pieces).expect("finite values")
    }

    /// `⟦u⟧^j` on the line: one segment per jump.
    pub fn current_j(&self) -> PolyhedralCurrent {
        let pieces = self.jumps().iter().map(|j| Piece::new(vec![j.left], vec![j.right], 1.0)).collect();
        PolyhedralCurrent::new(VectorSpace::euclidean(1), pieces).expect("finite values")
    }

    /// `∫_0^1 |u − v| dt`, exact for piecewise-affine maps.
    pub fn l1_distance(&self, other: &MonotoneCadlag) -> f64 {
        let mut cuts: Vec<f64> = self.pieces.iter().chain(&other.pieces).flat_map(|p| [p.t0, p.t1]).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let mid = 0.5 * (a + b);
            let (p, q) = (self.piece_at(mid), other.piece_at(mid));
            let d = |t: f64| (p.v0 + p.slope * (t - p.t0)) - (q.v0 + q.slope * (t - q.t0));
            let (da, db) = (d(a), d(b));
            total += if da * db >= 0.0 {
                0.5 * (da.abs() + db.abs()) * (b - a)
            } else {
                // the linear difference changes sign at r
                let r = a + (b - a) * da.abs() / (da.abs() + db.abs());
                0.5 * (da.abs() * (r - a) + db.abs() * (b - r))
            };
        }
        total
    }
}

/// Checks and normalizes a finite union of closed intervals in `[0,1]`:
/// zero-length intervals are dropped and touching ones merged.
pub fn normalize_intervals(k: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let t = tol();
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(k.len());
    let mut prev_end = f64::NEG_INFINITY;
    for &(a, b) in k {
        if !a.is_finite() || !b.is_finite() || a > b + t {
            return Err(Error::InvalidIntervals(format!("[{a}, {b}] is not an interval")));
        }
        if a < -t || b > 1.0 + t {
            return Err(Error::InvalidIntervals(format!("[{a}, {b}] leaves [0, 1]")));
        }
        if a < prev_end - t {
            return Err(Error::InvalidIntervals(format!("[{a}, {b}] overlaps or precedes its predecessor")));
        }
        prev_end = prev_end.max(b);
        if b - a <= t {
            continue;
        }
        match out.last_mut() {
            Some(last) if a - last.1 <= t => last.1 = b,
            _ => out.push((a.max(0.0), b.min(1.0))),
        }
    }
    Ok(out)
}

/// The transport parametrization `u_K`: pseudo-inverse of
/// `x ↦ |K|⁻¹ ∫_0^x 1_K`. On the `i`-th interval `[a_i, b_i]` it runs with
/// slope `|K|` over `[c_{i−1}, c_i)`, `c_i` the normalized cumulative
/// length, and it jumps across every gap of `K`.
pub fn transport_param(k: &[(f64, f64)]) -> Result<MonotoneCadlag> {
    let k = normalize_intervals(k)?;
    let measure: f64 = k.iter().map(|(a, b)| b - a).sum();
    if k.is_empty() {
        return Ok(MonotoneCadlag::constant(0.0));
    }
    let mut pieces = Vec::with_capacity(k.len());
    let mut acc = 0.0;
    for (i, &(a, b)) in k.iter().enumerate() {
        let t0 = acc / measure;
        acc += b - a;
        let t1 = if i + 1 == k.len() { 1.0 } else { acc / measure };
        pieces.push(AffinePiece { t0, t1, v0: a, slope: measure });
    }
    // pin the closing value to b_last despite rounding in the slope
    let last = pieces.last_mut().unwrap();
    let (_, b_last) = k[k.len() - 1];
    if last.t1 > last.t0 {
        last.slope = (b_last - last.v0) / (last.t1 - last.t0);
    }
    MonotoneCadlag::new(pieces)
}

/// Both sides of the area formula
/// `∫_{U ∩ im φ} g dx = ∫_{φ⁻¹(U)} g(φ(t)) dD^a φ(t)` for a quadratic
/// `g(x) = g0 + g1 x + g2 x²` and an interval `U = [lo, hi]`.
///
/// The left side integrates an antiderivative over the image intervals; the
/// right side integrates in the parameter with a 3-point Gauss rule, exact
/// for the quadratic integrand.
pub fn area_check(phi: &MonotoneCadlag, g: [f64; 3], u: (f64, f64)) -> (f64, f64) {
    let (lo, hi) = u;
    let prim = |x: f64| x * (g[0] + x * (g[1] / 2.0 + x * g[2] / 3.0));
    let gx = |x: f64| g[0] + x * (g[1] + x * g[2]);
    let nodes = [
        (0.5 - 0.5 * (0.6f64).sqrt(), 5.0 / 18.0),
        (0.5, 8.0 / 18.0),
        (0.5 + 0.5 * (0.6f64).sqrt(), 5.0 / 18.0),
    ];
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for p in phi.pieces() {
        if p.slope <= 0.0 {
            continue;
        }
        let (x0, x1) = (p.v0.max(lo), p.end_value().min(hi));
        if x1 > x0 {
            lhs += prim(x1) - prim(x0);
        }
        let s0 = (p.t0 + (lo - p.v0) / p.slope).max(p.t0);
        let s1 = (p.t0 + (hi - p.v0) / p.slope).min(p.t1);
        if s1 > s0 {
            let h = s1 - s0;
            rhs += nodes
                .iter()
                .map(|&(x, w)| {
                    let t = s0 + h * x;
                    w * gx(p.v0 + p.slope * (t - p.t0)) * p.slope
                })
                .sum::<f64>()
                * h;
        }
    }
    (lhs, rhs)
}
