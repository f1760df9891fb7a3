use super::curve::{SbvCurve, SbvJump, SbvPiece};
use super::param::transport_param;
use crate::currents::PolyhedralCurrent;
use crate::cyclefill::{fill_lifted, restrict_x0, Filling};
use crate::decompose::{smirnov_decompose, WeightedCurve};
use crate::geometry::VectorSpace;
use crate::report::Report;
use crate::{tol, Error, Result};

/// A maximal run of consecutive edges lying in `X₀`, as vertex indices of
/// the rotated loop.
struct Run {
    first: usize,
    last: usize,
}

/// `β(θ) = ℵ ∘ θ ∘ u_K` for a closed polyline `θ` in `X ⊕ R`, with `K` the
/// arclength parameters where `θ` lies in `X₀` and `ℵ` the projection to
/// `X`. The pieces are the projected runs of `θ` inside `X₀`; each excursion
/// out of `X₀` becomes a jump, except the one the loop is rotated to start
/// after, which is the excursion with the longest projected jump.
pub fn beta(lifted: &VectorSpace, theta: &WeightedCurve) -> Result<SbvCurve> {
    if !theta.closed {
        return Err(Error::InvalidCurve("beta needs a closed loop".into()));
    }
    let h = tol() / 2.0;
    let dim = lifted.dim;
    let base = VectorSpace { dim: dim - 1, norm: lifted.norm };
    let project = |x: &Vec<f64>| x[..dim - 1].to_vec();
    let pts = &theta.points[..theta.points.len() - 1];
    let m = pts.len();
    let flat: Vec<bool> =
        (0..m).map(|k| pts[k][dim - 1].abs() <= h && pts[(k + 1) % m][dim - 1].abs() <= h).collect();
    if !flat.iter().any(|&f| f) {
        return Err(Error::NoTrace);
    }

    let rotated: Vec<Vec<f64>>;
    let runs: Vec<Run>;
    if flat.iter().all(|&f| f) {
        rotated = theta.points.clone();
        runs = vec![Run { first: 0, last: m }];
    } else {
        // runs on the cycle, each starting right after a non-flat edge
        let starts: Vec<usize> = (0..m).filter(|&k| flat[k] && !flat[(k + m - 1) % m]).collect();
        let mut cyc_runs: Vec<(usize, usize)> = Vec::new();
        for &s in &starts {
            let mut e = s;
            while flat[e % m] {
                e += 1;
            }
            cyc_runs.push((s, e)); // vertices s..=e (indices mod m)
        }
        // the excursion before run r goes from the end of run r−1 to the start of run r
        let gap = |r: usize| {
            let prev = cyc_runs[(r + cyc_runs.len() - 1) % cyc_runs.len()].1 % m;
            base.dist(&project(&pts[prev]), &project(&pts[cyc_runs[r].0]))
        };
        let mut best = 0;
        for r in 1..cyc_runs.len() {
            if gap(r) > gap(best) {
                best = r;
            }
        }
        let offset = cyc_runs[best].0;
        rotated = (0..=m).map(|k| pts[(offset + k) % m].clone()).collect();
        runs = cyc_runs
            .iter()
            .cycle()
            .skip(best)
            .take(cyc_runs.len())
            .map(|&(s, e)| Run { first: (s + m - offset) % m, last: (s + m - offset) % m + (e - s) })
            .collect();
    }

    // arclength positions along the rotated loop
    let mut s = vec![0.0; rotated.len()];
    for k in 1..rotated.len() {
        s[k] = s[k - 1] + lifted.dist(&rotated[k - 1], &rotated[k]);
    }
    let total = s[rotated.len() - 1];
    let k_set: Vec<(f64, f64)> = runs.iter().map(|r| (s[r.first] / total, s[r.last] / total)).collect();
    let u = transport_param(&k_set)?;
    if u.pieces().len() != runs.len() {
        return Err(Error::InvalidCurve("excursion runs did not stay separated".into()));
    }
    let speed: f64 = runs.iter().map(|r| s[r.last] - s[r.first]).sum();

    let mut pieces: Vec<SbvPiece> = Vec::with_capacity(runs.len());
    let mut jumps: Vec<SbvJump> = Vec::new();
    for (r, p) in runs.iter().zip(u.pieces()) {
        let poly: Vec<Vec<f64>> = rotated[r.first..=r.last].iter().map(project).collect();
        if let Some(prev) = pieces.last_mut() {
            let left = prev.polyline.last().unwrap().clone();
            if base.dist(&left, &poly[0]) <= tol() {
                // an excursion returning to its foot leaves no jump
                prev.t1 = p.t1;
                prev.polyline.extend(poly.into_iter().skip(1));
                continue;
            }
            jumps.push(SbvJump { t: p.t0, left, right: poly[0].clone() });
        }
        pieces.push(SbvPiece { t0: p.t0, t1: p.t1, polyline: poly });
    }
    Ok(SbvCurve { pieces, jumps, speed })
}

/// A finite weighted family of SBV curves representing a current.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRepresentation {
    pub entries: Vec<(SbvCurve, f64)>,
    pub target: PolyhedralCurrent,
    pub epsilon: f64,
    /// The lifted filling the curves were read off.
    pub filling: Filling,
    /// Loops of the filling, including those without trace on `X₀`.
    pub loops: Vec<WeightedCurve>,
}

/// fill in `X ⊕ R` → split the cycle into loops → `β` on every loop.
pub fn sbv_represent(t: &PolyhedralCurrent, eps: f64) -> Result<CurveRepresentation> {
    let filling = fill_lifted(t, eps)?;
    let lifted = *filling.cycle.space();
    let loops = smirnov_decompose(&filling.cycle);
    let mut entries = Vec::new();
    for l in &loops {
        if !l.closed {
            return Err(Error::InvalidCurve("filling left an open path".into()));
        }
        match beta(&lifted, l) {
            Ok(u) => entries.push((u, l.weight)),
            Err(Error::NoTrace) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(CurveRepresentation { entries, target: t.clone(), epsilon: eps, filling, loops })
}

impl CurveRepresentation {
    pub fn current(&self) -> PolyhedralCurrent {
        let space = *self.target.space();
        self.entries.iter().fold(PolyhedralCurrent::zero(space), |acc, (u, w)| {
            acc.plus(&u.current_a(space).scaled(*w)).expect("same space")
        })
    }

    pub fn weighted_length(&self) -> f64 {
        self.entries.iter().map(|(u, w)| w * u.length()).sum()
    }

    pub fn weighted_jumps(&self) -> f64 {
        let space = self.target.space();
        self.entries.iter().map(|(u, w)| w * u.jump_total(space)).sum()
    }

    /// Reconstruction, cancellation-free mass and the jump budget, plus the
    /// structural checks on every curve.
    pub fn verify(&self) -> Result<Report> {
        let tau = tol();
        let space = *self.target.space();
        let mut r = Report::new();
        let sum = self.current();
        r.push(
            "curves reconstruct T",
            sum.approx_eq(&self.target),
            format!("mass of difference {:.3e}", sum.distance_to(&self.target)),
        );
        let m = self.target.mass_total();
        r.close("sum of w * length = M(T)", self.weighted_length(), m, tau * (1.0 + m));
        let kr = self.target.kr_norm_of_boundary()?;
        r.at_most("sum of w * jumps <= KR + eps", self.weighted_jumps(), kr + self.epsilon + tau);
        let bad = self.entries.iter().filter_map(|(u, _)| u.validate(&space).err()).next();
        r.push("curves are constant-speed SBV", bad.is_none(), bad.map_or_else(String::new, |e| e.to_string()));
        let inj = self.entries.iter().all(|(u, _)| u.is_h1_injective(space));
        r.push("curves are injective", inj, format!("{} curves", self.entries.len()));

        let lifted = *self.filling.cycle.space();
        let trace = self.entries.iter().fold(PolyhedralCurrent::zero(lifted), |acc, (u, w)| {
            acc.plus(&u.current_a(space).lift().scaled(*w)).expect("same space")
        });
        let slab = restrict_x0(&self.filling.cycle);
        r.push(
            "beta traces equal C restricted to X0",
            trace.approx_eq(&slab),
            format!("mass of difference {:.3e}", trace.distance_to(&slab)),
        );
        Ok(r)
    }
}
