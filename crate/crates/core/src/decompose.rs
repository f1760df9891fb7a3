//! Cancellation-free splitting of a polyhedral current into weighted paths
//! and loops.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::currents::{Piece, PolyhedralCurrent};
use crate::geometry::{lex_cmp, VectorSpace};
use crate::report::Report;
use crate::{tol, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedCurve {
    pub points: Vec<Vec<f64>>,
    pub weight: f64,
    pub closed: bool,
}

impl WeightedCurve {
    pub fn new(points: Vec<Vec<f64>>, weight: f64, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidCurve("a curve needs at least two points".into()));
        }
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::InvalidCurve(format!("weight must be positive, got {weight}")));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCurve("consecutive points coincide".into()));
        }
        if closed && points.first() != points.last() {
            return Err(Error::InvalidCurve("closed curve must end where it starts".into()));
        }
        Ok(WeightedCurve { points, weight, closed })
    }

    pub fn length(&self, space: &VectorSpace) -> f64 {
        self.points.windows(2).map(|w| space.dist(&w[0], &w[1])).sum()
    }
}

/// One weighted piece per polyline edge.
pub fn curve_current(space: VectorSpace, c: &WeightedCurve) -> Result<PolyhedralCurrent> {
    PolyhedralCurrent::polyline(space, &c.points, c.weight)
}

/// Graph view of a canonical current: snapped endpoints and positive arcs.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowGraph {
    pub vertices: Vec<Vec<f64>>,
    /// `(from, to, flow)`.
    pub arcs: Vec<(usize, usize, f64)>,
}

impl FlowGraph {
    pub fn from_current(t: &PolyhedralCurrent) -> FlowGraph {
        let c = t.canonicalize();
        let space = c.space();
        let mut pts: Vec<Vec<f64>> = c.pieces().iter().flat_map(|p| [p.a.clone(), p.b.clone()]).collect();
        pts.sort_by(|a, b| lex_cmp(a, b));
        pts.dedup();
        // snap within τ onto the lexicographically first member of each class
        let tau = tol();
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        let mut class: Vec<usize> = Vec::with_capacity(pts.len());
        for p in &pts {
            let hit = vertices.iter().rposition(|v| space.dist(v, p) <= tau);
            match hit {
                Some(i) => class.push(i),
                None => {
                    vertices.push(p.clone());
                    class.push(vertices.len() - 1);
                }
            }
        }
        let lookup = |x: &Vec<f64>| {
            let k = pts.binary_search_by(|p| lex_cmp(p, x)).expect("endpoint present");
            class[k]
        };
        let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
        for Piece { a, b, w } in c.pieces() {
            let (u, v) = (lookup(a), lookup(b));
            if u != v {
                arcs.push((u, v, *w));
            }
        }
        arcs.sort_by_key(|x| (x.0, x.1));
        FlowGraph { vertices, arcs }
    }

    /// `in − out` per vertex, which is the boundary weight there.
    pub fn divergence(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.vertices.len()];
        for &(u, v, f) in &self.arcs {
            d[u] -= f;
            d[v] += f;
        }
        d
    }
}

struct Peeler<'a> {
    g: &'a FlowGraph,
    flow: Vec<f64>,
    /// arcs leaving each vertex, sorted by target
    out: Vec<Vec<usize>>,
    excess: Vec<f64>,
    eps: f64,
    curves: Vec<WeightedCurve>,
}

impl Peeler<'_> {
    fn next_arc(&self, u: usize) -> Option<usize> {
        self.out[u].iter().copied().find(|&a| self.flow[a] > self.eps)
    }

    fn emit(&mut self, verts: &[usize], arcs: &[usize], amount: f64, closed: bool) {
        for &a in arcs {
            self.flow[a] -= amount;
        }
        let points = verts.iter().map(|&v| self.g.vertices[v].clone()).collect();
        self.curves.push(WeightedCurve { points, weight: amount, closed });
    }

    /// Follows smallest positive out-arcs from `start`, peeling every cycle
    /// met on the way, until the walk reaches a vertex where `stop` holds or
    /// no arc leaves. Returns the remaining simple walk.
    fn walk(&mut self, start: usize, stop: impl Fn(&Self, usize) -> bool) -> (Vec<usize>, Vec<usize>) {
        let mut verts = vec![start];
        let mut arcs: Vec<usize> = Vec::new();
        let mut pos: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        loop {
            let u = *verts.last().unwrap();
            if verts.len() > 1 && stop(self, u) {
                return (verts, arcs);
            }
            let Some(a) = self.next_arc(u) else {
                return (verts, arcs);
            };
            let v = self.g.arcs[a].1;
            if let Some(&k) = pos.get(&v) {
                let mut cyc_v = verts[k..].to_vec();
                cyc_v.push(v);
                let mut cyc_a = arcs[k..].to_vec();
                cyc_a.push(a);
                let amount = cyc_a.iter().map(|&a| self.flow[a]).fold(f64::INFINITY, f64::min);
                self.emit(&cyc_v, &cyc_a, amount, true);
                for w in verts.drain(k + 1..) {
                    pos.remove(&w);
                }
                arcs.truncate(k);
            } else {
                pos.insert(v, verts.len());
                verts.push(v);
                arcs.push(a);
            }
        }
    }
}

/// Weighted paths (source to sink) and loops whose currents add up to `T`
/// with `Σ weight · length = M(T)`.
pub fn smirnov_decompose(t: &PolyhedralCurrent) -> Vec<WeightedCurve> {
    let g = FlowGraph::from_current(t);
    let n = g.vertices.len();
    let mut out = vec![Vec::new(); n];
    for (k, &(u, _, _)) in g.arcs.iter().enumerate() {
        out[u].push(k);
    }
    let scale = g.arcs.iter().fold(1.0f64, |m, a| m.max(a.2));
    let mut p = Peeler {
        g: &g,
        flow: g.arcs.iter().map(|a| a.2).collect(),
        out,
        excess: g.divergence(),
        eps: 1e-12 * scale,
        curves: Vec::new(),
    };

    // paths: from out-excess (divergence < 0) to in-excess (divergence > 0)
    while let Some(s) = (0..n).find(|&v| p.excess[v] < -p.eps && p.next_arc(v).is_some()) {
        let (verts, arcs) = p.walk(s, |p, u| p.excess[u] > p.eps);
        if arcs.is_empty() {
            continue;
        }
        let end = *verts.last().unwrap();
        let mut amount = arcs.iter().map(|&a| p.flow[a]).fold(-p.excess[s], f64::min);
        if p.excess[end] > p.eps {
            amount = amount.min(p.excess[end]);
        }
        p.emit(&verts, &arcs, amount, false);
        p.excess[s] += amount;
        p.excess[end] -= amount;
    }
    // what is left circulates
    while let Some(a) = (0..g.arcs.len()).find(|&a| p.flow[a] > p.eps) {
        let u = g.arcs[a].0;
        p.walk(u, |_, _| false);
    }
    p.curves
}

/// Reconstruction, mass identity and closedness of a decomposition.
pub fn check_decomposition(t: &PolyhedralCurrent, curves: &[WeightedCurve]) -> Result<Report> {
    let tau = tol();
    let space = *t.space();
    let mut r = Report::new();
    let mut sum = PolyhedralCurrent::zero(space);
    for c in curves {
        sum = sum.plus(&curve_current(space, c)?)?;
    }
    r.push("curves reconstruct T", sum.approx_eq(t), format!("mass of difference {:.3e}", sum.distance_to(t)));
    let wl: f64 = curves.iter().map(|c| c.weight * c.length(&space)).sum();
    let m = t.mass_total();
    r.close("sum of weight * length = M(T)", wl, m, tau * (1.0 + m));
    if t.boundary().is_empty() {
        r.push("cycle splits into loops", curves.iter().all(|c| c.closed), format!("{} curves", curves.len()));
    }
    Ok(r)
}
