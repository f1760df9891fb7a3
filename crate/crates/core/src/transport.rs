//! Kantorovich–Rubinstein norm of molecules via exact min-cost transport.
//!
//! The solver runs successive shortest paths (Dijkstra with node potentials)
//! on the complete bipartite graph between `m⁺` and `m⁻`. The final node
//! potentials give a dual certificate, turned into a 1-Lipschitz function on
//! the whole space by a c-transform.

use crate::currents::{Atom, Molecule};
use crate::geometry::{AmbientSpace, Point};
use crate::report::Report;
use crate::{tol, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Flow {
    pub source: usize,
    pub sink: usize,
    pub amount: f64,
}

/// An optimal coupling of `m⁺` (sources) with `m⁻` (sinks).
#[derive(Clone, Debug, PartialEq)]
pub struct TransportPlan {
    pub space: AmbientSpace,
    /// Atoms of `m⁺`.
    pub sources: Vec<Atom>,
    /// Atoms of `m⁻`, weights made positive.
    pub sinks: Vec<Atom>,
    pub flows: Vec<Flow>,
    pub cost: f64,
    /// 1-Lipschitz potential at each source.
    pub source_potentials: Vec<f64>,
    /// 1-Lipschitz potential at each sink.
    pub sink_potentials: Vec<f64>,
}

/// `η (δ_y − δ_x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dipole {
    pub x: Point,
    pub y: Point,
    pub eta: f64,
}

impl TransportPlan {
    /// The dual certificate `f(z) = min_j (f(y_j) + d(z, y_j))` over sinks
    /// `y_j`; 1-Lipschitz on the whole space and equal to the stored
    /// potentials on the support.
    pub fn potential_at(&self, z: &Point) -> f64 {
        self.sinks
            .iter()
            .zip(&self.sink_potentials)
            .map(|(s, v)| v + self.space.dist(z, &s.point))
            .fold(f64::INFINITY, f64::min)
    }

    /// `Σ supply·f − Σ demand·f`.
    pub fn dual_objective(&self) -> f64 {
        let plus: f64 = self.sources.iter().zip(&self.source_potentials).map(|(a, f)| a.weight * f).sum();
        let minus: f64 = self.sinks.iter().zip(&self.sink_potentials).map(|(a, f)| a.weight * f).sum();
        plus - minus
    }

    /// Every plan invariant, each as a named check.
    pub fn verify(&self) -> Report {
        let t = tol();
        let scale = 1.0 + self.cost;
        let mut r = Report::new();
        let mut out = vec![0.0; self.sources.len()];
        let mut inn = vec![0.0; self.sinks.len()];
        let mut cost = 0.0;
        let mut slack = 0.0f64;
        for f in &self.flows {
            out[f.source] += f.amount;
            inn[f.sink] += f.amount;
            let d = self.space.dist(&self.sources[f.source].point, &self.sinks[f.sink].point);
            cost += f.amount * d;
            let gap = self.source_potentials[f.source] - self.sink_potentials[f.sink] - d;
            slack = slack.max(gap.abs());
        }
        let supply_err = out.iter().zip(&self.sources).fold(0.0f64, |m, (o, a)| m.max((o - a.weight).abs()));
        let demand_err = inn.iter().zip(&self.sinks).fold(0.0f64, |m, (o, a)| m.max((o - a.weight).abs()));
        r.at_most("supply conservation", supply_err, t);
        r.at_most("demand conservation", demand_err, t);
        r.close("cost matches flows", cost, self.cost, t * scale);
        r.at_most("complementary slackness", slack, t * scale);

        let pts: Vec<(&Point, f64)> = self
            .sources
            .iter()
            .map(|a| &a.point)
            .zip(self.source_potentials.iter().copied())
            .chain(self.sinks.iter().map(|a| &a.point).zip(self.sink_potentials.iter().copied()))
            .collect();
        let mut lip_excess = 0.0f64;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let d = self.space.dist(pts[i].0, pts[j].0);
                lip_excess = lip_excess.max((pts[i].1 - pts[j].1).abs() - d);
            }
        }
        r.at_most("1-Lipschitz potential", lip_excess, t * scale);
        r.close("duality gap", self.dual_objective(), self.cost, t * scale);
        r
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Node {
    Super,
    Source(usize),
    Sink(usize),
    Terminal,
}

/// Solves the transport problem between the positive and negative parts.
pub fn solve_plan(m: &Molecule) -> Result<TransportPlan> {
    let total = m.total_weight();
    if total.abs() > tol() * m.total_variation().max(1.0) {
        return Err(Error::NonZeroAverage(total));
    }
    let space = m.space().clone();
    let sources = m.positive_part();
    let sinks = m.negative_part();
    let (p, q) = (sources.len(), sinks.len());
    if p == 0 || q == 0 {
        return Ok(TransportPlan {
            space,
            sources,
            sinks,
            flows: Vec::new(),
            cost: 0.0,
            source_potentials: vec![0.0; p],
            sink_potentials: vec![0.0; q],
        });
    }

    let dist: Vec<Vec<f64>> =
        sources.iter().map(|s| sinks.iter().map(|k| space.dist(&s.point, &k.point)).collect()).collect();
    // Supplies and demands may differ by rounding; scale demands to match.
    let supply_total: f64 = sources.iter().map(|a| a.weight).sum();
    let demand_total: f64 = sinks.iter().map(|a| a.weight).sum();
    let mut supply: Vec<f64> = sources.iter().map(|a| a.weight).collect();
    let mut demand: Vec<f64> = sinks.iter().map(|a| a.weight * supply_total / demand_total).collect();
    let eps = 1e-14 * supply_total.max(1.0);
    let mut flow = vec![vec![0.0; q]; p];

    // node order: super source, sources, sinks, terminal
    let n = p + q + 2;
    let index = |v: Node| match v {
        Node::Super => 0,
        Node::Source(i) => 1 + i,
        Node::Sink(j) => 1 + p + j,
        Node::Terminal => 1 + p + q,
    };
    let node = |k: usize| {
        if k == 0 {
            Node::Super
        } else if k <= p {
            Node::Source(k - 1)
        } else if k <= p + q {
            Node::Sink(k - 1 - p)
        } else {
            Node::Terminal
        }
    };
    let mut pot = vec![0.0; n];
    let mut remaining = supply_total;
    let max_rounds = 4 * (p + q) * (p + q) + 16;
    let mut rounds = 0;

    while remaining > eps && supply.iter().any(|s| *s > eps) {
        rounds += 1;
        if rounds > max_rounds {
            return Err(Error::SolverFailure(format!("no convergence after {max_rounds} augmentations")));
        }
        let mut d = vec![f64::INFINITY; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut done = vec![false; n];
        d[0] = 0.0;
        loop {
            let mut u = None;
            for k in 0..n {
                if !done[k] && d[k].is_finite() && u.is_none_or(|b: usize| d[k] < d[b]) {
                    u = Some(k);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            let mut relax = |v: usize, c: f64, d: &mut Vec<f64>| {
                let reduced = (c + pot[u] - pot[v]).max(0.0);
                let nd = d[u] + reduced;
                if nd < d[v] {
                    d[v] = nd;
                    pred[v] = Some(u);
                }
            };
            match node(u) {
                Node::Super => {
                    for i in 0..p {
                        if supply[i] > eps {
                            relax(index(Node::Source(i)), 0.0, &mut d);
                        }
                    }
                }
                Node::Source(i) => {
                    for j in 0..q {
                        relax(index(Node::Sink(j)), dist[i][j], &mut d);
                    }
                }
                Node::Sink(j) => {
                    for i in 0..p {
                        if flow[i][j] > eps {
                            relax(index(Node::Source(i)), -dist[i][j], &mut d);
                        }
                    }
                    if demand[j] > eps {
                        relax(index(Node::Terminal), 0.0, &mut d);
                    }
                }
                Node::Terminal => {}
            }
        }
        let t_idx = index(Node::Terminal);
        if !d[t_idx].is_finite() {
            return Err(Error::SolverFailure("terminal unreachable with supply left".into()));
        }
        let cap = d[t_idx];
        for k in 0..n {
            pot[k] += d[k].min(cap);
        }
        // walk back the path and find its bottleneck
        let mut path = vec![t_idx];
        while let Some(prev) = pred[*path.last().unwrap()] {
            path.push(prev);
        }
        path.reverse();
        let mut bottleneck = f64::INFINITY;
        for w in path.windows(2) {
            bottleneck = bottleneck.min(match (node(w[0]), node(w[1])) {
                (Node::Super, Node::Source(i)) => supply[i],
                (Node::Sink(j), Node::Terminal) => demand[j],
                (Node::Sink(j), Node::Source(i)) => flow[i][j],
                _ => f64::INFINITY,
            });
        }
        for w in path.windows(2) {
            match (node(w[0]), node(w[1])) {
                (Node::Super, Node::Source(i)) => supply[i] -= bottleneck,
                (Node::Source(i), Node::Sink(j)) => flow[i][j] += bottleneck,
                (Node::Sink(j), Node::Source(i)) => flow[i][j] -= bottleneck,
                (Node::Sink(j), Node::Terminal) => demand[j] -= bottleneck,
                _ => {}
            }
        }
        remaining -= bottleneck;
    }

    let mut flows = Vec::new();
    let mut cost = 0.0;
    for i in 0..p {
        for j in 0..q {
            if flow[i][j] > eps {
                flows.push(Flow { source: i, sink: j, amount: flow[i][j] });
                cost += flow[i][j] * dist[i][j];
            }
        }
    }
    // Reduced costs d_ij + π_i − π_j are ≥ 0 and vanish on flow arcs, so
    // sinks get f = −π_j and the c-transform extends f to every point.
    let sink_potentials: Vec<f64> = (0..q).map(|j| -pot[index(Node::Sink(j))]).collect();
    let mut plan = TransportPlan {
        space,
        sources,
        sinks,
        flows,
        cost,
        source_potentials: Vec::new(),
        sink_potentials,
    };
    plan.source_potentials = plan.sources.iter().map(|s| plan.potential_at(&s.point)).collect();
    plan.sink_potentials = plan.sinks.iter().map(|s| plan.potential_at(&s.point)).collect();
    Ok(plan)
}

/// `‖m‖_KR = W₁(m⁺, m⁻)`.
pub fn kr_norm(m: &Molecule) -> Result<f64> {
    Ok(solve_plan(m)?.cost)
}

/// Flow arcs as dipoles: `m = Σ η (δ_y − δ_x)` with `y` in `spt m⁺`.
pub fn dipole_decomposition(plan: &TransportPlan) -> Vec<Dipole> {
    plan.flows
        .iter()
        .map(|f| Dipole {
            x: plan.sinks[f.sink].point.clone(),
            y: plan.sources[f.source].point.clone(),
            eta: f.amount,
        })
        .collect()
}

/// `∫ |F|` for the cumulative weight `F(t) = Σ_{x_i ≤ t} w_i` on the line.
pub fn kr_norm_1d(m: &Molecule) -> Result<f64> {
    let v = m.space().as_vector()?;
    if v.dim != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: v.dim });
    }
    let mut atoms: Vec<(f64, f64)> =
        m.atoms().iter().map(|a| (a.point.coords().expect("vector point")[0], a.weight)).collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cdf = 0.0;
    let mut total = 0.0;
    for w in atoms.windows(2) {
        cdf += w[0].1;
        total += cdf.abs() * (w[1].0 - w[0].0);
    }
    Ok(total)
}

/// `F₀(m) = inf { M(S) : ∂S = m }`, equal to `‖m‖_KR` in normed spaces where
/// segments are geodesics. Refused on finite metric spaces, where the
/// infimum can be strictly larger.
pub fn f0_norm(m: &Molecule) -> Result<f64> {
    m.space().as_vector()?;
    kr_norm(m)
}
