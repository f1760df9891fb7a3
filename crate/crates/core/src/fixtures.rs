//! Named examples and seeded random generators.

use rand::Rng;

use crate::currents::{Atom, Molecule, Piece, PolyhedralCurrent};
use crate::geometry::{AmbientSpace, FiniteMetric, Norm, VectorSpace};
use crate::sbv::{AffinePiece, MonotoneCadlag};

/// Inscribed `n`-gon of the upper unit semicircle, counter-clockwise from
/// `(1,0)` to `(−1,0)`, weight 1.
pub fn semicircle(n: usize) -> PolyhedralCurrent {
    let n = n.max(1);
    let pts: Vec<Vec<f64>> = (0..=n)
        .map(|k| {
            let a = std::f64::consts::PI * k as f64 / n as f64;
            if k == n {
                vec![-1.0, 0.0]
            } else {
                vec![a.cos(), a.sin()]
            }
        })
        .collect();
    PolyhedralCurrent::polyline(VectorSpace::euclidean(2), &pts, 1.0).expect("finite points")
}

/// Σ over `i in lo..=hi` of `δ_{2^{1−2i}} − δ_{2^{−2i}}` on the line.
fn dipole_block(lo: usize, hi: usize) -> Vec<Atom> {
    (lo..=hi)
        .flat_map(|i| {
            let x = 0.25f64.powi(i as i32);
            [Atom::new(vec![2.0 * x], 1.0), Atom::new(vec![x], -1.0)]
        })
        .collect()
}

/// `m_j = Σ_{i=1}^{j} (δ_{2^{1−2i}} − δ_{2^{−2i}})`.
pub fn infinite_dipoles(j: usize) -> Molecule {
    Molecule::new(VectorSpace::euclidean(1).into(), dipole_block(1, j)).expect("balanced")
}

/// `m_k − m_j` for `j < k`.
pub fn infinite_dipoles_tail(j: usize, k: usize) -> Molecule {
    Molecule::new(VectorSpace::euclidean(1).into(), dipole_block(j + 1, k)).expect("balanced")
}

/// `⟦(0,0),(1/3,0)⟧ + ⟦(2/3,0),(1,0)⟧`, or the same on the line for `dim = 1`.
pub fn collinear_pair(dim: usize) -> PolyhedralCurrent {
    let p = |x: f64| {
        let mut v = vec![0.0; dim.max(1)];
        v[0] = x;
        v
    };
    PolyhedralCurrent::new(
        VectorSpace::euclidean(dim.max(1)),
        vec![Piece::new(p(0.0), p(1.0 / 3.0), 1.0), Piece::new(p(2.0 / 3.0), p(1.0), 1.0)],
    )
    .expect("finite points")
}

/// Counter-clockwise unit square loop.
pub fn square_loop() -> PolyhedralCurrent {
    let pts: Vec<Vec<f64>> =
        [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]].iter().map(|p| p.to_vec()).collect();
    PolyhedralCurrent::polyline(VectorSpace::euclidean(2), &pts, 1.0).expect("finite points")
}

/// Depth-`depth` fat Cantor set: starting from `[0,1]`, step `n` removes an
/// open middle interval of length `α·4⁻ⁿ` from each remaining interval. The
/// result has measure `1 − α(1 − 2^{−depth})/2`.
pub fn fat_cantor(depth: usize, alpha: f64) -> Vec<(f64, f64)> {
    let mut k = vec![(0.0, 1.0)];
    for n in 1..=depth {
        let gap = alpha * 0.25f64.powi(n as i32);
        k = k
            .into_iter()
            .flat_map(|(a, b)| {
                let mid = 0.5 * (a + b);
                [(a, mid - gap / 2.0), (mid + gap / 2.0, b)]
            })
            .collect();
    }
    k
}

/// A finite metric space from a random cloud of `n` points in `[0,1]^dim`.
pub fn random_metric_space(rng: &mut impl Rng, n: usize, dim: usize, norm: Norm) -> FiniteMetric {
    loop {
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
        if let Ok(fm) = FiniteMetric::from_points(&pts, norm) {
            return fm;
        }
    }
}

pub fn random_point(rng: &mut impl Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// Random molecule with `n` atoms and weights in `[−2, 2]`, balanced by the
/// last atom.
pub fn random_molecule(rng: &mut impl Rng, space: VectorSpace, n: usize) -> Molecule {
    let n = n.max(2);
    let mut atoms: Vec<Atom> =
        (0..n - 1).map(|_| Atom::new(random_point(rng, space.dim, 2.0), rng.gen_range(-2.0..2.0))).collect();
    let s: f64 = atoms.iter().map(|a| a.weight).sum();
    atoms.push(Atom::new(random_point(rng, space.dim, 2.0), -s));
    Molecule::new(space.into(), atoms).expect("balanced")
}

/// `n` unit sources and `n` unit sinks.
pub fn random_unit_molecule(rng: &mut impl Rng, space: VectorSpace, n: usize) -> (Molecule, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let xs: Vec<Vec<f64>> = (0..n).map(|_| random_point(rng, space.dim, 1.0)).collect();
    let ys: Vec<Vec<f64>> = (0..n).map(|_| random_point(rng, space.dim, 1.0)).collect();
    let atoms = xs.iter().map(|x| Atom::new(x.clone(), 1.0)).chain(ys.iter().map(|y| Atom::new(y.clone(), -1.0))).collect();
    (Molecule::new(space.into(), atoms).expect("balanced"), xs, ys)
}

/// Random polyhedral current with up to `max_segments` pieces. About half of
/// the instances put endpoints on the grid `{0,…,4}^d` so that collinear
/// overlaps, cancellations and shared vertices occur.
pub fn random_current(rng: &mut impl Rng, space: VectorSpace, max_segments: usize) -> PolyhedralCurrent {
    let n = rng.gen_range(1..=max_segments.max(1));
    let grid = rng.gen_bool(0.5);
    let point = |rng: &mut dyn rand::RngCore| -> Vec<f64> {
        if grid {
            (0..space.dim).map(|_| rng.gen_range(0..5) as f64).collect()
        } else {
            (0..space.dim).map(|_| rng.gen_range(-2.0..2.0)).collect()
        }
    };
    let mut pieces = Vec::with_capacity(n);
    while pieces.len() < n {
        let a = point(rng);
        let b = point(rng);
        if a == b {
            continue;
        }
        let w = if grid { rng.gen_range(1..=3) as f64 * if rng.gen_bool(0.5) { 1.0 } else { -1.0 } } else { rng.gen_range(-2.0..2.0) };
        pieces.push(Piece::new(a, b, w));
    }
    PolyhedralCurrent::new(space, pieces).expect("finite points")
}

/// Random sorted union of up to `max` disjoint closed intervals in `[0,1]`.
pub fn random_interval_union(rng: &mut impl Rng, max: usize) -> Vec<(f64, f64)> {
    let n = rng.gen_range(1..=max.max(1));
    let mut cuts: Vec<f64> = (0..2 * n).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.chunks(2).map(|c| (c[0], c[1])).filter(|(a, b)| b - a > 1e-6).collect()
}

/// Random non-decreasing piecewise-affine map `[0,1] → [0,1]` with jumps.
pub fn random_monotone(rng: &mut impl Rng, max_pieces: usize) -> MonotoneCadlag {
    let n = rng.gen_range(1..=max_pieces.max(1));
    let mut ts: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
    ts.push(0.0);
    ts.push(1.0);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    // rises and jumps drawn first, then scaled into [0, 1]
    let k = ts.len() - 1;
    let rise: Vec<f64> = (0..k).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen::<f64>() }).collect();
    let jump: Vec<f64> = (0..k).map(|i| if i == 0 || rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() }).collect();
    let start = rng.gen::<f64>() * 0.2;
    let total: f64 = rise.iter().sum::<f64>() + jump.iter().sum::<f64>();
    let scale = if total > 0.0 { (1.0 - start) * rng.gen_range(0.5..1.0) / total } else { 0.0 };
    let mut v = start;
    let mut pieces = Vec::with_capacity(k);
    for i in 0..k {
        v += jump[i] * scale;
        let (t0, t1) = (ts[i], ts[i + 1]);
        let slope = rise[i] * scale / (t1 - t0);
        pieces.push(AffinePiece { t0, t1, v0: v, slope });
        v += rise[i] * scale;
    }
    MonotoneCadlag::new(pieces).expect("monotone by construction")
}

/// Convenience for finite-space molecules from a matrix.
pub fn finite_space(matrix: Vec<Vec<f64>>) -> crate::Result<AmbientSpace> {
    Ok(FiniteMetric::new(matrix)?.into())
}
