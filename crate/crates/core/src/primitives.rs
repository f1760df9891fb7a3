//! Segment currents with a prescribed boundary.

use crate::currents::{Molecule, Piece, PolyhedralCurrent};
use crate::geometry::{Point, VectorSpace};
use crate::transport::{dipole_decomposition, solve_plan, Dipole};
use crate::{Error, Result};

fn coords(p: &Point) -> Vec<f64> {
    p.coords().expect("vector point").to_vec()
}

/// `R = Σ η ⟦x, y⟧` over an optimal dipole decomposition of `m`. Then
/// `∂R = m` and `M(R) = ‖m‖_KR`.
pub fn optimal_primitive(m: &Molecule) -> Result<PolyhedralCurrent> {
    let space = *m.space().as_vector()?;
    let plan = solve_plan(m)?;
    let pieces = dipole_decomposition(&plan)
        .into_iter()
        .map(|Dipole { x, y, eta }| Piece::new(coords(&x), coords(&y), eta))
        .collect();
    PolyhedralCurrent::new(space, pieces)
}

/// Apex height `ε / (2 M r)` for `r` dipoles of largest weight `M`.
pub fn tent_height(dipoles: &[Dipole], eps: f64) -> f64 {
    let max_eta = dipoles.iter().fold(0.0f64, |m, d| m.max(d.eta.abs()));
    eps / (2.0 * max_eta * dipoles.len() as f64)
}

/// Each optimal dipole `η(δ_y − δ_x)` is replaced by the two-leg tent
/// `η(⟦x⊕0, mid⊕t⟧ + ⟦mid⊕t, y⊕0⟧)` in `X ⊕ R`. The result has boundary
/// `m ⊕ 0`, no mass on `X ⊕ {0}` and `M(R) ≤ ‖m‖_KR + ε`.
pub fn tent_primitive(m: &Molecule, eps: f64) -> Result<PolyhedralCurrent> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    let base = *m.space().as_vector()?;
    let lifted = base.lifted();
    let dipoles = dipole_decomposition(&solve_plan(m)?);
    if dipoles.is_empty() {
        return Ok(PolyhedralCurrent::zero(lifted));
    }
    let t = tent_height(&dipoles, eps);
    if t <= crate::tol() {
        return Err(Error::InvalidValue(format!("tent height {t:e} does not clear the tolerance; increase epsilon")));
    }
    let mut pieces = Vec::with_capacity(2 * dipoles.len());
    for d in &dipoles {
        let (x, y) = (coords(&d.x), coords(&d.y));
        let mut apex: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
        apex.push(t);
        let (mut x0, mut y0) = (x, y);
        x0.push(0.0);
        y0.push(0.0);
        pieces.push(Piece::new(x0, apex.clone(), d.eta));
        pieces.push(Piece::new(apex, y0, d.eta));
    }
    PolyhedralCurrent::new(lifted, pieces)
}

/// Tent mass `Σ η · 2‖(y − x)/2 ⊕ t‖`, computed directly from the dipoles.
pub fn tent_mass(space: &VectorSpace, dipoles: &[Dipole], eps: f64) -> f64 {
    let t = tent_height(dipoles, eps);
    let lifted = space.lifted();
    dipoles
        .iter()
        .map(|d| {
            let (x, y) = (coords(&d.x), coords(&d.y));
            let mut half: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (b - a)).collect();
            half.push(t);
            2.0 * d.eta * lifted.norm(&half)
        })
        .sum()
}
