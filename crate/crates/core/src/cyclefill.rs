//! Completing a current into a cycle `C = T + R`.

use crate::currents::{AxisBox, PolyhedralCurrent};
use crate::primitives::{optimal_primitive, tent_primitive};
use crate::report::Report;
use crate::{tol, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Filling {
    /// The cycle `C`.
    pub cycle: PolyhedralCurrent,
    /// The added part `R`.
    pub rect: PolyhedralCurrent,
}

/// `R = optimal primitive of −∂T`, `C = T + R`.
pub fn fill_flat(t: &PolyhedralCurrent) -> Result<Filling> {
    let rect = optimal_primitive(&t.boundary().neg())?;
    let cycle = t.plus(&rect)?;
    Ok(Filling { cycle, rect })
}

/// `C = lift(T) + tent primitive of −∂T` in `X ⊕ R`.
pub fn fill_lifted(t: &PolyhedralCurrent, eps: f64) -> Result<Filling> {
    let rect = tent_primitive(&t.boundary().neg(), eps)?;
    let cycle = t.lift().plus(&rect)?;
    Ok(Filling { cycle, rect })
}

/// The part of a lifted current carried by `X₀ = X ⊕ {0}`: pieces whose
/// endpoints both lie in the slab `|last coordinate| ≤ τ/2`. A piece leaving
/// the slab meets `X₀` in one point and carries no mass there.
pub fn restrict_x0(c: &PolyhedralCurrent) -> PolyhedralCurrent {
    let h = tol() / 2.0;
    let in_x0 = |x: &[f64]| x.last().is_some_and(|v| v.abs() <= h);
    let pieces = c.pieces().iter().filter(|p| in_x0(&p.a) && in_x0(&p.b)).cloned().collect();
    PolyhedralCurrent::new(*c.space(), pieces).expect("pieces of a valid current")
}

fn cycle_checks(r: &mut Report, t: &PolyhedralCurrent, f: &Filling) -> Result<f64> {
    let tau = tol();
    let kr = t.kr_norm_of_boundary()?;
    let residual = f.cycle.boundary().total_variation();
    r.at_most("boundary of C is empty", residual, tau * (1.0 + t.raw_mass()));
    Ok(kr)
}

pub fn check_flat(t: &PolyhedralCurrent, f: &Filling) -> Result<Report> {
    let tau = tol();
    let mut r = Report::new();
    let kr = cycle_checks(&mut r, t, f)?;
    let mass_r = f.rect.mass_total();
    r.close("M(R) = KR norm of boundary", mass_r, kr, tau * (1.0 + kr));
    r.at_most("M(C) <= M(T) + KR", f.cycle.mass_total(), t.mass_total() + kr + tau * (1.0 + kr));
    Ok(r)
}

pub fn check_lifted(t: &PolyhedralCurrent, f: &Filling, eps: f64) -> Result<Report> {
    let tau = tol();
    let mut r = Report::new();
    let kr = cycle_checks(&mut r, t, f)?;
    r.at_most("M(R) <= KR + eps", f.rect.mass_total(), kr + eps + tau);
    let trace = restrict_x0(&f.cycle).canonicalize();
    let lifted = t.lift().canonicalize();
    r.push(
        "C restricted to X0 equals lift(T)",
        trace.approx_eq(&lifted),
        format!("mass of difference {:.3e}", trace.distance_to(&lifted)),
    );
    let dim = f.rect.space().dim;
    let below = AxisBox::new(vec![f64::NEG_INFINITY; dim], {
        let mut hi = vec![f64::INFINITY; dim];
        hi[dim - 1] = 0.0;
        hi
    });
    r.at_most("R has no mass on or below X0", f.rect.restrict(&below).mass_total(), 0.0);
    let h = tau / 2.0;
    let feet_only = f.rect.pieces().iter().all(|p| p.a[dim - 1].abs() > h || p.b[dim - 1].abs() > h);
    r.push("R meets X0 only at tent feet", feet_only, format!("{} pieces", f.rect.pieces().len()));
    Ok(r)
}
