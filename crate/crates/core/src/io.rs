//! Versioned JSON documents (`"v": 1`). A missing version is read as 1.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::currents::{Atom, Molecule, Piece, PolyhedralCurrent};
use crate::decompose::WeightedCurve;
use crate::geometry::{AmbientSpace, Point};
use crate::sbv::{AffinePiece, MonotoneCadlag, ScalarJump, SbvCurve, SbvJump, SbvPiece};
use crate::transport::TransportPlan;
use crate::{Error, Result};

pub const VERSION: u32 = 1;

fn version() -> u32 {
    VERSION
}

fn check_version(v: u32) -> Result<()> {
    if v == VERSION {
        Ok(())
    } else {
        Err(Error::SchemaVersion(v))
    }
}

fn to_string<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("serializable document")
}

fn parse<T: DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

#[derive(Serialize, Deserialize)]
struct PieceDoc {
    a: Vec<f64>,
    b: Vec<f64>,
    w: f64,
}

#[derive(Serialize, Deserialize)]
struct CurrentDoc {
    #[serde(default = "version")]
    v: u32,
    space: AmbientSpace,
    pieces: Vec<PieceDoc>,
}

pub fn current_to_json(t: &PolyhedralCurrent) -> String {
    to_string(&CurrentDoc {
        v: VERSION,
        space: (*t.space()).into(),
        pieces: t.pieces().iter().map(|p| PieceDoc { a: p.a.clone(), b: p.b.clone(), w: p.w }).collect(),
    })
}

pub fn current_from_json(s: &str) -> Result<PolyhedralCurrent> {
    let doc: CurrentDoc = parse(s)?;
    check_version(doc.v)?;
    let space = *doc.space.as_vector()?;
    PolyhedralCurrent::new(space, doc.pieces.into_iter().map(|p| Piece::new(p.a, p.b, p.w)).collect())
}

#[derive(Serialize, Deserialize)]
struct AtomDoc {
    p: Point,
    w: f64,
}

#[derive(Serialize, Deserialize)]
struct MoleculeDoc {
    #[serde(default = "version")]
    v: u32,
    space: AmbientSpace,
    atoms: Vec<AtomDoc>,
}

fn atom_docs(atoms: &[Atom]) -> Vec<AtomDoc> {
    atoms.iter().map(|a| AtomDoc { p: a.point.clone(), w: a.weight }).collect()
}

pub fn molecule_to_json(m: &Molecule) -> String {
    to_string(&MoleculeDoc { v: VERSION, space: m.space().clone(), atoms: atom_docs(m.atoms()) })
}

pub fn molecule_from_json(s: &str) -> Result<Molecule> {
    let doc: MoleculeDoc = parse(s)?;
    check_version(doc.v)?;
    Molecule::new(doc.space, doc.atoms.into_iter().map(|a| Atom::new(a.p, a.w)).collect())
}

#[derive(Serialize)]
struct FlowDoc {
    source: usize,
    sink: usize,
    amount: f64,
}

#[derive(Serialize)]
struct PlanDoc {
    v: u32,
    cost: f64,
    sources: Vec<AtomDoc>,
    sinks: Vec<AtomDoc>,
    flows: Vec<FlowDoc>,
}

pub fn plan_to_json(plan: &TransportPlan) -> String {
    to_string(&PlanDoc {
        v: VERSION,
        cost: plan.cost,
        sources: atom_docs(&plan.sources),
        sinks: atom_docs(&plan.sinks),
        flows: plan.flows.iter().map(|f| FlowDoc { source: f.source, sink: f.sink, amount: f.amount }).collect(),
    })
}

#[derive(Serialize)]
struct PotentialDoc {
    p: Point,
    f: f64,
}

#[derive(Serialize)]
struct PotentialsDoc {
    v: u32,
    points: Vec<PotentialDoc>,
}

/// The 1-Lipschitz dual certificate at every support point.
pub fn potentials_to_json(plan: &TransportPlan) -> String {
    let points = plan
        .sources
        .iter()
        .zip(&plan.source_potentials)
        .chain(plan.sinks.iter().zip(&plan.sink_potentials))
        .map(|(a, f)| PotentialDoc { p: a.point.clone(), f: *f })
        .collect();
    to_string(&PotentialsDoc { v: VERSION, points })
}

#[derive(Serialize, Deserialize)]
struct CurvesDoc {
    #[serde(default = "version")]
    v: u32,
    curves: Vec<WeightedCurve>,
}

pub fn curves_to_json(curves: &[WeightedCurve]) -> String {
    to_string(&CurvesDoc { v: VERSION, curves: curves.to_vec() })
}

pub fn curves_from_json(s: &str) -> Result<Vec<WeightedCurve>> {
    let doc: CurvesDoc = parse(s)?;
    check_version(doc.v)?;
    doc.curves.into_iter().map(|c| WeightedCurve::new(c.points, c.weight, c.closed)).collect()
}

#[derive(Serialize, Deserialize)]
struct SbvDoc {
    pieces: Vec<SbvPiece>,
    jumps: Vec<SbvJump>,
    weight: f64,
    speed: f64,
}

#[derive(Serialize, Deserialize)]
struct RepresentationDoc {
    #[serde(default = "version")]
    v: u32,
    epsilon: f64,
    curves: Vec<SbvDoc>,
}

pub fn representation_to_json(entries: &[(SbvCurve, f64)], epsilon: f64) -> String {
    let curves = entries
        .iter()
        .map(|(u, w)| SbvDoc { pieces: u.pieces.clone(), jumps: u.jumps.clone(), weight: *w, speed: u.speed })
        .collect();
    to_string(&RepresentationDoc { v: VERSION, epsilon, curves })
}

/// Weighted curves and the `ε` they were built with.
pub fn representation_from_json(s: &str) -> Result<(Vec<(SbvCurve, f64)>, f64)> {
    let doc: RepresentationDoc = parse(s)?;
    check_version(doc.v)?;
    let entries =
        doc.curves.into_iter().map(|c| (SbvCurve { pieces: c.pieces, jumps: c.jumps, speed: c.speed }, c.weight)).collect();
    Ok((entries, doc.epsilon))
}

#[derive(Serialize, Deserialize)]
struct CadlagDoc {
    #[serde(default = "version")]
    v: u32,
    pieces: Vec<AffinePiece>,
    #[serde(default)]
    jumps: Vec<ScalarJump>,
}

pub fn cadlag_to_json(u: &MonotoneCadlag) -> String {
    to_string(&CadlagDoc { v: VERSION, pieces: u.pieces().to_vec(), jumps: u.jumps() })
}

/// Reads the pieces; jumps are derived from them and any listed ones are
/// ignored.
pub fn cadlag_from_json(s: &str) -> Result<MonotoneCadlag> {
    let doc: CadlagDoc = parse(s)?;
    check_version(doc.v)?;
    MonotoneCadlag::new(doc.pieces)
}

/// An interval union written as `[[a,b],…]`, `{"intervals":[[a,b],…]}` or
/// the bare list `[a,b],[c,d]`.
pub fn intervals_from_str(s: &str) -> Result<Vec<(f64, f64)>> {
    #[derive(Deserialize)]
    struct Wrapped {
        intervals: Vec<(f64, f64)>,
    }
    let s = s.trim();
    if let Ok(w) = serde_json::from_str::<Wrapped>(s) {
        return Ok(w.intervals);
    }
    if let Ok(k) = serde_json::from_str::<Vec<(f64, f64)>>(s) {
        return Ok(k);
    }
    serde_json::from_str::<Vec<(f64, f64)>>(&format!("[{s}]"))
        .map_err(|e| Error::InvalidIntervals(format!("cannot read {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{FiniteMetric, VectorSpace};
    use crate::sbv::transport_param;
    use crate::transport::solve_plan;

    #[test]
    fn current_round_trip() {
        let t = PolyhedralCurrent::new(
            VectorSpace::euclidean(2),
            vec![Piece::new(vec![0.1, 0.2], vec![1.0 / 3.0, 2.0], -0.7)],
        )
        .unwrap();
        let s = current_to_json(&t);
        assert!(s.contains("\"v\": 1"));
        assert_eq!(current_from_json(&s).unwrap(), t);
    }

    #[test]
    fn molecule_round_trip_and_versions() {
        let fm = FiniteMetric::new(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let m = Molecule::on_finite(fm, &[(0, 1.0), (1, -1.0)]).unwrap();
        assert_eq!(molecule_from_json(&molecule_to_json(&m)).unwrap(), m);
        let unversioned = r#"{"space":{"kind":"rd","dim":1,"norm":"euclidean"},"atoms":[{"p":[0],"w":1},{"p":[2],"w":-1}]}"#;
        assert_eq!(molecule_from_json(unversioned).unwrap().atoms().len(), 2);
        let future = r#"{"v":2,"space":{"kind":"rd","dim":1,"norm":"euclidean"},"atoms":[]}"#;
        assert!(matches!(molecule_from_json(future), Err(Error::SchemaVersion(2))));
        assert!(molecule_from_json("{").is_err());
    }

    #[test]
    fn plan_and_potentials_are_written() {
        let m = Molecule::dipole(VectorSpace::euclidean(1).into(), vec![0.0], vec![2.0]).unwrap();
        let plan = solve_plan(&m).unwrap();
        let v: serde_json::Value = serde_json::from_str(&plan_to_json(&plan)).unwrap();
        assert_eq!(v["cost"], 2.0);
        let p: serde_json::Value = serde_json::from_str(&potentials_to_json(&plan)).unwrap();
        assert_eq!(p["points"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn cadlag_and_intervals() {
        let k = intervals_from_str("[0,0.3333],[0.6667,1]").unwrap();
        assert_eq!(k, vec![(0.0, 0.3333), (0.6667, 1.0)]);
        assert_eq!(intervals_from_str("[[0,1]]").unwrap(), vec![(0.0, 1.0)]);
        assert_eq!(intervals_from_str(r#"{"intervals":[[0,0.5]]}"#).unwrap(), vec![(0.0, 0.5)]);
        assert!(intervals_from_str("nope").is_err());
        let u = transport_param(&k).unwrap();
        assert_eq!(cadlag_from_json(&cadlag_to_json(&u)).unwrap(), u);
    }

    #[test]
    fn curves_round_trip() {
        let c = vec![WeightedCurve::new(vec![vec![0.0], vec![1.0]], 0.5, false).unwrap()];
        assert_eq!(curves_from_json(&curves_to_json(&c)).unwrap(), c);
    }
}
