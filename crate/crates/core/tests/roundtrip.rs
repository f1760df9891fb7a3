use onecurrent::currents::{Atom, Molecule, Piece, PolyhedralCurrent};
use onecurrent::decompose::smirnov_decompose;
use onecurrent::geometry::{kuratowski_embed, FiniteMetric, Norm, VectorSpace};
use onecurrent::io;
use onecurrent::sbv::{area_check, sbv_represent, transport_param};
use onecurrent::transport::kr_norm;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![(-3i32..=3).prop_map(f64::from), -3.0..3.0f64]
}

fn current(dim: usize) -> impl Strategy<Value = PolyhedralCurrent> {
    let piece = (
        prop::collection::vec(coord(), dim),
        prop::collection::vec(coord(), dim),
        prop_oneof![Just(1.0), Just(-2.0), 0.1..3.0f64],
    );
    prop::collection::vec(piece, 1..10).prop_map(move |ps| {
        let pieces = ps.into_iter().filter(|(a, b, _)| a != b).map(|(a, b, w)| Piece::new(a, b, w)).collect();
        PolyhedralCurrent::new(VectorSpace::euclidean(dim), pieces).unwrap()
    })
}

fn molecule() -> impl Strategy<Value = Molecule> {
    prop::collection::vec((coord(), coord(), -2.0..2.0f64), 1..8).prop_map(|xs| {
        let mut atoms: Vec<Atom> = xs.iter().map(|(x, y, w)| Atom::new(vec![*x, *y], *w)).collect();
        let s: f64 = atoms.iter().map(|a| a.weight).sum();
        atoms.push(Atom::new(vec![0.5, 0.25], -s));
        Molecule::new(VectorSpace::new(2, Norm::L1).unwrap().into(), atoms).unwrap()
    })
}

fn intervals() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(0.0..1.0f64, 2..12).prop_map(|mut cuts| {
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let k: Vec<(f64, f64)> = cuts.chunks_exact(2).map(|c| (c[0], c[1])).filter(|(a, b)| b > a).collect();
        if k.is_empty() {
            vec![(0.2, 0.7)]
        } else {
            k
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn current_json_roundtrip(t in current(2)) {
        let back = io::current_from_json(&io::current_to_json(&t)).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn molecule_json_roundtrip(m in molecule()) {
        let back = io::molecule_from_json(&io::molecule_to_json(&m)).unwrap();
        prop_assert!(back.approx_eq(&m));
        prop_assert!((kr_norm(&back).unwrap() - kr_norm(&m).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn curves_json_roundtrip(t in current(3)) {
        let curves = smirnov_decompose(&t.canonicalize());
        let back = io::curves_from_json(&io::curves_to_json(&curves)).unwrap();
        prop_assert_eq!(back, curves);
    }

    #[test]
    fn representation_json_roundtrip(t in current(2)) {
        let rep = sbv_represent(&t, 0.1).unwrap();
        let (entries, eps) = io::representation_from_json(&io::representation_to_json(&rep.entries, 0.1)).unwrap();
        prop_assert_eq!(eps, 0.1);
        prop_assert_eq!(entries, rep.entries);
    }

    #[test]
    fn cadlag_json_roundtrip_and_area(k in intervals(), g in prop::array::uniform3(-2.0..2.0f64)) {
        let u = transport_param(&k).unwrap();
        let back = io::cadlag_from_json(&io::cadlag_to_json(&u)).unwrap();
        prop_assert_eq!(&back, &u);
        let (lhs, rhs) = area_check(&u, g, (0.1, 0.8));
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn canonicalize_preserves_boundary(t in current(2)) {
        let c = t.canonicalize();
        prop_assert!(c.boundary().approx_eq(&t.boundary()));
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert!(c.mass_total() <= t.raw_mass() + 1e-9);
    }

    #[test]
    fn kuratowski_embedding_is_isometric(pts in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 3..8)) {
        let pts: Vec<Vec<f64>> = pts.into_iter().map(|(x, y)| vec![x, y]).collect();
        if let Ok(fm) = FiniteMetric::from_points(&pts, Norm::Euclidean) {
            let e = kuratowski_embed(&fm, 0).unwrap();
            let linf = VectorSpace::new(fm.len(), Norm::LInf).unwrap();
            for i in 0..fm.len() {
                for j in 0..fm.len() {
                    prop_assert!((linf.dist(&e.points[i], &e.points[j]) - fm.dist(i, j)).abs() <= 1e-12);
                }
            }
        }
    }
}
