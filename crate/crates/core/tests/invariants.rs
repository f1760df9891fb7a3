//! Seeded randomized invariant suites, one per module.

use onecurrent::currents::{AxisBox, LipschitzFn, MetricForm, Molecule, TestFunction};
use onecurrent::cyclefill::{check_flat, check_lifted, fill_flat, fill_lifted};
use onecurrent::decompose::{check_decomposition, smirnov_decompose};
use onecurrent::fixtures;
use onecurrent::geometry::{AffineMap, Norm, VectorSpace};
use onecurrent::primitives::{optimal_primitive, tent_primitive};
use onecurrent::sbv::{sbv_represent, transport_param, MonotoneCadlag};
use onecurrent::transport::{kr_norm, solve_plan};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const NORMS: [Norm; 3] = [Norm::Euclidean, Norm::L1, Norm::LInf];

fn random_space(rng: &mut StdRng) -> VectorSpace {
    VectorSpace::new(rng.gen_range(1..=3), NORMS[rng.gen_range(0..3)]).unwrap()
}

fn random_form(rng: &mut StdRng, dim: usize) -> MetricForm {
    let v = |rng: &mut StdRng| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
    let f = match rng.gen_range(0..4) {
        0 => TestFunction::Constant { value: rng.gen_range(-2.0..2.0) },
        1 => TestFunction::Affine { a: v(rng), b: rng.gen_range(-1.0..1.0) },
        2 => TestFunction::Quadratic { c: rng.gen_range(-1.0..1.0), linear: v(rng), quadratic: v(rng) },
        _ => TestFunction::Bump { center: v(rng), inner: 0.5, outer: 1.5 },
    };
    let pi = match rng.gen_range(0..4) {
        0 => LipschitzFn::Affine { c: v(rng), e: 0.3 },
        1 => LipschitzFn::Coordinate { index: rng.gen_range(0..dim) },
        2 => LipschitzFn::DistanceTo { point: v(rng) },
        _ => LipschitzFn::Clamped { inner: Box::new(LipschitzFn::Coordinate { index: 0 }), lo: -0.5, hi: 0.5 },
    };
    MetricForm::new(f, pi)
}

fn isometries(rng: &mut StdRng, space: VectorSpace) -> Vec<AffineMap> {
    let shift = fixtures::random_point(rng, space.dim, 3.0);
    let mut maps = vec![AffineMap::translation(shift)];
    if space.dim >= 2 {
        if space.norm == Norm::Euclidean {
            maps.push(AffineMap::rotation(space.dim, 0, 1, rng.gen_range(0.0..std::f64::consts::TAU)));
        } else {
            // quarter turns and coordinate swaps preserve l1 and linf
            maps.push(AffineMap::rotation(space.dim, 0, 1, std::f64::consts::FRAC_PI_2));
        }
    }
    maps
}

#[test]
fn boundary_kr_is_at_most_mass() {
    let mut rng = StdRng::seed_from_u64(100);
    for _ in 0..500 {
        let space = random_space(&mut rng);
        let t = fixtures::random_current(&mut rng, space, 20);
        assert!(t.kr_norm_of_boundary().unwrap() <= t.mass_total() + 1e-9);
        assert!(t.canonicalize().boundary().approx_eq(&t.boundary()));
    }
}

#[test]
fn evaluation_is_invariant_under_canonicalization_and_bounded_by_mass() {
    let mut rng = StdRng::seed_from_u64(101);
    for _ in 0..200 {
        let space = random_space(&mut rng);
        let t = fixtures::random_current(&mut rng, space, 12);
        let c = t.canonicalize();
        assert_eq!(c.canonicalize(), c);
        for _ in 0..4 {
            let form = random_form(&mut rng, space.dim);
            let (a, b) = (t.evaluate(&form), c.evaluate(&form));
            assert!((a - b).abs() <= 1e-8, "{a} vs {b} for {form:?}");
            let bound = form.lipschitz_pi(&space) * t.abs_integral(&form);
            assert!(a.abs() <= bound + 1e-8, "{a} exceeds {bound}");
        }
    }
}

#[test]
fn isometries_preserve_mass_and_boundary_norm() {
    let mut rng = StdRng::seed_from_u64(102);
    for _ in 0..100 {
        let space = random_space(&mut rng);
        let t = fixtures::random_current(&mut rng, space, 10);
        let (m, kr) = (t.mass_total(), t.kr_norm_of_boundary().unwrap());
        for phi in isometries(&mut rng, space) {
            let s = t.pushforward(&phi, space).unwrap();
            assert!((s.mass_total() - m).abs() <= 1e-9 * (1.0 + m));
            assert!((s.kr_norm_of_boundary().unwrap() - kr).abs() <= 1e-9 * (1.0 + kr));
        }
    }
}

#[test]
fn rotated_semicircle() {
    let t = fixtures::semicircle(256);
    let plane = VectorSpace::euclidean(2);
    let rot = AffineMap::rotation(2, 0, 1, std::f64::consts::FRAC_PI_2);
    let s = t.pushforward(&rot, plane).unwrap();
    assert!((s.mass_total() - t.mass_total()).abs() < 1e-12);
    let expected = Molecule::dipole(plane.into(), vec![0.0, 1.0], vec![0.0, -1.0]).unwrap();
    assert!(s.boundary().approx_eq(&expected));
}

#[test]
fn restriction_is_additive_for_general_boxes() {
    let mut rng = StdRng::seed_from_u64(103);
    for _ in 0..200 {
        let space = random_space(&mut rng);
        let t = fixtures::random_current(&mut rng, space, 12).canonicalize();
        // irrational-looking faces avoid grid overlaps
        let lo: Vec<f64> = (0..space.dim).map(|_| rng.gen_range(-1.0..1.5) + 0.123_456_7).collect();
        let hi: Vec<f64> = lo.iter().map(|l| l + rng.gen_range(0.5..3.0)).collect();
        let bx = AxisBox::new(lo, hi);
        let inside = t.restrict(&bx).mass_total();
        let outside = t.restrict_complement(&bx).mass_total();
        assert!((inside + outside - t.mass_total()).abs() <= 1e-9 * (1.0 + t.mass_total()));
        assert!((t.mass().of_box(&bx) - inside).abs() <= 1e-9 * (1.0 + inside));
    }
}

#[test]
fn kr_brute_force_homogeneity_and_triangle() {
    let mut rng = StdRng::seed_from_u64(104);
    fn best_matching(space: &VectorSpace, xs: &[Vec<f64>], ys: &[Vec<f64>], used: &mut Vec<bool>, i: usize) -> f64 {
        if i == xs.len() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for j in 0..ys.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(space.dist(&xs[i], &ys[j]) + best_matching(space, xs, ys, used, i + 1));
                used[j] = false;
            }
        }
        best
    }
    for _ in 0..100 {
        let space = random_space(&mut rng);
        let n = rng.gen_range(1..=5);
        let (m, xs, ys) = fixtures::random_unit_molecule(&mut rng, space, n);
        let oracle = best_matching(&space, &xs, &ys, &mut vec![false; n], 0);
        let kr = kr_norm(&m).unwrap();
        assert!((kr - oracle).abs() <= 1e-9, "{kr} vs {oracle}");
        let s = rng.gen_range(0.1..5.0);
        assert!((kr_norm(&m.scaled(s)).unwrap() - s * kr).abs() <= 1e-9 * (1.0 + s * kr));
        let other = { let n = rng.gen_range(2..8); fixtures::random_molecule(&mut rng, space, n) };
        let sum = kr_norm(&m.plus(&other).unwrap()).unwrap();
        assert!(sum <= kr + kr_norm(&other).unwrap() + 1e-9);
    }
}

#[test]
fn plans_certify_themselves() {
    let mut rng = StdRng::seed_from_u64(105);
    for _ in 0..200 {
        let space = random_space(&mut rng);
        let m = { let n = rng.gen_range(2..14); fixtures::random_molecule(&mut rng, space, n) };
        let plan = solve_plan(&m).unwrap();
        let report = plan.verify();
        assert!(report.passed(), "{report}");
    }
    for _ in 0..50 {
        let fm = fixtures::random_metric_space(&mut rng, 8, 2, Norm::Euclidean);
        let atoms: Vec<(usize, f64)> = vec![(0, 1.0), (3, 0.5), (5, -1.2), (7, -0.3)];
        let m = Molecule::on_finite(fm, &atoms).unwrap();
        assert!(solve_plan(&m).unwrap().verify().passed());
    }
}

#[test]
fn primitives_and_tent_monotonicity() {
    let mut rng = StdRng::seed_from_u64(106);
    for _ in 0..100 {
        let space = random_space(&mut rng);
        let m = { let n = rng.gen_range(2..10); fixtures::random_molecule(&mut rng, space, n) };
        let kr = kr_norm(&m).unwrap();
        let r = optimal_primitive(&m).unwrap();
        assert!(r.boundary().approx_eq(&m));
        assert!((r.mass_total() - kr).abs() <= 1e-9);
        let mut last = f64::INFINITY;
        for eps in [1.0, 0.1, 0.01] {
            let mass = tent_primitive(&m, eps).unwrap().mass_total();
            assert!(mass <= last + 1e-12);
            assert!(mass >= kr - 1e-9);
            last = mass;
        }
    }
}

#[test]
fn fillings_pass_their_checks() {
    let mut rng = StdRng::seed_from_u64(107);
    for _ in 0..200 {
        let space = random_space(&mut rng);
        let t = fixtures::random_current(&mut rng, space, 12);
        let flat = fill_flat(&t).unwrap();
        let rep = check_flat(&t, &flat).unwrap();
        assert!(rep.passed(), "{rep}");
        let eps = rng.gen_range(0.01..1.0);
        let lifted = fill_lifted(&t, eps).unwrap();
        let rep = check_lifted(&t, &lifted, eps).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn decompositions_are_deterministic_and_clean() {
    let mut rng = StdRng::seed_from_u64(108);
    for _ in 0..300 {
        let space = random_space(&mut rng);
        let t = fixtures::random_current(&mut rng, space, 20).canonicalize();
        let curves = smirnov_decompose(&t);
        assert_eq!(curves, smirnov_decompose(&t));
        let rep = check_decomposition(&t, &curves).unwrap();
        assert!(rep.passed(), "{rep}");
        for c in &curves {
            assert!(c.points.windows(2).all(|w| w[0] != w[1]));
            if c.closed {
                assert_eq!(c.points.first(), c.points.last());
            }
        }
    }
}

#[test]
fn cycles_decompose_into_loops() {
    let mut rng = StdRng::seed_from_u64(109);
    for _ in 0..100 {
        let space = random_space(&mut rng);
        let t = fixtures::random_current(&mut rng, space, 10);
        let c = fill_flat(&t).unwrap().cycle.canonicalize();
        if !c.boundary().is_empty() {
            continue;
        }
        let curves = smirnov_decompose(&c);
        assert!(curves.iter().all(|x| x.closed));
    }
}

#[test]
fn transport_param_total_variation() {
    let mut rng = StdRng::seed_from_u64(110);
    for _ in 0..100 {
        let k = fixtures::random_interval_union(&mut rng, 10);
        let u = transport_param(&k).unwrap();
        let measure: f64 = k.iter().map(|(a, b)| b - a).sum();
        let gaps: f64 = k.windows(2).map(|w| w[1].0 - w[0].1).sum();
        let spread = k[k.len() - 1].1 - k[0].0;
        assert!((u.total_variation() - spread).abs() <= 1e-12);
        assert!((u.absolutely_continuous_variation() - measure).abs() <= 1e-12);
        assert!((u.jump_variation() - gaps).abs() <= 1e-12);
        assert!(u.pieces().iter().all(|p| (p.slope - measure).abs() <= 1e-12));
    }
}

#[test]
fn transport_param_is_continuous_along_fat_cantor_depths() {
    let limit = transport_param(&fixtures::fat_cantor(14, 1.0)).unwrap();
    let mut last = f64::INFINITY;
    for depth in 1..=10 {
        let u = transport_param(&fixtures::fat_cantor(depth, 1.0)).unwrap();
        let d = u.l1_distance(&limit);
        assert!(d < last, "depth {depth}: {d} not below {last}");
        last = d;
    }
    assert!(last < 1e-3);
    let id = MonotoneCadlag::identity();
    assert!(transport_param(&[(0.0, 1.0)]).unwrap().l1_distance(&id) == 0.0);
}

#[test]
fn representations_verify_on_random_currents() {
    let mut rng = StdRng::seed_from_u64(111);
    for _ in 0..100 {
        let space = random_space(&mut rng);
        let t = fixtures::random_current(&mut rng, space, 15);
        let eps = rng.gen_range(0.01..0.5);
        let rep = sbv_represent(&t, eps).unwrap();
        let report = rep.verify().unwrap();
        assert!(report.passed(), "{report}");
        for (u, _) in &rep.entries {
            if u.speed > 0.0 {
                let f = u.fragment(&space).unwrap();
                assert!(f.is_arclength(&space));
                assert!(f.current(space).approx_eq(&u.current_a(space)));
                let (_, end) = f.domain[f.domain.len() - 1];
                assert!((end - (u.length() + u.jump_total(&space))).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn representation_of_fixtures() {
    let semi = fixtures::semicircle(256);
    let rep = sbv_represent(&semi, 0.01).unwrap();
    assert!(rep.verify().unwrap().passed());
    assert!((rep.weighted_length() - semi.mass_total()).abs() < 1e-4);
    assert!(rep.weighted_jumps() <= 2.0 + 0.01);

    let pair = fixtures::collinear_pair(2);
    let rep = sbv_represent(&pair, 0.01).unwrap();
    assert!(rep.verify().unwrap().passed());
    assert!((pair.kr_norm_of_boundary().unwrap() - 2.0 / 3.0).abs() < 1e-12);

    let square = fixtures::square_loop();
    let rep = sbv_represent(&square, 0.1).unwrap();
    assert_eq!(rep.entries.len(), 1);
    assert!(rep.entries[0].0.jumps.is_empty());
}
