use pappus::anosov::{chart_dir_to_std, chart_to_std, limit_point, nesting_check, projective_gap, ConvexQuad};
use pappus::linalg::{eigen_real, normalize_det_one, Mat3, Vec3};
use pappus::marked_box::{relation_suite, BoxModuli, Lambda};
use pappus::modular::{crossing_sequence, GroupWord, WLetter};
use pappus::projective::{cross_ratio, join, meet, Flag, Point, ProjSymmetry};
use pappus::representation::{evaluate_schwartz, RepresentationParams};
use pappus::sampling;
use pappus::scalar::{Rational, Scalar};
use pappus::variety::psi_residual;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_point<R: Rng>(r: &mut R) -> Point<Rational> {
    loop {
        let v = Vec3::<Rational>::from_i64([r.gen_range(-9..10), r.gen_range(-9..10), r.gen_range(-9..10)]);
        if !v.is_zero() {
            return Point(v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_products_invert_exactly(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sampling::integer_gl3(&mut r);
        let b = sampling::integer_gl3(&mut r);
        prop_assert_eq!(&(&a * &b) * &b.inverse().unwrap(), a);
    }

    #[test]
    fn integer_products_match_rational_formulas(a in prop::array::uniform3(-1000i64..1000), b in prop::array::uniform3(-1000i64..1000), d in 1i64..4) {
        // d = 1 takes the integer shortcut, d > 1 the rational path; both must agree with i64 arithmetic.
        let v = |x: [i64; 3]| x.map(|k| Rational::from_ratio(k, d));
        let (va, vb) = (v(a), v(b));
        let dd = Rational::from_i64(d * d);
        let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        prop_assert_eq!(Rational::cross3(&va, &vb), c.map(|k| Rational::from_i64(k) / dd.clone()));
        prop_assert_eq!(Rational::dot3(&va, &vb), Rational::from_i64(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / dd);
        let mut p = [va[0].clone(), va[1].clone(), va[2].clone()];
        Rational::primitive(&mut p);
        let back = Vec3(p.clone());
        prop_assert!(p.iter().all(|x| x.is_integer()));
        prop_assert!(a == [0, 0, 0] || Vec3(va).proportional(&back, 0.0));
    }

    #[test]
    fn eigenpairs_have_small_residuals(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = Mat3(std::array::from_fn(|_| std::array::from_fn(|_| r.gen_range(-1.0..1.0))));
        let Ok(pi) = p.inverse() else { return Ok(()) };
        prop_assume!(p.frobenius_sq().sqrt() * pi.frobenius_sq().sqrt() < 1e6);
        let mut ls = [r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0)];
        ls.sort_by(|a: &f64, b| a.abs().partial_cmp(&b.abs()).unwrap());
        prop_assume!(ls[0].abs() > 0.1 && ls[1].abs() - ls[0].abs() > 0.1 && ls[2].abs() - ls[1].abs() > 0.1);
        let m = &(&p * &Mat3::diag(ls[0], ls[1], ls[2])) * &pi;
        let s = eigen_real(&m).unwrap();
        for (l, v) in &s.pairs {
            let res = (m.mul_vec(v) - v.scale(l)).norm();
            prop_assert!(res <= 1e-9 * m.max_abs() * v.norm(), "residual {res}");
        }
    }

    #[test]
    fn det_one_normalization_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sampling::integer_gl3(&mut r).to_f64();
        let n = normalize_det_one(&m).unwrap();
        prop_assert!((n.det() - 1.0).abs() < 1e-12);
        let nn = normalize_det_one(&n).unwrap();
        for (a, b) in n.0.iter().flatten().zip(nn.0.iter().flatten()) {
            prop_assert!((a - b).abs() <= 1e-12 * n.max_abs());
        }
    }

    #[test]
    fn meet_of_joins_is_incident(seed in any::<u64>()) {
        let mut r = rng(seed);
        let [a, b, c, d] = std::array::from_fn(|_| random_point(&mut r));
        let (Ok(l), Ok(m)) = (join(&a, &b), join(&c, &d)) else { return Ok(()) };
        if let Ok(x) = meet(&l, &m) {
            prop_assert!(x.on(&l) && x.on(&m));
        }
    }

    #[test]
    fn cross_ratio_is_projectively_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_point(&mut r), random_point(&mut r));
        prop_assume!(!a.eq_proj(&b));
        let comb = |s: i64, t: i64| Point(a.0.scale(&Rational::from_i64(s)) + b.0.scale(&Rational::from_i64(t)));
        let pts = [comb(1, 0), comb(1, 2), comb(3, -1), comb(0, 1)];
        let g = sampling::integer_gl3(&mut r);
        let moved: Vec<Point<Rational>> = pts.iter().map(|p| Point(g.mul_vec(&p.0))).collect();
        let c0 = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let c1 = cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3]).unwrap();
        prop_assert_eq!(c0, c1);
    }

    #[test]
    fn symmetries_map_flags_to_flags(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_point(&mut r), random_point(&mut r));
        let Ok(l) = join(&a, &b) else { return Ok(()) };
        let f = Flag::new(a, l).unwrap();
        let g = sampling::integer_gl3(&mut r);
        for s in [ProjSymmetry::transformation(g.clone()), ProjSymmetry::duality(g)] {
            let img = s.apply_flag(&f).unwrap();
            prop_assert!(img.point.on(&img.line));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn box_relations_hold_exactly(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = sampling::convex_box(&mut r);
        prop_assert!(relation_suite(&b, &Lambda::zero(), false).unwrap().iter().all(|&x| x));
        let l = sampling::rational_lambda(&mut r);
        prop_assert!(relation_suite(&b, &l, false).unwrap().iter().all(|&x| x));
        prop_assert!(!relation_suite(&b, &l, true).unwrap().iter().all(|&x| x));
    }

    #[test]
    fn elementary_images_nest(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = sampling::convex_box(&mut r);
        let outer = b.interior().unwrap();
        let t1 = b.tau1().unwrap().interior().unwrap();
        let t2 = b.tau2().unwrap().interior().unwrap();
        let i = b.i().unwrap().interior().unwrap();
        prop_assert!(outer.contains_quad(&t1, false) && !t1.contains_quad(&outer, false));
        prop_assert!(outer.contains_quad(&t2, false) && !t2.contains_quad(&outer, false));
        prop_assert!(t1.disjoint(&t2, false));
        prop_assert!(outer.disjoint(&i, false));
    }

    #[test]
    fn dual_boxes_nest_the_other_way(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = sampling::convex_box(&mut r);
        let d = b.dual_box().unwrap().interior_unchecked().unwrap();
        for t in [b.tau1().unwrap(), b.tau2().unwrap()] {
            let dt = t.dual_box().unwrap().interior_unchecked().unwrap();
            prop_assert!(dt.contains_quad(&d, false) && !d.contains_quad(&dt, false));
        }
        let di = b.i().unwrap().dual_box().unwrap().interior_unchecked().unwrap();
        prop_assert!(d.disjoint(&di, false));
    }

    #[test]
    fn deformation_commutes_with_transformations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = sampling::convex_box(&mut r);
        let l = sampling::rational_lambda(&mut r);
        let g = sampling::integer_gl3(&mut r);
        let lhs = b.sigma(&l).unwrap().transform(&g).unwrap();
        let rhs = b.transform(&g).unwrap().sigma(&l).unwrap();
        prop_assert!(lhs.eq_overmarked(&rhs));
    }

    #[test]
    fn closures_nest_strictly_inside_region(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = RepresentationParams::new(sampling::moduli_f64(&mut r), sampling::lambda_in_interior(&mut r, 1e-6));
        prop_assert!(nesting_check(&p, true).unwrap().all());
    }

    #[test]
    fn crossing_partial_products_stay_in_subgroup(seed in any::<u64>()) {
        let mut r = rng(seed);
        let target = sampling::periodic_word(&mut r, 4);
        let c = crossing_sequence(&target, 12).unwrap();
        for g in c.partial_products().iter().skip(1) {
            prop_assert!(c.base.inverse().mul(g).in_subgroup_o().unwrap());
        }
    }

    #[test]
    fn evaluate_matches_schwartz_image_at_origin(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sampling::convex_moduli(&mut r);
        let wl = r.gen_range(0..10);
        let w = sampling::group_word(&mut r, wl);
        prop_assume!(w.in_subgroup_o().unwrap());
        let p = RepresentationParams::new(m.clone(), Lambda::zero());
        let s = evaluate_schwartz(&m, &w).unwrap();
        prop_assert!(s.eq_proj(&ProjSymmetry::transformation(p.evaluate(&w).unwrap())));
    }

    #[test]
    fn hilbert_metric_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = ConvexQuad::from_frame(sampling::integer_gl3(&mut r).to_f64()).unwrap();
        let pt = |r: &mut StdRng| q.frame().mul_vec(&chart_to_std(&r.gen_range(-0.95..0.95), &r.gen_range(-0.95..0.95)));
        let (x, y, z) = (pt(&mut r), pt(&mut r), pt(&mut r));
        let d = |a: &Vec3<f64>, b: &Vec3<f64>| q.hilbert_distance(a, b).unwrap();
        prop_assert!(d(&x, &x).abs() < 1e-10);
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() < 1e-10);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-10);
        let g = sampling::integer_gl3(&mut r).to_f64();
        let gq = q.transformed(&g).unwrap();
        let dg = gq.hilbert_distance(&g.mul_vec(&x), &g.mul_vec(&y)).unwrap();
        prop_assert!((dg - d(&x, &y)).abs() <= 1e-9 * (1.0 + d(&x, &y)));
    }

    #[test]
    fn larger_domains_shrink_distances(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = r.gen_range(1.1..3.0);
        let inner = ConvexQuad::<f64>::from_frame(Mat3::identity()).unwrap();
        // Dilation by k about the center of the square chart.
        let (a, b) = ((1.0 + k) / 2.0, (1.0 - k) / 2.0);
        let outer = ConvexQuad::from_frame(Mat3([[k, 0.0, 0.0], [0.0, a, b], [0.0, b, a]])).unwrap();
        let x = chart_to_std(&r.gen_range(-0.9..0.9), &r.gen_range(-0.9..0.9));
        let y = chart_to_std(&r.gen_range(-0.9..0.9), &r.gen_range(-0.9..0.9));
        prop_assume!(projective_gap(&x.0, &y.0) > 1e-6);
        prop_assert!(outer.hilbert_distance(&x, &y).unwrap() < inner.hilbert_distance(&x, &y).unwrap());
        let v = chart_dir_to_std(&r.gen_range(-1.0..1.0), &r.gen_range(-1.0..1.0));
        prop_assert!(outer.hilbert_norm(&x, &v).unwrap() <= inner.hilbert_norm(&x, &v).unwrap() + 1e-15);
    }

    #[test]
    fn limit_points_are_attracting_eigenlines(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = RepresentationParams::new(sampling::moduli_f64(&mut r), sampling::lambda_in_interior(&mut r, 1e-3));
        let target = sampling::periodic_word(&mut r, 4);
        let s = limit_point(&p, &target, 1e-12, 10_000).unwrap();
        let spec = eigen_real(&p.evaluate(&target).unwrap()).unwrap();
        prop_assert!(projective_gap(&s.point, &spec.attracting().0) < 1e-9);
        prop_assert!(s.flag_residual < 1e-9);
    }

    #[test]
    fn psi_vanishes_along_family(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sampling::moduli_f64(&mut r);
        let p = RepresentationParams::new(m, sampling::lambda_in_region(&mut r));
        prop_assert!(psi_residual(&p).unwrap() < 1e-9);
    }
}

#[test]
fn distinct_periodic_words_have_distinct_limit_points() {
    let p = RepresentationParams::new(BoxModuli::new(0.5, 1.0 / 3.0).unwrap(), Lambda::from_eps_delta(-0.2, 0.05));
    let words: Vec<GroupWord> = WLetter::ALL.iter().map(|w| w.word()).collect();
    let pts: Vec<[f64; 3]> = words.iter().map(|w| limit_point(&p, w, 1e-12, 10_000).unwrap().point).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            assert!(projective_gap(&pts[i], &pts[j]) > 1e-11, "{} {}", words[i], words[j]);
        }
    }
}
