//! Acceptance run: ten numbered criteria, one PASS/FAIL line each.
//! Exits nonzero when any criterion fails.

use std::time::Instant;

use pappus::anosov::{
    chart_to_std, constant_c, distortion_estimate, limit_point, loxodromy_scan, nesting_check, projective_gap,
    region_delta_max, ConvexQuad, DistortionConfig,
};
use pappus::linalg::{eigen_real, Mat3, Vec3};
use pappus::marked_box::{relation_suite, BoxModuli, Lambda};
use pappus::modular::{normal_forms, FareyGeodesic, GroupWord, Letter};
use pappus::representation::{
    antisymmetry_identity, rotation_criterion, matrix_a, matrix_d, non_anosov_witness, schwartz_equivariance,
    solve_delta_h, RepresentationParams,
};
use pappus::sampling;
use pappus::scalar::{MpFloat, Rational, Scalar};
use pappus::variety::{jacobian_check_phi, jacobian_check_psi};
use pappus::{Error, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn mp(x: f64) -> MpFloat {
    MpFloat::from_f64(x)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn relations() -> Result<Outcome> {
    let mut r = rng(1);
    let (mut checked, mut caught) = (0, 0);
    for _ in 0..100 {
        let b = sampling::convex_box(&mut r);
        let mut lambdas = vec![Lambda::zero()];
        lambdas.extend((0..10).map(|_| sampling::rational_lambda(&mut r)));
        for l in &lambdas {
            let res = relation_suite(&b, l, false)?;
            if let Some(k) = res.iter().position(|ok| !ok) {
                return outcome(false, format!("relation {k} fails at u={} v={}", l.u, l.v));
            }
            checked += 1;
            // Replacing t2 by t1 must break something, or the suite is vacuous.
            if relation_suite(&b, l, true)?.iter().any(|ok| !ok) {
                caught += 1;
            }
        }
    }
    outcome(caught == checked, format!("{checked} box/lambda pairs exact, mutation caught in {caught}"))
}

fn ground_truth() -> Result<Outcome> {
    let m = BoxModuli::<Rational>::special();
    let a = matrix_a(&m)?;
    let a_ok = a.proj_eq(&Mat3::from_i64([[1, 0, 0], [0, -1, 1], [0, -1, 0]]), 0.0);
    let d_ok = matrix_d(&m)?.proj_eq(&Mat3::identity(), 0.0);
    let b = RepresentationParams::new(m, Lambda::zero()).matrices()?.b;
    let b_ok = b.proj_eq(&Mat3::from_i64([[1, 0, 0], [0, 0, 1], [0, -1, -1]]), 0.0);
    let target = Mat3::<Rational>::from_i64([[-1, 1, 0], [0, -1, 0], [0, 0, 1]]);
    let mut r = rng(2);
    let mut conj = 0;
    for _ in 0..20 {
        let m = sampling::convex_moduli(&mut r);
        let (p, qm) = non_anosov_witness(&m)?;
        if &(&qm * &p) * &qm.inverse()? == target {
            conj += 1;
        }
    }
    outcome(
        a_ok && d_ok && b_ok && conj == 20,
        format!("A {a_ok}, D {d_ok}, B {b_ok}; Jordan conjugacy exact on {conj}/20 moduli"),
    )
}

fn equivariance() -> Result<Outcome> {
    let mut r = rng(3);
    let edges: Vec<FareyGeodesic> = normal_forms(5).iter().map(|w| FareyGeodesic::e0().star(w)).collect();
    let gens = [GroupWord::from_letters(&[Letter::I]), GroupWord::from_letters(&[Letter::R])];
    let mut n = 0;
    for _ in 0..5 {
        let m = sampling::convex_moduli(&mut r);
        for e in &edges {
            for g in &gens {
                if !schwartz_equivariance(&m, e, g)? {
                    return outcome(false, format!("edge {e}, generator {g}, moduli ({}, {})", m.zeta_t, m.zeta_b));
                }
                n += 1;
            }
        }
    }
    outcome(true, format!("{} edges x 2 generators x 5 moduli, {n} exact checks", edges.len()))
}

fn non_anosov_boundary() -> Result<Outcome> {
    let t1sq = GroupWord::t1().pow(2).normalize();
    let mut worst: f64 = 0.0;
    let mut flagged = 0;
    let moduli = [(0.0, 0.0), (0.5, 1.0 / 3.0), (-0.3, 0.7)];
    for (t, b) in moduli {
        let p = RepresentationParams::new(BoxModuli::new(mp(t), mp(b))?, Lambda::zero());
        let sp = eigen_real(&p.evaluate(&t1sq)?)?;
        worst = worst.max(sp.gaps.iter().map(|g| (g - 1.0).abs()).fold(0.0, f64::max));
        let scan = loxodromy_scan(&p, 4)?;
        if scan.non_loxodromic.contains(&t1sq.to_string()) {
            flagged += 1;
        }
    }
    outcome(
        worst <= 1e-9 && flagged == moduli.len(),
        format!("max |gap - 1| = {worst:.1e} for {t1sq}; scan flags it at {flagged}/{} moduli", moduli.len()),
    )
}

fn anosov_interior() -> Result<Outcome> {
    let mut r = rng(5);
    let moduli = [(0.5, 1.0 / 3.0), (-2.0 / 7.0, 0.6), (-0.7, 0.45)];
    let mut points = 0;
    let (mut min_c, mut min_gap, mut worst_lp, mut worst_flag) = (f64::INFINITY, f64::INFINITY, 0.0f64, 0.0f64);
    for (t, b) in moduli {
        for eps in [-0.1, -0.2, -0.3, -0.4, -0.5] {
            let dmax = region_delta_max(eps);
            for frac in [-0.8, -0.4, 0.0, 0.4, 0.8] {
                let delta = frac * dmax;
                let lam = Lambda::from_eps_delta(eps, delta);
                if !lam.in_region_interior() {
                    return outcome(false, format!("grid point ({eps}, {delta}) outside the open region"));
                }
                let p = RepresentationParams::new(BoxModuli::new(t, b)?, lam);
                let here = format!("moduli ({t:.3}, {b:.3}), lambda ({eps}, {delta:.4})");
                if !nesting_check(&p, true)?.all() {
                    return outcome(false, format!("strict nesting fails at {here}"));
                }
                let c = constant_c(&p, DistortionConfig::default())?;
                min_c = min_c.min(c);
                let scan = loxodromy_scan(&p, 6)?;
                min_gap = min_gap.min(scan.min_gap);
                if !scan.all_loxodromic() || scan.min_gap <= 1.0 + 1e-6 {
                    return outcome(false, format!("word {} has gap {} at {here}", scan.min_gap_word, scan.min_gap));
                }
                let pm = RepresentationParams::new(BoxModuli::new(mp(t), mp(b))?, Lambda::from_eps_delta(mp(eps), mp(delta)));
                for _ in 0..50 {
                    let w = sampling::periodic_word(&mut r, 5);
                    let s = limit_point(&pm, &w, 1e-12, 20_000)?;
                    let oracle = eigen_real(&pm.evaluate(&w)?)?.attracting().to_f64();
                    worst_lp = worst_lp.max(projective_gap(&s.point, &oracle.0));
                    worst_flag = worst_flag.max(s.flag_residual);
                }
                points += 1;
            }
        }
    }
    let pass = min_c > 1.0 && worst_lp <= 1e-9 && worst_flag <= 1e-9;
    outcome(
        pass,
        format!(
            "{points} grid points: min C {min_c:.4}, min gap {min_gap:.4}, limit vs eigenline {worst_lp:.1e}, flag residual {worst_flag:.1e}"
        ),
    )
}

fn extension_curve() -> Result<Outcome> {
    let m = BoxModuli::new(MpFloat::from_ratio(1, 2), MpFloat::from_ratio(1, 3))?;
    let params = |e: &MpFloat, d: &MpFloat| RepresentationParams::new(m.clone(), Lambda::from_eps_delta(e.clone(), d.clone()));
    let mut notes = Vec::new();
    let mut pass = true;
    for eps in [-0.01, -0.02, -0.05] {
        let e = mp(eps);
        let d = solve_delta_h(&m, &e)?;
        let p = params(&e, &d);
        let h = p.curve_h().to_f64().abs();
        let (det, n2) = p.obstruction()?;
        let scaled = det.to_f64().abs() / n2.to_f64().powf(1.5);
        let tw = p.extension_intertwiner()?;
        let sym = tw.s.is_symmetric();
        let ok = h <= 1e-12 && scaled <= 1e-10 && sym && tw.invertible && tw.residual <= 1e-10;
        pass &= ok;
        notes.push(format!("eps {eps}: delta {:.6e}, |h| {h:.0e}, det {scaled:.0e}, residual {:.0e}", d.to_f64(), tw.residual));
    }
    let d0 = solve_delta_h(&m, &mp(0.0))?.to_f64();
    let eta = 1e-4;
    let slope = (solve_delta_h(&m, &mp(eta))?.to_f64() - solve_delta_h(&m, &mp(-eta))?.to_f64()) / (2.0 * eta);
    pass &= d0 == 0.0 && slope.abs() <= 1e-3;
    notes.push(format!("delta(0) = {d0}, slope {slope:.1e}"));
    outcome(pass, notes.join("; "))
}

/// `mu P R P^{-1}` with `R` a rational rotation from a Pythagorean triple.
fn rational_rotation<R: Rng>(r: &mut R) -> Mat3<Rational> {
    let (a, b) = loop {
        let (a, b) = (r.gen_range(1..10i64), r.gen_range(1..10i64));
        if a != b {
            break (a, b);
        }
    };
    let h = a * a + b * b;
    let (c, s) = (q(a * a - b * b, h), q(2 * a * b, h));
    let z = Rational::zero();
    let rot = Mat3([
        [Rational::one(), z.clone(), z.clone()],
        [z.clone(), c.clone(), -s.clone()],
        [z, s, c],
    ]);
    let p = sampling::integer_gl3(r);
    let mu = q(r.gen_range(1..6) * if r.gen_bool(0.5) { 1 } else { -1 }, r.gen_range(1..6));
    (&(&p * &rot) * &p.inverse().unwrap()).scale(&mu)
}

fn random_symmetric<R: Rng>(r: &mut R) -> Mat3<Rational> {
    loop {
        let mut m = Mat3::<Rational>::zero();
        for i in 0..3 {
            for j in i..3 {
                let v = Rational::from_i64(r.gen_range(-5..6));
                m.0[i][j] = v.clone();
                m.0[j][i] = v;
            }
        }
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn rotation_criterion_check() -> Result<Outcome> {
    let mut r = rng(7);
    let (mut vanishing, mut generic) = (0, 0);
    for k in 0..200 {
        let a = rational_rotation(&mut r);
        let g = if k % 2 == 0 { random_symmetric(&mut r) } else { sampling::integer_gl3(&mut r) };
        let out = rotation_criterion(&a, &g)?;
        if !out.consistent() {
            return outcome(false, format!("pair {k}: det vanishes {}, symmetric exists {}", out.det_vanishes, out.symmetric_exists));
        }
        if out.det_vanishes {
            vanishing += 1;
        } else {
            generic += 1;
        }
    }
    for k in 0..50 {
        let a = rational_rotation(&mut r);
        let s = random_symmetric(&mut r);
        let (lhs, rhs) = antisymmetry_identity(&a, &s)?;
        if lhs != rhs {
            return outcome(false, format!("anti-symmetry identity fails on sample {k}"));
        }
    }
    // Both sides of the equivalence must actually occur.
    outcome(
        vanishing >= 100 && generic > 0,
        format!("200 pairs consistent ({vanishing} with vanishing determinant); identity exact on 50"),
    )
}

fn jacobians() -> Result<Outcome> {
    let grid = [q(-1, 2), q(0, 1), q(1, 3), q(2, 3)];
    let mut worst: f64 = 0.0;
    let (mut n, mut special_ok) = (0, false);
    for t in &grid {
        for b in &grid {
            let m = BoxModuli::new(MpFloat::from_rational(t), MpFloat::from_rational(b))?;
            for (e, d) in [(0.0, 0.0), (-0.2, 0.05)] {
                let rep = jacobian_check_psi(&m, &mp(e), &mp(d))?;
                worst = worst.max(rep.relative_error);
                n += 1;
            }
            match jacobian_check_phi(&m) {
                Err(Error::SpecialBox) if m.is_special() => special_ok = true,
                Ok(rep) if !m.is_special() => {
                    worst = worst.max(rep.relative_error);
                    n += 1;
                }
                other => return outcome(false, format!("unexpected Phi outcome at ({t}, {b}): {:?}", other.map(|r| r.relative_error))),
            }
        }
    }
    outcome(
        worst <= 1e-6 && special_ok,
        format!("{n} determinants, worst relative error {worst:.1e}; special box rejected {special_ok}"),
    )
}

fn shrink<R: Rng>(r: &mut R, c: &[(f64, f64); 4], k: f64) -> [(f64, f64); 4] {
    let cx = c.iter().map(|p| p.0).sum::<f64>() / 4.0;
    let cy = c.iter().map(|p| p.1).sum::<f64>() / 4.0;
    c.map(|(x, y)| (cx + k * (x - cx) + r.gen_range(-0.05..0.05), cy + k * (y - cy) + r.gen_range(-0.05..0.05)))
}

/// Three strictly nested quadrilaterals `inner ⊂ middle ⊂ outer` in general position.
fn nested_triple<R: Rng>(r: &mut R) -> [ConvexQuad<f64>; 3] {
    loop {
        let c: [(f64, f64); 4] =
            [(-1.0, 1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)].map(|(a, b)| (a * r.gen_range(0.3..1.0), b * r.gen_range(0.3..1.0)));
        let (k1, k2) = (r.gen_range(0.5..0.95), r.gen_range(0.5..0.95));
        let mid = shrink(r, &c, k1);
        let inn = shrink(r, &mid, k2);
        let (Ok(o), Ok(m), Ok(i)) = (ConvexQuad::from_affine(c), ConvexQuad::from_affine(mid), ConvexQuad::from_affine(inn)) else {
            continue;
        };
        if !(o.contains_quad(&m, true) && m.contains_quad(&i, true)) {
            continue;
        }
        let g = sampling::integer_gl3(r).to_f64();
        let t = |d: &ConvexQuad<f64>| d.transformed(&g).unwrap();
        return [t(&i), t(&m), t(&o)];
    }
}

fn hilbert_suite() -> Result<Outcome> {
    const CONFIGS: usize = 10_000;
    const SLACK: f64 = 1e-3;
    let cfg = DistortionConfig { resolution: 16, directions: 16, refine: 2 };
    let mut r = rng(9);
    let (mut worst_inv_d, mut worst_inv_c, mut worst_comp): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for k in 0..CONFIGS {
        let [inner, mid, outer] = nested_triple(&mut r);
        let pt = |r: &mut StdRng| inner.frame().mul_vec(&chart_to_std(&r.gen_range(-0.95..0.95), &r.gen_range(-0.95..0.95)));
        let (x, y, z) = (pt(&mut r), pt(&mut r), pt(&mut r));
        let fail = |what: &str| outcome(false, format!("configuration {k}: {what}"));
        for d in [&inner, &mid, &outer] {
            let dist = |a: &Vec3<f64>, b: &Vec3<f64>| d.hilbert_distance(a, b);
            let (dxy, dyx, dxz, dyz) = (dist(&x, &y)?, dist(&y, &x)?, dist(&x, &z)?, dist(&y, &z)?);
            if dist(&x, &x)?.abs() > 1e-12 || dxy <= 0.0 {
                return fail("identity of indiscernibles");
            }
            if (dxy - dyx).abs() > 1e-10 * (1.0 + dxy) {
                return fail("symmetry");
            }
            if dxz > dxy + dyz + 1e-10 * (1.0 + dxz) {
                return fail("triangle inequality");
            }
        }
        // Projective invariance of distance and distortion.
        let g = sampling::integer_gl3(&mut r).to_f64();
        let (gi, gm) = (inner.transformed(&g)?, mid.transformed(&g)?);
        let d = inner.hilbert_distance(&x, &y)?;
        let dg = gi.hilbert_distance(&g.mul_vec(&x), &g.mul_vec(&y))?;
        worst_inv_d = worst_inv_d.max((dg - d).abs() / (1.0 + d));
        let c_im = distortion_estimate(&inner, &mid, cfg)?;
        let c_g = distortion_estimate(&gi, &gm, cfg)?;
        worst_inv_c = worst_inv_c.max((c_g - c_im).abs());
        // Expansion by inclusion, with the sampled constant.
        let c_mo = distortion_estimate(&mid, &outer, cfg)?;
        if c_im <= 1.0 || c_mo <= 1.0 {
            return fail("strictly nested domains with distortion at most 1");
        }
        let (d_in, d_out) = (inner.hilbert_distance(&x, &y)?, mid.hilbert_distance(&x, &y)?);
        if d_in < (c_im - SLACK) * d_out {
            return fail("distance expansion");
        }
        let v = y.clone() - x.clone();
        if inner.hilbert_norm(&x, &v)? < (c_im - SLACK) * mid.hilbert_norm(&x, &v)? {
            return fail("norm expansion");
        }
        let c_io = distortion_estimate(&inner, &outer, cfg)?;
        worst_comp = worst_comp.min(c_io - c_im * c_mo);
        if c_io < c_im * c_mo - SLACK {
            return fail("composition inequality");
        }
    }
    let pass = worst_inv_d <= 1e-9 && worst_inv_c <= SLACK;
    outcome(
        pass,
        format!(
            "{CONFIGS} configurations: invariance {worst_inv_d:.1e} (distance), {worst_inv_c:.1e} (distortion); min C31 - C32 C21 = {worst_comp:.1e}"
        ),
    )
}

fn special_limit() -> Result<Outcome> {
    let p = RepresentationParams::new(BoxModuli::<MpFloat>::special(), Lambda::zero());
    let mut r = rng(10);
    let (mut n, mut skipped) = (0, 0);
    let (mut worst_pt, mut worst_dual): (f64, f64) = (0.0, 0.0);
    while n < 100 {
        let w = sampling::periodic_word(&mut r, 5);
        // Words shadowing the cusps are parabolic here and have no limit point.
        let s = match limit_point(&p, &w, 1e-12, 200_000) {
            Err(Error::NonLoxodromic) => {
                skipped += 1;
                continue;
            }
            other => other?,
        };
        let norm = |v: &[f64; 3]| Vec3(*v).norm();
        worst_pt = worst_pt.max(s.point[0].abs() / norm(&s.point));
        worst_dual = worst_dual.max(s.dual[0].abs() / norm(&s.dual));
        n += 1;
    }
    outcome(
        worst_pt <= 1e-9 && worst_dual <= 1e-9,
        format!("100 limit points, |x| <= {worst_pt:.1e}, dual through [1:0:0] to {worst_dual:.1e}; {skipped} parabolic words skipped"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("exact relation suite", relations),
        ("matrix ground truth", ground_truth),
        ("Schwartz equivariance", equivariance),
        ("non-Anosov boundary", non_anosov_boundary),
        ("Anosov interior diagnostics", anosov_interior),
        ("extension curve", extension_curve),
        ("rotation criterion", rotation_criterion_check),
        ("variety Jacobians", jacobians),
        ("Hilbert metric suite", hilbert_suite),
        ("special-box limit geometry", special_limit),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = run();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match res {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("[{}] {:>2}. {name}: {detail} ({secs:.1} s)", if pass { "PASS" } else { "FAIL" }, k + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
