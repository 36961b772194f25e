use std::path::PathBuf;

use pappus::anosov::{constant_c, limit_point, loxodromy_scan, nesting_check, projective_gap, std_chart, DistortionConfig};
use pappus::linalg::eigen_real;
use pappus::marked_box::{containment_check, relation_suite, RELATION_NAMES};
use pappus::representation::{non_anosov_witness, solve_delta_h};
use pappus::variety::{jacobian_check_phi, jacobian_check_psi, psi_residual};
use pappus::{sampling, BoxModuli, Error, Lambda, Mat3, MpFloat, OvermarkedBox, Rational, RealScalar, RepresentationParams, Scalar};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::json;

use crate::report::Report;
use crate::setup::{mp_number, Model};
use crate::svg::{self, Quad};
use crate::CliError;

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn relations(trials: usize, lambdas: usize, mutate: bool, seed: u64) -> Result<Report, CliError> {
    let mut rep = Report::new("relations", json!({ "trials": trials, "lambdas": lambdas, "mutate": mutate, "seed": seed }));
    if trials == 0 {
        rep.warn("no trials requested; the relation checks pass vacuously");
    }
    let mut r = rng(seed);
    let mut failures = [0usize; 6];
    let mut cases = Vec::new();
    let mut pairs = 0;
    for t in 0..trials {
        let b = sampling::convex_box(&mut r);
        let mut ls = vec![Lambda::zero()];
        ls.extend((0..lambdas).map(|_| sampling::rational_lambda(&mut r)));
        for l in &ls {
            pairs += 1;
            let res = relation_suite(&b, l, mutate)?;
            for (k, ok) in res.iter().enumerate() {
                if !ok {
                    failures[k] += 1;
                    if cases.len() < 20 {
                        cases.push(json!({ "trial": t, "u": l.u.to_string(), "v": l.v.to_string(), "relation": RELATION_NAMES[k] }));
                    }
                }
            }
        }
    }
    for (k, name) in RELATION_NAMES.iter().enumerate() {
        rep.check(name, failures[k] == 0, format!("{} of {pairs} box/lambda pairs fail", failures[k]));
    }
    rep.result = json!({ "pairs": pairs, "failures": cases });
    Ok(rep)
}

/// All words in the deformed `tau1, tau2` up to `depth`, in breadth-first order.
fn tau_orbit(base: &OvermarkedBox<MpFloat>, l: &Lambda<MpFloat>, depth: usize) -> Result<Vec<(usize, OvermarkedBox<MpFloat>)>, Error> {
    let mut out = vec![(0, base.clone())];
    let mut level = vec![base.clone()];
    for d in 1..=depth {
        let mut next = Vec::with_capacity(2 * level.len());
        for b in &level {
            next.push(b.tau1_lambda(l)?);
            next.push(b.tau2_lambda(l)?);
        }
        out.extend(next.iter().cloned().map(|b| (d, b)));
        level = next;
    }
    Ok(out)
}

pub fn iterate(model: &Model, depth: usize, out: &PathBuf) -> Result<Report, CliError> {
    model.require_convex()?;
    let mut rep = Report::new("iterate", json!({ "model": model.to_json(), "depth": depth, "out": out }));
    let p = model.params_mp();
    let base = p.base_box()?;
    let contained = containment_check(&base, &p.lambda)?;
    let mut notes = Vec::new();
    if !contained {
        let msg = "deformation outside the region: deformed boxes are not contained in the base box".to_string();
        rep.warn(msg.clone());
        notes.push(msg);
    }
    let theta = base.theta_basis()?;
    let boxes = tau_orbit(&base, &p.lambda, depth)?;
    let mut quads = Vec::with_capacity(boxes.len());
    for (d, b) in &boxes {
        let mut corners = [(0.0, 0.0); 4];
        for (k, c) in corners.iter_mut().enumerate() {
            let x = theta.mul_vec(&b.pt(k).0).to_f64();
            *c = std_chart(&x).ok_or(Error::InternalInconsistency("corner on the chart's line at infinity"))?;
        }
        quads.push(Quad { depth: *d, corners });
    }
    std::fs::write(out, svg::render(&quads, &notes))?;
    let expected = (1usize << (depth + 1)) - 1;
    rep.check("quadrilaterals", quads.len() == expected, format!("{} rendered, {expected} tau-words", quads.len()));
    rep.result = json!({ "quadrilaterals": quads.len(), "contained": contained, "svg": out });
    Ok(rep)
}

fn witness_ok(m: &BoxModuli<Rational>) -> Result<bool, Error> {
    let (pw, qw) = non_anosov_witness(m)?;
    let jordan = Mat3::from_i64([[-1, 1, 0], [0, -1, 0], [0, 0, 1]]);
    Ok((&(&qw * &pw) * &qw.inverse()?).proj_eq(&jordan, 0.0))
}

pub fn certify(model: &Model, depth: usize, tol: f64) -> Result<Report, CliError> {
    model.require_convex()?;
    let mut rep = Report::new("certify", json!({ "model": model.to_json(), "depth": depth, "tol": tol }));
    let pm = model.params_mp();
    let pf = model.params_f64();
    let l = &pm.lambda;
    let (f_plus, f_minus) = (l.region_f().to_f64(), l.delta_flipped().region_f().to_f64());
    let interior = l.in_region_interior();
    rep.check("region", interior, format!("f(eps, delta) = {f_plus:.6e}, f(eps, -delta) = {f_minus:.6e}"));

    let nest = nesting_check(&pm, true)?;
    rep.check(
        "nesting",
        nest.all(),
        format!("closures: tau1 inside {}, tau2 inside {}, i disjoint {}", nest.tau1_inside, nest.tau2_inside, nest.i_disjoint),
    );

    let c = match constant_c(&pf, DistortionConfig::default()) {
        Ok(c) => Some(c),
        Err(Error::NotNested) => None,
        Err(e) => return Err(e.into()),
    };
    match c {
        Some(c) => rep.check("distortion", c > 1.0, format!("C = {c:.6}")),
        None => rep.check("distortion", false, "crossing boxes are not nested"),
    }

    let scan = loxodromy_scan(&pm, depth)?;
    let lox = scan.all_loxodromic() && scan.min_gap > 1.0 + tol;
    let mut detail = format!("{} words, min gap {:.6} at {}", scan.words_checked, scan.min_gap, scan.min_gap_word);
    if !scan.non_loxodromic.is_empty() {
        detail += &format!("; non-loxodromic: {}", scan.non_loxodromic.join(", "));
    }
    if !scan.complex_spectrum.is_empty() {
        detail += &format!("; complex spectrum: {}", scan.complex_spectrum.join(", "));
    }
    rep.check("loxodromy", lox, detail);

    let witness = if !rep.pass && model.lambda_is_zero() { Some(witness_ok(&model.moduli)?) } else { None };
    let status = match witness {
        _ if rep.pass => "Anosov: all diagnostics pass",
        Some(true) => "boundary: Schwartz point, non-Anosov witness present",
        Some(false) => "boundary: Schwartz point, witness check failed",
        None if l.in_region() => "boundary of the deformation region",
        None => "outside the deformation region",
    };
    rep.result = json!({
        "status": status,
        "witness": witness,
        "constant_c": c,
        "loxodromy": scan,
        "nesting": nest,
    });
    Ok(rep)
}

fn mat_rows(m: &Mat3<MpFloat>) -> Vec<Vec<f64>> {
    m.to_f64().0.iter().map(|r| r.to_vec()).collect()
}

pub fn curve(model: &Model, eps: &str, tol: f64) -> Result<Report, CliError> {
    model.require_convex()?;
    let e = mp_number("eps", eps)?;
    let mut rep = Report::new("curve", json!({ "zt": model.moduli.zeta_t.to_string(), "zb": model.moduli.zeta_b.to_string(), "eps": e.to_f64(), "tol": tol }));
    let m: BoxModuli<MpFloat> = model.moduli.convert();
    let d = solve_delta_h(&m, &e)?;
    let p = RepresentationParams::new(m, Lambda::from_eps_delta(e, d.clone()));
    let h = p.curve_h().to_f64().abs();
    rep.check("converged", h <= tol, format!("|h| = {h:.3e}"));
    let (det, n2) = p.obstruction()?;
    let scaled = det.to_f64().abs() / n2.to_f64().powf(1.5);
    rep.check("obstruction", scaled <= 1e-10, format!("scaled det(Id - A B) = {scaled:.3e}"));
    let tw = p.extension_intertwiner()?;
    rep.check("symmetric", tw.s.is_symmetric(), "S = S^T");
    rep.check("invertible", tw.invertible, format!("solution space dimension {}", tw.nullity));
    rep.check("intertwines", tw.residual <= 1e-10, format!("residual {:.3e}", tw.residual));
    rep.result = json!({
        "delta": d.to_f64(),
        "h": h,
        "obstruction": scaled,
        "s": mat_rows(&tw.s),
        "nullity": tw.nullity,
    });
    Ok(rep)
}

#[derive(Serialize)]
struct LimitRow {
    word: String,
    x0: f64,
    x1: f64,
    x2: f64,
    l0: f64,
    l1: f64,
    l2: f64,
    chart_u: Option<f64>,
    chart_w: Option<f64>,
    flag_residual: f64,
    eigenline_gap: f64,
    depth: usize,
}

pub fn limit(model: &Model, count: usize, depth: usize, tol: f64, seed: u64, out: Option<&PathBuf>) -> Result<Report, CliError> {
    model.require_convex()?;
    let mut rep = Report::new(
        "limit",
        json!({ "model": model.to_json(), "count": count, "depth": depth, "tol": tol, "seed": seed, "out": out }),
    );
    let p = model.params_mp();
    let mut r = rng(seed);
    let mut rows = Vec::new();
    let (mut skipped, mut unconverged) = (Vec::new(), Vec::new());
    for _ in 0..count {
        let w = sampling::periodic_word(&mut r, 5);
        match limit_point(&p, &w, tol, depth) {
            Ok(s) => {
                let oracle = eigen_real(&p.evaluate(&w)?)?.attracting().to_f64();
                let chart = s.chart();
                rows.push(LimitRow {
                    word: s.word,
                    x0: s.point[0],
                    x1: s.point[1],
                    x2: s.point[2],
                    l0: s.dual[0],
                    l1: s.dual[1],
                    l2: s.dual[2],
                    chart_u: chart.map(|c| c.0),
                    chart_w: chart.map(|c| c.1),
                    flag_residual: s.flag_residual,
                    eigenline_gap: projective_gap(&s.point, &oracle.0),
                    depth: s.depth,
                });
            }
            Err(Error::NonLoxodromic) => skipped.push(w.to_string()),
            Err(Error::NoConvergence(_)) => unconverged.push(w.to_string()),
            Err(e) => return Err(e.into()),
        }
    }
    if !skipped.is_empty() {
        rep.warn(format!("{} non-loxodromic words skipped", skipped.len()));
    }
    let gap = rows.iter().map(|x| x.eigenline_gap).fold(0.0, f64::max);
    let flag = rows.iter().map(|x| x.flag_residual).fold(0.0, f64::max);
    rep.check("converged", unconverged.is_empty(), format!("{} of {} words hit the depth limit", unconverged.len(), count));
    rep.check("eigenline", gap <= 1e-9, format!("max distance to the attracting eigenline {gap:.3e}"));
    rep.check("flag", flag <= 1e-9, format!("max flag residual {flag:.3e}"));
    if let Some(path) = out {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(e.into()))?;
        for row in &rows {
            w.serialize(row).map_err(|e| CliError::Io(e.into()))?;
        }
        w.flush()?;
    }
    rep.result = json!({
        "points": rows.len(),
        "skipped": skipped,
        "unconverged": unconverged,
        "max_eigenline_gap": gap,
        "max_flag_residual": flag,
    });
    Ok(rep)
}

/// `n` evenly spaced rationals strictly inside `(-1, 1)`.
fn grid_values(n: usize) -> Vec<Rational> {
    (0..n).map(|k| Rational::from_ratio(2 * (k as i64 + 1) - (n as i64 + 1), n as i64 + 1)).collect()
}

pub fn variety(model: &Model, grid: usize, tol: f64) -> Result<Report, CliError> {
    let mut rep = Report::new("variety", json!({ "model": model.to_json(), "grid": grid, "tol": tol }));
    let l = model.lambda::<MpFloat>();
    let (eps, delta) = (l.u.ln(), l.v.ln());
    let vals = grid_values(grid);
    let (mut worst_psi, mut worst_phi, mut worst_family) = (0.0f64, 0.0f64, 0.0f64);
    let mut points = Vec::new();
    for zt in &vals {
        for zb in &vals {
            let m = BoxModuli::new(MpFloat::from_rational(zt), MpFloat::from_rational(zb))?;
            let psi = jacobian_check_psi(&m, &eps, &delta)?;
            worst_psi = worst_psi.max(psi.relative_error);
            let phi = if m.is_special() { None } else { Some(jacobian_check_phi(&m)?) };
            if let Some(ph) = &phi {
                worst_phi = worst_phi.max(ph.relative_error);
            }
            let fam = psi_residual(&RepresentationParams::new(m, l.clone()))?;
            worst_family = worst_family.max(fam);
            points.push(json!({ "psi": psi, "phi": phi, "family_residual": fam }));
        }
    }
    let special = jacobian_check_phi(&BoxModuli::<MpFloat>::special());
    rep.check("psi_jacobian", worst_psi <= tol, format!("worst relative error {worst_psi:.3e} over {} points", points.len()));
    rep.check("phi_jacobian", worst_phi <= tol, format!("worst relative error {worst_phi:.3e}"));
    rep.check("family", worst_family <= 1e-9, format!("max |Psi| along the family {worst_family:.3e}"));
    rep.check("special_box", matches!(special, Err(Error::SpecialBox)), format!("{:?}", special.map(|r| r.closed_form)));
    rep.result = json!({ "points": points });
    Ok(rep)
}
