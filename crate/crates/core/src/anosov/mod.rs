//! Hilbert-metric diagnostics of the deformed representations: nesting of
//! labelled boxes, the contraction constant, limit points of periodic words,
//! crossing-counted norm doubling and eigenvalue-gap scans.

mod quad;

pub use quad::{chart_dir_to_std, chart_to_std, distortion_estimate, std_chart, ConvexQuad, DistortionConfig};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigen_real, Mat3, Vec3};
use crate::marked_box::{std_corners, Lambda, OvermarkedBox};
use crate::modular::{crossing_sequence, normal_forms, GroupWord, WLetter};
use crate::representation::{box_word, RepresentationParams};
use crate::scalar::{RealScalar, Scalar};

/// Label box of the edge `w e0`: the reversed word applied to the base box.
pub fn crossing_box<S: Scalar>(base: &OvermarkedBox<S>, w: &GroupWord, l: &Lambda<S>) -> Result<OvermarkedBox<S>> {
    box_word(base, &w.reversed().normalize(), l)
}

/// The transformation `g` with `box = g * reference` as marked boxes, where
/// the two boxes share moduli. The frame is corrected by the mirror
/// `diag(-1, 1, 1)` when the box is the `j`-image of `g * reference`.
pub fn box_transformation<S: Scalar>(reference: &OvermarkedBox<S>, b: &OvermarkedBox<S>) -> Result<Mat3<S>> {
    let f = &b.frame()? * &reference.theta_basis()?;
    let t_ref = &reference.pt(crate::marked_box::T).0;
    let t_img = f.mul_vec(t_ref);
    if t_img.proportional(&b.pt(crate::marked_box::T).0, 1e-9) {
        return Ok(f);
    }
    let mirror = Mat3::diag(-S::one(), S::one(), S::one());
    let g = &(&b.frame()? * &mirror) * &reference.theta_basis()?;
    if g.mul_vec(t_ref).proportional(&b.pt(crate::marked_box::T).0, 1e-9) {
        Ok(g)
    } else {
        Err(Error::InternalInconsistency("box is not a projective image of the reference"))
    }
}

/// Matrices `M_w` with `label(w e0) = M_w * label(e0)`, one per crossing letter,
/// in the order of [`WLetter::ALL`]. By equivariance these are the images of
/// the letters; building the label boxes instead loses accuracy on thin boxes.
pub fn crossing_matrices<S: Scalar>(params: &RepresentationParams<S>) -> Result<[Mat3<S>; 4]> {
    let m = WLetter::ALL.map(|w| params.evaluate(&w.word()));
    let [a, b, c, d] = m;
    Ok([a?, b?, c?, d?])
}

/// Nesting of the elementary images of the base box.
#[derive(Clone, Debug, Serialize)]
pub struct NestingReport {
    pub tau1_inside: bool,
    pub tau2_inside: bool,
    pub i_disjoint: bool,
    /// Closures instead of interiors.
    pub strict: bool,
}

impl NestingReport {
    pub fn all(&self) -> bool {
        self.tau1_inside && self.tau2_inside && self.i_disjoint
    }
}

pub fn nesting_check<S: Scalar>(params: &RepresentationParams<S>, strict: bool) -> Result<NestingReport> {
    let base = params.base_box()?;
    let l = &params.lambda;
    let outer = base.interior()?;
    let q = |b: OvermarkedBox<S>| b.interior_unchecked();
    Ok(NestingReport {
        tau1_inside: outer.contains_quad(&q(base.tau1_lambda(l)?)?, strict),
        tau2_inside: outer.contains_quad(&q(base.tau2_lambda(l)?)?, strict),
        i_disjoint: outer.disjoint(&q(base.i_lambda(l)?)?, strict),
        strict,
    })
}

/// Minimal sampled distortion of the base box interior over the four crossing letters.
pub fn constant_c(params: &RepresentationParams<f64>, cfg: DistortionConfig) -> Result<f64> {
    if !params.lambda.in_region() {
        return Err(Error::NotNested);
    }
    let base = params.base_box()?;
    let outer = base.interior()?;
    let mut best = f64::INFINITY;
    for w in WLetter::ALL {
        let inner = crossing_box(&base, &w.word(), &params.lambda)?.interior_unchecked()?;
        best = best.min(distortion_estimate(&inner, &outer, cfg)?);
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitSample {
    pub word: String,
    /// Limit point, homogeneous Theta-basis coordinates.
    pub point: [f64; 3],
    /// Line through the limit point, homogeneous coordinates.
    pub dual: [f64; 3],
    pub flag_residual: f64,
    pub diameter_at_stop: f64,
    pub depth: usize,
}

impl LimitSample {
    /// Chart coordinates `(u, w)` of the point.
    pub fn chart(&self) -> Option<(f64, f64)> {
        std_chart(&Vec3(self.point))
    }
}

fn normalize(v: Vec3<f64>) -> Vec3<f64> {
    let n = v.norm();
    v.scale(&(1.0 / n))
}

fn normalize_mat(m: Mat3<f64>) -> Mat3<f64> {
    let s = m.max_abs();
    m.scale(&(1.0 / s))
}

fn square_diameter(h: &Mat3<f64>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = std_corners::<f64>().iter().map(|c| std_chart(&h.mul_vec(c))).collect::<Option<_>>()?;
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            d = d.max((pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1));
        }
    }
    Some(d)
}

/// Limit point of a periodic word in the index-2 subgroup: the nested
/// intersection of the labelled box interiors along its crossing sequence.
/// The point is the centroid of the last quadrilateral once its diameter in
/// the first label's chart is below `tol`; the dual line is the limit of the
/// bottom lines, propagated through inverse transposes.
pub fn limit_point<S: RealScalar>(
    params: &RepresentationParams<S>,
    target: &GroupWord,
    tol: f64,
    max_depth: usize,
) -> Result<LimitSample> {
    let spec = eigen_real(&params.evaluate(target)?).map_err(|_| Error::NonLoxodromic)?;
    if !spec.is_loxodromic() {
        return Err(Error::NonLoxodromic);
    }
    let cs = crossing_sequence(target, 0)?;
    let pf: RepresentationParams<f64> = RepresentationParams::new(
        crate::marked_box::BoxModuli::new(params.moduli.zeta_t.to_f64(), params.moduli.zeta_b.to_f64())?,
        Lambda::from_exp(params.lambda.u.to_f64(), params.lambda.v.to_f64())?,
    );
    // The conjugator lies in the subgroup, so equivariance gives its matrix directly.
    let g0 = params.evaluate(&cs.base)?.to_f64();
    limit_point_f64(&pf, &normalize_mat(g0), &cs.period, target, tol, max_depth)
}

fn limit_point_f64(
    params: &RepresentationParams<f64>,
    g0: &Mat3<f64>,
    period: &[WLetter],
    target: &GroupWord,
    tol: f64,
    max_depth: usize,
) -> Result<LimitSample> {
    let base = params.base_box()?;
    let frame0 = base.frame()?;
    let fi = frame0.inverse()?;
    // Crossing matrices in the base box's own coordinates, and their inverse transposes.
    let mats: Vec<Mat3<f64>> = crossing_matrices(params)?.iter().map(|m| &(&fi * m) * &frame0).collect();
    let mats_it: Vec<Mat3<f64>> = mats.iter().map(|m| m.inverse_transpose()).collect::<Result<_>>()?;
    let mut h = Mat3::<f64>::identity();
    let mut k = Mat3::<f64>::identity();
    let mut depth = 0;
    let mut diam = square_diameter(&h).unwrap_or(f64::INFINITY);
    while diam >= tol {
        if depth >= max_depth {
            return Err(Error::NoConvergence(depth));
        }
        let w = period[depth % period.len()].index();
        h = normalize_mat(&h * &mats[w]);
        k = normalize_mat(&k * &mats_it[w]);
        depth += 1;
        diam = square_diameter(&h).unwrap_or(f64::INFINITY);
    }
    let corners = std_corners::<f64>();
    let mut c = (0.0, 0.0);
    for v in &corners {
        let (u, w) = std_chart(&h.mul_vec(v)).ok_or(Error::InternalInconsistency("limit left the chart"))?;
        c.0 += u / 4.0;
        c.1 += w / 4.0;
    }
    let g = g0 * &frame0;
    let point = normalize(g.mul_vec(&chart_to_std(&c.0, &c.1)));
    // Bottom line of the standard square, through r and s.
    let b_std = corners[2].cross(&corners[3]);
    let dual = normalize(g.inverse_transpose()?.mul_vec(&k.mul_vec(&b_std)));
    let flag_residual = point.dot(&dual).abs();
    Ok(LimitSample {
        word: target.to_string(),
        point: point.0,
        dual: dual.0,
        flag_residual,
        diameter_at_stop: diam,
        depth,
    })
}

/// Angle between two projective points, `|sin|` of the angle of representatives.
pub fn projective_gap(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let (a, b) = (Vec3(*a), Vec3(*b));
    a.cross(&b).norm() / (a.norm() * b.norm())
}

#[derive(Clone, Debug, Serialize)]
pub struct DoublingReport {
    /// Smallest `N` with norm growth at least 2 over every window of `2N` crossings.
    pub n: Option<usize>,
    /// Worst growth over windows of `2N` crossings for the reported `N`, or for `max_n`.
    pub worst_growth: f64,
    /// Smallest `N` with `C^N > 2`, when the sampled constant exceeds one.
    pub n_from_c: Option<usize>,
    pub constant_c: f64,
    pub sequences: usize,
}

/// Random crossing sequences, uniformly over the four letters.
pub fn random_sequences<R: Rng>(rng: &mut R, count: usize, len: usize) -> Vec<Vec<WLetter>> {
    (0..count).map(|_| (0..len).map(|_| WLetter::ALL[rng.gen_range(0..4)]).collect()).collect()
}

/// Growth of the Hilbert norm at the limit point over windows of crossings.
///
/// For a sequence `w_1 .. w_L` the limit point is pulled back into the chart
/// of each label, `x_n = M_{w_{n+1}} x_{n+1}` starting from the center at
/// depth `L`. The growth over crossings `n+1 .. n+k` is the least ratio of the
/// norms of the deeper and the current box at `x_n` over a fan of directions.
pub fn doubling_check(params: &RepresentationParams<f64>, sequences: &[Vec<WLetter>], max_n: usize) -> Result<DoublingReport> {
    if !params.lambda.in_region() {
        return Err(Error::OutsideRegion);
    }
    let base = params.base_box()?;
    let frame0 = base.frame()?;
    let fi = frame0.inverse()?;
    let mats: Vec<Mat3<f64>> = crossing_matrices(params)?.iter().map(|m| &(&fi * m) * &frame0).collect();
    let constant_c = constant_c(params, DistortionConfig { resolution: 16, directions: 16, refine: 2 }).unwrap_or(1.0);
    let n_from_c = (constant_c > 1.0).then(|| (2f64.ln() / constant_c.ln()).floor() as usize + 1);
    let growth = |seq: &[WLetter], k: usize| -> f64 {
        let l = seq.len();
        let mut pts = vec![chart_to_std(&0.0, &0.0); l + 1];
        for n in (0..l).rev() {
            pts[n] = normalize(mats[seq[n].index()].mul_vec(&pts[n + 1]));
        }
        let mut worst = f64::INFINITY;
        for n in 0..l.saturating_sub(k) {
            let mut h = Mat3::identity();
            for w in &seq[n..n + k] {
                h = normalize_mat(&h * &mats[w.index()]);
            }
            let Ok(inner) = ConvexQuad::from_frame(h) else { continue };
            let x = &pts[n];
            let mut g = f64::INFINITY;
            for d in 0..32 {
                let th = std::f64::consts::PI * d as f64 / 32.0;
                let v = chart_dir_to_std(&th.cos(), &th.sin());
                let (Some(p), Some(q)) = (chart_norm(&Mat3::identity(), x, &v), chart_norm_q(&inner, x, &v)) else {
                    continue;
                };
                g = g.min(q / p);
            }
            worst = worst.min(g);
        }
        worst
    };
    let mut last = 0.0;
    for n in 1..=max_n {
        let worst = sequences.iter().map(|s| growth(s, 2 * n)).fold(f64::INFINITY, f64::min);
        last = worst;
        if worst >= 2.0 {
            return Ok(DoublingReport { n: Some(n), worst_growth: worst, n_from_c, constant_c, sequences: sequences.len() });
        }
    }
    Ok(DoublingReport { n: None, worst_growth: last, n_from_c, constant_c, sequences: sequences.len() })
}

fn chart_norm(frame: &Mat3<f64>, x: &Vec3<f64>, v: &Vec3<f64>) -> Option<f64> {
    ConvexQuad::from_frame(frame.clone()).ok()?.hilbert_norm(x, v).ok().filter(|n| n.is_finite() && *n > 0.0)
}

fn chart_norm_q(q: &ConvexQuad<f64>, x: &Vec3<f64>, v: &Vec3<f64>) -> Option<f64> {
    q.hilbert_norm(x, v).ok().filter(|n| n.is_finite() && *n > 0.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct LoxodromyReport {
    pub words_checked: usize,
    pub min_gap: f64,
    pub min_gap_word: String,
    pub non_loxodromic: Vec<String>,
    pub complex_spectrum: Vec<String>,
}

impl LoxodromyReport {
    pub fn all_loxodromic(&self) -> bool {
        self.non_loxodromic.is_empty() && self.complex_spectrum.is_empty()
    }
}

/// Eigenvalue-moduli gaps of every infinite-order normal-form word of the
/// index-2 subgroup up to the given length.
pub fn loxodromy_scan<S: RealScalar>(params: &RepresentationParams<S>, max_len: usize) -> Result<LoxodromyReport> {
    let m = params.matrices()?;
    let mut rep = LoxodromyReport {
        words_checked: 0,
        min_gap: f64::INFINITY,
        min_gap_word: String::new(),
        non_loxodromic: Vec::new(),
        complex_spectrum: Vec::new(),
    };
    for w in normal_forms(max_len) {
        if !w.in_subgroup_o()? || w.is_finite_order() {
            continue;
        }
        rep.words_checked += 1;
        let img = crate::representation::evaluate_with(&m.a, &m.b, &w)?;
        match eigen_real(&img) {
            Ok(sp) => {
                let g = sp.min_gap();
                if g < rep.min_gap {
                    rep.min_gap = g;
                    rep.min_gap_word = w.to_string();
                }
                if !sp.is_loxodromic() {
                    rep.non_loxodromic.push(w.to_string());
                }
            }
            Err(_) => rep.complex_spectrum.push(w.to_string()),
        }
    }
    Ok(rep)
}

/// Largest `delta` with `lambda = (eps, delta)` in the region, for `eps <= 0`.
pub fn region_delta_max(eps: f64) -> f64 {
    (eps.cosh() / (1.0 + eps.sinh())).ln()
}
