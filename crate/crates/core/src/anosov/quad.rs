//! Projective quadrilaterals and their Hilbert metric.
//!
//! A [`ConvexQuad`] is stored as the projective map sending the standard
//! square (corners `(-1,1,0), (1,1,0), (1,0,1), (-1,0,1)`) onto it. In the
//! quad's own chart `u = X0/(X1+X2)`, `w = (X1-X2)/(X1+X2)` the domain is the
//! open square `|u|, |w| < 1`, so every metric computation happens there.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::marked_box::std_corners;
use crate::projective::Point;
use crate::scalar::{RealScalar, Scalar};

#[derive(Clone, Debug)]
pub struct ConvexQuad<S> {
    frame: Mat3<S>,
    inv: Mat3<S>,
}

/// Absolute tolerance on normalized cone coordinates in float mode.
const CONE_TOL: f64 = 1e-12;

/// Chart point `(u, w)` as homogeneous standard coordinates.
pub fn chart_to_std<S: Scalar>(u: &S, w: &S) -> Vec3<S> {
    let h = S::from_ratio(1, 2);
    Vec3::new(u.clone(), h.clone() * (S::one() + w.clone()), h * (S::one() - w.clone()))
}

/// Chart direction `(a, b)` as a homogeneous tangent representative.
pub fn chart_dir_to_std<S: Scalar>(a: &S, b: &S) -> Vec3<S> {
    let h = S::from_ratio(1, 2);
    Vec3::new(a.clone(), h.clone() * b.clone(), -(h * b.clone()))
}

/// `(u, w)` of a homogeneous standard vector, if off the line `X1 + X2 = 0`.
pub fn std_chart<S: Scalar>(x: &Vec3<S>) -> Option<(S, S)> {
    let s = x[1].clone() + x[2].clone();
    if s.is_zero() {
        return None;
    }
    Some((x[0].clone() / s.clone(), (x[1].clone() - x[2].clone()) / s))
}

/// Sign `sigma` making `x` lie in `sigma` times the closed (or open) cone over
/// the standard square, if any.
fn cone_sign<S: Scalar>(x: &Vec3<S>, strict: bool) -> Option<i32> {
    let tol = if S::EXACT { S::zero() } else { x.max_abs() * S::from_f64(CONE_TOL) };
    for sg in [1, -1] {
        let y = if sg == 1 { x.clone() } else { -x.clone() };
        let ok = if strict {
            y[1] > tol && y[2] > tol && y[1].clone() + y[2].clone() - y[0].abs() > tol
        } else {
            y[1] >= -tol.clone() && y[2] >= -tol.clone() && y[1].clone() + y[2].clone() - y[0].abs() >= -tol.clone()
        };
        if ok && !x.is_zero() {
            return Some(sg);
        }
    }
    None
}

fn f_side<S: Scalar>(f: &Mat3<S>, c: &Vec3<S>) -> i32 {
    f.mul_vec(c)[2].signum()
}

impl<S: Scalar> ConvexQuad<S> {
    pub fn from_frame(frame: Mat3<S>) -> Result<Self> {
        let inv = frame.inverse().map_err(|_| Error::DegenerateBox("singular quadrilateral frame"))?;
        Ok(ConvexQuad { frame, inv })
    }

    /// Quadrilateral with the given affine vertices in cyclic order.
    pub fn from_affine(corners: [(S, S); 4]) -> Result<Self> {
        let v: Vec<Vec3<S>> = corners.iter().map(|(x, y)| Vec3::new(x.clone(), y.clone(), S::one())).collect();
        let std = std_corners::<S>();
        let f = crate::marked_box::frame_map([&std[0], &std[1], &std[2], &std[3]], [&v[0], &v[1], &v[2], &v[3]])
            .map_err(|_| Error::NotConvex)?;
        let q = Self::from_frame(f)?;
        // The image of the square is the affine convex hull only when the frame
        // sends every standard corner to the same side of the line at infinity.
        let sides: Vec<i32> = std.iter().map(|c| f_side(&q.frame, c)).collect();
        if sides.iter().any(|&s| s == 0 || s != sides[0]) {
            return Err(Error::NotConvex);
        }
        let w = &v;
        let mut orient = 0;
        for k in 0..4 {
            let (a, b, c) = (&w[k], &w[(k + 1) % 4], &w[(k + 2) % 4]);
            let cr = (b[0].clone() - a[0].clone()) * (c[1].clone() - b[1].clone())
                - (b[1].clone() - a[1].clone()) * (c[0].clone() - b[0].clone());
            let s = cr.signum();
            if s == 0 || (orient != 0 && s != orient) {
                return Err(Error::NotConvex);
            }
            orient = s;
        }
        Ok(q)
    }

    pub fn frame(&self) -> &Mat3<S> {
        &self.frame
    }

    pub fn inverse_frame(&self) -> &Mat3<S> {
        &self.inv
    }

    pub fn vertices(&self) -> [Point<S>; 4] {
        std_corners::<S>().map(|c| Point(self.frame.mul_vec(&c)))
    }

    /// Image under a projective transformation.
    pub fn transformed(&self, g: &Mat3<S>) -> Result<Self> {
        Self::from_frame(g * &self.frame)
    }

    /// Coordinates in the quad's own square chart.
    pub fn chart(&self, x: &Vec3<S>) -> Option<(S, S)> {
        std_chart(&self.inv.mul_vec(x))
    }

    /// Membership of a point in the open (`strict`) or closed quadrilateral.
    pub fn contains(&self, x: &Vec3<S>, strict: bool) -> bool {
        cone_sign(&self.inv.mul_vec(x), strict).is_some()
    }

    /// `other ⊆ closure(self)`, or with `strict`, `closure(other) ⊂ self`.
    pub fn contains_quad(&self, other: &Self, strict: bool) -> bool {
        let m = &self.inv * &other.frame;
        let mut sign = None;
        for c in std_corners::<S>() {
            match (cone_sign(&m.mul_vec(&c), strict), sign) {
                (None, _) => return false,
                (Some(s), None) => sign = Some(s),
                (Some(s), Some(t)) if s != t => return false,
                _ => {}
            }
        }
        true
    }

    fn rays(&self) -> Vec<Vec3<S>> {
        std_corners::<S>().iter().map(|c| self.frame.mul_vec(c)).collect()
    }

    /// Disjoint interiors, or with `strict`, disjoint closures.
    pub fn disjoint(&self, other: &Self, strict: bool) -> bool {
        let a = self.rays();
        let b = other.rays();
        [1i64, -1].iter().all(|&sg| {
            let bs: Vec<Vec3<S>> = b.iter().map(|x| x.scale(&S::from_i64(sg))).collect();
            separated(&a, &bs, strict)
        })
    }
}

/// Whether some linear functional is `>= 0` on the cone spanned by `a` and
/// `<= 0` on the cone spanned by `b` (strictly off the origin with `strict`).
/// Extreme rays of the feasible set are orthogonal to two of the generators,
/// so cross products of generator pairs suffice; their sum is interior.
fn separated<S: Scalar>(a: &[Vec3<S>], b: &[Vec3<S>], strict: bool) -> bool {
    let gens: Vec<Vec3<S>> = a.iter().cloned().chain(b.iter().map(|x| -x.clone())).collect();
    let norm = |v: &Vec3<S>| if S::EXACT { v.clone() } else { v.normalize_max() };
    let gens: Vec<Vec3<S>> = gens.iter().map(norm).collect();
    let tol = if S::EXACT { S::zero() } else { S::from_f64(1e-12) };
    let valid = |l: &Vec3<S>| gens.iter().all(|g| l.dot(g) >= -tol.clone());
    let mut sum = Vec3::zero();
    let mut any = false;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let c = gens[i].cross(&gens[j]);
            if c.is_zero() || (!S::EXACT && c.max_abs() < S::from_f64(1e-14)) {
                continue;
            }
            let c = norm(&c);
            for cand in [c.clone(), -c] {
                if valid(&cand) {
                    any = true;
                    sum = sum + cand;
                }
            }
        }
    }
    if !strict {
        return any;
    }
    any && gens.iter().all(|g| sum.dot(g) > tol.clone())
}

/// Exit times of the ray `p + t d` from the closed square `[-1, 1]^2`, forward and backward.
fn exit_times<S: Scalar>(p: &(S, S), d: &(S, S)) -> (Option<S>, Option<S>) {
    let mut fwd: Option<S> = None;
    let mut bwd: Option<S> = None;
    for (x, dx) in [(&p.0, &d.0), (&p.1, &d.1)] {
        if dx.is_zero() {
            continue;
        }
        let t1 = (S::one() - x.clone()) / dx.clone();
        let t2 = (-S::one() - x.clone()) / dx.clone();
        let (tp, tm) = if dx.signum() > 0 { (t1, -t2) } else { (t2, -t1) };
        fwd = Some(match fwd {
            Some(f) if f < tp => f,
            _ => tp,
        });
        bwd = Some(match bwd {
            Some(b) if b < tm => b,
            _ => tm,
        });
    }
    (fwd, bwd)
}

fn in_open_square<S: Scalar>(p: &(S, S)) -> bool {
    let o = S::one();
    p.0.abs() < o && p.1.abs() < o
}

/// Chart point and chart velocity of `d/dt [xs + t vs]` in standard coordinates.
fn std_tangent<S: Scalar>(xs: &Vec3<S>, vs: &Vec3<S>) -> Result<((S, S), (S, S))> {
    let s = xs[1].clone() + xs[2].clone();
    if s.is_zero() {
        return Err(Error::OutsideDomain);
    }
    let ds = vs[1].clone() + vs[2].clone();
    let s2 = s.square();
    let p = (xs[0].clone() / s.clone(), (xs[1].clone() - xs[2].clone()) / s.clone());
    let d = (
        (vs[0].clone() * s.clone() - xs[0].clone() * ds.clone()) / s2.clone(),
        ((vs[1].clone() - vs[2].clone()) * s - (xs[1].clone() - xs[2].clone()) * ds) / s2,
    );
    Ok((p, d))
}

impl<S: Scalar> ConvexQuad<S> {
    /// Chart point and chart velocity of `d/dt [x + t v]` at `t = 0`.
    fn chart_tangent(&self, x: &Vec3<S>, v: &Vec3<S>) -> Result<((S, S), (S, S))> {
        std_tangent(&self.inv.mul_vec(x), &self.inv.mul_vec(v))
    }

    /// Finsler norm of the tangent vector `d/dt [x + t v]`, computed in the
    /// quad's square chart as `(1/t+ + 1/t-) / 2` with `t+-` the exit times.
    pub fn hilbert_norm(&self, x: &Vec3<S>, v: &Vec3<S>) -> Result<S> {
        let (p, d) = self.chart_tangent(x, v)?;
        Self::norm_in_chart(&p, &d)
    }

    /// Finsler norm at chart point `p` of the chart vector `d`.
    pub fn norm_in_chart(p: &(S, S), d: &(S, S)) -> Result<S> {
        if !in_open_square(p) {
            return Err(Error::OutsideDomain);
        }
        match exit_times(p, d) {
            (Some(f), Some(b)) => Ok((S::one() / f + S::one() / b) / S::from_i64(2)),
            _ => Ok(S::zero()),
        }
    }
}

impl<S: RealScalar> ConvexQuad<S> {
    /// Hilbert distance: half the log of the boundary cross-ratio.
    pub fn hilbert_distance(&self, x: &Vec3<S>, y: &Vec3<S>) -> Result<S> {
        let px = self.chart(x).ok_or(Error::OutsideDomain)?;
        let py = self.chart(y).ok_or(Error::OutsideDomain)?;
        if !self.contains(x, true) || !self.contains(y, true) || !in_open_square(&px) || !in_open_square(&py) {
            return Err(Error::OutsideDomain);
        }
        let d = (py.0.clone() - px.0.clone(), py.1.clone() - px.1.clone());
        if d.0.is_zero() && d.1.is_zero() {
            return Ok(S::zero());
        }
        let (tb, ta) = match exit_times(&px, &d) {
            (Some(f), Some(b)) => (f, -b),
            _ => return Ok(S::zero()),
        };
        let o = S::one();
        let cr = tb.clone() * (o.clone() - ta.clone()) / ((-ta) * (tb - o));
        Ok(cr.ln() / S::from_i64(2))
    }
}

/// Parameters of the sampled distortion estimate.
#[derive(Clone, Copy, Debug)]
pub struct DistortionConfig {
    /// Line offsets sampled per direction.
    pub resolution: usize,
    /// Line directions sampled over a half turn.
    pub directions: usize,
    /// Number of best sampled lines refined by compass search.
    pub refine: usize,
}

impl Default for DistortionConfig {
    fn default() -> Self {
        DistortionConfig { resolution: 32, directions: 32, refine: 4 }
    }
}

/// Directions sampled in each pencil of lines through a vertex.
const PENCIL_SAMPLES: usize = 32;

/// Edge functionals of the standard square's cone, positive on its interior.
const EDGES: [[f64; 3]; 4] = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, 1.0]];

/// Hilbert norm of `v` at `x` from the edge functionals of the domain, each
/// positive at `x`: half the spread of `-l(v) / l(x)`. This is the derivative
/// of the boundary cross-ratio in the parameter of `x + t v` and needs no chart.
fn norm_from_edges(edges: &[Vec3<f64>; 4], x: &Vec3<f64>, v: &Vec3<f64>) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for l in edges {
        let r = -l.dot(v) / l.dot(x);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (hi - lo) / 2.0
}

/// Parameter interval of the line `p + t d` inside the open square, if nonempty.
fn square_chord(p: (f64, f64), d: (f64, f64)) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (x, dx) in [(p.0, d.0), (p.1, d.1)] {
        if dx == 0.0 {
            if x.abs() >= 1.0 {
                return None;
            }
            continue;
        }
        let (a, b) = ((-1.0 - x) / dx, (1.0 - x) / dx);
        lo = lo.max(a.min(b));
        hi = hi.min(a.max(b));
    }
    (hi - lo > 1e-12).then_some((lo, hi))
}

/// Minimum of a unimodal function on `(lo, hi)` by golden-section search.
fn golden_min(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let (mut c1, mut c2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (f(c1), f(c2));
    for _ in 0..iters {
        if f1 < f2 {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - g * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + g * (b - a);
            f2 = f(c2);
        }
    }
    f1.min(f2)
}

/// Both quads in the inner quad's standard coordinates, where the inner one
/// is the square and lines through it are easy to enumerate.
struct LineProbe {
    inner: [Vec3<f64>; 4],
    outer: [Vec3<f64>; 4],
    /// Vertices of both quads.
    vertices: Vec<Vec3<f64>>,
}

impl LineProbe {
    fn new(inner: &ConvexQuad<f64>, outer: &ConvexQuad<f64>) -> Self {
        let m = outer.inverse_frame() * inner.frame();
        let center = chart_to_std(&0.0, &0.0);
        let outer_edges = EDGES.map(|e| {
            let l = m.transpose().mul_vec(&Vec3(e));
            if l.dot(&center) < 0.0 {
                -l
            } else {
                l
            }
        });
        let corners = std_corners::<f64>();
        let mi = inner.inverse_frame() * outer.frame();
        let mut vertices: Vec<Vec3<f64>> = corners.to_vec();
        vertices.extend(corners.iter().map(|c| mi.mul_vec(c)));
        LineProbe { inner: EDGES.map(Vec3), outer: outer_edges, vertices }
    }

    /// Minimal ratio over lines through `x`, sampled over `n` directions and
    /// refined around the best ones. Points at infinity of the chart give
    /// parallel lines instead.
    fn pencil_min(&self, x: &Vec3<f64>, n: usize, refine: usize) -> Option<f64> {
        let s = x[1] + x[2];
        let line: Box<dyn Fn(f64) -> Option<f64>> = if s.abs() > 1e-12 * x.norm() {
            let p = (x[0] / s, (x[1] - x[2]) / s);
            Box::new(move |th: f64| {
                let (sn, cs) = th.sin_cos();
                self.chart_line_min(p, (cs, sn))
            })
        } else {
            let th = (x[1] - x[2]).atan2(x[0]);
            Box::new(move |f: f64| self.line_min(th, f * std::f64::consts::FRAC_2_PI))
        };
        // Over a half turn for a pencil, over offsets in (-1, 1) for parallels.
        let span = if s.abs() > 1e-12 * x.norm() { std::f64::consts::PI } else { 2.0 * std::f64::consts::FRAC_PI_2 };
        let lo = if s.abs() > 1e-12 * x.norm() { 0.0 } else { -std::f64::consts::FRAC_PI_2 };
        let mut samples: Vec<(f64, f64)> =
            (0..n).filter_map(|k| {
                let a = lo + span * (k as f64 + 0.5) / n as f64;
                line(a).map(|r| (r, a))
            }).collect();
        samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut best = samples.first()?.0;
        let h = span / n as f64;
        for &(_, a) in samples.iter().take(refine) {
            let f = |x: f64| line(x).unwrap_or(f64::INFINITY);
            best = best.min(golden_min(&f, a - h, a + h, 48));
        }
        Some(best)
    }

    /// Minimal norm ratio along the chart line with direction angle `th` at
    /// offset `frac` of the square's support.
    fn line_min(&self, th: f64, frac: f64) -> Option<f64> {
        let (sn, cs) = th.sin_cos();
        let c = frac * (sn.abs() + cs.abs());
        self.chart_line_min((-sn * c, cs * c), (cs, sn))
    }

    /// Minimal norm ratio along the chart line through `(px, py)` with
    /// direction `d`. On the line `x + t v` each norm is `D / (L+(t) L-(t))`
    /// with `L+-` the two active edge functionals, so the ratio is a quotient
    /// of quadratics `P / Q` whose critical points solve a quadratic. The
    /// ratio is unimodal on the inner chord (its log is strictly convex in a
    /// parameter where both chords are bounded), so the root inside is the minimum.
    fn chart_line_min(&self, (px, py): (f64, f64), d: (f64, f64)) -> Option<f64> {
        let (lo, hi) = square_chord((px, py), d)?;
        let x0 = chart_to_std(&px, &py);
        let v = chart_dir_to_std(&d.0, &d.1);
        let mid = x0.clone() + v.scale(&((lo + hi) / 2.0));
        let quadratic = |edges: &[Vec3<f64>; 4]| {
            let rho = |l: &Vec3<f64>| -l.dot(&v) / l.dot(&mid);
            let kp = (0..4).max_by(|&a, &b| rho(&edges[a]).total_cmp(&rho(&edges[b]))).unwrap();
            let km = (0..4).min_by(|&a, &b| rho(&edges[a]).total_cmp(&rho(&edges[b]))).unwrap();
            let (a1, b1) = (edges[kp].dot(&x0), edges[kp].dot(&v));
            let (a2, b2) = (edges[km].dot(&x0), edges[km].dot(&v));
            [b1 * b2, a1 * b2 + a2 * b1, a1 * a2]
        };
        let [p2, p1, p0] = quadratic(&self.outer);
        let [q2, q1, q0] = quadratic(&self.inner);
        let ratio = |t: f64| {
            let x = x0.clone() + v.scale(&t);
            norm_from_edges(&self.inner, &x, &v) / norm_from_edges(&self.outer, &x, &v)
        };
        // P'Q - PQ' = c2 t^2 + c1 t + c0.
        let (c2, c1, c0) = (p2 * q1 - p1 * q2, 2.0 * (p2 * q0 - p0 * q2), p1 * q0 - p0 * q1);
        let inside = |t: f64| t > lo && t < hi;
        let scale = c2.abs().max(c1.abs()).max(c0.abs());
        let root = if c2.abs() <= 1e-14 * scale {
            Some(-c0 / c1).filter(|&t| inside(t))
        } else {
            let disc = c1 * c1 - 4.0 * c2 * c0;
            if disc < 0.0 {
                None
            } else {
                // Stable pair of roots.
                let qq = -0.5 * (c1 + c1.signum() * disc.sqrt());
                [qq / c2, c0 / qq].into_iter().filter(|&t| inside(t)).min_by(|a, b| ratio(*a).total_cmp(&ratio(*b)))
            }
        };
        let r = match root {
            Some(t) => ratio(t),
            None => golden_min(&ratio, lo, hi, 60),
        };
        r.is_finite().then_some(r)
    }
}

/// Sampled infimum of `||v||_{inner} / ||v||_{outer}` over points of the
/// inner quad and tangent directions. Lines through the inner quad are
/// sampled on a grid of directions and offsets, each line is minimized
/// exactly, and the best lines are refined by compass search. Every value is
/// attained, so this approximates the infimum from above.
pub fn distortion_estimate(inner: &ConvexQuad<f64>, outer: &ConvexQuad<f64>, cfg: DistortionConfig) -> Result<f64> {
    if !outer.contains_quad(inner, false) {
        return Err(Error::NotNested);
    }
    let probe = LineProbe::new(inner, outer);
    let n = cfg.resolution;
    let nd = cfg.directions.max(1);
    let pi = std::f64::consts::PI;
    let mut samples: Vec<(f64, f64, f64)> = Vec::with_capacity(n * nd);
    for k in 0..nd {
        let th = pi * k as f64 / nd as f64;
        for i in 0..n {
            let frac = -1.0 + (2 * i + 1) as f64 / n as f64;
            if let Some(r) = probe.line_min(th, frac) {
                samples.push((r, th, frac));
            }
        }
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut best = samples.first().map(|s| s.0).unwrap_or(f64::INFINITY);
    for v in &probe.vertices {
        if let Some(r) = probe.pencil_min(v, PENCIL_SAMPLES, 3) {
            best = best.min(r);
        }
    }
    if !best.is_finite() {
        return Err(Error::NotNested);
    }
    let lim = 1.0 - 1e-9;
    for s in samples.iter().take(cfg.refine) {
        let (mut r, mut th, mut frac) = *s;
        let mut step = 1.0 / n as f64;
        let mut astep = pi / nd as f64;
        while step > 1e-6 {
            let mut moved = false;
            for (da, df) in [(-1.0, -1.0), (-1.0, 0.0), (-1.0, 1.0), (0.0, -1.0), (0.0, 1.0), (1.0, -1.0), (1.0, 0.0), (1.0, 1.0)] {
                let nt = th + da * astep;
                let nf = (frac + df * step).clamp(-lim, lim);
                if let Some(nr) = probe.line_min(nt, nf) {
                    if nr < r {
                        (r, th, frac) = (nr, nt, nf);
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
                astep *= 0.5;
            }
        }
        best = best.min(r);
    }
    Ok(best)
}
