//! Overmarked and marked boxes, their moduli, the elementary transformations
//! `i, j, tau1, tau2`, and the deformation `sigma_lambda`.

use serde::Serialize;

use crate::anosov::ConvexQuad;
use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::projective::{join, meet, Line, Point};
use crate::scalar::{RealScalar, Scalar};

/// Box moduli `(zeta_t, zeta_b)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxModuli<S> {
    pub zeta_t: S,
    pub zeta_b: S,
}

impl<S: Scalar> BoxModuli<S> {
    pub fn new(zeta_t: S, zeta_b: S) -> Result<Self> {
        let m = BoxModuli { zeta_t, zeta_b };
        if m.zeta_t.abs() == S::one() || m.zeta_b.abs() == S::one() {
            return Err(Error::InvalidModuli);
        }
        Ok(m)
    }

    pub fn special() -> Self {
        BoxModuli { zeta_t: S::zero(), zeta_b: S::zero() }
    }

    pub fn is_special(&self) -> bool {
        self.zeta_t.is_zero() && self.zeta_b.is_zero()
    }

    /// Both moduli strictly inside `]-1, 1[`.
    pub fn is_convex(&self) -> bool {
        let one = S::one();
        self.zeta_t.abs() < one && self.zeta_b.abs() < one
    }

    /// Moduli of `j` applied to a box with these moduli.
    pub fn negated(&self) -> Self {
        BoxModuli { zeta_t: -self.zeta_t.clone(), zeta_b: -self.zeta_b.clone() }
    }

    /// Image under the order-4 rotation `(zt, zb) -> (-zb, zt)`.
    pub fn rotated(&self) -> Self {
        BoxModuli { zeta_t: -self.zeta_b.clone(), zeta_b: self.zeta_t.clone() }
    }

    pub fn convert<T: Scalar>(&self) -> BoxModuli<T> {
        BoxModuli { zeta_t: T::from_f64(self.zeta_t.to_f64()), zeta_b: T::from_f64(self.zeta_b.to_f64()) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.zeta_t.to_f64(), self.zeta_b.to_f64())
    }
}

/// True when `m2` lies in the orbit of `m1` under the order-4 rotation.
pub fn moduli_equivalence<S: Scalar>(m1: &BoxModuli<S>, m2: &BoxModuli<S>) -> bool {
    let mut m = m1.clone();
    for _ in 0..4 {
        if m == *m2 {
            return true;
        }
        m = m.rotated();
    }
    false
}

/// Deformation parameter `lambda = (eps, delta)`, stored as `u = e^eps`, `v = e^delta`
/// so that every derived matrix is rational when `u, v` are.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda<S> {
    pub u: S,
    pub v: S,
}

impl<S: Scalar> Lambda<S> {
    pub fn zero() -> Self {
        Lambda { u: S::one(), v: S::one() }
    }

    pub fn from_exp(u: S, v: S) -> Result<Self> {
        if u.signum() <= 0 || v.signum() <= 0 {
            return Err(Error::Parse("u and v must be positive".into()));
        }
        Ok(Lambda { u, v })
    }

    pub fn is_zero(&self) -> bool {
        self.u == S::one() && self.v == S::one()
    }

    pub fn cosh_eps(&self) -> S {
        (self.u.clone() + S::one() / self.u.clone()) / S::from_i64(2)
    }

    pub fn sinh_eps(&self) -> S {
        (self.u.clone() - S::one() / self.u.clone()) / S::from_i64(2)
    }

    pub fn cosh_delta(&self) -> S {
        (self.v.clone() + S::one() / self.v.clone()) / S::from_i64(2)
    }

    pub fn sinh_delta(&self) -> S {
        (self.v.clone() - S::one() / self.v.clone()) / S::from_i64(2)
    }

    /// `(-eps, -delta)`.
    pub fn inverse(&self) -> Self {
        Lambda { u: S::one() / self.u.clone(), v: S::one() / self.v.clone() }
    }

    /// `(eps, -delta)`.
    pub fn delta_flipped(&self) -> Self {
        Lambda { u: self.u.clone(), v: S::one() / self.v.clone() }
    }

    pub fn epsilon(&self) -> f64 {
        self.u.to_f64().ln()
    }

    pub fn delta(&self) -> f64 {
        self.v.to_f64().ln()
    }

    pub fn convert<T: RealScalar>(&self) -> Lambda<T> {
        Lambda::from_eps_delta(T::from_f64(self.epsilon()), T::from_f64(self.delta()))
    }

    /// The deformation matrix in Theta-basis coordinates.
    pub fn sigma(&self) -> Mat3<S> {
        let (c, s) = (self.cosh_eps(), self.sinh_eps());
        let (z, o) = (S::zero(), S::one());
        Mat3([
            [o, z.clone(), z.clone()],
            [z.clone(), c.clone() / self.v.clone(), -s.clone()],
            [z, -s, self.v.clone() * c],
        ])
    }

    /// `f(eps, delta) = e^{-delta} cosh eps - sinh eps - 1`.
    pub fn region_f(&self) -> S {
        self.cosh_eps() / self.v.clone() - self.sinh_eps() - S::one()
    }

    /// Membership in the closed region `f(eps, delta) >= 0` and `f(eps, -delta) >= 0`.
    pub fn in_region(&self) -> bool {
        self.region_f().signum() >= 0 && self.delta_flipped().region_f().signum() >= 0
    }

    /// Membership in the open interior of the region.
    pub fn in_region_interior(&self) -> bool {
        self.region_f().signum() > 0 && self.delta_flipped().region_f().signum() > 0
    }
}

impl<S: RealScalar> Lambda<S> {
    pub fn from_eps_delta(eps: S, delta: S) -> Self {
        Lambda { u: eps.exp(), v: delta.exp() }
    }
}

pub fn in_region<S: Scalar>(l: &Lambda<S>) -> bool {
    l.in_region()
}

/// Standard corners `p, q, r, s` in Theta-basis coordinates.
pub fn std_corners<S: Scalar>() -> [Vec3<S>; 4] {
    [
        Vec3::from_i64([-1, 1, 0]),
        Vec3::from_i64([1, 1, 0]),
        Vec3::from_i64([1, 0, 1]),
        Vec3::from_i64([-1, 0, 1]),
    ]
}

/// Matrix sending `e1, e2, e3, (1,1,1)` to multiples of `a[0..4]`.
fn frame_of<S: Scalar>(a: [&Vec3<S>; 4]) -> Result<Mat3<S>> {
    let m = Mat3::from_cols([a[0], a[1], a[2]]);
    let inv = m.proj_inverse().map_err(|_| Error::DegenerateBox("three frame points collinear"))?;
    let c = inv.mul_vec(a[3]);
    if c.0.iter().any(|x| x.is_zero()) {
        return Err(Error::DegenerateBox("frame points not in general position"));
    }
    Ok(Mat3::from_cols([&a[0].scale(&c[0]), &a[1].scale(&c[1]), &a[2].scale(&c[2])]))
}

/// The projective transformation sending `src[k]` to `dst[k]` for four points in general position.
pub fn frame_map<S: Scalar>(src: [&Vec3<S>; 4], dst: [&Vec3<S>; 4]) -> Result<Mat3<S>> {
    let fs = frame_of(src)?;
    let fd = frame_of(dst)?;
    Ok(&fd * &fs.proj_inverse()?)
}

/// Overmarked box: points `p, q, r, s, t, b` and lines
/// `P = ts, Q = tr, R = bq, S = bp, T = pq, B = rs`.
#[derive(Clone, Debug)]
pub struct OvermarkedBox<S> {
    pub points: [Point<S>; 6],
    pub lines: [Line<S>; 6],
}

/// Index names for points and lines.
pub const P: usize = 0;
pub const Q: usize = 1;
pub const R: usize = 2;
pub const S_: usize = 3;
pub const T: usize = 4;
pub const B: usize = 5;

impl<S: Scalar> OvermarkedBox<S> {
    /// Builds a box from its six points, deriving and validating the lines.
    pub fn new(points: [Point<S>; 6]) -> Result<Self> {
        // Primitive representatives keep exact coordinates from growing along words.
        let points = points.map(|mut x| {
            S::primitive(&mut x.0 .0);
            x
        });
        let [p, q, r, s, t, b] = &points;
        let deg = |_| Error::DegenerateConfiguration;
        let lines = [
            join(t, s).map_err(deg)?,
            join(t, r).map_err(deg)?,
            join(b, q).map_err(deg)?,
            join(b, p).map_err(deg)?,
            join(p, q).map_err(deg)?,
            join(r, s).map_err(deg)?,
        ];
        if !t.on(&lines[T]) {
            return Err(Error::DegenerateBox("t not on pq"));
        }
        if !b.on(&lines[B]) {
            return Err(Error::DegenerateBox("b not on rs"));
        }
        let tb = meet(&lines[T], &lines[B]).map_err(|_| Error::DegenerateBox("T = B"))?;
        if points.iter().any(|x| x.eq_proj(&tb)) {
            return Err(Error::DegenerateBox("TB is one of the six points"));
        }
        Ok(OvermarkedBox { points, lines })
    }

    pub fn from_vecs(v: [Vec3<S>; 6]) -> Result<Self> {
        Self::new(v.map(Point))
    }

    /// Standard box with the given moduli in Theta-basis coordinates.
    pub fn from_moduli(m: &BoxModuli<S>) -> Result<Self> {
        if m.zeta_t.abs() == S::one() || m.zeta_b.abs() == S::one() {
            return Err(Error::InvalidModuli);
        }
        let [p, q, r, s] = std_corners();
        let (o, z) = (S::one(), S::zero());
        let t = Vec3::new(m.zeta_t.clone(), o.clone(), z.clone());
        let b = Vec3::new(m.zeta_b.clone(), z, o);
        Self::from_vecs([p, q, r, s, t, b])
    }

    pub fn special() -> Self {
        Self::from_moduli(&BoxModuli::special()).expect("special box is valid")
    }

    pub fn pt(&self, k: usize) -> &Point<S> {
        &self.points[k]
    }

    pub fn line(&self, k: usize) -> &Line<S> {
        &self.lines[k]
    }

    fn permuted(&self, idx: [usize; 6]) -> Result<Self> {
        Self::new(idx.map(|k| self.points[k].clone()))
    }

    /// Matrix sending the standard corners to `p, q, r, s`.
    pub fn frame(&self) -> Result<Mat3<S>> {
        let std = std_corners::<S>();
        let c: Vec<&Vec3<S>> = self.points[..4].iter().map(|x| &x.0).collect();
        frame_map([&std[0], &std[1], &std[2], &std[3]], [c[0], c[1], c[2], c[3]])
    }

    /// Change of basis into Theta-basis coordinates (inverse of [`Self::frame`]).
    pub fn theta_basis(&self) -> Result<Mat3<S>> {
        self.frame()?.inverse()
    }

    /// `(zeta_t, zeta_b)`: coordinates of `t` and `b` in the Theta-basis.
    pub fn moduli(&self) -> Result<BoxModuli<S>> {
        let th = self.theta_basis()?;
        let t = th.mul_vec(&self.points[T].0);
        let b = th.mul_vec(&self.points[B].0);
        if t[1].is_zero() || b[2].is_zero() {
            return Err(Error::DegenerateBox("t or b at a corner of the frame"));
        }
        BoxModuli::new(t[0].clone() / t[1].clone(), b[0].clone() / b[2].clone())
    }

    pub fn is_convex(&self) -> Result<bool> {
        Ok(self.moduli()?.is_convex())
    }

    /// Convex interior `(p, q, r, s)`: the image of the Theta-chart square.
    pub fn interior(&self) -> Result<ConvexQuad<S>> {
        if !self.is_convex()? {
            return Err(Error::NotConvex);
        }
        ConvexQuad::from_frame(self.frame()?)
    }

    /// Image under the projective transformation `g`.
    pub fn transform(&self, g: &Mat3<S>) -> Result<Self> {
        Self::from_vecs(self.points.clone().map(|x| g.mul_vec(&x.0)))
    }

    /// Image under the duality with matrix `m`, `(x, X) -> (m^{-T} X, m x)`,
    /// with the corner reordering that keeps the result a box.
    pub fn dualize(&self, m: &Mat3<S>) -> Result<Self> {
        let mit = m.inverse_transpose()?;
        let l = |k: usize| mit.mul_vec(&self.lines[k].0);
        Self::from_vecs([l(P), l(Q), l(S_), l(R), l(T), l(B)])
    }

    /// The box in the dual plane with points `(P, Q, R, S; T, B)`.
    pub fn dual_box(&self) -> Result<Self> {
        Self::new(self.lines.clone().map(|l| Point(l.0)))
    }

    /// `j: (q, p, s, r; t, b)`.
    pub fn j(&self) -> Result<Self> {
        self.permuted([Q, P, S_, R, T, B])
    }

    /// `i: (s, r, p, q; b, t)`.
    pub fn i(&self) -> Result<Self> {
        self.permuted([S_, R, P, Q, B, T])
    }

    fn pappus_points(&self) -> Result<(Point<S>, Point<S>, Point<S>)> {
        let deg = |_| Error::DegenerateConfiguration;
        let [p, q, r, s, _, _] = &self.points;
        let l = &self.lines;
        let qr = meet(&l[Q], &l[R]).map_err(deg)?;
        let ps = meet(&l[P], &l[S_]).map_err(deg)?;
        let pr = join(p, r).map_err(deg)?;
        let qs = join(q, s).map_err(deg)?;
        let c = meet(&pr, &qs).map_err(deg)?;
        Ok((qr, ps, c))
    }

    /// `tau1: (p, q, QR, PS; t, (pr)(qs))`.
    pub fn tau1(&self) -> Result<Self> {
        let (qr, ps, c) = self.pappus_points()?;
        let [p, q, _, _, t, _] = self.points.clone();
        Self::new([p, q, qr, ps, t, c])
    }

    /// `tau2: (QR, PS, s, r; (pr)(qs), b)`.
    pub fn tau2(&self) -> Result<Self> {
        let (qr, ps, c) = self.pappus_points()?;
        let [_, _, r, s, _, b] = self.points.clone();
        Self::new([qr, ps, s, r, c, b])
    }

    /// `sigma_lambda`: the deformation matrix applied in this box's Theta-basis.
    pub fn sigma(&self, l: &Lambda<S>) -> Result<Self> {
        if l.is_zero() {
            return Ok(self.clone());
        }
        let f = self.frame()?;
        let g = (&(&f * &l.sigma().primitive()) * &f.proj_inverse()?).primitive();
        self.transform(&g)
    }

    pub fn i_lambda(&self, l: &Lambda<S>) -> Result<Self> {
        self.i()?.sigma(l)
    }

    pub fn tau1_lambda(&self, l: &Lambda<S>) -> Result<Self> {
        self.tau1()?.sigma(l)
    }

    pub fn tau2_lambda(&self, l: &Lambda<S>) -> Result<Self> {
        self.tau2()?.sigma(l)
    }

    /// `varrho_1 = i tau1`.
    pub fn rho1(&self) -> Result<Self> {
        self.tau1()?.i()
    }

    /// Equality as overmarked boxes (all six points projectively equal).
    pub fn eq_overmarked(&self, o: &Self) -> bool {
        self.points.iter().zip(&o.points).all(|(a, b)| a.eq_proj(b))
    }

    /// Equality as marked boxes, i.e. up to `j`.
    pub fn eq_marked(&self, o: &Self) -> bool {
        self.eq_overmarked(o) || o.j().map(|jo| self.eq_overmarked(&jo)).unwrap_or(false)
    }

    /// Deterministic representative of the class modulo `j`: the one whose
    /// first point has the lexicographically larger normalized coordinates.
    pub fn canonical(&self) -> Result<Self> {
        let p = self.points[P].0.normalize_first();
        let q = self.points[Q].0.normalize_first();
        let take_j = q.0.iter().zip(&p.0).find(|(a, b)| a != b).map(|(a, b)| a > b).unwrap_or(false);
        if take_j {
            self.j()
        } else {
            Ok(self.clone())
        }
    }

    pub fn to_f64(&self) -> OvermarkedBox<f64> {
        OvermarkedBox {
            points: self.points.clone().map(|x| Point(x.0.to_f64())),
            lines: self.lines.clone().map(|x| Line(x.0.to_f64())),
        }
    }

    pub fn convert<T: Scalar>(&self) -> Result<OvermarkedBox<T>> {
        OvermarkedBox::from_vecs(self.points.clone().map(|x| x.0.normalize_max().convert()))
    }
}

/// Checks that the deformed image `sigma_lambda(B)` has its corners in the
/// closed Theta-chart square of `B`; agrees with [`in_region`].
pub fn containment_check<S: Scalar>(b: &OvermarkedBox<S>, l: &Lambda<S>) -> Result<bool> {
    let outer = b.interior()?;
    let inner = b.sigma(l)?.interior_unchecked()?;
    Ok(outer.contains_quad(&inner, false))
}

/// Names of the checked relations, in the order returned by [`relation_suite`].
pub const RELATION_NAMES: [&str; 6] = ["i^2 = 1", "t1 i t2 = i", "t2 i t1 = i", "t1 i t1 = t2", "t2 i t2 = t1", "(i t1)^3 = 1"];

/// Evaluates the defining relations of the (deformed) elementary
/// transformations on `b`, as equalities of marked boxes. With `mutate`, `t2`
/// is replaced by `t1` as a negative control.
pub fn relation_suite<S: Scalar>(b: &OvermarkedBox<S>, l: &Lambda<S>, mutate: bool) -> Result<[bool; 6]> {
    let i = |x: &OvermarkedBox<S>| x.i_lambda(l);
    let t1 = |x: &OvermarkedBox<S>| x.tau1_lambda(l);
    let t2 = |x: &OvermarkedBox<S>| if mutate { x.tau1_lambda(l) } else { x.tau2_lambda(l) };
    let ib = i(b)?;
    let mut cycle = b.clone();
    for _ in 0..3 {
        cycle = i(&t1(&cycle)?)?;
    }
    Ok([
        i(&ib)?.eq_marked(b),
        t1(&i(&t2(b)?)?)?.eq_marked(&ib),
        t2(&i(&t1(b)?)?)?.eq_marked(&ib),
        t1(&i(&t1(b)?)?)?.eq_marked(&t2(b)?),
        t2(&i(&t2(b)?)?)?.eq_marked(&t1(b)?),
        cycle.eq_marked(b),
    ])
}

impl<S: Scalar> OvermarkedBox<S> {
    /// Quadrilateral spanned by the Theta-chart square, without the convexity check.
    pub fn interior_unchecked(&self) -> Result<ConvexQuad<S>> {
        ConvexQuad::from_frame(self.frame()?)
    }
}
