//! Points, lines and flags of the real projective plane, and the group of
//! projective symmetries (transformations and dualities) acting on them.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Scalar;

/// Angle tolerance for projective comparisons in float mode.
pub const PROJ_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Point<S>(pub Vec3<S>);

#[derive(Clone, Debug)]
pub struct Line<S>(pub Vec3<S>);

impl<S: Scalar> Point<S> {
    pub fn new(v: Vec3<S>) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::CoincidentPoints);
        }
        Ok(Point(v))
    }

    pub fn from_i64(v: [i64; 3]) -> Self {
        Point(Vec3::from_i64(v))
    }

    pub fn eq_proj(&self, o: &Self) -> bool {
        self.0.proportional(&o.0, PROJ_TOL)
    }

    pub fn on(&self, l: &Line<S>) -> bool {
        incident(self, l)
    }
}

impl<S: Scalar> Line<S> {
    pub fn new(v: Vec3<S>) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::CoincidentLines);
        }
        Ok(Line(v))
    }

    pub fn from_i64(v: [i64; 3]) -> Self {
        Line(Vec3::from_i64(v))
    }

    pub fn eq_proj(&self, o: &Self) -> bool {
        self.0.proportional(&o.0, PROJ_TOL)
    }
}

/// `<L|x> = 0`, exactly or up to the normalized tolerance.
pub fn incident<S: Scalar>(x: &Point<S>, l: &Line<S>) -> bool {
    let d = l.0.dot(&x.0);
    if S::EXACT {
        return d.is_zero();
    }
    let t = S::from_f64(PROJ_TOL);
    d.square() <= t.clone() * t * l.0.norm_sq() * x.0.norm_sq()
}

/// Line through two distinct points.
pub fn join<S: Scalar>(a: &Point<S>, b: &Point<S>) -> Result<Line<S>> {
    if a.eq_proj(b) {
        return Err(Error::CoincidentPoints);
    }
    Ok(Line(a.0.cross(&b.0)))
}

/// Intersection point of two distinct lines.
pub fn meet<S: Scalar>(l: &Line<S>, m: &Line<S>) -> Result<Point<S>> {
    if l.eq_proj(m) {
        return Err(Error::CoincidentLines);
    }
    Ok(Point(l.0.cross(&m.0)))
}

fn det3<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>, c: &Vec3<S>) -> S {
    a.dot(&b.cross(c))
}

/// Cross-ratio `[a:x:y:b] = (|a-y| |b-x|) / (|a-x| |b-y|)` of four collinear
/// points, signed, computed from homogeneous determinants so that no affine
/// chart is involved. Equals 1 when `x = y`.
pub fn cross_ratio<S: Scalar>(a: &Point<S>, x: &Point<S>, y: &Point<S>, b: &Point<S>) -> Result<S> {
    if a.eq_proj(x) || b.eq_proj(y) {
        return Err(Error::DegeneratePair);
    }
    let line = join(a, x)?;
    if !incident(y, &line) || !incident(b, &line) {
        return Err(Error::NotCollinear);
    }
    // The line's own coordinate vector is never on the line, so det(u, v, L)
    // is a nondegenerate area form on it.
    let w = &line.0;
    let d = |u: &Point<S>, v: &Point<S>| det3(&u.0, &v.0, w);
    let num = d(a, y) * d(b, x);
    let den = d(a, x) * d(b, y);
    if den.is_zero() {
        return Err(Error::DegeneratePair);
    }
    Ok(num / den)
}

#[derive(Clone, Debug)]
pub struct Flag<S> {
    pub point: Point<S>,
    pub line: Line<S>,
}

impl<S: Scalar> Flag<S> {
    pub fn new(point: Point<S>, line: Line<S>) -> Result<Self> {
        if !incident(&point, &line) {
            return Err(Error::InvalidFlag);
        }
        Ok(Flag { point, line })
    }

    pub fn eq_proj(&self, o: &Self) -> bool {
        self.point.eq_proj(&o.point) && self.line.eq_proj(&o.line)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SymmetryKind {
    Transformation,
    Duality,
}

/// Projective transformation `x -> g x` or duality `(x, X) -> (A^{-T} X, A x)`.
#[derive(Clone, Debug)]
pub struct ProjSymmetry<S> {
    pub kind: SymmetryKind,
    pub matrix: Mat3<S>,
}

impl<S: Scalar> ProjSymmetry<S> {
    pub fn transformation(m: Mat3<S>) -> Self {
        ProjSymmetry { kind: SymmetryKind::Transformation, matrix: m }
    }

    pub fn duality(m: Mat3<S>) -> Self {
        ProjSymmetry { kind: SymmetryKind::Duality, matrix: m }
    }

    pub fn identity() -> Self {
        Self::transformation(Mat3::identity())
    }

    pub fn is_polarity(&self) -> bool {
        self.kind == SymmetryKind::Duality && self.matrix.is_symmetric()
    }

    pub fn apply_flag(&self, f: &Flag<S>) -> Result<Flag<S>> {
        let m = &self.matrix;
        let mit = m.inverse_transpose()?;
        let (p, l) = match self.kind {
            SymmetryKind::Transformation => (Point(m.mul_vec(&f.point.0)), Line(mit.mul_vec(&f.line.0))),
            SymmetryKind::Duality => (Point(mit.mul_vec(&f.line.0)), Line(m.mul_vec(&f.point.0))),
        };
        Flag::new(p, l)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        use SymmetryKind::*;
        let (a, b) = (&self.matrix, &other.matrix);
        Ok(match (self.kind, other.kind) {
            (Transformation, Transformation) => Self::transformation(a * b),
            (Duality, Transformation) => Self::duality(a * b),
            (Transformation, Duality) => Self::duality(&a.inverse_transpose()? * b),
            (Duality, Duality) => Self::transformation(&a.inverse_transpose()? * b),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self.kind {
            SymmetryKind::Transformation => Self::transformation(self.matrix.inverse()?),
            SymmetryKind::Duality => Self::duality(self.matrix.transpose()),
        })
    }

    /// Same kind and projectively equal matrices.
    pub fn eq_proj(&self, o: &Self) -> bool {
        self.kind == o.kind && self.matrix.proj_eq(&o.matrix, PROJ_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn pt(v: [i64; 3]) -> Point<Q> {
        Point::from_i64(v)
    }

    #[test]
    fn join_examples() {
        let l = join(&pt([-1, 1, 0]), &pt([1, 0, 1])).unwrap();
        assert!(l.eq_proj(&Line::from_i64([1, 1, -1])));
        let l = join(&pt([1, 0, 0]), &pt([0, 1, 0])).unwrap();
        assert!(l.eq_proj(&Line::from_i64([0, 0, 1])));
        let l = join(&pt([0, 1, 0]), &pt([1, 0, 1])).unwrap();
        assert!(l.eq_proj(&Line::from_i64([1, 0, -1])));
        assert_eq!(join(&pt([1, 2, 3]), &pt([2, 4, 6])).unwrap_err(), Error::CoincidentPoints);
    }

    #[test]
    fn meet_examples() {
        let m = |a, b| meet(&Line::<Q>::from_i64(a), &Line::from_i64(b)).unwrap();
        assert!(m([1, 0, -1], [-1, 1, 0]).eq_proj(&pt([1, 1, 1])));
        assert!(m([0, 0, 1], [0, 1, 0]).eq_proj(&pt([1, 0, 0])));
        assert!(m([1, 0, 1], [-1, -1, 0]).eq_proj(&pt([-1, 1, 1])));
    }

    #[test]
    fn cross_ratio_examples() {
        let aff = |n: i64, d: i64| Point(Vec3::new(Q::from_ratio(n, d), Q::from_i64(0), Q::from_i64(1)));
        let cr = cross_ratio(&aff(-1, 1), &aff(0, 1), &aff(1, 2), &aff(1, 1)).unwrap();
        assert_eq!(cr, Q::from_i64(3));
        let cr = cross_ratio(&aff(-1, 1), &aff(0, 1), &aff(0, 1), &aff(1, 1)).unwrap();
        assert_eq!(cr, Q::from_i64(1));
        // Harmonic quadruple with y at infinity, and the swapped ordering.
        let inf = pt([1, 0, 0]);
        let h = cross_ratio(&aff(-1, 1), &aff(0, 1), &inf, &aff(1, 1)).unwrap();
        assert_eq!(h, Q::from_i64(-1));
        let s = cross_ratio(&aff(0, 1), &aff(-1, 1), &inf, &aff(1, 1)).unwrap();
        assert_eq!(s, Q::from_i64(2));
        // Swapping the first pair sends c to 1 - c.
        assert_eq!(s, Q::from_i64(1) - h);
        assert_eq!(
            cross_ratio(&aff(0, 1), &aff(1, 1), &pt([0, 1, 1]), &aff(2, 1)).unwrap_err(),
            Error::NotCollinear
        );
    }

    #[test]
    fn polarity_swaps_flag() {
        let d = ProjSymmetry::duality(Mat3::<Q>::identity());
        let f = Flag::new(pt([1, 0, 0]), Line::from_i64([0, 0, 1])).unwrap();
        let g = d.apply_flag(&f).unwrap();
        assert!(g.point.eq_proj(&pt([0, 0, 1])));
        assert!(g.line.eq_proj(&Line::from_i64([1, 0, 0])));
        assert!(d.apply_flag(&g).unwrap().eq_proj(&f));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let g = ProjSymmetry::transformation(Mat3::<Q>::from_i64([[1, 2, 0], [0, 1, 3], [1, 0, 1]]));
        let d = ProjSymmetry::duality(Mat3::<Q>::from_i64([[2, 1, 0], [1, 3, 1], [0, 1, 1]]));
        let e = ProjSymmetry::duality(Mat3::<Q>::from_i64([[1, 0, 1], [2, 1, 0], [0, 0, 1]]));
        let f = Flag::new(pt([1, 1, 0]), Line::from_i64([1, -1, 5])).unwrap();
        for (a, b) in [(&g, &d), (&d, &g), (&d, &e), (&g, &g), (&e, &d)] {
            let seq = a.apply_flag(&b.apply_flag(&f).unwrap()).unwrap();
            let comp = a.compose(b).unwrap().apply_flag(&f).unwrap();
            assert!(seq.eq_proj(&comp));
            let back = a.inverse().unwrap().apply_flag(&a.apply_flag(&f).unwrap()).unwrap();
            assert!(back.eq_proj(&f));
        }
    }
}
