//! Three-dimensional linear algebra over any [`Scalar`], plus the small dense
//! routines (determinant, nullspace) needed by the variety and intertwiner code.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{RealScalar, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Vec3<S>(pub [S; 3]);

#[derive(Clone, Debug, PartialEq)]
pub struct Mat3<S>(pub [[S; 3]; 3]);

impl<S: Scalar> Vec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Vec3([x, y, z])
    }

    pub fn from_i64(v: [i64; 3]) -> Self {
        Vec3(v.map(S::from_i64))
    }

    pub fn zero() -> Self {
        Vec3([S::zero(), S::zero(), S::zero()])
    }

    pub fn dot(&self, o: &Self) -> S {
        S::dot3(&self.0, &o.0)
    }

    pub fn cross(&self, o: &Self) -> Self {
        Vec3(S::cross3(&self.0, &o.0))
    }

    pub fn scale(&self, k: &S) -> Self {
        Vec3(self.0.clone().map(|x| x * k.clone()))
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> S {
        let mut m = self[0].abs();
        for x in &self.0[1..] {
            if x.abs() > m {
                m = x.abs();
            }
        }
        m
    }

    /// Rescales so that the first nonzero component is 1.
    pub fn normalize_first(&self) -> Self {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(k) => {
                let k = k.clone();
                Vec3(self.0.clone().map(|x| x / k.clone()))
            }
            None => self.clone(),
        }
    }

    /// Rescales so that the largest absolute component is 1 in magnitude.
    pub fn normalize_max(&self) -> Self {
        let m = self.max_abs();
        if m.is_zero() {
            return self.clone();
        }
        Vec3(self.0.clone().map(|x| x / m.clone()))
    }

    /// Projective proportionality: the cross product vanishes, exactly in
    /// rational mode and up to an angle tolerance in float mode.
    pub fn proportional(&self, o: &Self, tol: f64) -> bool {
        let c = self.cross(o);
        if S::EXACT {
            return c.is_zero();
        }
        let t = S::from_f64(tol);
        c.norm_sq() <= t.clone() * t * self.norm_sq() * o.norm_sq()
    }

    pub fn to_f64(&self) -> Vec3<f64> {
        Vec3(self.0.clone().map(|x| x.to_f64()))
    }

    pub fn convert<T: Scalar>(&self) -> Vec3<T> {
        Vec3(self.0.clone().map(|x| T::from_f64(x.to_f64())))
    }
}

impl<S: RealScalar> Vec3<S> {
    pub fn norm(&self) -> S {
        self.norm_sq().sqrt()
    }

    /// Sine of the angle between the lines spanned by two vectors.
    pub fn projective_distance(&self, o: &Self) -> S {
        self.cross(o).norm() / (self.norm() * o.norm())
    }
}

impl<S> Index<usize> for Vec3<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S> IndexMut<usize> for Vec3<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Vec3<S>;
    fn add(self, o: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Vec3([a + x, b + y, c + z])
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Vec3<S>;
    fn sub(self, o: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Vec3([a - x, b - y, c - z])
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Vec3<S>;
    fn neg(self) -> Self {
        Vec3(self.0.map(|x| -x))
    }
}

impl<S: Scalar> Mat3<S> {
    pub fn from_i64(m: [[i64; 3]; 3]) -> Self {
        Mat3(m.map(|r| r.map(S::from_i64)))
    }

    pub fn identity() -> Self {
        Self::diag(S::one(), S::one(), S::one())
    }

    pub fn zero() -> Self {
        Mat3(std::array::from_fn(|_| std::array::from_fn(|_| S::zero())))
    }

    pub fn diag(a: S, b: S, c: S) -> Self {
        let mut m = Self::zero();
        m.0[0][0] = a;
        m.0[1][1] = b;
        m.0[2][2] = c;
        m
    }

    pub fn from_cols(c: [&Vec3<S>; 3]) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| c[j][i].clone())))
    }

    pub fn col(&self, j: usize) -> Vec3<S> {
        Vec3(std::array::from_fn(|i| self.0[i][j].clone()))
    }

    pub fn row(&self, i: usize) -> Vec3<S> {
        Vec3(self.0[i].clone())
    }

    pub fn transpose(&self) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone())))
    }

    pub fn mul_vec(&self, v: &Vec3<S>) -> Vec3<S> {
        Vec3(std::array::from_fn(|i| self.row(i).dot(v)))
    }

    pub fn scale(&self, k: &S) -> Self {
        Mat3(self.0.clone().map(|r| r.map(|x| x * k.clone())))
    }

    pub fn trace(&self) -> S {
        self.0[0][0].clone() + self.0[1][1].clone() + self.0[2][2].clone()
    }

    /// Sum of the principal 2x2 minors (second coefficient of the characteristic polynomial).
    pub fn sigma2(&self) -> S {
        let m = &self.0;
        m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
            + m[1][1].clone() * m[2][2].clone()
            - m[1][2].clone() * m[2][1].clone()
            + m[0][0].clone() * m[2][2].clone()
            - m[0][2].clone() * m[2][0].clone()
    }

    pub fn det(&self) -> S {
        self.row(0).dot(&self.row(1).cross(&self.row(2)))
    }

    pub fn adjugate(&self) -> Self {
        // Columns of the adjugate are cross products of rows.
        let (r0, r1, r2) = (self.row(0), self.row(1), self.row(2));
        Mat3::from_cols([&r1.cross(&r2), &r2.cross(&r0), &r0.cross(&r1)])
    }

    pub fn frobenius_sq(&self) -> S {
        let mut acc = S::zero();
        for r in &self.0 {
            for x in r {
                acc = acc + x.square();
            }
        }
        acc
    }

    pub fn max_abs(&self) -> S {
        let mut m = S::zero();
        for r in &self.0 {
            for x in r {
                if x.abs() > m {
                    m = x.abs();
                }
            }
        }
        m
    }

    /// Inverse; singular when the determinant vanishes exactly (rational) or
    /// falls below a precision-scaled multiple of the entry size cubed.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        let scale = self.max_abs();
        let scale3 = scale.clone() * scale.clone() * scale;
        if d.is_zero() || d.negligible(&scale3, 64.0 * S::eps()) {
            return Err(Error::SingularMatrix);
        }
        let inv = S::one() / d;
        Ok(self.adjugate().scale(&inv))
    }

    /// Inverse up to a positive factor, which is all a projective map needs.
    /// Exact mode uses the adjugate and a primitive rescaling to keep entries small.
    pub fn proj_inverse(&self) -> Result<Self> {
        if !S::EXACT {
            return self.inverse();
        }
        let d = self.det();
        if d.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut m = self.adjugate();
        if d.signum() < 0 {
            m = m.scale(&-S::one());
        }
        Ok(m.primitive())
    }

    /// Positive rescaling to a small representative in exact mode.
    pub fn primitive(mut self) -> Self {
        let mut v: Vec<S> = self.0.iter().flatten().cloned().collect();
        S::primitive(&mut v);
        for (k, x) in v.into_iter().enumerate() {
            self.0[k / 3][k % 3] = x;
        }
        self
    }

    /// Inverse transpose, the induced action on lines.
    pub fn inverse_transpose(&self) -> Result<Self> {
        Ok(self.inverse()?.transpose())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Projective equality: one matrix is a nonzero multiple of the other.
    pub fn proj_eq(&self, o: &Self, tol: f64) -> bool {
        let a: Vec<S> = self.0.iter().flatten().cloned().collect();
        let b: Vec<S> = o.0.iter().flatten().cloned().collect();
        let k = match (0..9).max_by(|&i, &j| a[i].abs().partial_cmp(&a[j].abs()).unwrap()) {
            Some(k) => k,
            None => return false,
        };
        if a[k].is_zero() || b[k].is_zero() {
            return false;
        }
        let (ak, bk) = (a[k].clone(), b[k].clone());
        let scale = ak.abs() * bk.abs();
        (0..9).all(|i| (a[i].clone() * bk.clone() - b[i].clone() * ak.clone()).negligible(&scale, tol))
    }

    /// True when the matrix is a scalar multiple of the identity.
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.proj_eq(&Self::identity(), tol)
    }

    pub fn to_f64(&self) -> Mat3<f64> {
        Mat3(self.0.clone().map(|r| r.map(|x| x.to_f64())))
    }

    pub fn convert<T: Scalar>(&self) -> Mat3<T> {
        Mat3(self.0.clone().map(|r| r.map(|x| T::from_f64(x.to_f64()))))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.0[i][j] == self.0[j][i]))
    }
}

impl<S: Scalar> Mul for Mat3<S> {
    type Output = Mat3<S>;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<S: Scalar> Mul for &Mat3<S> {
    type Output = Mat3<S>;
    fn mul(self, o: Self) -> Mat3<S> {
        let cols = [o.col(0), o.col(1), o.col(2)];
        Mat3(std::array::from_fn(|i| {
            let r = self.row(i);
            std::array::from_fn(|j| r.dot(&cols[j]))
        }))
    }
}

impl<S: Scalar> Add for Mat3<S> {
    type Output = Mat3<S>;
    fn add(self, o: Self) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j].clone() + o.0[i][j].clone())))
    }
}

impl<S: Scalar> Sub for Mat3<S> {
    type Output = Mat3<S>;
    fn sub(self, o: Self) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j].clone() - o.0[i][j].clone())))
    }
}

/// Real cube root valid for both signs.
pub fn real_cbrt<S: RealScalar>(x: &S) -> S {
    if x.signum() < 0 {
        -(-x.clone()).cbrt()
    } else {
        x.cbrt()
    }
}

/// Representative with determinant one: `m / cbrt(det m)`.
pub fn normalize_det_one<S: RealScalar>(m: &Mat3<S>) -> Result<Mat3<S>> {
    let d = m.det();
    let scale = m.max_abs();
    if d.is_zero() || d.negligible(&(scale.clone() * scale.clone() * scale), 64.0 * S::eps()) {
        return Err(Error::SingularMatrix);
    }
    Ok(m.scale(&(S::one() / real_cbrt(&d))))
}

/// Real eigen-decomposition of a 3x3 matrix with three real eigenvalues.
#[derive(Clone, Debug)]
pub struct Spectrum<S> {
    /// Eigenpairs sorted by increasing modulus.
    pub pairs: Vec<(S, Vec3<S>)>,
    /// Sorted moduli `|l1| <= |l2| <= |l3|`.
    pub moduli: [f64; 3],
    /// `[|l2|/|l1|, |l3|/|l2|]`.
    pub gaps: [f64; 2],
}

/// Moduli are distinct when their ratio exceeds this.
pub const DISTINCT_RATIO: f64 = 1.0 + 1e-9;

impl<S: RealScalar> Spectrum<S> {
    pub fn is_loxodromic(&self) -> bool {
        self.gaps.iter().all(|&g| g > DISTINCT_RATIO)
    }

    pub fn min_gap(&self) -> f64 {
        self.gaps[0].min(self.gaps[1])
    }

    /// Eigenvector of the eigenvalue of largest modulus.
    pub fn attracting(&self) -> &Vec3<S> {
        &self.pairs[2].1
    }

    /// Eigenvector of the eigenvalue of smallest modulus.
    pub fn repelling(&self) -> &Vec3<S> {
        &self.pairs[0].1
    }
}

fn gaps_of(m: &[f64; 3]) -> [f64; 2] {
    [m[1] / m[0], m[2] / m[1]]
}

/// Eigenvalues of a real 3x3 matrix from the depressed-cubic closed form,
/// polished by up to two Newton steps, with eigenvectors from cross products of rows
/// of `m - l Id`. Non-real spectra are reported as [`Error::ComplexSpectrum`].
pub fn eigen_real<S: RealScalar>(m: &Mat3<S>) -> Result<Spectrum<S>> {
    let two = S::from_i64(2);
    let three = S::from_i64(3);
    let tr = m.trace();
    let s2 = m.sigma2();
    let det = m.det();
    // Characteristic polynomial l^3 - tr l^2 + s2 l - det, shifted by l = t + tr/3.
    let shift = tr.clone() / three.clone();
    let p = s2.clone() - tr.square() / three.clone();
    let q = -(two.clone() * tr.clone() * tr.square() / S::from_i64(27)) + tr.clone() * s2.clone() / three.clone()
        - det.clone();
    // Discriminant of t^3 + p t + q, scaled: -(4p^3 + 27q^2).
    let disc = -(S::from_i64(4) * p.clone() * p.square() + S::from_i64(27) * q.square());
    let scale = (S::from_i64(4) * p.clone() * p.square()).abs() + (S::from_i64(27) * q.square()).abs();
    let mut roots: Vec<S> = if disc.signum() >= 0 || disc.negligible(&scale, 1e3 * S::eps()) {
        if p.is_zero() {
            vec![shift.clone(); 3]
        } else {
            let pn = -p.clone();
            let r = two.clone() * (pn.clone() / three.clone()).sqrt();
            let arg = three.clone() * q.clone() / (p.clone() * r.clone());
            let arg = if arg > S::one() {
                S::one()
            } else if arg < -S::one() {
                -S::one()
            } else {
                arg
            };
            let phi = arg.acos() / three.clone();
            let w = two.clone() * S::pi() / three.clone();
            (0..3)
                .map(|k| r.clone() * (phi.clone() - w.clone() * S::from_i64(k)).cos() + shift.clone())
                .collect()
        }
    } else {
        // One real root (Cardano), complex pair with modulus sqrt(det / root).
        let sq = (q.square() / S::from_i64(4) + p.clone() * p.square() / S::from_i64(27)).sqrt();
        let u = real_cbrt(&(-q.clone() / two.clone() + sq.clone()));
        let v = real_cbrt(&(-q.clone() / two.clone() - sq));
        let mut x = u + v + shift;
        newton(&mut x, &tr, &s2, &det);
        let rm = x.abs().to_f64();
        let cm = (det.clone() / x).abs().sqrt().to_f64();
        let mut moduli = [rm, cm, cm];
        moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return Err(Error::ComplexSpectrum { moduli });
    };
    for x in roots.iter_mut() {
        newton(x, &tr, &s2, &det);
    }
    polish_clusters(&mut roots, &tr, &s2, &det);
    roots.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
    let pairs: Vec<(S, Vec3<S>)> = roots.into_iter().map(|l| (l.clone(), eigenvector(m, &l))).collect();
    let moduli = [pairs[0].0.abs().to_f64(), pairs[1].0.abs().to_f64(), pairs[2].0.abs().to_f64()];
    Ok(Spectrum { gaps: gaps_of(&moduli), moduli, pairs })
}

/// A double root of the characteristic polynomial is a simple root of its
/// derivative, and a triple root is `tr / 3`; both are far better conditioned.
fn polish_clusters<S: RealScalar>(roots: &mut [S], tr: &S, s2: &S, det: &S) {
    let close = |a: &S, b: &S| {
        let m = a.abs().to_f64().max(b.abs().to_f64());
        (a.clone() - b.clone()).abs().to_f64() <= 1e-5 * m
    };
    let p = |x: &S| (((x.clone() - tr.clone()) * x.clone() + s2.clone()) * x.clone() - det.clone()).abs();
    // Rounding level of the evaluation, below which residuals do not rank candidates.
    let noise = |x: &S| {
        let a = x.abs();
        let terms = ((a.clone() + tr.abs()) * a.clone() + s2.abs()) * a + det.abs();
        terms * S::from_f64(16.0 * S::eps())
    };
    let no_worse = |c: &S, r: &S| p(c) <= p(r) + noise(r);
    let three = S::from_i64(3);
    if close(&roots[0], &roots[1]) && close(&roots[1], &roots[2]) {
        let c = tr.clone() / three;
        if roots.iter().all(|r| no_worse(&c, r)) {
            roots.iter_mut().for_each(|r| *r = c.clone());
        }
        return;
    }
    let disc = tr.square() - three.clone() * s2.clone();
    if disc.signum() < 0 {
        return;
    }
    let sq = disc.sqrt();
    let crit = [(tr.clone() + sq.clone()) / three.clone(), (tr.clone() - sq) / three];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if close(&roots[i], &roots[j]) {
            let mid = (roots[i].clone() + roots[j].clone()) / S::from_i64(2);
            let c = crit
                .iter()
                .min_by(|a, b| {
                    let da = (mid.clone() - (*a).clone()).abs();
                    let db = (mid.clone() - (*b).clone()).abs();
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap()
                .clone();
            if no_worse(&c, &roots[i]) && no_worse(&c, &roots[j]) {
                roots[i] = c.clone();
                roots[j] = c;
            }
            return;
        }
    }
}

/// Newton steps on the characteristic polynomial, kept only while they reduce
/// the residual: near a double root `f / f'` is rounding noise over almost zero.
fn newton<S: RealScalar>(x: &mut S, tr: &S, s2: &S, det: &S) {
    let f = |x: &S| ((x.clone() - tr.clone()) * x.clone() + s2.clone()) * x.clone() - det.clone();
    for _ in 0..2 {
        let fx = f(x);
        let df = S::from_i64(3) * x.square() - S::from_i64(2) * tr.clone() * x.clone() + s2.clone();
        if df.is_zero() {
            return;
        }
        let nx = x.clone() - fx.clone() / df;
        if !nx.to_f64().is_finite() || f(&nx).abs() >= fx.abs() {
            return;
        }
        *x = nx;
    }
}

fn eigenvector<S: RealScalar>(m: &Mat3<S>, l: &S) -> Vec3<S> {
    let shifted = m.clone() - Mat3::identity().scale(l);
    let rows = [shifted.row(0), shifted.row(1), shifted.row(2)];
    let mut best = rows[0].cross(&rows[1]);
    for (a, b) in [(0, 2), (1, 2)] {
        let c = rows[a].cross(&rows[b]);
        if c.norm_sq() > best.norm_sq() {
            best = c;
        }
    }
    let scale = rows.iter().map(|r| r.norm_sq()).fold(S::zero(), |a, b| a + b);
    if best.norm_sq().negligible(&(scale.clone() * scale.clone()), 1e3 * S::eps()) {
        // Rank at most one: any vector orthogonal to the largest row.
        let r = rows.iter().max_by(|a, b| a.norm_sq().partial_cmp(&b.norm_sq()).unwrap()).unwrap();
        if r.norm_sq().is_zero() {
            return Vec3::from_i64([1, 0, 0]);
        }
        let axes = [Vec3::from_i64([1, 0, 0]), Vec3::from_i64([0, 1, 0]), Vec3::from_i64([0, 0, 1])];
        best = axes
            .iter()
            .map(|e| r.cross(e))
            .max_by(|a, b| a.norm_sq().partial_cmp(&b.norm_sq()).unwrap())
            .unwrap();
    }
    best.normalize_max()
}

/// Determinant of a square matrix by Gaussian elimination with partial pivoting.
pub fn det_dense<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    let mut det = S::one();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        if a[piv][c].is_zero() {
            return S::zero();
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det = det * pv.clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() / pv.clone();
            for k in c..n {
                let v = a[r][k].clone() - f.clone() * a[c][k].clone();
                a[r][k] = v;
            }
        }
    }
    det
}

/// Basis of the right nullspace of a dense matrix, by row reduction with full
/// pivoting. Pivots at or below `tol` times the largest entry count as zero.
pub fn nullspace<S: Scalar>(mut a: Vec<Vec<S>>, tol: f64) -> Vec<Vec<S>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut colperm: Vec<usize> = (0..cols).collect();
    let scale = a.iter().flatten().fold(S::zero(), |m, x| if x.abs() > m { x.abs() } else { m });
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (rank, rank);
        for i in rank..rows {
            for j in rank..cols {
                if a[i][j].abs() > a[best.0][best.1].abs() {
                    best = (i, j);
                }
            }
        }
        let pv = a[best.0][best.1].clone();
        if pv.is_zero() || pv.negligible(&scale, tol) {
            break;
        }
        a.swap(rank, best.0);
        for r in a.iter_mut() {
            r.swap(rank, best.1);
        }
        colperm.swap(rank, best.1);
        for k in 0..cols {
            let v = a[rank][k].clone() / pv.clone();
            a[rank][k] = v;
        }
        for r in 0..rows {
            if r == rank || a[r][rank].is_zero() {
                continue;
            }
            let f = a[r][rank].clone();
            for k in 0..cols {
                let v = a[r][k].clone() - f.clone() * a[rank][k].clone();
                a[r][k] = v;
            }
        }
        rank += 1;
    }
    // Free columns rank..cols; pivot variable i equals -sum a[i][free] * free.
    (rank..cols)
        .map(|f| {
            let mut v = vec![S::zero(); cols];
            v[colperm[f]] = S::one();
            for i in 0..rank {
                v[colperm[i]] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{MpFloat, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn inverse_of_identity_and_diagonal() {
        let id = Mat3::<Rational>::identity();
        assert_eq!(id.inverse().unwrap(), id);
        let d = Mat3::diag(q(2, 1), q(1, 1), q(1, 1));
        assert_eq!(d.inverse().unwrap(), Mat3::diag(q(1, 2), q(1, 1), q(1, 1)));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Mat3::<Rational>::from_i64([[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
        let f = Mat3::<f64>::from_i64([[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert_eq!(f.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn normalize_det_one_uses_real_cube_root() {
        let m = Mat3::<f64>::diag(8.0, 1.0, 1.0);
        let n = normalize_det_one(&m).unwrap();
        assert!((n.0[0][0] - 4.0).abs() < 1e-15 && (n.0[1][1] - 0.5).abs() < 1e-15);
        let neg = Mat3::<f64>::diag(-8.0, 1.0, 1.0);
        assert!((normalize_det_one(&neg).unwrap().det() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_spectrum() {
        let m = Mat3::<f64>::diag(1.0, 2.0, 3.0);
        let s = eigen_real(&m).unwrap();
        let vals: Vec<f64> = s.pairs.iter().map(|p| p.0).collect();
        for (v, e) in vals.iter().zip([1.0, 2.0, 3.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        assert!((s.gaps[0] - 2.0).abs() < 1e-12 && (s.gaps[1] - 1.5).abs() < 1e-12);
        for (l, v) in &s.pairs {
            let r = m.mul_vec(v) - v.scale(l);
            assert!(r.norm() < 1e-12 * v.norm());
        }
    }

    #[test]
    fn unipotent_up_to_sign_has_equal_moduli() {
        let m = Mat3::<MpFloat>::from_i64([[-1, 1, 0], [0, -1, 0], [0, 0, 1]]);
        let moduli = match eigen_real(&m) {
            Ok(s) => s.moduli,
            Err(Error::ComplexSpectrum { moduli }) => moduli,
            Err(e) => panic!("{e}"),
        };
        for x in moduli {
            assert!((x - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rotation_has_complex_spectrum() {
        let m = Mat3::<f64>::from_i64([[1, 0, 0], [0, 0, -1], [0, 1, 0]]);
        assert!(matches!(eigen_real(&m), Err(Error::ComplexSpectrum { .. })));
    }

    #[test]
    fn repeated_eigenvalue_gets_an_eigenvector() {
        let m = Mat3::<f64>::diag(1.0, 1.0, 2.0);
        let s = eigen_real(&m).unwrap();
        for (l, v) in &s.pairs {
            let r = m.mul_vec(v) - v.scale(l);
            assert!(r.norm() < 1e-9 * v.norm(), "{l} {v:?}");
        }
    }

    #[test]
    fn dense_determinant_matches_3x3() {
        let m = Mat3::<Rational>::from_i64([[2, -1, 3], [0, 4, 1], [5, 2, -2]]);
        let rows: Vec<Vec<Rational>> = m.0.iter().map(|r| r.to_vec()).collect();
        assert_eq!(det_dense(rows), m.det());
    }

    #[test]
    fn nullspace_of_rank_two() {
        let a: Vec<Vec<Rational>> = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
            vec![q(0, 1), q(1, 1), q(1, 1)],
        ];
        let ns = nullspace(a.clone(), 0.0);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let s = row.iter().zip(&ns[0]).fold(q(0, 1), |acc, (x, y)| acc + x.clone() * y.clone());
            assert_eq!(s, q(0, 1));
        }
    }
}
