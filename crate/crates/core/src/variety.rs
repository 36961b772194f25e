//! Trace coordinates on pairs of order-three matrices and the Jacobian
//! determinants showing the deformation family is a smooth open piece of the
//! representation variety.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_dense, normalize_det_one, Mat3};
use crate::marked_box::{BoxModuli, Lambda};
use crate::representation::{matrix_a, RepresentationParams};
use crate::scalar::{MpFloat, RealScalar, Scalar};

/// Off-diagonal positions in row-major order.
const OFF_DIAG: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

/// `det - 1`, the trace, and the second elementary symmetric function of the
/// eigenvalues (equal to `tr(M^{-1})` when `det M = 1`).
fn psi_triple<S: Scalar>(m: &Mat3<S>) -> [S; 3] {
    let a = &m.0;
    let s2 = a[0][0].clone() * a[1][1].clone() + a[1][1].clone() * a[2][2].clone() + a[2][2].clone() * a[0][0].clone()
        - a[0][1].clone() * a[1][0].clone()
        - a[1][2].clone() * a[2][1].clone()
        - a[0][2].clone() * a[2][0].clone();
    [m.det() - S::one(), m.trace(), s2]
}

/// The six polynomials cutting out pairs of order-three elements of `SL(3)`.
pub fn psi_eval<S: Scalar>(a: &Mat3<S>, b: &Mat3<S>) -> [S; 6] {
    let [a1, a2, a3] = psi_triple(a);
    let [b1, b2, b3] = psi_triple(b);
    [a1, a2, a3, b1, b2, b3]
}

/// `(tr A = tr A^{-1} = 0, A^3 = Id)` for `det A = 1`, `A != Id`.
pub fn order3_trace_check<S: Scalar>(a: &Mat3<S>, tol: f64) -> Result<(bool, bool)> {
    let id = Mat3::identity();
    let scale = S::one() + a.max_abs();
    let close = |x: &S| x.negligible(&scale, tol);
    if (a.clone() - id.clone()).0.iter().flatten().all(close) {
        return Err(Error::IdentityInput);
    }
    let inv = a.inverse()?;
    let traces = close(&a.trace()) && close(&inv.trace());
    let cube = (a.pow(3) - id).0.iter().flatten().all(|x| x.negligible(&(scale.clone() * scale.square()), tol));
    Ok((traces, cube))
}

/// `pi(M)`: the determinant-one representative.
pub fn pi<S: RealScalar>(m: &Mat3<S>) -> Result<Mat3<S>> {
    normalize_det_one(m)
}

/// `(pi(A), pi(B))` of the deformed representation.
pub fn family_point<S: RealScalar>(p: &RepresentationParams<S>) -> Result<(Mat3<S>, Mat3<S>)> {
    let m = p.matrices()?;
    Ok((pi(&m.a)?, pi(&m.b)?))
}

/// Extended map on 18 variables (entries of `A` then `B`, row-major): the six
/// trace polynomials followed by the off-diagonal entries of `A` and of `B`.
pub fn psi_tilde<S: Scalar>(x: &[S]) -> Vec<S> {
    let a = mat_from(&x[..9]);
    let b = mat_from(&x[9..18]);
    let mut out: Vec<S> = psi_eval(&a, &b).to_vec();
    out.extend(OFF_DIAG.iter().map(|&(i, j)| a.0[i][j].clone()));
    out.extend(OFF_DIAG.iter().map(|&(i, j)| b.0[i][j].clone()));
    out
}

/// Conjugation map on 13 variables `(zeta_t, zeta_b, eps, delta, g)` with `g`
/// row-major: off-diagonal entries of `g pi(A) g^{-1}` and `g pi(B) g^{-1}`, then `det g`.
pub fn phi_tilde<S: RealScalar>(x: &[S]) -> Result<Vec<S>> {
    let m = BoxModuli::new(x[0].clone(), x[1].clone())?;
    let l = Lambda::from_eps_delta(x[2].clone(), x[3].clone());
    let g = mat_from(&x[4..13]);
    let (a, b) = family_point(&RepresentationParams::new(m, l))?;
    let gi = g.inverse()?;
    let ca = &(&g * &a) * &gi;
    let cb = &(&g * &b) * &gi;
    let mut out: Vec<S> = OFF_DIAG.iter().map(|&(i, j)| ca.0[i][j].clone()).collect();
    out.extend(OFF_DIAG.iter().map(|&(i, j)| cb.0[i][j].clone()));
    out.push(g.det());
    Ok(out)
}

fn mat_from<S: Scalar>(x: &[S]) -> Mat3<S> {
    Mat3([
        [x[0].clone(), x[1].clone(), x[2].clone()],
        [x[3].clone(), x[4].clone(), x[5].clone()],
        [x[6].clone(), x[7].clone(), x[8].clone()],
    ])
}

fn flatten<S: Scalar>(m: &Mat3<S>) -> Vec<S> {
    m.0.iter().flatten().cloned().collect()
}

/// Determinant of the central finite-difference Jacobian of a square map.
pub fn fd_jacobian_det<S, F>(f: F, x: &[S], step: f64) -> Result<S>
where
    S: Scalar,
    F: Fn(&[S]) -> Result<Vec<S>>,
{
    let n = x.len();
    let h = S::from_f64(step);
    let two_h = h.clone() + h.clone();
    let mut cols: Vec<Vec<S>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[k] = xp[k].clone() + h.clone();
        xm[k] = xm[k].clone() - h.clone();
        let (fp, fm) = (f(&xp)?, f(&xm)?);
        if fp.len() != n {
            return Err(Error::InternalInconsistency("finite-difference map is not square"));
        }
        cols.push(fp.iter().zip(&fm).map(|(p, m)| (p.clone() - m.clone()) / two_h.clone()).collect());
    }
    let rows: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    Ok(det_dense(rows))
}

/// Closed form of `|det D psi_tilde|` at the deformation family.
pub fn jacobian_psi_closed<S: RealScalar>(m: &BoxModuli<S>, eps: &S, delta: &S) -> S {
    let (t, b) = (m.zeta_t.clone(), m.zeta_b.clone());
    let o = S::one();
    let two = S::from_i64(2);
    let tb = t.clone() * b.clone();
    let e2 = two.clone() * eps.clone();
    let inner = two.clone() * e2.cosh() * (o.clone() + tb.clone())
        - e2.sinh()
            * ((-delta.clone()).exp() * (two.clone() + tb.clone() - t.square())
                + delta.exp() * (two.clone() + tb.clone() - b.square()));
    let num = S::from_i64(9) * (o.clone() + tb.clone()) * (o.clone() - tb.clone()).square() * inner;
    let den = two * (o.clone() - t.square()).square() * (o - b.square()).square();
    (num / den).abs()
}

/// Closed form of `|det D phi_tilde|` at `lambda = 0`, `g = Id`.
pub fn jacobian_phi_closed<S: Scalar>(m: &BoxModuli<S>) -> S {
    let (t2, b2) = (m.zeta_t.square(), m.zeta_b.square());
    let o = S::one();
    let num = S::from_i64(288)
        * (o.clone() - t2.clone() * b2.clone()).square()
        * (S::from_i64(2) - t2.clone() - b2.clone())
        * (t2.clone() * (o.clone() - b2.clone()) + b2.clone() * (o.clone() - t2.clone()));
    let p5 = |x: S| {
        let y = o.clone() - x;
        y.square().square() * y
    };
    (num / (p5(t2) * p5(b2))).abs()
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobianReport {
    pub zeta_t: f64,
    pub zeta_b: f64,
    pub eps: f64,
    pub delta: f64,
    pub closed_form: f64,
    pub finite_difference: f64,
    pub relative_error: f64,
}

impl JacobianReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.relative_error <= tol && self.closed_form > 0.0
    }
}

/// Finite-difference step used by both Jacobian checks.
pub const FD_STEP: f64 = 1e-6;

fn rel(a: &MpFloat, b: &MpFloat) -> f64 {
    ((a.clone() - b.clone()).abs() / b.abs()).to_f64()
}

/// Compares the closed form for `psi_tilde` with central differences at
/// `(pi(A), pi(B^lambda))`, in extended precision.
pub fn jacobian_check_psi(m: &BoxModuli<MpFloat>, eps: &MpFloat, delta: &MpFloat) -> Result<JacobianReport> {
    let lambda = Lambda::from_eps_delta(eps.clone(), delta.clone());
    if !lambda.in_region() {
        return Err(Error::OutsideRegion);
    }
    if !m.is_convex() {
        return Err(Error::NotConvex);
    }
    let (a, b) = family_point(&RepresentationParams::new(m.clone(), lambda))?;
    let mut x = flatten(&a);
    x.extend(flatten(&b));
    let fd = fd_jacobian_det(|y: &[MpFloat]| Ok(psi_tilde(y)), &x, FD_STEP)?.abs();
    let closed = jacobian_psi_closed(m, eps, delta);
    Ok(JacobianReport {
        zeta_t: m.zeta_t.to_f64(),
        zeta_b: m.zeta_b.to_f64(),
        eps: eps.to_f64(),
        delta: delta.to_f64(),
        closed_form: closed.to_f64(),
        finite_difference: fd.to_f64(),
        relative_error: rel(&fd, &closed),
    })
}

/// Compares the closed form for `phi_tilde` with central differences at
/// `lambda = 0`, `g = Id`. The special box is excluded, where the Jacobian vanishes.
pub fn jacobian_check_phi(m: &BoxModuli<MpFloat>) -> Result<JacobianReport> {
    if m.is_special() {
        return Err(Error::SpecialBox);
    }
    if !m.is_convex() {
        return Err(Error::NotConvex);
    }
    let z = MpFloat::new(0);
    let mut x = vec![m.zeta_t.clone(), m.zeta_b.clone(), z.clone(), z];
    x.extend(flatten(&Mat3::<MpFloat>::identity()));
    let fd = fd_jacobian_det(|y: &[MpFloat]| phi_tilde(y), &x, FD_STEP)?.abs();
    let closed = jacobian_phi_closed(m);
    Ok(JacobianReport {
        zeta_t: m.zeta_t.to_f64(),
        zeta_b: m.zeta_b.to_f64(),
        eps: 0.0,
        delta: 0.0,
        closed_form: closed.to_f64(),
        finite_difference: fd.to_f64(),
        relative_error: rel(&fd, &closed),
    })
}

/// Largest `|psi_i|` at the family point, for the vanishing check.
pub fn psi_residual<S: RealScalar>(p: &RepresentationParams<S>) -> Result<f64> {
    let (a, b) = family_point(p)?;
    Ok(psi_eval(&a, &b).iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max))
}

/// `pi(A)` is of order three exactly when its traces vanish; checked on the image of `R`.
pub fn order3_on_family<S: RealScalar>(m: &BoxModuli<S>, tol: f64) -> Result<(bool, bool)> {
    order3_trace_check(&pi(&matrix_a(m)?)?, tol)
}
