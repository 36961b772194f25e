//! Matrix images of the modular group: the undeformed representation with
//! values in projective symmetries, its deformation on the index-2 subgroup,
//! box labels of Farey edges, the extension curve and the symmetric intertwiner.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigen_real, nullspace, Mat3, Spectrum};
use crate::marked_box::{BoxModuli, Lambda, OvermarkedBox};
use crate::modular::{label_word, FareyGeodesic, GroupWord, Letter};
use crate::projective::{ProjSymmetry, SymmetryKind};
use crate::scalar::{RealScalar, Scalar};

#[derive(Clone, Debug)]
pub struct RepresentationParams<S> {
    pub moduli: BoxModuli<S>,
    pub lambda: Lambda<S>,
}

#[derive(Clone, Debug)]
pub struct RepMatrices<S> {
    pub a: Mat3<S>,
    pub b: Mat3<S>,
    pub d: Mat3<S>,
    pub sigma: Mat3<S>,
}

fn check_moduli<S: Scalar>(m: &BoxModuli<S>) -> Result<()> {
    if m.zeta_t.abs() == S::one() || m.zeta_b.abs() == S::one() {
        return Err(Error::InvalidModuli);
    }
    Ok(())
}

/// Image of `R`: the order-three transformation cycling the base box.
pub fn matrix_a<S: Scalar>(m: &BoxModuli<S>) -> Result<Mat3<S>> {
    check_moduli(m)?;
    let (t, b) = (m.zeta_t.clone(), m.zeta_b.clone());
    let (o, z) = (S::one(), S::zero());
    let tb = t.clone() * b.clone();
    Ok(Mat3([
        [tb.clone() - o.clone(), t.clone() * (o.clone() - tb.clone()), b.clone() - t.clone()],
        [b - t.clone(), o.clone() - tb.clone(), tb - o.clone()],
        [z.clone(), o - t.square(), z],
    ]))
}

/// Matrix of the polarity that is the image of `I`.
pub fn matrix_d<S: Scalar>(m: &BoxModuli<S>) -> Result<Mat3<S>> {
    check_moduli(m)?;
    let (t, b) = (m.zeta_t.clone(), m.zeta_b.clone());
    let o = S::one();
    let tb = t.clone() * b.clone();
    Ok(Mat3([
        [o.clone(), -t.clone(), -b.clone()],
        [-t, o.clone(), tb.clone()],
        [-b, tb, o],
    ]))
}

pub fn matrix_sigma<S: Scalar>(l: &Lambda<S>) -> Mat3<S> {
    l.sigma()
}

/// `P = D^{-1} A^{-T} D A` and the matrix `Q` conjugating it to a signed Jordan block.
pub fn non_anosov_witness<S: Scalar>(m: &BoxModuli<S>) -> Result<(Mat3<S>, Mat3<S>)> {
    let a = matrix_a(m)?;
    let d = matrix_d(m)?;
    let p = &(&(&d.inverse()? * &a.inverse_transpose()?) * &d) * &a;
    let zb = m.zeta_b.clone();
    let (o, z) = (S::one(), S::zero());
    let q = Mat3([
        [-zb.clone(), z.clone(), o.clone()],
        [z.clone(), S::from_i64(2), z.clone()],
        [o, z, -zb],
    ]);
    Ok((p, q))
}

impl<S: Scalar> RepresentationParams<S> {
    pub fn new(moduli: BoxModuli<S>, lambda: Lambda<S>) -> Self {
        RepresentationParams { moduli, lambda }
    }

    pub fn matrices(&self) -> Result<RepMatrices<S>> {
        let a = matrix_a(&self.moduli)?;
        let d = matrix_d(&self.moduli)?;
        let sigma = self.lambda.sigma();
        let b0 = &(&d.inverse()? * &a.inverse_transpose()?) * &d;
        let b = &(&sigma.inverse()? * &b0) * &sigma;
        Ok(RepMatrices { a, b, d, sigma })
    }

    pub fn base_box(&self) -> Result<OvermarkedBox<S>> {
        OvermarkedBox::from_moduli(&self.moduli)
    }

    /// Image of a word of the index-2 subgroup, with `R -> A` and `I R I -> B`.
    pub fn evaluate(&self, w: &GroupWord) -> Result<Mat3<S>> {
        let m = self.matrices()?;
        evaluate_with(&m.a, &m.b, w)
    }

    /// `h(eps, delta)`; its zero set is where the deformation extends to the whole group.
    pub fn curve_h(&self) -> S {
        let (t, b) = (&self.moduli.zeta_t, &self.moduli.zeta_b);
        let l = &self.lambda;
        let (ce, se, cd, sd) = (l.cosh_eps(), l.sinh_eps(), l.cosh_delta(), l.sinh_delta());
        let (t2, b2) = (t.square(), b.square());
        let two = S::from_i64(2);
        let k = t2.clone() + b2.clone() - two.clone() * t2.clone() * b2.clone();
        k * ce.clone() * sd * (two * ce.clone() * cd.clone() - se.clone())
            - t.clone() * b.clone() * (t2 - b2) * se.clone() * (ce * cd - se - S::one())
    }

    /// `det(Id - A B)`, the obstruction to a symmetric intertwiner.
    pub fn obstruction(&self) -> Result<(S, S)> {
        let m = self.matrices()?;
        let ab = &m.a * &m.b;
        let n = ab.frobenius_sq();
        Ok(((Mat3::identity() - ab).det(), n))
    }

    /// Symmetric `S` with `A^{-T} S = S B`.
    pub fn extension_intertwiner(&self) -> Result<Intertwiner<S>> {
        let m = self.matrices()?;
        if self.moduli.is_special() {
            let s = m.sigma.clone();
            let residual = intertwiner_residual(&m.a, &m.b, &s)?;
            return Ok(Intertwiner { s, residual, invertible: true, obstruction: 0.0, nullity: 1 });
        }
        let (obs, n2) = self.obstruction()?;
        let scale = n2.clone() * n2.clone() * n2;
        // |det| against 1e-10 ||AB||_F^3, compared in squares to stay in the field.
        let zero = if S::EXACT { obs.is_zero() } else { obs.square().negligible(&scale, 1e-20) };
        if !zero {
            return Err(Error::NoSolution(obs.to_f64()));
        }
        let ait = m.a.inverse_transpose()?;
        let basis = symmetric_intertwiners(&ait, &m.b, if S::EXACT { 0.0 } else { 1e-9 });
        let nullity = basis.len();
        let s = basis.into_iter().next().ok_or(Error::NoSolution(obs.to_f64()))?;
        let residual = intertwiner_residual(&m.a, &m.b, &s)?;
        let mx = s.max_abs();
        let invertible = !s.det().negligible(&(mx.clone() * mx.square()), 1e-9);
        Ok(Intertwiner { s, residual, invertible, obstruction: obs.to_f64(), nullity })
    }
}

#[derive(Clone, Debug)]
pub struct Intertwiner<S> {
    pub s: Mat3<S>,
    /// `||A^{-T} S - S B|| / ||S||` (Frobenius).
    pub residual: f64,
    pub invertible: bool,
    pub obstruction: f64,
    /// Dimension of the solution space; above one the choice of `S` is ambiguous.
    pub nullity: usize,
}

fn intertwiner_residual<S: Scalar>(a: &Mat3<S>, b: &Mat3<S>, s: &Mat3<S>) -> Result<f64> {
    let ait = a.inverse_transpose()?;
    let r = &ait * s - s * b;
    Ok((r.frobenius_sq().to_f64() / s.frobenius_sq().to_f64()).sqrt())
}

const SYM_IDX: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Unknown index of `S_ij` in the 9x6 system.
const SYM_POS: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

/// Basis of symmetric solutions of `L S = S M`, from the 9x6 linear system.
pub fn symmetric_intertwiners<S: Scalar>(l: &Mat3<S>, m: &Mat3<S>, tol: f64) -> Vec<Mat3<S>> {
    let pos = SYM_POS;
    let mut rows = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let mut row = vec![S::zero(); 6];
            for k in 0..3 {
                // (L S)_{ij} = sum_k L_ik S_kj
                let c = row[pos[k][j]].clone() + l.0[i][k].clone();
                row[pos[k][j]] = c;
                // (S M)_{ij} = sum_k S_ik M_kj
                let c = row[pos[i][k]].clone() - m.0[k][j].clone();
                row[pos[i][k]] = c;
            }
            rows.push(row);
        }
    }
    nullspace(rows, tol)
        .into_iter()
        .map(|v| {
            let mut s = Mat3::zero();
            for (k, &(i, j)) in SYM_IDX.iter().enumerate() {
                s.0[i][j] = v[k].clone();
                s.0[j][i] = v[k].clone();
            }
            s
        })
        .collect()
}

/// Image of a word of the index-2 subgroup under `R -> a`, `I R I -> b`:
/// letters between an odd and the next I map through `b`.
pub fn evaluate_with<S: Scalar>(a: &Mat3<S>, b: &Mat3<S>, w: &GroupWord) -> Result<Mat3<S>> {
    if !w.in_subgroup_o()? {
        return Err(Error::NotInSubgroupO);
    }
    let a2 = a * a;
    let b2 = b * b;
    let mut inside = false;
    let mut acc = Mat3::identity();
    for &l in &w.0 {
        acc = match (l, inside) {
            (Letter::I, _) => {
                inside = !inside;
                continue;
            }
            (Letter::R, false) => &acc * a,
            (Letter::R2, false) => &acc * &a2,
            (Letter::R, true) => &acc * b,
            (Letter::R2, true) => &acc * &b2,
        };
    }
    Ok(acc)
}

/// Undeformed image of any word: `R` to the transformation `A`, `I` to the polarity `D`.
pub fn evaluate_schwartz<S: Scalar>(m: &BoxModuli<S>, w: &GroupWord) -> Result<ProjSymmetry<S>> {
    let a = ProjSymmetry::transformation(matrix_a(m)?);
    let a2 = a.compose(&a)?;
    let d = ProjSymmetry::duality(matrix_d(m)?);
    let mut acc = ProjSymmetry::identity();
    for &l in &w.0 {
        let g = match l {
            Letter::I => &d,
            Letter::R => &a,
            Letter::R2 => &a2,
        };
        acc = acc.compose(g)?;
    }
    Ok(acc)
}

/// Box transformation attached to a word: `I -> i^lambda`, `R -> varrho_1`,
/// composed as maps (the rightmost letter acts first).
pub fn box_word<S: Scalar>(b: &OvermarkedBox<S>, w: &GroupWord, l: &Lambda<S>) -> Result<OvermarkedBox<S>> {
    let mut out = b.clone();
    for &x in w.0.iter().rev() {
        out = match x {
            Letter::I => out.i_lambda(l)?,
            Letter::R => rho1_lambda(&out, l)?,
            Letter::R2 => rho1_lambda(&rho1_lambda(&out, l)?, l)?,
        };
    }
    Ok(out)
}

/// `varrho_1 = i^lambda tau1^lambda`; equal to `i tau1` on marked boxes.
fn rho1_lambda<S: Scalar>(b: &OvermarkedBox<S>, l: &Lambda<S>) -> Result<OvermarkedBox<S>> {
    b.tau1_lambda(l)?.i_lambda(l)
}

/// Box label of a Farey edge: the label word applied to the base box.
pub fn edge_label<S: Scalar>(base: &OvermarkedBox<S>, e: &FareyGeodesic, l: &Lambda<S>) -> Result<OvermarkedBox<S>> {
    box_word(base, &label_word(e), l)
}

/// `label(gen e) = rho(gen)(label(e))` for the undeformed representation, as
/// marked boxes.
pub fn schwartz_equivariance<S: Scalar>(m: &BoxModuli<S>, e: &FareyGeodesic, gen: &GroupWord) -> Result<bool> {
    let base = OvermarkedBox::from_moduli(m)?;
    let l = Lambda::zero();
    let lhs = edge_label(&base, &e.mobius(gen), &l)?;
    let lab = edge_label(&base, e, &l)?;
    let s = evaluate_schwartz(m, gen)?;
    let rhs = match s.kind {
        SymmetryKind::Transformation => lab.transform(&s.matrix)?,
        SymmetryKind::Duality => lab.dualize(&s.matrix)?,
    };
    Ok(lhs.eq_marked(&rhs))
}

/// Bisection for `delta` with `h(eps, delta) = 0`, searching symmetric brackets
/// around zero up to `[-1, 1]`, then `[-2, 2]` and `[-4, 4]`.
pub fn solve_delta_h<S: RealScalar>(m: &BoxModuli<S>, eps: &S) -> Result<S> {
    if m.is_special() {
        return Err(Error::SpecialBox);
    }
    let h = |d: &S| RepresentationParams::new(m.clone(), Lambda::from_eps_delta(eps.clone(), d.clone())).curve_h();
    let mut radii: Vec<f64> = (0..=10).map(|k| 2f64.powi(k - 10)).collect();
    radii.extend([2.0, 4.0]);
    for r in radii {
        let (mut lo, mut hi) = (S::from_f64(-r), S::from_f64(r));
        let (mut hlo, hhi) = (h(&lo), h(&hi));
        if hlo.is_zero() {
            return Ok(lo);
        }
        if hhi.is_zero() {
            return Ok(hi);
        }
        if hlo.signum() == hhi.signum() {
            continue;
        }
        for _ in 0..400 {
            let mid = (lo.clone() + hi.clone()) / S::from_i64(2);
            let hm = h(&mid);
            if hm.is_zero() || (hi.clone() - lo.clone()).to_f64().abs() < 4.0 * S::eps() {
                return Ok(mid);
            }
            if hm.signum() == hlo.signum() {
                lo = mid;
                hlo = hm;
            } else {
                hi = mid;
            }
        }
        return Ok((lo + hi) / S::from_i64(2));
    }
    Err(Error::NoBracket)
}

/// Outcome of the rotation criterion for `B = G^{-1} A^{-T} G`.
#[derive(Clone, Debug, Serialize)]
pub struct RotationOutcome {
    pub det_vanishes: bool,
    pub symmetric_exists: bool,
    pub determinant: f64,
    pub nullity: usize,
}

impl RotationOutcome {
    pub fn consistent(&self) -> bool {
        self.det_vanishes == self.symmetric_exists
    }
}

/// Checks that `A` is conjugate to `mu R_theta` with `0 < theta < pi`, without roots:
/// with `x = tr A / cbrt(det A)` it needs `sigma_2^3 = tr^3 det` and `-1 < x < 3`.
pub fn check_rotation<S: Scalar>(a: &Mat3<S>, tol: f64) -> Result<()> {
    let (tr, s2, det) = (a.trace(), a.sigma2(), a.det());
    if det.is_zero() {
        return Err(Error::NotARotation);
    }
    let lhs = s2.clone() * s2.square();
    let rhs = tr.clone() * tr.square() * det.clone();
    let scale = lhs.abs() + rhs.abs() + det.square();
    if !(lhs.clone() - rhs).negligible(&scale, tol) {
        return Err(Error::NotARotation);
    }
    let x3 = tr.clone() * tr.square() / det;
    let margin = S::from_f64(tol);
    if !(x3 > S::from_i64(-1) + margin.clone() && x3 < S::from_i64(27) - margin) {
        return Err(Error::NotARotation);
    }
    Ok(())
}

/// Evaluates both sides of the rotation criterion: `det(Id - A B) = 0` and the
/// existence of a nonzero symmetric `S` with `S B = A^{-T} S`.
pub fn rotation_criterion<S: Scalar>(a: &Mat3<S>, g: &Mat3<S>) -> Result<RotationOutcome> {
    let tol = if S::EXACT { 0.0 } else { 1e-9 };
    check_rotation(a, tol)?;
    let ait = a.inverse_transpose()?;
    let b = &(&g.inverse()? * &ait) * g;
    let ab = a * &b;
    let n = ab.frobenius_sq();
    let det = (Mat3::identity() - ab).det();
    let det_vanishes = if S::EXACT { det.is_zero() } else { det.square().negligible(&(n.clone() * n.clone() * n), 1e-20) };
    let basis = symmetric_intertwiners(&ait, &b, tol);
    Ok(RotationOutcome {
        det_vanishes,
        symmetric_exists: !basis.is_empty(),
        determinant: det.to_f64(),
        nullity: basis.len(),
    })
}

/// `Id - A B = A S^{-1} (S A^{-1} - (S A^{-1})^T)` for `B = S^{-1} A^{-T} S`;
/// returns both sides.
pub fn antisymmetry_identity<S: Scalar>(a: &Mat3<S>, s: &Mat3<S>) -> Result<(Mat3<S>, Mat3<S>)> {
    let si = s.inverse()?;
    let ai = a.inverse()?;
    let b = &(&si * &a.inverse_transpose()?) * s;
    let lhs = Mat3::identity() - a * &b;
    let sa = s * &ai;
    let rhs = &(a * &si) * &(sa.clone() - sa.transpose());
    Ok((lhs, rhs))
}

/// Spectrum of the image of a word; the eigenvalue moduli gaps measure loxodromy.
pub fn word_spectrum<S: RealScalar>(p: &RepresentationParams<S>, w: &GroupWord) -> Result<Spectrum<S>> {
    eigen_real(&p.evaluate(w)?)
}
