//! Seeded random inputs for property checks and the command line tools.

use num_bigint::BigInt;
use rand::Rng;

use crate::linalg::Mat3;
use crate::marked_box::{BoxModuli, Lambda, OvermarkedBox};
use crate::modular::{w_word, GroupWord, Letter, WLetter};
use crate::scalar::{Rational, Scalar};

/// Rational in `(-1, 1)` with denominator `den`, never `0` unless `allow_zero`.
fn unit_rational<R: Rng>(rng: &mut R, den: i64, allow_zero: bool) -> Rational {
    loop {
        let n = rng.gen_range(-(den - 1)..den);
        if n != 0 || allow_zero {
            return Rational::new(BigInt::from(n), BigInt::from(den));
        }
    }
}

/// Moduli of a convex box, both in `(-1, 1)`.
pub fn convex_moduli<R: Rng>(rng: &mut R) -> BoxModuli<Rational> {
    let den = rng.gen_range(2..40);
    BoxModuli::new(unit_rational(rng, den, true), unit_rational(rng, den, true)).expect("|zeta| < 1")
}

/// Random non-special convex moduli.
pub fn nonspecial_moduli<R: Rng>(rng: &mut R) -> BoxModuli<Rational> {
    loop {
        let m = convex_moduli(rng);
        if !m.is_special() {
            return m;
        }
    }
}

/// Invertible integer matrix with entries in `[-4, 4]`.
pub fn integer_gl3<R: Rng>(rng: &mut R) -> Mat3<Rational> {
    loop {
        let mut a = [[0i64; 3]; 3];
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(-4..=4);
            }
        }
        let m = Mat3::<Rational>::from_i64(a);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Convex overmarked box: a random projective image of a standard box.
pub fn convex_box<R: Rng>(rng: &mut R) -> OvermarkedBox<Rational> {
    let m = convex_moduli(rng);
    let g = integer_gl3(rng);
    OvermarkedBox::from_moduli(&m).and_then(|b| b.transform(&g)).expect("standard box is nondegenerate")
}

/// `(eps, delta)` drawn uniformly from a box and kept if it lies in the region.
pub fn lambda_in_region<R: Rng>(rng: &mut R) -> Lambda<f64> {
    loop {
        let eps = rng.gen_range(-0.8..0.0);
        let delta = rng.gen_range(-0.8..0.8);
        let l = Lambda::from_eps_delta(eps, delta);
        if l.in_region() {
            return l;
        }
    }
}

/// Moduli as doubles in `(-1, 1)`.
pub fn moduli_f64<R: Rng>(rng: &mut R) -> BoxModuli<f64> {
    let m = convex_moduli(rng);
    BoxModuli::new(m.zeta_t.to_f64(), m.zeta_b.to_f64()).expect("|zeta| < 1")
}

/// Exact deformation parameter with `u = e^eps`, `v = e^delta` positive rationals.
pub fn rational_lambda<R: Rng>(rng: &mut R) -> Lambda<Rational> {
    let mut pos = || Rational::new(BigInt::from(rng.gen_range(1..30)), BigInt::from(rng.gen_range(1..30)));
    Lambda::from_exp(pos(), pos()).expect("positive")
}

/// `(eps, delta)` in the open region, bounded away from its boundary by `margin`.
pub fn lambda_in_interior<R: Rng>(rng: &mut R, margin: f64) -> Lambda<f64> {
    loop {
        let l = lambda_in_region(rng);
        if l.region_f().min(l.delta_flipped().region_f()) > margin {
            return l;
        }
    }
}

/// Normal form of a uniformly random product of `len` letters from `I, R, R^2`.
pub fn group_word<R: Rng>(rng: &mut R, len: usize) -> GroupWord {
    let letters = [Letter::I, Letter::R, Letter::R2];
    GroupWord((0..len).map(|_| letters[rng.gen_range(0..3)]).collect()).normalize()
}

/// `h w h^{-1}` with `w` a product of one to three crossing letters and `h`
/// shorter than `max_conj`: an infinite-order element of the index-2 subgroup.
pub fn periodic_word<R: Rng>(rng: &mut R, max_conj: usize) -> GroupWord {
    let n = rng.gen_range(1..4);
    let steps: Vec<WLetter> = (0..n).map(|_| WLetter::ALL[rng.gen_range(0..4)]).collect();
    let hl = rng.gen_range(0..max_conj.max(1));
    let h = group_word(rng, hl);
    h.mul(&w_word(&steps)).mul(&h.inverse())
}
