//! Number types threaded through the geometry.
//!
//! Three implementations of [`Scalar`]: exact rationals ([`Rational`]), IEEE
//! doubles, and MPFR floats at a process-wide working precision ([`MpFloat`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Environment variable read by front ends for the default float precision.
pub const PRECISION_ENV: &str = "PAPPUS_PRECISION";
pub const DEFAULT_PRECISION: u32 = 128;

static PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION);

/// Working precision in bits for newly created [`MpFloat`] values.
pub fn precision() -> u32 {
    PRECISION.load(Ordering::Relaxed)
}

/// Sets the working precision; values below 53 bits are raised to 53.
pub fn set_precision(bits: u32) {
    PRECISION.store(bits.max(53), Ordering::Relaxed);
}

/// Precision requested through [`PRECISION_ENV`], if set and valid.
pub fn precision_from_env() -> Option<u32> {
    std::env::var(PRECISION_ENV).ok()?.trim().parse().ok()
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for exact arithmetic, where every zero test is literal.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// Unit roundoff; zero in exact mode.
    fn eps() -> f64;
    /// Textual form used in reports: "a/b" for rationals, decimals otherwise.
    fn to_repr(&self) -> String;

    fn zero() -> Self {
        Self::from_i64(0)
    }
    fn one() -> Self {
        Self::from_i64(1)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::new(n.into(), d.into()))
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn signum(&self) -> i32 {
        let z = Self::zero();
        if *self > z {
            1
        } else if *self < z {
            -1
        } else {
            0
        }
    }
    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
    /// Dot product of coordinate triples.
    fn dot3(a: &[Self; 3], b: &[Self; 3]) -> Self {
        a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
    }
    /// Cross product of coordinate triples.
    fn cross3(a: &[Self; 3], b: &[Self; 3]) -> [Self; 3] {
        let [a0, a1, a2] = a;
        let [b0, b1, b2] = b;
        [
            a1.clone() * b2.clone() - a2.clone() * b1.clone(),
            a2.clone() * b0.clone() - a0.clone() * b2.clone(),
            a0.clone() * b1.clone() - a1.clone() * b0.clone(),
        ]
    }
    /// Rescales a homogeneous tuple by a positive factor to a small representative.
    /// Exact mode clears denominators and common factors; floats are left alone.
    fn primitive(_v: &mut [Self]) {}
    /// `|x| <= tol * scale`, with `tol = 0` in exact mode.
    fn negligible(&self, scale: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs() <= scale.abs() * Self::from_f64(tol)
        }
    }
}

/// Transcendental functions, available in float modes only.
pub trait RealScalar: Scalar {
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn cbrt(&self) -> Self;
    fn cos(&self) -> Self;
    fn acos(&self) -> Self;
    fn pi() -> Self;
    fn cosh(&self) -> Self {
        (self.exp() + (-self.clone()).exp()) / Self::from_i64(2)
    }
    fn sinh(&self) -> Self {
        (self.exp() - (-self.clone()).exp()) / Self::from_i64(2)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).expect("finite float")
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn eps() -> f64 {
        0.0
    }
    fn to_repr(&self) -> String {
        self.to_string()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn dot3(a: &[Self; 3], b: &[Self; 3]) -> Self {
        if !a.iter().chain(b).all(|x| x.is_integer()) {
            return &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2];
        }
        let n = |k: usize| a[k].numer() * b[k].numer();
        Rational::from_integer(n(0) + n(1) + n(2))
    }
    fn cross3(a: &[Self; 3], b: &[Self; 3]) -> [Self; 3] {
        // Integer inputs are the common case for primitive box coordinates;
        // skipping the rational normalization there is the same result, faster.
        if !a.iter().chain(b).all(|x| x.is_integer()) {
            let [a0, a1, a2] = a;
            let [b0, b1, b2] = b;
            return [a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0];
        }
        let [a0, a1, a2] = a.each_ref().map(|x| x.numer());
        let [b0, b1, b2] = b.each_ref().map(|x| x.numer());
        [a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0].map(Rational::from_integer)
    }
    fn primitive(v: &mut [Self]) {
        use num_integer::Integer;
        let l = v.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
        let n: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
        let g = n.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
        if g.is_zero() {
            return;
        }
        for (x, k) in v.iter_mut().zip(n) {
            *x = Rational::from_integer(k / &g);
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn eps() -> f64 {
        f64::EPSILON / 2.0
    }
    fn to_repr(&self) -> String {
        format!("{self:e}")
    }
}

impl RealScalar for f64 {
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn cbrt(&self) -> Self {
        f64::cbrt(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn acos(&self) -> Self {
        f64::acos(self.clamp(-1.0, 1.0))
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
}

/// MPFR float created at the current [`precision`].
#[derive(Clone, PartialEq, PartialOrd)]
pub struct MpFloat(pub Float);

impl MpFloat {
    pub fn new<T>(val: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        MpFloat(Float::with_val(precision(), val))
    }
}

impl fmt::Debug for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for MpFloat {
            type Output = MpFloat;
            fn $m(self, rhs: MpFloat) -> MpFloat {
                MpFloat($tr::$m(self.0, rhs.0))
            }
        }
    };
}
mp_binop!(Add, add);
mp_binop!(Sub, sub);
mp_binop!(Mul, mul);
mp_binop!(Div, div);

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat(-self.0)
    }
}

impl Scalar for MpFloat {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        MpFloat::new(n)
    }
    fn from_f64(x: f64) -> Self {
        MpFloat::new(x)
    }
    fn from_rational(q: &Rational) -> Self {
        let n = Float::parse(q.numer().to_string()).expect("integer literal");
        let d = Float::parse(q.denom().to_string()).expect("integer literal");
        MpFloat(Float::with_val(precision(), n) / Float::with_val(precision(), d))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn abs(&self) -> Self {
        MpFloat(self.0.clone().abs())
    }
    fn eps() -> f64 {
        2f64.powi(-(precision() as i32))
    }
    fn to_repr(&self) -> String {
        let digits = (precision() as f64 * std::f64::consts::LOG10_2).ceil() as usize;
        self.0.to_string_radix(10, Some(digits))
    }
}

impl RealScalar for MpFloat {
    fn sqrt(&self) -> Self {
        MpFloat(self.0.clone().sqrt())
    }
    fn exp(&self) -> Self {
        MpFloat(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        MpFloat(self.0.clone().ln())
    }
    fn cbrt(&self) -> Self {
        MpFloat(self.0.clone().cbrt())
    }
    fn cos(&self) -> Self {
        MpFloat(self.0.clone().cos())
    }
    fn acos(&self) -> Self {
        let one = Float::with_val(self.0.prec(), 1);
        MpFloat(self.0.clone().clamp(&-one.clone(), &one).acos())
    }
    fn pi() -> Self {
        MpFloat::new(Constant::Pi)
    }
    fn cosh(&self) -> Self {
        MpFloat(self.0.clone().cosh())
    }
    fn sinh(&self) -> Self {
        MpFloat(self.0.clone().sinh())
    }
}

/// Integer power by repeated squaring, valid in every mode.
pub fn powi<S: Scalar>(x: &S, n: i64) -> S {
    let mut base = if n < 0 { S::one() / x.clone() } else { x.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = S::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.square();
        e >>= 1;
    }
    acc
}

/// Parses "a/b", an integer, or a decimal such as "-0.125" or "2.5e-3" exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    let digits = format!("{ip}{fp}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let mut q = Rational::from_integer(BigInt::from_str(&digits).map_err(|_| err())?);
    let shift = exp - fp.len() as i32;
    let ten = Rational::from_integer(10.into());
    q *= ten.pow(shift);
    Ok(if neg { -q } else { q })
}

/// Parses a number into any scalar mode; rationals stay exact.
pub fn parse_scalar<S: Scalar>(s: &str) -> Result<S> {
    parse_rational(s).map(|q| S::from_rational(&q))
}
