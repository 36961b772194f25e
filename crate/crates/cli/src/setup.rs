//! Shared flags and their conversion into model parameters.

use clap::Args;
use pappus::scalar::{parse_rational, parse_scalar};
use pappus::{BoxModuli, Lambda, MpFloat, Rational, RepresentationParams, Scalar};
use serde_json::{json, Value};

use crate::CliError;

/// Box moduli and deformation parameter. Numbers are read exactly, as
/// fractions ("1/3") or decimals ("-0.2").
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// First modulus, in (-1, 1) for a convex box.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub zt: String,
    /// Second modulus, in (-1, 1) for a convex box.
    #[arg(long, default_value = "1/3", allow_hyphen_values = true)]
    pub zb: String,
    /// Deformation parameter eps.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["u", "v"])]
    pub eps: Option<String>,
    /// Deformation parameter delta.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["u", "v"])]
    pub delta: Option<String>,
    /// Exact alternative to --eps: u = e^eps > 0.
    #[arg(long)]
    pub u: Option<String>,
    /// Exact alternative to --delta: v = e^delta > 0.
    #[arg(long)]
    pub v: Option<String>,
}

#[derive(Debug, Clone)]
enum LambdaSpec {
    EpsDelta(Rational, Rational),
    Exp(Rational, Rational),
}

/// Validated model parameters, convertible to each float mode.
#[derive(Debug, Clone)]
pub struct Model {
    pub moduli: BoxModuli<Rational>,
    lambda: LambdaSpec,
}

fn number(flag: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

impl Model {
    pub fn from_args(a: &ModelArgs) -> Result<Self, CliError> {
        let moduli = BoxModuli::new(number("zt", &a.zt)?, number("zb", &a.zb)?)
            .map_err(|e| CliError::Usage(format!("moduli: {e}")))?;
        let zero = || Rational::zero();
        let lambda = match (&a.u, &a.v) {
            (None, None) => {
                let e = a.eps.as_deref().map(|s| number("eps", s)).transpose()?.unwrap_or_else(zero);
                let d = a.delta.as_deref().map(|s| number("delta", s)).transpose()?.unwrap_or_else(zero);
                LambdaSpec::EpsDelta(e, d)
            }
            (u, v) => {
                let one = || Rational::one();
                let u = u.as_deref().map(|s| number("u", s)).transpose()?.unwrap_or_else(one);
                let v = v.as_deref().map(|s| number("v", s)).transpose()?.unwrap_or_else(one);
                if u <= Rational::zero() || v <= Rational::zero() {
                    return Err(CliError::Usage("--u and --v must be positive".into()));
                }
                LambdaSpec::Exp(u, v)
            }
        };
        Ok(Model { moduli, lambda })
    }

    pub fn require_convex(&self) -> Result<(), CliError> {
        if self.moduli.is_convex() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("moduli ({}, {}) do not give a convex box", self.moduli.zeta_t, self.moduli.zeta_b)))
        }
    }

    pub fn lambda_is_zero(&self) -> bool {
        match &self.lambda {
            LambdaSpec::EpsDelta(e, d) => e.is_zero() && d.is_zero(),
            LambdaSpec::Exp(u, v) => *u == Rational::one() && *v == Rational::one(),
        }
    }

    pub fn lambda<S: pappus::RealScalar>(&self) -> Lambda<S> {
        match &self.lambda {
            LambdaSpec::EpsDelta(e, d) => Lambda::from_eps_delta(S::from_rational(e), S::from_rational(d)),
            LambdaSpec::Exp(u, v) => Lambda::from_exp(S::from_rational(u), S::from_rational(v)).expect("checked positive"),
        }
    }

    pub fn params<S: pappus::RealScalar>(&self) -> RepresentationParams<S> {
        RepresentationParams::new(self.moduli.convert(), self.lambda())
    }

    pub fn params_mp(&self) -> RepresentationParams<MpFloat> {
        self.params()
    }

    pub fn params_f64(&self) -> RepresentationParams<f64> {
        self.params()
    }

    pub fn to_json(&self) -> Value {
        let l = self.lambda::<MpFloat>();
        let mut v = json!({
            "zt": self.moduli.zeta_t.to_string(),
            "zb": self.moduli.zeta_b.to_string(),
            "eps": l.epsilon(),
            "delta": l.delta(),
        });
        if let LambdaSpec::Exp(u, w) = &self.lambda {
            v["u"] = json!(u.to_string());
            v["v"] = json!(w.to_string());
        }
        v
    }
}

/// Parses a float flag exactly into the working precision.
pub fn mp_number(flag: &str, s: &str) -> Result<MpFloat, CliError> {
    parse_scalar(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}
