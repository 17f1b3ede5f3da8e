//! Scalar backends: binary floating point and exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expr::Literal;
use crate::weil::Elementary;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Which scalar kind a computation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Float,
    Rational,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Float => "float",
            Backend::Rational => "rational",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "float" => Ok(Backend::Float),
            "rational" => Ok(Backend::Rational),
            other => Err(Error::Config(format!("unknown backend `{other}`"))),
        }
    }
}

/// Equality contract used when comparing computed quantities.
///
/// The rational backend ignores these numbers and compares exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    /// Allowed deviation for quantities of magnitude `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        (self.rel * scale).max(self.abs)
    }
}

/// A commutative ring of scalars usable as Weil-algebra coefficients.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_literal(lit: &Literal) -> Result<Self>;
    fn is_zero(&self) -> bool;
    /// `None` when `rhs` is zero.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
    /// Absolute value as `f64`, for residual reporting.
    fn magnitude(&self) -> f64;
    fn is_positive(&self) -> bool;
    fn abs(&self) -> Self;
    /// Parses `p`, `p/q` or (float backend only) a decimal literal.
    fn parse_value(text: &str) -> Result<Self>;
    /// Value of a transcendental function at `x`; `Powi` is never passed here.
    fn transcendental(func: Elementary, x: &Self) -> Result<Self>;

    /// Whether `residual` is zero under the backend's equality contract.
    fn within(residual: &Self, scale: f64, tol: &Tolerance) -> bool;
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_literal(lit: &Literal) -> Result<Self> {
        Ok(match lit {
            Literal::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Literal::Float(v) => *v,
        })
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (*rhs != 0.0).then(|| self / rhs)
    }
    fn magnitude(&self) -> f64 {
        f64::abs(*self)
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn parse_value(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Ok(r) = t.parse::<BigRational>() {
            return Ok(r.to_f64().unwrap_or(f64::NAN));
        }
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Config(format!("invalid number `{t}`")))
    }
    fn transcendental(func: Elementary, x: &Self) -> Result<Self> {
        Ok(match func {
            Elementary::Sin => x.sin(),
            Elementary::Cos => x.cos(),
            Elementary::Exp => x.exp(),
            Elementary::Ln => x.ln(),
            Elementary::Sqrt => x.sqrt(),
            Elementary::Powi(p) => x.powi(p as i32),
        })
    }
    fn within(residual: &Self, scale: f64, tol: &Tolerance) -> bool {
        f64::abs(*residual) <= tol.bound(scale)
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_literal(lit: &Literal) -> Result<Self> {
        match lit {
            Literal::Rational(r) => Ok(r.clone()),
            Literal::Float(v) => Err(Error::FloatLiteralOnExact(v.to_string())),
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (!Zero::is_zero(rhs)).then(|| self / rhs)
    }
    fn magnitude(&self) -> f64 {
        Signed::abs(self).to_f64().unwrap_or(f64::INFINITY)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn parse_value(text: &str) -> Result<Self> {
        let t = text.trim();
        match t.parse::<BigRational>() {
            Ok(r) => Ok(r),
            Err(_) if t.parse::<f64>().is_ok() => Err(Error::FloatLiteralOnExact(t.to_string())),
            Err(_) => Err(Error::Config(format!("invalid number `{t}`"))),
        }
    }
    fn transcendental(func: Elementary, _x: &Self) -> Result<Self> {
        Err(Error::TranscendentalOnExact(func.name()))
    }
    fn within(residual: &Self, _scale: f64, _tol: &Tolerance) -> bool {
        Zero::is_zero(residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_contract_uses_relative_and_absolute_floor() {
        let tol = Tolerance::default();
        assert!(f64::within(&5e-13, 0.0, &tol));
        assert!(!f64::within(&5e-12, 0.0, &tol));
        assert!(f64::within(&5e-7, 1e3, &tol));
    }

    #[test]
    fn rational_contract_is_exact() {
        let tiny = Rational::from_ratio(1, 1_000_000_000_000);
        assert!(!Rational::within(&tiny, 1e9, &Tolerance::default()));
        assert!(Rational::within(&<Rational as Scalar>::zero(), 0.0, &Tolerance::default()));
    }

    #[test]
    fn parse_values() {
        assert_eq!(Rational::parse_value(" -3/4 ").unwrap(), Rational::from_ratio(-3, 4));
        assert_eq!(f64::parse_value("1/4").unwrap(), 0.25);
        assert_eq!(f64::parse_value("2.5e-1").unwrap(), 0.25);
        assert!(matches!(Rational::parse_value("0.5"), Err(Error::FloatLiteralOnExact(_))));
        assert!(Rational::parse_value("abc").is_err());
    }

    #[test]
    fn rational_rejects_float_literal_and_transcendentals() {
        assert!(Rational::from_literal(&Literal::Float(0.5)).is_err());
        assert!(Rational::transcendental(Elementary::Sin, &<Rational as Scalar>::one()).is_err());
    }
}
