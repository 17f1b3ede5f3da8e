//! Scalar-field expressions: AST, parser, printer, evaluation and symbolic
//! partial derivatives.

mod diff;
mod eval;
pub(crate) mod parse;
mod print;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::weil::{Elementary, Weil};

pub use eval::Carrier;
pub use parse::parse_scalar;

/// A numeric literal. Rational literals are always nonnegative in a tree
/// built by the smart constructors; negation is an explicit `Neg` node.
#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Rational(BigRational),
    Float(f64),
}

impl Literal {
    pub fn integer(v: i64) -> Literal {
        Literal::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Literal::Rational(r) => r.is_zero(),
            Literal::Float(v) => *v == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Literal::Rational(r) => r.is_one(),
            Literal::Float(v) => *v == 1.0,
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Literal::Rational(r) => r.is_negative(),
            Literal::Float(v) => v.is_sign_negative() && *v != 0.0,
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Literal::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Literal::Float(v) => *v,
        }
    }

    fn combine(
        &self,
        other: &Literal,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        float: impl Fn(f64, f64) -> f64,
    ) -> Literal {
        match (self, other) {
            (Literal::Rational(a), Literal::Rational(b)) => Literal::Rational(exact(a, b)),
            _ => Literal::Float(float(self.to_f64(), other.to_f64())),
        }
    }

    fn negate(&self) -> Literal {
        match self {
            Literal::Rational(r) => Literal::Rational(-r),
            Literal::Float(v) => Literal::Float(-v),
        }
    }

    fn abs(&self) -> Literal {
        match self {
            Literal::Rational(r) => Literal::Rational(r.abs()),
            Literal::Float(v) => Literal::Float(v.abs()),
        }
    }
}

/// Functions available in the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        self.elementary().name()
    }

    pub fn elementary(self) -> Elementary {
        match self {
            Func::Sin => Elementary::Sin,
            Func::Cos => Elementary::Cos,
            Func::Exp => Elementary::Exp,
            Func::Ln => Elementary::Ln,
            Func::Sqrt => Elementary::Sqrt,
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Expression tree. Variables are 0-based axis indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Lit(Literal),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

// Smart constructors. They fold constants and absorb 0 and 1, nothing more.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::lit(Literal::integer(v))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    /// A literal; negative values become `Neg` of the magnitude.
    pub fn lit(l: Literal) -> Expr {
        if l.is_negative() {
            Expr::Neg(Box::new(Expr::Lit(l.abs())))
        } else {
            Expr::Lit(l)
        }
    }

    /// The constant value, if this is a literal or a negated literal.
    pub fn as_const(&self) -> Option<Literal> {
        match self {
            Expr::Lit(l) => Some(l.clone()),
            Expr::Neg(inner) => match inner.as_ref() {
                Expr::Lit(l) => Some(l.negate()),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Expr::lit(x.combine(&y, |p, q| p + q, |p, q| p + q));
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Expr::lit(x.combine(&y, |p, q| p - q, |p, q| p - q));
        }
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            return Expr::lit(x.combine(&y, |p, q| p * q, |p, q| p * q));
        }
        if a.is_zero() || b.is_zero() {
            return Expr::zero();
        }
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if !y.is_zero() {
                return Expr::lit(x.combine(&y, |p, q| p / q, |p, q| p / q));
            }
        }
        if b.is_one() {
            return a;
        }
        if a.is_zero() && b.as_const().is_none_or(|c| !c.is_zero()) {
            return Expr::zero();
        }
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        if let Some(x) = a.as_const() {
            return Expr::lit(x.negate());
        }
        match a {
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn pow(base: Expr, exp: u32) -> Expr {
        if exp == 0 {
            return Expr::one();
        }
        if exp == 1 {
            return base;
        }
        if let Some(Literal::Rational(r)) = base.as_const() {
            return Expr::lit(Literal::Rational(num_traits::pow(r, exp as usize)));
        }
        Expr::Pow(Box::new(base), exp)
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    /// Largest variable index plus one (0 for constants).
    pub fn min_dim(&self) -> usize {
        match self {
            Expr::Lit(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.min_dim(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.min_dim().max(b.min_dim())
            }
        }
    }

    /// Whether any float literal occurs.
    pub fn has_float(&self) -> bool {
        match self {
            Expr::Lit(l) => matches!(l, Literal::Float(_)),
            Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.has_float(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_float() || b.has_float()
            }
        }
    }
}

/// A scalar field `R^n -> R` given by an expression over `x1..xn`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    dim: usize,
    expr: Expr,
}

impl ScalarField {
    pub fn new(dim: usize, expr: Expr) -> Result<ScalarField> {
        if expr.min_dim() > dim {
            return Err(Error::DimensionMismatch {
                what: "variable index in field",
                expected: dim,
                found: expr.min_dim(),
            });
        }
        Ok(ScalarField { dim, expr })
    }

    pub fn constant(dim: usize, value: i64) -> ScalarField {
        ScalarField { dim, expr: Expr::int(value) }
    }

    pub fn parse(text: &str, dim: usize) -> Result<ScalarField> {
        parse_scalar(text, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn into_expr(self) -> Expr {
        self.expr
    }

    pub fn is_zero(&self) -> bool {
        self.expr.is_zero()
    }

    /// Evaluates at a point whose coordinates are reals, rationals or Weil
    /// elements of one common algebra.
    pub fn eval<C: Carrier>(&self, point: &[C]) -> Result<C> {
        eval::eval_field(self, point)
    }

    /// Evaluates at a real point for any scalar backend.
    pub fn value_at<S: crate::scalar::Scalar>(&self, x: &[S]) -> Result<S> {
        let point = x.iter().map(|c| Weil::from_real(c.clone(), 0)).collect::<Result<Vec<_>>>()?;
        Ok(self.eval(&point)?.real())
    }

    /// Symbolic partial derivative along axis `axis` (0-based).
    pub fn diff(&self, axis: usize) -> ScalarField {
        assert!(axis < self.dim, "axis {axis} out of range for dimension {}", self.dim);
        ScalarField { dim: self.dim, expr: diff::diff(&self.expr, axis) }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(&self.expr, self.dim))
    }
}

/// Name of axis `i` (0-based) in dimension `dim`.
pub fn variable_name(i: usize, dim: usize) -> String {
    if dim <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

pub(crate) use print::print as print_expr;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smart_constructors_fold_and_absorb() {
        assert_eq!(Expr::add(Expr::int(2), Expr::int(3)), Expr::int(5));
        assert_eq!(Expr::sub(Expr::one(), Expr::int(-1)), Expr::int(2));
        assert_eq!(Expr::mul(Expr::Var(0), Expr::zero()), Expr::zero());
        assert_eq!(Expr::mul(Expr::one(), Expr::Var(1)), Expr::Var(1));
        assert_eq!(Expr::neg(Expr::neg(Expr::Var(0))), Expr::Var(0));
        assert_eq!(Expr::pow(Expr::Var(0), 1), Expr::Var(0));
        assert_eq!(Expr::pow(Expr::int(-2), 3), Expr::int(-8));
        assert_eq!(Expr::int(-3), Expr::Neg(Box::new(Expr::Lit(Literal::integer(3)))));
    }

    #[test]
    fn division_by_literal_zero_is_not_folded() {
        let e = Expr::div(Expr::one(), Expr::zero());
        assert!(matches!(e, Expr::Div(..)));
    }
}
