//! Bottom-up evaluation over reals, rationals or Weil elements.

use super::{Expr, ScalarField};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::weil::{Elementary, Weil};

/// A value an expression can be evaluated on.
pub trait Carrier: Clone + Sized {
    type Scalar: Scalar;

    /// A constant living in the same algebra as `self`.
    fn constant_like(&self, c: Self::Scalar) -> Self;
    /// Generator count of the ambient Weil algebra; 0 for plain scalars.
    fn algebra(&self) -> usize;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn powi(&self, exp: u32) -> Self;
    fn apply(&self, func: Elementary) -> Result<Self>;
}

macro_rules! scalar_carrier {
    ($t:ty) => {
        impl Carrier for $t {
            type Scalar = $t;

            fn constant_like(&self, c: $t) -> $t {
                c
            }
            fn algebra(&self) -> usize {
                0
            }
            fn add(&self, rhs: &$t) -> $t {
                self.clone() + rhs.clone()
            }
            fn sub(&self, rhs: &$t) -> $t {
                self.clone() - rhs.clone()
            }
            fn mul(&self, rhs: &$t) -> $t {
                self.clone() * rhs.clone()
            }
            fn neg(&self) -> $t {
                -self.clone()
            }
            fn div(&self, rhs: &$t) -> Result<$t> {
                Scalar::checked_div(self, rhs).ok_or(Error::NonUnit)
            }
            fn powi(&self, exp: u32) -> $t {
                Elementary::Powi(exp)
                    .derivatives(self, 0)
                    .expect("integer powers are total")
                    .remove(0)
            }
            fn apply(&self, func: Elementary) -> Result<$t> {
                Ok(func.derivatives(self, 0)?.remove(0))
            }
        }
    };
}

scalar_carrier!(f64);
scalar_carrier!(Rational);

impl<S: Scalar> Carrier for Weil<S> {
    type Scalar = S;

    fn constant_like(&self, c: S) -> Self {
        Weil::from_real(c, self.generators()).expect("generator count already valid")
    }
    fn algebra(&self) -> usize {
        self.generators()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        self.try_div(rhs)
    }
    fn powi(&self, exp: u32) -> Self {
        Weil::powi(self, exp)
    }
    fn apply(&self, func: Elementary) -> Result<Self> {
        Weil::apply(self, func)
    }
}

pub(crate) fn eval_field<C: Carrier>(field: &ScalarField, point: &[C]) -> Result<C> {
    if point.len() != field.dim() {
        return Err(Error::DimensionMismatch {
            what: "point length",
            expected: field.dim(),
            found: point.len(),
        });
    }
    let Some(first) = point.first() else {
        return Err(Error::DimensionMismatch { what: "point length", expected: 1, found: 0 });
    };
    if let Some(bad) = point.iter().find(|c| c.algebra() != first.algebra()) {
        return Err(Error::AlgebraMismatch { left: first.algebra(), right: bad.algebra() });
    }
    eval_expr(field.expr(), point, first)
}

fn eval_expr<C: Carrier>(e: &Expr, point: &[C], like: &C) -> Result<C> {
    Ok(match e {
        Expr::Lit(l) => like.constant_like(C::Scalar::from_literal(l)?),
        Expr::Var(i) => point[*i].clone(),
        Expr::Neg(a) => eval_expr(a, point, like)?.neg(),
        Expr::Add(a, b) => eval_expr(a, point, like)?.add(&eval_expr(b, point, like)?),
        Expr::Sub(a, b) => eval_expr(a, point, like)?.sub(&eval_expr(b, point, like)?),
        Expr::Mul(a, b) => eval_expr(a, point, like)?.mul(&eval_expr(b, point, like)?),
        Expr::Div(a, b) => eval_expr(a, point, like)?.div(&eval_expr(b, point, like)?)?,
        Expr::Pow(a, p) => eval_expr(a, point, like)?.powi(*p),
        Expr::Call(f, a) => eval_expr(a, point, like)?.apply(f.elementary())?,
    })
}
