//! Symbolic partial differentiation by the usual recursive rules.

use super::{Expr, Func};

pub(crate) fn diff(e: &Expr, axis: usize) -> Expr {
    match e {
        Expr::Lit(_) => Expr::zero(),
        Expr::Var(i) => {
            if *i == axis {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Neg(a) => Expr::neg(diff(a, axis)),
        Expr::Add(a, b) => Expr::add(diff(a, axis), diff(b, axis)),
        Expr::Sub(a, b) => Expr::sub(diff(a, axis), diff(b, axis)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(diff(a, axis), (**b).clone()),
            Expr::mul((**a).clone(), diff(b, axis)),
        ),
        Expr::Div(a, b) => {
            let da = diff(a, axis);
            let db = diff(b, axis);
            if db.is_zero() {
                return Expr::div(da, (**b).clone());
            }
            let numer = Expr::sub(
                Expr::mul(da, (**b).clone()),
                Expr::mul((**a).clone(), db),
            );
            Expr::div(numer, Expr::pow((**b).clone(), 2))
        }
        Expr::Pow(a, p) => {
            let da = diff(a, axis);
            Expr::mul(
                Expr::mul(Expr::int(*p as i64), Expr::pow((**a).clone(), p - 1)),
                da,
            )
        }
        Expr::Call(f, a) => {
            let da = diff(a, axis);
            if da.is_zero() {
                return Expr::zero();
            }
            let arg = (**a).clone();
            let outer = match f {
                Func::Sin => Expr::call(Func::Cos, arg),
                Func::Cos => Expr::neg(Expr::call(Func::Sin, arg)),
                Func::Exp => Expr::call(Func::Exp, arg),
                Func::Ln => return Expr::div(da, arg),
                Func::Sqrt => {
                    return Expr::div(da, Expr::mul(Expr::int(2), Expr::call(Func::Sqrt, arg)))
                }
            };
            Expr::mul(outer, da)
        }
    }
}
