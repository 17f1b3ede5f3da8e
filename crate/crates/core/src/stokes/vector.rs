//! grad, curl and div read through forms on R^3.
//!
//! A vector field `F = (f, g, h)` is a 1-form `f dx + g dy + h dz` when it is
//! a force and a 2-form `f dy^dz + g dz^dx + h dx^dy` when it is a flux.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Expr, ScalarField};
use crate::forms::DifferentialForm;
use crate::scalar::Scalar;
use crate::weil::Weil;

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField3 {
    components: [ScalarField; 3],
}

impl VectorField3 {
    pub fn new(f: ScalarField, g: ScalarField, h: ScalarField) -> Result<Self> {
        for c in [&f, &g, &h] {
            if c.dim() != 3 {
                return Err(Error::DimensionMismatch { what: "vector field dimension", expected: 3, found: c.dim() });
            }
        }
        Ok(VectorField3 { components: [f, g, h] })
    }

    pub fn parse(f: &str, g: &str, h: &str) -> Result<Self> {
        Self::new(ScalarField::parse(f, 3)?, ScalarField::parse(g, 3)?, ScalarField::parse(h, 3)?)
    }

    pub fn components(&self) -> &[ScalarField; 3] {
        &self.components
    }

    /// `f dx + g dy + h dz`.
    pub fn to_one_form(&self) -> DifferentialForm {
        let terms = (0..3).map(|i| (vec![i], self.components[i].clone()));
        DifferentialForm::from_terms(3, 1, terms).expect("dimension checked")
    }

    /// `f dy^dz + g dz^dx + h dx^dy`.
    pub fn to_two_form(&self) -> DifferentialForm {
        let [f, g, h] = self.components.clone();
        DifferentialForm::from_terms(3, 2, [(vec![1, 2], f), (vec![2, 0], g), (vec![0, 1], h)])
            .expect("dimension checked")
    }

    /// Reads a 2-form back as `(dy^dz, dz^dx, dx^dy)` components.
    pub fn from_two_form(form: &DifferentialForm) -> Result<Self> {
        if form.dim() != 3 || form.degree() != 2 {
            return Err(Error::DimensionMismatch { what: "2-form on R^3", expected: 2, found: form.degree() });
        }
        let zx = ScalarField::new(3, Expr::neg(form.coefficient(&[0, 2]).into_expr()))?;
        Self::new(form.coefficient(&[1, 2]), zx, form.coefficient(&[0, 1]))
    }

    /// `F(x)`, componentwise.
    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<[S; 3]> {
        let point = x.iter().map(|c| Weil::from_real(c.clone(), 0)).collect::<Result<Vec<_>>>()?;
        let v = |i: usize| self.components[i].eval(&point).map(|w| w.real());
        Ok([v(0)?, v(1)?, v(2)?])
    }

    /// The gradient, as the coefficients of `d phi`.
    pub fn grad(phi: &ScalarField) -> Result<Self> {
        if phi.dim() != 3 {
            return Err(Error::DimensionMismatch { what: "scalar field dimension", expected: 3, found: phi.dim() });
        }
        let d = DifferentialForm::scalar(phi.clone()).d()?;
        Self::new(d.coefficient(&[0]), d.coefficient(&[1]), d.coefficient(&[2]))
    }

    /// The rotation, as `d` of the 1-form read back through the 2-form dictionary.
    pub fn curl(&self) -> Result<Self> {
        Self::from_two_form(&self.to_one_form().d()?)
    }

    /// The divergence, as the `dx^dy^dz` coefficient of `d` of the flux form.
    pub fn div(&self) -> Result<ScalarField> {
        Ok(self.to_two_form().d()?.coefficient(&[0, 1, 2]))
    }
}

impl fmt::Display for VectorField3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.components;
        write!(f, "({a}, {b}, {c})")
    }
}

/// `u . (v x w)`.
pub fn triple_product<S: Scalar>(u: &[S; 3], v: &[S], w: &[S]) -> S {
    let cross = [
        v[1].clone() * w[2].clone() - v[2].clone() * w[1].clone(),
        v[2].clone() * w[0].clone() - v[0].clone() * w[2].clone(),
        v[0].clone() * w[1].clone() - v[1].clone() * w[0].clone(),
    ];
    u[0].clone() * cross[0].clone() + u[1].clone() * cross[1].clone() + u[2].clone() * cross[2].clone()
}

/// The flux 2-form of a field evaluated on a parallelogram, next to the
/// triple product it must equal.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxPairing<S> {
    pub form_value: S,
    pub triple_product: S,
}

impl<S: Scalar> FluxPairing<S> {
    pub fn agree(&self) -> bool {
        self.form_value == self.triple_product
    }
}

pub fn flux_pairing<S: Scalar>(field: &VectorField3, x: &[S], a: &[S], b: &[S]) -> Result<FluxPairing<S>> {
    if x.len() != 3 || a.len() != 3 || b.len() != 3 {
        return Err(Error::DimensionMismatch { what: "vector length", expected: 3, found: x.len().min(a.len()).min(b.len()) });
    }
    let point = x.iter().map(|c| Weil::from_real(c.clone(), 0)).collect::<Result<Vec<_>>>()?;
    let form_value = field.to_two_form().eval(&point, &[a.to_vec(), b.to_vec()])?.real();
    let triple_product = triple_product(&field.eval(x)?, a, b);
    Ok(FluxPairing { form_value, triple_product })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn s(text: &str) -> ScalarField {
        ScalarField::parse(text, 3).unwrap()
    }

    #[test]
    fn grad_examples() {
        assert_eq!(VectorField3::grad(&s("1")).unwrap().to_string(), "(0, 0, 0)");
        assert_eq!(VectorField3::grad(&s("x**2*y")).unwrap().to_string(), "(2*x*y, x**2, 0)");
        assert_eq!(VectorField3::grad(&s("x + y + z")).unwrap().to_string(), "(1, 1, 1)");
    }

    #[test]
    fn curl_examples() {
        let f = VectorField3::parse("-y", "x", "0").unwrap();
        assert_eq!(f.curl().unwrap().to_string(), "(0, 0, 2)");
        let f = VectorField3::parse("y*z**2", "x**3", "x + y + z").unwrap();
        let c = f.curl().unwrap();
        let at = c.eval(&qv(&[2, 3, 5])).unwrap();
        // (1 - 0, 2yz - 1, 3x^2 - z^2)
        assert_eq!(at, [q(1), q(2 * 3 * 5 - 1), q(3 * 4 - 25)]);
    }

    #[test]
    fn div_examples() {
        assert_eq!(VectorField3::parse("x", "y", "z").unwrap().div().unwrap().to_string(), "3");
        assert_eq!(VectorField3::parse("y*z", "z*x", "x*y").unwrap().div().unwrap().to_string(), "0");
    }

    #[test]
    fn divergence_keeps_all_plus_signs() {
        // d(f dy^dz + g dz^dx + h dx^dy) = (f_x + g_y + h_z) dx^dy^dz; no minus on g_y
        let f = VectorField3::parse("0", "y", "0").unwrap();
        assert_eq!(f.div().unwrap().to_string(), "1");
    }

    #[test]
    fn flux_examples() {
        let unit = VectorField3::parse("1", "0", "0").unwrap();
        let p = flux_pairing(&unit, &qv(&[0, 0, 0]), &qv(&[0, 1, 0]), &qv(&[0, 0, 1])).unwrap();
        assert_eq!(p.form_value, q(1));
        assert!(p.agree());

        let f = VectorField3::parse("x", "y*z", "x - z").unwrap();
        let p = flux_pairing(&f, &qv(&[1, 2, 3]), &qv(&[4, -1, 2]), &qv(&[4, -1, 2])).unwrap();
        assert_eq!(p.form_value, q(0));
        assert!(p.agree());

        let c = VectorField3::parse("1", "2", "3").unwrap();
        let p = flux_pairing(&c, &qv(&[0, 0, 0]), &qv(&[1, 0, 0]), &qv(&[0, 1, 0])).unwrap();
        assert_eq!(p.triple_product, q(3));
        assert!(p.agree());
    }
}
