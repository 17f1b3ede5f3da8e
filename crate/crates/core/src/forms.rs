//! Differential k-forms with expression coefficients and their exterior
//! derivative, computed by the closed coefficient formula and, separately,
//! by reading it off infinitesimal boundary integrals.

use std::collections::BTreeMap;
use std::fmt;

use crate::alternating::{canonicalize, combinations, minor, try_extract_from_function, AlternatingMap};
use crate::chains::{integral_chain_with_scale, MarkedMicrocube, Microcube};
use crate::error::{Error, Result};
use crate::expr::parse::{Parser, Tok};
use crate::expr::{print_expr, variable_name, Carrier, Expr, ScalarField};
use crate::scalar::{Scalar, Tolerance};
use crate::weil::{Monomial, Weil};

/// `sum_I f_I dx_I` over strictly increasing multi-indices `I` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm {
    n: usize,
    k: usize,
    coeffs: BTreeMap<Vec<usize>, ScalarField>,
}

/// A parsed form plus any non-fatal diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedForm {
    pub form: DifferentialForm,
    pub warnings: Vec<String>,
}

impl DifferentialForm {
    pub fn zero(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::DegreeOutOfRange { degree: k, dim: n });
        }
        Ok(DifferentialForm { n, k, coeffs: BTreeMap::new() })
    }

    /// A 0-form.
    pub fn scalar(field: ScalarField) -> Self {
        let mut out = DifferentialForm { n: field.dim(), k: 0, coeffs: BTreeMap::new() };
        out.accumulate(vec![], field.into_expr());
        out
    }

    /// Sums `(index, coefficient)` terms; unsorted indices are sorted with the
    /// permutation sign folded into the coefficient, repeated ones dropped.
    pub fn from_terms(
        n: usize,
        k: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, ScalarField)>,
    ) -> Result<Self> {
        let mut out = Self::zero(n, k)?;
        for (index, field) in terms {
            if index.len() != k {
                return Err(Error::MixedDegrees { first: k, second: index.len() });
            }
            if field.dim() != n {
                return Err(Error::DimensionMismatch { what: "coefficient dimension", expected: n, found: field.dim() });
            }
            if let Some(&bad) = index.iter().find(|&&i| i >= n) {
                return Err(Error::DimensionMismatch { what: "differential index", expected: n, found: bad + 1 });
            }
            if let Some((canon, sign)) = canonicalize(&index) {
                let e = field.into_expr();
                out.accumulate(canon, if sign < 0 { Expr::neg(e) } else { e });
            }
        }
        Ok(out)
    }

    fn accumulate(&mut self, index: Vec<usize>, e: Expr) {
        let sum = match self.coeffs.remove(&index) {
            Some(prev) => Expr::add(prev.into_expr(), e),
            None => e,
        };
        if !sum.is_zero() {
            self.coeffs.insert(index, ScalarField::new(self.n, sum).expect("indices checked"));
        }
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        Ok(parse_form(text, n)?.form)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient on `dx_I` for a canonical (sorted) index.
    pub fn coefficient(&self, index: &[usize]) -> ScalarField {
        self.coeffs
            .get(index)
            .cloned()
            .unwrap_or_else(|| ScalarField::constant(self.n, 0))
    }

    /// Nonzero terms in lexicographic multi-index order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarField)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (index, f) in &other.coeffs {
            out.accumulate(index.clone(), f.expr().clone());
        }
        Ok(out)
    }

    /// Multiplies every coefficient by a constant expression.
    pub fn scale(&self, c: &Expr) -> Self {
        let mut out = DifferentialForm { n: self.n, k: self.k, coeffs: BTreeMap::new() };
        for (index, f) in &self.coeffs {
            out.accumulate(index.clone(), Expr::mul(c.clone(), f.expr().clone()));
        }
        out
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { what: "form dimension", expected: self.n, found: other.n });
        }
        if self.k != other.k {
            return Err(Error::MixedDegrees { first: self.k, second: other.k });
        }
        Ok(())
    }

    /// `sum_I f_I(point) det(minor I of tangents)`.
    pub fn eval<C: Carrier>(&self, point: &[C], tangents: &[Vec<C::Scalar>]) -> Result<C> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { what: "point length", expected: self.n, found: point.len() });
        }
        if tangents.len() != self.k {
            return Err(Error::DimensionMismatch { what: "tangent count", expected: self.k, found: tangents.len() });
        }
        if let Some(t) = tangents.iter().find(|t| t.len() != self.n) {
            return Err(Error::DimensionMismatch { what: "tangent length", expected: self.n, found: t.len() });
        }
        let like = &point[0];
        let mut acc = like.constant_like(C::Scalar::zero());
        for (index, f) in &self.coeffs {
            let det = minor(tangents, index);
            if det.is_zero() {
                continue;
            }
            acc = acc.add(&f.eval(point)?.mul(&like.constant_like(det)));
        }
        Ok(acc)
    }

    /// The coefficients evaluated at a real point.
    pub fn at<S: Scalar>(&self, x: &[S]) -> Result<AlternatingMap<S>> {
        let point = x.iter().map(|c| Weil::from_real(c.clone(), 0)).collect::<Result<Vec<_>>>()?;
        let coeffs = combinations(self.n, self.k)
            .iter()
            .map(|index| match self.coeffs.get(index) {
                Some(f) => f.eval(&point).map(|w| w.real()),
                None => Ok(S::zero()),
            })
            .collect::<Result<Vec<S>>>()?;
        AlternatingMap::from_coefficients(self.n, self.k, coeffs)
    }

    /// Exterior derivative by the coefficient formula
    /// `(d omega)_J = sum_j (-1)^j d f_{J without j_j} / d x_{j_j}`.
    ///
    /// Errors for a top-degree form; see [`Self::d_allow_top`].
    pub fn d(&self) -> Result<Self> {
        if self.k >= self.n {
            return Err(Error::TopDegree(self.n));
        }
        let mut out = DifferentialForm { n: self.n, k: self.k + 1, coeffs: BTreeMap::new() };
        for index in combinations(self.n, self.k + 1) {
            let mut acc = Expr::zero();
            for (pos, &axis) in index.iter().enumerate() {
                let mut rest = index.clone();
                rest.remove(pos);
                let Some(f) = self.coeffs.get(&rest) else { continue };
                let partial = f.diff(axis).into_expr();
                acc = if pos % 2 == 0 { Expr::add(acc, partial) } else { Expr::sub(acc, partial) };
            }
            out.accumulate(index, acc);
        }
        Ok(out)
    }

    /// Like [`Self::d`], but a top-degree form maps to the empty form of
    /// degree `n + 1`.
    pub fn d_allow_top(&self) -> Result<Self> {
        if self.k >= self.n {
            return Ok(DifferentialForm { n: self.n, k: self.n + 1, coeffs: BTreeMap::new() });
        }
        self.d()
    }

    /// The (k+1)-linear map `phi(a^1, ..., a^{k+1})` whose value is the
    /// `e1 ... e_{k+1}` coefficient of the integral of this form over the
    /// boundary of the microcube at `x` spanned by the arguments.
    ///
    /// Every other Weil coefficient of that integral must vanish within `tol`.
    pub fn boundary_functional<'a, S: Scalar>(
        &'a self,
        x: &'a [S],
        tol: &'a Tolerance,
    ) -> impl Fn(&[Vec<S>]) -> Result<S> + 'a {
        move |tangents| {
            let m = self.k + 1;
            let cube = MarkedMicrocube::standard(Microcube::new(x, tangents.to_vec(), m)?)?;
            let (value, scale) = integral_chain_with_scale(self, &cube.boundary())?;
            let top = Monomial::full(m);
            for (mono, c) in value.terms() {
                if mono != top && !S::within(c, scale, tol) {
                    return Err(Error::LowerOrder { monomial: mono.to_string(), value: c.to_string() });
                }
            }
            Ok(value.coefficient(top))
        }
    }

    /// Exterior derivative at `x`, extracted from boundary integrals by
    /// probing with standard basis tangents.
    pub fn d_extracted<S: Scalar>(&self, x: &[S], tol: &Tolerance) -> Result<AlternatingMap<S>> {
        if self.k + 1 > self.n {
            return Err(Error::TopDegree(self.n));
        }
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { what: "point length", expected: self.n, found: x.len() });
        }
        try_extract_from_function(self.n, self.k + 1, self.boundary_functional(x, tol))
    }

    /// Weil-valued integral of the form over the marked microcube, see
    /// [`crate::chains::integral`].
    pub fn integrate<S: Scalar>(&self, cube: &MarkedMicrocube<S>) -> Result<Weil<S>> {
        crate::chains::integral(self, cube)
    }
}

fn basis_name(index: &[usize], n: usize) -> String {
    index.iter().map(|&i| format!("d{}", variable_name(i, n))).collect::<Vec<_>>().join("^")
}

impl fmt::Display for DifferentialForm {
    /// Terms in lexicographic multi-index order; `0` for the zero form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (pos, (index, field)) in self.coeffs.iter().enumerate() {
            let (negative, body) = match field.expr() {
                Expr::Neg(inner) => (true, inner.as_ref()),
                other => (false, other),
            };
            match (pos, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let basis = basis_name(index, self.n);
            if index.is_empty() {
                let text = print_expr(body, self.n);
                if negative && matches!(body, Expr::Add(..) | Expr::Sub(..)) {
                    write!(f, "({text})")?;
                } else {
                    f.write_str(&text)?;
                }
            } else if body.is_one() {
                f.write_str(&basis)?;
            } else if matches!(body, Expr::Add(..) | Expr::Sub(..)) {
                write!(f, "({})*{basis}", print_expr(body, self.n))?;
            } else {
                write!(f, "{}*{basis}", print_expr(body, self.n))?;
            }
        }
        Ok(())
    }
}

/// Parses `coef * dxi ^ dxj ^ ... (+|-) ...`. Bare scalar terms have degree 0.
///
/// A term with a repeated differential contributes zero and is reported as a
/// warning.
pub fn parse_form(text: &str, n: usize) -> Result<ParsedForm> {
    let mut p = Parser::new(text, n)?;
    let mut terms: Vec<(Vec<usize>, Expr)> = Vec::new();
    let mut degree: Option<usize> = None;
    let mut warnings = Vec::new();
    let mut negate = false;
    if *p.peek() == Tok::Plus {
        p.bump();
    }
    loop {
        let (line, col) = p.here();
        let (coef, diffs) = form_term(&mut p)?;
        match degree {
            None => degree = Some(diffs.len()),
            Some(d) if d != diffs.len() => {
                return Err(Error::MixedDegrees { first: d, second: diffs.len() })
            }
            Some(_) => {}
        }
        let coef = if negate { Expr::neg(coef) } else { coef };
        match canonicalize(&diffs) {
            Some((canon, sign)) => terms.push((canon, if sign < 0 { Expr::neg(coef) } else { coef })),
            None => warnings.push(format!(
                "term at {line}:{col} repeats a differential ({}); it contributes zero",
                basis_name(&diffs, n)
            )),
        }
        match p.peek() {
            Tok::Plus => negate = false,
            Tok::Minus => negate = true,
            _ => break,
        }
        p.bump();
    }
    p.expect_eof()?;
    let k = degree.unwrap_or(0);
    if k > n {
        return Err(Error::DegreeOutOfRange { degree: k, dim: n });
    }
    let mut form = DifferentialForm::zero(n, k)?;
    for (index, coef) in terms {
        form.accumulate(index, coef);
    }
    Ok(ParsedForm { form, warnings })
}

fn form_term(p: &mut Parser) -> Result<(Expr, Vec<usize>)> {
    if *p.peek() == Tok::Minus && p.differential_at(1) {
        p.bump();
        return Ok((Expr::int(-1), wedge(p)?));
    }
    if p.at_differential() {
        return Ok((Expr::one(), wedge(p)?));
    }
    let mut coef = p.factor()?;
    loop {
        match p.peek() {
            Tok::Star if p.differential_at(1) => {
                p.bump();
                return Ok((coef, wedge(p)?));
            }
            Tok::Star => {
                p.bump();
                coef = Expr::Mul(Box::new(coef), Box::new(p.factor()?));
            }
            Tok::Slash => {
                p.bump();
                coef = Expr::Div(Box::new(coef), Box::new(p.factor()?));
            }
            Tok::Caret => return Err(p.error("`^` joins differentials only")),
            _ => return Ok((coef, Vec::new())),
        }
    }
}

fn wedge(p: &mut Parser) -> Result<Vec<usize>> {
    let mut out = vec![differential(p)?];
    while *p.peek() == Tok::Caret {
        p.bump();
        out.push(differential(p)?);
    }
    if matches!(p.peek(), Tok::Star | Tok::Slash | Tok::StarStar) {
        return Err(p.error("coefficients must precede the differentials"));
    }
    Ok(out)
}

fn differential(p: &mut Parser) -> Result<usize> {
    let tok = p.peek().clone();
    if let Tok::Ident(name) = &tok {
        if let crate::expr::parse::Name::Differential(i) = p.resolve(name)? {
            p.bump();
            return Ok(i);
        }
    }
    Err(p.error("expected a differential such as `dx` or `dx2`"))
}
