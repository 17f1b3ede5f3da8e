//! Verification of the infinitesimal Stokes identity and the vector-analysis
//! dictionary.

pub mod random;
pub mod sweep;
mod vector;

use std::fmt;

use crate::chains::{integral_chain_with_scale, integral_with_scale, MarkedMicrocube, Microcube};
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::scalar::{Backend, Scalar, Tolerance};
use crate::weil::{Monomial, Weil};

pub use sweep::{sweep, DegreeSummary, FieldPool, SweepConfig, SweepSummary};
pub use vector::{flux_pairing, triple_product, FluxPairing, VectorField3};

/// Both sides of `int_{d(gamma;e)} omega = int_{(gamma;e)} d omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<S> {
    pub dim: usize,
    /// Degree of `omega`; the microcube has one more direction.
    pub degree: usize,
    pub backend: Backend,
    pub tolerance: Tolerance,
    pub lhs: Weil<S>,
    pub rhs: Weil<S>,
    /// `|lhs - rhs|` on the monomial `e1 ... e_{k+1}`.
    pub top_residual: S,
    /// Largest `|coefficient|` of either side off the top monomial.
    pub lower_order_max: S,
    /// Largest magnitude met while integrating, the float comparison scale.
    pub scale: f64,
    pub pass: bool,
}

/// Checks the identity for `form` over `cube`, with `d form` from the
/// coefficient formula.
pub fn verify<S: Scalar>(
    form: &DifferentialForm,
    cube: &Microcube<S>,
    tol: &Tolerance,
) -> Result<VerificationReport<S>> {
    let d = form.d()?;
    verify_with_rhs(form, &d, cube, tol)
}

/// Same as [`verify`] but with an arbitrary right-hand form, for negative
/// controls.
pub fn verify_with_rhs<S: Scalar>(
    form: &DifferentialForm,
    rhs_form: &DifferentialForm,
    cube: &Microcube<S>,
    tol: &Tolerance,
) -> Result<VerificationReport<S>> {
    let k = form.degree();
    let n = form.dim();
    if k >= n {
        return Err(Error::TopDegree(n));
    }
    if cube.degree() != k + 1 {
        return Err(Error::DimensionMismatch { what: "microcube degree", expected: k + 1, found: cube.degree() });
    }
    if rhs_form.degree() != k + 1 || rhs_form.dim() != n {
        return Err(Error::DimensionMismatch { what: "right-hand form degree", expected: k + 1, found: rhs_form.degree() });
    }
    let m = k + 1;
    let base = cube.base().iter().map(|b| b.embed(m)).collect::<Result<Vec<_>>>()?;
    let cube = MarkedMicrocube::standard(Microcube::with_weil_base(base, cube.tangents().to_vec())?)?;

    let (lhs, lhs_scale) = integral_chain_with_scale(form, &cube.boundary())?;
    let (rhs, rhs_scale) = integral_with_scale(rhs_form, &cube)?;

    let top = Monomial::full(m);
    let top_residual = (lhs.coefficient(top) - rhs.coefficient(top)).abs();
    let mut lower_order_max = S::zero();
    for (mono, c) in lhs.terms().chain(rhs.terms()) {
        if mono != top && c.abs() > lower_order_max {
            lower_order_max = c.abs();
        }
    }
    let scale = lhs_scale.max(rhs_scale).max(lhs.max_magnitude()).max(rhs.max_magnitude());
    let pass = S::within(&top_residual, scale, tol) && S::within(&lower_order_max, scale, tol);
    Ok(VerificationReport {
        dim: n,
        degree: k,
        backend: S::BACKEND,
        tolerance: *tol,
        lhs,
        rhs,
        top_residual,
        lower_order_max,
        scale,
        pass,
    })
}

fn table<S: Scalar>(f: &mut fmt::Formatter<'_>, name: &str, w: &Weil<S>) -> fmt::Result {
    writeln!(f, "{name}:")?;
    let terms = w.terms_graded();
    if terms.is_empty() {
        writeln!(f, "  (zero)")?;
    }
    for (mono, c) in terms {
        writeln!(f, "  {:<12} {c}", mono.to_string())?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for VerificationReport<S> {
    /// Full coefficient tables of both sides, then the verdict.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim: {}  degree: {}  backend: {}", self.dim, self.degree, self.backend)?;
        table(f, "boundary integral", &self.lhs)?;
        table(f, "integral of d", &self.rhs)?;
        writeln!(f, "top_residual: {}", self.top_residual)?;
        writeln!(f, "lower_order_max: {}", self.lower_order_max)?;
        write!(f, "pass: {}", self.pass)
    }
}
