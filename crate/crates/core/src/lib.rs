//! Differential forms over first-order infinitesimals.
//!
//! Quantities whose squares vanish are modelled exactly by the Weil algebra
//! `R[e1..em]/(e1^2, ..., em^2)` ([`weil`]). Scalar fields are expressions
//! ([`expr`]) that evaluate on reals, rationals or Weil elements, so a field
//! evaluated at `x + a e` yields its directional derivative as the
//! coefficient of `e`. On top of that the crate builds alternating maps,
//! differential forms, marked microcubes with their boundaries, and a
//! verifier for the infinitesimal Stokes identity
//!
//! ```text
//! integral over d(gamma; e1..e_{k+1}) of omega  ==  integral over (gamma; e1..e_{k+1}) of d omega
//! ```
//!
//! for forms of every degree, together with the grad/curl/div dictionary.

pub mod alternating;
pub mod chains;
pub mod error;
pub mod expr;
pub mod forms;
pub mod scalar;
pub mod stokes;
pub mod weil;

pub use alternating::{check_alternating, extract_from_function, AlternatingMap, AlternatingReport};
pub use chains::{integral, integral_chain, Chain, FaceAt, MarkedMicrocube, Microcube};
pub use error::{Error, Result};
pub use expr::{parse_scalar, Carrier, Expr, Func, Literal, ScalarField};
pub use forms::{parse_form, DifferentialForm, ParsedForm};
pub use scalar::{Backend, Rational, Scalar, Tolerance};
pub use stokes::{verify, verify_with_rhs, VectorField3, VerificationReport};
pub use weil::{Elementary, Monomial, Weil};
