//! Seeded generators for random fields, forms and microcubes.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alternating::combinations;
use crate::expr::{Expr, Func, Literal, ScalarField};
use crate::forms::DifferentialForm;
use crate::scalar::Scalar;

/// Which coefficient fields the generators draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldPool {
    /// Rational coefficients in [-9, 9], total degree at most 4.
    Polynomial,
    /// Polynomial terms, some multiplied by sin/cos/exp of a coordinate or a
    /// coordinate difference. Float backend only.
    Transcendental,
}

impl std::str::FromStr for FieldPool {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "polynomial" => Ok(FieldPool::Polynomial),
            "transcendental" => Ok(FieldPool::Transcendental),
            other => Err(crate::Error::Config(format!("unknown field pool `{other}`"))),
        }
    }
}

/// Independent generator for one trial; streams never overlap.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn rational_literal(rng: &mut impl Rng) -> Expr {
    let mut p: i64 = 0;
    while p == 0 {
        p = rng.random_range(-9..=9);
    }
    let q: i64 = rng.random_range(1..=3);
    Expr::lit(Literal::Rational(BigRational::new(BigInt::from(p), BigInt::from(q))))
}

fn random_monomial(rng: &mut impl Rng, n: usize) -> Expr {
    let degree = rng.random_range(0..=4);
    let mut exps = vec![0u32; n];
    for _ in 0..degree {
        exps[rng.random_range(0..n)] += 1;
    }
    exps.iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .fold(Expr::one(), |acc, (i, e)| Expr::mul(acc, Expr::pow(Expr::Var(i), *e)))
}

fn random_transcendental(rng: &mut impl Rng, n: usize) -> Expr {
    let func = [Func::Sin, Func::Cos, Func::Exp][rng.random_range(0..3)];
    let i = rng.random_range(0..n);
    let arg = if n > 1 && rng.random_bool(0.5) {
        let j = (i + rng.random_range(1..n)) % n;
        Expr::sub(Expr::Var(i), Expr::Var(j))
    } else {
        Expr::Var(i)
    };
    Expr::call(func, arg)
}

pub fn random_field(rng: &mut impl Rng, n: usize, pool: FieldPool) -> ScalarField {
    let terms = rng.random_range(1..=4);
    let mut acc = Expr::zero();
    for _ in 0..terms {
        let mut term = Expr::mul(rational_literal(rng), random_monomial(rng, n));
        if pool == FieldPool::Transcendental && rng.random_bool(0.6) {
            term = Expr::mul(term, random_transcendental(rng, n));
        }
        acc = Expr::add(acc, term);
    }
    ScalarField::new(n, acc).expect("variables drawn below n")
}

/// A random k-form; each coefficient is zero with probability 1/4.
pub fn random_form(rng: &mut impl Rng, n: usize, k: usize, pool: FieldPool) -> DifferentialForm {
    let terms: Vec<_> = combinations(n, k)
        .into_iter()
        .filter_map(|index| {
            let keep = rng.random_bool(0.75);
            let field = random_field(rng, n, pool);
            keep.then_some((index, field))
        })
        .collect();
    DifferentialForm::from_terms(n, k, terms).expect("shapes are consistent")
}

/// Coordinates `p/q` with `|p| <= 6`, `q <= 3` (rational) or in [-2, 2] with
/// `q <= 4` for transcendental fields.
pub fn random_point<S: Scalar>(rng: &mut impl Rng, n: usize, pool: FieldPool) -> Vec<S> {
    let bound = if pool == FieldPool::Transcendental { 8 } else { 6 };
    let den = if pool == FieldPool::Transcendental { 4 } else { 3 };
    (0..n)
        .map(|_| S::from_ratio(rng.random_range(-bound..=bound), rng.random_range(1..=den)))
        .collect()
}

/// `count` tangent vectors with entries `p/q`, `|p| <= 3`, `q <= 2`.
pub fn random_tangents<S: Scalar>(rng: &mut impl Rng, n: usize, count: usize) -> Vec<Vec<S>> {
    (0..count)
        .map(|_| (0..n).map(|_| S::from_ratio(rng.random_range(-3..=3), rng.random_range(1..=2))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn generators_are_deterministic() {
        let a = random_form(&mut trial_rng(5, 1), 4, 2, FieldPool::Transcendental);
        let b = random_form(&mut trial_rng(5, 1), 4, 2, FieldPool::Transcendental);
        assert_eq!(a, b);
        let c = random_form(&mut trial_rng(5, 2), 4, 2, FieldPool::Transcendental);
        assert_ne!(a, c);
    }

    #[test]
    fn polynomial_pool_is_exact() {
        let mut rng = trial_rng(9, 0);
        for _ in 0..50 {
            let f = random_field(&mut rng, 3, FieldPool::Polynomial);
            assert!(!f.expr().has_float());
            let x: Vec<Rational> = random_point(&mut rng, 3, FieldPool::Polynomial);
            assert!(f.eval(&x).is_ok(), "{f}");
        }
    }
}
