//! The algebra `R[e1..em]/(e1^2, ..., em^2)` of first-order infinitesimals.
//!
//! Every element is a finite sum of squarefree monomials. Monomials are
//! bitmasks over at most [`MAX_GENERATORS`] generators, so a repeated
//! generator cannot be represented at all and products that would create one
//! are simply dropped.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_GENERATORS: usize = 16;

/// A squarefree monomial `e_{i1} ... e_{ir}`, stored as a bitmask.
///
/// Generators are numbered from 1; bit `i - 1` stands for `e_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u32);

impl Monomial {
    /// The empty monomial (the real part).
    pub const ONE: Monomial = Monomial(0);

    pub fn generator(i: usize) -> Monomial {
        debug_assert!((1..=MAX_GENERATORS).contains(&i));
        Monomial(1 << (i - 1))
    }

    /// Product of the listed generators. Repeats are rejected: they denote
    /// the zero monomial, which has no bitmask.
    pub fn from_generators(gens: &[usize]) -> Result<Monomial> {
        let mut bits = 0u32;
        for &g in gens {
            if !(1..=MAX_GENERATORS).contains(&g) {
                return Err(Error::GeneratorIndex { index: g, m: MAX_GENERATORS });
            }
            let bit = 1 << (g - 1);
            if bits & bit != 0 {
                return Err(Error::MarkCollision(g));
            }
            bits |= bit;
        }
        Ok(Monomial(bits))
    }

    /// `e_1 e_2 ... e_m`.
    pub fn full(m: usize) -> Monomial {
        Monomial(if m == 0 { 0 } else { u32::MAX >> (32 - m) })
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, g: usize) -> bool {
        (1..=32).contains(&g) && self.0 & (1 << (g - 1)) != 0
    }

    pub fn is_disjoint(self, other: Monomial) -> bool {
        self.0 & other.0 == 0
    }

    /// Product, or `None` when a generator repeats.
    pub fn times(self, other: Monomial) -> Option<Monomial> {
        self.is_disjoint(other).then_some(Monomial(self.0 | other.0))
    }

    /// Generator indices in increasing order.
    pub fn generators(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// Highest generator index used, 0 for the empty monomial.
    pub fn max_generator(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Degree first, then lexicographic on the generator list.
    pub fn graded_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.generators().cmp(&other.generators()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.generators().iter().map(|g| format!("e{g}")).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Univariate functions that can be lifted to Weil elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Powi(u32),
}

impl Elementary {
    pub fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Exp => "exp",
            Elementary::Ln => "ln",
            Elementary::Sqrt => "sqrt",
            Elementary::Powi(_) => "powi",
        }
    }

    /// `f(a), f'(a), ..., f^(order)(a)`.
    pub fn derivatives<S: Scalar>(self, a: &S, order: usize) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(order + 1);
        match self {
            Elementary::Powi(p) => {
                // p (p-1) ... (p-k+1) a^(p-k)
                let mut falling = S::one();
                for k in 0..=order {
                    if k as u32 > p {
                        out.push(S::zero());
                        continue;
                    }
                    out.push(falling.clone() * powi(a, p - k as u32));
                    falling = falling * S::from_i64(p as i64 - k as i64);
                }
            }
            Elementary::Sin | Elementary::Cos => {
                let s = S::transcendental(Elementary::Sin, a)?;
                let c = S::transcendental(Elementary::Cos, a)?;
                let cycle = [s.clone(), c.clone(), -s, -c];
                let shift = if self == Elementary::Sin { 0 } else { 1 };
                out.extend((0..=order).map(|k| cycle[(k + shift) % 4].clone()));
            }
            Elementary::Exp => {
                let e = S::transcendental(Elementary::Exp, a)?;
                out.extend(std::iter::repeat_n(e, order + 1));
            }
            Elementary::Ln => {
                let value = S::transcendental(Elementary::Ln, a)?;
                if !a.is_positive() {
                    return Err(Error::Domain { func: "ln", value: a.to_string() });
                }
                out.push(value);
                // (-1)^(k-1) (k-1)! / a^k
                let inv = S::one().checked_div(a).ok_or(Error::NonUnit)?;
                let mut term = inv.clone();
                for k in 1..=order {
                    out.push(term.clone());
                    term = term * inv.clone() * S::from_i64(-(k as i64));
                }
            }
            Elementary::Sqrt => {
                let root = S::transcendental(Elementary::Sqrt, a)?;
                if !a.is_positive() {
                    return Err(Error::Domain { func: "sqrt", value: a.to_string() });
                }
                // c_k sqrt(a) / a^k with c_0 = 1, c_k = c_{k-1} (1/2 - (k-1))
                let inv = S::one().checked_div(a).ok_or(Error::NonUnit)?;
                let mut term = root;
                for k in 0..=order {
                    out.push(term.clone());
                    let factor = S::from_ratio(1 - 2 * k as i64, 2);
                    term = term * factor * inv.clone();
                }
            }
        }
        Ok(out)
    }
}

fn powi<S: Scalar>(base: &S, mut exp: u32) -> S {
    let mut acc = S::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

/// An element of the Weil algebra with `m` generators.
///
/// Coefficients are stored sparsely; exact zeros are dropped after every
/// operation, nothing else is.
#[derive(Debug, Clone, PartialEq)]
pub struct Weil<S> {
    m: usize,
    coeffs: BTreeMap<Monomial, S>,
}

fn check_m(m: usize) -> Result<()> {
    if m > MAX_GENERATORS {
        return Err(Error::GeneratorCount(m));
    }
    Ok(())
}

impl<S: Scalar> Weil<S> {
    pub fn zero(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Weil { m, coeffs: BTreeMap::new() })
    }

    pub fn one(m: usize) -> Result<Self> {
        Self::from_real(S::one(), m)
    }

    /// Embeds a scalar as the real part.
    pub fn from_real(c: S, m: usize) -> Result<Self> {
        check_m(m)?;
        let mut w = Weil { m, coeffs: BTreeMap::new() };
        w.set(Monomial::ONE, c);
        Ok(w)
    }

    /// The generator `e_i`, 1-based.
    pub fn generator(i: usize, m: usize) -> Result<Self> {
        check_m(m)?;
        if i == 0 || i > m {
            return Err(Error::GeneratorIndex { index: i, m });
        }
        Ok(Self::monomial(Monomial::generator(i), S::one(), m))
    }

    /// `c * monomial`; the monomial must only use generators `<= m`.
    pub fn monomial(mono: Monomial, c: S, m: usize) -> Self {
        debug_assert!(mono.max_generator() <= m);
        let mut w = Weil { m, coeffs: BTreeMap::new() };
        w.set(mono, c);
        w
    }

    /// Builds an element from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Result<Self> {
        let mut w = Self::zero(m)?;
        for (mono, c) in terms {
            if mono.max_generator() > m {
                return Err(Error::GeneratorIndex { index: mono.max_generator(), m });
            }
            let sum = w.coefficient(mono) + c;
            w.set(mono, sum);
        }
        Ok(w)
    }

    fn set(&mut self, mono: Monomial, c: S) {
        if c.is_zero() {
            self.coeffs.remove(&mono);
        } else {
            self.coeffs.insert(mono, c);
        }
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn coefficient(&self, mono: Monomial) -> S {
        self.coeffs.get(&mono).cloned().unwrap_or_else(S::zero)
    }

    pub fn real(&self) -> S {
        self.coefficient(Monomial::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &S)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    /// Nonzero terms ordered by degree, then generator list.
    pub fn terms_graded(&self) -> Vec<(Monomial, S)> {
        let mut out: Vec<_> = self.coeffs.iter().map(|(k, v)| (*k, v.clone())).collect();
        out.sort_by(|a, b| a.0.graded_cmp(&b.0));
        out
    }

    /// Union of all monomials carrying a nonzero coefficient.
    pub fn support(&self) -> Monomial {
        Monomial(self.coeffs.keys().fold(0, |acc, k| acc | k.0))
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::AlgebraMismatch { left: self.m, right: other.m });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (mono, c) in &other.coeffs {
            let sum = out.coefficient(*mono) + c.clone();
            out.set(*mono, sum);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut acc: BTreeMap<Monomial, S> = BTreeMap::new();
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                if let Some(mono) = ma.times(*mb) {
                    let term = ca.clone() * cb.clone();
                    match acc.get_mut(&mono) {
                        Some(slot) => *slot = slot.clone() + term,
                        None => {
                            acc.insert(mono, term);
                        }
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Weil { m: self.m, coeffs: acc })
    }

    fn neg_ref(&self) -> Self {
        Weil {
            m: self.m,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Weil { m: self.m, coeffs: BTreeMap::new() };
        for (mono, c) in &self.coeffs {
            out.set(*mono, c.clone() * s.clone());
        }
        out
    }

    /// The element minus its real part.
    pub fn nilpotent_part(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(&Monomial::ONE);
        out
    }

    pub fn powi(&self, exp: u32) -> Self {
        let mut acc = Weil::from_real(S::one(), self.m).expect("m already validated");
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Lifts a smooth function given its derivatives at the real part:
    /// `f(a + n) = sum_k f^(k)(a) n^k / k!`, which is finite since
    /// `n^(m+1) = 0`.
    pub fn lift(&self, derivatives: impl FnOnce(&S, usize) -> Result<Vec<S>>) -> Result<Self> {
        let a = self.real();
        let n = self.nilpotent_part();
        // n^k vanishes once k exceeds the number of generators n touches.
        let order = n.support().degree();
        let derivs = derivatives(&a, order)?;
        let mut out = Weil::zero(self.m)?;
        let mut power = Weil::from_real(S::one(), self.m)?;
        let mut factorial = S::one();
        for (k, d) in derivs.into_iter().enumerate().take(order + 1) {
            if k > 0 {
                power = &power * &n;
                factorial = factorial * S::from_i64(k as i64);
                if power.is_zero() {
                    break;
                }
            }
            let coeff = d.checked_div(&factorial).expect("factorial is nonzero");
            out = &out + &power.scale(&coeff);
        }
        Ok(out)
    }

    pub fn apply(&self, func: Elementary) -> Result<Self> {
        match func {
            Elementary::Powi(p) => Ok(self.powi(p)),
            _ => self.lift(|a, order| func.derivatives(a, order)),
        }
    }

    /// Multiplicative inverse; defined iff the real part is nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let a = self.real();
        if a.is_zero() {
            return Err(Error::NonUnit);
        }
        // d^k/dx^k (1/x) = (-1)^k k! / x^(k+1)
        self.lift(|a, order| {
            let inv = S::one().checked_div(a).ok_or(Error::NonUnit)?;
            let mut term = inv.clone();
            let mut out = Vec::with_capacity(order + 1);
            for k in 0..=order {
                out.push(term.clone());
                term = term * inv.clone() * S::from_i64(-(k as i64 + 1));
            }
            Ok(out)
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        self.try_mul(&other.inverse()?)
    }

    /// Renames generators: `e_i` becomes `e_{perm[i-1]}`. `perm` must be a
    /// permutation of `1..=m`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.m {
            return Err(Error::DimensionMismatch {
                what: "generator permutation",
                expected: self.m,
                found: perm.len(),
            });
        }
        let mut out = Weil::zero(self.m)?;
        for (mono, c) in &self.coeffs {
            let gens: Vec<usize> = mono.generators().iter().map(|g| perm[g - 1]).collect();
            out.set(Monomial::from_generators(&gens)?, c.clone());
        }
        Ok(out)
    }

    /// Same element viewed in an algebra with more generators.
    pub fn embed(&self, m: usize) -> Result<Self> {
        check_m(m)?;
        if self.support().max_generator() > m {
            return Err(Error::AlgebraMismatch { left: self.m, right: m });
        }
        Ok(Weil { m, coeffs: self.coeffs.clone() })
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<S: Scalar> $trait for &Weil<S> {
            type Output = Weil<S>;
            /// Panics if the operands live in different algebras; use the
            /// `try_` form to get an error instead.
            fn $method(self, rhs: &Weil<S>) -> Weil<S> {
                self.$try(rhs).expect("Weil operands must share a generator count")
            }
        }
        impl<S: Scalar> $trait for Weil<S> {
            type Output = Weil<S>;
            fn $method(self, rhs: Weil<S>) -> Weil<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<S: Scalar> Neg for Weil<S> {
    type Output = Weil<S>;
    fn neg(self) -> Weil<S> {
        self.neg_ref()
    }
}

impl<S: Scalar> Neg for &Weil<S> {
    type Output = Weil<S>;
    fn neg(self) -> Weil<S> {
        self.neg_ref()
    }
}

impl<S: Scalar> fmt::Display for Weil<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms_graded();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if mono.degree() == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}
