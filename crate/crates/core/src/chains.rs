//! Infinitesimal parallelepipeds, their faces and boundaries, and integrals
//! of forms over them.
//!
//! A marked microcube `(gamma; e1, ..., ek)` pairs the affine map
//! `(d1, ..., dk) -> x + sum_i a^i d_i` with k distinct Weil generators.
//! Its integral against a k-form is
//!
//! ```text
//! sum_I f_I(x) * det(minor I of a^1..a^k) * e1 ... ek
//! ```
//!
//! where the base `x` may itself be Weil-valued (faces taken at a mark).

use crate::alternating::minor;
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::scalar::Scalar;
use crate::weil::{Monomial, Weil};

/// Where a face is taken along its direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceAt {
    Zero,
    /// At the given generator `e_g` (1-based).
    Mark(usize),
}

/// `gamma(d1, ..., dk) = base + sum_i tangents[i] d_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Microcube<S> {
    base: Vec<Weil<S>>,
    tangents: Vec<Vec<S>>,
}

impl<S: Scalar> Microcube<S> {
    /// A microcube with a real base point, living in an algebra with `m` generators.
    pub fn new(base: &[S], tangents: Vec<Vec<S>>, m: usize) -> Result<Self> {
        let base = base
            .iter()
            .map(|c| Weil::from_real(c.clone(), m))
            .collect::<Result<Vec<_>>>()?;
        Self::with_weil_base(base, tangents)
    }

    pub fn with_weil_base(base: Vec<Weil<S>>, tangents: Vec<Vec<S>>) -> Result<Self> {
        let n = base.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { what: "base point length", expected: 1, found: 0 });
        }
        let m = base[0].generators();
        if let Some(bad) = base.iter().find(|w| w.generators() != m) {
            return Err(Error::AlgebraMismatch { left: m, right: bad.generators() });
        }
        if let Some(t) = tangents.iter().find(|t| t.len() != n) {
            return Err(Error::DimensionMismatch { what: "tangent length", expected: n, found: t.len() });
        }
        if tangents.len() > n {
            return Err(Error::DegreeOutOfRange { degree: tangents.len(), dim: n });
        }
        Ok(Microcube { base, tangents })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn degree(&self) -> usize {
        self.tangents.len()
    }

    pub fn generators(&self) -> usize {
        self.base[0].generators()
    }

    pub fn base(&self) -> &[Weil<S>] {
        &self.base
    }

    pub fn tangents(&self) -> &[Vec<S>] {
        &self.tangents
    }

    /// The face `gamma^i_at`: direction `i` (1-based) frozen at 0 or at a mark.
    pub fn face(&self, i: usize, at: FaceAt) -> Result<Microcube<S>> {
        if i == 0 || i > self.degree() {
            return Err(Error::DimensionMismatch { what: "face direction", expected: self.degree(), found: i });
        }
        let mut tangents = self.tangents.clone();
        let dropped = tangents.remove(i - 1);
        let base = match at {
            FaceAt::Zero => self.base.clone(),
            FaceAt::Mark(g) => {
                let e = Weil::generator(g, self.generators())?;
                self.base
                    .iter()
                    .zip(&dropped)
                    .map(|(b, a)| b + &e.scale(a))
                    .collect()
            }
        };
        Ok(Microcube { base, tangents })
    }

    /// Moves the base point by renaming generators, see [`Weil::relabel`].
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        Ok(Microcube {
            base: self.base.iter().map(|b| b.relabel(perm)).collect::<Result<_>>()?,
            tangents: self.tangents.clone(),
        })
    }
}

/// A microcube together with one distinct generator per direction.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedMicrocube<S> {
    cube: Microcube<S>,
    marks: Vec<usize>,
}

impl<S: Scalar> MarkedMicrocube<S> {
    pub fn new(cube: Microcube<S>, marks: Vec<usize>) -> Result<Self> {
        if marks.len() != cube.degree() {
            return Err(Error::DimensionMismatch { what: "mark count", expected: cube.degree(), found: marks.len() });
        }
        if let Some(&g) = marks.iter().find(|&&g| g == 0 || g > cube.generators()) {
            return Err(Error::GeneratorIndex { index: g, m: cube.generators() });
        }
        Monomial::from_generators(&marks)?;
        Ok(MarkedMicrocube { cube, marks })
    }

    /// Marks `e1, ..., ek` in order.
    pub fn standard(cube: Microcube<S>) -> Result<Self> {
        let marks = (1..=cube.degree()).collect();
        Self::new(cube, marks)
    }

    pub fn cube(&self) -> &Microcube<S> {
        &self.cube
    }

    pub fn marks(&self) -> &[usize] {
        &self.marks
    }

    pub fn degree(&self) -> usize {
        self.cube.degree()
    }

    /// The product of the marks, `e_{g1} ... e_{gk}`.
    pub fn mark_monomial(&self) -> Monomial {
        Monomial::from_generators(&self.marks).expect("marks are distinct")
    }

    /// `sum_i (-1)^i { (gamma^i_0; ..^e_i..) - (gamma^i_{e_i}; ..^e_i..) }`.
    pub fn boundary(&self) -> Chain<S> {
        let mut terms = Vec::with_capacity(2 * self.degree());
        for i in 1..=self.degree() {
            let mut rest = self.marks.clone();
            let mark = rest.remove(i - 1);
            let sign: i8 = if i % 2 == 0 { 1 } else { -1 };
            let zero = self.cube.face(i, FaceAt::Zero).expect("direction in range");
            let at_mark = self.cube.face(i, FaceAt::Mark(mark)).expect("direction in range");
            terms.push((sign, MarkedMicrocube { cube: zero, marks: rest.clone() }));
            terms.push((-sign, MarkedMicrocube { cube: at_mark, marks: rest }));
        }
        Chain { generators: self.cube.generators(), terms }
    }

    /// Renames generators in both the base point and the marks.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let marks = self.marks.iter().map(|&g| perm[g - 1]).collect();
        Self::new(self.cube.relabel(perm)?, marks)
    }
}

/// A formal signed sum of marked microcubes in one Weil algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<S> {
    generators: usize,
    terms: Vec<(i8, MarkedMicrocube<S>)>,
}

impl<S: Scalar> Chain<S> {
    pub fn empty(generators: usize) -> Self {
        Chain { generators, terms: Vec::new() }
    }

    pub fn new(generators: usize, terms: Vec<(i8, MarkedMicrocube<S>)>) -> Result<Self> {
        if let Some((first, rest)) = terms.split_first() {
            let (n, k) = (first.1.cube.dim(), first.1.degree());
            if let Some((_, t)) = rest.iter().find(|(_, t)| t.cube.dim() != n || t.degree() != k) {
                return Err(Error::DimensionMismatch { what: "chain term degree", expected: k, found: t.degree() });
            }
        }
        if let Some((_, t)) = terms.iter().find(|(_, t)| t.cube.generators() != generators) {
            return Err(Error::AlgebraMismatch { left: generators, right: t.cube.generators() });
        }
        if let Some((s, _)) = terms.iter().find(|(s, _)| *s != 1 && *s != -1) {
            return Err(Error::Config(format!("chain sign must be +1 or -1, got {s}")));
        }
        Ok(Chain { generators, terms })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn terms(&self) -> &[(i8, MarkedMicrocube<S>)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn boundary(&self) -> Chain<S> {
        let mut terms = Vec::new();
        for (sign, cube) in &self.terms {
            for (s, face) in cube.boundary().terms {
                terms.push((sign * s, face));
            }
        }
        Chain { generators: self.generators, terms }
    }

    /// Cancels pairs of structurally equal terms with opposite signs.
    pub fn reduce(&self) -> Chain<S> {
        let mut kept: Vec<(i8, MarkedMicrocube<S>)> = Vec::new();
        for (sign, cube) in &self.terms {
            if let Some(pos) = kept.iter().position(|(s, c)| *s == -sign && c == cube) {
                kept.remove(pos);
            } else {
                kept.push((*sign, cube.clone()));
            }
        }
        Chain { generators: self.generators, terms: kept }
    }
}

/// `integral over (gamma; marks) of omega`.
pub fn integral<S: Scalar>(form: &DifferentialForm, cube: &MarkedMicrocube<S>) -> Result<Weil<S>> {
    Ok(integral_with_scale(form, cube)?.0)
}

/// The integral together with the largest magnitude of any summand, used as
/// the scale of float comparisons.
pub(crate) fn integral_with_scale<S: Scalar>(
    form: &DifferentialForm,
    cube: &MarkedMicrocube<S>,
) -> Result<(Weil<S>, f64)> {
    let gamma = &cube.cube;
    if form.degree() != gamma.degree() {
        return Err(Error::DimensionMismatch { what: "form degree vs cube degree", expected: gamma.degree(), found: form.degree() });
    }
    if form.dim() != gamma.dim() {
        return Err(Error::DimensionMismatch { what: "form dimension vs cube dimension", expected: gamma.dim(), found: form.dim() });
    }
    let m = gamma.generators();
    let marks = cube.mark_monomial();
    let base_support = gamma.base.iter().map(Weil::support).fold(0u32, |acc, s| acc | s.bits());
    if let Some(&g) = cube.marks.iter().find(|&&g| base_support & (1 << (g - 1)) != 0) {
        return Err(Error::MarkCollision(g));
    }
    let mark_product = Weil::monomial(marks, S::one(), m);
    let mut acc = Weil::zero(m)?;
    let mut scale = 0.0f64;
    for (index, field) in form.terms() {
        let det = minor(&gamma.tangents, index);
        if det.is_zero() {
            continue;
        }
        let value = field.eval(&gamma.base)?.scale(&det);
        scale = scale.max(value.max_magnitude());
        acc = &acc + &value;
    }
    Ok((&acc * &mark_product, scale))
}

/// Signed sum of the term integrals.
pub fn integral_chain<S: Scalar>(form: &DifferentialForm, chain: &Chain<S>) -> Result<Weil<S>> {
    Ok(integral_chain_with_scale(form, chain)?.0)
}

pub(crate) fn integral_chain_with_scale<S: Scalar>(
    form: &DifferentialForm,
    chain: &Chain<S>,
) -> Result<(Weil<S>, f64)> {
    let mut acc = Weil::zero(chain.generators)?;
    let mut scale = 0.0f64;
    for (sign, cube) in &chain.terms {
        let (value, s) = integral_with_scale(form, cube)?;
        scale = scale.max(s);
        acc = if *sign < 0 { acc.try_sub(&value)? } else { acc.try_add(&value)? };
    }
    Ok((acc, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::stokes::random::{random_form, random_point, random_tangents, trial_rng, FieldPool};
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn plane() -> Microcube<Rational> {
        Microcube::new(&qv(&[1, 2, 3]), vec![qv(&[1, 0, 2]), qv(&[0, 3, 1])], 2).unwrap()
    }

    #[test]
    fn faces() {
        let g = plane();
        let f0 = g.face(1, FaceAt::Zero).unwrap();
        assert_eq!(f0.base(), g.base());
        assert_eq!(f0.tangents(), &[qv(&[0, 3, 1])]);

        let f1 = g.face(1, FaceAt::Mark(1)).unwrap();
        let e1 = Weil::<Rational>::generator(1, 2).unwrap();
        let expected: Vec<_> = g.base().iter().zip(qv(&[1, 0, 2])).map(|(b, a)| b + &e1.scale(&a)).collect();
        assert_eq!(f1.base(), &expected[..]);
        assert_eq!(f1.tangents(), &[qv(&[0, 3, 1])]);

        assert!(g.face(0, FaceAt::Zero).is_err());
        assert!(g.face(3, FaceAt::Zero).is_err());
    }

    #[test]
    fn segment_boundary() {
        let t = Microcube::new(&qv(&[4]), vec![qv(&[3])], 1).unwrap();
        let chain = MarkedMicrocube::standard(t).unwrap().boundary();
        assert_eq!(chain.terms().len(), 2);
        let (s0, c0) = &chain.terms()[0];
        let (s1, c1) = &chain.terms()[1];
        assert_eq!((*s0, *s1), (-1, 1));
        assert_eq!(c0.cube().base()[0].to_string(), Weil::from_real(q(4), 1).unwrap().to_string());
        assert_eq!(c1.cube().base()[0].coefficient(Monomial::generator(1)), q(3));
        assert!(c0.marks().is_empty() && c1.marks().is_empty());

        // phi(x + a e) - phi(x) = phi'(x) a e
        let phi = DifferentialForm::parse("x**3", 1).unwrap();
        let value = integral_chain(&phi, &chain).unwrap();
        assert_eq!(value.coefficient(Monomial::generator(1)), q(3 * 16 * 3));
        assert_eq!(value.real(), q(0));
    }

    #[test]
    fn parallelogram_boundary_signs() {
        let chain = MarkedMicrocube::standard(plane()).unwrap().boundary();
        let signs: Vec<i8> = chain.terms().iter().map(|t| t.0).collect();
        assert_eq!(signs, vec![-1, 1, 1, -1]);
        let marks: Vec<Vec<usize>> = chain.terms().iter().map(|t| t.1.marks().to_vec()).collect();
        assert_eq!(marks, vec![vec![2], vec![2], vec![1], vec![1]]);
    }

    #[test]
    fn solid_boundary_signs() {
        let cube = Microcube::new(&qv(&[0, 0, 0]), vec![qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 1])], 3).unwrap();
        let chain = MarkedMicrocube::standard(cube).unwrap().boundary();
        let signs: Vec<i8> = chain.terms().iter().map(|t| t.0).collect();
        assert_eq!(signs, vec![-1, 1, 1, -1, -1, 1]);
    }

    #[test]
    fn integral_examples() {
        let t = Microcube::new(&qv(&[5, 6, 7]), vec![qv(&[2, 3, 4])], 1).unwrap();
        let dx = DifferentialForm::parse("dx", 3).unwrap();
        let v = integral(&dx, &MarkedMicrocube::standard(t).unwrap()).unwrap();
        assert_eq!(v, Weil::monomial(Monomial::generator(1), q(2), 1));

        let p = Microcube::new(&qv(&[2, 5]), vec![], 0).unwrap();
        let phi = DifferentialForm::parse("x*y", 2).unwrap();
        assert_eq!(integral(&phi, &MarkedMicrocube::standard(p).unwrap()).unwrap().real(), q(10));

        let g = plane();
        let w = DifferentialForm::parse("dy^dz", 3).unwrap();
        let v = integral(&w, &MarkedMicrocube::standard(g).unwrap()).unwrap();
        let e12 = Monomial::from_generators(&[1, 2]).unwrap();
        assert_eq!(v, Weil::monomial(e12, q(-6), 2));
    }

    #[test]
    fn four_face_example() {
        let g = Microcube::new(&qv(&[0, 0, 0]), vec![qv(&[1, 0, 0]), qv(&[0, 1, 0])], 2).unwrap();
        let chain = MarkedMicrocube::standard(g).unwrap().boundary();
        let w = DifferentialForm::parse("x*dy", 3).unwrap();
        let v = integral_chain(&w, &chain).unwrap();
        assert_eq!(v, Weil::monomial(Monomial::from_generators(&[1, 2]).unwrap(), q(1), 2));
    }

    #[test]
    fn empty_chain_integrates_to_zero() {
        let w = DifferentialForm::parse("dx", 2).unwrap();
        assert!(integral_chain::<Rational>(&w, &Chain::empty(2)).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let g = plane();
        assert!(matches!(MarkedMicrocube::new(g.clone(), vec![1, 1]), Err(Error::MarkCollision(1))));
        assert!(MarkedMicrocube::new(g.clone(), vec![1]).is_err());
        assert!(MarkedMicrocube::new(g.clone(), vec![1, 3]).is_err());
        let dx = DifferentialForm::parse("dx", 3).unwrap();
        assert!(integral(&dx, &MarkedMicrocube::standard(g.clone()).unwrap()).is_err());
        // a mark already present in the base point
        let face = g.face(1, FaceAt::Mark(1)).unwrap();
        let bad = MarkedMicrocube::new(face, vec![1]).unwrap();
        assert!(matches!(integral(&dx, &bad), Err(Error::MarkCollision(1))));
        assert!(Microcube::new(&qv(&[1, 2]), vec![qv(&[1])], 1).is_err());
    }

    fn random_cube(seed: u64, n: usize, k: usize) -> MarkedMicrocube<Rational> {
        let mut rng = trial_rng(seed, 0);
        let x: Vec<Rational> = random_point(&mut rng, n, FieldPool::Polynomial);
        let t = random_tangents(&mut rng, n, k);
        MarkedMicrocube::standard(Microcube::new(&x, t, k).unwrap()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn boundary_of_boundary_cancels(seed in any::<u64>(), k in 1usize..=5) {
            let cube = random_cube(seed, 5, k);
            let dd = cube.boundary().boundary();
            prop_assert_eq!(dd.terms().len(), 4 * k * (k - 1));
            prop_assert!(dd.reduce().is_empty());
        }

        #[test]
        fn only_top_monomial_survives(seed in any::<u64>(), n in 1usize..=4, k_raw in 0usize..4) {
            let k = k_raw % n;
            let cube = random_cube(seed, n, k + 1);
            let mut rng = trial_rng(seed, 1);
            let w = random_form(&mut rng, n, k, FieldPool::Polynomial);
            let v = integral_chain(&w, &cube.boundary()).unwrap();
            let top = cube.mark_monomial();
            for (mono, _) in v.terms() {
                prop_assert_eq!(mono, top);
            }
        }

        #[test]
        fn relabeling_commutes(seed in any::<u64>(), k in 1usize..=3) {
            let cube = random_cube(seed, 3, k);
            let mut rng = trial_rng(seed, 2);
            let w = random_form(&mut rng, 3, k - 1, FieldPool::Polynomial);
            let perm: Vec<usize> = (1..=k).rev().collect();
            let direct = integral_chain(&w, &cube.relabel(&perm).unwrap().boundary()).unwrap();
            let moved = integral_chain(&w, &cube.boundary()).unwrap().relabel(&perm).unwrap();
            prop_assert_eq!(direct, moved);
        }
    }
}
