use nilform::stokes::random::{random_field, random_form, random_point, random_tangents, trial_rng, FieldPool};
use nilform::{
    parse_scalar, AlternatingMap, DifferentialForm, Expr, Microcube, Monomial, Rational, Scalar, ScalarField,
    Tolerance, Weil,
};
use proptest::prelude::*;

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn monomial(bits: u32) -> Monomial {
    let gens: Vec<usize> = (0..16).filter(|i| bits & (1 << i) != 0).map(|i| i + 1).collect();
    Monomial::from_generators(&gens).unwrap()
}

fn weil_strategy(m: usize) -> impl Strategy<Value = Weil<Rational>> {
    proptest::collection::vec((0u32..(1 << m), -6i64..=6, 1i64..=3), 0..6).prop_map(move |terms| {
        Weil::from_terms(m, terms.into_iter().map(|(bits, p, d)| (monomial(bits), Rational::from_ratio(p, d)))).unwrap()
    })
}

fn algebra_triple() -> impl Strategy<Value = (Weil<Rational>, Weil<Rational>, Weil<Rational>)> {
    (1usize..=4).prop_flat_map(|m| (weil_strategy(m), weil_strategy(m), weil_strategy(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weil_ring_laws((a, b, c) in algebra_triple()) {
        let m = a.generators();
        let zero = Weil::zero(m).unwrap();
        let one = Weil::one(m).unwrap();
        prop_assert!((&a * &zero).is_zero());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nilpotent_elements_vanish_at_power_m_plus_one((a, _, _) in algebra_triple()) {
        let m = a.generators();
        let n = a.nilpotent_part();
        prop_assert!(n.powi(m as u32 + 1).is_zero());
        let mut product = Weil::one(m).unwrap();
        for _ in 0..=m {
            product = &product * &n;
        }
        prop_assert!(product.is_zero());
    }

    #[test]
    fn lift_matches_ring_evaluation(seed in any::<u64>(), (w, _, _) in algebra_triple()) {
        let mut rng = trial_rng(seed, 0);
        let p = random_field(&mut rng, 1, FieldPool::Polynomial);
        let direct: Weil<Rational> = p.eval(std::slice::from_ref(&w)).unwrap();
        // Taylor lift with derivatives taken symbolically
        let lifted = w
            .lift(|a, order| {
                let mut field = p.clone();
                let mut out = Vec::with_capacity(order + 1);
                for _ in 0..=order {
                    out.push(field.eval(std::slice::from_ref(a))?);
                    field = field.diff(0);
                }
                Ok(out)
            })
            .unwrap();
        prop_assert_eq!(direct, lifted);
    }

    #[test]
    fn derivative_coefficient_matches_central_difference(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = trial_rng(seed, 1);
        let phi = random_field(&mut rng, n, FieldPool::Transcendental);
        let x: Vec<f64> = random_point(&mut rng, n, FieldPool::Transcendental);
        let a: Vec<f64> = random_tangents(&mut rng, n, 1).remove(0);
        let e = Weil::<f64>::generator(1, 1).unwrap();
        let moved: Vec<Weil<f64>> = x.iter().zip(&a).map(|(&xi, &ai)| &Weil::from_real(xi, 1).unwrap() + &e.scale(&ai)).collect();
        let exact = phi.eval(&moved).unwrap().coefficient(Monomial::generator(1));

        let h = 1e-5;
        let shifted = |s: f64| -> f64 {
            let p: Vec<f64> = x.iter().zip(&a).map(|(xi, ai)| xi + s * ai).collect();
            phi.eval(&p).unwrap()
        };
        let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        let scale = exact.abs().max(phi.eval(&x).unwrap().abs()).max(1.0);
        prop_assert!((exact - fd).abs() <= 1e-6 * scale, "exact {exact} fd {fd}");
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = trial_rng(seed, 2);
        let f = random_field(&mut rng, n, FieldPool::Transcendental);
        let text = f.to_string();
        let parsed = parse_scalar(&text, n).unwrap();
        let again = parse_scalar(&parsed.to_string(), n).unwrap();
        prop_assert_eq!(again.expr(), parsed.expr());
    }

    #[test]
    fn symbolic_derivative_matches_weil_coefficient(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = trial_rng(seed, 3);
        let f = random_field(&mut rng, n, FieldPool::Polynomial);
        let x: Vec<Rational> = random_point(&mut rng, n, FieldPool::Polynomial);
        for i in 0..n {
            let symbolic = f.diff(i).eval(&x).unwrap();
            let point: Vec<Weil<Rational>> = x
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let base = Weil::from_real(c.clone(), 1).unwrap();
                    if j == i { &base + &Weil::generator(1, 1).unwrap() } else { base }
                })
                .collect();
            let extracted = f.eval(&point).unwrap().coefficient(Monomial::generator(1));
            prop_assert_eq!(symbolic, extracted);
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = trial_rng(seed, 4);
        let f = random_field(&mut rng, n, FieldPool::Polynomial);
        let g = random_field(&mut rng, n, FieldPool::Polynomial);
        let x: Vec<Rational> = random_point(&mut rng, n, FieldPool::Polynomial);
        let sum = ScalarField::new(n, Expr::add(f.expr().clone(), g.expr().clone())).unwrap();
        let product = ScalarField::new(n, Expr::mul(f.expr().clone(), g.expr().clone())).unwrap();
        let (fx, gx) = (f.eval(&x).unwrap(), g.eval(&x).unwrap());
        prop_assert_eq!(sum.eval(&x).unwrap(), fx.clone() + gx.clone());
        prop_assert_eq!(product.eval(&x).unwrap(), fx * gx);
    }

    #[test]
    fn d_is_linear(seed in any::<u64>(), n in 2usize..=4, k_raw in 0usize..3) {
        let k = k_raw % n;
        let mut rng = trial_rng(seed, 5);
        let w = random_form(&mut rng, n, k, FieldPool::Polynomial);
        let eta = random_form(&mut rng, n, k, FieldPool::Polynomial);
        let (a, b) = (Expr::int(3), Expr::int(-2));
        let x: Vec<Rational> = random_point(&mut rng, n, FieldPool::Polynomial);
        let combined = w.scale(&a).add(&eta.scale(&b)).unwrap().d().unwrap().at(&x).unwrap();
        let split = w.d().unwrap().at(&x).unwrap().scale(&q(3))
            .try_add(&eta.d().unwrap().at(&x).unwrap().scale(&q(-2))).unwrap();
        prop_assert_eq!(combined, split);
    }

    #[test]
    fn scaling_tangents_scales_both_sides(seed in any::<u64>(), k in 0usize..=2) {
        let mut rng = trial_rng(seed, 6);
        let w = random_form(&mut rng, 3, k, FieldPool::Polynomial);
        let x: Vec<Rational> = random_point(&mut rng, 3, FieldPool::Polynomial);
        let t: Vec<Vec<Rational>> = random_tangents(&mut rng, 3, k + 1);
        let lambdas: Vec<Rational> = (0..=k).map(|i| q(i as i64 + 2)).collect();
        let scaled: Vec<Vec<Rational>> = t.iter().zip(&lambdas).map(|(v, l)| v.iter().map(|c| c.clone() * l.clone()).collect()).collect();
        let tol = Tolerance::default();
        let plain = nilform::verify(&w, &Microcube::new(&x, t, k + 1).unwrap(), &tol).unwrap();
        let big = nilform::verify(&w, &Microcube::new(&x, scaled, k + 1).unwrap(), &tol).unwrap();
        let top = Monomial::full(k + 1);
        let factor = lambdas.iter().fold(q(1), |acc, l| acc * l.clone());
        prop_assert!(plain.pass && big.pass);
        prop_assert_eq!(big.lhs.coefficient(top), plain.lhs.coefficient(top) * factor.clone());
        prop_assert_eq!(big.rhs.coefficient(top), plain.rhs.coefficient(top) * factor);
    }
}

#[test]
fn zero_form_d_is_the_gradient() {
    let phi = DifferentialForm::parse("x1**2*x3 + sin(x2)", 3).unwrap();
    let dphi = phi.d().unwrap();
    for i in 0..3 {
        assert_eq!(dphi.coefficient(&[i]), phi.coefficient(&[]).diff(i));
    }
}

#[test]
fn basis_forms_evaluate_to_minors() {
    let v = vec![vec![q(1), q(2), q(0)], vec![q(0), q(1), q(5)]];
    let m = AlternatingMap::<Rational>::basis(3, &[0, 2]).unwrap();
    assert_eq!(m.eval(&v).unwrap(), q(5));
}
