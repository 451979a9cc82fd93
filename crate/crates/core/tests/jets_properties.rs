//! Property tests of the jet arithmetic and the finite-difference
//! cross-check of its partials.

use hkahler_core::dsl::{eval_jet, parse, ParameterTable};
use hkahler_core::fdcheck::{fd_partial, relative_error, step_for_order, validation_corpus};
use hkahler_core::jets::{ComplexJet, MultiIndex};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Jet = ComplexJet<f64>;

fn jet_from_coeffs(order: usize, coeffs: &[(MultiIndex, Complex64)]) -> Jet {
    let mut jet = Jet::constant(Complex64::new(0.0, 0.0), order);
    for (m, c) in coeffs {
        // build by adding scaled monomial seeds: value + products of variables
        let mut mono = Jet::constant(*c, order);
        for var in 0..4 {
            for _ in 0..m.0[var] {
                let v = Jet::variable(Complex64::new(0.0, 0.0), var, order).unwrap();
                mono = &mono * &v;
            }
        }
        jet = &jet + &mono;
    }
    jet
}

fn arb_multi_index(order: usize) -> impl Strategy<Value = MultiIndex> {
    (0..=order, 0..=order, 0..=order, 0..=order)
        .prop_filter("degree within order", move |(a, b, c, d)| {
            a + b + c + d <= order
        })
        .prop_map(|(a, b, c, d)| MultiIndex([a as u8, b as u8, c as u8, d as u8]))
}

fn arb_int_jet(order: usize) -> impl Strategy<Value = Jet> {
    prop::collection::vec((arb_multi_index(order), -4i32..=4), 1..6)
        .prop_map(move |entries| {
            let coeffs: Vec<_> = entries
                .into_iter()
                .map(|(m, k)| (m, Complex64::new(k as f64, 0.0)))
                .collect();
            jet_from_coeffs(order, &coeffs)
        })
}

fn arb_float_jet(order: usize) -> impl Strategy<Value = Jet> {
    prop::collection::vec(
        (arb_multi_index(order), -2.0f64..2.0, -2.0f64..2.0),
        1..6,
    )
    .prop_map(move |entries| {
        let coeffs: Vec<_> = entries
            .into_iter()
            .map(|(m, re, im)| (m, Complex64::new(re, im)))
            .collect();
        jet_from_coeffs(order, &coeffs)
    })
}

fn max_coeff_diff(a: &Jet, b: &Jet) -> f64 {
    let mut max = 0.0f64;
    let table_order = a.order();
    for k1 in 0..=table_order {
        for k2 in 0..=table_order - k1 {
            for k3 in 0..=table_order - k1 - k2 {
                for k4 in 0..=table_order - k1 - k2 - k3 {
                    let m = MultiIndex([k1 as u8, k2 as u8, k3 as u8, k4 as u8]);
                    let d = (a.coeff(&m).unwrap() - b.coeff(&m).unwrap()).norm();
                    max = max.max(d);
                }
            }
        }
    }
    max
}

proptest! {
    #[test]
    fn multiplication_commutes_exactly(a in arb_float_jet(3), b in arb_float_jet(3)) {
        let ab = &a * &b;
        let ba = &b * &a;
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn multiplication_associates_exactly_on_integer_jets(
        a in arb_int_jet(3),
        b in arb_int_jet(3),
        c in arb_int_jet(3),
    ) {
        // small-integer coefficients keep every intermediate exact in f64,
        // and truncation cannot reintroduce dropped degrees
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn distributivity_on_integer_jets(
        a in arb_int_jet(3),
        b in arb_int_jet(3),
        c in arb_int_jet(3),
    ) {
        let left = &a * &(&b + &c);
        let right = &(&a * &b) + &(&a * &c);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn exp_ln_round_trip(a in arb_float_jet(4)) {
        // shift the value well into the principal-branch domain
        let shifted = &a + &Jet::constant(Complex64::new(4.0, 0.0), a.order());
        let round = shifted.ln().unwrap().exp();
        let scale = 1.0f64.max(shifted.max_abs());
        prop_assert!(max_coeff_diff(&round, &shifted) < 1e-12 * scale);
    }

    #[test]
    fn truncated_product_is_prefix_stable(a in arb_float_jet(4), b in arb_float_jet(4)) {
        // coefficients of degree ≤ 2 of a·b depend only on the degree-≤2
        // parts of the factors
        let full = (&a * &b).truncate(2);
        let low = &a.truncate(2) * &b.truncate(2);
        prop_assert_eq!(full, low);
    }
}

#[test]
fn jet_partials_match_richardson_finite_differences() {
    let params = ParameterTable::new();
    let sources = validation_corpus(20260808, 20);
    let mut rng = StdRng::seed_from_u64(99);
    let mut checked = 0usize;
    for src in &sources {
        let expr = parse(src).unwrap();
        for _ in 0..2 {
            let z1 = Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
            let z2 = Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
            let seeds = [z1, z2, z1.conj(), z2.conj()];
            let jet = eval_jet(&expr, &params, &seeds, 4).unwrap();
            for k1 in 0..=4u8 {
                for k2 in 0..=4 - k1 {
                    for k3 in 0..=4 - k1 - k2 {
                        for k4 in 0..=4 - k1 - k2 - k3 {
                            let m = MultiIndex([k1, k2, k3, k4]);
                            let exact = jet.extract_partial(&m).unwrap();
                            let h = step_for_order(m.degree());
                            let fd = fd_partial(&expr, &params, &seeds, &m, h).unwrap();
                            let err = relative_error(exact, fd);
                            assert!(
                                err < 1e-6,
                                "{src} at {m:?}: jet {exact}, fd {fd}, rel err {err:.3e}"
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked >= 20 * 2 * 70);
}

#[test]
fn frozen_mixed_partial_of_exponential_product() {
    // exp(z¹ z̄¹): the z²z̄²-coefficient of the series is 1/2, so the raw
    // fourth partial ∂²₁∂²₁̄ is 2!·2!/2 = 2
    let expr = parse("exp(z1*zb1)").unwrap();
    let params = ParameterTable::new();
    let seeds = [Complex64::new(0.0, 0.0); 4];
    let jet = eval_jet(&expr, &params, &seeds, 4).unwrap();
    let p = jet.extract_partial(&MultiIndex([2, 0, 2, 0])).unwrap();
    assert!((p - Complex64::new(2.0, 0.0)).norm() < 1e-14);
}

#[test]
fn mixed_partial_nesting_is_order_independent() {
    let expr = parse("exp(0.7*(z1 + zb1) + 0.3*z2*zb2) + (2 + z1*zb1)^(3/2)").unwrap();
    let params = ParameterTable::new();
    let z1 = Complex64::new(0.31, -0.12);
    let z2 = Complex64::new(-0.22, 0.4);
    let seeds = [z1, z2, z1.conj(), z2.conj()];
    let jet = eval_jet(&expr, &params, &seeds, 4).unwrap();
    let via_first = jet
        .derivative(0)
        .unwrap()
        .derivative(2)
        .unwrap()
        .value();
    let via_second = jet
        .derivative(2)
        .unwrap()
        .derivative(0)
        .unwrap()
        .value();
    let direct = jet.extract_partial(&MultiIndex([1, 0, 1, 0])).unwrap();
    let scale = direct.norm().max(1.0);
    assert!((via_first - via_second).norm() < 1e-13 * scale);
    assert!((via_first - direct).norm() < 1e-13 * scale);
}
