//! Family-level verification: the Ricci-flat closed form, the 𝒲 equation,
//! constant holomorphic sectional curvature, the Einstein separability
//! criterion, and the coordinate-shift normalization.

use hkahler_core::dsl::{evaluate, parse, ParameterTable};
use hkahler_core::families::{
    admissibility, einstein_separability_defect, hsc_spread, instantiate, ricci_flat_normal_point,
    sample_points, separability_defect_with, verify_constant_hsc, verify_ricci_flat,
    verify_w_equation, w_product_values, FamilyKind, FamilySpec,
};
use hkahler_core::hproj::killing_residual;
use hkahler_core::kahler::{metric_at, ChartPoint};

#[test]
fn instantiated_families_are_real_and_killing_reduced() {
    let mut specs = vec![
        FamilySpec::new(FamilyKind::Flat),
        FamilySpec::new(FamilyKind::Equidistant),
        FamilySpec::new(FamilyKind::RicciFlat),
        FamilySpec::new(FamilyKind::ConstantHsc),
    ];
    let mut custom = FamilySpec::new(FamilyKind::GeneralizedEquidistant);
    custom.w_source = Some("ln(2 + x^2)".into());
    custom.f_source = Some("z2*zb2".into());
    specs.push(custom);
    for spec in specs {
        let kind = spec.kind;
        let (phi, params) = instantiate(&spec).unwrap();
        let points = sample_points(808, 50, Some(kind), &params);
        let reality =
            hkahler_core::dsl::check_reality(&phi, &params, &points).unwrap();
        assert!(reality < 1e-12, "{kind:?}: |Im Φ| = {reality:.3e}");
        for p in &points {
            let k = killing_residual(&phi, &params, p).unwrap();
            assert!(k < 1e-12, "{kind:?} at {p:?}: killing {k:.3e}");
        }
    }
}

#[test]
fn ricci_flat_verification_across_parameter_sets() {
    for (a, gamma) in [(1.0, 1.0), (2.0, 0.5), (1.0, -1.0)] {
        let spec = FamilySpec::new(FamilyKind::RicciFlat)
            .with_param("A", a)
            .with_param("gamma", gamma);
        let (_, params) = instantiate(&spec).unwrap();
        let sample = sample_points(606, 30, Some(FamilyKind::RicciFlat), &params);
        assert_eq!(sample.len(), 30);
        let report = verify_ricci_flat::<f64>(a, gamma, &sample).unwrap();
        assert!(
            report.max_ricci < 1e-9,
            "A={a} γ={gamma}: ricci {:.3e}",
            report.max_ricci
        );
        assert!(
            report.max_det_deviation < 1e-10,
            "A={a} γ={gamma}: det {:.3e}",
            report.max_det_deviation
        );
        // the printed closed form drops a γ on the z²z̄² bracket term, so it
        // matches ∂∂̄Φ only at γ = 1; the comparison stays informational
        if gamma == 1.0 {
            assert!(report.displayed_metric_deviation < 1e-10);
        }
    }
}

#[test]
fn w_equation_confirms_the_three_halves_power() {
    let xs: Vec<f64> = vec![0.5, 1.0, 2.0];
    assert!(verify_w_equation::<f64>(1.0, 0.0, &xs).unwrap() < 1e-12);
    assert!(verify_w_equation::<f64>(2.0, 1.0, &xs).unwrap() < 1e-11);
    // negative control: 𝒲 = x² has 𝒲′𝒲″ = 4x, spread > 1 over the window
    let params = ParameterTable::new();
    let vals = w_product_values::<f64>("x^2", &params, &xs).unwrap();
    let spread = vals.iter().cloned().fold(f64::MIN, f64::max)
        - vals.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread > 1.0);
}

#[test]
fn constant_hsc_potential_has_constant_h() {
    for eps in [1.0, -1.0] {
        let (mean, spread) = verify_constant_hsc::<f64>(eps, 100, 7).unwrap();
        assert!(
            spread < 1e-8,
            "eps={eps}: spread {spread:.3e} around mean {mean:.6}"
        );
    }
    // negative control: the equidistant family is non-Einstein, hence far
    // from constant holomorphic sectional curvature
    let (phi, params) = instantiate(&FamilySpec::new(FamilyKind::Equidistant)).unwrap();
    let (_, spread) = hsc_spread::<f64>(&phi, &params, None, 100, 7).unwrap();
    assert!(spread > 0.1, "equidistant spread {spread:.3e}");
}

#[test]
fn separability_criterion_behaviour() {
    // Ricci-flat family with a = 0: h is the constant 9A²γ/4
    let spec = FamilySpec::new(FamilyKind::RicciFlat)
        .with_param("A", 1.0)
        .with_param("gamma", 1.0);
    let (phi, params) = instantiate(&spec).unwrap();
    let sample = sample_points(11, 20, Some(FamilyKind::RicciFlat), &params);
    let defect = einstein_separability_defect(&phi, &params, 0.0, &sample).unwrap();
    assert!(defect < 1e-10, "family defect {defect:.3e}");

    // synthetic non-separable h = 1 + z¹z̄¹: defect 1 at the origin
    let h_expr = parse("1 + z1*zb1").unwrap();
    let no_params = ParameterTable::new();
    let origin = [ChartPoint::<f64>::from_f64(0.0, 0.0, 0.0, 0.0)];
    let defect = separability_defect_with(
        |p| Ok(evaluate(&h_expr, &no_params, p, 3)?),
        &origin,
    )
    .unwrap();
    assert!(defect >= 0.9, "synthetic defect {defect}");
}

#[test]
fn shift_normalization_preserves_the_metric() {
    // full family with B, C, τ, ρ-shift vs the translated normal form
    let full_spec = FamilySpec::new(FamilyKind::RicciFlat)
        .with_param("A", 1.2)
        .with_param("gamma", 0.8)
        .with_param("B", 0.3)
        .with_param("C", 2.5)
        .with_param("tau", 0.4)
        .with_param("rho_shift", 0.6);
    let (phi_full, params_full) = instantiate(&full_spec).unwrap();

    let norm_spec = FamilySpec::new(FamilyKind::RicciFlat)
        .with_param("A", 1.2)
        .with_param("gamma", 0.8);
    let (phi_norm, params_norm) = instantiate(&norm_spec).unwrap();

    let sample = sample_points(99, 25, Some(FamilyKind::RicciFlat), &params_full);
    assert!(!sample.is_empty());
    for p in &sample {
        if admissibility(FamilyKind::RicciFlat, &params_full, p).is_some() {
            continue;
        }
        let w = ricci_flat_normal_point(&params_full, p);
        let m_full = metric_at(&phi_full, &params_full, p).unwrap();
        let m_norm = metric_at(&phi_norm, &params_norm, &w).unwrap();
        let mut diff = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                diff = diff.max((m_full.g[i][j] - m_norm.g[i][j]).norm());
            }
        }
        assert!(diff < 1e-10, "metrics differ by {diff:.3e} at {p:?}");
    }
}
