//! Per-point check runners. Every residual is normalized by the relevant
//! tensor magnitude at the point (with an absolute floor of 1e-14 folded
//! into the scale), so verdicts are scale-free across families.

use std::collections::BTreeMap;

use hkahler_core::dsl::{evaluate_value, ParameterTable, PotentialExpr};
use hkahler_core::families::einstein_separability_defect;
use hkahler_core::hproj::{
    b_tensor_checks_of, hpa_residual_of, killing_residual, lambda_gradient_check_of,
    pair_residual_of, sinyukov_jets, trace_identity_residual, FamilyJets, HprojError,
};
use hkahler_core::kahler::{
    closedness_residual, curvature_at, einstein_defect, metric_at, ChartPoint, KahlerError,
};
use hkahler_core::linalg::{hermiticity_residual, max_abs};
use hkahler_core::ChartPoint64;

pub enum PointOutcome {
    Checked {
        residuals: BTreeMap<String, f64>,
        skipped_checks: BTreeMap<String, String>,
        /// Reported values (κ at this point etc.), folded into notes.
        kappa: Option<f64>,
    },
    Skipped(String),
}

fn normalized(abs: f64, scale: f64, tol: f64) -> f64 {
    abs / scale.max(1e-14 / tol)
}

fn skip_for_kahler(e: &KahlerError) -> Option<String> {
    match e {
        KahlerError::Degenerate { .. } | KahlerError::Eval(_) => Some(e.to_string()),
        _ => None,
    }
}

/// Reality, Hermiticity, closedness, Ricci cross-check, Einstein defect and
/// Ricci-flatness at one point.
pub fn analyze_point(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint64,
    tol: f64,
) -> PointOutcome {
    let mut residuals = BTreeMap::new();
    let mut skipped = BTreeMap::new();

    let value = match evaluate_value(phi, params, p) {
        Ok(v) => v,
        Err(e) => return PointOutcome::Skipped(e.to_string()),
    };
    let phi_scale = 1.0f64.max(value.norm());
    residuals.insert("reality".into(), normalized(value.im.abs(), phi_scale, tol));

    let metric = match metric_at(phi, params, p) {
        Ok(m) => m,
        // degeneracy and domain violations skip the whole point; a non-real
        // potential keeps the failing reality residual on record
        Err(e) => match skip_for_kahler(&e) {
            Some(reason) => return PointOutcome::Skipped(reason),
            None => {
                for check in [
                    "hermitian",
                    "closedness",
                    "ricci_crosscheck",
                    "einstein_defect",
                    "ricci_flat",
                ] {
                    skipped.insert(check.into(), e.to_string());
                }
                return PointOutcome::Checked {
                    residuals,
                    skipped_checks: skipped,
                    kappa: None,
                };
            }
        },
    };
    let g_scale = 1.0f64.max(metric.max_entry());
    residuals.insert(
        "hermitian".into(),
        normalized(metric.hermiticity_residual(), g_scale, tol),
    );

    match closedness_residual(phi, params, p) {
        Ok(r) => {
            residuals.insert("closedness".into(), normalized(r, g_scale, tol));
        }
        Err(e) => {
            skipped.insert("closedness".into(), e.to_string());
        }
    }

    match curvature_at(phi, params, p) {
        Ok(curv) => {
            let ricci_scale = 1.0f64
                .max(curv.max_ricci_entry())
                .max(max_abs(&curv.ricci_from_riemann));
            residuals.insert(
                "ricci_crosscheck".into(),
                normalized(curv.crosscheck_residual, ricci_scale, tol),
            );
            let (kappa, defect) = einstein_defect(&curv, &metric);
            let mixed_scale = 1.0f64.max(max_abs(&curv.ricci_mixed));
            residuals.insert(
                "einstein_defect".into(),
                normalized(defect, mixed_scale, tol),
            );
            residuals.insert(
                "ricci_flat".into(),
                normalized(defect.max(kappa.norm()), mixed_scale, tol),
            );
            PointOutcome::Checked {
                residuals,
                skipped_checks: skipped,
                kappa: Some(kappa.re),
            }
        }
        Err(e) => {
            for check in ["ricci_crosscheck", "einstein_defect", "ricci_flat"] {
                skipped.insert(check.into(), e.to_string());
            }
            PointOutcome::Checked {
                residuals,
                skipped_checks: skipped,
                kappa: None,
            }
        }
    }
}

/// The H-projective suite at one (point, ρ).
pub fn hproject_point(
    phi: &PotentialExpr,
    params: &ParameterTable,
    rho: f64,
    p: &ChartPoint64,
    tol: f64,
) -> PointOutcome {
    let mut residuals = BTreeMap::new();
    let mut skipped = BTreeMap::new();

    let ctx = match FamilyJets::new(phi, params, rho, p) {
        Ok(ctx) => ctx,
        Err(e) => return PointOutcome::Skipped(e.to_string()),
    };
    let g_scale = 1.0f64.max(ctx.metric.max_entry());

    match killing_residual(phi, params, p) {
        Ok(r) => {
            residuals.insert("killing".into(), normalized(r, g_scale, tol));
        }
        Err(e) => return PointOutcome::Skipped(e.to_string()),
    }

    let a_vals = ctx.a_values();
    let a_scale = 1.0f64.max(max_abs(&a_vals)).max(g_scale);
    residuals.insert(
        "a_hermitian".into(),
        normalized(hermiticity_residual(&a_vals), a_scale, tol),
    );
    residuals.insert(
        "trace_identity".into(),
        normalized(trace_identity_residual(&ctx), a_scale, tol),
    );
    match hpa_residual_of(&ctx) {
        Ok(r) => {
            residuals.insert("hpa".into(), normalized(r, a_scale, tol));
        }
        Err(e) => {
            skipped.insert("hpa".into(), e.to_string());
        }
    }
    match lambda_gradient_check_of(&ctx) {
        Ok(r) => {
            residuals.insert("lambda_gradient".into(), normalized(r, a_scale, tol));
        }
        Err(e) => {
            skipped.insert("lambda_gradient".into(), e.to_string());
        }
    }

    match curvature_at(phi, params, p) {
        Ok(curv) => match b_tensor_checks_of(&ctx, &curv) {
            Ok(b) => {
                let commutation_scale =
                    1.0f64.max(a_scale * max_abs(&curv.ricci_mixed));
                residuals.insert("b_trace".into(), normalized(b.trace_residual, a_scale, tol));
                residuals.insert(
                    "zvez".into(),
                    normalized(b.zvez_residual, commutation_scale, tol),
                );
                residuals.insert(
                    "zvez_b".into(),
                    normalized(b.zvez_b_residual, commutation_scale, tol),
                );
            }
            Err(e) => {
                for check in ["b_trace", "zvez", "zvez_b"] {
                    skipped.insert(check.into(), e.to_string());
                }
            }
        },
        Err(e) => {
            for check in ["b_trace", "zvez", "zvez_b"] {
                skipped.insert(check.into(), e.to_string());
            }
        }
    }

    match sinyukov_jets(&ctx) {
        Ok(sj) => {
            let psi_val = sj.psi.value();
            residuals.insert(
                "psi_real".into(),
                normalized(psi_val.im.abs(), 1.0f64.max(psi_val.norm()), tol),
            );
            match pair_residual_of(&ctx, &sj) {
                Ok(r) => {
                    let gp_scale =
                        1.0f64.max(max_abs(&hkahler_core::linalg::jet_mat_values(&sj.gprime)));
                    residuals.insert("pair".into(), normalized(r, gp_scale.max(g_scale), tol));
                }
                Err(e) => {
                    skipped.insert("pair".into(), e.to_string());
                }
            }
        }
        Err(e @ (HprojError::DegenerateATensor { .. } | HprojError::NonPositiveTransform { .. })) => {
            for check in ["psi_real", "pair"] {
                skipped.insert(check.into(), e.to_string());
            }
        }
        Err(e) => return PointOutcome::Skipped(e.to_string()),
    }

    PointOutcome::Checked {
        residuals,
        skipped_checks: skipped,
        kappa: None,
    }
}

/// Ricci-flat family extras at one point: the determinant constancy and the
/// Einstein separability defect (a = 0).
pub fn ricci_flat_point_extras(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint64,
    tol: f64,
    residuals: &mut BTreeMap<String, f64>,
    skipped: &mut BTreeMap<String, String>,
) {
    let a = params.get_or("A", 1.0);
    let gamma = params.get_or("gamma", 1.0);
    let target = 9.0 * a * a * gamma / 8.0;
    match metric_at(phi, params, p) {
        Ok(m) => {
            let dev = ((m.det.re - target).powi(2) + m.det.im.powi(2)).sqrt();
            residuals.insert(
                "det_constancy".into(),
                normalized(dev, target.abs().max(1.0), tol),
            );
        }
        Err(e) => {
            skipped.insert("det_constancy".into(), e.to_string());
        }
    }
    match einstein_separability_defect(phi, params, 0.0, std::slice::from_ref(p)) {
        Ok(defect) => {
            residuals.insert("separability".into(), normalized(defect, 1.0, tol));
        }
        Err(e) => {
            skipped.insert("separability".into(), e.to_string());
        }
    }
}

/// Reality + Killing-shape pair used by the family command.
pub fn shape_point(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<f64>,
    tol: f64,
    residuals: &mut BTreeMap<String, f64>,
) -> Result<(), String> {
    let value = evaluate_value(phi, params, p).map_err(|e| e.to_string())?;
    residuals.insert(
        "reality".into(),
        normalized(value.im.abs(), 1.0f64.max(value.norm()), tol),
    );
    let killing = killing_residual(phi, params, p).map_err(|e| e.to_string())?;
    let g_scale = metric_at(phi, params, p)
        .map(|m| 1.0f64.max(m.max_entry()))
        .unwrap_or(1.0);
    residuals.insert("killing".into(), normalized(killing, g_scale, tol));
    Ok(())
}
