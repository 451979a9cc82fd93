//! The H-projective layer.
//!
//! For a generalized-equidistant potential (Φ depending on z¹ only through
//! z¹+z̄¹) this module builds the tensor a_{αβ̄} = ∂_αΦ·∂₁∂_β̄Φ + ρ·g_{αβ̄},
//! its trace λ = ∂₁Φ + 2ρ and gradient λ_α = g_{α1̄}, inverts the Sinyukov
//! transformation into the partner metric g′ with e^{2ψ} = det g / det a,
//! and verifies the defining identities pointwise:
//!
//! * the linearized system a_{αβ̄,γ} = λ_α g_{γβ̄} (and its conjugate),
//! * the metric form g′_{αβ̄,γ} = 2 g′_{αβ̄}ψ_γ + 2 g′_{γβ̄}ψ_α,
//! * the connection deformation Γ′^α_{βγ} − Γ^α_{βγ} = 2(δ^α_βψ_γ + δ^α_γψ_β),
//! * the Lie-derivative tensor b^α_β = i(∂₁−∂₁̄)a^α_β: trace-free and
//!   commuting with the mixed Ricci tensor, as does a itself,
//! * H-planarity of g-geodesics with respect to the primed connection.
//!
//! Commas denote covariant derivatives with respect to the *unprimed*
//! Levi-Civita connection throughout. The second equation of the linearized
//! system is the exact conjugate of the first under α↔β renaming,
//! a_{αβ̄,γ̄} = λ_β̄ g_{αγ̄}; the variant pairing λ_β̄ with g_{γᾱ} agrees
//! with it only where the metric is real.

use num_complex::Complex;
use thiserror::Error;

use crate::dsl::{EvalError, ParameterTable, PotentialExpr};
use crate::jets::{ComplexJet, JetError, MultiIndex};
use crate::kahler::{
    christoffel_from_jet, curvature_from_jet, metric_from_jet, metric_jets, phi_jet, ChartPoint,
    ChristoffelSymbols, CurvatureData, HermitianMetric, KahlerError, DEGENERACY_THRESHOLD,
};
use crate::linalg::{
    jet_det2, jet_inverse_transposed, jet_mat_values, max_abs, max_abs_diff, JetMat2, Mat2,
};
use crate::scalar::{as_f64, real, Real};

/// Relative Killing-residual threshold for accepting a potential as
/// generalized equidistant.
pub const FAMILY_SHAPE_TOLERANCE: f64 = 1e-8;

/// Relative Hermiticity threshold on the constructed a-tensor.
pub const A_HERMITICITY_TOLERANCE: f64 = 1e-8;

/// Floor in the normalized parallelism defect.
pub const PARALLELISM_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HprojError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Kahler(#[from] KahlerError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(
        "potential is not of generalized-equidistant shape (Killing residual = {residual:.3e})"
    )]
    NotGeneralizedEquidistant { residual: f64 },
    #[error("a-tensor is degenerate (|det a| = {det:.3e}, scale {scale:.3e})")]
    DegenerateATensor { det: f64, scale: f64 },
    #[error("a-tensor violates Hermiticity (residual {residual:.3e}); potential outside the family")]
    AHermiticity { residual: f64 },
    #[error("e^(2ψ) = det g / det a is not positive real ({re:.3e} + {im:.3e}i)")]
    NonPositiveTransform { re: f64, im: f64 },
    #[error("trace λ is not real (|Im λ| = {imag:.3e})")]
    NonRealLambda { imag: f64 },
    #[error("pair does not match the potential at this point (deviation {deviation:.3e})")]
    PairMismatch { deviation: f64 },
    #[error("zero-velocity sample at t = {at}")]
    ZeroVelocity { at: f64 },
}

/// The Sinyukov tensor at a point: a_{αβ̄}, its raised form a^α_β, the trace
/// λ and the gradient components λ_α.
#[derive(Debug, Clone, PartialEq)]
pub struct ATensor<T: Real> {
    pub a: Mat2<T>,
    pub a_mixed: Mat2<T>,
    pub lambda_val: T,
    pub lambda_lower: [Complex<T>; 2],
}

impl<T: Real> ATensor<T> {
    pub fn hermiticity_residual(&self) -> T {
        crate::linalg::hermiticity_residual(&self.a)
    }

    pub fn max_entry(&self) -> T {
        max_abs(&self.a)
    }
}

/// A verified H-projective pair at a point: the two metrics, the potential
/// ψ of the mapping and its gradient. `affine` marks ψ_γ ≈ 0, the excluded
/// connection-preserving case.
#[derive(Debug, Clone, PartialEq)]
pub struct HProjectivePair<T: Real> {
    pub g: HermitianMetric<T>,
    pub gprime: HermitianMetric<T>,
    pub psi_val: T,
    pub psi_grad: [Complex<T>; 2],
    pub rho: T,
    pub affine: bool,
}

/// One state of an integrated curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample<T: Real> {
    pub t: T,
    pub z: [Complex<T>; 2],
    pub v: [Complex<T>; 2],
}

/// Fixed-step integrated curve; `truncated` carries the reason when the
/// trajectory left the domain of the metric.
#[derive(Debug, Clone, PartialEq)]
pub struct HPlanarCurve<T: Real> {
    pub samples: Vec<CurveSample<T>>,
    pub step: T,
    pub truncated: Option<String>,
}

/// The distinguished-chart Killing field μ = JΛ = i(∂₁ − ∂₁̄).
pub struct KillingField;

impl KillingField {
    /// Components (μ^1, μ^2, μ^1̄, μ^2̄) in the chart basis.
    pub fn components<T: Real>() -> [Complex<T>; 4] {
        [
            Complex::new(T::zero(), T::one()),
            Complex::new(T::zero(), T::zero()),
            Complex::new(T::zero(), -T::one()),
            Complex::new(T::zero(), T::zero()),
        ]
    }
}

/// Jet-valued data shared by the H-projective checks at one point.
///
/// Fields are public so tests can perturb individual tensors and measure
/// how the residuals react; the checked entry points construct it after
/// the family-shape gate, the `*_of` functions consume it as-is.
#[derive(Debug, Clone)]
pub struct FamilyJets<T: Real> {
    /// Order-4 jet of the potential at the point.
    pub phi: ComplexJet<T>,
    /// Metric values, inverse and determinant.
    pub metric: HermitianMetric<T>,
    /// Order-2 jets of g_{αβ̄}.
    pub g: JetMat2<T>,
    /// Order-2 jets of g^{αβ̄}.
    pub ginv: JetMat2<T>,
    /// Order-2 jets of a_{αβ̄} = ∂_αΦ·∂₁∂_β̄Φ + ρ·g_{αβ̄}.
    pub a: JetMat2<T>,
    pub rho: T,
}

impl<T: Real> FamilyJets<T> {
    /// Builds the pipeline without the family-shape gate.
    pub fn new(
        phi: &PotentialExpr,
        params: &ParameterTable,
        rho: T,
        p: &ChartPoint<T>,
    ) -> Result<Self, HprojError> {
        let jet = phi_jet(phi, params, p, 4)?;
        let metric = metric_from_jet(&jet)?;
        let g = metric_jets(&jet, 2)?;
        let ginv = jet_inverse_transposed(&g)?;
        let rho_c = Complex::new(rho, T::zero());
        let mut a_entries: Vec<ComplexJet<T>> = Vec::with_capacity(4);
        for alpha in 0..2 {
            let dphi = jet.derivative(alpha)?.truncate(2);
            for beta in 0..2 {
                a_entries.push(&(&dphi * &g[0][beta]) + &g[alpha][beta].scale(rho_c));
            }
        }
        let a = [
            [a_entries[0].clone(), a_entries[1].clone()],
            [a_entries[2].clone(), a_entries[3].clone()],
        ];
        Ok(FamilyJets {
            phi: jet,
            metric,
            g,
            ginv,
            a,
            rho,
        })
    }

    pub fn a_values(&self) -> Mat2<T> {
        jet_mat_values(&self.a)
    }

    /// Jets of a^α_β = g^{ασ̄} a_{βσ̄}.
    pub fn a_mixed_jets(&self) -> JetMat2<T> {
        let build = |alpha: usize, beta: usize| {
            &(&self.ginv[alpha][0] * &self.a[beta][0])
                + &(&self.ginv[alpha][1] * &self.a[beta][1])
        };
        [[build(0, 0), build(0, 1)], [build(1, 0), build(1, 1)]]
    }

    /// λ = ∂₁Φ + 2ρ at the point.
    pub fn lambda_value(&self) -> Complex<T> {
        self.phi
            .partial(0)
            .expect("order-4 jet has first partials")
            + Complex::new(self.rho + self.rho, T::zero())
    }
}

#[inline]
fn unit(var: usize) -> MultiIndex {
    MultiIndex::unit(var).expect("variable index < 4")
}

/// Max |(∂₁ − ∂₁̄) g_{αβ̄}| at the point: the reduced Killing equation for
/// μ = JΛ. Vanishes exactly when Φ depends on z¹ only through z¹+z̄¹ (up to
/// gauge).
pub fn killing_residual<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Result<T, HprojError> {
    let jet = phi_jet(phi, params, p, 3)?;
    Ok(killing_residual_of(&jet)?)
}

fn killing_residual_of<T: Real>(jet: &ComplexJet<T>) -> Result<T, JetError> {
    let mut max = T::zero();
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut k1 = [0u8; 4];
            k1[0] += 1;
            k1[alpha] += 1;
            k1[2 + beta] += 1;
            let mut k2 = [0u8; 4];
            k2[2] += 1;
            k2[alpha] += 1;
            k2[2 + beta] += 1;
            let d = jet.extract_partial(&MultiIndex(k1))? - jet.extract_partial(&MultiIndex(k2))?;
            max = max.max(d.norm());
        }
    }
    Ok(max)
}

/// Scale for the Killing gate: the largest ∂g third partial, floored at 1.
fn killing_scale<T: Real>(jet: &ComplexJet<T>) -> Result<T, JetError> {
    let mut scale = T::one();
    for a in 0..2 {
        for b in 0..2 {
            let mut k = [0u8; 4];
            k[0] += 1;
            k[a] += 1;
            k[2 + b] += 1;
            scale = scale.max(jet.extract_partial(&MultiIndex(k))?.norm());
        }
    }
    Ok(scale)
}

/// Shape residual of the written gauge: max of |(∂₁ − ∂₁̄)Φ| and the
/// metric-level Killing residual, relative to the local derivative scale.
///
/// The metric-level residual alone is blind to gauge: the flat potential
/// z1·zb1 + z2·zb2 has a constant metric, yet ∂₁Φ = z̄¹ ≠ ∂₁̄Φ — and the
/// a-tensor formula needs the potential literally reduced to the
/// 𝒲(z¹+z̄¹+F) gauge, which the potential-level term detects.
pub fn family_shape_residual<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Result<T, HprojError> {
    let jet = phi_jet(phi, params, p, 3)?;
    let metric_level = killing_residual_of(&jet)?;
    let potential_level = (jet.partial(0)? - jet.partial(2)?).norm();
    let scale = killing_scale(&jet)?.max(jet.partial(0)?.norm());
    Ok(metric_level.max(potential_level) / scale)
}

fn ensure_family_shape<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Result<(), HprojError> {
    let residual = family_shape_residual(phi, params, p)?;
    if residual > real::<T>(FAMILY_SHAPE_TOLERANCE) {
        return Err(HprojError::NotGeneralizedEquidistant {
            residual: as_f64(residual),
        });
    }
    Ok(())
}

/// The Sinyukov tensor at a point of a generalized-equidistant metric.
///
/// a_{αβ̄} = ∂_αΦ·∂₁∂_β̄Φ + ρ·∂_α∂_β̄Φ, λ = ∂₁Φ + 2ρ, λ_α = g_{α1̄}.
pub fn a_tensor_at<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    rho: T,
    p: &ChartPoint<T>,
) -> Result<ATensor<T>, HprojError> {
    ensure_family_shape(phi, params, p)?;
    let ctx = FamilyJets::new(phi, params, rho, p)?;
    a_tensor_of(&ctx)
}

/// As [`a_tensor_at`] from a prebuilt pipeline (no family gate).
pub fn a_tensor_of<T: Real>(ctx: &FamilyJets<T>) -> Result<ATensor<T>, HprojError> {
    let a = ctx.a_values();
    let herm = crate::linalg::hermiticity_residual(&a);
    let scale = T::one().max(max_abs(&a));
    if herm > real::<T>(A_HERMITICITY_TOLERANCE) * scale {
        return Err(HprojError::AHermiticity {
            residual: as_f64(herm),
        });
    }
    let lambda = ctx.lambda_value();
    if lambda.im.abs() > real::<T>(1e-8) * T::one().max(lambda.norm()) {
        return Err(HprojError::NonRealLambda {
            imag: as_f64(lambda.im.abs()),
        });
    }
    let mut a_mixed = crate::linalg::zero_mat();
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut s = Complex::new(T::zero(), T::zero());
            for sigma in 0..2 {
                s = s + ctx.metric.ginv[alpha][sigma] * a[beta][sigma];
            }
            a_mixed[alpha][beta] = s;
        }
    }
    let lambda_lower = [ctx.metric.g[0][0], ctx.metric.g[1][0]];
    Ok(ATensor {
        a,
        a_mixed,
        lambda_val: lambda.re,
        lambda_lower,
    })
}

/// |a_{αβ̄} g^{αβ̄} − (∂₁Φ + 2ρ)|: the closed-form trace against the
/// contraction.
pub fn trace_identity_residual<T: Real>(ctx: &FamilyJets<T>) -> T {
    let a = ctx.a_values();
    let mut tr = Complex::new(T::zero(), T::zero());
    for alpha in 0..2 {
        for beta in 0..2 {
            tr = tr + ctx.metric.ginv[alpha][beta] * a[alpha][beta];
        }
    }
    (tr - ctx.lambda_value()).norm()
}

/// Consistency of the closed-form gradient λ_α = g_{α1̄} with the
/// trace-gradient definition λ_γ = ∂_γ(a_{αβ̄}g^{αβ̄}), plus holomorphy of
/// λ^α = g^{αβ̄}λ_β̄ (which collapses to δ^α₁ for the family).
pub fn lambda_gradient_check<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    rho: T,
    p: &ChartPoint<T>,
) -> Result<T, HprojError> {
    ensure_family_shape(phi, params, p)?;
    let ctx = FamilyJets::new(phi, params, rho, p)?;
    lambda_gradient_check_of(&ctx)
}

/// As [`lambda_gradient_check`] from a prebuilt pipeline.
pub fn lambda_gradient_check_of<T: Real>(ctx: &FamilyJets<T>) -> Result<T, HprojError> {
    // trace as a jet
    let mut trace = ComplexJet::constant(Complex::new(T::zero(), T::zero()), 2);
    for alpha in 0..2 {
        for beta in 0..2 {
            trace = &trace + &(&ctx.ginv[alpha][beta] * &ctx.a[alpha][beta]);
        }
    }
    let mut max = T::zero();
    for gamma in 0..2 {
        let d = trace.extract_partial(&unit(gamma))?;
        max = max.max((ctx.metric.g[gamma][0] - d).norm());
    }
    // λ^α = Σ_β g^{αβ̄} g_{1β̄} as jets; value δ^α₁ and all barred partials 0
    for alpha in 0..2 {
        let mut lam_up = ComplexJet::constant(Complex::new(T::zero(), T::zero()), 2);
        for beta in 0..2 {
            lam_up = &lam_up + &(&ctx.ginv[alpha][beta] * &ctx.g[0][beta]);
        }
        let expected = if alpha == 0 { T::one() } else { T::zero() };
        max = max.max((lam_up.value() - Complex::new(expected, T::zero())).norm());
        for nu in 0..2 {
            max = max.max(lam_up.extract_partial(&unit(2 + nu))?.norm());
        }
    }
    Ok(max)
}

/// Max deviation from the linearized H-projective system
/// a_{αβ̄,γ} = λ_α g_{γβ̄} and a_{αβ̄,γ̄} = λ_β̄ g_{γᾱ}.
pub fn hpa_residual<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    rho: T,
    p: &ChartPoint<T>,
) -> Result<T, HprojError> {
    ensure_family_shape(phi, params, p)?;
    let ctx = FamilyJets::new(phi, params, rho, p)?;
    hpa_residual_of(&ctx)
}

/// As [`hpa_residual`] from a prebuilt pipeline; no family gate, so this is
/// the entry point for forcing the formula onto out-of-family potentials.
pub fn hpa_residual_of<T: Real>(ctx: &FamilyJets<T>) -> Result<T, HprojError> {
    let gamma = christoffel_from_jet(&ctx.phi, &ctx.metric)?;
    let a = ctx.a_values();
    let g = &ctx.metric.g;
    let lambda_lower = [g[0][0], g[1][0]];
    let mut max = T::zero();
    for gamma_idx in 0..2 {
        for alpha in 0..2 {
            for beta in 0..2 {
                // unbarred derivative: ∂_γ a_{αβ̄} − Γ^μ_{γα} a_{μβ̄} = λ_α g_{γβ̄}
                let da = ctx.a[alpha][beta].extract_partial(&unit(gamma_idx))?;
                let mut cov = da;
                for mu in 0..2 {
                    cov = cov - gamma.gamma[mu][gamma_idx][alpha] * a[mu][beta];
                }
                let rhs = lambda_lower[alpha] * g[gamma_idx][beta];
                max = max.max((cov - rhs).norm());

                // barred derivative: ∂_γ̄ a_{αβ̄} − conj(Γ^μ_{γβ}) a_{αμ̄} = λ_β̄ g_{αγ̄},
                // the conjugate of the first equation under α↔β renaming
                let dab = ctx.a[alpha][beta].extract_partial(&unit(2 + gamma_idx))?;
                let mut covb = dab;
                for mu in 0..2 {
                    covb = covb - gamma.gamma[mu][gamma_idx][beta].conj() * a[alpha][mu];
                }
                let rhsb = lambda_lower[beta].conj() * g[alpha][gamma_idx];
                max = max.max((covb - rhsb).norm());
            }
        }
    }
    Ok(max)
}

/// Jet-valued Sinyukov transform data at one point.
pub struct SinyukovJets<T: Real> {
    /// Order-2 jets of g′_{αβ̄}.
    pub gprime: JetMat2<T>,
    /// Order-2 jets of g′^{αβ̄}.
    pub gprime_inv: JetMat2<T>,
    /// Order-2 jet of ψ = ½ ln(det g / det a).
    pub psi: ComplexJet<T>,
}

/// Inverts the Sinyukov transformation on jets: raises a, fixes
/// e^{2ψ} = det g / det a, and sets g′^{αβ̄} = e^{−2ψ} a^{αβ̄}.
pub fn sinyukov_jets<T: Real>(ctx: &FamilyJets<T>) -> Result<SinyukovJets<T>, HprojError> {
    let det_a = jet_det2(&ctx.a);
    let a_scale = max_abs(&ctx.a_values());
    let floor = real::<T>(DEGENERACY_THRESHOLD) * a_scale * a_scale;
    if det_a.value().norm() <= floor {
        return Err(HprojError::DegenerateATensor {
            det: as_f64(det_a.value().norm()),
            scale: as_f64(a_scale),
        });
    }
    let det_g = jet_det2(&ctx.g);
    let ratio = det_g.div(&det_a)?; // e^{2ψ} as a jet
    let v = ratio.value();
    if v.re <= T::zero() || v.im.abs() > real::<T>(1e-8) * v.norm() {
        return Err(HprojError::NonPositiveTransform {
            re: as_f64(v.re),
            im: as_f64(v.im),
        });
    }
    let psi = ratio.ln()?.scale(Complex::new(real(0.5), T::zero()));

    // a^{αβ̄} = a_{μλ̄} g^{αλ̄} g^{μβ̄}
    let mut a_up: Vec<ComplexJet<T>> = Vec::with_capacity(4);
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut s = ComplexJet::constant(Complex::new(T::zero(), T::zero()), 2);
            for mu in 0..2 {
                for lam in 0..2 {
                    s = &s + &(&(&ctx.a[mu][lam] * &ctx.ginv[alpha][lam]) * &ctx.ginv[mu][beta]);
                }
            }
            a_up.push(s);
        }
    }
    let e_minus_2psi = ratio.recip()?;
    let gprime_inv: JetMat2<T> = [
        [&a_up[0] * &e_minus_2psi, &a_up[1] * &e_minus_2psi],
        [&a_up[2] * &e_minus_2psi, &a_up[3] * &e_minus_2psi],
    ];
    let gprime = jet_inverse_transposed(&gprime_inv)?;
    Ok(SinyukovJets {
        gprime,
        gprime_inv,
        psi,
    })
}

/// Builds and packages the H-projective pair at a point. The construction
/// is separate from [`pair_residual`] so that faults are attributable.
pub fn sinyukov_gprime<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    rho: T,
    p: &ChartPoint<T>,
) -> Result<HProjectivePair<T>, HprojError> {
    ensure_family_shape(phi, params, p)?;
    let ctx = FamilyJets::new(phi, params, rho, p)?;
    let sj = sinyukov_jets(&ctx)?;
    pair_from_jets(&ctx, &sj)
}

fn pair_from_jets<T: Real>(
    ctx: &FamilyJets<T>,
    sj: &SinyukovJets<T>,
) -> Result<HProjectivePair<T>, HprojError> {
    let gprime = HermitianMetric::from_entries(jet_mat_values(&sj.gprime))?;
    let psi_val = sj.psi.value().re;
    let psi_grad = [
        sj.psi.extract_partial(&unit(0))?,
        sj.psi.extract_partial(&unit(1))?,
    ];
    let grad_norm = psi_grad[0].norm().max(psi_grad[1].norm());
    let affine = grad_norm < real::<T>(1e-10) * T::one().max(psi_val.abs());
    Ok(HProjectivePair {
        g: ctx.metric.clone(),
        gprime,
        psi_val,
        psi_grad,
        rho: ctx.rho,
        affine,
    })
}

/// Pointwise Sinyukov inversion from explicit (g, a) values, without
/// gradients: returns (g′, ψ). Useful for synthetic inputs such as a = g,
/// which must give ψ = 0 and g′ = g.
pub fn sinyukov_pair<T: Real>(
    g: &HermitianMetric<T>,
    a: &Mat2<T>,
) -> Result<(HermitianMetric<T>, T), HprojError> {
    let det_a = crate::linalg::det2(a);
    let scale = max_abs(a);
    let floor = real::<T>(DEGENERACY_THRESHOLD) * scale * scale;
    if det_a.norm() <= floor {
        return Err(HprojError::DegenerateATensor {
            det: as_f64(det_a.norm()),
            scale: as_f64(scale),
        });
    }
    let ratio = g.det / det_a;
    if ratio.re <= T::zero() || ratio.im.abs() > real::<T>(1e-8) * ratio.norm() {
        return Err(HprojError::NonPositiveTransform {
            re: as_f64(ratio.re),
            im: as_f64(ratio.im),
        });
    }
    let psi = ratio.norm().ln() * real::<T>(0.5);
    let mut a_up = crate::linalg::zero_mat();
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut s = Complex::new(T::zero(), T::zero());
            for mu in 0..2 {
                for lam in 0..2 {
                    s = s + a[mu][lam] * g.ginv[alpha][lam] * g.ginv[mu][beta];
                }
            }
            a_up[alpha][beta] = s;
        }
    }
    let mut gprime_inv = crate::linalg::zero_mat();
    for i in 0..2 {
        for j in 0..2 {
            gprime_inv[i][j] = a_up[i][j] / ratio;
        }
    }
    let gprime_low = crate::linalg::inverse_transposed(&gprime_inv).ok_or(
        HprojError::DegenerateATensor {
            det: 0.0,
            scale: as_f64(scale),
        },
    )?;
    Ok((HermitianMetric::from_entries(gprime_low)?, psi))
}

/// Verifies the metric form of the H-projective condition for a constructed
/// pair, together with the connection-level deformation identity and the
/// vanishing of the mixed primed Christoffels. Returns the max deviation.
pub fn pair_residual<T: Real>(
    pair: &HProjectivePair<T>,
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Result<T, HprojError> {
    ensure_family_shape(phi, params, p)?;
    let ctx = FamilyJets::new(phi, params, pair.rho, p)?;
    let sj = sinyukov_jets(&ctx)?;
    // guard against a pair built at a different point or ρ
    let rebuilt = jet_mat_values(&sj.gprime);
    let deviation = max_abs_diff(&rebuilt, &pair.gprime.g);
    let scale = T::one().max(max_abs(&pair.gprime.g));
    if deviation > real::<T>(1e-6) * scale {
        return Err(HprojError::PairMismatch {
            deviation: as_f64(deviation),
        });
    }
    pair_residual_of(&ctx, &sj)
}

/// As [`pair_residual`] on prebuilt data (no gate, no mismatch guard).
pub fn pair_residual_of<T: Real>(
    ctx: &FamilyJets<T>,
    sj: &SinyukovJets<T>,
) -> Result<T, HprojError> {
    let gamma = christoffel_from_jet(&ctx.phi, &ctx.metric)?;
    let glow = jet_mat_values(&sj.gprime);
    let gup = jet_mat_values(&sj.gprime_inv);
    let psi_grad = [
        sj.psi.extract_partial(&unit(0))?,
        sj.psi.extract_partial(&unit(1))?,
    ];
    let two = Complex::new(real::<T>(2.0), T::zero());

    // first derivatives of g′_{αβ̄}
    let mut d_unbar = [[[Complex::new(T::zero(), T::zero()); 2]; 2]; 2]; // [γ][α][β]
    let mut d_bar = [[[Complex::new(T::zero(), T::zero()); 2]; 2]; 2];
    for gidx in 0..2 {
        for alpha in 0..2 {
            for beta in 0..2 {
                d_unbar[gidx][alpha][beta] = sj.gprime[alpha][beta].extract_partial(&unit(gidx))?;
                d_bar[gidx][alpha][beta] =
                    sj.gprime[alpha][beta].extract_partial(&unit(2 + gidx))?;
            }
        }
    }

    let mut max = T::zero();
    for gidx in 0..2 {
        for alpha in 0..2 {
            for beta in 0..2 {
                // g′_{αβ̄,γ} = 2 g′_{αβ̄}ψ_γ + 2 g′_{γβ̄}ψ_α
                let mut cov = d_unbar[gidx][alpha][beta];
                for mu in 0..2 {
                    cov = cov - gamma.gamma[mu][gidx][alpha] * glow[mu][beta];
                }
                let rhs = two * (glow[alpha][beta] * psi_grad[gidx] + glow[gidx][beta] * psi_grad[alpha]);
                max = max.max((cov - rhs).norm());

                // conjugate equation: g′_{αβ̄,γ̄} = 2 g′_{αβ̄}ψ_γ̄ + 2 g′_{αγ̄}ψ_β̄
                let mut covb = d_bar[gidx][alpha][beta];
                for mu in 0..2 {
                    covb = covb - gamma.gamma[mu][gidx][beta].conj() * glow[alpha][mu];
                }
                let rhsb = two
                    * (glow[alpha][beta] * psi_grad[gidx].conj()
                        + glow[alpha][gidx] * psi_grad[beta].conj());
                max = max.max((covb - rhsb).norm());
            }
        }
    }

    // Γ′^α_{βν} − Γ^α_{βν} = 2(δ^α_β ψ_ν + δ^α_ν ψ_β)
    for alpha in 0..2 {
        for beta in 0..2 {
            for nu in 0..2 {
                let mut gp = Complex::new(T::zero(), T::zero());
                for mu in 0..2 {
                    gp = gp + gup[alpha][mu] * d_unbar[beta][nu][mu];
                }
                let mut rhs = Complex::new(T::zero(), T::zero());
                if alpha == beta {
                    rhs = rhs + psi_grad[nu];
                }
                if alpha == nu {
                    rhs = rhs + psi_grad[beta];
                }
                max = max.max((gp - gamma.gamma[alpha][beta][nu] - two * rhs).norm());
            }
        }
    }

    // mixed primed Christoffels must remain zero:
    // Γ′^α_{βγ̄} = ½ g′^{ασ̄}(∂_γ̄ g′_{βσ̄} − ∂_σ̄ g′_{βγ̄})
    let half = Complex::new(real::<T>(0.5), T::zero());
    for alpha in 0..2 {
        for beta in 0..2 {
            for gidx in 0..2 {
                let mut s = Complex::new(T::zero(), T::zero());
                for sigma in 0..2 {
                    s = s + gup[alpha][sigma] * (d_bar[gidx][beta][sigma] - d_bar[sigma][beta][gidx]);
                }
                max = max.max((half * s).norm());
            }
        }
    }
    Ok(max)
}

/// Results of the Lie-derivative tensor checks.
#[derive(Debug, Clone, PartialEq)]
pub struct BTensorChecks<T: Real> {
    /// b^α_β = i(∂₁ − ∂₁̄) a^α_β.
    pub b: Mat2<T>,
    /// |b^σ_σ|.
    pub trace_residual: T,
    /// max |a^ν_μ R^μ_γ − a^μ_γ R^ν_μ|.
    pub zvez_residual: T,
    /// max |b^ν_μ R^μ_γ − b^μ_γ R^ν_μ|.
    pub zvez_b_residual: T,
}

/// Computes b = L_{JΛ} a in the distinguished chart and the commutation
/// residuals of a and b against the mixed Ricci tensor.
pub fn b_tensor_checks<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    rho: T,
    p: &ChartPoint<T>,
) -> Result<BTensorChecks<T>, HprojError> {
    ensure_family_shape(phi, params, p)?;
    let ctx = FamilyJets::new(phi, params, rho, p)?;
    let curv = curvature_from_jet(&ctx.phi, &ctx.metric)?;
    b_tensor_checks_of(&ctx, &curv)
}

/// As [`b_tensor_checks`] on prebuilt data.
pub fn b_tensor_checks_of<T: Real>(
    ctx: &FamilyJets<T>,
    curv: &CurvatureData<T>,
) -> Result<BTensorChecks<T>, HprojError> {
    let amix = ctx.a_mixed_jets();
    let i_unit = Complex::new(T::zero(), T::one());
    let mut b = crate::linalg::zero_mat();
    let mut amix_vals = crate::linalg::zero_mat();
    for alpha in 0..2 {
        for beta in 0..2 {
            let d1 = amix[alpha][beta].extract_partial(&unit(0))?;
            let d1b = amix[alpha][beta].extract_partial(&unit(2))?;
            b[alpha][beta] = i_unit * (d1 - d1b);
            amix_vals[alpha][beta] = amix[alpha][beta].value();
        }
    }
    let trace_residual = (b[0][0] + b[1][1]).norm();
    let zvez_residual = commutator_residual(&amix_vals, &curv.ricci_mixed);
    let zvez_b_residual = commutator_residual(&b, &curv.ricci_mixed);
    Ok(BTensorChecks {
        b,
        trace_residual,
        zvez_residual,
        zvez_b_residual,
    })
}

/// max |(t·r − r·t)^ν_γ| for mixed (1,1)-tensors.
pub fn commutator_residual<T: Real>(t: &Mat2<T>, r: &Mat2<T>) -> T {
    let tr = crate::linalg::mat_mul(t, r);
    let rt = crate::linalg::mat_mul(r, t);
    max_abs_diff(&tr, &rt)
}

// ---------------------------------------------------------------------------
// curves

#[derive(Clone, Copy)]
struct State<T: Real> {
    z: [Complex<T>; 2],
    v: [Complex<T>; 2],
}

impl<T: Real> State<T> {
    fn axpy(&self, h: T, d: &Derivative<T>) -> State<T> {
        let hc = Complex::new(h, T::zero());
        State {
            z: [self.z[0] + hc * d.dz[0], self.z[1] + hc * d.dz[1]],
            v: [self.v[0] + hc * d.dv[0], self.v[1] + hc * d.dv[1]],
        }
    }

    fn is_finite(&self) -> bool {
        self.z
            .iter()
            .chain(self.v.iter())
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

#[derive(Clone, Copy)]
struct Derivative<T: Real> {
    dz: [Complex<T>; 2],
    dv: [Complex<T>; 2],
}

fn geodesic_rhs<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    s: &State<T>,
) -> Result<Derivative<T>, KahlerError> {
    let p = ChartPoint::new(s.z[0], s.z[1]);
    let gamma = crate::kahler::christoffel_at(phi, params, &p)?;
    let mut dv = [Complex::new(T::zero(), T::zero()); 2];
    for alpha in 0..2 {
        let mut acc = Complex::new(T::zero(), T::zero());
        for beta in 0..2 {
            for nu in 0..2 {
                acc = acc + gamma.gamma[alpha][beta][nu] * s.v[beta] * s.v[nu];
            }
        }
        dv[alpha] = -acc;
    }
    Ok(Derivative { dz: s.v, dv })
}

/// Classical fixed-step fourth-order integration of the complex-split
/// geodesic equation z̈^α + Γ^α_{βγ} ż^β ż^γ = 0. Mixed Christoffels vanish,
/// so the holomorphic components close among themselves.
///
/// Degeneracy or a non-finite state mid-trajectory truncates the curve and
/// sets the `truncated` reason instead of failing.
pub fn integrate_geodesic<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    z0: [Complex<T>; 2],
    v0: [Complex<T>; 2],
    t_end: T,
    steps: usize,
) -> Result<HPlanarCurve<T>, HprojError> {
    assert!(steps >= 2, "geodesic integration needs at least 2 steps");
    let h = t_end / real::<T>(steps as f64);
    let half = h * real::<T>(0.5);
    let sixth = h / real::<T>(6.0);
    let mut state = State { z: z0, v: v0 };
    let mut t = T::zero();
    let mut samples = vec![CurveSample {
        t,
        z: state.z,
        v: state.v,
    }];
    let mut truncated = None;
    for _ in 0..steps {
        let step = (|| -> Result<State<T>, KahlerError> {
            let k1 = geodesic_rhs(phi, params, &state)?;
            let k2 = geodesic_rhs(phi, params, &state.axpy(half, &k1))?;
            let k3 = geodesic_rhs(phi, params, &state.axpy(half, &k2))?;
            let k4 = geodesic_rhs(phi, params, &state.axpy(h, &k3))?;
            let mut next = state;
            for alpha in 0..2 {
                let two = real::<T>(2.0);
                let sc = Complex::new(sixth, T::zero());
                next.z[alpha] = next.z[alpha]
                    + sc * (k1.dz[alpha]
                        + k2.dz[alpha] * two
                        + k3.dz[alpha] * two
                        + k4.dz[alpha]);
                next.v[alpha] = next.v[alpha]
                    + sc * (k1.dv[alpha]
                        + k2.dv[alpha] * two
                        + k3.dv[alpha] * two
                        + k4.dv[alpha]);
            }
            Ok(next)
        })();
        match step {
            Ok(next) if next.is_finite() => {
                state = next;
                t = t + h;
                samples.push(CurveSample {
                    t,
                    z: state.z,
                    v: state.v,
                });
            }
            Ok(_) => {
                truncated = Some("non-finite state".to_string());
                break;
            }
            Err(e) => {
                truncated = Some(e.to_string());
                break;
            }
        }
    }
    Ok(HPlanarCurve {
        samples,
        step: h,
        truncated,
    })
}

/// Kinetic energies g(ż, ż̄) along the curve; a geodesic first integral.
pub fn geodesic_energies<T: Real>(
    curve: &HPlanarCurve<T>,
    phi: &PotentialExpr,
    params: &ParameterTable,
) -> Result<Vec<T>, HprojError> {
    let mut out = Vec::with_capacity(curve.samples.len());
    for s in &curve.samples {
        let p = ChartPoint::new(s.z[0], s.z[1]);
        let m = crate::kahler::metric_at(phi, params, &p)?;
        out.push(m.pairing(&s.v).re);
    }
    Ok(out)
}

/// Max relative energy drift along the curve.
pub fn energy_drift<T: Real>(
    curve: &HPlanarCurve<T>,
    phi: &PotentialExpr,
    params: &ParameterTable,
) -> Result<T, HprojError> {
    let energies = geodesic_energies(curve, phi, params)?;
    let e0 = energies[0];
    let scale = T::one().max(e0.abs());
    let mut max = T::zero();
    for e in &energies {
        max = max.max((*e - e0).abs());
    }
    Ok(max / scale)
}

/// Primed Christoffel values at a point, from the Sinyukov pair of the
/// potential.
pub fn primed_christoffel_at<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    rho: T,
    p: &ChartPoint<T>,
) -> Result<ChristoffelSymbols<T>, HprojError> {
    let ctx = FamilyJets::new(phi, params, rho, p)?;
    let sj = sinyukov_jets(&ctx)?;
    let gup = jet_mat_values(&sj.gprime_inv);
    let mut out = ChristoffelSymbols::zero();
    for alpha in 0..2 {
        for beta in 0..2 {
            for nu in 0..2 {
                let mut s = Complex::new(T::zero(), T::zero());
                for mu in 0..2 {
                    s = s + gup[alpha][mu] * sj.gprime[nu][mu].extract_partial(&unit(beta))?;
                }
                out.gamma[alpha][beta][nu] = s;
            }
        }
    }
    Ok(out)
}

/// Normalized parallelism defect of the curve with respect to an arbitrary
/// primed-connection provider: at each sample,
/// ξ^α = z̈^α + Γ′^α_{βγ} ż^β ż^γ with z̈ = −Γ ż ż along the g-geodesic, and
/// the defect is |ξ¹ż² − ξ²ż¹| / (|ξ||ż| + ε). H-planarity means ξ ∥ ż.
pub fn hplanarity_residual_with<T: Real, F>(
    curve: &HPlanarCurve<T>,
    phi: &PotentialExpr,
    params: &ParameterTable,
    mut gamma_prime_at: F,
) -> Result<T, HprojError>
where
    F: FnMut(&ChartPoint<T>) -> Result<ChristoffelSymbols<T>, HprojError>,
{
    let eps = real::<T>(PARALLELISM_FLOOR);
    let mut max = T::zero();
    for s in &curve.samples {
        let p = ChartPoint::new(s.z[0], s.z[1]);
        let vnorm = (s.v[0].norm_sqr() + s.v[1].norm_sqr()).sqrt();
        if vnorm <= eps {
            return Err(HprojError::ZeroVelocity { at: as_f64(s.t) });
        }
        let gamma = crate::kahler::christoffel_at(phi, params, &p)?;
        let gamma_p = gamma_prime_at(&p)?;
        let mut xi = [Complex::new(T::zero(), T::zero()); 2];
        for alpha in 0..2 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for beta in 0..2 {
                for nu in 0..2 {
                    acc = acc
                        + (gamma_p.gamma[alpha][beta][nu] - gamma.gamma[alpha][beta][nu])
                            * s.v[beta]
                            * s.v[nu];
                }
            }
            xi[alpha] = acc;
        }
        let cross = (xi[0] * s.v[1] - xi[1] * s.v[0]).norm();
        let xinorm = (xi[0].norm_sqr() + xi[1].norm_sqr()).sqrt();
        max = max.max(cross / (xinorm * vnorm + eps));
    }
    Ok(max)
}

/// H-planarity defect of a g-geodesic under the primed connection of the
/// Sinyukov pair built from (phi, ρ).
pub fn hplanarity_residual<T: Real>(
    curve: &HPlanarCurve<T>,
    phi: &PotentialExpr,
    params: &ParameterTable,
    rho: T,
) -> Result<T, HprojError> {
    if let Some(first) = curve.samples.first() {
        ensure_family_shape(phi, params, &ChartPoint::new(first.z[0], first.z[1]))?;
    }
    hplanarity_residual_with(curve, phi, params, |p| {
        primed_christoffel_at(phi, params, rho, p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use num_complex::Complex64;

    fn equidistant() -> (PotentialExpr, ParameterTable) {
        (
            parse("exp(z1 + zb1 + z2*zb2)").unwrap(),
            ParameterTable::new(),
        )
    }

    fn flat() -> (PotentialExpr, ParameterTable) {
        (parse("z1*zb1 + z2*zb2").unwrap(), ParameterTable::new())
    }

    fn origin() -> ChartPoint<f64> {
        ChartPoint::<f64>::from_f64(0.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn killing_residual_vanishes_for_family_shape() {
        let (phi, params) = equidistant();
        let p = ChartPoint::<f64>::from_f64(0.3, -0.7, 0.2, 0.5);
        assert!(killing_residual(&phi, &params, &p).unwrap() < 1e-13);
    }

    #[test]
    fn killing_residual_positive_off_family() {
        let phi = parse("z1*z1*zb1*zb1 + z2*zb2").unwrap();
        let params = ParameterTable::new();
        let p = ChartPoint::<f64>::from_f64(0.4, 0.6, 0.1, 0.0);
        assert!(killing_residual(&phi, &params, &p).unwrap() > 1e-2);
    }

    #[test]
    fn a_tensor_at_origin_matches_hand_values() {
        let (phi, params) = equidistant();
        let a = a_tensor_at(&phi, &params, 1.0, &origin()).unwrap();
        // a₁₁̄ = 1 + ρ = 2, a₂₂̄ = ρ = 1, off-diagonals 0
        assert!((a.a[0][0] - Complex64::new(2.0, 0.0)).norm() < 1e-13);
        assert!((a.a[1][1] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        assert!(a.a[0][1].norm() < 1e-13);
        assert!(a.a[1][0].norm() < 1e-13);
        // λ = ∂₁Φ + 2ρ = 3
        assert!((a.lambda_val - 3.0).abs() < 1e-13);
    }

    #[test]
    fn trace_identity_holds_at_origin() {
        let (phi, params) = equidistant();
        let ctx = FamilyJets::new(&phi, &params, 1.0, &origin()).unwrap();
        assert!(trace_identity_residual(&ctx) < 1e-13);
    }

    #[test]
    fn flat_potential_fails_the_family_gate() {
        let (phi, params) = flat();
        let p = ChartPoint::<f64>::from_f64(0.3, 0.4, 0.1, -0.2);
        let err = a_tensor_at(&phi, &params, 1.0, &p).unwrap_err();
        assert!(matches!(err, HprojError::NotGeneralizedEquidistant { .. }));
    }

    #[test]
    fn hpa_residual_small_in_family_large_when_forced() {
        let (phi, params) = equidistant();
        let p = ChartPoint::<f64>::from_f64(0.2, -0.3, 0.4, 0.1);
        assert!(hpa_residual(&phi, &params, 1.0, &p).unwrap() < 1e-10);

        // forcing the same formula on the flat potential misses badly
        let (flat_phi, flat_params) = flat();
        let pgen = ChartPoint::<f64>::from_f64(0.5, 0.8, 0.3, -0.4);
        let ctx = FamilyJets::new(&flat_phi, &flat_params, 1.0, &pgen).unwrap();
        assert!(hpa_residual_of(&ctx).unwrap() > 1e-2);
    }

    #[test]
    fn sinyukov_at_origin_gives_minus_half_ln_two() {
        let (phi, params) = equidistant();
        let pair = sinyukov_gprime(&phi, &params, 1.0, &origin()).unwrap();
        assert!((pair.psi_val + 0.5 * 2.0f64.ln()).abs() < 1e-12);
        assert!(!pair.affine);
    }

    #[test]
    fn sinyukov_degenerate_rho_zero_at_origin() {
        let (phi, params) = equidistant();
        let err = sinyukov_gprime(&phi, &params, 0.0, &origin()).unwrap_err();
        assert!(matches!(err, HprojError::DegenerateATensor { .. }));
        let err = sinyukov_gprime(&phi, &params, -1.0, &origin()).unwrap_err();
        assert!(matches!(err, HprojError::DegenerateATensor { .. }));
    }

    #[test]
    fn identity_transform_from_a_equal_g() {
        let (phi, params) = equidistant();
        let p = ChartPoint::<f64>::from_f64(0.3, 0.1, -0.2, 0.4);
        let m = crate::kahler::metric_at(&phi, &params, &p).unwrap();
        let (gp, psi) = sinyukov_pair(&m, &m.g.clone()).unwrap();
        assert!(psi.abs() < 1e-12);
        assert!(max_abs_diff(&gp.g, &m.g) < 1e-12);
    }

    #[test]
    fn pair_residual_small_for_family() {
        let (phi, params) = equidistant();
        let p = ChartPoint::<f64>::from_f64(0.25, -0.15, 0.35, 0.2);
        let pair = sinyukov_gprime(&phi, &params, 1.0, &p).unwrap();
        let r = pair_residual(&pair, &phi, &params, &p).unwrap();
        assert!(r < 1e-9, "pair residual {r}");
    }

    #[test]
    fn pair_at_wrong_point_is_rejected() {
        let (phi, params) = equidistant();
        let p1 = ChartPoint::<f64>::from_f64(0.1, 0.2, 0.3, -0.1);
        let p2 = ChartPoint::<f64>::from_f64(0.6, -0.4, -0.2, 0.3);
        let pair = sinyukov_gprime(&phi, &params, 1.0, &p1).unwrap();
        let err = pair_residual(&pair, &phi, &params, &p2).unwrap_err();
        assert!(matches!(err, HprojError::PairMismatch { .. }), "{err}");
    }

    #[test]
    fn forced_psi_zero_breaks_the_pair_identity() {
        let (phi, params) = equidistant();
        let p = ChartPoint::<f64>::from_f64(0.2, 0.3, -0.1, 0.25);
        let ctx = FamilyJets::new(&phi, &params, 1.0, &p).unwrap();
        let mut sj = sinyukov_jets(&ctx).unwrap();
        // zero out ψ while keeping g′ ≠ g
        sj.psi = ComplexJet::constant(Complex64::new(0.0, 0.0), 2);
        let r = pair_residual_of(&ctx, &sj).unwrap();
        assert!(r > 1e-3, "expected visible violation, got {r}");
    }

    #[test]
    fn b_checks_vanish_for_equidistant() {
        let (phi, params) = equidistant();
        let p = ChartPoint::<f64>::from_f64(0.3, -0.2, 0.15, 0.4);
        let checks = b_tensor_checks(&phi, &params, 1.0, &p).unwrap();
        assert!(checks.trace_residual < 1e-11);
        assert!(checks.zvez_residual < 1e-10);
        assert!(checks.zvez_b_residual < 1e-10);
        // the family a depends on z¹ only through z¹+z̄¹, so b ≈ 0 entrywise
        assert!(max_abs(&checks.b) < 1e-11);
    }

    #[test]
    fn perturbed_a_mixed_breaks_commutation() {
        let (phi, params) = equidistant();
        let p = ChartPoint::<f64>::from_f64(0.3, -0.2, 0.15, 0.4);
        let ctx = FamilyJets::new(&phi, &params, 1.0, &p).unwrap();
        let curv = curvature_from_jet(&ctx.phi, &ctx.metric).unwrap();
        let amix = ctx.a_mixed_jets();
        let mut vals = jet_mat_values(&amix);
        let clean = commutator_residual(&vals, &curv.ricci_mixed);
        vals[0][1] += Complex64::new(0.1, 0.0);
        let perturbed = commutator_residual(&vals, &curv.ricci_mixed);
        assert!(perturbed > clean + 1e-3, "clean {clean}, perturbed {perturbed}");
    }

    #[test]
    fn flat_geodesics_are_straight_lines() {
        let (phi, params) = flat();
        let v0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let z0 = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let curve = integrate_geodesic(&phi, &params, z0, v0, 1.0, 100).unwrap();
        assert!(curve.truncated.is_none());
        let last = curve.samples.last().unwrap();
        assert!((last.z[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((last.z[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn geodesic_energy_is_conserved() {
        let (phi, params) = equidistant();
        let z0 = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let v0 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let curve = integrate_geodesic(&phi, &params, z0, v0, 1.0, 1000).unwrap();
        assert!(curve.truncated.is_none());
        assert!(energy_drift(&curve, &phi, &params).unwrap() < 1e-8);
    }

    #[test]
    fn rk4_convergence_order_is_four() {
        let (phi, params) = equidistant();
        let z0 = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let v0 = [Complex64::new(0.8, 0.0), Complex64::new(0.5, 0.3)];
        let coarse = integrate_geodesic(&phi, &params, z0, v0, 1.0, 40).unwrap();
        let fine = integrate_geodesic(&phi, &params, z0, v0, 1.0, 80).unwrap();
        let d_coarse = energy_drift(&coarse, &phi, &params).unwrap();
        let d_fine = energy_drift(&fine, &phi, &params).unwrap();
        let order = (d_coarse / d_fine).log2();
        assert!(
            (order - 4.0).abs() < 0.2,
            "observed convergence order {order} (drifts {d_coarse:.3e} / {d_fine:.3e})"
        );
    }

    #[test]
    fn geodesics_are_hplanar_for_the_pair() {
        let (phi, params) = equidistant();
        let z0 = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let v0 = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)];
        let curve = integrate_geodesic(&phi, &params, z0, v0, 1.0, 200).unwrap();
        assert!(curve.truncated.is_none());
        let r = hplanarity_residual(&curve, &phi, &params, 1.0).unwrap();
        assert!(r < 1e-6, "h-planarity defect {r}");
        // negative control: an unrelated flat primed connection
        let bad = hplanarity_residual_with(&curve, &phi, &params, |_| {
            Ok(ChristoffelSymbols::zero())
        })
        .unwrap();
        assert!(bad > 1e-2, "negative control too small: {bad}");
    }

    #[test]
    fn identity_pair_on_flat_metric_has_zero_defect() {
        let (phi, params) = flat();
        let z0 = [Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.2)];
        let v0 = [Complex64::new(1.0, 0.2), Complex64::new(-0.3, 0.5)];
        let curve = integrate_geodesic(&phi, &params, z0, v0, 1.0, 50).unwrap();
        let r = hplanarity_residual_with(&curve, &phi, &params, |p| {
            Ok(crate::kahler::christoffel_at(&phi, &params, p)?)
        })
        .unwrap();
        assert!(r < 1e-14);
    }

    #[test]
    fn truncation_reported_when_metric_degenerates() {
        // Φ = z1·zb1 + (z2·zb2)²/4 has g₂₂̄ = z2·zb2 → degenerate at z2 = 0
        let phi = parse("z1*zb1 + z2*zb2*z2*zb2/4").unwrap();
        let params = ParameterTable::new();
        let z0 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let v0 = [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)];
        let curve = integrate_geodesic(&phi, &params, z0, v0, 2.0, 100).unwrap();
        assert!(curve.truncated.is_some());
        assert!(curve.samples.len() < 101);
    }

    #[test]
    fn killing_field_components_are_fixed() {
        let mu = KillingField::components::<f64>();
        assert_eq!(mu[0], Complex64::new(0.0, 1.0));
        assert_eq!(mu[2], Complex64::new(0.0, -1.0));
        assert_eq!(mu[1], Complex64::new(0.0, 0.0));
        assert_eq!(mu[3], Complex64::new(0.0, 0.0));
    }
}
