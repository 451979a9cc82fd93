//! Pointwise Kähler tensor calculus in a complex chart on a two-complex-
//! dimensional manifold: from a potential Φ to metric, connection and
//! curvature, plus the Einstein and holomorphic-sectional-curvature
//! diagnostics.
//!
//! All index machinery is hard-wired to n = 2 (matrices are 2×2, tensors
//! 2×2×2×2); the barred components of Christoffel and Riemann are complex
//! conjugates of the stored unbarred ones and all mixed components vanish,
//! so they are never stored.

use num_complex::Complex;
use thiserror::Error;

use crate::dsl::{evaluate, evaluate_value, EvalError, ParameterTable, PotentialExpr};
use crate::jets::{ComplexJet, JetError, MultiIndex};
use crate::linalg::{
    det2, hermiticity_residual, inverse_transposed, jet_det2, max_abs, Mat2,
};
use crate::scalar::{as_f64, real, Real};

/// Relative threshold below which a metric determinant counts as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;

/// Tolerance on |Im Φ| (relative to max(1, |Φ|)) before a potential is
/// rejected as non-real.
pub const REALITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KahlerError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("potential is not real at the point (|Im Φ| = {imag:.3e})")]
    NonReal { imag: f64 },
    #[error("metric is degenerate (|det g| = {det:.3e}, scale {scale:.3e})")]
    Degenerate { det: f64, scale: f64 },
    #[error("direction is null for the metric (|g(v, v̄)| = {norm:.3e})")]
    NullDirection { norm: f64 },
    #[error("gauge function references a barred variable")]
    NotHolomorphic,
}

/// A point of a complex chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint<T: Real> {
    pub z1: Complex<T>,
    pub z2: Complex<T>,
}

impl<T: Real> ChartPoint<T> {
    pub fn new(z1: Complex<T>, z2: Complex<T>) -> Self {
        ChartPoint { z1, z2 }
    }

    pub fn from_f64(re1: f64, im1: f64, re2: f64, im2: f64) -> Self {
        ChartPoint {
            z1: crate::scalar::complex(re1, im1),
            z2: crate::scalar::complex(re2, im2),
        }
    }

    pub fn origin() -> Self {
        Self::from_f64(0.0, 0.0, 0.0, 0.0)
    }

    /// Seeds for the four formals: barred slots carry numeric conjugates.
    pub fn seeds(&self) -> [Complex<T>; 4] {
        [self.z1, self.z2, self.z1.conj(), self.z2.conj()]
    }

    pub fn is_finite(&self) -> bool {
        self.z1.re.is_finite()
            && self.z1.im.is_finite()
            && self.z2.re.is_finite()
            && self.z2.im.is_finite()
    }
}

/// The Hermitian metric block g_{αβ̄} at a point, with its inverse and
/// determinant. `ginv` satisfies Σ_β g^{αβ̄} g_{γβ̄} = δ^α_γ.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMetric<T: Real> {
    pub g: Mat2<T>,
    pub ginv: Mat2<T>,
    pub det: Complex<T>,
}

impl<T: Real> HermitianMetric<T> {
    /// Builds the inverse and determinant, rejecting degenerate input.
    pub fn from_entries(g: Mat2<T>) -> Result<Self, KahlerError> {
        let det = det2(&g);
        let scale = max_abs(&g);
        let floor = real::<T>(DEGENERACY_THRESHOLD) * scale * scale;
        if det.norm() <= floor {
            return Err(KahlerError::Degenerate {
                det: as_f64(det.norm()),
                scale: as_f64(scale),
            });
        }
        let ginv = inverse_transposed(&g).expect("determinant checked above");
        Ok(HermitianMetric { g, ginv, det })
    }

    pub fn hermiticity_residual(&self) -> T {
        hermiticity_residual(&self.g)
    }

    /// Max |Σ_β g^{αβ̄} g_{γβ̄} − δ^α_γ|.
    pub fn inverse_residual(&self) -> T {
        let mut max = T::zero();
        for alpha in 0..2 {
            for gamma in 0..2 {
                let mut s = Complex::new(T::zero(), T::zero());
                for beta in 0..2 {
                    s = s + self.ginv[alpha][beta] * self.g[gamma][beta];
                }
                let expected = if alpha == gamma { T::one() } else { T::zero() };
                max = max.max((s - Complex::new(expected, T::zero())).norm());
            }
        }
        max
    }

    pub fn max_entry(&self) -> T {
        max_abs(&self.g)
    }

    /// g(v, v̄) = Σ g_{αβ̄} v^α conj(v^β).
    pub fn pairing(&self, v: &[Complex<T>; 2]) -> Complex<T> {
        let mut s = Complex::new(T::zero(), T::zero());
        for alpha in 0..2 {
            for beta in 0..2 {
                s = s + self.g[alpha][beta] * v[alpha] * v[beta].conj();
            }
        }
        s
    }
}

/// Γ^α_{βν}, symmetric in the lower pair; barred components are conjugates
/// and mixed ones vanish identically.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelSymbols<T: Real> {
    pub gamma: [[[Complex<T>; 2]; 2]; 2],
}

impl<T: Real> ChristoffelSymbols<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        ChristoffelSymbols {
            gamma: [[[z; 2]; 2]; 2],
        }
    }

    pub fn symmetry_residual(&self) -> T {
        let mut max = T::zero();
        for a in 0..2 {
            for b in 0..2 {
                for n in 0..2 {
                    max = max.max((self.gamma[a][b][n] - self.gamma[a][n][b]).norm());
                }
            }
        }
        max
    }

    pub fn max_entry(&self) -> T {
        let mut max = T::zero();
        for a in 0..2 {
            for b in 0..2 {
                for n in 0..2 {
                    max = max.max(self.gamma[a][b][n].norm());
                }
            }
        }
        max
    }
}

/// Curvature at a point: R^α_{βμν̄}, the Ricci block R_{αβ̄} computed from
/// ∂∂̄ ln det g, the same block recovered by contracting Riemann, the mixed
/// Ricci R^α_β and the scalar curvature 2 g^{αβ̄}R_{αβ̄}.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData<T: Real> {
    pub riemann: [[[[Complex<T>; 2]; 2]; 2]; 2],
    pub ricci: Mat2<T>,
    pub ricci_from_riemann: Mat2<T>,
    pub ricci_mixed: Mat2<T>,
    pub scalar: T,
    pub scalar_imag: T,
    /// Max entry difference between the two Ricci computations.
    pub crosscheck_residual: T,
}

impl<T: Real> CurvatureData<T> {
    pub fn max_riemann_entry(&self) -> T {
        let mut max = T::zero();
        for a in 0..2 {
            for b in 0..2 {
                for m in 0..2 {
                    for n in 0..2 {
                        max = max.max(self.riemann[a][b][m][n].norm());
                    }
                }
            }
        }
        max
    }

    pub fn max_ricci_entry(&self) -> T {
        max_abs(&self.ricci)
    }

    /// β↔μ symmetry residual of R^α_{βμν̄}.
    pub fn riemann_symmetry_residual(&self) -> T {
        let mut max = T::zero();
        for a in 0..2 {
            for b in 0..2 {
                for m in 0..2 {
                    for n in 0..2 {
                        max = max
                            .max((self.riemann[a][b][m][n] - self.riemann[a][m][b][n]).norm());
                    }
                }
            }
        }
        max
    }
}

/// Ω_{αβ̄} = −i g_{αβ̄}.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalForm<T: Real> {
    pub omega: Mat2<T>,
}

pub fn fundamental_form<T: Real>(metric: &HermitianMetric<T>) -> FundamentalForm<T> {
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut omega = crate::linalg::zero_mat();
    for a in 0..2 {
        for b in 0..2 {
            omega[a][b] = minus_i * metric.g[a][b];
        }
    }
    FundamentalForm { omega }
}

/// Multi-index with `a` unbarred and `b` barred derivative slots.
fn metric_index(alpha: usize, beta: usize) -> MultiIndex {
    let mut k = [0u8; 4];
    k[alpha] += 1;
    k[2 + beta] += 1;
    MultiIndex(k)
}

/// Evaluates the potential jet after checking Φ is real at the point.
pub(crate) fn phi_jet<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
    order: usize,
) -> Result<ComplexJet<T>, KahlerError> {
    let value = evaluate_value(phi, params, p)?;
    let scale = T::one().max(value.norm());
    if value.im.abs() > real::<T>(REALITY_TOLERANCE) * scale {
        return Err(KahlerError::NonReal {
            imag: as_f64(value.im.abs()),
        });
    }
    Ok(evaluate(phi, params, p, order)?)
}

/// g_{αβ̄} = ∂_α ∂_β̄ Φ extracted from a jet of order ≥ 2.
pub(crate) fn metric_from_jet<T: Real>(
    jet: &ComplexJet<T>,
) -> Result<HermitianMetric<T>, KahlerError> {
    let mut g = crate::linalg::zero_mat();
    for alpha in 0..2 {
        for beta in 0..2 {
            g[alpha][beta] = jet.extract_partial(&metric_index(alpha, beta))?;
        }
    }
    HermitianMetric::from_entries(g)
}

/// Γ^α_{βν} = g^{αμ̄} ∂_β ∂_ν ∂_μ̄ Φ from a jet of order ≥ 3.
pub(crate) fn christoffel_from_jet<T: Real>(
    jet: &ComplexJet<T>,
    metric: &HermitianMetric<T>,
) -> Result<ChristoffelSymbols<T>, KahlerError> {
    let mut out = ChristoffelSymbols::zero();
    for alpha in 0..2 {
        for beta in 0..2 {
            for nu in 0..2 {
                let mut s = Complex::new(T::zero(), T::zero());
                for mu in 0..2 {
                    let mut k = [0u8; 4];
                    k[beta] += 1;
                    k[nu] += 1;
                    k[2 + mu] += 1;
                    s = s + metric.ginv[alpha][mu] * jet.extract_partial(&MultiIndex(k))?;
                }
                out.gamma[alpha][beta][nu] = s;
            }
        }
    }
    Ok(out)
}

/// The metric at a point. Requires Φ real at the point and nondegenerate
/// second mixed partials.
pub fn metric_at<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Result<HermitianMetric<T>, KahlerError> {
    let jet = phi_jet(phi, params, p, 2)?;
    metric_from_jet(&jet)
}

/// Max over (α, β, γ) of |∂_α g_{βγ̄} − ∂_β g_{αγ̄}|, evaluated through two
/// independent derivative routes on the jet. Analytically zero for any
/// potential-derived metric; a self-test of the differentiation core.
pub fn closedness_residual<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Result<T, KahlerError> {
    let jet = phi_jet(phi, params, p, 3)?;
    let mut max = T::zero();
    for alpha in 0..2 {
        for beta in 0..2 {
            for gamma in 0..2 {
                // ∂_α g_{βγ̄} by direct extraction
                let mut k = [0u8; 4];
                k[alpha] += 1;
                k[beta] += 1;
                k[2 + gamma] += 1;
                let direct = jet.extract_partial(&MultiIndex(k))?;
                // ∂_β g_{αγ̄} through nested derivative jets
                let nested = jet
                    .derivative(beta)?
                    .derivative(alpha)?
                    .derivative(2 + gamma)?
                    .value();
                max = max.max((direct - nested).norm());
            }
        }
    }
    Ok(max)
}

/// The Christoffel symbols at a point.
pub fn christoffel_at<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Result<ChristoffelSymbols<T>, KahlerError> {
    let jet = phi_jet(phi, params, p, 3)?;
    let metric = metric_from_jet(&jet)?;
    christoffel_from_jet(&jet, &metric)
}

/// The ln det g jet used by the Ricci computation. A negative real
/// determinant (indefinite metrics) is negated first: the dropped additive
/// iπ constant cannot survive ∂_α∂_β̄.
fn log_det_jet<T: Real>(g_jets: &crate::linalg::JetMat2<T>) -> Result<ComplexJet<T>, KahlerError> {
    let det = jet_det2(g_jets);
    let v = det.value();
    let jet = if v.im.abs() <= real::<T>(1e-12) * T::one().max(v.norm()) && v.re < T::zero() {
        (-&det).ln()?
    } else {
        det.ln()?
    };
    Ok(jet)
}

pub(crate) fn metric_jets<T: Real>(
    jet: &ComplexJet<T>,
    order: usize,
) -> Result<crate::linalg::JetMat2<T>, KahlerError> {
    let d = |alpha: usize, beta: usize| -> Result<ComplexJet<T>, KahlerError> {
        Ok(jet
            .derivative(alpha)?
            .derivative(2 + beta)?
            .truncate(order))
    };
    Ok([[d(0, 0)?, d(0, 1)?], [d(1, 0)?, d(1, 1)?]])
}

/// Riemann and Ricci curvature at a point.
///
/// R^α_{βμν̄} = −∂_ν̄ Γ^α_{βμ} by the product rule on Γ = g⁻¹·∂g; the Ricci
/// block comes from ∂_α∂_β̄ ln det g and is cross-checked against the
/// contraction R^α_{βγν̄} g^{βν̄} = −R^α_γ.
pub fn curvature_at<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Result<CurvatureData<T>, KahlerError> {
    let jet = phi_jet(phi, params, p, 4)?;
    let metric = metric_from_jet(&jet)?;
    curvature_from_jet(&jet, &metric)
}

pub(crate) fn curvature_from_jet<T: Real>(
    jet: &ComplexJet<T>,
    metric: &HermitianMetric<T>,
) -> Result<CurvatureData<T>, KahlerError> {
    let zero = Complex::new(T::zero(), T::zero());
    let ginv = &metric.ginv;

    // third partials: d_unbar[β][μ][σ] = ∂_β g_{σ̄μ}, d_bar[γ][β][ν] = ∂_ν̄ g_{γβ̄}
    let mut d_unbar = [[[zero; 2]; 2]; 2];
    let mut d_bar = [[[zero; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let mut k = [0u8; 4];
                k[a] += 1;
                k[b] += 1;
                k[2 + c] += 1;
                // ∂_a ∂_b ∂_c̄ Φ, symmetric in (a, b)
                d_unbar[a][b][c] = jet.extract_partial(&MultiIndex(k))?;
                let mut kb = [0u8; 4];
                kb[a] += 1;
                kb[2 + b] += 1;
                kb[2 + c] += 1;
                // ∂_a ∂_b̄ ∂_c̄ Φ, symmetric in (b, c)
                d_bar[a][b][c] = jet.extract_partial(&MultiIndex(kb))?;
            }
        }
    }

    // ∂_ν̄ g^{ασ̄} = −Σ_{γβ} g^{αβ̄} (∂_ν̄ g_{γβ̄}) g^{γσ̄}
    let mut dginv = [[[zero; 2]; 2]; 2]; // [ν][α][σ]
    for nu in 0..2 {
        for alpha in 0..2 {
            for sigma in 0..2 {
                let mut s = zero;
                for gamma in 0..2 {
                    for beta in 0..2 {
                        s = s + ginv[alpha][beta] * d_bar[gamma][beta][nu] * ginv[gamma][sigma];
                    }
                }
                dginv[nu][alpha][sigma] = -s;
            }
        }
    }

    let mut riemann = [[[[zero; 2]; 2]; 2]; 2];
    for alpha in 0..2 {
        for beta in 0..2 {
            for mu in 0..2 {
                for nu in 0..2 {
                    let mut s = zero;
                    for sigma in 0..2 {
                        let mut k = [0u8; 4];
                        k[beta] += 1;
                        k[mu] += 1;
                        k[2 + sigma] += 1;
                        k[2 + nu] += 1;
                        let fourth = jet.extract_partial(&MultiIndex(k))?;
                        s = s
                            + dginv[nu][alpha][sigma] * d_unbar[beta][mu][sigma]
                            + ginv[alpha][sigma] * fourth;
                    }
                    riemann[alpha][beta][mu][nu] = -s;
                }
            }
        }
    }

    // Ricci from the log-determinant
    let g_jets = metric_jets(jet, 2)?;
    let log_det = log_det_jet(&g_jets)?;
    let mut ricci = crate::linalg::zero_mat();
    for alpha in 0..2 {
        for beta in 0..2 {
            ricci[alpha][beta] = log_det.extract_partial(&metric_index(alpha, beta))?;
        }
    }

    // mixed Ricci: R^α_β = g^{αμ̄} R_{βμ̄}
    let mut ricci_mixed = crate::linalg::zero_mat();
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut s = zero;
            for mu in 0..2 {
                s = s + ginv[alpha][mu] * ricci[beta][mu];
            }
            ricci_mixed[alpha][beta] = s;
        }
    }

    // mixed Ricci from the Riemann contraction, then lowered
    let mut mixed_riem = crate::linalg::zero_mat();
    for alpha in 0..2 {
        for gamma in 0..2 {
            let mut s = zero;
            for beta in 0..2 {
                for nu in 0..2 {
                    s = s + riemann[alpha][beta][gamma][nu] * ginv[beta][nu];
                }
            }
            mixed_riem[alpha][gamma] = -s;
        }
    }
    let mut ricci_from_riemann = crate::linalg::zero_mat();
    for gamma in 0..2 {
        for sigma in 0..2 {
            let mut s = zero;
            for alpha in 0..2 {
                s = s + metric.g[alpha][sigma] * mixed_riem[alpha][gamma];
            }
            ricci_from_riemann[gamma][sigma] = s;
        }
    }
    let crosscheck_residual = crate::linalg::max_abs_diff(&ricci, &ricci_from_riemann);

    let mut trace = zero;
    for alpha in 0..2 {
        for beta in 0..2 {
            trace = trace + ginv[alpha][beta] * ricci[alpha][beta];
        }
    }
    let scalar_c = trace * real::<T>(2.0);

    Ok(CurvatureData {
        riemann,
        ricci,
        ricci_from_riemann,
        ricci_mixed,
        scalar: scalar_c.re,
        scalar_imag: scalar_c.im.abs(),
        crosscheck_residual,
    })
}

/// κ = tr(R^α_β)/2 and the Einstein defect max |R^α_β − κ δ^α_β|.
/// Ricci-flatness additionally demands |κ| below tolerance.
pub fn einstein_defect<T: Real>(
    curv: &CurvatureData<T>,
    _g: &HermitianMetric<T>,
) -> (Complex<T>, T) {
    let kappa = (curv.ricci_mixed[0][0] + curv.ricci_mixed[1][1]) * real::<T>(0.5);
    let mut defect = T::zero();
    for alpha in 0..2 {
        for beta in 0..2 {
            let delta = if alpha == beta {
                kappa
            } else {
                Complex::new(T::zero(), T::zero())
            };
            defect = defect.max((curv.ricci_mixed[alpha][beta] - delta).norm());
        }
    }
    (kappa, defect)
}

/// Holomorphic sectional curvature H(v) = 2·R(v, v̄, v, v̄)/g(v, v̄)², with
/// R_{αβ̄μν̄} = g_{σβ̄} R^σ_{αμν̄}. The overall factor is a convention and
/// cancels in constancy comparisons.
pub fn hsc_at<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    p: &ChartPoint<T>,
    v: &[Complex<T>; 2],
) -> Result<T, KahlerError> {
    let jet = phi_jet(phi, params, p, 4)?;
    let metric = metric_from_jet(&jet)?;
    let curv = curvature_from_jet(&jet, &metric)?;

    let vnorm2 = v[0].norm_sqr() + v[1].norm_sqr();
    let pairing = metric.pairing(v);
    let floor = real::<T>(DEGENERACY_THRESHOLD) * metric.max_entry() * vnorm2;
    if pairing.norm() <= floor {
        return Err(KahlerError::NullDirection {
            norm: as_f64(pairing.norm()),
        });
    }

    let mut num = Complex::new(T::zero(), T::zero());
    for alpha in 0..2 {
        for beta in 0..2 {
            for mu in 0..2 {
                for nu in 0..2 {
                    let mut lowered = Complex::new(T::zero(), T::zero());
                    for sigma in 0..2 {
                        lowered = lowered + metric.g[sigma][beta] * curv.riemann[sigma][alpha][mu][nu];
                    }
                    num = num + lowered * v[alpha] * v[beta].conj() * v[mu] * v[nu].conj();
                }
            }
        }
    }
    let h = num * real::<T>(2.0) / (pairing * pairing);
    Ok(h.re)
}

/// Φ′ = Φ + f(z) + conj f(z) for holomorphic f: the metric of the result is
/// identical pointwise because ∂∂̄ annihilates pluriharmonic terms.
pub fn gauge_transform(
    phi: &PotentialExpr,
    f: &PotentialExpr,
) -> Result<PotentialExpr, KahlerError> {
    if f.references_barred() {
        return Err(KahlerError::NotHolomorphic);
    }
    Ok(PotentialExpr::add(
        phi.clone(),
        PotentialExpr::add(f.clone(), PotentialExpr::conj(f.clone())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse, ParameterTable};
    use num_complex::Complex64;

    fn flat() -> (PotentialExpr, ParameterTable) {
        (parse("z1*zb1 + z2*zb2").unwrap(), ParameterTable::new())
    }

    fn equidistant() -> (PotentialExpr, ParameterTable) {
        (parse("exp(z1 + zb1 + z2*zb2)").unwrap(), ParameterTable::new())
    }

    fn pt(re1: f64, im1: f64, re2: f64, im2: f64) -> ChartPoint<f64> {
        ChartPoint::from_f64(re1, im1, re2, im2)
    }

    #[test]
    fn flat_metric_is_identity() {
        let (phi, params) = flat();
        let m = metric_at(&phi, &params, &pt(0.3, -0.2, 0.8, 0.1)).unwrap();
        assert!(crate::linalg::max_abs_diff(&m.g, &crate::linalg::identity()) < 1e-14);
        assert!((m.det - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn equidistant_metric_at_origin_is_identity() {
        let (phi, params) = equidistant();
        let m = metric_at(&phi, &params, &pt(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert!(crate::linalg::max_abs_diff(&m.g, &crate::linalg::identity()) < 1e-14);
    }

    #[test]
    fn degenerate_potential_is_rejected() {
        let phi = parse("z1*zb1").unwrap();
        let params = ParameterTable::new();
        let err = metric_at(&phi, &params, &pt(0.0, 0.0, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, KahlerError::Degenerate { .. }));
    }

    #[test]
    fn non_real_potential_is_rejected() {
        let phi = parse("z1*z2").unwrap();
        let params = ParameterTable::new();
        let err = metric_at(&phi, &params, &pt(1.0, 0.5, 0.3, -0.2)).unwrap_err();
        assert!(matches!(err, KahlerError::NonReal { .. }));
    }

    #[test]
    fn flat_christoffel_vanishes() {
        let (phi, params) = flat();
        let c = christoffel_at(&phi, &params, &pt(0.5, 0.1, -0.3, 0.7)).unwrap();
        assert!(c.max_entry() < 1e-14);
    }

    #[test]
    fn product_potential_christoffel_111_is_one() {
        // Φ = exp(z1+zb1) + z2 zb2: g = diag(e^x, 1), Γ¹₁₁ = e^{−x}·e^x = 1
        let phi = parse("exp(z1 + zb1) + z2*zb2").unwrap();
        let params = ParameterTable::new();
        let p = pt(0.4, 0.3, 0.2, -0.6);
        let c = christoffel_at(&phi, &params, &p).unwrap();
        assert!((c.gamma[0][0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let mut others = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                for n in 0..2 {
                    if (a, b, n) != (0, 0, 0) {
                        others = others.max(c.gamma[a][b][n].norm());
                    }
                }
            }
        }
        assert!(others < 1e-12);
    }

    #[test]
    fn equidistant_christoffel_111_at_origin() {
        let (phi, params) = equidistant();
        let c = christoffel_at(&phi, &params, &pt(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((c.gamma[0][0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn flat_curvature_vanishes() {
        let (phi, params) = flat();
        let c = curvature_at(&phi, &params, &pt(0.2, 0.4, -0.1, 0.3)).unwrap();
        assert!(c.max_riemann_entry() < 1e-13);
        assert!(c.max_ricci_entry() < 1e-13);
        assert!(c.scalar.abs() < 1e-13);
    }

    #[test]
    fn equidistant_ricci_is_twice_in_the_22_slot() {
        let (phi, params) = equidistant();
        for p in [pt(0.0, 0.0, 0.0, 0.0), pt(0.3, -0.4, 0.5, 0.2)] {
            let c = curvature_at(&phi, &params, &p).unwrap();
            assert!((c.ricci[1][1] - Complex64::new(2.0, 0.0)).norm() < 1e-11);
            assert!(c.ricci[0][0].norm() < 1e-11);
            assert!(c.ricci[0][1].norm() < 1e-11);
            assert!(c.ricci[1][0].norm() < 1e-11);
            assert!(c.crosscheck_residual < 1e-10);
        }
    }

    #[test]
    fn equidistant_einstein_defect_at_origin() {
        let (phi, params) = equidistant();
        let p = pt(0.0, 0.0, 0.0, 0.0);
        let m = metric_at(&phi, &params, &p).unwrap();
        let c = curvature_at(&phi, &params, &p).unwrap();
        let (kappa, defect) = einstein_defect(&c, &m);
        assert!((kappa - Complex64::new(1.0, 0.0)).norm() < 1e-11);
        assert!((defect - 1.0).abs() < 1e-11);
    }

    #[test]
    fn flat_einstein_defect_is_zero() {
        let (phi, params) = flat();
        let p = pt(0.7, 0.0, 0.1, 0.4);
        let m = metric_at(&phi, &params, &p).unwrap();
        let c = curvature_at(&phi, &params, &p).unwrap();
        let (kappa, defect) = einstein_defect(&c, &m);
        assert!(kappa.norm() < 1e-13);
        assert!(defect < 1e-13);
    }

    #[test]
    fn flat_hsc_vanishes() {
        let (phi, params) = flat();
        let v = [Complex64::new(1.0, 0.3), Complex64::new(-0.5, 0.8)];
        let h = hsc_at(&phi, &params, &pt(0.2, 0.1, 0.5, -0.3), &v).unwrap();
        assert!(h.abs() < 1e-13);
    }

    #[test]
    fn hsc_rejects_null_direction() {
        let (phi, params) = flat();
        let v = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let err = hsc_at(&phi, &params, &pt(0.2, 0.1, 0.5, -0.3), &v).unwrap_err();
        assert!(matches!(err, KahlerError::NullDirection { .. }));
    }

    #[test]
    fn gauge_transform_preserves_metric() {
        let (phi, params) = flat();
        let f = parse("exp(z2)").unwrap();
        let phi2 = gauge_transform(&phi, &f).unwrap();
        for k in 0..10 {
            let t = k as f64 / 3.0;
            let p = pt(0.1 + 0.2 * t, -0.3 + 0.1 * t, 0.4 - 0.2 * t, 0.2 * t);
            let m1 = metric_at(&phi, &params, &p).unwrap();
            let m2 = metric_at(&phi2, &params, &p).unwrap();
            assert!(crate::linalg::max_abs_diff(&m1.g, &m2.g) < 1e-12);
        }
    }

    #[test]
    fn gauge_transform_rejects_antiholomorphic_f() {
        let (phi, _) = flat();
        let f = parse("zb1").unwrap();
        assert!(matches!(
            gauge_transform(&phi, &f).unwrap_err(),
            KahlerError::NotHolomorphic
        ));
    }

    #[test]
    fn fundamental_form_is_minus_i_g() {
        let (phi, params) = equidistant();
        let m = metric_at(&phi, &params, &pt(0.3, 0.2, -0.1, 0.5)).unwrap();
        let omega = fundamental_form(&m);
        for a in 0..2 {
            for b in 0..2 {
                let expected = Complex64::new(0.0, -1.0) * m.g[a][b];
                assert_eq!(omega.omega[a][b], expected);
            }
        }
    }

    #[test]
    fn closedness_residual_is_tiny_for_smooth_potentials() {
        let (phi, params) = equidistant();
        assert!(closedness_residual(&phi, &params, &pt(0.3, -0.2, 0.4, 0.1)).unwrap() < 1e-12);
        let (flat_phi, flat_params) = flat();
        assert!(closedness_residual(&flat_phi, &flat_params, &pt(0.5, 0.5, 0.5, 0.5)).unwrap() < 1e-14);
    }

    #[test]
    fn f32_smoke_metric_of_flat_potential() {
        let phi = parse("z1*zb1 + z2*zb2").unwrap();
        let params = ParameterTable::new();
        let p: ChartPoint<f32> = ChartPoint::from_f64(0.25, -0.5, 0.75, 0.125);
        let m = metric_at(&phi, &params, &p).unwrap();
        assert!((m.g[0][0].re - 1.0).abs() < 1e-6);
        assert!(m.g[0][1].norm() < 1e-6);
    }
}
