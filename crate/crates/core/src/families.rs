//! Constructors and targeted verifiers for the built-in potential families:
//! flat, equidistant (𝒲 = exp), generalized equidistant 𝒲(z¹+z̄¹+F(z²,z̄²)),
//! the Ricci-flat family A(z¹+z̄¹+γz²z̄²)^(3/2), and the constant
//! holomorphic-sectional-curvature potential.

use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::dsl::{
    evaluate, parse, BindingError, EvalError, ParameterTable, ParseError, PotentialExpr,
    PotentialFile, Variable,
};
use crate::jets::{ComplexJet, JetError, MultiIndex};
use crate::kahler::{curvature_at, hsc_at, metric_at, phi_jet, ChartPoint, KahlerError};
use crate::scalar::{as_f64, complex, real, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Flat,
    Equidistant,
    GeneralizedEquidistant,
    RicciFlat,
    ConstantHsc,
}

impl FamilyKind {
    pub fn parse(name: &str) -> Option<FamilyKind> {
        match name.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "flat" => Some(FamilyKind::Flat),
            "equidistant" => Some(FamilyKind::Equidistant),
            "generalized-equidistant" => Some(FamilyKind::GeneralizedEquidistant),
            "ricci-flat" => Some(FamilyKind::RicciFlat),
            "constant-hsc" => Some(FamilyKind::ConstantHsc),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Flat => "flat",
            FamilyKind::Equidistant => "equidistant",
            FamilyKind::GeneralizedEquidistant => "generalized-equidistant",
            FamilyKind::RicciFlat => "ricci-flat",
            FamilyKind::ConstantHsc => "constant-hsc",
        }
    }
}

/// A family selection: kind, parameter values, and the optional 𝒲 / F
/// sub-expressions of the generalized case (𝒲 univariate in the
/// placeholder `x`, F in z2 and zb2).
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: ParameterTable,
    pub w_source: Option<String>,
    pub f_source: Option<String>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        FamilySpec {
            kind,
            params: ParameterTable::new(),
            w_source: None,
            f_source: None,
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.set(name, value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("unknown family kind `{0}`")]
    UnknownKind(String),
    #[error("invalid family parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("W is constant on the sampled window")]
    ConstantW,
    #[error("W'' vanishes on the sampled window; the metric would be degenerate")]
    DegenerateW,
    #[error("W must depend only on the placeholder x")]
    WNotUnivariate,
    #[error("F must depend only on z2 and zb2")]
    FDependsOnFirstCoordinate,
    #[error("F is not real-valued (|Im F| = {imag:.3e} on the sample)")]
    ComplexValuedF { imag: f64 },
    #[error("∂₂F vanishes identically on the sample")]
    DegenerateF,
    #[error("separability quantity h vanishes at a sample point")]
    HVanishes,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Binding(#[from] BindingError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Kahler(#[from] KahlerError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

fn contains_any_var(expr: &PotentialExpr) -> bool {
    match expr {
        PotentialExpr::Var(_) => true,
        PotentialExpr::Number(_) | PotentialExpr::ImaginaryUnit | PotentialExpr::Param(_) => false,
        PotentialExpr::Neg(a)
        | PotentialExpr::Exp(a)
        | PotentialExpr::Ln(a)
        | PotentialExpr::Conj(a)
        | PotentialExpr::Pow(a, _) => contains_any_var(a),
        PotentialExpr::Add(a, b)
        | PotentialExpr::Sub(a, b)
        | PotentialExpr::Mul(a, b)
        | PotentialExpr::Div(a, b) => contains_any_var(a) || contains_any_var(b),
    }
}

fn references_first_coordinate(expr: &PotentialExpr) -> bool {
    match expr {
        PotentialExpr::Var(v) => matches!(v, Variable::Z1 | Variable::Zb1),
        PotentialExpr::Number(_) | PotentialExpr::ImaginaryUnit | PotentialExpr::Param(_) => false,
        PotentialExpr::Neg(a)
        | PotentialExpr::Exp(a)
        | PotentialExpr::Ln(a)
        | PotentialExpr::Conj(a)
        | PotentialExpr::Pow(a, _) => references_first_coordinate(a),
        PotentialExpr::Add(a, b)
        | PotentialExpr::Sub(a, b)
        | PotentialExpr::Mul(a, b)
        | PotentialExpr::Div(a, b) => {
            references_first_coordinate(a) || references_first_coordinate(b)
        }
    }
}

/// Jet of 𝒲 on the real slice, by substituting x → z1 and expanding at
/// (x0, 0, x0, 0); ∂₁-partials of the result are the 𝒲 derivatives.
fn univariate_w_jet<T: Real>(
    w: &PotentialExpr,
    params: &ParameterTable,
    x0: T,
    order: usize,
) -> Result<ComplexJet<T>, FamilyError> {
    let substituted = w.substitute_param("x", &PotentialExpr::Var(Variable::Z1));
    let p = ChartPoint::new(Complex::new(x0, T::zero()), Complex::new(T::zero(), T::zero()));
    Ok(evaluate(&substituted, params, &p, order)?)
}

const W_CHECK_WINDOW: [f64; 5] = [0.2, 0.5, 0.9, 1.3, 2.1];

fn check_w_invariants(w: &PotentialExpr, params: &ParameterTable) -> Result<(), FamilyError> {
    if contains_any_var(w) {
        return Err(FamilyError::WNotUnivariate);
    }
    let mut max_w1 = 0.0f64;
    let mut max_w2 = 0.0f64;
    for &x0 in &W_CHECK_WINDOW {
        let jet = univariate_w_jet::<f64>(w, params, x0, 2)?;
        max_w1 = max_w1.max(jet.extract_partial(&MultiIndex([1, 0, 0, 0]))?.norm());
        max_w2 = max_w2.max(jet.extract_partial(&MultiIndex([2, 0, 0, 0]))?.norm());
    }
    if max_w1 < 1e-12 {
        return Err(FamilyError::ConstantW);
    }
    if max_w2 < 1e-12 {
        return Err(FamilyError::DegenerateW);
    }
    Ok(())
}

fn check_f_invariants(f: &PotentialExpr, params: &ParameterTable) -> Result<(), FamilyError> {
    if references_first_coordinate(f) {
        return Err(FamilyError::FDependsOnFirstCoordinate);
    }
    let mut max_im = 0.0f64;
    let mut max_d2 = 0.0f64;
    for k in 0..12 {
        let angle = k as f64 * 0.53;
        let r = 0.15 + 0.06 * k as f64;
        let p = ChartPoint::<f64>::from_f64(0.0, 0.0, r * angle.cos(), r * angle.sin());
        let jet = evaluate(f, params, &p, 1)?;
        max_im = max_im.max(jet.value().im.abs());
        max_d2 = max_d2.max(jet.partial(1)?.norm());
    }
    if max_im > 1e-10 {
        return Err(FamilyError::ComplexValuedF { imag: max_im });
    }
    if max_d2 < 1e-12 {
        return Err(FamilyError::DegenerateF);
    }
    Ok(())
}

fn require_nonzero(params: &ParameterTable, name: &str, default: f64) -> Result<f64, FamilyError> {
    let v = params.get_or(name, default);
    if v == 0.0 {
        return Err(FamilyError::InvalidParameter {
            name: name.to_string(),
            reason: "must be nonzero".to_string(),
        });
    }
    Ok(v)
}

/// Assembles the potential of a family spec, returning the expression and
/// the fully-bound parameter table.
pub fn instantiate(spec: &FamilySpec) -> Result<(PotentialExpr, ParameterTable), FamilyError> {
    let mut params = spec.params.clone();
    match spec.kind {
        FamilyKind::Flat => {
            let phi = parse("z1*zb1 + z2*zb2").expect("builtin flat potential parses");
            Ok((phi, params))
        }
        FamilyKind::Equidistant => {
            let f_ast = match &spec.f_source {
                Some(src) => {
                    let f = parse(src)?;
                    check_f_invariants(&f, &params)?;
                    f
                }
                None => parse("z2*zb2").expect("builtin F parses"),
            };
            let x = PotentialExpr::add(
                PotentialExpr::add(
                    PotentialExpr::Var(Variable::Z1),
                    PotentialExpr::Var(Variable::Zb1),
                ),
                f_ast,
            );
            let phi = PotentialExpr::exp(x);
            params.check_bound(&phi)?;
            Ok((phi, params))
        }
        FamilyKind::GeneralizedEquidistant => {
            let w_src = spec.w_source.as_deref().ok_or_else(|| FamilyError::InvalidParameter {
                name: "W".into(),
                reason: "generalized-equidistant needs a W expression in x".into(),
            })?;
            let w = parse(w_src)?;
            let f_ast = match &spec.f_source {
                Some(src) => parse(src)?,
                None => parse("z2*zb2").expect("builtin F parses"),
            };
            check_w_invariants(&w, &params)?;
            check_f_invariants(&f_ast, &params)?;
            let x = PotentialExpr::add(
                PotentialExpr::add(
                    PotentialExpr::Var(Variable::Z1),
                    PotentialExpr::Var(Variable::Zb1),
                ),
                f_ast,
            );
            let phi = w.substitute_param("x", &x);
            params.check_bound(&phi)?;
            Ok((phi, params))
        }
        FamilyKind::RicciFlat => {
            require_nonzero(&params, "A", 1.0)?;
            require_nonzero(&params, "gamma", 1.0)?;
            params.set("A", params.get_or("A", 1.0));
            params.set("gamma", params.get_or("gamma", 1.0));
            let b = params.get_or("B", 0.0);
            let c = params.get_or("C", 0.0);
            let tau = params.get_or("tau", 0.0);
            let rho_shift = params.get_or("rho_shift", 0.0);
            let phi = if b == 0.0 && c == 0.0 && tau == 0.0 && rho_shift == 0.0 {
                parse("A*(z1 + zb1 + gamma*z2*zb2)^(3/2)").expect("builtin potential parses")
            } else {
                params.set("B", b);
                params.set("C", c);
                params.set("tau", tau);
                params.set("rho_shift", rho_shift);
                parse("A*(z1 + zb1 + gamma*z2*zb2 + tau*(z2 + zb2) + rho_shift + B)^(3/2) + C")
                    .expect("builtin potential parses")
            };
            Ok((phi, params))
        }
        FamilyKind::ConstantHsc => {
            let eps = params.get_or("eps", 1.0);
            if eps != 1.0 && eps != -1.0 {
                return Err(FamilyError::InvalidParameter {
                    name: "eps".into(),
                    reason: format!("must be +1 or -1, got {eps}"),
                });
            }
            params.set("eps", eps);
            let phi = parse("ln(1 + exp(z1 + zb1 + ln(1 + eps*z2*zb2)))")
                .expect("builtin potential parses");
            Ok((phi, params))
        }
    }
}

/// Resolves a loaded potential file into an expression: an explicit
/// `phi =` wins; otherwise the `family =` line is expanded.
pub fn resolve_potential_file(
    file: &PotentialFile,
) -> Result<(PotentialExpr, ParameterTable, Option<FamilyKind>), FamilyError> {
    let kind = match &file.family {
        Some(name) => {
            Some(FamilyKind::parse(name).ok_or_else(|| FamilyError::UnknownKind(name.clone()))?)
        }
        None => None,
    };
    if let Some(phi) = &file.phi {
        return Ok((phi.clone(), file.params.clone(), kind));
    }
    let kind = kind.expect("file parser guarantees phi or family");
    let spec = FamilySpec {
        kind,
        params: file.params.clone(),
        w_source: file.w_source.clone(),
        f_source: file.f_source.clone(),
    };
    let (phi, params) = instantiate(&spec)?;
    Ok((phi, params, Some(kind)))
}

/// Domain constraint for a family at a point; `Some(reason)` means the
/// point must be skipped.
pub fn admissibility<T: Real>(
    kind: FamilyKind,
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> Option<String> {
    match kind {
        FamilyKind::RicciFlat => {
            let gamma = params.get_or("gamma", 1.0);
            let tau = params.get_or("tau", 0.0);
            let b = params.get_or("B", 0.0);
            let rho_shift = params.get_or("rho_shift", 0.0);
            let z2 = p.z2;
            let x = as_f64(p.z1.re) * 2.0
                + gamma * as_f64(z2.norm_sqr())
                + 2.0 * tau * as_f64(z2.re)
                + rho_shift
                + b;
            if x <= 1e-6 {
                Some(format!("x = {x:.4} outside the branch domain (need x > 0)"))
            } else {
                None
            }
        }
        FamilyKind::ConstantHsc => {
            let eps = params.get_or("eps", 1.0);
            if eps < 0.0 {
                let n = as_f64(p.z2.norm_sqr());
                if 1.0 - n <= 1e-6 {
                    return Some(format!(
                        "1 - |z2|^2 = {:.4} outside the log domain",
                        1.0 - n
                    ));
                }
            }
            None
        }
        _ => None,
    }
}

/// Coordinate correspondence of the full Ricci-flat family to its normal
/// form: translations eliminating τ, ρ-shift, B and C. The metric at `p`
/// in full coordinates equals the normal-form metric at the returned point.
pub fn ricci_flat_normal_point<T: Real>(
    params: &ParameterTable,
    p: &ChartPoint<T>,
) -> ChartPoint<T> {
    let gamma = params.get_or("gamma", 1.0);
    let tau = params.get_or("tau", 0.0);
    let b = params.get_or("B", 0.0);
    let rho_shift = params.get_or("rho_shift", 0.0);
    let dz1 = (rho_shift + b - tau * tau / gamma) * 0.5;
    let dz2 = tau / gamma;
    ChartPoint::new(
        p.z1 + complex(dz1, 0.0),
        p.z2 + complex(dz2, 0.0),
    )
}

/// Report of the Ricci-flat verification over a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciFlatReport<T: Real> {
    /// Max |R_{αβ̄}| over the sample, relative to max(1, max |g|).
    pub max_ricci: T,
    /// Max relative deviation of det g from the constant 9A²γ/8.
    pub max_det_deviation: T,
    /// Informational: max deviation of computed g entries from the
    /// closed-form display (whose z²z̄² bracket term drops a γ factor).
    pub displayed_metric_deviation: T,
    pub points_checked: usize,
}

/// Verifies the Ricci-flat family at the given sample: curvature vanishes
/// and det g equals 9A²γ/8. The computed ∂_α∂_β̄Φ is authoritative; the
/// displayed closed-form coefficients are compared informationally only.
pub fn verify_ricci_flat<T: Real>(
    a: f64,
    gamma: f64,
    sample: &[ChartPoint<T>],
) -> Result<RicciFlatReport<T>, FamilyError> {
    let spec = FamilySpec::new(FamilyKind::RicciFlat)
        .with_param("A", a)
        .with_param("gamma", gamma);
    let (phi, params) = instantiate(&spec)?;
    let det_target = complex::<T>(9.0 * a * a * gamma / 8.0, 0.0);
    let mut max_ricci = T::zero();
    let mut max_det = T::zero();
    let mut max_displayed = T::zero();
    for p in sample {
        if let Some(reason) = admissibility(FamilyKind::RicciFlat, &params, p) {
            return Err(FamilyError::InvalidParameter {
                name: "sample".into(),
                reason,
            });
        }
        let metric = metric_at(&phi, &params, p)?;
        let curv = curvature_at(&phi, &params, p)?;
        let scale = T::one().max(metric.max_entry());
        max_ricci = max_ricci.max(curv.max_ricci_entry() / scale);
        max_det = max_det.max((metric.det - det_target).norm() / det_target.norm());

        let x = p.z1.re + p.z1.re + real::<T>(gamma) * p.z2.norm_sqr();
        let lead = real::<T>(0.75 * a) / x.sqrt();
        let gam = real::<T>(gamma);
        let g11 = Complex::new(lead, T::zero());
        let g12 = p.z2 * lead * gam;
        let g21 = p.z2.conj() * lead * gam;
        let bracket = (p.z1.re + p.z1.re) * real::<T>(2.0) + real::<T>(3.0) * p.z2.norm_sqr();
        let g22 = Complex::new(lead * gam * bracket, T::zero());
        max_displayed = max_displayed
            .max((metric.g[0][0] - g11).norm())
            .max((metric.g[0][1] - g12).norm())
            .max((metric.g[1][0] - g21).norm())
            .max((metric.g[1][1] - g22).norm());
    }
    Ok(RicciFlatReport {
        max_ricci,
        max_det_deviation: max_det,
        displayed_metric_deviation: max_displayed,
        points_checked: sample.len(),
    })
}

/// 𝒲′𝒲″ sampled through the jet engine for an arbitrary 𝒲(x).
pub fn w_product_values<T: Real>(
    w_source: &str,
    params: &ParameterTable,
    xs: &[T],
) -> Result<Vec<T>, FamilyError> {
    let w = parse(w_source)?;
    let mut out = Vec::with_capacity(xs.len());
    for &x0 in xs {
        let jet = univariate_w_jet(&w, params, x0, 2)?;
        let w1 = jet.extract_partial(&MultiIndex([1, 0, 0, 0]))?;
        let w2 = jet.extract_partial(&MultiIndex([2, 0, 0, 0]))?;
        out.push((w1 * w2).re);
    }
    Ok(out)
}

/// Max |𝒲′𝒲″ − 9A²/8| for 𝒲 = A(x+B)^(3/2) over the sampled x values
/// (which must satisfy x + B > 0).
pub fn verify_w_equation<T: Real>(a: f64, b: f64, xs: &[T]) -> Result<T, FamilyError> {
    if a == 0.0 {
        return Err(FamilyError::InvalidParameter {
            name: "A".into(),
            reason: "must be nonzero".into(),
        });
    }
    let params = ParameterTable::new().with("A", a).with("B", b);
    let values = w_product_values("A*(x + B)^(3/2)", &params, xs)?;
    let target = real::<T>(9.0 * a * a / 8.0);
    let mut max = T::zero();
    for v in values {
        max = max.max((v - target).abs());
    }
    Ok(max)
}

/// Mean and relative spread of the holomorphic sectional curvature over
/// seeded random (point, direction) samples of the constant-HSC potential.
pub fn verify_constant_hsc<T: Real>(
    eps: f64,
    n_samples: usize,
    seed: u64,
) -> Result<(T, T), FamilyError> {
    let spec = FamilySpec::new(FamilyKind::ConstantHsc).with_param("eps", eps);
    let (phi, params) = instantiate(&spec)?;
    hsc_spread(&phi, &params, Some(eps), n_samples, seed)
}

/// Shared sampling loop: returns (mean H, relative spread). `eps` bounds
/// the z² sampling disc when negative.
pub fn hsc_spread<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    eps: Option<f64>,
    n_samples: usize,
    seed: u64,
) -> Result<(T, T), FamilyError> {
    assert!(n_samples > 1, "spread needs at least two samples");
    let mut rng = StdRng::seed_from_u64(seed);
    let z2_radius = match eps {
        Some(e) if e < 0.0 => 0.9,
        _ => 1.0,
    };
    let mut values: Vec<T> = Vec::with_capacity(n_samples);
    let mut attempts = 0usize;
    while values.len() < n_samples {
        attempts += 1;
        if attempts > n_samples * 50 {
            return Err(FamilyError::InvalidParameter {
                name: "sampling".into(),
                reason: "could not draw enough admissible (point, direction) pairs".into(),
            });
        }
        let p = ChartPoint::<T>::from_f64(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-z2_radius..z2_radius) * 0.7,
            rng.gen_range(-z2_radius..z2_radius) * 0.7,
        );
        if eps.is_some_and(|e| e < 0.0) && as_f64(p.z2.norm_sqr()) >= 0.8 {
            continue;
        }
        let v = [
            complex::<T>(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            complex::<T>(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ];
        if as_f64(v[0].norm_sqr() + v[1].norm_sqr()) < 0.05 {
            continue;
        }
        match hsc_at(phi, params, &p, &v) {
            Ok(h) => values.push(h),
            // null directions and log-domain violations are resampled
            Err(KahlerError::NullDirection { .. }) => continue,
            Err(KahlerError::Eval(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let n = real::<T>(values.len() as f64);
    let mut mean = T::zero();
    let mut lo = values[0];
    let mut hi = values[0];
    for &v in &values {
        mean = mean + v;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    mean = mean / n;
    let spread = (hi - lo) / T::one().max(mean.abs());
    Ok((mean, spread))
}

/// Separability defect of a jet-valued quantity h over a sample:
/// max |∂_α∂_β̄ ln h|, which vanishes exactly when h factors as
/// f(z)·conj(f(z)). A constant negative sign on h is absorbed (it cannot
/// survive ∂∂̄).
pub fn separability_defect_with<T: Real, F>(
    mut h_at: F,
    sample: &[ChartPoint<T>],
) -> Result<T, FamilyError>
where
    F: FnMut(&ChartPoint<T>) -> Result<ComplexJet<T>, FamilyError>,
{
    let mut max = T::zero();
    for p in sample {
        let h = h_at(p)?;
        let v = h.value();
        if v.norm() < real::<T>(1e-13) {
            return Err(FamilyError::HVanishes);
        }
        let h = if v.im.abs() <= real::<T>(1e-10) * v.norm() && v.re < T::zero() {
            -&h
        } else {
            h
        };
        let ln_h = h.ln()?;
        for alpha in 0..2 {
            for beta in 0..2 {
                let mut k = [0u8; 4];
                k[alpha] += 1;
                k[2 + beta] += 1;
                max = max.max(ln_h.extract_partial(&MultiIndex(k))?.norm());
            }
        }
    }
    Ok(max)
}

/// Einstein criterion for generalized-equidistant potentials: the quantity
/// h = exp(aΦ)·∂₁((∂₁Φ)²)·∂₂∂₂̄F must factor as f(z)·conj f(z), i.e. have
/// vanishing ∂_α∂_β̄ ln h. F is recovered from Φ alone through
/// ∂₂∂₂̄F = (Φ₂₂̄Φ₁ − Φ₂Φ₁₂̄)/Φ₁². Φ-jets of order 5 make the two extra
/// derivative orders on ln h exact.
pub fn einstein_separability_defect<T: Real>(
    phi: &PotentialExpr,
    params: &ParameterTable,
    a_const: f64,
    sample: &[ChartPoint<T>],
) -> Result<T, FamilyError> {
    separability_defect_with(
        |p| {
            let jet5 = phi_jet(phi, params, p, 5)?;
            let phi1 = jet5.derivative(0)?; // order 4
            let phi2 = jet5.derivative(1)?;
            let sq = &phi1 * &phi1;
            let d1sq = sq.derivative(0)?; // ∂₁(∂₁Φ)², order 3
            let phi1_3 = phi1.truncate(3);
            let phi2_3 = phi2.truncate(3);
            let phi12b = phi1.derivative(3)?; // Φ₁₂̄, order 3
            let phi22b = phi2.derivative(3)?; // Φ₂₂̄, order 3
            let num = &(&phi22b * &phi1_3) - &(&phi2_3 * &phi12b);
            let den = &phi1_3 * &phi1_3;
            let f22 = num.div(&den)?;
            let exp_a_phi = jet5.truncate(3).scale(complex(a_const, 0.0)).exp();
            Ok(&(&exp_a_phi * &d1sq) * &f22)
        },
        sample,
    )
}

/// Seeded sample of chart points inside the default box, rejecting points
/// outside the family domain when a kind is given.
pub fn sample_points(
    seed: u64,
    n: usize,
    kind: Option<FamilyKind>,
    params: &ParameterTable,
) -> Vec<ChartPoint<f64>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n && attempts < n * 200 {
        attempts += 1;
        let p = ChartPoint::<f64>::from_f64(
            rng.gen_range(0.1..1.0),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.7..0.7),
            rng.gen_range(-0.7..0.7),
        );
        if let Some(k) = kind {
            if admissibility(k, params, &p).is_some() {
                continue;
            }
        }
        out.push(p);
    }
    out
}
