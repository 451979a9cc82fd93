//! Evaluation of potential expressions into jets (or plain values).
//!
//! The barred variables are seeded with the numeric conjugates of the chart
//! coordinates but differentiated as independent formals, so ∂_α and ∂_ᾱ of
//! the result are ordinary jet partials.

use num_complex::Complex;
use thiserror::Error;

use super::ast::{ParameterTable, PotentialExpr};
use crate::jets::{ComplexJet, JetError, NUM_VARS};
use crate::kahler::ChartPoint;
use crate::scalar::{complex, real, Real};

/// Evaluation failure, annotated with the path of the offending
/// subexpression from the root (e.g. `mul.lhs.ln.arg`).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at `{path}`")]
pub struct EvalError {
    pub path: String,
    pub kind: EvalErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("{0}")]
    Domain(JetError),
}

impl EvalError {
    fn new(kind: EvalErrorKind) -> Self {
        EvalError {
            path: String::new(),
            kind,
        }
    }

    fn nest(mut self, segment: &str) -> Self {
        if self.path.is_empty() {
            self.path = segment.to_string();
        } else {
            self.path = format!("{segment}.{}", self.path);
        }
        self
    }
}

fn domain(err: JetError) -> EvalError {
    EvalError::new(EvalErrorKind::Domain(err))
}

/// Evaluates `expr` as a jet of the given order at a chart point.
pub fn evaluate<T: Real>(
    expr: &PotentialExpr,
    params: &ParameterTable,
    point: &ChartPoint<T>,
    order: usize,
) -> Result<ComplexJet<T>, EvalError> {
    let seeds = point.seeds();
    eval_jet(expr, params, &seeds, order)
}

/// Jet evaluation at explicit seeds for all four formals; the entry point
/// for off-diagonal (non-conjugate-paired) expansions.
pub fn eval_jet<T: Real>(
    expr: &PotentialExpr,
    params: &ParameterTable,
    seeds: &[Complex<T>; NUM_VARS],
    order: usize,
) -> Result<ComplexJet<T>, EvalError> {
    match expr {
        PotentialExpr::Number(x) => Ok(ComplexJet::constant(complex(*x, 0.0), order)),
        PotentialExpr::ImaginaryUnit => Ok(ComplexJet::constant(complex(0.0, 1.0), order)),
        PotentialExpr::Var(v) => {
            let idx = v.index();
            ComplexJet::variable(seeds[idx], idx, order).map_err(domain)
        }
        PotentialExpr::Param(name) => match params.get(name) {
            Some(v) => Ok(ComplexJet::constant(complex(v, 0.0), order)),
            None => Err(EvalError::new(EvalErrorKind::UnboundParameter(name.clone()))),
        },
        PotentialExpr::Neg(a) => Ok(-&eval_jet(a, params, seeds, order).map_err(|e| e.nest("neg"))?),
        PotentialExpr::Add(a, b) => {
            let lhs = eval_jet(a, params, seeds, order).map_err(|e| e.nest("add.lhs"))?;
            let rhs = eval_jet(b, params, seeds, order).map_err(|e| e.nest("add.rhs"))?;
            Ok(&lhs + &rhs)
        }
        PotentialExpr::Sub(a, b) => {
            let lhs = eval_jet(a, params, seeds, order).map_err(|e| e.nest("sub.lhs"))?;
            let rhs = eval_jet(b, params, seeds, order).map_err(|e| e.nest("sub.rhs"))?;
            Ok(&lhs - &rhs)
        }
        PotentialExpr::Mul(a, b) => {
            let lhs = eval_jet(a, params, seeds, order).map_err(|e| e.nest("mul.lhs"))?;
            let rhs = eval_jet(b, params, seeds, order).map_err(|e| e.nest("mul.rhs"))?;
            Ok(&lhs * &rhs)
        }
        PotentialExpr::Div(a, b) => {
            let lhs = eval_jet(a, params, seeds, order).map_err(|e| e.nest("div.lhs"))?;
            let rhs = eval_jet(b, params, seeds, order).map_err(|e| e.nest("div.rhs"))?;
            lhs.div(&rhs).map_err(|e| domain(e).nest("div"))
        }
        PotentialExpr::Pow(a, r) => {
            let base = eval_jet(a, params, seeds, order).map_err(|e| e.nest("pow.base"))?;
            base.pow_rational(r.num, r.den)
                .map_err(|e| domain(e).nest("pow"))
        }
        PotentialExpr::Exp(a) => Ok(eval_jet(a, params, seeds, order)
            .map_err(|e| e.nest("exp.arg"))?
            .exp()),
        PotentialExpr::Ln(a) => eval_jet(a, params, seeds, order)
            .map_err(|e| e.nest("ln.arg"))?
            .ln()
            .map_err(|e| domain(e).nest("ln")),
        PotentialExpr::Conj(a) => Ok(eval_jet(a, params, seeds, order)
            .map_err(|e| e.nest("conj.arg"))?
            .formal_conj()),
    }
}

/// Value-only evaluation at an arbitrary 4-tuple of the formals, with the
/// barred slots independent of the unbarred ones. This is a separate code
/// path from the jet arithmetic (plain complex operations), which is what
/// makes it usable as an independent cross-check of the jets.
pub fn evaluate_raw<T: Real>(
    expr: &PotentialExpr,
    params: &ParameterTable,
    vars: &[Complex<T>; NUM_VARS],
) -> Result<Complex<T>, EvalError> {
    match expr {
        PotentialExpr::Number(x) => Ok(complex(*x, 0.0)),
        PotentialExpr::ImaginaryUnit => Ok(complex(0.0, 1.0)),
        PotentialExpr::Var(v) => Ok(vars[v.index()]),
        PotentialExpr::Param(name) => match params.get(name) {
            Some(v) => Ok(complex(v, 0.0)),
            None => Err(EvalError::new(EvalErrorKind::UnboundParameter(name.clone()))),
        },
        PotentialExpr::Neg(a) => Ok(-evaluate_raw(a, params, vars)?),
        PotentialExpr::Add(a, b) => Ok(evaluate_raw(a, params, vars)? + evaluate_raw(b, params, vars)?),
        PotentialExpr::Sub(a, b) => Ok(evaluate_raw(a, params, vars)? - evaluate_raw(b, params, vars)?),
        PotentialExpr::Mul(a, b) => Ok(evaluate_raw(a, params, vars)? * evaluate_raw(b, params, vars)?),
        PotentialExpr::Div(a, b) => {
            let den = evaluate_raw(b, params, vars)?;
            if den.re.is_zero() && den.im.is_zero() {
                return Err(domain(JetError::DivisionByZero).nest("div"));
            }
            Ok(evaluate_raw(a, params, vars)? / den)
        }
        PotentialExpr::Pow(a, r) => {
            let base = evaluate_raw(a, params, vars)?;
            if r.is_integer() {
                return Ok(powi_value(base, r.num / r.den));
            }
            if base.re.is_zero() && base.im.is_zero() {
                return Err(domain(JetError::PowOfZero).nest("pow"));
            }
            if base.im.is_zero() && base.re < T::zero() {
                return Err(domain(JetError::PowBranchCut).nest("pow"));
            }
            let exponent = real::<T>(r.num as f64) / real::<T>(r.den as f64);
            Ok((base.ln() * exponent).exp())
        }
        PotentialExpr::Exp(a) => Ok(evaluate_raw(a, params, vars)?.exp()),
        PotentialExpr::Ln(a) => {
            let v = evaluate_raw(a, params, vars)?;
            if v.re.is_zero() && v.im.is_zero() {
                return Err(domain(JetError::LogOfZero).nest("ln"));
            }
            if v.im.is_zero() && v.re < T::zero() {
                return Err(domain(JetError::LogBranchCut).nest("ln"));
            }
            Ok(v.ln())
        }
        PotentialExpr::Conj(a) => {
            // formal conjugation: conj(f)(z, z̄) = conj(f(conj z̄, conj z))
            let swapped = [
                vars[2].conj(),
                vars[3].conj(),
                vars[0].conj(),
                vars[1].conj(),
            ];
            Ok(evaluate_raw(a, params, &swapped)?.conj())
        }
    }
}

fn powi_value<T: Real>(base: Complex<T>, exponent: i64) -> Complex<T> {
    let mut acc = Complex::new(T::one(), T::zero());
    let mut sq = if exponent < 0 {
        Complex::new(T::one(), T::zero()) / base
    } else {
        base
    };
    let mut n = exponent.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * sq;
        }
        sq = sq * sq;
        n >>= 1;
    }
    acc
}

/// Value of the expression at a chart point (barred slots conjugate-paired).
pub fn evaluate_value<T: Real>(
    expr: &PotentialExpr,
    params: &ParameterTable,
    point: &ChartPoint<T>,
) -> Result<Complex<T>, EvalError> {
    evaluate_raw(expr, params, &point.seeds())
}

/// Max |Im Φ| over the sample; the caller compares against its tolerance.
pub fn check_reality<T: Real>(
    expr: &PotentialExpr,
    params: &ParameterTable,
    sample: &[ChartPoint<T>],
) -> Result<T, EvalError> {
    assert!(!sample.is_empty(), "reality check needs a nonempty sample");
    let mut max = T::zero();
    for p in sample {
        let v = evaluate_value(expr, params, p)?;
        max = max.max(v.im.abs());
    }
    Ok(max)
}

/// Convenience diagnostic: |Im Φ(p)| relative to max(1, |Φ(p)|).
pub fn reality_residual<T: Real>(
    expr: &PotentialExpr,
    params: &ParameterTable,
    point: &ChartPoint<T>,
) -> Result<T, EvalError> {
    let v = evaluate_value(expr, params, point)?;
    Ok(v.im.abs() / T::one().max(v.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parser::parse;
    use num_complex::Complex64;

    fn pt(re1: f64, im1: f64, re2: f64, im2: f64) -> ChartPoint<f64> {
        ChartPoint::new(Complex64::new(re1, im1), Complex64::new(re2, im2))
    }

    #[test]
    fn flat_potential_value() {
        let phi = parse("z1*zb1 + z2*zb2").unwrap();
        let params = ParameterTable::new();
        let v = evaluate_value(&phi, &params, &pt(1.0, 1.0, 2.0, 0.0)).unwrap();
        assert!((v - Complex64::new(6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn equidistant_value_and_first_partial_at_origin() {
        let phi = parse("exp(z1 + zb1 + z2*zb2)").unwrap();
        let params = ParameterTable::new();
        let jet = evaluate(&phi, &params, &pt(0.0, 0.0, 0.0, 0.0), 4).unwrap();
        assert!((jet.value() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((jet.partial(0).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ricci_flat_value_at_half_half() {
        let phi = parse("A*(z1 + zb1 + gamma*z2*zb2)^(3/2)").unwrap();
        let params = ParameterTable::new().with("A", 1.0).with("gamma", 1.0);
        let v = evaluate_value(&phi, &params, &pt(0.5, 0.0, 0.5, 0.0)).unwrap();
        assert!((v.re - 1.25f64.powf(1.5)).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn unbound_parameter_reported_with_name() {
        let phi = parse("z3 + 1").unwrap();
        let params = ParameterTable::new();
        let err = evaluate(&phi, &params, &pt(0.0, 0.0, 0.0, 0.0), 2).unwrap_err();
        assert!(matches!(err.kind, EvalErrorKind::UnboundParameter(ref n) if n == "z3"));
    }

    #[test]
    fn domain_error_carries_ast_path() {
        let phi = parse("z1 * ln(z2)").unwrap();
        let params = ParameterTable::new();
        let err = evaluate(&phi, &params, &pt(1.0, 0.0, 0.0, 0.0), 2).unwrap_err();
        assert_eq!(err.path, "mul.rhs.ln");
        assert!(matches!(err.kind, EvalErrorKind::Domain(JetError::LogOfZero)));
    }

    #[test]
    fn reality_of_flat_and_asymmetric_potentials() {
        let params = ParameterTable::new();
        let sample: Vec<_> = (0..20)
            .map(|k| {
                let t = k as f64 / 7.0;
                pt(0.3 + t, 0.2 - t, -0.4 + 0.5 * t, 0.1 * t)
            })
            .collect();
        let flat = parse("z1*zb1 + z2*zb2").unwrap();
        assert!(check_reality(&flat, &params, &sample).unwrap() < 1e-14);
        let asym = parse("z1*z2").unwrap();
        assert!(check_reality(&asym, &params, &sample).unwrap() > 1e-3);
    }

    #[test]
    fn conjugate_symmetric_exp_is_real() {
        let phi = parse("exp(z1 + zb1 + z2*zb2)").unwrap();
        let params = ParameterTable::new();
        let sample: Vec<_> = (0..100)
            .map(|k| {
                let t = k as f64 / 37.0;
                pt(0.5 * (t - 1.0), 0.3 * t, 0.2 * t - 0.5, 0.4 - 0.2 * t)
            })
            .collect();
        assert!(check_reality(&phi, &params, &sample).unwrap() < 1e-13);
    }

    #[test]
    fn conj_node_evaluates_formally() {
        // conj(z1 + i) = zb1 − i as a function
        let e = parse("conj(z1 + i)").unwrap();
        let params = ParameterTable::new();
        let p = pt(0.7, 0.3, 0.0, 0.0);
        let v = evaluate_value(&e, &params, &p).unwrap();
        let expected = p.z1.conj() - Complex64::new(0.0, 1.0);
        assert!((v - expected).norm() < 1e-15);
        // and the jet sees it as a zb1-dependence
        let jet = evaluate(&e, &params, &p, 2).unwrap();
        assert!((jet.partial(2).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(jet.partial(0).unwrap().norm() < 1e-15);
    }
}
