//! Finite-difference validation of jet partials.
//!
//! Estimates ∂^m f by nested central differences on the value-only
//! evaluator ([`crate::dsl::evaluate_raw`]), with one Richardson level
//! (error O(h⁴)). The barred formals are displaced independently of the
//! unbarred ones, which is exactly the Wirtinger reading of the partials.
//! This path shares no code with the jet recurrences, so agreement is a
//! genuine cross-check of the differentiation core.

use num_complex::Complex;

use crate::dsl::{evaluate_raw, EvalError, ParameterTable, PotentialExpr};
use crate::jets::{MultiIndex, NUM_VARS};
use crate::scalar::{real, Real};

/// Base step for first-order partials.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Step for a partial of total order k, balancing truncation against
/// round-off in double precision. Each central-difference level divides
/// the round-off noise by another factor of h while one Richardson level
/// keeps the truncation at O(h⁴), so the balance point ε^(1/(k+4)) grows
/// with the order: 1e-3 for first derivatives up to ~1e-2 for fourth.
pub fn step_for_order(k: usize) -> f64 {
    match k {
        0 | 1 => DEFAULT_STEP,
        2 => 2e-3,
        3 => 5e-3,
        _ => 4e-2,
    }
}

/// Central-difference estimate of ∂^m f at `vars` with step `h`.
fn nested_central<T: Real>(
    expr: &PotentialExpr,
    params: &ParameterTable,
    vars: &[Complex<T>; NUM_VARS],
    m: &MultiIndex,
    h: T,
) -> Result<Complex<T>, EvalError> {
    // find the first variable still carrying derivative slots
    let Some(var) = (0..NUM_VARS).find(|&v| m.0[v] > 0) else {
        return evaluate_raw(expr, params, vars);
    };
    let mut lower = *m;
    lower.0[var] -= 1;
    let mut plus = *vars;
    plus[var] = plus[var] + Complex::new(h, T::zero());
    let mut minus = *vars;
    minus[var] = minus[var] - Complex::new(h, T::zero());
    let fp = nested_central(expr, params, &plus, &lower, h)?;
    let fm = nested_central(expr, params, &minus, &lower, h)?;
    Ok((fp - fm) / Complex::new(h + h, T::zero()))
}

/// Richardson-extrapolated finite-difference partial ∂^m f at a point whose
/// barred slots carry the numeric conjugates of the unbarred ones.
///
/// Fourth-order indices get a second extrapolation level: the O(h⁴)
/// truncation remainder after one level would sit right at the 1e-6
/// validation bound for power-law expressions.
pub fn fd_partial<T: Real>(
    expr: &PotentialExpr,
    params: &ParameterTable,
    vars: &[Complex<T>; NUM_VARS],
    m: &MultiIndex,
    h: T,
) -> Result<Complex<T>, EvalError> {
    let two = real::<T>(2.0);
    let four = Complex::new(real::<T>(4.0), T::zero());
    let three = Complex::new(real::<T>(3.0), T::zero());
    let d1 = nested_central(expr, params, vars, m, h)?;
    let d2 = nested_central(expr, params, vars, m, h / two)?;
    let r1 = (d2 * four - d1) / three;
    if m.degree() < 4 {
        return Ok(r1);
    }
    let d3 = nested_central(expr, params, vars, m, h / (two * two))?;
    let r2 = (d3 * four - d2) / three;
    let sixteen = Complex::new(real::<T>(16.0), T::zero());
    let fifteen = Complex::new(real::<T>(15.0), T::zero());
    Ok((r2 * sixteen - r1) / fifteen)
}

/// Relative disagreement between a computed partial and the
/// finite-difference estimate: |a − b| / max(1, |a|, |b|).
pub fn relative_error<T: Real>(computed: Complex<T>, estimated: Complex<T>) -> T {
    let scale = T::one().max(computed.norm()).max(estimated.norm());
    (computed - estimated).norm() / scale
}

/// Seeded corpus of expression sources covering every language primitive
/// (products, quotients, exp, ln, rational and negative powers, conj),
/// each smooth on the box |Re z|, |Im z| ≤ 0.6. Coefficients are drawn
/// per expression, so two seeds give two different corpora.
pub fn validation_corpus(seed: u64, n: usize) -> Vec<String> {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let c0 = 1.5 + rng.gen_range(0.0..1.0);
        let c1 = rng.gen_range(0.3..1.5);
        let c2 = rng.gen_range(0.3..1.5);
        let c3 = rng.gen_range(0.3..1.5);
        let src = match k % 8 {
            0 => format!(
                "{c1}*z1*zb1 + {c2}*z2*zb2 + {c3}*z1^2*zb1^2 + {c1}*(z1*zb2 + z2*zb1)"
            ),
            1 => format!("exp({c1}*(z1 + zb1) + {c2}*z2*zb2)"),
            2 => format!("ln({c0} + z1*zb1 + {c2}*z2*zb2)"),
            3 => format!("({c0} + z1*zb1 + z2*zb2)^(3/2)"),
            4 => format!("({c1} + z1*zb1)/({c0} + z2*zb2)"),
            5 => format!("{c2}*ln({c0} + z1*zb1) + exp({c1}*z2*zb2)"),
            6 => format!("z1*z2 + conj(z1*z2) + {c1}*z1*zb1 + {c2}"),
            _ => format!("({c0} + z1*zb1 + {c2}*z2*zb2)^(-2)"),
        };
        out.push(src);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::dsl::evaluate;
    use crate::kahler::ChartPoint;

    #[test]
    fn fd_matches_jet_for_nested_exponential() {
        let phi = parse("exp(z1 + zb1 + z2*zb2)").unwrap();
        let params = ParameterTable::new();
        let p = ChartPoint::from_f64(0.3, -0.1, 0.2, 0.4);
        let jet = evaluate(&phi, &params, &p, 4).unwrap();
        let seeds = p.seeds();
        for m in [
            MultiIndex([1, 0, 0, 0]),
            MultiIndex([1, 0, 1, 0]),
            MultiIndex([0, 1, 1, 1]),
            MultiIndex([2, 0, 2, 0]),
        ] {
            let exact = jet.extract_partial(&m).unwrap();
            let h = step_for_order(m.degree());
            let fd = fd_partial(&phi, &params, &seeds, &m, h).unwrap();
            assert!(
                relative_error(exact, fd) < 1e-7,
                "multi-index {m:?}: jet {exact}, fd {fd}"
            );
        }
    }
}
