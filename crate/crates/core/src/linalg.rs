//! 2×2 complex matrix helpers, for values and for jet-valued entries.
//!
//! Index convention used throughout the tensor code: a matrix `m` standing
//! for a Hermitian-type tensor t_{αβ̄} has `m[alpha][beta]` with `alpha`
//! the unbarred and `beta` the barred index. The matching inverse with
//! entries t^{αβ̄} satisfies Σ_β t^{αβ̄} t_{γβ̄} = δ^α_γ, which as a matrix
//! equation is `inv = transpose(m⁻¹)`.

use num_complex::Complex;

use crate::jets::{ComplexJet, JetError};
use crate::scalar::Real;

pub type Mat2<T> = [[Complex<T>; 2]; 2];
pub type JetMat2<T> = [[ComplexJet<T>; 2]; 2];

pub fn zero_mat<T: Real>() -> Mat2<T> {
    let z = Complex::new(T::zero(), T::zero());
    [[z, z], [z, z]]
}

pub fn identity<T: Real>() -> Mat2<T> {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    [[o, z], [z, o]]
}

pub fn det2<T: Real>(m: &Mat2<T>) -> Complex<T> {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Transposed inverse: the matrix `inv` with `Σ_β inv[α][β]·m[γ][β] = δ_{αγ}`.
pub fn inverse_transposed<T: Real>(m: &Mat2<T>) -> Option<Mat2<T>> {
    let det = det2(m);
    if det.norm() == T::zero() {
        return None;
    }
    Some([
        [m[1][1] / det, -m[1][0] / det],
        [-m[0][1] / det, m[0][0] / det],
    ])
}

/// Plain matrix product `(a·b)[i][j] = Σ_k a[i][k] b[k][j]`.
pub fn mat_mul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let mut out = zero_mat();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] = out[i][j] + a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn max_abs<T: Real>(m: &Mat2<T>) -> T {
    let mut max = T::zero();
    for row in m {
        for e in row {
            max = max.max(e.norm());
        }
    }
    max
}

pub fn max_abs_diff<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> T {
    let mut max = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            max = max.max((a[i][j] - b[i][j]).norm());
        }
    }
    max
}

/// Deviation from Hermitian symmetry `m[α][β] = conj(m[β][α])`.
pub fn hermiticity_residual<T: Real>(m: &Mat2<T>) -> T {
    let mut max = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            max = max.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    max
}

/// Values of a jet-valued matrix at the expansion point.
pub fn jet_mat_values<T: Real>(m: &JetMat2<T>) -> Mat2<T> {
    [
        [m[0][0].value(), m[0][1].value()],
        [m[1][0].value(), m[1][1].value()],
    ]
}

pub fn jet_det2<T: Real>(m: &JetMat2<T>) -> ComplexJet<T> {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

/// Jet analogue of [`inverse_transposed`]; fails when the determinant value
/// vanishes at the expansion point.
pub fn jet_inverse_transposed<T: Real>(m: &JetMat2<T>) -> Result<JetMat2<T>, JetError> {
    let det = jet_det2(m);
    let inv_det = det.recip()?;
    Ok([
        [&m[1][1] * &inv_det, -&(&m[1][0] * &inv_det)],
        [-&(&m[0][1] * &inv_det), &m[0][0] * &inv_det],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn transposed_inverse_contracts_on_the_barred_index() {
        let m: Mat2<f64> = [[c(2.0, 0.0), c(0.5, 0.3)], [c(0.5, -0.3), c(1.0, 0.0)]];
        let inv = inverse_transposed(&m).unwrap();
        // Σ_β inv[α][β]·m[γ][β] = δ
        for alpha in 0..2 {
            for gamma in 0..2 {
                let mut s = c(0.0, 0.0);
                for beta in 0..2 {
                    s += inv[alpha][beta] * m[gamma][beta];
                }
                let expected = if alpha == gamma { 1.0 } else { 0.0 };
                assert!((s - c(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hermiticity_residual_flags_asymmetry() {
        let h: Mat2<f64> = [[c(1.0, 0.0), c(0.2, 0.1)], [c(0.2, -0.1), c(3.0, 0.0)]];
        assert!(hermiticity_residual(&h) < 1e-15);
        let bad: Mat2<f64> = [[c(1.0, 0.0), c(0.2, 0.1)], [c(0.2, 0.1), c(3.0, 0.0)]];
        assert!(hermiticity_residual(&bad) > 0.1);
    }
}
