//! Forward-mode automatic differentiation over complex numbers: truncated
//! Taylor jets in the four formal variables (z¹, z², z̄¹, z̄²).
//!
//! A [`ComplexJet`] stores every Taylor coefficient of total degree ≤ `order`
//! around an (implicit) expansion point; the coefficient of multi-index `m`
//! is ∂^m f / m!. The barred variables are ordinary formals seeded with
//! numeric conjugates by the expression evaluator, which makes ∂_α and ∂_ᾱ
//! plain jet partials (the Wirtinger convention).
//!
//! Multiplication is the truncated Cauchy product; `exp`, `ln`, division and
//! rational powers go through the univariate composition of the outer
//! function's Taylor series with the zero-constant-term part of the inner
//! jet, which terminates exactly at the truncation order.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{real, Real};

/// Number of formal variables: z¹, z², z̄¹, z̄².
pub const NUM_VARS: usize = 4;

/// Errors from jet construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("variable index {0} out of range (expected 0..=3)")]
    VariableIndex(usize),
    #[error("jet order {order} too small (need at least {need})")]
    OrderTooSmall { order: usize, need: usize },
    #[error("partial derivative of total order {requested} exceeds jet order {order}")]
    PartialOrder { requested: usize, order: usize },
    #[error("division by a jet with zero value")]
    DivisionByZero,
    #[error("logarithm of a jet with zero value")]
    LogOfZero,
    #[error("logarithm of a jet with value on the branch cut (negative real axis)")]
    LogBranchCut,
    #[error("rational power of a jet with zero value")]
    PowOfZero,
    #[error("rational power of a jet with value on the branch cut (negative real axis)")]
    PowBranchCut,
}

/// Multi-index over the four formal variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub [u8; NUM_VARS]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; NUM_VARS]);

    /// Unit multi-index for one variable.
    pub fn unit(var: usize) -> Result<Self, JetError> {
        if var >= NUM_VARS {
            return Err(JetError::VariableIndex(var));
        }
        let mut k = [0u8; NUM_VARS];
        k[var] = 1;
        Ok(MultiIndex(k))
    }

    /// Total degree k₁+k₂+k₃+k₄.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    /// m! = k₁!·k₂!·k₃!·k₄!.
    pub fn factorial<T: Real>(&self) -> T {
        let mut f = 1.0f64;
        for &k in &self.0 {
            for j in 2..=(k as u64) {
                f *= j as f64;
            }
        }
        real(f)
    }

    fn sum(&self, other: &MultiIndex) -> MultiIndex {
        let mut k = [0u8; NUM_VARS];
        for v in 0..NUM_VARS {
            k[v] = self.0[v] + other.0[v];
        }
        MultiIndex(k)
    }

    /// Swaps z^α ↔ z̄^α, the index action of formal conjugation.
    pub fn conjugate(&self) -> MultiIndex {
        let [a, b, c, d] = self.0;
        MultiIndex([c, d, a, b])
    }
}

/// Dense enumeration of all multi-indices of total degree ≤ order, in graded
/// lexicographic order, with a reverse lookup. Shared between jets of the
/// same order.
#[derive(Debug)]
pub struct IndexTable {
    order: usize,
    indices: Vec<MultiIndex>,
    degrees: Vec<usize>,
    positions: Vec<u32>,
}

const NO_POSITION: u32 = u32::MAX;

impl IndexTable {
    fn build(order: usize) -> IndexTable {
        let mut indices = Vec::new();
        for deg in 0..=order {
            for k1 in (0..=deg).rev() {
                for k2 in (0..=deg - k1).rev() {
                    for k3 in (0..=deg - k1 - k2).rev() {
                        let k4 = deg - k1 - k2 - k3;
                        indices.push(MultiIndex([k1 as u8, k2 as u8, k3 as u8, k4 as u8]));
                    }
                }
            }
        }
        let side = order + 1;
        let mut positions = vec![NO_POSITION; side * side * side * side];
        for (pos, m) in indices.iter().enumerate() {
            positions[Self::flat(m, side)] = pos as u32;
        }
        let degrees = indices.iter().map(|m| m.degree()).collect();
        IndexTable {
            order,
            indices,
            degrees,
            positions,
        }
    }

    #[inline]
    fn flat(m: &MultiIndex, side: usize) -> usize {
        ((m.0[0] as usize * side + m.0[1] as usize) * side + m.0[2] as usize) * side
            + m.0[3] as usize
    }

    /// Position of a multi-index within the dense coefficient vector.
    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        if m.0.iter().any(|&k| k as usize > self.order) {
            return None;
        }
        let p = self.positions[Self::flat(m, self.order + 1)];
        (p != NO_POSITION).then_some(p as usize)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }
}

fn index_table(order: usize) -> Arc<IndexTable> {
    static TABLES: OnceLock<Mutex<HashMap<usize, Arc<IndexTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = tables.lock().expect("index table cache lock");
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(IndexTable::build(order)))
        .clone()
}

/// Truncated Taylor expansion of a scalar in (z¹, z², z̄¹, z̄²).
///
/// Immutable after construction; all operations are pure and return fresh
/// jets, so concurrent evaluation needs no synchronization.
#[derive(Clone)]
pub struct ComplexJet<T: Real> {
    order: usize,
    table: Arc<IndexTable>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> std::fmt::Debug for ComplexJet<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComplexJet")
            .field("order", &self.order)
            .field("value", &self.value())
            .finish_non_exhaustive()
    }
}

impl<T: Real> PartialEq for ComplexJet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs == other.coeffs
    }
}

impl<T: Real> ComplexJet<T> {
    /// Jet of a constant.
    pub fn constant(value: Complex<T>, order: usize) -> Self {
        let table = index_table(order);
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); table.len()];
        coeffs[0] = value;
        ComplexJet {
            order,
            table,
            coeffs,
        }
    }

    /// Jet of the coordinate function for `var`, expanded at `value`.
    ///
    /// Degree-0 coefficient is the value, the unit multi-index at `var`
    /// carries coefficient 1, everything else vanishes.
    pub fn variable(value: Complex<T>, var: usize, order: usize) -> Result<Self, JetError> {
        if var >= NUM_VARS {
            return Err(JetError::VariableIndex(var));
        }
        if order < 1 {
            return Err(JetError::OrderTooSmall { order, need: 1 });
        }
        let mut jet = Self::constant(value, order);
        let pos = jet
            .table
            .position(&MultiIndex::unit(var)?)
            .expect("unit index fits any order ≥ 1");
        jet.coeffs[pos] = Complex::new(T::one(), T::zero());
        Ok(jet)
    }

    /// Seeds the four coordinate jets at once: `point[v]` becomes the jet of
    /// the v-th coordinate function.
    pub fn seed_point(point: &[Complex<T>; NUM_VARS], order: usize) -> Result<[Self; NUM_VARS], JetError> {
        Ok([
            Self::variable(point[0], 0, order)?,
            Self::variable(point[1], 1, order)?,
            Self::variable(point[2], 2, order)?,
            Self::variable(point[3], 3, order)?,
        ])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Function value at the expansion point (degree-0 coefficient).
    pub fn value(&self) -> Complex<T> {
        self.coeffs[0]
    }

    /// Taylor coefficient of a multi-index (∂^m f / m!).
    pub fn coeff(&self, m: &MultiIndex) -> Result<Complex<T>, JetError> {
        match self.table.position(m) {
            Some(p) => Ok(self.coeffs[p]),
            None => Err(JetError::PartialOrder {
                requested: m.degree(),
                order: self.order,
            }),
        }
    }

    /// Raw partial derivative ∂^m f at the expansion point: coeff(m)·m!.
    pub fn extract_partial(&self, m: &MultiIndex) -> Result<Complex<T>, JetError> {
        Ok(self.coeff(m)? * m.factorial::<T>())
    }

    /// First-order partial ∂_var f at the expansion point.
    pub fn partial(&self, var: usize) -> Result<Complex<T>, JetError> {
        self.coeff(&MultiIndex::unit(var)?)
    }

    /// The jet of ∂f/∂(var), one order lower.
    pub fn derivative(&self, var: usize) -> Result<Self, JetError> {
        if var >= NUM_VARS {
            return Err(JetError::VariableIndex(var));
        }
        if self.order == 0 {
            return Err(JetError::OrderTooSmall {
                order: 0,
                need: 1,
            });
        }
        let order = self.order - 1;
        let table = index_table(order);
        let mut coeffs = Vec::with_capacity(table.len());
        for m in table.indices() {
            let mut shifted = *m;
            shifted.0[var] += 1;
            let src = self
                .table
                .position(&shifted)
                .expect("shifted index within parent order");
            let factor = real::<T>((m.0[var] + 1) as f64);
            coeffs.push(self.coeffs[src] * factor);
        }
        Ok(ComplexJet {
            order,
            table,
            coeffs,
        })
    }

    /// Drops coefficients above `order`. The graded layout makes this a
    /// prefix copy.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order, "truncate cannot raise the order");
        if order == self.order {
            return self.clone();
        }
        let table = index_table(order);
        ComplexJet {
            order,
            coeffs: self.coeffs[..table.len()].to_vec(),
            table,
        }
    }

    /// Formal conjugation: swaps z^α ↔ z̄^α and conjugates coefficients.
    pub fn formal_conj(&self) -> Self {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); self.coeffs.len()];
        for (pos, m) in self.table.indices().iter().enumerate() {
            let dst = self
                .table
                .position(&m.conjugate())
                .expect("conjugate index has the same degree");
            coeffs[dst] = self.coeffs[pos].conj();
        }
        ComplexJet {
            order: self.order,
            table: self.table.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = *c * factor;
        }
        out
    }

    fn zero_like(&self) -> Self {
        ComplexJet {
            order: self.order,
            table: self.table.clone(),
            coeffs: vec![Complex::new(T::zero(), T::zero()); self.coeffs.len()],
        }
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "jet operands must share the expansion order"
        );
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let order = self.order;
        let table = &self.table;
        let degrees = &table.degrees;
        let mut out = self.zero_like();
        for i in 0..table.len() {
            let di = degrees[i];
            // graded order: degrees are non-decreasing, so we can stop early
            for j in i..table.len() {
                if di + degrees[j] > order {
                    break;
                }
                let m = table.indices[i].sum(&table.indices[j]);
                let dst = table.position(&m).expect("sum within order");
                if i == j {
                    out.coeffs[dst] = out.coeffs[dst] + self.coeffs[i] * rhs.coeffs[i];
                } else {
                    // symmetric pair keeps a·b bit-identical to b·a
                    out.coeffs[dst] = out.coeffs[dst]
                        + (self.coeffs[i] * rhs.coeffs[j] + self.coeffs[j] * rhs.coeffs[i]);
                }
            }
        }
        out
    }

    /// Horner evaluation of Σ outer[k]·w^k where w = self − value(self).
    ///
    /// `outer[k]` must be F⁽ᵏ⁾(value)/k! for the outer function F; since w
    /// has no constant term the sum is exact at the truncation order.
    fn compose_univariate(&self, outer: &[Complex<T>]) -> Self {
        debug_assert_eq!(outer.len(), self.order + 1);
        let mut w = self.clone();
        w.coeffs[0] = Complex::new(T::zero(), T::zero());
        let mut acc = Self::constant(outer[self.order], self.order);
        for k in (0..self.order).rev() {
            acc = acc.mul_impl(&w);
            acc.coeffs[0] = acc.coeffs[0] + outer[k];
        }
        acc
    }

    /// Truncated exponential.
    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let mut outer = Vec::with_capacity(self.order + 1);
        let mut c = e;
        outer.push(c);
        for k in 1..=self.order {
            c = c / real::<T>(k as f64);
            outer.push(c);
        }
        self.compose_univariate(&outer)
    }

    fn check_branch(
        &self,
        zero_err: JetError,
        cut_err: JetError,
    ) -> Result<Complex<T>, JetError> {
        let v = self.value();
        if v.re.is_zero() && v.im.is_zero() {
            return Err(zero_err);
        }
        if v.im.is_zero() && v.re < T::zero() {
            return Err(cut_err);
        }
        Ok(v)
    }

    /// Truncated principal-branch logarithm (argument in (−π, π]).
    pub fn ln(&self) -> Result<Self, JetError> {
        let v = self.check_branch(JetError::LogOfZero, JetError::LogBranchCut)?;
        let inv = Complex::new(T::one(), T::zero()) / v;
        let mut outer = Vec::with_capacity(self.order + 1);
        outer.push(v.ln());
        let mut p = inv;
        let mut sign = T::one();
        for k in 1..=self.order {
            outer.push(p * (sign / real::<T>(k as f64)));
            p = p * inv;
            sign = -sign;
        }
        Ok(self.compose_univariate(&outer))
    }

    /// Truncated reciprocal.
    pub fn recip(&self) -> Result<Self, JetError> {
        let v = self.value();
        if v.re.is_zero() && v.im.is_zero() {
            return Err(JetError::DivisionByZero);
        }
        let inv = Complex::new(T::one(), T::zero()) / v;
        let mut outer = Vec::with_capacity(self.order + 1);
        let mut c = inv;
        outer.push(c);
        for _ in 1..=self.order {
            c = -c * inv;
            outer.push(c);
        }
        Ok(self.compose_univariate(&outer))
    }

    /// Truncated quotient.
    pub fn div(&self, rhs: &Self) -> Result<Self, JetError> {
        Ok(self.mul_impl(&rhs.recip()?))
    }

    /// Integer power by repeated multiplication (negative via reciprocal),
    /// valid for any base value.
    pub fn powi(&self, exponent: i64) -> Result<Self, JetError> {
        if exponent == 0 {
            return Ok(Self::constant(
                Complex::new(T::one(), T::zero()),
                self.order,
            ));
        }
        let base = if exponent < 0 {
            self.recip()?
        } else {
            self.clone()
        };
        let mut n = exponent.unsigned_abs();
        let mut acc = Self::constant(Complex::new(T::one(), T::zero()), self.order);
        let mut sq = base;
        loop {
            if n & 1 == 1 {
                acc = acc.mul_impl(&sq);
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            sq = sq.mul_impl(&sq);
        }
        Ok(acc)
    }

    /// Rational power p/q. Integer exponents reduce to [`Self::powi`];
    /// otherwise this is exp((p/q)·ln self) on the principal branch, so the
    /// base value must lie off the negative real axis.
    pub fn pow_rational(&self, num: i64, den: i64) -> Result<Self, JetError> {
        assert!(den > 0, "rational exponent denominator must be positive");
        if num % den == 0 {
            return self.powi(num / den);
        }
        self.check_branch(JetError::PowOfZero, JetError::PowBranchCut)?;
        let r = real::<T>(num as f64) / real::<T>(den as f64);
        let ln = self.ln().map_err(|e| match e {
            JetError::LogOfZero => JetError::PowOfZero,
            JetError::LogBranchCut => JetError::PowBranchCut,
            other => other,
        })?;
        Ok(ln.scale(Complex::new(r, T::zero())).exp())
    }

    /// Largest coefficient magnitude, a scale for relative comparisons.
    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> Add for &ComplexJet<T> {
    type Output = ComplexJet<T>;
    fn add(self, rhs: Self) -> ComplexJet<T> {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (c, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c = *c + *r;
        }
        out
    }
}

impl<T: Real> Sub for &ComplexJet<T> {
    type Output = ComplexJet<T>;
    fn sub(self, rhs: Self) -> ComplexJet<T> {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (c, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c = *c - *r;
        }
        out
    }
}

impl<T: Real> Mul for &ComplexJet<T> {
    type Output = ComplexJet<T>;
    fn mul(self, rhs: Self) -> ComplexJet<T> {
        self.mul_impl(rhs)
    }
}

impl<T: Real> Neg for &ComplexJet<T> {
    type Output = ComplexJet<T>;
    fn neg(self) -> ComplexJet<T> {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -*c;
        }
        out
    }
}

impl<T: Real> Add for ComplexJet<T> {
    type Output = ComplexJet<T>;
    fn add(self, rhs: Self) -> ComplexJet<T> {
        &self + &rhs
    }
}

impl<T: Real> Sub for ComplexJet<T> {
    type Output = ComplexJet<T>;
    fn sub(self, rhs: Self) -> ComplexJet<T> {
        &self - &rhs
    }
}

impl<T: Real> Mul for ComplexJet<T> {
    type Output = ComplexJet<T>;
    fn mul(self, rhs: Self) -> ComplexJet<T> {
        &self * &rhs
    }
}

impl<T: Real> Neg for ComplexJet<T> {
    type Output = ComplexJet<T>;
    fn neg(self) -> ComplexJet<T> {
        -&self
    }
}
