// index loops mirror the tensor notation; iterator rewrites hurt readability
#![allow(clippy::needless_range_loop)]

//! Numerical verification engine for four-dimensional Kähler manifolds
//! admitting H-projective mappings.
//!
//! Given a Kähler potential in a small expression language, the crate
//! computes metric, connection and curvature in complex charts through
//! higher-order complex forward-mode jets, constructs the H-projective
//! partner metric via the Sinyukov transformation of the tensor a_{αβ̄},
//! and checks the defining tensor identities pointwise.
//!
//! The numeric kernel is generic over the real scalar (`f32`/`f64` through
//! `num-traits`); the `*64` aliases at the crate root fix `f64`, which is
//! what the command-line front end and the test suites use.
//!
//! Curvature sign conventions are pinned internally: the Ricci block from
//! ∂∂̄ ln det g must agree with the Riemann contraction, and the Sinyukov
//! pair must satisfy the connection-deformation identity. Comparisons
//! against external references may still differ by a global sign.

pub mod dsl;
pub mod families;
pub mod fdcheck;
pub mod hproj;
pub mod jets;
pub mod kahler;
pub mod linalg;
pub mod scalar;

pub use scalar::Real;

/// Jet of a scalar over `f64` coefficients.
pub type Jet64 = jets::ComplexJet<f64>;
/// Chart point over `f64`.
pub type ChartPoint64 = kahler::ChartPoint<f64>;
/// Hermitian metric block over `f64`.
pub type Metric64 = kahler::HermitianMetric<f64>;
/// Christoffel symbols over `f64`.
pub type Christoffel64 = kahler::ChristoffelSymbols<f64>;
/// Curvature data over `f64`.
pub type Curvature64 = kahler::CurvatureData<f64>;
/// Sinyukov tensor over `f64`.
pub type ATensor64 = hproj::ATensor<f64>;
/// H-projective pair over `f64`.
pub type Pair64 = hproj::HProjectivePair<f64>;
/// Integrated curve over `f64`.
pub type Curve64 = hproj::HPlanarCurve<f64>;
