//! Generalized Bernoulli polynomials of level `m` with exact rational
//! arithmetic, their Fourier series and even zeta values, Euler-Maclaurin
//! quadrature of level `m`, and a series estimator for `sum f(j)`.
//!
//! Exact objects use [`Rational`]. Floating-point routines are generic
//! over [`Real`], implemented for `f64` and [`BigFloat`]; the `*Big` and
//! `*F64` aliases below fix the scalar.

pub mod bernoulli;
pub mod em;
pub mod error;
pub mod fourier;
pub mod function;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod zeta;

pub use bernoulli::{family, gb_numbers, gb_polynomial, GbFamily};
pub use em::QuadratureReport;
pub use error::{Error, Result};
pub use fourier::{FourierCoeffs, PeriodicGb, ZetaExpansion};
pub use function::{FunctionStack, FunctionStackBuilder, PowerFunction};
pub use poly::{Poly, RatPoly};
pub use quadrature::GaussLegendre;
pub use rational::Rational;
pub use scalar::{pi_const, BigFloat, Precision, Real, DEFAULT_PRECISION};
pub use series::{DeltaTail, EulerConstant, SeriesEstimate, Verdict};
pub use zeta::PiMultiple;

pub type FunctionStackBig = FunctionStack<BigFloat>;
pub type FunctionStackF64 = FunctionStack<f64>;
pub type QuadratureReportBig = QuadratureReport<BigFloat>;
pub type QuadratureReportF64 = QuadratureReport<f64>;
pub type FourierCoeffsBig = FourierCoeffs<BigFloat>;
pub type FourierCoeffsF64 = FourierCoeffs<f64>;
pub type SeriesEstimateBig = SeriesEstimate<BigFloat>;
pub type SeriesEstimateF64 = SeriesEstimate<f64>;
pub type GaussLegendreBig = GaussLegendre<BigFloat>;
