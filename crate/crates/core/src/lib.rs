//! Numerical toolkit for weighted composition operators `W_{u,φ}f = u·(f∘φ)`
//! on de Branges–Rovnyak spaces H(b) with a rational, non-extreme symbol `b`.
//!
//! The modules build on each other: [`funcexpr`] parses and evaluates the
//! symbols, [`poly`] holds the polynomial algebra, [`hardy`] the quadrature and
//! Hardy-space tests, [`hb`] the space itself, and [`wco`] the operator
//! analysis. Everything is generic over the real scalar; the aliases below fix
//! it to `f64` or `f32`.

pub mod error;
pub mod funcexpr;
pub mod hardy;
pub mod hb;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod selftest;
pub mod wco;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Complex64 = C<f64>;
pub type Complex32 = C<f32>;
pub type Expr64 = funcexpr::Expr<f64>;
pub type Expr32 = funcexpr::Expr<f32>;
pub type Poly64 = poly::Poly<f64>;
pub type Poly32 = poly::Poly<f32>;
pub type Rational64 = poly::RationalFn<f64>;
pub type Rational32 = poly::RationalFn<f32>;
pub type HbSpace64 = hb::HbSpace<f64>;
pub type HbSpace32 = hb::HbSpace<f32>;
pub type AnalysisReport64 = wco::AnalysisReport<f64>;
pub type AnalysisReport32 = wco::AnalysisReport<f32>;
