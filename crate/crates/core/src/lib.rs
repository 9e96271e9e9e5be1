//! Exact q-series machinery for harmonic Maass forms whose ξ-image is a CM
//! newform, worked out for η(3z)⁸ and the field ℚ(√−3).
pub mod arith;
pub mod config;
pub mod error;
pub mod eta;
pub mod lift;
pub mod numerics;
pub mod series;
pub mod theta;
pub mod vector;
pub mod verify;

pub use arith::{Coefficient, Integer, Polynomial, QuadElem, Rational, RationalFunction};
pub use config::{OutputFormat, RunConfig};
pub use error::{Error, Result};
pub use series::PuiseuxSeries;

pub type IntegerSeries = PuiseuxSeries<Integer>;
pub type RationalSeries = PuiseuxSeries<Rational>;
pub type QuadSeries = PuiseuxSeries<QuadElem>;
pub type FloatSeries = PuiseuxSeries<f64>;
pub type IntPolynomial = Polynomial<Rational>;
