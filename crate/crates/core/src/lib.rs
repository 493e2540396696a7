//! Exact computations with real DPD-pairs: smooth real affine surfaces with
//! a circle action, presented by a curve `C = P¹ \ S`, a Weil Q-divisor `D`
//! on `C`, and a real rational function `h` with `D + τ*D ≤ div(h)`.
//!
//! All arithmetic is exact over `Q(i)`. The algebra layer ([`scalar`],
//! [`poly`], [`ratfn`]) is generic over the coefficient field; the geometry
//! works with the concrete aliases below.

pub mod cli;
pub mod curve;
pub mod divisor;
pub mod error;
pub mod fibers;
pub mod mobius;
pub mod normalize;
pub mod pair;
pub mod poly;
pub mod ratfn;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod sections;
pub mod syntax;
pub mod topology;
pub mod torsor;

pub type Rational = num_rational::BigRational;
pub type GaussianRational = scalar::Gaussian<Rational>;
pub type Polynomial = poly::Poly<GaussianRational>;
pub type RationalFunction = ratfn::RatFn<GaussianRational>;

pub use curve::{CurveKind, CurvePoint, RealCurve};
pub use divisor::QDivisor;
pub use error::{Error, Result};
pub use mobius::Mobius;
pub use pair::{DpdPair, TwistData};
