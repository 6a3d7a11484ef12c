//! Exact arithmetic, expressions, polynomials and certified proofs for
//! tangent-line inequalities.

pub mod certify;
pub mod compose;
pub mod expr;
pub mod numerics;
pub mod poly;
pub mod surrogate;

pub use expr::{Domain, Expr};
pub use numerics::{QuadExt, RatInterval, Rational};

/// Polynomial with rational coefficients.
pub type RatPoly = poly::UniPoly<Rational>;
/// Polynomial with coefficients in a single `ℚ(√d)`.
pub type QuadPoly = poly::UniPoly<QuadExt>;
