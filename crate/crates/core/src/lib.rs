//! Exact arithmetic for valued difference fields of Hahn series with a
//! cyclotomic residue field: Hahn series with a twisted automorphism,
//! σ-polynomials and Hensel lifting, tropicalization, `Z[σ]`-lattices and
//! amalgamation over cyclotomic difference subfields.
//!
//! Everything is generic over an exact rational [`Scalar`]; the aliases below
//! fix it to [`num_rational::BigRational`].

pub mod algebra;
pub mod amalg;
pub mod demo;
pub mod error;
pub mod hahn;
pub mod lattice;
pub mod scalar;
pub mod sigma;
pub mod syntax;
pub mod tropical;
pub mod zsigma;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type Element = algebra::CycloElement<Rational>;
pub type Value = algebra::GroupVector<Rational>;
pub type ValueAut = algebra::GroupAut<Rational>;
pub type Field = hahn::Model<Rational>;
pub type Series = hahn::HahnSeries<Rational>;
pub type SigmaPoly = sigma::SigmaPolynomial<Rational>;
pub type Laurent = tropical::LaurentPoly<Rational>;
pub type Coset = tropical::BinomialCoset<Rational>;
