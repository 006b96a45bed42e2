//! Tropicalization of Laurent polynomials over Hahn series, tropical roots,
//! initial forms, Newton polygons and binomial cosets.

mod binomial;
mod laurent;
mod poly;

pub use binomial::{
    binomial_initial, fundamental_check_binomial, monomial_value, BinomialCoset, BinomialInitial,
    FundamentalVerdict,
};
pub use laurent::{format_monomial, Exponents, LaurentPoly, ResidueLaurent};
pub use poly::{
    initial_form, kapranov_check, newton_valuations, tropicalize, KapranovReport, TropicalPolynomial,
};
