//! Value group and residue field arithmetic.

pub mod cyclo;
pub mod difference;
pub mod group;
pub mod linsolve;

pub use cyclo::{apply_field_aut, cyclo_arith, cyclotomic_polynomial, CycloElement, CycloField, CycloOp};
pub use difference::{apply_difference_operator, solve_linear_difference};
pub use group::{apply_group_aut, lex_compare, GroupAut, GroupVector};
