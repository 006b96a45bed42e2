//! Hahn series `k((t^Γ))` with valuation, residue, the equivariant
//! cross-section `γ ↦ t^γ`, angular component, lift and the twisted
//! automorphism.

mod format;
mod model;
mod series;

pub use model::Model;
pub use series::{hs_leading, HahnSeries};

pub(crate) use format::{signed_coefficient, write_series_term, write_term};
pub(crate) use series::same_ctx;
