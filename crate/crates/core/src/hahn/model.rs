use crate::algebra::{CycloField, GroupAut};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The ambient valued difference field `k((t^Γ))`: residue field with its
/// automorphism, and the value group automorphism `σ_Γ` (which fixes the rank).
///
/// Series, σ-polynomials and Laurent polynomials hold an `Arc<Model>`;
/// combining values from different models is an error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model<Q> {
    field: CycloField,
    sigma_gamma: GroupAut<Q>,
}

impl<Q: Scalar> Model<Q> {
    pub fn new(field: CycloField, sigma_gamma: GroupAut<Q>) -> Self {
        Model { field, sigma_gamma }
    }

    /// Build from raw data: conductor, automorphism exponent and the `σ_Γ` matrix.
    pub fn from_parts(n: u32, a: i64, sigma_gamma: Vec<Vec<Q>>) -> Result<Self> {
        Ok(Model { field: CycloField::new(n, a)?, sigma_gamma: GroupAut::new(sigma_gamma)? })
    }

    /// Puiseux series over `Q(i)` with conjugation and `σ_Γ(γ) = 2γ`.
    pub fn puiseux_conjugate() -> Self {
        Model {
            field: CycloField::new(4, 3).expect("valid"),
            sigma_gamma: GroupAut::multiplication(Q::from_int(2)).expect("valid"),
        }
    }

    /// Isometric variant: conjugation on `Q(i)`, identity on the value group.
    pub fn isometric_conjugate() -> Self {
        Model { field: CycloField::new(4, 3).expect("valid"), sigma_gamma: GroupAut::identity(1) }
    }

    /// Looks up `PC` or `ISO`.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "PC" => Some(Self::puiseux_conjugate()),
            "ISO" => Some(Self::isometric_conjugate()),
            _ => None,
        }
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn sigma_gamma(&self) -> &GroupAut<Q> {
        &self.sigma_gamma
    }

    pub fn rank(&self) -> usize {
        self.sigma_gamma.rank()
    }

    pub fn is_isometric(&self) -> bool {
        self.sigma_gamma.is_identity()
    }

    pub(crate) fn check_rank(&self, rank: usize) -> Result<()> {
        if rank == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch { left: self.rank(), right: rank })
        }
    }
}
