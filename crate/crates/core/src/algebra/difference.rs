//! Linear difference equations `α₀x + α₁σ(x) + … + αₙσⁿ(x) = β` over a
//! cyclotomic field. `σ` is `Q`-linear, so the equation is a rational linear
//! system in the coordinates of `x`.

use super::cyclo::{CycloElement, CycloField};
use super::linsolve;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Returns `Ok(None)` when the equation has no solution in the field.
pub fn solve_linear_difference<Q: Scalar>(
    field: &CycloField,
    coeffs: &[CycloElement<Q>],
    rhs: &CycloElement<Q>,
) -> Result<Option<CycloElement<Q>>> {
    if coeffs.iter().all(CycloElement::is_zero) {
        return Err(Error::AllZeroCoefficients);
    }
    let d = field.degree();
    // column j: image of the basis vector ζ^j
    let columns: Vec<CycloElement<Q>> = (0..d)
        .map(|j| {
            let e = field.zeta_pow::<Q>(j as i64);
            coeffs.iter().enumerate().fold(field.zero(), |acc, (k, alpha)| {
                if alpha.is_zero() {
                    acc
                } else {
                    field.add(&acc, &field.mul(alpha, &field.apply_aut_pow(&e, k as i64)))
                }
            })
        })
        .collect();
    let matrix: Vec<Vec<Q>> = (0..d)
        .map(|i| columns.iter().map(|c| c.coeffs()[i].clone()).collect())
        .collect();
    Ok(linsolve::solve(&matrix, rhs.coeffs()).map(|x| field.from_coeffs(x).expect("degree matches")))
}

/// Applies the difference operator `Σ αᵢσⁱ` to `x`.
pub fn apply_difference_operator<Q: Scalar>(
    field: &CycloField,
    coeffs: &[CycloElement<Q>],
    x: &CycloElement<Q>,
) -> CycloElement<Q> {
    coeffs.iter().enumerate().fold(field.zero(), |acc, (k, alpha)| {
        field.add(&acc, &field.mul(alpha, &field.apply_aut_pow(x, k as i64)))
    })
}
