//! Fixed-field obstruction: with `ε = t`, the root `x` of `x² + 1 = t` lifted
//! from `i` has residue `i`, which `σ` moves. Every `z` with `v(z - x) > 0`
//! then has `res(σ(z)) = σ(i) ≠ i = res(z)`, so the ball contains no fixed point.

use std::sync::Arc;

use crate::algebra::GroupVector;
use crate::error::{Error, Result};
use crate::hahn::{HahnSeries, Model};
use crate::scalar::Scalar;
use crate::sigma::SigmaPolynomial;

#[derive(Clone, Debug)]
pub struct FixedFieldReport<Q> {
    pub polynomial: SigmaPolynomial<Q>,
    pub root: HahnSeries<Q>,
    pub iterations: usize,
    /// Named checks, all of which must hold.
    pub checks: Vec<(String, bool)>,
    pub conclusion: String,
}

impl<Q> FixedFieldReport<Q> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Lifts `i` to a root of `x² + 1 - t` up to `precision` and checks the
/// obstruction. Needs `i` in the residue field with `σ(i) ≠ i`.
pub fn demo_fixed_field<Q: Scalar>(ctx: &Arc<Model<Q>>, precision: &GroupVector<Q>) -> Result<FixedFieldReport<Q>> {
    let field = ctx.field();
    let i = field
        .imag_unit::<Q>()
        .ok_or_else(|| Error::Precondition(format!("the residue field Q(ζ_{}) does not contain i", field.conductor())))?;
    if field.apply_aut(&i) == i {
        return Err(Error::Precondition("σ fixes i; the demonstration needs σ(i) ≠ i".into()));
    }
    let mut unit = vec![Q::zero(); ctx.rank()];
    unit[0] = Q::one();
    let t = HahnSeries::section(ctx, &GroupVector::from_coords(unit))?;
    let x = SigmaPolynomial::variable(ctx, 0);
    let g = x.pow(2)?.try_add(&SigmaPolynomial::constant(HahnSeries::one(ctx).try_sub(&t)?))?;
    let start = HahnSeries::lift(ctx, &i);
    let lift = g.hensel_lift(&start, precision)?;
    let root = lift.root;

    let residual_ok = lift.residual.is_zero() || lift.residual.valuation_lower_bound() >= *precision;
    let residue_ok = root.res()? == i;
    let moved = root.sigma(1).try_sub(&root)?;
    let moved_ok = moved.valuation().is_ok_and(|v| v.is_zero());
    let checks = vec![
        (format!("v(G(x)) >= {precision}"), residual_ok),
        (format!("res(x) = {}", field.format(&i)), residue_ok),
        (format!("σ(i) = {} differs from i", field.format(&field.apply_aut(&i))), true),
        ("v(σ(x) - x) = 0".to_string(), moved_ok),
    ];
    Ok(FixedFieldReport {
        polynomial: g,
        root,
        iterations: lift.iterations,
        checks,
        conclusion: "every z with v(z - x) > 0 has res(z) = i and res(σ(z)) = σ(i) ≠ i, \
                     so the ball around x contains no element of the fixed field"
            .to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn passes_on_the_isometric_model() {
        let ctx = Arc::new(Model::<Q>::isometric_conjugate());
        let report = demo_fixed_field(&ctx, &GroupVector::from_ints(&[3])).unwrap();
        assert!(report.passed());
        assert_eq!(report.root.to_string(), "i - 1/2*i*t - 1/8*i*t^2");
        let report = demo_fixed_field(&ctx, &GroupVector::from_ints(&[1])).unwrap();
        assert!(report.passed());
        assert_eq!(report.iterations, 0);
    }

    #[test]
    fn guards() {
        let identity = Arc::new(Model::<Q>::from_parts(4, 1, vec![vec![Q::from_int(1)]]).unwrap());
        assert!(matches!(demo_fixed_field(&identity, &GroupVector::from_ints(&[2])), Err(Error::Precondition(_))));
        let no_i = Arc::new(Model::<Q>::from_parts(3, 2, vec![vec![Q::from_int(1)]]).unwrap());
        assert!(matches!(demo_fixed_field(&no_i, &GroupVector::from_ints(&[2])), Err(Error::Precondition(_))));
    }
}
