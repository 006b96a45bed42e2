mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use tropdiff_core::tropical::{
    binomial_initial, fundamental_check_binomial, initial_form, kapranov_check, newton_valuations, tropicalize,
    BinomialCoset, FundamentalVerdict,
};
use tropdiff_core::{Field, Laurent, Series, Value};

fn laurent(ctx: &Arc<Field>, nvars: usize, max_terms: usize) -> impl Strategy<Value = Laurent> {
    let c = ctx.clone();
    prop::collection::vec((prop::collection::vec(-3i64..=3, nvars), nonzero_series(ctx, 2)), 1..=max_terms)
        .prop_map(move |terms| Laurent::from_terms(&c, nvars, terms).unwrap())
        .prop_filter("nonzero", |f| !f.is_zero())
}

/// `c·x^m·Π (x − rₖ)` together with the valuations of the `rₖ`.
fn split_polynomial(ctx: &Arc<Field>) -> impl Strategy<Value = (Laurent, Vec<Value>)> {
    let c = ctx.clone();
    (prop::collection::vec(nonzero_series(ctx, 2), 1..=4), nonzero_series(ctx, 1), -2i64..=2).prop_map(
        move |(roots, lead, m)| {
            let x = Laurent::variable(&c, 1, 0);
            let mut f = Laurent::from_terms(&c, 1, [(vec![m], lead)]).unwrap();
            for r in &roots {
                f = f.try_mul(&x.try_sub(&Laurent::constant(1, r.clone())).unwrap()).unwrap();
            }
            (f, roots.iter().map(|r| r.valuation().unwrap()).collect())
        },
    )
}

fn point(rank: usize, nvars: usize) -> impl Strategy<Value = Vec<Value>> {
    prop::collection::vec(group_vector(rank), nvars)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// The Gauss valuation at any point is multiplicative.
    #[test]
    fn tropicalization_is_additive_on_products(
        (_, (f, h, x)) in with_model(prop_oneof![models(), rank2_models()], |m| {
            (laurent(m, 2, 3), laurent(m, 2, 3), point(m.rank(), 2))
        })
    ) {
        let fh = f.try_mul(&h).unwrap();
        let lhs = tropicalize(&fh).unwrap().eval(&x).unwrap().0;
        let rhs = tropicalize(&f).unwrap().eval(&x).unwrap().0.checked_add(&tropicalize(&h).unwrap().eval(&x).unwrap().0).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn initial_forms_ignore_unit_multipliers(
        (_, (f, unit, x)) in with_model(models(), |m| (laurent(m, 2, 4), one_plus_small(m), point(1, 2)))
    ) {
        let scaled = f.scale(&unit).unwrap();
        prop_assert_eq!(initial_form(&scaled, &x).unwrap(), initial_form(&f, &x).unwrap());
    }

    #[test]
    fn initial_forms_are_equivariant(
        (ctx, (f, x)) in with_model(prop_oneof![models(), rank2_models()], |m| (laurent(m, 2, 4), point(m.rank(), 2)))
    ) {
        let sg = ctx.sigma_gamma();
        let sx: Vec<Value> = x.iter().map(|g| sg.apply(g).unwrap()).collect();
        prop_assert_eq!(initial_form(&f, &x).unwrap().apply_aut(1), initial_form(&f.sigma(1), &sx).unwrap());
    }

    /// Root valuations of a split polynomial are known in advance.
    #[test]
    fn newton_valuations_of_split_polynomials(
        (_, (f, vals)) in with_model(prop_oneof![models(), rank2_models()], split_polynomial)
    ) {
        let mut expected: BTreeMap<Value, u64> = BTreeMap::new();
        for v in vals {
            *expected.entry(v).or_default() += 1;
        }
        prop_assert_eq!(newton_valuations(&f).unwrap(), expected.clone());
        let roots = tropicalize(&f).unwrap().roots_univariate().unwrap();
        prop_assert!(roots.iter().eq(expected.keys()));
        prop_assert!(kapranov_check(&f).unwrap().passed());
    }

    /// Between and beyond consecutive tropical roots the minimum is attained once.
    #[test]
    fn kapranov_and_sweep((_, f) in with_model(prop_oneof![Just(pc()), Just(iso())], |m| laurent(m, 1, 6))) {
        prop_assume!(f.coefficients().len() >= 2);
        prop_assert!(kapranov_check(&f).unwrap().passed());
        let trop = tropicalize(&f).unwrap();
        let roots: Vec<Value> = trop.roots_univariate().unwrap().into_iter().collect();
        for r in &roots {
            prop_assert!(trop.eval(std::slice::from_ref(r)).unwrap().1 >= 2);
        }
        let one = g(1, 1);
        let mut probes = Vec::new();
        if let (Some(lo), Some(hi)) = (roots.first(), roots.last()) {
            probes.push(lo.checked_add(&-&one).unwrap());
            probes.push(hi.checked_add(&one).unwrap());
        }
        for w in roots.windows(2) {
            probes.push(w[0].checked_add(&w[1]).unwrap().scale(&q(1, 2)));
        }
        for p in probes {
            prop_assert_eq!(trop.eval(&[p]).unwrap().1, 1);
        }
    }

    #[test]
    fn binomial_initial_commutes_with_sigma(
        (ctx, (rows, units)) in with_model(prop_oneof![models(), rank2_models()], |m| {
            (prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=3), prop::collection::vec(one_plus_small(m), 3))
        })
    ) {
        let targets = units[..rows.len()].iter().map(|u| u.scale(&ctx.field().zeta_pow(1))).collect();
        let coset = BinomialCoset::new(&ctx, 3, rows, targets).unwrap();
        let init = binomial_initial(&coset).unwrap();
        let shifted = binomial_initial(&coset.sigma(1)).unwrap();
        let field = ctx.field();
        let expected: Vec<_> = init.targets.iter().map(|c| field.apply_aut(c)).collect();
        prop_assert_eq!(shifted.targets, expected);
        prop_assert_eq!(shifted.irreducible, init.irreducible);
    }

    /// A coset through a point `z` is consistent at `v(z)`; any witness lies
    /// on the coset with the requested valuations.
    #[test]
    fn fundamental_check_on_cosets_through_a_point(
        (ctx, (rows, z, off)) in with_model(models(), |m| {
            (
                prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..=2),
                prop::collection::vec(nonzero_series(m, 1), 2),
                group_vector(1),
            )
        })
    ) {
        let targets: Vec<Series> = rows
            .iter()
            .map(|u| z[0].pow(u[0]).unwrap().try_mul(&z[1].pow(u[1]).unwrap()).unwrap())
            .collect();
        let coset = BinomialCoset::new(&ctx, 2, rows.clone(), targets).unwrap();
        let gamma: Vec<Value> = z.iter().map(|s| s.valuation().unwrap()).collect();
        match fundamental_check_binomial(&coset, &gamma).unwrap() {
            FundamentalVerdict::Consistent { witness } => {
                prop_assert!(coset.contains(&witness).unwrap());
                for (w, g) in witness.iter().zip(&gamma) {
                    prop_assert_eq!(&w.valuation().unwrap(), g);
                }
            }
            FundamentalVerdict::Unknown { .. } => {}
            FundamentalVerdict::Inconsistent { reason } => prop_assert!(false, "{}", reason),
        }
        let moved = vec![gamma[0].checked_add(&off).unwrap(), gamma[1].clone()];
        let pairing_changes = rows.iter().any(|u| u[0] != 0) && !off.is_zero();
        let verdict = fundamental_check_binomial(&coset, &moved).unwrap();
        if pairing_changes {
            prop_assert!(matches!(verdict, FundamentalVerdict::Inconsistent { .. }), "{:?}", verdict);
        }
    }
}

#[test]
fn worked_equivariance_instance() {
    let ctx = pc();
    let field = ctx.field();
    // i·t·x + x², γ = 1
    let f = Laurent::from_terms(
        &ctx,
        1,
        [
            (vec![1], Series::monomial(&ctx, field.imag_unit().unwrap(), g(1, 1)).unwrap()),
            (vec![2], Series::one(&ctx)),
        ],
    )
    .unwrap();
    let at = initial_form(&f, &[g(1, 1)]).unwrap();
    assert_eq!(at.coefficients().len(), 2);
    let image = initial_form(&f.sigma(1), &[ctx.sigma_gamma().apply(&g(1, 1)).unwrap()]).unwrap();
    assert_eq!(at.apply_aut(1), image);
    // σ(i) = -i
    assert_eq!(image.coefficients()[&vec![1]], field.neg(&field.imag_unit().unwrap()));
}
