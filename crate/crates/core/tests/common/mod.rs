#![allow(dead_code)]

use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;
use tropdiff_core::algebra::{CycloElement, CycloField, GroupVector};
use tropdiff_core::hahn::Model;
use tropdiff_core::{Field, Rational, Scalar, Series, Value};

pub type Q = Rational;

pub fn q(n: i64, d: i64) -> Q {
    Q::ratio(n, d)
}

pub fn g(n: i64, d: i64) -> Value {
    GroupVector::scalar(q(n, d))
}

pub fn pc() -> Arc<Field> {
    Arc::new(Model::puiseux_conjugate())
}

pub fn iso() -> Arc<Field> {
    Arc::new(Model::isometric_conjugate())
}

pub fn model(n: u32, a: i64, sigma: &[&[(i64, i64)]]) -> Arc<Field> {
    let m = sigma.iter().map(|row| row.iter().map(|&(p, d)| q(p, d)).collect()).collect();
    Arc::new(Model::from_parts(n, a, m).unwrap())
}

/// `(n, a)` pairs with `a` a unit mod `n`.
const FIELDS: &[(u32, i64)] = &[(1, 1), (3, 2), (4, 1), (4, 3), (5, 2), (5, 4), (8, 3), (8, 5), (12, 5), (12, 7)];

/// Rank one models: the two presets and random residue data with `σ_Γ = q·id`.
pub fn models() -> impl Strategy<Value = Arc<Field>> {
    prop_oneof![
        Just(pc()),
        Just(iso()),
        (prop::sample::select(FIELDS), prop::sample::select(&[(1i64, 1i64), (2, 1), (1, 2), (3, 1)][..]))
            .prop_map(|((n, a), s)| model(n, a, &[&[s]])),
    ]
}

pub fn isometric_models() -> impl Strategy<Value = Arc<Field>> {
    prop::sample::select(FIELDS).prop_map(|(n, a)| model(n, a, &[&[(1, 1)]]))
}

/// Rank two lex models with upper triangular `σ_Γ`.
pub fn rank2_models() -> impl Strategy<Value = Arc<Field>> {
    (prop::sample::select(FIELDS), 1i64..=3, -2i64..=2, 1i64..=3)
        .prop_map(|((n, a), d1, off, d2)| model(n, a, &[&[(d1, 1), (off, 1)], &[(0, 1), (d2, 1)]]))
}

pub fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, prop::sample::select(&[1i64, 2, 3, 4, 6, 12][..])).prop_map(|(n, d)| q(n, d))
}

pub fn group_vector(rank: usize) -> impl Strategy<Value = Value> {
    prop::collection::vec(rational(), rank).prop_map(GroupVector::from_coords)
}

pub fn element(field: &CycloField) -> impl Strategy<Value = CycloElement<Q>> {
    let f = field.clone();
    prop::collection::vec(-3i64..=3, field.degree())
        .prop_map(move |c| f.from_coeffs(c.into_iter().map(Q::from_int).collect()).unwrap())
}

pub fn nonzero_element(field: &CycloField) -> impl Strategy<Value = CycloElement<Q>> {
    element(field).prop_filter("nonzero", |c| !c.is_zero())
}

/// Exact series with up to `max_terms` terms.
pub fn exact_series(ctx: &Arc<Field>, max_terms: usize) -> impl Strategy<Value = Series> {
    let c = ctx.clone();
    prop::collection::vec((group_vector(ctx.rank()), element(ctx.field())), 0..=max_terms)
        .prop_map(move |terms| Series::from_terms(&c, terms, GroupVector::Infinity).unwrap())
}

pub fn nonzero_series(ctx: &Arc<Field>, max_terms: usize) -> impl Strategy<Value = Series> {
    let c = ctx.clone();
    (group_vector(ctx.rank()), nonzero_element(ctx.field()), exact_series(ctx, max_terms - 1)).prop_map(
        move |(e, lead, tail)| {
            // the tail sits strictly above the leading exponent
            let lead = Series::monomial(&c, lead, e.clone()).unwrap();
            let shift = tail.terms().first().map(|(v, _)| v.clone());
            let tail = match shift {
                Some(v) => {
                    let mut up = GroupVector::zero(c.rank()).coords().unwrap().to_vec();
                    up[0] = Q::one();
                    let bump = GroupVector::from_coords(up).checked_add(&e).unwrap();
                    tail.shift(&bump.checked_add(&v.scale_int(-1)).unwrap())
                }
                None => tail,
            };
            lead.try_add(&tail).unwrap()
        },
    )
}

/// Series with finite precision: exact terms plus `O(t^π)` above the leading term.
pub fn truncated_series(ctx: &Arc<Field>, max_terms: usize) -> impl Strategy<Value = Series> {
    (nonzero_series(ctx, max_terms), 1i64..=4).prop_map(|(s, gap)| {
        let v = s.valuation().unwrap();
        let mut up = v.coords().unwrap().to_vec();
        up[0] += Q::from_int(gap);
        s.with_precision(GroupVector::from_coords(up))
    })
}

/// `1 + (terms of positive valuation)`.
pub fn one_plus_small(ctx: &Arc<Field>) -> impl Strategy<Value = Series> {
    let c = ctx.clone();
    (exact_series(ctx, 2), 1i64..=6).prop_map(move |(s, k)| {
        let shift = s.terms().first().map(|(v, _)| v.clone());
        let small = match shift {
            Some(v) => {
                let mut up = vec![Q::zero(); c.rank()];
                up[0] = q(k, 2);
                s.shift(&GroupVector::from_coords(up).checked_add(&v.scale_int(-1)).unwrap())
            }
            None => s,
        };
        Series::one(&c).try_add(&small).unwrap()
    })
}

/// Random model paired with a value built from it.
pub fn with_model<S: Strategy>(
    models: impl Strategy<Value = Arc<Field>>,
    f: impl Fn(&Arc<Field>) -> S + Clone + 'static,
) -> impl Strategy<Value = (Arc<Field>, S::Value)> {
    models.prop_flat_map(move |m| (Just(m.clone()), f(&m)))
}
