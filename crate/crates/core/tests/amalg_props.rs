mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use tropdiff_core::amalg::{
    all_subfields, brute_force_amalgamation, decide_amalgamation, is_amalgamation_base, is_extension,
    reduce_valued_to_residue, AmalgProblem, AmalgVerdict, CycloDiffSubfield, ValueGroupData, ValuedAmalgProblem,
};

fn extensions_of(base: &CycloDiffSubfield) -> Vec<CycloDiffSubfield> {
    all_subfields(base.conductor()).into_iter().filter(|e| is_extension(e, base).unwrap()).collect()
}

/// A random problem inside `ℚ(ζₙ)` for `n ≤ 24`.
fn problem() -> impl Strategy<Value = AmalgProblem> {
    (1u32..=24)
        .prop_flat_map(|n| prop::sample::select(all_subfields(n)))
        .prop_flat_map(|base| {
            let exts = extensions_of(&base);
            (Just(base), prop::sample::select(exts.clone()), prop::sample::select(exts))
        })
        .prop_map(|(base, left, right)| AmalgProblem::new(base, left, right).unwrap())
}

fn value_group() -> impl Strategy<Value = ValueGroupData<Q>> {
    prop_oneof![
        prop::sample::select(&[(1i64, 1i64), (2, 1), (1, 2), (3, 1)][..])
            .prop_map(|(p, d)| ValueGroupData { rank: 1, sigma: vec![vec![q(p, d)]] }),
        (1i64..=3, -2i64..=2, 1i64..=3).prop_map(|(a, b, c)| ValueGroupData {
            rank: 2,
            sigma: vec![vec![q(a, 1), q(b, 1)], vec![Q::zero(), q(c, 1)]],
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn decision_matches_exhaustive_search(p in problem()) {
        let verdict = decide_amalgamation(&p).unwrap();
        let brute = brute_force_amalgamation(&p).unwrap();
        prop_assert_eq!(verdict.is_solvable(), brute.is_some());
        if let AmalgVerdict::Solvable { witness } = &verdict {
            prop_assert!(is_extension(witness, &p.left).unwrap());
            prop_assert!(is_extension(witness, &p.right).unwrap());
        }
    }

    #[test]
    fn decision_is_symmetric(p in problem()) {
        prop_assert_eq!(
            decide_amalgamation(&p).unwrap().is_solvable(),
            decide_amalgamation(&p.swapped()).unwrap().is_solvable()
        );
    }

    /// Shrinking one side towards the base keeps a solvable problem solvable.
    #[test]
    fn solvability_is_monotone(p in problem(), pick in any::<prop::sample::Index>()) {
        prop_assume!(decide_amalgamation(&p).unwrap().is_solvable());
        let between: Vec<CycloDiffSubfield> =
            extensions_of(&p.base).into_iter().filter(|m| is_extension(&p.left, m).unwrap()).collect();
        let smaller = pick.get(&between).clone();
        let q = AmalgProblem::new(p.base.clone(), smaller, p.right.clone()).unwrap();
        prop_assert!(decide_amalgamation(&q).unwrap().is_solvable());
    }

    /// A side equal to the base is always absorbed by the other side.
    #[test]
    fn trivial_side_always_amalgamates(p in problem()) {
        let q = AmalgProblem::new(p.base.clone(), p.base.clone(), p.right.clone()).unwrap();
        prop_assert!(decide_amalgamation(&q).unwrap().is_solvable());
        prop_assert!(decide_amalgamation(&q.swapped()).unwrap().is_solvable());
    }

    #[test]
    fn valued_verdict_ignores_value_groups(
        p in problem(),
        groups in prop::collection::vec(value_group(), 3),
        extra in prop::collection::vec(value_group(), 2),
    ) {
        // a rank one base keeps every side at least as large
        let base_group = if groups[0].rank == 1 {
            groups[0].clone()
        } else {
            ValueGroupData { rank: 1, sigma: vec![vec![Q::one()]] }
        };
        let make = |l: &ValueGroupData<Q>, r: &ValueGroupData<Q>| ValuedAmalgProblem {
            base: (p.base.clone(), base_group.clone()),
            left: (p.left.clone(), l.clone()),
            right: (p.right.clone(), r.clone()),
        };
        let one = make(&groups[1], &groups[2]);
        let other = make(&extra[0], &extra[1]);
        let expected = decide_amalgamation(&p).unwrap().is_solvable();
        for valued in [one, other] {
            let residue = reduce_valued_to_residue(&valued).unwrap();
            prop_assert_eq!(decide_amalgamation(&residue).unwrap().is_solvable(), expected);
        }
    }
}

#[test]
fn base_certificates_do_not_amalgamate() {
    for n in 1..=16 {
        for x in all_subfields(n) {
            let report = is_amalgamation_base(&x).unwrap();
            match &report.certificate {
                Some((l, r)) => {
                    assert!(!report.is_base);
                    let p = AmalgProblem::new(x.clone(), l.clone(), r.clone()).unwrap();
                    assert!(brute_force_amalgamation(&p).unwrap().is_none());
                }
                None => assert!(report.is_base),
            }
        }
    }
}
