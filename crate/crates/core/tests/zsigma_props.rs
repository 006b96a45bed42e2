mod common;

use std::sync::Arc;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use tropdiff_core::lattice::{connected_component_map, IntLattice};
use tropdiff_core::zsigma::{check_orbit_membership, matrix_to_coset, purity_transfer, ZSigmaMatrix, ZSigmaPoly};
use tropdiff_core::{Field, Series};

/// σ-powers in `lo..=hi`, coefficients in `-2..=2`.
fn zpoly(lo: i64, hi: i64) -> impl Strategy<Value = ZSigmaPoly> {
    prop::collection::vec((lo..=hi, -2i64..=2), 0..=3).prop_map(ZSigmaPoly::new)
}

/// Entries with nonnegative coefficients, so exact inputs never need inverses.
fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ZSigmaMatrix> {
    let entry = prop::collection::vec((-1i64..=2, 0i64..=2), 0..=3).prop_map(ZSigmaPoly::new);
    prop::collection::vec(prop::collection::vec(entry, cols), rows).prop_map(|rows| ZSigmaMatrix::new(rows).unwrap())
}

/// Exact unit `c·(1 + small)` with `c ≠ 0`.
fn unit(ctx: &Arc<Field>) -> impl Strategy<Value = Series> {
    (nonzero_element(ctx.field()), one_plus_small(ctx)).prop_map(|(c, s)| s.scale(&c))
}

fn monomial(ctx: &Arc<Field>) -> impl Strategy<Value = Series> {
    let c = ctx.clone();
    (nonzero_element(ctx.field()), group_vector(ctx.rank())).prop_map(move |(a, v)| Series::monomial(&c, a, v).unwrap())
}

/// `Π_h σʰ(z)^{m_h}`, written out independently of the library's action.
fn act_by_hand(p: &ZSigmaPoly, z: &Series) -> Series {
    let mut acc = Series::one(z.ctx());
    for (&h, &m) in p.coefficients() {
        let base = z.sigma(h);
        let base = if m < 0 { base.inv().unwrap() } else { base };
        for _ in 0..m.abs() {
            acc = acc.try_mul(&base).unwrap();
        }
    }
    acc
}

fn apply_by_hand(a: &ZSigmaMatrix, z: &[Series]) -> Vec<Series> {
    a.rows()
        .iter()
        .map(|row| row.iter().zip(z).fold(Series::one(z[0].ctx()), |acc, (p, zj)| acc.try_mul(&act_by_hand(p, zj)).unwrap()))
        .collect()
}

fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    // fraction-free Bareiss elimination
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n).flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
        s.push(last);
        s
    })).collect()
}

/// gcd of the maximal minors of a full-rank basis: the index of the lattice
/// in its saturation.
fn minor_gcd(basis: &[Vec<i64>]) -> BigInt {
    let k = basis.len();
    let n = basis.first().map_or(0, Vec::len);
    subsets(n, k).into_iter().fold(BigInt::zero(), |acc, cols| {
        let m = basis.iter().map(|r| cols.iter().map(|&c| BigInt::from(r[c])).collect()).collect();
        acc.gcd(&det(m))
    })
}

fn lattice_rows() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(-6i64..=6, n), 1..=n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn module_laws(
        (_, (p, r, z, w)) in with_model(prop_oneof![models(), rank2_models()], |m| {
            (zpoly(-2, 2), zpoly(-2, 2), monomial(m), truncated_series(m, 2))
        })
    ) {
        let sum = &p + &r;
        prop_assert_eq!(sum.act(&z).unwrap(), p.act(&z).unwrap().try_mul(&r.act(&z).unwrap()).unwrap());
        prop_assert_eq!((&p * &r).act(&z).unwrap(), p.act(&r.act(&z).unwrap()).unwrap());
        prop_assert_eq!(ZSigmaPoly::constant(1).act(&w).unwrap(), w.clone());
        let zw = z.try_mul(&w).unwrap();
        let lhs = p.act(&zw).unwrap();
        let rhs = p.act(&z).unwrap().try_mul(&p.act(&w).unwrap()).unwrap();
        prop_assert!(lhs.eq_up_to_precision(&rhs).unwrap());
        prop_assert!(p.act(&w).unwrap().eq_up_to_precision(&act_by_hand(&p, &w)).unwrap());
    }

    /// For solutions and for perturbed right-hand sides the direct and the
    /// coset verdicts coincide.
    #[test]
    fn coset_membership_matches_direct_check(
        (ctx, (a, z, noise, perturb)) in with_model(models(), |m| {
            let m = m.clone();
            (1usize..=2, 1usize..=2).prop_flat_map(move |(r, c)| {
                (matrix(r, c), prop::collection::vec(unit(&m), c), one_plus_small(&m), any::<bool>())
            })
        })
    ) {
        let b = apply_by_hand(&a, &z);
        let b = if perturb {
            let mut b = b;
            b[0] = b[0].try_mul(&noise).unwrap();
            b
        } else {
            b
        };
        let mc = matrix_to_coset(&a, &b).unwrap();
        let (direct, via) = check_orbit_membership(&mc, &a, &b, &z).unwrap();
        prop_assert_eq!(direct, via);
        if !perturb {
            prop_assert!(direct);
        } else if !noise.try_sub(&Series::one(&ctx)).unwrap().is_zero() {
            prop_assert!(!direct);
        }
    }

    /// Entries divisible by `q − σ` kill the valuation when `σ_Γ = q`, so
    /// `A·z` is a unit for any monomial times unit `z`.
    #[test]
    fn purity_transfer_produces_units(
        (ctx, (factors, z_units, shifts)) in with_model(prop_oneof![Just(pc()), Just(iso())], |m| {
            (
                prop::collection::vec(prop::collection::vec(zpoly(0, 1), 2), 1..=2),
                prop::collection::vec(unit(m).prop_map(|u| u.with_precision(g(6, 1))), 2),
                prop::collection::vec(group_vector(1), 2),
            )
        })
    ) {
        let q_val = if ctx.is_isometric() { 1 } else { 2 };
        let killer = ZSigmaPoly::new([(0, q_val), (1, -1)]);
        let a = ZSigmaMatrix::new(factors.iter().map(|row| row.iter().map(|p| p * &killer).collect()).collect()).unwrap();
        let z: Vec<Series> =
            z_units.iter().zip(&shifts).map(|(u, s)| u.try_mul(&Series::section(&ctx, s).unwrap()).unwrap()).collect();
        let b = apply_by_hand(&a, &z);
        for bi in &b {
            prop_assert!(bi.valuation().unwrap().is_zero());
        }
        let u = purity_transfer(&a, &b, &z).unwrap();
        for uj in &u {
            prop_assert!(uj.valuation().unwrap().is_zero());
        }
        for (x, y) in apply_by_hand(&a, &u).iter().zip(&b) {
            prop_assert!(x.eq_up_to_precision(y).unwrap());
        }
    }

    #[test]
    fn saturation_matches_minor_oracle((n, rows) in lattice_rows()) {
        let l = IntLattice::new(n, &rows).unwrap();
        let s = l.saturate();
        prop_assert_eq!(s.saturate(), s.clone());
        prop_assert_eq!(s.rank(), l.rank());
        prop_assert!(l.is_sublattice_of(&s));
        if l.rank() > 0 {
            let index = l.index_in(&s).unwrap();
            prop_assert_eq!(&index, &minor_gcd(l.basis()).abs());
            prop_assert_eq!(minor_gcd(s.basis()).abs(), BigInt::one());
            prop_assert_eq!(l.is_primitive(), index.is_one());
        }
    }

    #[test]
    fn connected_component_map_is_primitive((n, rows) in lattice_rows()) {
        let map = connected_component_map(&rows).unwrap();
        let l = IntLattice::new(n, &rows).unwrap();
        let image = IntLattice::new(n, &map).unwrap();
        prop_assert!(image.is_primitive());
        prop_assert!(l.is_sublattice_of(&image));
        prop_assert!(l.index_in(&image).is_some());
    }
}

#[test]
fn documented_coset_example() {
    let ctx = pc();
    let one_minus = |h| ZSigmaPoly::new([(0, 1), (h, -1)]);
    let a = ZSigmaMatrix::new(vec![vec![one_minus(1)], vec![one_minus(2)]]).unwrap();
    let b = vec![Series::one(&ctx), Series::one(&ctx)];
    let mc = matrix_to_coset(&a, &b).unwrap();
    assert_eq!(mc.ell, 2);
    assert_eq!(mc.flattened(0), vec![1, -1, 0]);
    assert_eq!(mc.flattened(1), vec![1, 0, -1]);
}
