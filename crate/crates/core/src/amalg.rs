//! Amalgamation of difference subfields of one cyclotomic ambient `ℚ(ζₙ)`.
//!
//! By Galois correspondence a subfield is the fixed field of a subgroup
//! `H ⊆ (ℤ/n)^×`, and an automorphism of it is a coset `bH` (the restriction
//! of `ζ ↦ ζᵇ`). `(H', b'H')` extends `(H, bH)` iff `H' ⊆ H` and `b' ∈ bH`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::algebra::GroupAut;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Units of `ℤ/n`, sorted.
pub fn units(n: u32) -> Vec<u32> {
    if n <= 1 {
        return vec![0];
    }
    (1..n).filter(|k| k.gcd(&n) == 1).collect()
}

fn mul_mod(a: u32, b: u32, n: u32) -> u32 {
    ((u64::from(a) * u64::from(b)) % u64::from(n)) as u32
}

/// Subgroup generated by `gens` in `(ℤ/n)^×`.
fn closure(n: u32, gens: impl IntoIterator<Item = u32>) -> BTreeSet<u32> {
    let one = 1 % n;
    let mut set: BTreeSet<u32> = BTreeSet::from([one]);
    let gens: Vec<u32> = gens.into_iter().collect();
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = mul_mod(x, g, n);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Every subgroup of `(ℤ/n)^×`, built by adjoining one unit at a time.
pub fn all_subgroups(n: u32) -> Vec<Vec<u32>> {
    let us = units(n);
    let mut seen: BTreeSet<BTreeSet<u32>> = BTreeSet::from([closure(n, [])]);
    let mut queue: Vec<BTreeSet<u32>> = seen.iter().cloned().collect();
    while let Some(h) = queue.pop() {
        for &g in &us {
            if h.contains(&g) {
                continue;
            }
            let bigger = closure(n, h.iter().copied().chain([g]));
            if seen.insert(bigger.clone()) {
                queue.push(bigger);
            }
        }
    }
    seen.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// A difference subfield of `ℚ(ζₙ)`: fixed field of `h` with automorphism `b·h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloDiffSubfield {
    n: u32,
    h: Vec<u32>,
    b: u32,
}

impl CycloDiffSubfield {
    /// Validates that `h` is a subgroup of units and `b` a unit; `b` is
    /// replaced by the least element of `b·h`.
    pub fn new(n: u32, h: &[u32], b: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidField("conductor must be positive".into()));
        }
        let reduce = |x: i64| x.rem_euclid(i64::from(n)) as u32;
        let set: BTreeSet<u32> = h.iter().map(|&x| reduce(i64::from(x))).collect();
        let is_unit = |x: u32| n == 1 || x.gcd(&n) == 1;
        if let Some(&bad) = set.iter().find(|&&x| !is_unit(x)) {
            return Err(Error::InvalidSubgroup(format!("{bad} is not a unit mod {n}")));
        }
        if !set.contains(&(1 % n)) {
            return Err(Error::InvalidSubgroup("missing the identity".into()));
        }
        for &x in &set {
            for &y in &set {
                if !set.contains(&mul_mod(x, y, n)) {
                    return Err(Error::InvalidSubgroup(format!("not closed: {x}·{y} = {}", mul_mod(x, y, n))));
                }
            }
        }
        let b = reduce(b);
        if !is_unit(b) {
            return Err(Error::InvalidSubgroup(format!("automorphism exponent {b} is not a unit mod {n}")));
        }
        let h: Vec<u32> = set.into_iter().collect();
        let least = h.iter().map(|&x| mul_mod(b, x, n)).min().expect("nonempty");
        Ok(CycloDiffSubfield { n, h, b: least })
    }

    /// `ℚ` with the identity.
    pub fn rationals(n: u32) -> Result<Self> {
        Self::new(n, &units(n), 1)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn subgroup(&self) -> &[u32] {
        &self.h
    }

    pub fn sigma_representative(&self) -> u32 {
        self.b
    }

    /// `b·H`.
    pub fn sigma_coset(&self) -> BTreeSet<u32> {
        self.h.iter().map(|&x| mul_mod(self.b, x, self.n)).collect()
    }

    /// `[ℚ(ζₙ)^H : ℚ] = φ(n) / |H|`.
    pub fn degree(&self) -> usize {
        units(self.n).len() / self.h.len()
    }
}

impl fmt::Display for CycloDiffSubfield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.h.iter().map(ToString::to_string).collect();
        write!(f, "(n={}, H={{{}}}, b={})", self.n, h.join(","), self.b)
    }
}

fn same_ambient(a: &CycloDiffSubfield, b: &CycloDiffSubfield) -> Result<()> {
    if a.n == b.n {
        Ok(())
    } else {
        Err(Error::AmbientMismatch(a.n, b.n))
    }
}

/// `big` is a difference field extension of `small`.
pub fn is_extension(big: &CycloDiffSubfield, small: &CycloDiffSubfield) -> Result<bool> {
    same_ambient(big, small)?;
    let sub = big.h.iter().all(|x| small.h.binary_search(x).is_ok());
    Ok(sub && small.sigma_coset().contains(&big.b))
}

/// Two extensions `left`, `right` of a common `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgProblem {
    pub base: CycloDiffSubfield,
    pub left: CycloDiffSubfield,
    pub right: CycloDiffSubfield,
}

impl AmalgProblem {
    pub fn new(base: CycloDiffSubfield, left: CycloDiffSubfield, right: CycloDiffSubfield) -> Result<Self> {
        for (name, side) in [("left", &left), ("right", &right)] {
            if !is_extension(side, &base)? {
                return Err(Error::MalformedProblem(format!("{name} {side} does not extend the base {base}")));
            }
        }
        Ok(AmalgProblem { base, left, right })
    }

    pub fn swapped(&self) -> Self {
        AmalgProblem { base: self.base.clone(), left: self.right.clone(), right: self.left.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmalgVerdict {
    /// A common extension of both sides inside the ambient.
    Solvable { witness: CycloDiffSubfield },
    Unsolvable,
}

impl AmalgVerdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self, AmalgVerdict::Solvable { .. })
    }
}

/// Solvable iff `b_L·H_L ∩ b_R·H_R ≠ ∅`; the witness is the compositum
/// `H_L ∩ H_R` with the least element of the intersection.
pub fn decide_amalgamation(p: &AmalgProblem) -> Result<AmalgVerdict> {
    same_ambient(&p.left, &p.right)?;
    let common = p.left.sigma_coset().intersection(&p.right.sigma_coset()).next().copied();
    let Some(b3) = common else {
        return Ok(AmalgVerdict::Unsolvable);
    };
    let h3: Vec<u32> = p.left.h.iter().filter(|x| p.right.h.binary_search(x).is_ok()).copied().collect();
    let witness = CycloDiffSubfield::new(p.left.n, &h3, i64::from(b3))?;
    debug_assert!(is_extension(&witness, &p.left)? && is_extension(&witness, &p.right)?);
    Ok(AmalgVerdict::Solvable { witness })
}

/// Every difference subfield of `ℚ(ζₙ)`.
pub fn all_subfields(n: u32) -> Vec<CycloDiffSubfield> {
    let mut out = BTreeSet::new();
    for h in all_subgroups(n) {
        for b in units(n) {
            out.insert(CycloDiffSubfield::new(n, &h, i64::from(b)).expect("enumerated subgroup"));
        }
    }
    out.into_iter().collect()
}

/// Exhaustive search for a common extension over every subfield of the ambient.
pub fn brute_force_amalgamation(p: &AmalgProblem) -> Result<Option<CycloDiffSubfield>> {
    same_ambient(&p.left, &p.right)?;
    for cand in all_subfields(p.left.n) {
        if is_extension(&cand, &p.left)? && is_extension(&cand, &p.right)? {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// Whether every pair of extensions of a subfield amalgamates. Only
/// extensions inside the ambient `ℚ(ζₙ)` are considered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseReport {
    pub is_base: bool,
    /// A non-amalgamating pair of extensions when `is_base` is false.
    pub certificate: Option<(CycloDiffSubfield, CycloDiffSubfield)>,
    pub extensions_checked: usize,
}

impl BaseReport {
    pub const QUALIFIER: &'static str = "ambient-relative";
}

pub fn is_amalgamation_base(x: &CycloDiffSubfield) -> Result<BaseReport> {
    let exts: Vec<CycloDiffSubfield> = all_subfields(x.n)
        .into_iter()
        .filter(|e| is_extension(e, x).expect("same ambient"))
        .collect();
    for (i, l) in exts.iter().enumerate() {
        for r in &exts[i + 1..] {
            let p = AmalgProblem { base: x.clone(), left: l.clone(), right: r.clone() };
            if !decide_amalgamation(&p)?.is_solvable() {
                return Ok(BaseReport {
                    is_base: false,
                    certificate: Some((l.clone(), r.clone())),
                    extensions_checked: exts.len(),
                });
            }
        }
    }
    Ok(BaseReport { is_base: true, certificate: None, extensions_checked: exts.len() })
}

/// Value difference group data of one side: rank and the matrix of `σ_Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueGroupData<Q> {
    pub rank: usize,
    pub sigma: Vec<Vec<Q>>,
}

/// An amalgamation problem of ac-valued difference fields, described by its
/// residue difference fields and value difference groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedAmalgProblem<Q> {
    pub base: (CycloDiffSubfield, ValueGroupData<Q>),
    pub left: (CycloDiffSubfield, ValueGroupData<Q>),
    pub right: (CycloDiffSubfield, ValueGroupData<Q>),
}

/// Projects to the residue problem after validating the value-group data.
/// Value difference groups always amalgamate, so they never affect the verdict.
pub fn reduce_valued_to_residue<Q: Scalar>(p: &ValuedAmalgProblem<Q>) -> Result<AmalgProblem> {
    for (name, (_, vg)) in [("base", &p.base), ("left", &p.left), ("right", &p.right)] {
        if vg.sigma.len() != vg.rank {
            return Err(Error::MalformedProblem(format!("{name}: σ_Γ matrix is not {0}×{0}", vg.rank)));
        }
        GroupAut::new(vg.sigma.clone()).map_err(|e| Error::MalformedProblem(format!("{name}: {e}")))?;
    }
    for (name, (_, vg)) in [("left", &p.left), ("right", &p.right)] {
        if vg.rank < p.base.1.rank {
            return Err(Error::MalformedProblem(format!("{name} value group has smaller rank than the base")));
        }
    }
    AmalgProblem::new(p.base.0.clone(), p.left.0.clone(), p.right.0.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn sub(n: u32, h: &[u32], b: i64) -> CycloDiffSubfield {
        CycloDiffSubfield::new(n, h, b).unwrap()
    }

    #[test]
    fn subgroup_enumeration() {
        assert_eq!(units(8), vec![1, 3, 5, 7]);
        assert_eq!(all_subgroups(8).len(), 5);
        assert_eq!(all_subgroups(5).len(), 3);
        assert_eq!(all_subgroups(1), vec![vec![0]]);
    }

    #[test]
    fn validation() {
        assert!(matches!(CycloDiffSubfield::new(8, &[1, 3, 5], 1), Err(Error::InvalidSubgroup(_))));
        assert!(matches!(CycloDiffSubfield::new(8, &[1, 2], 1), Err(Error::InvalidSubgroup(_))));
        assert_eq!(sub(5, &[1, 4], 3).sigma_representative(), 2);
    }

    #[test]
    fn extensions() {
        let q = sub(4, &[1, 3], 1);
        assert!(is_extension(&sub(4, &[1], 1), &q).unwrap());
        assert!(is_extension(&sub(4, &[1], 3), &q).unwrap());
        assert!(is_extension(&q, &q).unwrap());
        assert_eq!(is_extension(&q, &sub(5, &[1], 1)), Err(Error::AmbientMismatch(4, 5)));
    }

    #[test]
    fn gaussian_pair_does_not_amalgamate() {
        let p = AmalgProblem::new(sub(4, &[1, 3], 1), sub(4, &[1], 1), sub(4, &[1], 3)).unwrap();
        assert_eq!(decide_amalgamation(&p).unwrap(), AmalgVerdict::Unsolvable);
        assert_eq!(brute_force_amalgamation(&p).unwrap(), None);
    }

    #[test]
    fn quintic_pair_amalgamates() {
        let p = AmalgProblem::new(CycloDiffSubfield::rationals(5).unwrap(), sub(5, &[1], 2), sub(5, &[1, 4], 2))
            .unwrap();
        assert_eq!(decide_amalgamation(&p).unwrap(), AmalgVerdict::Solvable { witness: sub(5, &[1], 2) });
    }

    #[test]
    fn amalgamation_bases() {
        let report = is_amalgamation_base(&sub(4, &[1, 3], 1)).unwrap();
        assert!(!report.is_base);
        assert_eq!(report.certificate, Some((sub(4, &[1], 1), sub(4, &[1], 3))));
        assert!(is_amalgamation_base(&sub(4, &[1], 1)).unwrap().is_base);
        // Q(i) inside Q(ζ₈): ζ ↦ ζ and ζ ↦ ζ⁵ both fix i
        let report = is_amalgamation_base(&sub(8, &[1, 5], 1)).unwrap();
        assert!(!report.is_base);
        assert_eq!(report.certificate, Some((sub(8, &[1], 1), sub(8, &[1], 5))));
    }

    #[test]
    fn valued_reduction_validates_value_groups() {
        let q = BigRational::from_int;
        let vg = |r: usize| ValueGroupData {
            rank: r,
            sigma: (0..r).map(|i| (0..r).map(|j| q(i64::from(i == j))).collect()).collect(),
        };
        let p = ValuedAmalgProblem {
            base: (sub(4, &[1, 3], 1), vg(1)),
            left: (sub(4, &[1], 1), vg(1)),
            right: (sub(4, &[1], 3), vg(2)),
        };
        let residue = reduce_valued_to_residue(&p).unwrap();
        assert_eq!(decide_amalgamation(&residue).unwrap(), AmalgVerdict::Unsolvable);
        let bad = ValuedAmalgProblem { left: (sub(4, &[1], 1), vg(0)), ..p.clone() };
        assert!(matches!(reduce_valued_to_residue(&bad), Err(Error::MalformedProblem(_))));
        let singular = ValuedAmalgProblem {
            left: (sub(4, &[1], 1), ValueGroupData { rank: 1, sigma: vec![vec![q(0)]] }),
            ..p
        };
        assert!(matches!(reduce_valued_to_residue(&singular), Err(Error::MalformedProblem(_))));
    }
}
