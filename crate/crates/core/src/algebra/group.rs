//! The value group `Q^r` with the lexicographic order, together with the
//! absorbing element `∞ = v(0)` and order-preserving automorphisms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupVector<Q> {
    Finite(Vec<Q>),
    Infinity,
}

impl<Q: Scalar> GroupVector<Q> {
    pub fn zero(rank: usize) -> Self {
        GroupVector::Finite(vec![Q::zero(); rank])
    }

    pub fn from_coords(coords: Vec<Q>) -> Self {
        GroupVector::Finite(coords)
    }

    /// Rank-one shorthand.
    pub fn scalar(q: Q) -> Self {
        GroupVector::Finite(vec![q])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        GroupVector::Finite(coords.iter().map(|&c| Q::from_int(c)).collect())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GroupVector::Infinity)
    }

    pub fn coords(&self) -> Option<&[Q]> {
        match self {
            GroupVector::Finite(c) => Some(c),
            GroupVector::Infinity => None,
        }
    }

    pub fn rank(&self) -> Option<usize> {
        self.coords().map(<[Q]>::len)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GroupVector::Finite(c) => c.iter().all(Q::is_zero),
            GroupVector::Infinity => false,
        }
    }

    /// Strictly greater than zero in the lexicographic order (∞ counts).
    pub fn is_positive(&self) -> bool {
        match self {
            GroupVector::Finite(c) => c
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_positive()),
            GroupVector::Infinity => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            GroupVector::Finite(c) => c
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative()),
            GroupVector::Infinity => false,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (GroupVector::Finite(a), GroupVector::Finite(b)) => {
                if a.len() != b.len() {
                    return Err(Error::RankMismatch { left: a.len(), right: b.len() });
                }
                Ok(GroupVector::Finite(
                    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect(),
                ))
            }
            _ => Ok(GroupVector::Infinity),
        }
    }

    /// Integer multiple; `0·∞` is taken to be `∞`.
    pub fn scale(&self, k: &Q) -> Self {
        match self {
            GroupVector::Finite(c) => {
                GroupVector::Finite(c.iter().map(|x| x.clone() * k.clone()).collect())
            }
            GroupVector::Infinity => GroupVector::Infinity,
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&Q::from_int(k))
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

/// Lexicographic comparison; errors on two finite vectors of different rank.
pub fn lex_compare<Q: Scalar>(a: &GroupVector<Q>, b: &GroupVector<Q>) -> Result<Ordering> {
    if let (GroupVector::Finite(x), GroupVector::Finite(y)) = (a, b) {
        if x.len() != y.len() {
            return Err(Error::RankMismatch { left: x.len(), right: y.len() });
        }
    }
    Ok(a.cmp(b))
}

impl<Q: Scalar> PartialOrd for GroupVector<Q> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<Q: Scalar> Ord for GroupVector<Q> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GroupVector::Infinity, GroupVector::Infinity) => Ordering::Equal,
            (GroupVector::Infinity, _) => Ordering::Greater,
            (_, GroupVector::Infinity) => Ordering::Less,
            (GroupVector::Finite(a), GroupVector::Finite(b)) => a.cmp(b),
        }
    }
}

impl<Q: Scalar> Add for &GroupVector<Q> {
    type Output = GroupVector<Q>;

    fn add(self, rhs: Self) -> GroupVector<Q> {
        self.checked_add(rhs).expect("value group rank mismatch")
    }
}

impl<Q: Scalar> Add for GroupVector<Q> {
    type Output = GroupVector<Q>;

    fn add(self, rhs: Self) -> GroupVector<Q> {
        &self + &rhs
    }
}

impl<Q: Scalar> Neg for &GroupVector<Q> {
    type Output = GroupVector<Q>;

    fn neg(self) -> GroupVector<Q> {
        match self {
            GroupVector::Finite(c) => GroupVector::Finite(c.iter().map(|x| -x.clone()).collect()),
            GroupVector::Infinity => panic!("negation of the infinite element"),
        }
    }
}

impl<Q: Scalar> Sub for &GroupVector<Q> {
    type Output = GroupVector<Q>;

    fn sub(self, rhs: Self) -> GroupVector<Q> {
        match self {
            GroupVector::Infinity => GroupVector::Infinity,
            _ => self + &(-rhs),
        }
    }
}

impl<Q: Scalar> fmt::Display for GroupVector<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupVector::Infinity => write!(f, "inf"),
            GroupVector::Finite(c) if c.len() == 1 => write!(f, "{}", c[0]),
            GroupVector::Finite(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An automorphism of `(Q^r, +, <_lex)` acting on row vectors, `γ ↦ γ·M`,
/// for an upper triangular matrix `M` with strictly positive diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupAut<Q> {
    matrix: Vec<Vec<Q>>,
    inverse: Vec<Vec<Q>>,
}

impl<Q: Scalar> GroupAut<Q> {
    pub fn new(matrix: Vec<Vec<Q>>) -> Result<Self> {
        let r = matrix.len();
        if r == 0 {
            return Err(Error::InvalidAutomorphism("rank must be at least 1".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidAutomorphism(format!("row {i} has length {}", row.len())));
            }
            if !row[i].is_positive() {
                return Err(Error::InvalidAutomorphism(format!("diagonal entry {i} is not positive")));
            }
            if row[..i].iter().any(|x| !x.is_zero()) {
                return Err(Error::InvalidAutomorphism("matrix is not upper triangular".into()));
            }
        }
        let inverse = upper_triangular_inverse(&matrix);
        Ok(GroupAut { matrix, inverse })
    }

    pub fn identity(rank: usize) -> Self {
        let m: Vec<Vec<Q>> = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        GroupAut { matrix: m.clone(), inverse: m }
    }

    /// The rank-one automorphism `γ ↦ qγ`.
    pub fn multiplication(q: Q) -> Result<Self> {
        Self::new(vec![vec![q]])
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    pub fn inverse(&self) -> Self {
        GroupAut { matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    /// `self ∘ other`; under the row action its matrix is `other·self`.
    pub fn compose(&self, other: &Self) -> Self {
        GroupAut {
            matrix: mat_mul(&other.matrix, &self.matrix),
            inverse: mat_mul(&self.inverse, &other.inverse),
        }
    }

    /// `σ_Γ^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.rank());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn apply(&self, gamma: &GroupVector<Q>) -> Result<GroupVector<Q>> {
        match gamma {
            GroupVector::Infinity => Ok(GroupVector::Infinity),
            GroupVector::Finite(c) => {
                if c.len() != self.rank() {
                    return Err(Error::RankMismatch { left: self.rank(), right: c.len() });
                }
                Ok(GroupVector::Finite(vec_mat(c, &self.matrix)))
            }
        }
    }
}

/// `γ·M` (row vector times matrix); `∞ ↦ ∞`.
pub fn apply_group_aut<Q: Scalar>(m: &GroupAut<Q>, gamma: &GroupVector<Q>) -> Result<GroupVector<Q>> {
    m.apply(gamma)
}

/// `v·M`: coordinate `j` only sees coordinates `i ≤ j` when `M` is upper
/// triangular, which is what makes the action preserve the lex order.
fn vec_mat<Q: Scalar>(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    (0..m.len())
        .map(|j| v.iter().zip(m).fold(Q::zero(), |acc, (x, row)| acc + x.clone() * row[j].clone()))
        .collect()
}

fn mat_mul<Q: Scalar>(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(Q::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone()))
                .collect()
        })
        .collect()
}

fn upper_triangular_inverse<Q: Scalar>(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let r = m.len();
    let mut inv = vec![vec![Q::zero(); r]; r];
    // back substitution, one column of the identity at a time
    for col in 0..r {
        for i in (0..r).rev() {
            let mut s = if i == col { Q::one() } else { Q::zero() };
            for k in i + 1..r {
                s = s - m[i][k].clone() * inv[k][col].clone();
            }
            inv[i][col] = s / m[i][i].clone();
        }
    }
    inv
}
