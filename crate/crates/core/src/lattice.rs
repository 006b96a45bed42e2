//! Integer lattices in `ℤᴺ`: Hermite normal form, saturation, and the
//! exponent data of monomial maps between tori.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Row-style Hermite normal form with its transform: `u · rows = h`, `u`
/// unimodular, `h` in echelon form with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`. Zero rows of `h` come last.
pub fn hnf_with_transform(rows: &[Vec<BigInt>], dim: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = rows.len();
    let mut h: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    fn axpy(target: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
        let (a, b) = if dst < src {
            let (lo, hi) = target.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = target.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x -= k * y;
        }
    }

    let mut r = 0;
    for c in 0..dim {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below row r
            let Some(p) = (r..m).filter(|&i| !h[i][c].is_zero()).min_by(|&a, &b| h[a][c].abs().cmp(&h[b][c].abs()))
            else {
                break;
            };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if !h[i][c].is_zero() {
                    let q = h[i][c].div_floor(&h[r][c]);
                    axpy(&mut h, i, r, &q);
                    axpy(&mut u, i, r, &q);
                    if !h[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                axpy(&mut h, i, r, &q);
                axpy(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn to_small(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Precondition("lattice entry exceeds 64 bits".into())))
                .collect()
        })
        .collect()
}

fn transpose(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    (0..cols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Basis of `{x ∈ ℤᴺ : rows · x = 0}`; primitive by construction.
fn integer_kernel(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let t = transpose(rows, dim);
    let (h, u) = hnf_with_transform(&t, rows.len());
    h.iter().zip(u).filter(|(row, _)| row.iter().all(Zero::is_zero)).map(|(_, k)| k).collect()
}

/// Fraction-free determinant of a square matrix.
pub(crate) fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// A sublattice of `ℤᴺ`, stored by its canonical HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
}

impl IntLattice {
    /// Lattice spanned by `rows` (any generating set).
    pub fn new(dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        let (h, _) = hnf_with_transform(&to_big(rows), dim);
        let basis: Vec<Vec<BigInt>> = h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        Ok(IntLattice { dim, basis: to_small(&basis)? })
    }

    /// Lattice spanned by nonempty rows of equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.first().ok_or(Error::EmptyMatrix)?.len();
        Self::new(dim, rows)
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        IntLattice { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    fn big_basis(&self) -> Vec<Vec<BigInt>> {
        to_big(&self.basis)
    }

    /// Coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let mut rest: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for row in self.big_basis() {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let (q, r) = rest[pivot].div_rem(&row[pivot]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(&row) {
                *x -= &q * y;
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.dim == other.dim && self.basis.iter().all(|r| other.contains(r))
    }

    /// `[other : self]` when `self ⊆ other` with equal rank.
    pub fn index_in(&self, other: &IntLattice) -> Option<BigInt> {
        if self.rank() != other.rank() || !self.is_sublattice_of(other) {
            return None;
        }
        let m: Vec<Vec<BigInt>> = self.basis.iter().map(|r| other.coordinates(r).expect("contained")).collect();
        Some(determinant(&m).abs())
    }

    /// `(L ⊗ ℚ) ∩ ℤᴺ`: the least primitive lattice of the same rank containing `L`.
    pub fn saturate(&self) -> IntLattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let kernel = integer_kernel(&self.big_basis(), self.dim);
        if kernel.is_empty() {
            return IntLattice::full(self.dim);
        }
        let back = integer_kernel(&kernel, self.dim);
        let (h, _) = hnf_with_transform(&back, self.dim);
        let basis: Vec<Vec<BigInt>> = h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        IntLattice { dim: self.dim, basis: to_small(&basis).expect("saturation entries are bounded by the input") }
    }

    /// `ℤᴺ / L` torsion-free.
    pub fn is_primitive(&self) -> bool {
        self.saturate() == *self
    }
}

impl fmt::Display for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| format!("({})", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", rows.join(", "))
    }
}

/// Exponents of the monomial map `ξ` whose kernel is the identity component
/// of `ker ψ`, where `ψ` has exponent rows `psi`: a basis of the saturation.
pub fn connected_component_map(psi: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    Ok(IntLattice::from_rows(psi)?.saturate().basis().to_vec())
}
