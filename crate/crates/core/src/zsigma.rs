//! The `ℤ[σ, σ⁻¹]`-module structure of `K^×`: `(Σ m_h σʰ)·z = Π σʰ(z)^{m_h}`,
//! systems `A·z = b` as binomial cosets on σ-orbits, and the transfer of
//! solutions to units.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hahn::{HahnSeries, Model};
use crate::scalar::Scalar;
use crate::tropical::BinomialCoset;

/// `Σ m_h σʰ` with finitely many nonzero integer `m_h`, `h ∈ ℤ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZSigmaPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl ZSigmaPoly {
    pub fn new(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (h, m) in terms {
            *coeffs.entry(h).or_insert(0) += m;
        }
        coeffs.retain(|_, m| *m != 0);
        ZSigmaPoly { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(m: i64) -> Self {
        Self::new([(0, m)])
    }

    /// `σʰ`.
    pub fn sigma_power(h: i64) -> Self {
        Self::new([(h, 1)])
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, i64> {
        &self.coeffs
    }

    pub fn coefficient(&self, h: i64) -> i64 {
        self.coeffs.get(&h).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_power(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `σᵐ · p`.
    pub fn shift(&self, m: i64) -> Self {
        ZSigmaPoly { coeffs: self.coeffs.iter().map(|(&h, &c)| (h + m, c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| &acc * self)
    }

    /// `p · z = Π σʰ(z)^{m_h}`.
    pub fn act<Q: Scalar>(&self, z: &HahnSeries<Q>) -> Result<HahnSeries<Q>> {
        if z.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut acc = HahnSeries::one(z.ctx());
        for (&h, &m) in &self.coeffs {
            acc = acc.try_mul(&z.sigma(h).pow(m)?)?;
        }
        Ok(acc)
    }
}

/// See [`ZSigmaPoly::act`].
pub fn module_action<Q: Scalar>(p: &ZSigmaPoly, z: &HahnSeries<Q>) -> Result<HahnSeries<Q>> {
    p.act(z)
}

impl Add for &ZSigmaPoly {
    type Output = ZSigmaPoly;
    fn add(self, rhs: &ZSigmaPoly) -> ZSigmaPoly {
        ZSigmaPoly::new(self.coeffs.iter().chain(&rhs.coeffs).map(|(&h, &m)| (h, m)))
    }
}

impl Neg for &ZSigmaPoly {
    type Output = ZSigmaPoly;
    fn neg(self) -> ZSigmaPoly {
        ZSigmaPoly { coeffs: self.coeffs.iter().map(|(&h, &m)| (h, -m)).collect() }
    }
}

impl Sub for &ZSigmaPoly {
    type Output = ZSigmaPoly;
    fn sub(self, rhs: &ZSigmaPoly) -> ZSigmaPoly {
        self + &-rhs
    }
}

impl Mul for &ZSigmaPoly {
    type Output = ZSigmaPoly;
    fn mul(self, rhs: &ZSigmaPoly) -> ZSigmaPoly {
        ZSigmaPoly::new(
            self.coeffs.iter().flat_map(|(&h1, &m1)| rhs.coeffs.iter().map(move |(&h2, &m2)| (h1 + h2, m1 * m2))),
        )
    }
}

impl fmt::Display for ZSigmaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (n, (&h, &m)) in self.coeffs.iter().enumerate() {
            let mag = m.unsigned_abs();
            if n == 0 {
                if m < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if m < 0 { " - " } else { " + " });
            }
            let sym = match h {
                0 => String::new(),
                1 => "s".to_string(),
                _ => format!("s^{h}"),
            };
            match (sym.is_empty(), mag) {
                (true, _) => out.push_str(&mag.to_string()),
                (false, 1) => out.push_str(&sym),
                (false, _) => out.push_str(&format!("{mag}*{sym}")),
            }
        }
        f.write_str(&out)
    }
}

/// A `d × n` matrix over `ℤ[σ, σ⁻¹]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZSigmaMatrix {
    rows: Vec<Vec<ZSigmaPoly>>,
}

impl ZSigmaMatrix {
    pub fn new(rows: Vec<Vec<ZSigmaPoly>>) -> Result<Self> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(ZSigmaMatrix { rows })
    }

    pub fn rows(&self) -> &[Vec<ZSigmaPoly>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    /// `(A·z)ᵢ = Π_j A_ij · z_j`.
    pub fn apply<Q: Scalar>(&self, z: &[HahnSeries<Q>]) -> Result<Vec<HahnSeries<Q>>> {
        if z.len() != self.ncols() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), found: z.len() });
        }
        let ctx = z[0].ctx();
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(z).try_fold(HahnSeries::one(ctx), |acc, (p, zj)| {
                    if p.is_zero() {
                        Ok(acc)
                    } else {
                        acc.try_mul(&p.act(zj)?)
                    }
                })
            })
            .collect()
    }
}

impl fmt::Display for ZSigmaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `A·z = b` recast as the coset `orb_{0,ℓ}(z) ∈ coset`, where
/// `orb_{0,ℓ}(z) = (σʰ(z_j))` is flattened at index `j·(ℓ+1) + h`.
#[derive(Clone, Debug)]
pub struct MatrixCoset<Q> {
    /// Largest σ-power after normalization.
    pub ell: usize,
    /// Row `i` was multiplied by `σ^{shifts[i]}` to clear negative powers.
    pub shifts: Vec<i64>,
    /// `c[i][j][h]`: coefficient of `σʰ` in the normalized entry `(i, j)`.
    pub c: Vec<Vec<Vec<i64>>>,
    pub coset: BinomialCoset<Q>,
}

impl<Q> MatrixCoset<Q> {
    /// Row `i` of the coset: `c[i]` flattened.
    pub fn flattened(&self, i: usize) -> Vec<i64> {
        self.c[i].iter().flatten().copied().collect()
    }
}

fn check_units<Q: Scalar>(b: &[HahnSeries<Q>]) -> Result<()> {
    for (index, bi) in b.iter().enumerate() {
        let v = bi
            .valuation()
            .map_err(|_| Error::IndeterminateAtPrecision(format!("target {index} is O({})", bi.precision())))?;
        if !v.is_zero() {
            return Err(Error::NonUnitTarget { index });
        }
    }
    Ok(())
}

pub fn matrix_to_coset<Q: Scalar>(a: &ZSigmaMatrix, b: &[HahnSeries<Q>]) -> Result<MatrixCoset<Q>> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: b.len() });
    }
    check_units(b)?;
    let ctx: &Arc<Model<Q>> = b[0].ctx();
    let shifts: Vec<i64> = a
        .rows()
        .iter()
        .map(|row| row.iter().filter_map(ZSigmaPoly::min_power).min().map_or(0, |m| (-m).max(0)))
        .collect();
    let normalized: Vec<Vec<ZSigmaPoly>> =
        a.rows().iter().zip(&shifts).map(|(row, &m)| row.iter().map(|p| p.shift(m)).collect()).collect();
    let ell = normalized.iter().flatten().filter_map(ZSigmaPoly::max_power).max().unwrap_or(0).max(0) as usize;
    let c: Vec<Vec<Vec<i64>>> = normalized
        .iter()
        .map(|row| row.iter().map(|p| (0..=ell as i64).map(|h| p.coefficient(h)).collect()).collect())
        .collect();
    let generators = c.iter().map(|ci| ci.iter().flatten().copied().collect()).collect();
    let targets = b.iter().zip(&shifts).map(|(bi, &m)| bi.sigma(m)).collect();
    let coset = BinomialCoset::new(ctx, a.ncols() * (ell + 1), generators, targets)?;
    Ok(MatrixCoset { ell, shifts, c, coset })
}

/// `(σʰ(z_j))` for `h = 0..=ℓ`, flattened at `j·(ℓ+1) + h`.
pub fn orbit<Q: Scalar>(z: &[HahnSeries<Q>], ell: usize) -> Vec<HahnSeries<Q>> {
    z.iter().flat_map(|zj| (0..=ell as i64).map(move |h| zj.sigma(h))).collect()
}

fn agrees<Q: Scalar>(lhs: &[HahnSeries<Q>], rhs: &[HahnSeries<Q>]) -> Result<bool> {
    for (x, y) in lhs.iter().zip(rhs) {
        if !x.eq_up_to_precision(y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(A·z = b, orb(z) ∈ coset)`; the two always agree.
pub fn check_orbit_membership<Q: Scalar>(
    mc: &MatrixCoset<Q>,
    a: &ZSigmaMatrix,
    b: &[HahnSeries<Q>],
    z: &[HahnSeries<Q>],
) -> Result<(bool, bool)> {
    let direct = agrees(&a.apply(z)?, b)?;
    let via_coset = mc.coset.contains(&orbit(z, mc.ell))?;
    Ok((direct, via_coset))
}

/// Given `A·z = b` with unit `b`, returns the unit solution `u = z / s(v(z))`.
/// Since `v` and `s` commute with σ, `A·u = b / s(v(b)) = b`.
pub fn purity_transfer<Q: Scalar>(
    a: &ZSigmaMatrix,
    b: &[HahnSeries<Q>],
    z: &[HahnSeries<Q>],
) -> Result<Vec<HahnSeries<Q>>> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: b.len() });
    }
    check_units(b)?;
    if !agrees(&a.apply(z)?, b)? {
        return Err(Error::UnverifiedSolution);
    }
    let u: Vec<HahnSeries<Q>> = z.iter().map(HahnSeries::unit_part).collect::<Result<_>>()?;
    if !agrees(&a.apply(&u)?, b)? {
        return Err(Error::UnverifiedSolution);
    }
    Ok(u)
}
