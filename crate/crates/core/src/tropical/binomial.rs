use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::laurent::{format_monomial, Exponents};
use crate::algebra::{CycloElement, CycloField, GroupVector};
use crate::error::{Error, Result};
use crate::hahn::{same_ctx, HahnSeries, Model};
use crate::lattice::{hnf_with_transform, IntLattice};
use crate::scalar::{rational_root, Scalar};

/// The coset `{y : y^u = b_u for every generator u}` of an algebraic
/// subgroup of the torus, given by generator rows and their targets.
#[derive(Clone, Debug)]
pub struct BinomialCoset<Q> {
    ctx: Arc<Model<Q>>,
    nvars: usize,
    generators: Vec<Exponents>,
    targets: Vec<HahnSeries<Q>>,
}

impl<Q: Scalar> PartialEq for BinomialCoset<Q> {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx)
            && self.nvars == other.nvars
            && self.generators == other.generators
            && self.targets == other.targets
    }
}

impl<Q: Scalar> BinomialCoset<Q> {
    pub fn new(
        ctx: &Arc<Model<Q>>,
        nvars: usize,
        generators: Vec<Exponents>,
        targets: Vec<HahnSeries<Q>>,
    ) -> Result<Self> {
        if generators.len() != targets.len() {
            return Err(Error::DimensionMismatch { expected: generators.len(), found: targets.len() });
        }
        if let Some(bad) = generators.iter().find(|u| u.len() != nvars) {
            return Err(Error::DimensionMismatch { expected: nvars, found: bad.len() });
        }
        if targets.iter().any(|b| !same_ctx(ctx, b.ctx())) {
            return Err(Error::ContextMismatch);
        }
        Ok(BinomialCoset { ctx: ctx.clone(), nvars, generators, targets })
    }

    pub fn ctx(&self) -> &Arc<Model<Q>> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Exponents] {
        &self.generators
    }

    pub fn targets(&self) -> &[HahnSeries<Q>] {
        &self.targets
    }

    /// The lattice `Λ` spanned by the generators, in HNF.
    pub fn lattice(&self) -> Result<IntLattice> {
        IntLattice::new(self.nvars, &self.generators)
    }

    /// `σᵏ` applied to every target.
    pub fn sigma(&self, k: i64) -> Self {
        BinomialCoset { targets: self.targets.iter().map(|b| b.sigma(k)).collect(), ..self.clone() }
    }

    /// Whether `point` satisfies every equation, up to the available precision.
    pub fn contains(&self, point: &[HahnSeries<Q>]) -> Result<bool> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        for (u, b) in self.generators.iter().zip(&self.targets) {
            if !monomial_value(&self.ctx, point, u)?.eq_up_to_precision(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<Q: Scalar> fmt::Display for BinomialCoset<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<String> = self
            .generators
            .iter()
            .zip(&self.targets)
            .map(|(u, b)| {
                let m = format_monomial(u);
                format!("{} = {b}", if m.is_empty() { "1".to_string() } else { m })
            })
            .collect();
        f.write_str(&eqs.join(" & "))
    }
}

/// `Π zⱼ^{uⱼ}`.
pub fn monomial_value<Q: Scalar>(ctx: &Arc<Model<Q>>, point: &[HahnSeries<Q>], u: &[i64]) -> Result<HahnSeries<Q>> {
    let mut acc = HahnSeries::one(ctx);
    for (z, &e) in point.iter().zip(u) {
        if e != 0 {
            acc = acc.try_mul(&z.pow(e)?)?;
        }
    }
    Ok(acc)
}

/// Initial coset at `0`: same generators, residue targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialInitial<Q> {
    pub generators: Vec<Exponents>,
    pub targets: Vec<CycloElement<Q>>,
    pub lattice: IntLattice,
    /// The initial variety is irreducible exactly when `Λ` is primitive.
    pub irreducible: bool,
}

/// `in₀` of a coset with unit targets: `y^u = res(b_u)`.
pub fn binomial_initial<Q: Scalar>(coset: &BinomialCoset<Q>) -> Result<BinomialInitial<Q>> {
    let mut targets = Vec::with_capacity(coset.targets.len());
    for (index, b) in coset.targets.iter().enumerate() {
        let v = b
            .valuation()
            .map_err(|_| Error::IndeterminateAtPrecision(format!("target {index} is O({})", b.precision())))?;
        if !v.is_zero() {
            return Err(Error::NonUnitTarget { index });
        }
        targets.push(b.ac()?);
    }
    let lattice = coset.lattice()?;
    let irreducible = lattice.is_primitive();
    Ok(BinomialInitial { generators: coset.generators.clone(), targets, lattice, irreducible })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FundamentalVerdict<Q> {
    /// A point `z` with `v(z) = γ` on the coset, verified exactly.
    Consistent { witness: Vec<HahnSeries<Q>> },
    Inconsistent { reason: String },
    /// The valuation condition holds but no residue point was found.
    Unknown { reason: String },
}

fn cyclo_pow_big<Q: Scalar>(field: &CycloField, x: &CycloElement<Q>, e: &BigInt) -> Result<CycloElement<Q>> {
    let e = e.to_i64().ok_or_else(|| Error::Precondition("exponent exceeds 64 bits".into()))?;
    Ok(field.pow(x, e))
}

/// Some `x` in the field with `x^k = w`, searched among `ω·q` with `ω` a root
/// of unity of the field and `q` rational.
fn residue_root<Q: Scalar>(field: &CycloField, w: &CycloElement<Q>, k: u32) -> Option<CycloElement<Q>> {
    if k == 1 {
        return Some(w.clone());
    }
    let order = i64::from(field.conductor().lcm(&2));
    for j in 0..order {
        // ζ_{2n}^j, realized as ±ζ_n^{j/2}
        let omega = if order == i64::from(field.conductor()) {
            field.zeta_pow(j)
        } else if j % 2 == 0 {
            field.zeta_pow(j / 2)
        } else {
            field.neg(&field.zeta_pow((j - 1) / 2))
        };
        let r = field.div(w, &field.pow(&omega, i64::from(k)));
        if let Some(q) = r.as_rational().and_then(|q| rational_root(&q, k)) {
            return Some(field.mul(&omega, &field.rational(q)));
        }
    }
    None
}

/// Decides whether the coset has a point of valuation `γ`: `Inconsistent`
/// when `⟨u, γ⟩ ≠ v(b_u)` for a generator; `Consistent` with a witness
/// `zⱼ = cⱼ t^{γⱼ}` when the residue monomial system is solved; otherwise `Unknown`.
pub fn fundamental_check_binomial<Q: Scalar>(
    coset: &BinomialCoset<Q>,
    gamma: &[GroupVector<Q>],
) -> Result<FundamentalVerdict<Q>> {
    let ctx = &coset.ctx;
    let field = ctx.field();
    if gamma.len() != coset.nvars {
        return Err(Error::DimensionMismatch { expected: coset.nvars, found: gamma.len() });
    }
    for g in gamma {
        match g.rank() {
            Some(r) => ctx.check_rank(r)?,
            None => return Err(Error::Precondition("torus points have finite valuation".into())),
        }
    }
    let mut leading = Vec::with_capacity(coset.targets.len());
    for (index, (u, b)) in coset.generators.iter().zip(&coset.targets).enumerate() {
        let v = b
            .valuation()
            .map_err(|_| Error::IndeterminateAtPrecision(format!("target {index} is O({})", b.precision())))?;
        let pairing = gamma
            .iter()
            .zip(u)
            .try_fold(GroupVector::zero(ctx.rank()), |acc, (g, &e)| acc.checked_add(&g.scale_int(e)))?;
        if pairing != v {
            return Ok(FundamentalVerdict::Inconsistent {
                reason: format!("equation {index}: <u, γ> = {pairing} but v(b) = {v}"),
            });
        }
        if !(b.is_exact() && b.is_monomial()) {
            return Ok(FundamentalVerdict::Unknown { reason: format!("target {index} is not an exact monomial") });
        }
        leading.push(b.ac()?);
    }

    // residue system c^u = ac(b_u), triangularized by the HNF transform
    let rows: Vec<Vec<BigInt>> =
        coset.generators.iter().map(|u| u.iter().map(|&e| BigInt::from(e)).collect()).collect();
    let (h, transform) = hnf_with_transform(&rows, coset.nvars);
    let mut rhs = Vec::with_capacity(h.len());
    for urow in &transform {
        let mut acc = field.one();
        for (e, beta) in urow.iter().zip(&leading) {
            if !e.is_zero() {
                acc = field.mul(&acc, &cyclo_pow_big(field, beta, e)?);
            }
        }
        rhs.push(acc);
    }
    let mut c: Vec<CycloElement<Q>> = vec![field.one(); coset.nvars];
    for (row, target) in h.iter().zip(&rhs).rev() {
        let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
            if !target.is_one() {
                return Ok(FundamentalVerdict::Inconsistent {
                    reason: "the residue equations are contradictory: the coset is empty".into(),
                });
            }
            continue;
        };
        let mut known = field.one();
        for j in pivot + 1..coset.nvars {
            if !row[j].is_zero() {
                known = field.mul(&known, &cyclo_pow_big(field, &c[j], &row[j])?);
            }
        }
        let w = field.div(target, &known);
        let k = row[pivot].to_u32().ok_or_else(|| Error::Precondition("pivot exceeds 32 bits".into()))?;
        match residue_root(field, &w, k) {
            Some(x) => c[pivot] = x,
            None => {
                return Ok(FundamentalVerdict::Unknown {
                    reason: format!("no {k}-th root of {} found in the residue field", field.format(&w)),
                })
            }
        }
    }
    let witness: Vec<HahnSeries<Q>> = c
        .into_iter()
        .zip(gamma)
        .map(|(cj, g)| HahnSeries::monomial(ctx, cj, g.clone()))
        .collect::<Result<_>>()?;
    for (u, b) in coset.generators.iter().zip(&coset.targets) {
        if monomial_value(ctx, &witness, u)? != *b {
            return Err(Error::UnverifiedSolution);
        }
    }
    Ok(FundamentalVerdict::Consistent { witness })
}
