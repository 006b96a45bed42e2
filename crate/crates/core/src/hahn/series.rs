//! Truncated Hahn series `Σ a_γ t^γ` with an absolute precision bound.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::Model;
use crate::algebra::{CycloElement, GroupVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Upper bound on geometric-series terms when inverting over a rank > 1
/// value group, where `kδ` need not ever reach the precision.
const MAX_GEOMETRIC_TERMS: i64 = 256;

/// A Hahn series known up to (excluding) `precision`; `precision = ∞` means
/// the series is exact.
#[derive(Clone, Debug)]
pub struct HahnSeries<Q> {
    ctx: Arc<Model<Q>>,
    terms: Vec<(GroupVector<Q>, CycloElement<Q>)>,
    precision: GroupVector<Q>,
}

impl<Q: PartialEq> PartialEq for HahnSeries<Q> {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms && self.precision == other.precision
    }
}

impl<Q: Eq> Eq for HahnSeries<Q> {}

pub(crate) fn same_ctx<Q: PartialEq>(a: &Arc<Model<Q>>, b: &Arc<Model<Q>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<Q: Scalar> HahnSeries<Q> {
    /// The exact zero.
    pub fn zero(ctx: &Arc<Model<Q>>) -> Self {
        HahnSeries { ctx: ctx.clone(), terms: Vec::new(), precision: GroupVector::Infinity }
    }

    /// `O(t^π)`.
    pub fn big_o(ctx: &Arc<Model<Q>>, precision: GroupVector<Q>) -> Result<Self> {
        Self::from_terms(ctx, Vec::new(), precision)
    }

    pub fn one(ctx: &Arc<Model<Q>>) -> Self {
        Self::constant(ctx, ctx.field().one())
    }

    /// Builds a series from arbitrary `(exponent, coefficient)` pairs:
    /// duplicates are summed, zeros and terms at or above `precision` dropped.
    pub fn from_terms(
        ctx: &Arc<Model<Q>>,
        terms: Vec<(GroupVector<Q>, CycloElement<Q>)>,
        precision: GroupVector<Q>,
    ) -> Result<Self> {
        let field = ctx.field();
        if let Some(r) = precision.rank() {
            ctx.check_rank(r)?;
        }
        let mut map: BTreeMap<GroupVector<Q>, CycloElement<Q>> = BTreeMap::new();
        for (e, c) in terms {
            match e.rank() {
                Some(r) => ctx.check_rank(r)?,
                None => return Err(Error::Precondition("series exponents must be finite".into())),
            }
            if c.coeffs().len() != field.degree() {
                return Err(Error::DimensionMismatch { expected: field.degree(), found: c.coeffs().len() });
            }
            if e >= precision {
                continue;
            }
            match map.get_mut(&e) {
                Some(acc) => *acc = field.add(acc, &c),
                None => {
                    map.insert(e, c);
                }
            }
        }
        Ok(HahnSeries {
            ctx: ctx.clone(),
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            precision,
        })
    }

    /// `c·t^γ` (exact).
    pub fn monomial(ctx: &Arc<Model<Q>>, coeff: CycloElement<Q>, exponent: GroupVector<Q>) -> Result<Self> {
        Self::from_terms(ctx, vec![(exponent, coeff)], GroupVector::Infinity)
    }

    /// `c·t⁰` (exact).
    pub fn constant(ctx: &Arc<Model<Q>>, coeff: CycloElement<Q>) -> Self {
        Self::monomial(ctx, coeff, GroupVector::zero(ctx.rank())).expect("rank matches")
    }

    pub fn rational(ctx: &Arc<Model<Q>>, q: Q) -> Self {
        Self::constant(ctx, ctx.field().rational(q))
    }

    /// The cross-section `s(γ) = t^γ`.
    pub fn section(ctx: &Arc<Model<Q>>, gamma: &GroupVector<Q>) -> Result<Self> {
        if gamma.is_infinite() {
            return Err(Error::Precondition("cross-section is defined on finite values only".into()));
        }
        Self::monomial(ctx, ctx.field().one(), gamma.clone())
    }

    /// The lift `ι(c) = c·t⁰`.
    pub fn lift(ctx: &Arc<Model<Q>>, c: &CycloElement<Q>) -> Self {
        Self::constant(ctx, c.clone())
    }

    pub fn ctx(&self) -> &Arc<Model<Q>> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(GroupVector<Q>, CycloElement<Q>)] {
        &self.terms
    }

    pub fn precision(&self) -> &GroupVector<Q> {
        &self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_infinite()
    }

    /// No known terms (exact zero or `O(t^π)`).
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exactly zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coefficient(&self, gamma: &GroupVector<Q>) -> CycloElement<Q> {
        self.terms
            .iter()
            .find(|(e, _)| e == gamma)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ctx.field().zero())
    }

    pub(crate) fn check_ctx(&self, other: &Self) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Least exponent, `∞` for the exact zero.
    pub fn valuation(&self) -> Result<GroupVector<Q>> {
        match self.terms.first() {
            Some((e, _)) => Ok(e.clone()),
            None if self.is_exact() => Ok(GroupVector::Infinity),
            None => Err(Error::IndeterminateLeadingTerm),
        }
    }

    /// The valuation if known, otherwise the precision (a lower bound).
    pub fn valuation_lower_bound(&self) -> GroupVector<Q> {
        self.terms.first().map_or_else(|| self.precision.clone(), |(e, _)| e.clone())
    }

    /// Angular component for the section `γ ↦ t^γ`: the leading coefficient.
    pub fn ac(&self) -> Result<CycloElement<Q>> {
        match self.terms.first() {
            Some((_, c)) => Ok(c.clone()),
            None if self.is_exact() => Ok(self.ctx.field().zero()),
            None => Err(Error::IndeterminateLeadingTerm),
        }
    }

    /// Residue map, extended by `0` outside the valuation ring.
    pub fn res(&self) -> Result<CycloElement<Q>> {
        let zero = GroupVector::zero(self.ctx.rank());
        if let Some((e, _)) = self.terms.first() {
            if e.is_negative() {
                return Ok(self.ctx.field().zero());
            }
        }
        if !self.precision.is_positive() {
            return Err(Error::IndeterminateAtPrecision(format!(
                "residue needs precision above 0, have {}",
                self.precision
            )));
        }
        Ok(self.coefficient(&zero))
    }

    /// `(v, ac, res)`.
    pub fn leading(&self) -> Result<(GroupVector<Q>, CycloElement<Q>, CycloElement<Q>)> {
        let v = self.valuation()?;
        let ac = self.ac()?;
        let res = if v.is_infinite() || v.is_positive() || v.is_negative() {
            self.ctx.field().zero()
        } else {
            ac.clone()
        };
        Ok((v, ac, res))
    }

    /// Drops everything at or above `bound`.
    pub fn truncate(&self, bound: &GroupVector<Q>) -> Self {
        let precision = self.precision.clone().min(bound.clone());
        HahnSeries {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(e, _)| *e < precision).cloned().collect(),
            precision,
        }
    }

    /// Same series with its precision replaced by a larger-or-equal claim.
    /// Used when the caller knows the series is exact to a given bound.
    pub fn with_precision(&self, precision: GroupVector<Q>) -> Self {
        HahnSeries {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(e, _)| *e < precision).cloned().collect(),
            precision,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let precision = self.precision.clone().min(other.precision.clone());
        let terms = self.terms.iter().chain(other.terms.iter()).cloned().collect();
        Self::from_terms(&self.ctx, terms, precision)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let field = self.ctx.field();
        let precision = (&self.precision + &other.valuation_lower_bound())
            .min(&other.precision + &self.valuation_lower_bound());
        let mut map: BTreeMap<GroupVector<Q>, CycloElement<Q>> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if e >= precision {
                    // exponents of `other` are increasing
                    break;
                }
                let c = field.mul(c1, c2);
                match map.get_mut(&e) {
                    Some(acc) => *acc = field.add(acc, &c),
                    None => {
                        map.insert(e, c);
                    }
                }
            }
        }
        Ok(HahnSeries {
            ctx: self.ctx.clone(),
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            precision,
        })
    }

    /// Multiply by a residue constant.
    pub fn scale(&self, c: &CycloElement<Q>) -> Self {
        let field = self.ctx.field();
        if c.is_zero() {
            return HahnSeries { ctx: self.ctx.clone(), terms: Vec::new(), precision: self.precision.clone() };
        }
        HahnSeries {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), field.mul(a, c))).collect(),
            precision: self.precision.clone(),
        }
    }

    /// Multiply by `t^γ`.
    pub fn shift(&self, gamma: &GroupVector<Q>) -> Self {
        HahnSeries {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, a)| (e + gamma, a.clone())).collect(),
            precision: &self.precision + gamma,
        }
    }

    /// Inverse with `0⁻¹ = 0`. Exact input must be a monomial; otherwise the
    /// result is the geometric expansion to precision `π - 2v`.
    pub fn inv(&self) -> Result<Self> {
        let field = self.ctx.field();
        let Some((v, c)) = self.terms.first().cloned() else {
            return if self.is_exact() { Ok(self.clone()) } else { Err(Error::IndeterminateLeadingTerm) };
        };
        let c_inv = field.inv(&c);
        let neg_v = -&v;
        if self.terms.len() == 1 && self.is_exact() {
            return Self::monomial(&self.ctx, c_inv, neg_v);
        }
        if self.is_exact() {
            return Err(Error::UnboundedExpansion);
        }
        // f = c·t^v·(1 + h), v(h) > 0
        let one = Self::one(&self.ctx);
        let h = self.scale(&c_inv).shift(&neg_v).try_sub(&one)?;
        let rel = h.precision.clone();
        let mut sum = one.clone();
        let mut bound = rel.clone();
        if let Some((delta, _)) = h.terms.first().cloned() {
            let minus_h = -&h;
            let mut power = one;
            let mut k = 1i64;
            loop {
                if delta.scale_int(k) >= rel {
                    break;
                }
                if k > MAX_GEOMETRIC_TERMS {
                    bound = bound.min(delta.scale_int(k));
                    break;
                }
                power = power.try_mul(&minus_h)?.truncate(&rel);
                sum = sum.try_add(&power)?;
                k += 1;
            }
        }
        Ok(sum.truncate(&bound).scale(&c_inv).shift(&neg_v))
    }

    /// Inverse known at least up to `bound` (exact inputs are truncated first).
    pub fn inv_to(&self, bound: &GroupVector<Q>) -> Result<Self> {
        if self.is_zero() || (self.is_monomial() && self.is_exact()) {
            return self.inv();
        }
        let v = self.valuation()?;
        let needed = bound + &v.scale_int(2);
        self.truncate(&needed).inv()
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative powers go through [`HahnSeries::inv`].
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(&self.ctx);
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.try_mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// `σ^k(Σ a_γ t^γ) = Σ σ_k^k(a_γ) t^{σ_Γ^k(γ)}`.
    pub fn sigma(&self, power: i64) -> Self {
        if power == 0 {
            return self.clone();
        }
        let field = self.ctx.field();
        let m = self.ctx.sigma_gamma().pow(power);
        HahnSeries {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (m.apply(e).expect("rank checked"), field.apply_aut_pow(a, power)))
                .collect(),
            precision: m.apply(&self.precision).expect("rank checked"),
        }
    }

    /// `z / s(v(z))`: valuation 0, same angular component.
    pub fn unit_part(&self) -> Result<Self> {
        let v = self.valuation()?;
        if v.is_infinite() {
            return Err(Error::ZeroInput);
        }
        Ok(self.shift(&-&v))
    }

    /// Equality of the two series wherever both are known.
    pub fn eq_up_to_precision(&self, other: &Self) -> Result<bool> {
        Ok(self.try_sub(other)?.terms.is_empty())
    }

    /// Apply `σ_k` termwise to coefficients only (used for residue-level maps).
    pub fn map_coefficients(&self, f: impl Fn(&CycloElement<Q>) -> CycloElement<Q>) -> Result<Self> {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect();
        Self::from_terms(&self.ctx, terms, self.precision.clone())
    }
}

impl<Q: Scalar> Neg for &HahnSeries<Q> {
    type Output = HahnSeries<Q>;

    fn neg(self) -> HahnSeries<Q> {
        let field = self.ctx.field();
        HahnSeries {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), field.neg(c))).collect(),
            precision: self.precision.clone(),
        }
    }
}

impl<Q: Scalar> Neg for HahnSeries<Q> {
    type Output = HahnSeries<Q>;

    fn neg(self) -> HahnSeries<Q> {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics if the operands live in different models; use the `try_`
        /// method to get an error instead.
        impl<Q: Scalar> $trait for &HahnSeries<Q> {
            type Output = HahnSeries<Q>;

            fn $method(self, rhs: Self) -> HahnSeries<Q> {
                self.$checked(rhs).expect("series from different models")
            }
        }

        impl<Q: Scalar> $trait for HahnSeries<Q> {
            type Output = HahnSeries<Q>;

            fn $method(self, rhs: Self) -> HahnSeries<Q> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

/// `(v, ac, res)` of a series.
pub fn hs_leading<Q: Scalar>(f: &HahnSeries<Q>) -> Result<(GroupVector<Q>, CycloElement<Q>, CycloElement<Q>)> {
    f.leading()
}
