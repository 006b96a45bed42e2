//! σ-polynomials `G(x) = g(x, σ(x), …, σⁿ(x))` with Hahn series coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{solve_linear_difference, CycloElement, GroupVector};
use crate::error::{Error, Result};
use crate::hahn::{write_series_term, HahnSeries, Model};
use crate::scalar::Scalar;

/// Cap on lifting iterations; each one strictly raises `v(G(a))`.
const MAX_LIFT_STEPS: usize = 256;

/// Multi-index `(i₀, …, iₙ)`: the exponent of `σʲ(x)` at position `j`.
pub type MultiIndex = Vec<u32>;

fn trimmed(idx: &[u32]) -> &[u32] {
    let len = idx.iter().rposition(|&d| d > 0).map_or(0, |p| p + 1);
    &idx[..len]
}

fn padded(idx: &[u32], len: usize) -> MultiIndex {
    let mut v = idx.to_vec();
    v.resize(len, 0);
    v
}

fn binomial<Q: Scalar>(n: u32, k: u32) -> Q {
    (0..k).fold(Q::one(), |acc, j| acc * Q::from_int(i64::from(n - j)) / Q::from_int(i64::from(j + 1)))
}

/// `(order, degree in σ^order(x), total degree)`, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Complexity {
    pub order: usize,
    pub top_degree: u32,
    pub total_degree: u32,
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.order, self.top_degree, self.total_degree)
    }
}

/// Invariant: no exact-zero coefficient is stored; every index has length
/// `order_bound + 1`.
#[derive(Clone, Debug)]
pub struct SigmaPolynomial<Q> {
    ctx: Arc<Model<Q>>,
    order_bound: usize,
    coeffs: BTreeMap<MultiIndex, HahnSeries<Q>>,
}

impl<Q: Scalar> PartialEq for SigmaPolynomial<Q> {
    fn eq(&self, other: &Self) -> bool {
        let norm = |p: &Self| -> Vec<(Vec<u32>, HahnSeries<Q>)> {
            let mut v: Vec<_> = p.coeffs.iter().map(|(i, c)| (trimmed(i).to_vec(), c.clone())).collect();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        };
        crate::hahn::same_ctx(&self.ctx, &other.ctx) && norm(self) == norm(other)
    }
}

impl<Q: Scalar> Eq for SigmaPolynomial<Q> {}

impl<Q: Scalar> SigmaPolynomial<Q> {
    pub fn zero(ctx: &Arc<Model<Q>>, order_bound: usize) -> Self {
        SigmaPolynomial { ctx: ctx.clone(), order_bound, coeffs: BTreeMap::new() }
    }

    /// `Σ c_i Π σʲ(x)^{i_j}`; duplicate indices are summed.
    pub fn from_terms(
        ctx: &Arc<Model<Q>>,
        order_bound: usize,
        terms: impl IntoIterator<Item = (MultiIndex, HahnSeries<Q>)>,
    ) -> Result<Self> {
        let mut p = Self::zero(ctx, order_bound);
        for (idx, c) in terms {
            if trimmed(&idx).len() > order_bound + 1 {
                return Err(Error::DimensionMismatch { expected: order_bound + 1, found: idx.len() });
            }
            c.check_ctx(&HahnSeries::zero(ctx))?;
            p.add_term(padded(&idx, order_bound + 1), c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, idx: MultiIndex, c: HahnSeries<Q>) -> Result<()> {
        let sum = match self.coeffs.remove(&idx) {
            Some(prev) => prev.try_add(&c)?,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(idx, sum);
        }
        Ok(())
    }

    pub fn constant(c: HahnSeries<Q>) -> Self {
        let ctx = c.ctx().clone();
        let mut p = Self::zero(&ctx, 0);
        if !c.is_zero() {
            p.coeffs.insert(vec![0], c);
        }
        p
    }

    /// `σʲ(x)`.
    pub fn variable(ctx: &Arc<Model<Q>>, j: usize) -> Self {
        let mut idx = vec![0; j + 1];
        idx[j] = 1;
        let mut p = Self::zero(ctx, j);
        p.coeffs.insert(idx, HahnSeries::one(ctx));
        p
    }

    pub fn ctx(&self) -> &Arc<Model<Q>> {
        &self.ctx
    }

    pub fn order_bound(&self) -> usize {
        self.order_bound
    }

    pub fn coefficients(&self) -> &BTreeMap<MultiIndex, HahnSeries<Q>> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when no `σʲ(x)` occurs.
    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|i| i.iter().all(|&d| d == 0))
    }

    /// Least `n` such that only `x, …, σⁿ(x)` occur.
    pub fn order(&self) -> usize {
        self.coeffs.keys().map(|i| trimmed(i).len().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn with_order_bound(&self, order_bound: usize) -> Result<Self> {
        Self::from_terms(&self.ctx, order_bound, self.coeffs.iter().map(|(i, c)| (i.clone(), c.clone())))
    }

    pub fn complexity(&self) -> Result<Complexity> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let order = self.order();
        Ok(Complexity {
            order,
            top_degree: self.coeffs.keys().map(|i| i[order]).max().unwrap_or(0),
            total_degree: self.coeffs.keys().map(|i| i.iter().sum()).max().unwrap_or(0),
        })
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if crate::hahn::same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let bound = self.order_bound.max(other.order_bound);
        let terms = self.coeffs.iter().chain(other.coeffs.iter()).map(|(i, c)| (i.clone(), c.clone()));
        Self::from_terms(&self.ctx, bound, terms)
    }

    pub fn neg(&self) -> Self {
        SigmaPolynomial {
            ctx: self.ctx.clone(),
            order_bound: self.order_bound,
            coeffs: self.coeffs.iter().map(|(i, c)| (i.clone(), -c)).collect(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let bound = self.order_bound.max(other.order_bound);
        let mut out = Self::zero(&self.ctx, bound);
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let idx: MultiIndex =
                    padded(i, bound + 1).iter().zip(padded(j, bound + 1)).map(|(x, y)| x + y).collect();
                out.add_term(idx, a.try_mul(b)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &HahnSeries<Q>) -> Result<Self> {
        self.try_mul(&Self::constant(c.clone()))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::constant(HahnSeries::one(&self.ctx));
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// `σᵏ` applied to the polynomial: coefficients move by `σᵏ`, `σʲ(x)` becomes `σʲ⁺ᵏ(x)`.
    pub fn sigma(&self, k: usize) -> Self {
        let bound = self.order_bound + k;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(i, c)| {
                let mut idx = vec![0; k];
                idx.extend_from_slice(i);
                (idx, c.sigma(k as i64))
            })
            .collect();
        SigmaPolynomial { ctx: self.ctx.clone(), order_bound: bound, coeffs }
    }

    /// `G(a)`, substituting `σʲ(a)` for the `j`-th variable.
    pub fn eval(&self, a: &HahnSeries<Q>) -> Result<HahnSeries<Q>> {
        a.check_ctx(&HahnSeries::zero(&self.ctx))?;
        let n = self.order_bound + 1;
        let max_deg: Vec<u32> =
            (0..n).map(|j| self.coeffs.keys().map(|i| i[j]).max().unwrap_or(0)).collect();
        // powers[j][d] = σʲ(a)^d
        let mut powers: Vec<Vec<HahnSeries<Q>>> = Vec::with_capacity(n);
        for (j, &d) in max_deg.iter().enumerate() {
            let base = a.sigma(j as i64);
            let mut row = vec![HahnSeries::one(&self.ctx)];
            for _ in 0..d {
                let next = row.last().expect("nonempty").try_mul(&base)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = HahnSeries::zero(&self.ctx);
        for (idx, c) in &self.coeffs {
            let mut term = c.clone();
            for (j, &d) in idx.iter().enumerate() {
                if d > 0 {
                    term = term.try_mul(&powers[j][d as usize])?;
                }
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Normalized Taylor coefficient `G₍ᵢ₎`: `g₍ᵢ₎ = (1/i!) ∂ⁱg`, so that
    /// `G(a + ε) = Σᵢ G₍ᵢ₎(a) Π σʲ(ε)^{iⱼ}`.
    pub fn taylor(&self, i: &[u32]) -> Result<Self> {
        if trimmed(i).len() > self.order_bound + 1 {
            return Ok(Self::zero(&self.ctx, self.order_bound));
        }
        let i = padded(i, self.order_bound + 1);
        let field = self.ctx.field();
        let mut out = Self::zero(&self.ctx, self.order_bound);
        for (m, c) in &self.coeffs {
            if m.iter().zip(&i).any(|(mj, ij)| mj < ij) {
                continue;
            }
            let factor = m.iter().zip(&i).fold(Q::one(), |acc, (&mj, &ij)| acc * binomial::<Q>(mj, ij));
            let idx = m.iter().zip(&i).map(|(mj, ij)| mj - ij).collect();
            out.add_term(idx, c.scale(&field.rational(factor)))?;
        }
        Ok(out)
    }

    /// Every nonzero multi-index `i` with `iⱼ ≤ max degree of σʲ(x)`.
    pub fn taylor_indices(&self) -> Vec<MultiIndex> {
        let n = self.order_bound + 1;
        let max_deg: Vec<u32> =
            (0..n).map(|j| self.coeffs.keys().map(|i| i[j]).max().unwrap_or(0)).collect();
        let mut out = vec![Vec::new()];
        for &d in &max_deg {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=d).map(move |k| {
                        let mut v = prefix.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        out.retain(|i| i.iter().any(|&d| d > 0));
        out
    }

    /// Decides the σ-Hensel configuration at `a`: `G` nonconstant,
    /// `0 < v(G(a)) < ∞`, and `v(G₍ᵢ₎(a)) = 0` for every nonzero `G₍ᵢ₎`, `i ≠ 0`.
    pub fn hensel_config(&self, a: &HahnSeries<Q>) -> Result<HenselConfig<Q>> {
        if self.is_constant() {
            return Ok(HenselConfig::No(ConfigFailure::ConstantPolynomial));
        }
        let g = self.eval(a)?;
        if g.is_zero() {
            return Ok(HenselConfig::No(ConfigFailure::ExactRoot));
        }
        let delta = determinate_valuation(&g)?;
        if !delta.is_positive() {
            return Ok(HenselConfig::No(ConfigFailure::NonPositiveValuation(delta)));
        }
        for i in self.taylor_indices() {
            let gi = self.taylor(&i)?;
            if gi.is_zero() {
                continue;
            }
            let value = gi.eval(a)?;
            let v = match value.valuation() {
                Ok(v) => v,
                Err(_) if value.precision().is_positive() => value.precision().clone(),
                Err(_) => return Err(indeterminate(&value)),
            };
            if !v.is_zero() {
                return Ok(HenselConfig::No(ConfigFailure::NonUnitTaylorCoefficient { index: i, valuation: v }));
            }
        }
        Ok(HenselConfig::Yes { delta })
    }

    /// σ-Hensel lifting for isometric `σ_Γ`. Each step replaces `a` by
    /// `a + c·t^δ` where `δ = v(G(a))` and `c` solves
    /// `Σⱼ res(G₍eⱼ₎(a)) σʲ(c) = -ac(G(a))` in the residue field.
    pub fn hensel_lift(&self, a: &HahnSeries<Q>, target: &GroupVector<Q>) -> Result<HenselLift<Q>> {
        if !self.ctx.is_isometric() {
            return Err(Error::NonIsometric);
        }
        if let Some(r) = target.rank() {
            self.ctx.check_rank(r)?;
        }
        let first = self.eval(a)?;
        if first.is_zero() {
            return Ok(HenselLift {
                root: a.clone(),
                delta: GroupVector::Infinity,
                iterations: 0,
                residual: first,
            });
        }
        let delta = match self.hensel_config(a)? {
            HenselConfig::Yes { delta } => delta,
            HenselConfig::No(reason) => {
                return Err(Error::Precondition(format!("not in σ-Hensel configuration: {reason}")))
            }
        };
        let field = self.ctx.field();
        let order = self.order_bound;
        let linear: Vec<Self> = (0..=order)
            .map(|j| {
                let mut e = vec![0; order + 1];
                e[j] = 1;
                self.taylor(&e)
            })
            .collect::<Result<_>>()?;

        let mut current = a.clone();
        let mut residual = first;
        let mut iterations = 0;
        loop {
            if residual.is_zero() {
                break;
            }
            let v = match residual.valuation() {
                Ok(v) => v,
                Err(_) if residual.precision() >= target => break,
                Err(_) => return Err(indeterminate(&residual)),
            };
            if v >= *target {
                break;
            }
            if iterations == MAX_LIFT_STEPS {
                return Err(Error::NotConverged { iterations });
            }
            let alphas: Vec<CycloElement<Q>> = linear
                .iter()
                .map(|l| l.eval(&current).and_then(|x| x.res()))
                .collect::<Result<_>>()?;
            let rhs = field.neg(&residual.ac()?);
            let c = solve_linear_difference(field, &alphas, &rhs)?
                .ok_or(Error::ResidueObstruction { step: iterations + 1 })?;
            current = current.try_add(&HahnSeries::monomial(&self.ctx, c, v.clone())?)?;
            let next = self.eval(&current)?;
            iterations += 1;
            if !next.is_zero() && next.valuation_lower_bound() <= v {
                return Err(Error::LiftStalled { step: iterations });
            }
            residual = next;
        }
        Ok(HenselLift { root: current, delta, iterations, residual })
    }

    /// `trop(G)(γ) = min_m v(c_m) + Σⱼ mⱼ σ_Γʲ(γ)`.
    pub fn tropical_value(&self, gamma: &GroupVector<Q>) -> Result<GroupVector<Q>> {
        let m = self.ctx.sigma_gamma();
        let images: Vec<GroupVector<Q>> =
            (0..=self.order_bound).map(|j| m.pow(j as i64).apply(gamma)).collect::<Result<_>>()?;
        let mut best = GroupVector::Infinity;
        for (idx, c) in &self.coeffs {
            let mut value = determinate_valuation(c)?;
            for (j, &d) in idx.iter().enumerate() {
                if d > 0 {
                    value = match &images[j] {
                        GroupVector::Infinity => GroupVector::Infinity,
                        g => value.checked_add(&g.scale_int(i64::from(d)))?,
                    };
                }
            }
            best = best.min(value);
        }
        Ok(best)
    }

    pub fn format_index(idx: &[u32]) -> String {
        let mut parts = Vec::new();
        for (j, &d) in idx.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let var = match j {
                0 => "x".to_string(),
                1 => "s(x)".to_string(),
                _ => format!("s^{j}(x)"),
            };
            parts.push(if d == 1 { var } else { format!("{var}^{d}") });
        }
        parts.join("*")
    }
}

/// `v(a) = trop(f)(v(a))` for every `f` in the family.
pub fn is_regular<Q: Scalar>(a: &HahnSeries<Q>, family: &[SigmaPolynomial<Q>]) -> Result<bool> {
    let gamma = determinate_valuation(a)?;
    for f in family {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let expected = f.tropical_value(&gamma)?;
        let value = f.eval(a)?;
        let equal = match value.valuation() {
            Ok(v) => v == expected,
            // only a lower bound is known
            Err(_) if *value.precision() > expected => false,
            Err(_) => return Err(indeterminate(&value)),
        };
        if !equal {
            return Ok(false);
        }
    }
    Ok(true)
}

fn indeterminate<Q: Scalar>(s: &HahnSeries<Q>) -> Error {
    Error::IndeterminateAtPrecision(format!("valuation unknown below {}", s.precision()))
}

fn determinate_valuation<Q: Scalar>(s: &HahnSeries<Q>) -> Result<GroupVector<Q>> {
    s.valuation().map_err(|_| indeterminate(s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigFailure<Q> {
    ConstantPolynomial,
    /// `G(a) = 0` exactly.
    ExactRoot,
    NonPositiveValuation(GroupVector<Q>),
    /// `valuation` is a lower bound when the value is only known up to precision.
    NonUnitTaylorCoefficient { index: MultiIndex, valuation: GroupVector<Q> },
}

impl<Q: Scalar> fmt::Display for ConfigFailure<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigFailure::ConstantPolynomial => write!(f, "G is constant"),
            ConfigFailure::ExactRoot => write!(f, "G(a) = 0"),
            ConfigFailure::NonPositiveValuation(v) => write!(f, "v(G(a)) = {v} is not positive"),
            ConfigFailure::NonUnitTaylorCoefficient { index, valuation } => {
                let idx: Vec<String> = index.iter().map(ToString::to_string).collect();
                write!(f, "v(G_({})(a)) = {valuation} is not 0", idx.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HenselConfig<Q> {
    Yes { delta: GroupVector<Q> },
    No(ConfigFailure<Q>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselLift<Q> {
    pub root: HahnSeries<Q>,
    /// `v(G(a))` at the starting point, which equals `v(root - a)`.
    pub delta: GroupVector<Q>,
    pub iterations: usize,
    /// `G(root)`.
    pub residual: HahnSeries<Q>,
}

impl<Q: Scalar> fmt::Display for SigmaPolynomial<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        // constant term first, then by increasing degree
        let mut keys: Vec<&MultiIndex> = self.coeffs.keys().collect();
        keys.sort_by_key(|i| (i.iter().sum::<u32>(), trimmed(i).len(), (*i).clone()));
        for (n, idx) in keys.into_iter().enumerate() {
            write_series_term(&mut out, n == 0, &self.coeffs[idx], &Self::format_index(idx));
        }
        f.write_str(&out)
    }
}
