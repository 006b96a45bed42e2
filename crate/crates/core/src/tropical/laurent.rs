use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{CycloElement, CycloField};
use crate::error::{Error, Result};
use crate::hahn::{same_ctx, signed_coefficient, write_series_term, write_term, HahnSeries, Model};
use crate::scalar::Scalar;

/// Exponent vector of a Laurent monomial.
pub type Exponents = Vec<i64>;

/// Variable names: `x` when univariate, `y1, …, yn` otherwise.
pub fn format_monomial(u: &[i64]) -> String {
    let named = |j: usize| if u.len() == 1 { "x".to_string() } else { format!("y{}", j + 1) };
    u.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(j, &e)| if e == 1 { named(j) } else { format!("{}^{e}", named(j)) })
        .collect::<Vec<_>>()
        .join("*")
}

/// `Σ_{u ∈ S} c_u x^u` with Hahn series coefficients; no zero coefficient is stored.
#[derive(Clone, Debug)]
pub struct LaurentPoly<Q> {
    ctx: Arc<Model<Q>>,
    nvars: usize,
    coeffs: BTreeMap<Exponents, HahnSeries<Q>>,
}

impl<Q: Scalar> PartialEq for LaurentPoly<Q> {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.nvars == other.nvars && self.coeffs == other.coeffs
    }
}

impl<Q: Scalar> Eq for LaurentPoly<Q> {}

impl<Q: Scalar> LaurentPoly<Q> {
    pub fn zero(ctx: &Arc<Model<Q>>, nvars: usize) -> Self {
        LaurentPoly { ctx: ctx.clone(), nvars, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(
        ctx: &Arc<Model<Q>>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponents, HahnSeries<Q>)>,
    ) -> Result<Self> {
        let mut p = Self::zero(ctx, nvars);
        for (u, c) in terms {
            if u.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: u.len() });
            }
            if !same_ctx(ctx, c.ctx()) {
                return Err(Error::ContextMismatch);
            }
            p.add_term(u, c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, u: Exponents, c: HahnSeries<Q>) -> Result<()> {
        let sum = match self.coeffs.remove(&u) {
            Some(prev) => prev.try_add(&c)?,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(u, sum);
        }
        Ok(())
    }

    pub fn constant(nvars: usize, c: HahnSeries<Q>) -> Self {
        let ctx = c.ctx().clone();
        Self::from_terms(&ctx, nvars, [(vec![0; nvars], c)]).expect("shape matches")
    }

    /// The variable `x_j` (0-based).
    pub fn variable(ctx: &Arc<Model<Q>>, nvars: usize, j: usize) -> Self {
        let mut u = vec![0; nvars];
        u[j] = 1;
        Self::from_terms(ctx, nvars, [(u, HahnSeries::one(ctx))]).expect("shape matches")
    }

    pub fn ctx(&self) -> &Arc<Model<Q>> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coefficients(&self) -> &BTreeMap<Exponents, HahnSeries<Q>> {
        &self.coeffs
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponents> {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let terms = self.coeffs.iter().chain(&other.coeffs).map(|(u, c)| (u.clone(), c.clone()));
        Self::from_terms(&self.ctx, self.nvars, terms)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(u, c)| (u.clone(), -c)).collect(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.ctx, self.nvars);
        for (u, a) in &self.coeffs {
            for (w, b) in &other.coeffs {
                let e = u.iter().zip(w).map(|(x, y)| x + y).collect();
                out.add_term(e, a.try_mul(b)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &HahnSeries<Q>) -> Result<Self> {
        self.try_mul(&Self::constant(self.nvars, c.clone()))
    }

    /// Integer power; negative powers only for monomials.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            let (u, c) = match self.coeffs.iter().next() {
                Some(t) if self.is_monomial() => t,
                _ => return Err(Error::Precondition("only monomials have Laurent inverses".into())),
            };
            let inv = Self::from_terms(&self.ctx, self.nvars, [(u.iter().map(|e| -e).collect(), c.inv()?)])?;
            return inv.pow(-k);
        }
        let mut acc = Self::constant(self.nvars, HahnSeries::one(&self.ctx));
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// `σᵏ` on coefficients; the variables are formal.
    pub fn sigma(&self, k: i64) -> Self {
        LaurentPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(u, c)| (u.clone(), c.sigma(k))).collect(),
        }
    }

    /// `f(z)` for a point of the torus.
    pub fn eval(&self, point: &[HahnSeries<Q>]) -> Result<HahnSeries<Q>> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = HahnSeries::zero(&self.ctx);
        for (u, c) in &self.coeffs {
            let mut term = c.clone();
            for (z, &e) in point.iter().zip(u) {
                if e != 0 {
                    term = term.try_mul(&z.pow(e)?)?;
                }
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }
}

impl<Q: Scalar> fmt::Display for LaurentPoly<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (n, (u, c)) in self.coeffs.iter().enumerate() {
            write_series_term(&mut out, n == 0, c, &format_monomial(u));
        }
        f.write_str(&out)
    }
}

/// Laurent polynomial over the residue field; the shape of an initial form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueLaurent<Q> {
    field: CycloField,
    nvars: usize,
    coeffs: BTreeMap<Exponents, CycloElement<Q>>,
}

impl<Q: Scalar> ResidueLaurent<Q> {
    pub fn new(field: CycloField, nvars: usize, terms: impl IntoIterator<Item = (Exponents, CycloElement<Q>)>) -> Self {
        let mut coeffs: BTreeMap<Exponents, CycloElement<Q>> = BTreeMap::new();
        for (u, c) in terms {
            let sum = match coeffs.remove(&u) {
                Some(prev) => field.add(&prev, &c),
                None => c,
            };
            if !sum.is_zero() {
                coeffs.insert(u, sum);
            }
        }
        ResidueLaurent { field, nvars, coeffs }
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coefficients(&self) -> &BTreeMap<Exponents, CycloElement<Q>> {
        &self.coeffs
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// `σ_kᵐ` applied to every coefficient.
    pub fn apply_aut(&self, m: i64) -> Self {
        let terms = self.coeffs.iter().map(|(u, c)| (u.clone(), self.field.apply_aut_pow(c, m)));
        Self::new(self.field.clone(), self.nvars, terms.collect::<Vec<_>>())
    }
}

impl<Q: Scalar> fmt::Display for ResidueLaurent<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (n, (u, c)) in self.coeffs.iter().enumerate() {
            let (neg, lit, is_one) = signed_coefficient(&self.field, c);
            write_term(&mut out, n == 0, neg, &lit, is_one, &format_monomial(u));
        }
        f.write_str(&out)
    }
}
