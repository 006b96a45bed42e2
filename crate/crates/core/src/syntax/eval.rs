use std::marker::PhantomData;
use std::sync::Arc;

use super::parser::{parse_expr, Exponent, Expr, ExprKind};
use crate::algebra::{CycloElement, CycloField, GroupVector};
use crate::error::{Error, Result};
use crate::hahn::{HahnSeries, Model};
use crate::scalar::Scalar;
use crate::sigma::SigmaPolynomial;
use crate::tropical::LaurentPoly;
use crate::zsigma::ZSigmaPoly;

/// One interpretation of the shared expression tree.
trait Domain {
    type V;
    fn int(&self, digits: &str, pos: usize) -> Result<Self::V>;
    fn var(&self, name: &str, pos: usize) -> Result<Self::V>;
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn neg(&self, a: Self::V) -> Result<Self::V>;
    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V>;
    fn pow(&self, base: &Expr, e: &Exponent, pos: usize) -> Result<Self::V>;
    fn sigma(&self, k: i64, inner: &Expr, pos: usize) -> Result<Self::V>;
    fn big_o(&self, inner: &Expr, pos: usize) -> Result<Self::V>;
}

fn eval<D: Domain>(d: &D, e: &Expr) -> Result<D::V> {
    match &e.kind {
        ExprKind::Int(digits) => d.int(digits, e.pos),
        ExprKind::Var(name) => d.var(name, e.pos),
        ExprKind::Neg(a) => d.neg(eval(d, a)?),
        ExprKind::Add(a, b) => d.add(eval(d, a)?, eval(d, b)?),
        ExprKind::Sub(a, b) => d.sub(eval(d, a)?, eval(d, b)?),
        ExprKind::Mul(a, b) => d.mul(eval(d, a)?, eval(d, b)?),
        ExprKind::Div(a, b) => d.div(eval(d, a)?, eval(d, b)?, b.pos),
        ExprKind::Pow(base, exp) => d.pow(base, exp, e.pos),
        ExprKind::Sigma(k, inner) => d.sigma(*k, inner, e.pos),
        ExprKind::BigO(inner) => d.big_o(inner, e.pos),
    }
}

fn int_exponent(e: &Exponent, pos: usize) -> Result<i64> {
    e.as_int().ok_or_else(|| Error::parse(pos, "expected an integer exponent"))
}

fn rational<Q: Scalar>(lit: &str, pos: usize) -> Result<Q> {
    Q::parse(lit).ok_or_else(|| Error::parse(pos, format!("invalid rational '{lit}'")))
}

/// Parses `3`, `-1/2`, `(1,-2)` or `inf`.
pub fn parse_group_vector<Q: Scalar>(src: &str) -> Result<GroupVector<Q>> {
    let s = src.trim();
    if s == "inf" {
        return Ok(GroupVector::Infinity);
    }
    let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
    let coords = inner
        .split(',')
        .map(|c| Q::parse(c.trim()).ok_or_else(|| Error::parse(0, format!("invalid value group element '{s}'"))))
        .collect::<Result<Vec<Q>>>()?;
    Ok(GroupVector::from_coords(coords))
}

struct Cyclo<'a, Q> {
    field: &'a CycloField,
    _scalar: PhantomData<Q>,
}

impl<'a, Q> Cyclo<'a, Q> {
    fn new(field: &'a CycloField) -> Self {
        Cyclo { field, _scalar: PhantomData }
    }
}

impl<Q: Scalar> Domain for Cyclo<'_, Q> {
    type V = CycloElement<Q>;

    fn int(&self, digits: &str, pos: usize) -> Result<Self::V> {
        Ok(self.field.rational(rational(digits, pos)?))
    }

    fn var(&self, name: &str, pos: usize) -> Result<Self::V> {
        match name {
            "i" => self
                .field
                .imag_unit()
                .ok_or_else(|| Error::parse(pos, format!("i is not in Q(ζ_{})", self.field.conductor()))),
            "z" => Ok(self.field.zeta_pow(1)),
            _ => Err(Error::parse(pos, format!("unknown symbol '{name}'"))),
        }
    }

    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(self.field.add(&a, &b))
    }

    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(self.field.sub(&a, &b))
    }

    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(self.field.mul(&a, &b))
    }

    fn neg(&self, a: Self::V) -> Result<Self::V> {
        Ok(self.field.neg(&a))
    }

    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V> {
        if b.is_zero() {
            return Err(Error::parse(pos, "division by zero"));
        }
        Ok(self.field.div(&a, &b))
    }

    fn pow(&self, base: &Expr, e: &Exponent, pos: usize) -> Result<Self::V> {
        let k = int_exponent(e, pos)?;
        let b: CycloElement<Q> = eval(self, base)?;
        if k < 0 && b.is_zero() {
            return Err(Error::parse(pos, "zero to a negative power"));
        }
        Ok(self.field.pow(&b, k))
    }

    fn sigma(&self, k: i64, inner: &Expr, _pos: usize) -> Result<Self::V> {
        let x: CycloElement<Q> = eval(self, inner)?;
        Ok(self.field.apply_aut_pow(&x, k))
    }

    fn big_o(&self, _inner: &Expr, pos: usize) -> Result<Self::V> {
        Err(Error::parse(pos, "O(...) is not a residue field element"))
    }
}

struct Series<'a, Q> {
    ctx: &'a Arc<Model<Q>>,
}

impl<Q: Scalar> Series<'_, Q> {
    fn t_power(&self, e: &Exponent, pos: usize) -> Result<HahnSeries<Q>> {
        let coords = e.coords().iter().map(|c| rational(c, pos)).collect::<Result<Vec<Q>>>()?;
        if coords.len() != self.ctx.rank() {
            return Err(Error::parse(
                pos,
                format!("exponent has {} coordinates, the value group has rank {}", coords.len(), self.ctx.rank()),
            ));
        }
        HahnSeries::section(self.ctx, &GroupVector::from_coords(coords))
    }

    fn is_t(e: &Expr) -> bool {
        matches!(&e.kind, ExprKind::Var(v) if v == "t")
    }
}

impl<Q: Scalar> Domain for Series<'_, Q> {
    type V = HahnSeries<Q>;

    fn int(&self, digits: &str, pos: usize) -> Result<Self::V> {
        Ok(HahnSeries::rational(self.ctx, rational(digits, pos)?))
    }

    fn var(&self, name: &str, pos: usize) -> Result<Self::V> {
        if name == "t" {
            if self.ctx.rank() != 1 {
                return Err(Error::parse(pos, "bare t needs a rank-1 value group; write t^(a,b,...)"));
            }
            return self.t_power(&Exponent::Int(1), pos);
        }
        let c = Cyclo::<Q>::new(self.ctx.field()).var(name, pos)?;
        Ok(HahnSeries::constant(self.ctx, c))
    }

    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_add(&b)
    }

    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_sub(&b)
    }

    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_mul(&b)
    }

    fn neg(&self, a: Self::V) -> Result<Self::V> {
        Ok(-a)
    }

    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V> {
        if b.is_zero() {
            return Err(Error::parse(pos, "division by zero"));
        }
        a.try_div(&b)
    }

    fn pow(&self, base: &Expr, e: &Exponent, pos: usize) -> Result<Self::V> {
        if Self::is_t(base) {
            return self.t_power(e, pos);
        }
        let k = int_exponent(e, pos)?;
        eval(self, base)?.pow(k)
    }

    fn sigma(&self, k: i64, inner: &Expr, _pos: usize) -> Result<Self::V> {
        Ok(eval(self, inner)?.sigma(k))
    }

    fn big_o(&self, inner: &Expr, pos: usize) -> Result<Self::V> {
        let precision = match &inner.kind {
            ExprKind::Int(d) if d == "1" => GroupVector::zero(self.ctx.rank()),
            ExprKind::Var(_) if Self::is_t(inner) => self.t_power(&Exponent::Int(1), pos)?.valuation()?,
            ExprKind::Pow(b, e) if Self::is_t(b) => self.t_power(e, pos)?.valuation()?,
            _ => return Err(Error::parse(pos, "expected O(1) or O(t^...)")),
        };
        HahnSeries::big_o(self.ctx, precision)
    }
}

struct Sigma<'a, Q> {
    series: Series<'a, Q>,
}

impl<Q: Scalar> Sigma<'_, Q> {
    fn constant_of(&self, p: &SigmaPolynomial<Q>, pos: usize, what: &str) -> Result<HahnSeries<Q>> {
        if !p.is_constant() {
            return Err(Error::parse(pos, format!("{what} must not involve x")));
        }
        Ok(p.coefficients().values().next().cloned().unwrap_or_else(|| HahnSeries::zero(self.series.ctx)))
    }
}

impl<Q: Scalar> Domain for Sigma<'_, Q> {
    type V = SigmaPolynomial<Q>;

    fn int(&self, digits: &str, pos: usize) -> Result<Self::V> {
        Ok(SigmaPolynomial::constant(self.series.int(digits, pos)?))
    }

    fn var(&self, name: &str, pos: usize) -> Result<Self::V> {
        if name == "x" {
            return Ok(SigmaPolynomial::variable(self.series.ctx, 0));
        }
        Ok(SigmaPolynomial::constant(self.series.var(name, pos)?))
    }

    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_add(&b)
    }

    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_sub(&b)
    }

    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_mul(&b)
    }

    fn neg(&self, a: Self::V) -> Result<Self::V> {
        Ok(a.neg())
    }

    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V> {
        let c = self.constant_of(&b, pos, "a divisor")?;
        if c.is_zero() {
            return Err(Error::parse(pos, "division by zero"));
        }
        a.scale(&c.inv()?)
    }

    fn pow(&self, base: &Expr, e: &Exponent, pos: usize) -> Result<Self::V> {
        if Series::<Q>::is_t(base) {
            return Ok(SigmaPolynomial::constant(self.series.t_power(e, pos)?));
        }
        let k = int_exponent(e, pos)?;
        let b = eval(self, base)?;
        if k >= 0 {
            let k = u32::try_from(k).map_err(|_| Error::parse(pos, "exponent too large"))?;
            return b.pow(k);
        }
        Ok(SigmaPolynomial::constant(self.constant_of(&b, pos, "a negative power")?.pow(k)?))
    }

    fn sigma(&self, k: i64, inner: &Expr, pos: usize) -> Result<Self::V> {
        let p = eval(self, inner)?;
        if k >= 0 {
            return Ok(p.sigma(k as usize));
        }
        Ok(SigmaPolynomial::constant(self.constant_of(&p, pos, "an argument of a negative σ-power")?.sigma(k)))
    }

    fn big_o(&self, inner: &Expr, pos: usize) -> Result<Self::V> {
        Ok(SigmaPolynomial::constant(self.series.big_o(inner, pos)?))
    }
}

struct Laurent<'a, Q> {
    series: Series<'a, Q>,
    nvars: usize,
}

impl<Q: Scalar> Laurent<'_, Q> {
    fn variable_index(&self, name: &str) -> Option<usize> {
        if name == "x" && self.nvars == 1 {
            return Some(0);
        }
        let k: usize = name.strip_prefix('y')?.parse().ok()?;
        (1..=self.nvars).contains(&k).then(|| k - 1)
    }

    fn constant_of(&self, p: &LaurentPoly<Q>, pos: usize) -> Result<HahnSeries<Q>> {
        match p.coefficients().iter().next() {
            None => Ok(HahnSeries::zero(self.series.ctx)),
            Some((u, c)) if p.is_monomial() && u.iter().all(|&e| e == 0) => Ok(c.clone()),
            _ => Err(Error::parse(pos, "a divisor must be a constant")),
        }
    }
}

impl<Q: Scalar> Domain for Laurent<'_, Q> {
    type V = LaurentPoly<Q>;

    fn int(&self, digits: &str, pos: usize) -> Result<Self::V> {
        Ok(LaurentPoly::constant(self.nvars, self.series.int(digits, pos)?))
    }

    fn var(&self, name: &str, pos: usize) -> Result<Self::V> {
        if let Some(j) = self.variable_index(name) {
            return Ok(LaurentPoly::variable(self.series.ctx, self.nvars, j));
        }
        Ok(LaurentPoly::constant(self.nvars, self.series.var(name, pos)?))
    }

    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_add(&b)
    }

    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_sub(&b)
    }

    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        a.try_mul(&b)
    }

    fn neg(&self, a: Self::V) -> Result<Self::V> {
        Ok(a.neg())
    }

    fn div(&self, a: Self::V, b: Self::V, pos: usize) -> Result<Self::V> {
        let c = self.constant_of(&b, pos)?;
        if c.is_zero() {
            return Err(Error::parse(pos, "division by zero"));
        }
        a.scale(&c.inv()?)
    }

    fn pow(&self, base: &Expr, e: &Exponent, pos: usize) -> Result<Self::V> {
        if Series::<Q>::is_t(base) {
            return Ok(LaurentPoly::constant(self.nvars, self.series.t_power(e, pos)?));
        }
        let k = int_exponent(e, pos)?;
        eval(self, base)?.pow(k).map_err(|err| match err {
            Error::Precondition(msg) => Error::parse(pos, msg),
            other => other,
        })
    }

    fn sigma(&self, k: i64, inner: &Expr, _pos: usize) -> Result<Self::V> {
        Ok(eval(self, inner)?.sigma(k))
    }

    fn big_o(&self, inner: &Expr, pos: usize) -> Result<Self::V> {
        Ok(LaurentPoly::constant(self.nvars, self.series.big_o(inner, pos)?))
    }
}

struct ZSigma;

impl Domain for ZSigma {
    type V = ZSigmaPoly;

    fn int(&self, digits: &str, pos: usize) -> Result<Self::V> {
        let m: i64 = digits.parse().map_err(|_| Error::parse(pos, "integer out of range"))?;
        Ok(ZSigmaPoly::constant(m))
    }

    fn var(&self, name: &str, pos: usize) -> Result<Self::V> {
        match name {
            "s" => Ok(ZSigmaPoly::sigma_power(1)),
            _ => Err(Error::parse(pos, format!("unknown symbol '{name}'; only s is allowed"))),
        }
    }

    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a + &b)
    }

    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a - &b)
    }

    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        Ok(&a * &b)
    }

    fn neg(&self, a: Self::V) -> Result<Self::V> {
        Ok(-&a)
    }

    fn div(&self, _a: Self::V, _b: Self::V, pos: usize) -> Result<Self::V> {
        Err(Error::parse(pos, "division is not defined in Z[s, 1/s]"))
    }

    fn pow(&self, base: &Expr, e: &Exponent, pos: usize) -> Result<Self::V> {
        let k = int_exponent(e, pos)?;
        if matches!(&base.kind, ExprKind::Var(v) if v == "s") {
            return Ok(ZSigmaPoly::sigma_power(k));
        }
        let k = u32::try_from(k).map_err(|_| Error::parse(pos, "only s has negative powers"))?;
        Ok(eval(self, base)?.pow(k))
    }

    fn sigma(&self, _k: i64, _inner: &Expr, pos: usize) -> Result<Self::V> {
        Err(Error::parse(pos, "s(...) is not an element of Z[s, 1/s]"))
    }

    fn big_o(&self, _inner: &Expr, pos: usize) -> Result<Self::V> {
        Err(Error::parse(pos, "O(...) is not an element of Z[s, 1/s]"))
    }
}

/// Residue field literal: rationals, `i` (when 4 divides n), `z` for ζₙ.
pub fn parse_cyclo<Q: Scalar>(field: &CycloField, src: &str) -> Result<CycloElement<Q>> {
    eval(&Cyclo::<Q>::new(field), &parse_expr(src)?)
}

/// Hahn series literal such as `1 + i*t^(1/2) + O(t^3)`.
pub fn parse_series<Q: Scalar>(ctx: &Arc<Model<Q>>, src: &str) -> Result<HahnSeries<Q>> {
    eval(&Series { ctx }, &parse_expr(src)?)
}

/// σ-polynomial in `x`, `s(x)`, `s^k(x)` with series coefficients.
pub fn parse_sigma_poly<Q: Scalar>(ctx: &Arc<Model<Q>>, src: &str) -> Result<SigmaPolynomial<Q>> {
    eval(&Sigma { series: Series { ctx } }, &parse_expr(src)?)
}

/// Laurent polynomial in `x` or in `y1, …, yn`; the number of variables is
/// the largest index used (1 for `x` or for constants).
pub fn parse_laurent<Q: Scalar>(ctx: &Arc<Model<Q>>, src: &str) -> Result<LaurentPoly<Q>> {
    let expr = parse_expr(src)?;
    let mut names = Vec::new();
    expr.variables(&mut names);
    let ys: Vec<usize> = names.iter().filter_map(|n| n.strip_prefix('y')?.parse().ok()).collect();
    if names.iter().any(|n| n == "x") && !ys.is_empty() {
        return Err(Error::parse(0, "mix of x and y-variables"));
    }
    if ys.contains(&0) {
        return Err(Error::parse(0, "variables are numbered from y1"));
    }
    let nvars = ys.into_iter().max().unwrap_or(1);
    eval(&Laurent { series: Series { ctx }, nvars }, &expr)
}

/// Laurent polynomial with a fixed number of variables.
pub fn parse_laurent_in<Q: Scalar>(ctx: &Arc<Model<Q>>, nvars: usize, src: &str) -> Result<LaurentPoly<Q>> {
    eval(&Laurent { series: Series { ctx }, nvars }, &parse_expr(src)?)
}

/// Element of `ℤ[σ, σ⁻¹]` written in `s`: `1 - s^2`, `2 + s^-1`.
pub fn parse_zsigma(src: &str) -> Result<ZSigmaPoly> {
    eval(&ZSigma, &parse_expr(src)?)
}
