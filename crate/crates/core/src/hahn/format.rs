use std::fmt;

use super::HahnSeries;
use crate::algebra::{CycloElement, CycloField, GroupVector};
use crate::scalar::Scalar;

/// `t`, `t^3`, `t^(1/2)`, `t^(1,-2)`; empty for the zero exponent.
pub(crate) fn format_t_power<Q: Scalar>(gamma: &GroupVector<Q>) -> String {
    let coords = gamma.coords().expect("finite exponent");
    if coords.iter().all(Q::is_zero) {
        return String::new();
    }
    if coords.len() == 1 {
        let q = &coords[0];
        if q.is_one() {
            return "t".to_string();
        }
        if q.is_integer() && q.is_positive() {
            return format!("t^{q}");
        }
        return format!("t^({q})");
    }
    let parts: Vec<String> = coords.iter().map(ToString::to_string).collect();
    format!("t^({})", parts.join(","))
}

/// Splits a coefficient into a sign and a magnitude literal. Coefficients with
/// more than one nonzero coordinate are parenthesized and never negated.
pub(crate) fn signed_coefficient<Q: Scalar>(field: &CycloField, c: &CycloElement<Q>) -> (bool, String, bool) {
    if c.weight() == 1 {
        let neg = c.coeffs().iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        let mag = if neg { field.neg(c) } else { c.clone() };
        (neg, field.format(&mag), mag.is_one())
    } else {
        (false, format!("({})", field.format(c)), false)
    }
}

pub(crate) fn write_term(
    out: &mut String,
    first: bool,
    neg: bool,
    coeff: &str,
    coeff_is_one: bool,
    monomial: &str,
) {
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    match (monomial.is_empty(), coeff_is_one) {
        (true, _) => out.push_str(coeff),
        (false, true) => out.push_str(monomial),
        (false, false) => {
            out.push_str(coeff);
            out.push('*');
            out.push_str(monomial);
        }
    }
}

impl<Q: Scalar> fmt::Display for HahnSeries<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.ctx().field();
        let mut out = String::new();
        for (i, (e, c)) in self.terms().iter().enumerate() {
            let (neg, coeff, is_one) = signed_coefficient(field, c);
            write_term(&mut out, i == 0, neg, &coeff, is_one, &format_t_power(e));
        }
        if !self.is_exact() {
            let p = self.precision();
            let big_o = if p.is_zero() { "O(1)".to_string() } else { format!("O({})", format_t_power(p)) };
            if out.is_empty() {
                out = big_o;
            } else {
                out.push_str(" + ");
                out.push_str(&big_o);
            }
        } else if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Sign, coefficient literal, unit flag and `t`-power of a series used as a
/// polynomial coefficient. Anything but an exact single term is parenthesized.
pub(crate) fn series_coefficient<Q: Scalar>(s: &HahnSeries<Q>) -> (bool, String, bool, String) {
    if s.is_exact() && s.terms().len() == 1 {
        let (e, c) = &s.terms()[0];
        let (neg, lit, is_one) = signed_coefficient(s.ctx().field(), c);
        (neg, lit, is_one, format_t_power(e))
    } else {
        (false, format!("({s})"), false, String::new())
    }
}

/// Writes `coefficient * monomial` as one summand of a polynomial.
pub(crate) fn write_series_term<Q: Scalar>(out: &mut String, first: bool, coeff: &HahnSeries<Q>, monomial: &str) {
    if first && monomial.is_empty() {
        out.push_str(&coeff.to_string());
        return;
    }
    let (neg, lit, is_one, t_power) = series_coefficient(coeff);
    let mono = match (t_power.is_empty(), monomial.is_empty()) {
        (true, _) => monomial.to_string(),
        (false, true) => t_power,
        (false, false) => format!("{t_power}*{monomial}"),
    };
    write_term(out, first, neg, &lit, is_one, &mono);
}
