use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::laurent::{format_monomial, Exponents, LaurentPoly, ResidueLaurent};
use crate::algebra::GroupVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `min_i { γᵢ + ⟨uᵢ, x⟩ }` over `Γⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial<Q> {
    pieces: Vec<(GroupVector<Q>, Exponents)>,
}

impl<Q: Scalar> TropicalPolynomial<Q> {
    /// Pieces are deduplicated and sorted; all `u` must share one length.
    pub fn new(pieces: Vec<(GroupVector<Q>, Exponents)>) -> Result<Self> {
        let n = pieces.first().ok_or_else(|| Error::Precondition("a tropical polynomial needs a piece".into()))?.1.len();
        if let Some((_, u)) = pieces.iter().find(|(_, u)| u.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: u.len() });
        }
        let set: BTreeSet<(Exponents, GroupVector<Q>)> = pieces.into_iter().map(|(g, u)| (u, g)).collect();
        Ok(TropicalPolynomial { pieces: set.into_iter().map(|(u, g)| (g, u)).collect() })
    }

    pub fn pieces(&self) -> &[(GroupVector<Q>, Exponents)] {
        &self.pieces
    }

    pub fn nvars(&self) -> usize {
        self.pieces[0].1.len()
    }

    fn piece_value(gamma0: &GroupVector<Q>, u: &[i64], point: &[GroupVector<Q>]) -> Result<GroupVector<Q>> {
        let mut acc = gamma0.clone();
        for (x, &e) in point.iter().zip(u) {
            if e != 0 {
                acc = acc.checked_add(&x.scale_int(e))?;
            }
        }
        Ok(acc)
    }

    /// Minimum value and how many pieces attain it.
    pub fn eval(&self, point: &[GroupVector<Q>]) -> Result<(GroupVector<Q>, usize)> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: point.len() });
        }
        if point.iter().any(GroupVector::is_infinite) {
            return Err(Error::Precondition("tropical points are finite".into()));
        }
        let mut best: Option<(GroupVector<Q>, usize)> = None;
        for (g, u) in &self.pieces {
            let v = Self::piece_value(g, u, point)?;
            best = match best {
                None => Some((v, 1)),
                Some((b, c)) => match v.cmp(&b) {
                    Ordering::Less => Some((v, 1)),
                    Ordering::Equal => Some((b, c + 1)),
                    Ordering::Greater => Some((b, c)),
                },
            };
        }
        Ok(best.expect("nonempty"))
    }

    pub fn is_root(&self, point: &[GroupVector<Q>]) -> Result<bool> {
        Ok(self.eval(point)?.1 >= 2)
    }

    /// All tropical roots of a univariate polynomial: each pairwise breakpoint
    /// `(γⱼ - γᵢ)/(uᵢ - uⱼ)`, kept when the minimum is attained twice there.
    pub fn roots_univariate(&self) -> Result<BTreeSet<GroupVector<Q>>> {
        if self.nvars() != 1 {
            return Err(Error::NotUnivariate);
        }
        let mut roots = BTreeSet::new();
        for (i, (gi, ui)) in self.pieces.iter().enumerate() {
            for (gj, uj) in &self.pieces[i + 1..] {
                if ui[0] == uj[0] {
                    continue;
                }
                let diff = gj.checked_add(&-gi)?;
                let x = diff.scale(&(Q::one() / Q::from_int(ui[0] - uj[0])));
                if !roots.contains(&x) && self.is_root(std::slice::from_ref(&x))? {
                    roots.insert(x);
                }
            }
        }
        Ok(roots)
    }
}

impl<Q: Scalar> fmt::Display for TropicalPolynomial<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(g, u)| {
                let m = format_monomial(u);
                if m.is_empty() {
                    g.to_string()
                } else {
                    format!("{g} + <{}>", u.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        write!(f, "min{{{}}}", parts.join(", "))
    }
}

fn indeterminate<Q: Scalar>(s: &crate::hahn::HahnSeries<Q>) -> Error {
    Error::IndeterminateAtPrecision(format!("coefficient valuation unknown below {}", s.precision()))
}

/// `min { v(c_u) + ⟨u, x⟩ : u ∈ S }`.
pub fn tropicalize<Q: Scalar>(f: &LaurentPoly<Q>) -> Result<TropicalPolynomial<Q>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pieces = f
        .coefficients()
        .iter()
        .map(|(u, c)| c.valuation().map(|v| (v, u.clone())).map_err(|_| indeterminate(c)))
        .collect::<Result<_>>()?;
    TropicalPolynomial::new(pieces)
}

/// `Σ_{u ∈ S'} ac(c_u) x^u` where `S'` is where `v(c_u) + ⟨u, γ⟩` is least.
pub fn initial_form<Q: Scalar>(f: &LaurentPoly<Q>, gamma: &[GroupVector<Q>]) -> Result<ResidueLaurent<Q>> {
    let trop = tropicalize(f)?;
    let (min, _) = trop.eval(gamma)?;
    let mut terms = Vec::new();
    for (u, c) in f.coefficients() {
        let v = c.valuation().map_err(|_| indeterminate(c))?;
        if TropicalPolynomial::piece_value(&v, u, gamma)? == min {
            terms.push((u.clone(), c.ac()?));
        }
    }
    Ok(ResidueLaurent::new(f.ctx().field().clone(), f.nvars(), terms))
}

/// Valuations of the roots of a univariate `f` in the algebraic closure, with
/// multiplicity: `-slope` of each lower Newton polygon edge, repeated by its width.
pub fn newton_valuations<Q: Scalar>(f: &LaurentPoly<Q>) -> Result<BTreeMap<GroupVector<Q>, u64>> {
    if f.nvars() != 1 {
        return Err(Error::NotUnivariate);
    }
    if f.coefficients().len() < 2 {
        return Err(Error::MonomialInput);
    }
    let points: Vec<(i64, GroupVector<Q>)> = f
        .coefficients()
        .iter()
        .map(|(u, c)| c.valuation().map(|v| (u[0], v)).map_err(|_| indeterminate(c)))
        .collect::<Result<_>>()?;
    let slope = |a: &(i64, GroupVector<Q>), b: &(i64, GroupVector<Q>)| -> GroupVector<Q> {
        (&b.1 - &a.1).scale(&(Q::one() / Q::from_int(b.0 - a.0)))
    };
    // lower hull by monotone chain; exponents are already increasing
    let mut hull: Vec<(i64, GroupVector<Q>)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            if slope(a, b) >= slope(b, &p) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out: BTreeMap<GroupVector<Q>, u64> = BTreeMap::new();
    for w in hull.windows(2) {
        let val = -&slope(&w[0], &w[1]);
        *out.entry(val).or_default() += (w[1].0 - w[0].0) as u64;
    }
    Ok(out)
}

/// Outcome of comparing tropical roots with Newton polygon valuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KapranovReport<Q> {
    Pass { roots: Vec<GroupVector<Q>> },
    RootSetMismatch { tropical: Vec<GroupVector<Q>>, newton: Vec<GroupVector<Q>> },
    MonomialInitialForm { root: GroupVector<Q> },
}

impl<Q> KapranovReport<Q> {
    pub fn passed(&self) -> bool {
        matches!(self, KapranovReport::Pass { .. })
    }
}

/// Checks, for univariate `f`, that tropical roots equal the support of the
/// Newton valuations and that every root has a non-monomial initial form.
pub fn kapranov_check<Q: Scalar>(f: &LaurentPoly<Q>) -> Result<KapranovReport<Q>> {
    let tropical: Vec<GroupVector<Q>> = tropicalize(f)?.roots_univariate()?.into_iter().collect();
    let newton: Vec<GroupVector<Q>> = newton_valuations(f)?.into_keys().collect();
    if tropical != newton {
        return Ok(KapranovReport::RootSetMismatch { tropical, newton });
    }
    for root in &tropical {
        if initial_form(f, std::slice::from_ref(root))?.is_monomial() {
            return Ok(KapranovReport::MonomialInitialForm { root: root.clone() });
        }
    }
    Ok(KapranovReport::Pass { roots: tropical })
}
