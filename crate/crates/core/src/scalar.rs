//! Exact scalar abstraction.
//!
//! Every structure in this crate is generic over an exact rational type.
//! Floating point types are deliberately not admitted: valuations, initial
//! forms and lattice tests all hinge on exact zero tests.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// An exact ordered field of rationals.
pub trait Scalar:
    Clone + Debug + Display + Eq + Ord + Hash + Num + Signed + Send + Sync + 'static
{
    /// The underlying integer type (numerators and denominators).
    type Int: Integer
        + Signed
        + Roots
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync;

    fn from_parts(numer: Self::Int, denom: Self::Int) -> Self;
    fn numer(&self) -> Self::Int;
    fn denom(&self) -> Self::Int;

    fn from_int(n: i64) -> Self {
        Self::from_parts(Self::int(n), Self::Int::one())
    }

    fn int(n: i64) -> Self::Int {
        Self::Int::from_i64(n).expect("integer out of range for scalar type")
    }

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_parts(Self::int(n), Self::int(d))
    }

    fn is_integer(&self) -> bool {
        self.denom().is_one()
    }

    /// Parses `p`, `-p` or `p/q`.
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        match s.split_once('/') {
            Some((n, d)) => {
                let n = Self::Int::from_str_radix(n.trim(), 10).ok()?;
                let d = Self::Int::from_str_radix(d.trim(), 10).ok()?;
                if d.is_zero() {
                    None
                } else {
                    Some(Self::from_parts(n, d))
                }
            }
            None => Some(Self::from_parts(
                Self::Int::from_str_radix(s, 10).ok()?,
                Self::Int::one(),
            )),
        }
    }

    /// Small integers that fit in an `i64`.
    fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Integer
        + Signed
        + Roots
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static,
{
    type Int = T;

    fn from_parts(numer: T, denom: T) -> Self {
        Ratio::new(numer, denom)
    }

    fn numer(&self) -> T {
        Ratio::numer(self).clone()
    }

    fn denom(&self) -> T {
        Ratio::denom(self).clone()
    }
}

/// Exact `k`-th root of a rational, if it exists.
pub fn rational_root<Q: Scalar>(q: &Q, k: u32) -> Option<Q> {
    if k == 0 {
        return None;
    }
    if q.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return rational_root(&-q.clone(), k).map(|r| -r);
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.nth_root(k);
    let rd = d.nth_root(k);
    let back = Q::from_parts(rn.clone(), rd.clone());
    if num_traits::pow(back.clone(), k as usize) == *q {
        Some(back)
    } else {
        None
    }
}
