//! Cyclotomic residue fields `Q(ζ_n)` with the power automorphism `ζ ↦ ζ^a`.
//!
//! Elements are coordinate vectors over the power basis `1, ζ, …, ζ^{d-1}`,
//! `d = φ(n)`, always fully reduced modulo `Φ_n`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use super::linsolve;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

static PHI_CACHE: OnceLock<Mutex<HashMap<u32, Arc<[i64]>>>> = OnceLock::new();

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<[i64]> {
    assert!(n >= 1, "conductor must be positive");
    let cache = PHI_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    let phi: Arc<[i64]> = num.into();
    cache.lock().unwrap().entry(n).or_insert(phi).clone()
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u32
}

/// `Q(ζ_n)` equipped with `σ_k: ζ ↦ ζ^a`.
#[derive(Clone)]
pub struct CycloField {
    n: u32,
    aut: u32,
    phi: Arc<[i64]>,
    /// `ζ^k mod Φ_n` for `0 ≤ k < n`.
    powers: Arc<[Vec<i64>]>,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.aut == other.aut
    }
}

impl Eq for CycloField {}

impl std::hash::Hash for CycloField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.aut.hash(state);
    }
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloField(n={}, a={})", self.n, self.aut)
    }
}

impl CycloField {
    pub fn new(n: u32, a: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidField("conductor must be positive".into()));
        }
        let a = a.rem_euclid(n as i64) as u32;
        let a = if n == 1 { 1 } else { a };
        if a.gcd(&n) != 1 {
            return Err(Error::InvalidField(format!("automorphism exponent {a} is not a unit mod {n}")));
        }
        let phi = cyclotomic_polynomial(n);
        let d = phi.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; d];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by ζ and reduce with the monic Φ_n
            let top = cur[d - 1];
            for j in (1..d).rev() {
                cur[j] = cur[j - 1] - top * phi[j];
            }
            cur[0] = -top * phi[0];
        }
        Ok(CycloField { n, aut: a, phi, powers: powers.into() })
    }

    /// `Q` with the identity.
    pub fn rationals() -> Self {
        Self::new(1, 1).expect("Q is a valid field")
    }

    /// The same field with a different automorphism exponent.
    pub fn with_aut(&self, a: i64) -> Result<Self> {
        Self::new(self.n, a)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn aut_exponent(&self) -> u32 {
        self.aut
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self) -> &[i64] {
        &self.phi
    }

    /// Multiplicative order of `a` modulo `n`, i.e. the order of `σ_k`.
    pub fn aut_order(&self) -> u32 {
        if self.n <= 2 {
            return 1;
        }
        let mut e = self.aut % self.n;
        let mut k = 1;
        while e != 1 {
            e = e * self.aut % self.n;
            k += 1;
        }
        k
    }

    pub fn zero<Q: Scalar>(&self) -> CycloElement<Q> {
        CycloElement { coeffs: vec![Q::zero(); self.degree()] }
    }

    pub fn one<Q: Scalar>(&self) -> CycloElement<Q> {
        self.rational(Q::one())
    }

    pub fn rational<Q: Scalar>(&self, q: Q) -> CycloElement<Q> {
        let mut x = self.zero();
        x.coeffs[0] = q;
        x
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow<Q: Scalar>(&self, k: i64) -> CycloElement<Q> {
        let k = k.rem_euclid(self.n as i64) as usize;
        CycloElement { coeffs: self.powers[k].iter().map(|&c| Q::from_int(c)).collect() }
    }

    /// `√-1 = ζ^{n/4}` when `4 | n`.
    pub fn imag_unit<Q: Scalar>(&self) -> Option<CycloElement<Q>> {
        (self.n % 4 == 0).then(|| self.zeta_pow(self.n as i64 / 4))
    }

    pub fn from_coeffs<Q: Scalar>(&self, coeffs: Vec<Q>) -> Result<CycloElement<Q>> {
        if coeffs.len() != self.degree() {
            return Err(Error::DimensionMismatch { expected: self.degree(), found: coeffs.len() });
        }
        Ok(CycloElement { coeffs })
    }

    pub fn add<Q: Scalar>(&self, x: &CycloElement<Q>, y: &CycloElement<Q>) -> CycloElement<Q> {
        CycloElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub<Q: Scalar>(&self, x: &CycloElement<Q>, y: &CycloElement<Q>) -> CycloElement<Q> {
        CycloElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn neg<Q: Scalar>(&self, x: &CycloElement<Q>) -> CycloElement<Q> {
        CycloElement { coeffs: x.coeffs.iter().map(|a| -a.clone()).collect() }
    }

    pub fn scale<Q: Scalar>(&self, x: &CycloElement<Q>, q: &Q) -> CycloElement<Q> {
        CycloElement { coeffs: x.coeffs.iter().map(|a| a.clone() * q.clone()).collect() }
    }

    pub fn mul<Q: Scalar>(&self, x: &CycloElement<Q>, y: &CycloElement<Q>) -> CycloElement<Q> {
        let d = self.degree();
        let n = self.n as usize;
        let mut out = vec![Q::zero(); d];
        for (j, a) in x.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (k, b) in y.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a.clone() * b.clone();
                for (o, &p) in out.iter_mut().zip(self.powers[(j + k) % n].iter()) {
                    if p != 0 {
                        *o = o.clone() + ab.clone() * Q::from_int(p);
                    }
                }
            }
        }
        CycloElement { coeffs: out }
    }

    /// Multiplicative inverse with the convention `0⁻¹ = 0`.
    pub fn inv<Q: Scalar>(&self, x: &CycloElement<Q>) -> CycloElement<Q> {
        if x.is_zero() {
            return self.zero();
        }
        let d = self.degree();
        let cols: Vec<CycloElement<Q>> = (0..d).map(|j| self.mul(x, &self.zeta_pow(j as i64))).collect();
        let m: Vec<Vec<Q>> = (0..d).map(|i| cols.iter().map(|c| c.coeffs[i].clone()).collect()).collect();
        let one = self.one::<Q>();
        let y = linsolve::solve(&m, &one.coeffs).expect("nonzero element of a field is invertible");
        CycloElement { coeffs: y }
    }

    pub fn div<Q: Scalar>(&self, x: &CycloElement<Q>, y: &CycloElement<Q>) -> CycloElement<Q> {
        self.mul(x, &self.inv(y))
    }

    pub fn pow<Q: Scalar>(&self, x: &CycloElement<Q>, k: i64) -> CycloElement<Q> {
        let base = if k < 0 { self.inv(x) } else { x.clone() };
        let mut acc = self.one();
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// `σ_k(x)`: substitute `ζ ↦ ζ^a`.
    pub fn apply_aut<Q: Scalar>(&self, x: &CycloElement<Q>) -> CycloElement<Q> {
        self.apply_aut_pow(x, 1)
    }

    /// `σ_k^k(x)` for any integer `k` (negative powers use `a⁻¹ mod n`).
    pub fn apply_aut_pow<Q: Scalar>(&self, x: &CycloElement<Q>, k: i64) -> CycloElement<Q> {
        let e = self.aut_power_exponent(k) as usize;
        let n = self.n as usize;
        let mut out = vec![Q::zero(); self.degree()];
        for (j, a) in x.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (o, &p) in out.iter_mut().zip(self.powers[(e * j) % n].iter()) {
                if p != 0 {
                    *o = o.clone() + a.clone() * Q::from_int(p);
                }
            }
        }
        CycloElement { coeffs: out }
    }

    /// `a^k mod n`.
    pub fn aut_power_exponent(&self, k: i64) -> u32 {
        if self.n == 1 {
            return 0;
        }
        let n = self.n as i64;
        let base = if k < 0 {
            let ext = (self.aut as i64).extended_gcd(&n);
            ext.x.rem_euclid(n)
        } else {
            self.aut as i64
        };
        let mut acc = 1i64;
        for _ in 0..k.unsigned_abs() {
            acc = acc * base % n;
        }
        acc as u32
    }

    /// Canonical literal, parseable by the series grammar.
    pub fn format<Q: Scalar>(&self, x: &CycloElement<Q>) -> String {
        let mut out = String::new();
        for (j, c) in x.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let basis = match j {
                0 => String::new(),
                1 if self.n == 4 => "i".to_string(),
                1 => "z".to_string(),
                _ => format!("z^{j}"),
            };
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if basis.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&basis);
            } else {
                out.push_str(&format!("{mag}*{basis}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// An element of a [`CycloField`]; plain coordinates, the field supplies arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloElement<Q> {
    coeffs: Vec<Q>,
}

impl<Q: Scalar> CycloElement<Q> {
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Q::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// `Some(q)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coeffs[1..].iter().all(Q::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Exact field arithmetic in `Q(ζ_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Mul,
    Inv,
    Pow(i64),
}

pub fn cyclo_arith<Q: Scalar>(
    field: &CycloField,
    op: CycloOp,
    x: &CycloElement<Q>,
    y: Option<&CycloElement<Q>>,
) -> Result<CycloElement<Q>> {
    let missing = || Error::Precondition("binary operation needs a second operand".into());
    Ok(match op {
        CycloOp::Add => field.add(x, y.ok_or_else(missing)?),
        CycloOp::Mul => field.mul(x, y.ok_or_else(missing)?),
        CycloOp::Inv => field.inv(x),
        CycloOp::Pow(k) => field.pow(x, k),
    })
}

pub fn apply_field_aut<Q: Scalar>(field: &CycloField, x: &CycloElement<Q>) -> CycloElement<Q> {
    field.apply_aut(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type E = CycloElement<BigRational>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    fn gauss(f: &CycloField, re: BigRational, im: BigRational) -> E {
        f.from_coeffs(vec![re, im]).unwrap()
    }

    #[test]
    fn phi_table() {
        let table: &[(u32, &[i64])] = &[
            (1, &[-1, 1]),
            (2, &[1, 1]),
            (3, &[1, 1, 1]),
            (4, &[1, 0, 1]),
            (5, &[1, 1, 1, 1, 1]),
            (6, &[1, -1, 1]),
            (8, &[1, 0, 0, 0, 1]),
            (9, &[1, 0, 0, 1, 0, 0, 1]),
            (10, &[1, -1, 1, -1, 1]),
            (12, &[1, 0, -1, 0, 1]),
            (15, &[1, -1, 0, 1, -1, 1, 0, -1, 1]),
        ];
        for &(n, coeffs) in table {
            assert_eq!(&*cyclotomic_polynomial(n), coeffs, "Φ_{n}");
        }
        // the first cyclotomic polynomial with a coefficient outside {-1,0,1}
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn phi_products_recover_x_pow_n_minus_one() {
        for n in 1..=64u32 {
            let mut prod = vec![1i64];
            for d in (1..=n).filter(|d| n % d == 0) {
                let p = cyclotomic_polynomial(d);
                let mut next = vec![0i64; prod.len() + p.len() - 1];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in p.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                prod = next;
            }
            let mut expect = vec![0i64; n as usize + 1];
            expect[0] = -1;
            expect[n as usize] = 1;
            assert_eq!(prod, expect, "n = {n}");
            assert_eq!(cyclotomic_polynomial(n).len() - 1, totient(n) as usize);
        }
    }

    #[test]
    fn gaussian_rationals() {
        let f = CycloField::new(4, 3).unwrap();
        let i: E = f.imag_unit().unwrap();
        assert_eq!(f.mul(&i, &i), f.rational(q(-1, 1)));
        let one_plus_i = gauss(&f, q(1, 1), q(1, 1));
        assert_eq!(f.inv(&one_plus_i), gauss(&f, q(1, 2), q(-1, 2)));
        assert_eq!(f.inv(&f.zero::<BigRational>()), f.zero());
        assert_eq!(f.apply_aut(&i), f.neg(&i));
        assert_eq!(f.format(&gauss(&f, q(1, 2), q(-3, 1))), "1/2 - 3*i");
        assert_eq!(f.aut_order(), 2);
    }

    #[test]
    fn aut_on_q_and_q_zeta5() {
        let rat = CycloField::rationals();
        let x: E = rat.rational(q(7, 3));
        assert_eq!(rat.apply_aut(&x), x);

        let f = CycloField::new(5, 2).unwrap();
        let z1: E = f.zeta_pow(1);
        let z4: E = f.zeta_pow(4);
        let z2: E = f.zeta_pow(2);
        let z3: E = f.zeta_pow(3);
        assert_eq!(f.apply_aut(&f.add(&z1, &z4)), f.add(&z2, &z3));
        assert_eq!(f.aut_order(), 4);
        let mut y = f.add(&z1, &f.rational(q(2, 1)));
        for _ in 0..4 {
            y = f.apply_aut(&y);
        }
        assert_eq!(y, f.add(&z1, &f.rational(q(2, 1))));
    }

    #[test]
    fn negative_aut_powers_invert() {
        let f = CycloField::new(7, 3).unwrap();
        let x: E = f.add(&f.zeta_pow(1), &f.scale(&f.zeta_pow(4), &q(5, 2)));
        assert_eq!(f.apply_aut_pow(&f.apply_aut(&x), -1), x);
    }

    #[test]
    fn rejects_non_units() {
        assert!(CycloField::new(4, 2).is_err());
        assert!(CycloField::new(0, 1).is_err());
    }
}
