//! Exact rationals, univariate polynomials in `t`, binomials and Bernoulli numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim().replace('\u{2212}', "-");
    let bad = || Error::InvalidNumber(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(&s).map_err(|_| bad())?,
        )),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Binomial coefficient with the convention that it vanishes for `k < 0`, `k > n` or `n < 0`.
pub fn binom(n: i64, k: i64) -> Rational {
    Rational::from_integer(binom_int(n, k))
}

pub fn binom_int(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    table.push(Rational::one());
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += binom(m as i64 + 1, j as i64) * b;
        }
        table.push(-acc / int(m as i64 + 1));
    }
    table
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("table is never empty")
}

/// Exact polynomial in the interpolation variable `t`, stored sparsely.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    coeffs: BTreeMap<u32, Rational>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn monomial(c: Rational, exp: u32) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.coeffs.insert(exp, c);
        }
        p
    }

    /// Builds `sum c_i t^i` from integer coefficients in ascending order.
    pub fn from_ints(cs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in cs.iter().enumerate() {
            p.add_term(i as u32, int(c));
        }
        p
    }

    /// `a + b t`
    pub fn linear(a: Rational, b: Rational) -> Self {
        let mut p = Self::constant(a);
        p.add_term(1, b);
        p
    }

    /// `1 + t + ... + t^(len-1)`
    pub fn geometric(len: u32) -> Self {
        let mut p = Self::zero();
        for e in 0..len {
            p.add_term(e, Rational::one());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn is_t(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&1).is_some_and(|c| c.is_one())
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u32) -> Rational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant value, if this polynomial has degree at most zero.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.coeff(0)),
            Some(_) => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn add_term(&mut self, exp: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TPoly {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &Rational) -> Rational {
        let Some(deg) = self.degree() else {
            return Rational::zero();
        };
        let mut acc = Rational::zero();
        for e in (0..=deg).rev() {
            acc = acc * at + self.coeff(e);
        }
        acc
    }

    pub fn eval_f64(&self, at: f64) -> f64 {
        let Some(deg) = self.degree() else {
            return 0.0;
        };
        let mut acc = 0.0;
        for e in (0..=deg).rev() {
            acc = acc * at + to_f64(&self.coeff(e));
        }
        acc
    }

    /// Substitutes `t := p`.
    pub fn compose(&self, p: &TPoly) -> TPoly {
        if p.is_t() {
            return self.clone();
        }
        if let Some(c) = p.as_constant() {
            return TPoly::constant(self.eval(&c));
        }
        let Some(deg) = self.degree() else {
            return TPoly::zero();
        };
        let mut acc = TPoly::zero();
        for e in (0..=deg).rev() {
            acc = &acc * p;
            acc.add_term(0, self.coeff(e));
        }
        acc
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Renders with an explicit multiplication sign between number and `t`.
    pub fn to_string_with(&self, var: &str, mul: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let show_num = *e == 0 || !mag.is_one();
            if show_num {
                out.push_str(&mag.to_string());
                if *e > 0 {
                    out.push_str(mul);
                }
            }
            match *e {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{e}")),
            }
        }
        out
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("t", ""))
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

impl From<Rational> for TPoly {
    fn from(c: Rational) -> Self {
        TPoly::constant(c)
    }
}

impl From<i64> for TPoly {
    fn from(c: i64) -> Self {
        TPoly::from_int(c)
    }
}

impl Add<&TPoly> for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&TPoly> for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&TPoly> for TPoly {
    fn add_assign(&mut self, rhs: &TPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&TPoly> for TPoly {
    fn sub_assign(&mut self, rhs: &TPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c);
        }
    }
}

impl Mul<&TPoly> for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        let mut out = TPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Add for TPoly {
    type Output = TPoly;
    fn add(self, rhs: TPoly) -> TPoly {
        &self + &rhs
    }
}

impl Sub for TPoly {
    type Output = TPoly;
    fn sub(self, rhs: TPoly) -> TPoly {
        &self - &rhs
    }
}

impl Mul for TPoly {
    type Output = TPoly;
    fn mul(self, rhs: TPoly) -> TPoly {
        &self * &rhs
    }
}

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -&self
    }
}

impl Serialize for TPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for TPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut p = TPoly::zero();
        for (e, c) in raw {
            let e: u32 = e.parse().map_err(de::Error::custom)?;
            let c = parse_rational(&c).map_err(de::Error::custom)?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

/// Parses a polynomial in `t` with rational coefficients, e.g. `1-2t`, `-1/3`, `t^2 - t`, `3/2*t`.
pub fn parse_tpoly(src: &str) -> Result<TPoly, Error> {
    let cleaned: String = src
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect();
    let bad = || Error::InvalidNumber(src.to_string());
    if cleaned.is_empty() {
        return Err(bad());
    }
    let bytes = cleaned.as_bytes();
    let mut poly = TPoly::zero();
    let mut pos = 0;
    while pos < bytes.len() {
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
        } else if pos != 0 {
            return Err(bad());
        }
        let start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
            pos += 1;
        }
        let num = if pos > start {
            parse_rational(&cleaned[start..pos])?
        } else {
            Rational::one()
        };
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
        }
        let mut exp = 0u32;
        if pos < bytes.len() && bytes[pos] == b't' {
            pos += 1;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let s = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                exp = cleaned[s..pos].parse().map_err(|_| bad())?;
            }
        } else if pos == start {
            return Err(bad());
        }
        poly.add_term(exp, num * int(sign));
        if pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
            return Err(bad());
        }
    }
    Ok(poly)
}
