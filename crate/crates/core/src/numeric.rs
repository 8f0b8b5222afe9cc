//! Floating-point evaluation: truncated MZV sums, `Z`, `Z^t`, the regularized maps
//! `Z^⧢`, `Z^∗` as polynomials in `T`, the correction `ρ`, and Bernoulli closed forms.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, Product};
use crate::error::Error;
use crate::exactnum::{bernoulli_table, factorial, int, to_f64, Rational, TPoly};
use crate::maps::{s_map, weak_compositions};
use crate::regularize::decompose;
use crate::words::{Index, Word};

/// Truncation parameters for the nested series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Upper bound of the outer summation for depth >= 2.
    pub m: usize,
    /// Partial-sum length before the Euler–Maclaurin tail at depth 1.
    pub m_single: usize,
    /// Strict inequalities (MZV) or non-strict (MZSV).
    pub strict: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            m: 100_000,
            m_single: 1000,
            strict: true,
        }
    }
}

impl EvalConfig {
    pub fn with_terms(m: usize) -> Result<Self, Error> {
        let cfg = EvalConfig {
            m,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.m < 10 || self.m_single < 10 {
            return Err(Error::Param("truncation bounds must be at least 10".into()));
        }
        Ok(())
    }

    pub fn star(self) -> Self {
        EvalConfig {
            strict: false,
            ..self
        }
    }
}

/// A value with its heuristic truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

/// `Σ_{m<=n} m^-k + n^(1-k)/(k-1) - n^-k/2 + k n^(-k-1)/12`
fn zeta_single_em(k: u32, n: usize) -> f64 {
    let kf = k as f64;
    let mut s = 0.0;
    for m in (1..=n).rev() {
        s += (m as f64).powi(-(k as i32));
    }
    let nf = n as f64;
    s + nf.powf(1.0 - kf) / (kf - 1.0) - 0.5 * nf.powf(-kf) + kf * nf.powf(-kf - 1.0) / 12.0
}

/// Truncated `ζ(k)` (strict) or `ζ⋆(k)` with error estimate `2|v(M) - v(M/2)|`.
pub fn mzv_eval(k: &Index, cfg: &EvalConfig) -> Result<Estimate, Error> {
    cfg.validate()?;
    if k.depth() == 0 {
        return Ok(Estimate {
            value: 1.0,
            err: 0.0,
        });
    }
    if !k.is_admissible() {
        return Err(Error::NotAdmissible(k.to_string()));
    }
    let parts = k.parts();
    if parts.len() == 1 {
        let full = zeta_single_em(parts[0], cfg.m_single);
        let half = zeta_single_em(parts[0], cfg.m_single / 2);
        return Ok(Estimate {
            value: full,
            err: 2.0 * (full - half).abs(),
        });
    }
    let m = cfg.m;
    // prefix[j] holds the partial sum of the inner levels up to j
    let mut prefix = vec![0.0f64; m + 1];
    let mut first = true;
    for &kk in parts.iter().rev() {
        let mut next = vec![0.0f64; m + 1];
        let mut acc = 0.0;
        for j in 1..=m {
            let inner = if first {
                1.0
            } else if cfg.strict {
                prefix[j - 1]
            } else {
                prefix[j]
            };
            acc += inner * (j as f64).powi(-(kk as i32));
            next[j] = acc;
        }
        prefix = next;
        first = false;
    }
    let full = prefix[m];
    let half = prefix[m / 2];
    Ok(Estimate {
        value: full,
        err: 2.0 * (full - half).abs(),
    })
}

/// `-B_{2n} / (2 (2n)!) λ^{2n}` with `λ = 2π i`, as a real number.
pub fn euler_zeta_even(n: u32) -> f64 {
    let b = &bernoulli_table(2 * n as usize)[2 * n as usize];
    let coeff = -b / (int(2) * Rational::from_integer(factorial(2 * n as u64)));
    // λ^{2n} = (-1)^n (2π)^{2n}
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    to_f64(&coeff) * sign * (2.0 * PI).powi(2 * n as i32)
}

/// Polynomial in `t` and `T` with complex coefficients and a truncation-error estimate.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NumPolyTT {
    coeffs: BTreeMap<(u32, u32), Complex64>,
    pub err: f64,
}

impl NumPolyTT {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(0, 0, Complex64::new(c, 0.0))
    }

    pub fn monomial(t_exp: u32, big_t_exp: u32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(t_exp, big_t_exp, c);
        p
    }

    /// Real polynomial in `t` from exact coefficients, scaled by `v`.
    pub fn from_tpoly(p: &TPoly, v: f64) -> Self {
        let mut out = Self::zero();
        for (e, c) in p.terms() {
            out.add_term(e, 0, Complex64::new(to_f64(c) * v, 0.0));
        }
        out
    }

    pub fn add_term(&mut self, t_exp: u32, big_t_exp: u32, c: Complex64) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .coeffs
            .entry((t_exp, big_t_exp))
            .or_insert_with(Complex64::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(t_exp, big_t_exp));
        }
    }

    pub fn coeff(&self, t_exp: u32, big_t_exp: u32) -> Complex64 {
        self.coeffs
            .get(&(t_exp, big_t_exp))
            .copied()
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn max_t_degree(&self) -> u32 {
        self.coeffs.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn max_big_t_degree(&self) -> u32 {
        self.coeffs.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.0, k.1, *v);
        }
        out.err = self.err + other.err;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.coeffs {
            out.add_term(k.0, k.1, v * c);
        }
        out.err = self.err * c.abs();
        out
    }

    /// Product; the error estimate is propagated to first order.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                out.add_term(ka.0 + kb.0, ka.1 + kb.1, va * vb);
            }
        }
        out.err = self.err * other.l1() + other.err * self.l1() + self.err * other.err;
        out
    }

    /// Multiplies by an exact polynomial in `t`.
    pub fn mul_tpoly(&self, p: &TPoly) -> Self {
        self.mul(&Self::from_tpoly(p, 1.0))
    }

    fn l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Substitutes a number for `t`.
    pub fn at_t(&self, t: f64) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.coeffs {
            out.add_term(0, k.1, v * t.powi(k.0 as i32));
        }
        out.err = self.err;
        out
    }

    /// The `T^0` part.
    pub fn at_big_t_zero(&self) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.coeffs {
            if k.1 == 0 {
                out.add_term(k.0, 0, *v);
            }
        }
        out.err = self.err;
        out
    }

    /// Real coefficient of `t^i` for a polynomial without `T`.
    pub fn re_t(&self, i: u32) -> f64 {
        self.coeff(i, 0).re
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(NumPolyJson::from(self)).expect("serializable")
    }

    /// Text form `a + b*t + c*T + ...` with real parts only.
    pub fn render(&self, digits: usize) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((i, j), c) in &self.coeffs {
            let mut mono = String::new();
            if *i > 0 {
                mono.push_str(&if *i == 1 { "t".into() } else { format!("t^{i}") });
            }
            if *j > 0 {
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&if *j == 1 { "T".into() } else { format!("T^{j}") });
            }
            let num = format!("{:.*}", digits, c.re);
            parts.push(if mono.is_empty() {
                num
            } else {
                format!("{num}*{mono}")
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[derive(Serialize, Deserialize)]
struct NumTermJson {
    t: u32,
    #[serde(rename = "T")]
    big_t: u32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct NumPolyJson {
    terms: Vec<NumTermJson>,
    err: f64,
}

impl From<&NumPolyTT> for NumPolyJson {
    fn from(p: &NumPolyTT) -> Self {
        NumPolyJson {
            terms: p
                .coeffs
                .iter()
                .map(|((i, j), c)| NumTermJson {
                    t: *i,
                    big_t: *j,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
            err: p.err,
        }
    }
}

impl Serialize for NumPolyTT {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NumPolyJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NumPolyTT {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = NumPolyJson::deserialize(deserializer)?;
        let mut p = NumPolyTT::zero();
        for t in raw.terms {
            p.add_term(t.t, t.big_t, Complex64::new(t.re, t.im));
        }
        p.err = raw.err;
        Ok(p)
    }
}

/// Evaluator with a per-index cache of truncated sums.
pub struct Evaluator {
    cfg: EvalConfig,
    cache: Mutex<HashMap<(Vec<u32>, bool), Estimate>>,
}

impl Evaluator {
    pub fn new(cfg: EvalConfig) -> Result<Self, Error> {
        cfg.validate()?;
        Ok(Evaluator {
            cfg,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &EvalConfig {
        &self.cfg
    }

    fn lookup(&self, k: &Index, strict: bool) -> Result<Estimate, Error> {
        let key = (k.0.clone(), strict);
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(*hit);
        }
        let cfg = EvalConfig { strict, ..self.cfg };
        let est = mzv_eval(k, &cfg)?;
        self.cache.lock().expect("cache lock").insert(key, est);
        Ok(est)
    }

    /// `ζ(k)`
    pub fn zeta(&self, k: &Index) -> Result<Estimate, Error> {
        self.lookup(k, true)
    }

    /// `ζ⋆(k)`
    pub fn zeta_star(&self, k: &Index) -> Result<Estimate, Error> {
        self.lookup(k, false)
    }

    pub fn zeta_parts(&self, parts: &[u32]) -> Result<Estimate, Error> {
        self.zeta(&Index(parts.to_vec()))
    }

    /// `Z`: word-wise MZVs, keeping `t` as a polynomial variable.
    pub fn z_eval(&self, a: &Element) -> Result<NumPolyTT, Error> {
        a.check_h0()?;
        let mut out = NumPolyTT::zero();
        for (w, c) in a.terms() {
            let est = if w == Word::EMPTY {
                Estimate {
                    value: 1.0,
                    err: 0.0,
                }
            } else {
                self.zeta(&Index::from_word(w)?)?
            };
            let mut term = NumPolyTT::from_tpoly(c, est.value);
            term.err = est.err * c.terms().map(|(_, v)| to_f64(v).abs()).sum::<f64>();
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `Z^t = Z ∘ S_t`.
    pub fn zt_eval(&self, a: &Element) -> Result<NumPolyTT, Error> {
        a.check_h0()?;
        self.z_eval(&s_map(a, &TPoly::t()))
    }

    /// `ζ^t(k)` as a polynomial in `t`.
    pub fn zeta_t(&self, k: &Index) -> Result<NumPolyTT, Error> {
        if !k.is_admissible() {
            return Err(Error::NotAdmissible(k.to_string()));
        }
        self.zt_eval(&Element::index(k))
    }

    /// Regularized value as a polynomial in `T`. Component `i` of the decomposition
    /// maps to `Z(w_i) T^i` for the classical products and `Z^t(w_i) T^i` for the
    /// t-products (which use `p = t`).
    pub fn z_reg_eval(&self, a: &Element, product: Product) -> Result<NumPolyTT, Error> {
        let d = decompose(a, product, &TPoly::t())?;
        let t_version = matches!(product, Product::TShuffle | Product::TStuffle);
        let mut out = NumPolyTT::zero();
        for (i, comp) in d.components.iter().enumerate() {
            let v = if t_version {
                self.zt_eval(comp)?
            } else {
                self.z_eval(comp)?
            };
            let mut shifted = NumPolyTT::zero();
            for ((te, _), c) in v.terms() {
                shifted.add_term(te, i as u32, c);
            }
            shifted.err = v.err;
            out = out.add(&shifted);
        }
        Ok(out)
    }

    /// Coefficients `α_0..=α_order` of `A(u) = exp(Σ_{n>=2} (-1)^n ζ(n) u^n / n)`.
    pub fn a_series(&self, order: usize) -> Result<Vec<f64>, Error> {
        let mut b = vec![0.0; order + 1];
        for (n, slot) in b.iter_mut().enumerate().skip(2) {
            let z = self.zeta_parts(&[n as u32])?.value;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            *slot = sign * z / n as f64;
        }
        // a' = b' a
        let mut a = vec![0.0; order + 1];
        a[0] = 1.0;
        for m in 1..=order {
            let mut s = 0.0;
            for j in 1..=m {
                s += j as f64 * b[j] * a[m - j];
            }
            a[m] = s / m as f64;
        }
        Ok(a)
    }

    /// `ρ(T^n) = Σ_j n!/(n-j)! α_j T^{n-j}`, extended linearly.
    pub fn rho_apply(&self, q: &NumPolyTT) -> Result<NumPolyTT, Error> {
        let order = q.max_big_t_degree() as usize + 1;
        let alpha = self.a_series(order)?;
        let mut out = NumPolyTT::zero();
        for ((te, n), c) in q.terms() {
            let mut falling = 1.0;
            for j in 0..=n {
                if j > 0 {
                    falling *= (n - j + 1) as f64;
                }
                out.add_term(te, n - j, c * (falling * alpha[j as usize]));
            }
        }
        out.err = q.err;
        Ok(out)
    }
}

/// `β_{2m} = B_{2m} (2 - 4^m)`
pub fn beta_even(m: usize, bern: &[Rational]) -> Rational {
    let four_m = Rational::from_integer(num_bigint::BigInt::from(4u32).pow(m as u32));
    &bern[2 * m] * (int(2) - four_m)
}

/// `e^{2π i r / k}`; quarter turns are exact.
pub fn root_of_unity(r: usize, k: usize) -> Complex64 {
    let r = r % k;
    if (4 * r).is_multiple_of(k) {
        return match 4 * r / k {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = 2.0 * PI * r as f64 / k as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// `Σ Π_p β_{2n_p} / ((2n_p)! (2l_p + 1)!)` over weak compositions `n` of `m·j_star` and
/// `l` of `m·j_strict` into `m` parts, bucketed by `Σ_p p (n_p + l_p) mod m`.
pub fn bernoulli_block(m: usize, j_star: usize, j_strict: usize) -> Vec<Rational> {
    let bern = bernoulli_table(2 * m * (j_star + j_strict) + 2);
    let fact = |x: usize| Rational::from_integer(factorial(x as u64));
    let mut out = vec![Rational::zero(); m];
    let ns = weak_compositions((j_star * m) as u32, m);
    let ls = weak_compositions((j_strict * m) as u32, m);
    let star_terms: Vec<(Rational, usize)> = ns
        .iter()
        .map(|nv| {
            let mut c = Rational::one();
            let mut r = 0;
            for (p, &np) in nv.iter().enumerate() {
                c *= beta_even(np as usize, &bern) / fact(2 * np as usize);
                r += p * np as usize;
            }
            (c, r)
        })
        .collect();
    for lv in &ls {
        let mut c = Rational::one();
        let mut r = 0;
        for (p, &lp) in lv.iter().enumerate() {
            c /= fact(2 * lp as usize + 1);
            r += p * lp as usize;
        }
        for (sc, sr) in &star_terms {
            out[(r + sr) % m] += &c * sc;
        }
    }
    out
}

/// `Σ_r p_r(t) e^{2π i r / m} · scale`, insisting that the imaginary parts cancel.
pub fn residues_to_real(by_residue: &[TPoly], scale: f64) -> Result<NumPolyTT, Error> {
    let m = by_residue.len();
    let mut out = NumPolyTT::zero();
    for (r, poly) in by_residue.iter().enumerate() {
        let root = root_of_unity(r, m);
        for (e, c) in poly.terms() {
            out.add_term(e, 0, root * (to_f64(c) * scale));
        }
    }
    let mut real = NumPolyTT::zero();
    for ((te, tt), c) in out.terms() {
        if c.im.abs() > 1e-8 * c.re.abs().max(1.0) {
            return Err(Error::Numeric(format!(
                "imaginary residual {} at t^{te}",
                c.im
            )));
        }
        real.add_term(te, tt, Complex64::new(c.re, 0.0));
    }
    Ok(real)
}

/// `λ^{2w} / 4^w = (-1)^w π^{2w}`
pub fn lambda_factor(w: usize) -> f64 {
    let sign = if w.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * PI.powi(2 * w as i32)
}

/// Closed form for `ζ^t({2k}^n)` as a polynomial in `t`, from the Bernoulli double sum.
pub fn closed_form_2k(k: usize, n: usize) -> Result<NumPolyTT, Error> {
    if k == 0 {
        return Err(Error::Param("k must be positive".into()));
    }
    if n == 0 {
        return Ok(NumPolyTT::constant(1.0));
    }
    let mut by_residue = vec![TPoly::zero(); k];
    let t = TPoly::t();
    let t_minus_1 = TPoly::from_ints(&[-1, 1]);
    for i in 0..=n {
        let j = n - i;
        let weight = &t_minus_1.pow(i as u32) * &t.pow(j as u32);
        for (r, c) in bernoulli_block(k, j, i).into_iter().enumerate() {
            by_residue[r] += &weight.scale(&c);
        }
    }
    residues_to_real(&by_residue, lambda_factor(n * k))
}
