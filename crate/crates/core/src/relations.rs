//! Identity catalog: exact word-level identities in `h_t` and numeric identities among
//! t-MZVs, plus the coefficient families they use.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::algebra::{Element, Product};
use crate::error::Error;
use crate::exactnum::{binom, factorial, int, Rational, TPoly};
use crate::maps::{del_n_t, delta_v_trunc, s_map, sigma_m_op};
use crate::numeric::{
    bernoulli_block, closed_form_2k, lambda_factor, residues_to_real, Evaluator, NumPolyTT,
};
use crate::regularize::{letter_count_sum, reg};
use crate::words::{enumerate_indices, Index, Word};

/// `c_m(t) = (m-1)! [t^m - (t-1)^m]`
pub fn coeff_c(m: u32) -> TPoly {
    assert!(m >= 1, "c_m needs m >= 1");
    coeff_d(m).scale(&Rational::from_integer(factorial(m as u64 - 1)))
}

/// `d_m(t) = t^m - (t-1)^m`, with `d_0 = 0`.
pub fn coeff_d(m: u32) -> TPoly {
    &TPoly::t().pow(m) - &TPoly::from_ints(&[-1, 1]).pow(m)
}

/// A set partition of `{1..n}`; blocks ordered by their minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// `c_Π(t) = Π_j c_{|P_j|}(t)`
    pub fn coeff(&self) -> TPoly {
        self.blocks
            .iter()
            .fold(TPoly::one(), |acc, b| &acc * &coeff_c(b.len() as u32))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

pub const MAX_PARTITION_N: usize = 10;

/// All set partitions of `{1..n}` in restricted-growth-string order.
pub fn partitions(n: usize) -> Result<Vec<SetPartition>, Error> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(Error::Param(format!(
            "partitions need 1 <= n <= {MAX_PARTITION_N}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        if i == rgs.len() {
            let mut blocks = vec![Vec::new(); max + 1];
            for (el, &b) in rgs.iter().enumerate() {
                blocks[b].push(el + 1);
            }
            out.push(SetPartition { blocks });
            return;
        }
        for b in 0..=max + 1 {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, out);
        }
    }
    rec(1, 0, &mut rgs, &mut out);
    Ok(out)
}

fn pow2(e: i64) -> BigInt {
    BigInt::one() << (e as usize)
}

/// `𝒞(k) = Σ_j 2^{k_1+..+k_j-j} + 2^{k_1+..+k_n-n}`; the empty index gives 1.
pub fn weight_c(parts: &[u32]) -> BigInt {
    if parts.is_empty() {
        return BigInt::one();
    }
    let mut acc = BigInt::zero();
    let mut s = 0i64;
    for (j, &p) in parts.iter().enumerate() {
        s += p as i64;
        acc += pow2(s - j as i64 - 1);
    }
    acc + pow2(s - parts.len() as i64)
}

/// `(𝒞(k), 𝒞̃(k))` with `𝒞̃(k) = 𝒞(k_1..k_n) - 𝒞(k_2..k_n)`.
#[allow(non_snake_case)]
pub fn weight_C(k: &Index) -> Result<(BigInt, BigInt), Error> {
    if k.depth() == 0 {
        return Err(Error::Param("weight_C needs a nonempty index".into()));
    }
    let c = weight_c(k.parts());
    let tail = weight_c(&k.parts()[1..]);
    Ok((c.clone(), c - tail))
}

fn c_tilde(parts: &[u32]) -> BigInt {
    weight_c(parts) - weight_c(&parts[1..])
}

/// `𝒞̃` of the index with its last entry dropped; a depth-1 index `(k)` gives `k`.
fn c_tilde_trunc(parts: &[u32]) -> BigInt {
    if parts.len() >= 2 {
        c_tilde(&parts[..parts.len() - 1])
    } else {
        BigInt::from(parts[0])
    }
}

/// `b_k = C(k_1-2, 2) + Σ_{i>=2} C(k_i-1, 2)`
pub fn coeff_b(parts: &[u32]) -> Rational {
    let mut acc = binom(parts[0] as i64 - 2, 2);
    for &p in &parts[1..] {
        acc += binom(p as i64 - 1, 2);
    }
    acc
}

/// `N_{k,n} = Σ z_{a k_1} ... z_{a k_n}` over compositions of `k` into `n` parts.
#[allow(non_snake_case)]
pub fn build_N(k: u32, n: usize, a: u32) -> Result<Element, Error> {
    if n == 0 || (k as usize) < n || a == 0 {
        return Err(Error::Param("build_N needs k >= n >= 1 and a >= 1".into()));
    }
    Ok(enumerate_indices(k, n, false)
        .iter()
        .map(|idx| {
            let parts: Vec<u32> = idx.parts().iter().map(|p| p * a).collect();
            Element::z(&parts)
        })
        .sum())
}

/// Named parameters of an identity instance, kept as canonical strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.set(key, value);
        self
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn raw(&self, key: &str) -> Result<&str, Error> {
        self.get(key)
            .ok_or_else(|| Error::Param(format!("missing parameter --{key}")))
    }

    pub fn int(&self, key: &str) -> Result<u32, Error> {
        let raw = self.raw(key)?;
        raw.trim()
            .parse()
            .map_err(|_| Error::Param(format!("--{key} expects a nonnegative integer, got {raw:?}")))
    }

    pub fn index(&self, key: &str) -> Result<Index, Error> {
        self.raw(key)?.parse()
    }

    pub fn word(&self, key: &str) -> Result<Word, Error> {
        self.raw(key)?.parse()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.0 {
            let value = match v.parse::<u64>() {
                Ok(n) => serde_json::Value::from(n),
                Err(_) => serde_json::Value::from(v.clone()),
            };
            map.insert(k.clone(), value);
        }
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", items.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Word,
    Zeta,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Word => "word",
            Level::Zeta => "zeta",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Side {
    Word(Element),
    Zeta(NumPolyTT),
}

/// Residual of a check: exact agreement or the largest coefficient difference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Residual {
    Exact,
    Value(f64),
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::Exact => s.serialize_str("exact"),
            Residual::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Exact => f.write_str("exact"),
            Residual::Value(v) => write!(f, "{v:.3e}"),
        }
    }
}

/// One row of a residual table: a monomial label and both sides' coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualRow {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
    pub diff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityInstance {
    pub name: String,
    pub params: Params,
    pub level: Level,
    pub lhs: Side,
    pub rhs: Side,
    /// Absolute tolerance per coefficient for numeric instances.
    pub tolerance: Option<f64>,
    /// `(u, v)` truncation orders for generating-function coefficients.
    pub truncation: Option<(usize, usize)>,
    /// Values of `t` at which numeric sides are compared; coefficientwise when absent.
    pub points: Option<Vec<f64>>,
}

impl IdentityInstance {
    fn word(name: &str, params: &Params, lhs: Element, rhs: Element) -> Self {
        IdentityInstance {
            name: name.into(),
            params: params.clone(),
            level: Level::Word,
            lhs: Side::Word(lhs),
            rhs: Side::Word(rhs),
            tolerance: None,
            truncation: None,
            points: None,
        }
    }

    fn zeta(name: &str, params: &Params, lhs: NumPolyTT, rhs: NumPolyTT, tol: f64) -> Self {
        IdentityInstance {
            name: name.into(),
            params: params.clone(),
            level: Level::Zeta,
            lhs: Side::Zeta(lhs),
            rhs: Side::Zeta(rhs),
            tolerance: Some(tol),
            truncation: None,
            points: None,
        }
    }

    fn truncated(mut self, u: usize, v: usize) -> Self {
        self.truncation = Some((u, v));
        self
    }

    pub fn residual(&self) -> Residual {
        match (&self.lhs, &self.rhs) {
            (Side::Word(a), Side::Word(b)) => {
                let d = a - b;
                if d.is_zero() {
                    Residual::Exact
                } else {
                    Residual::Value(d.max_abs())
                }
            }
            (Side::Zeta(a), Side::Zeta(b)) => {
                let d = a.sub(b);
                Residual::Value(match &self.points {
                    None => d.max_abs(),
                    Some(pts) => pts.iter().map(|&t| d.at_t(t).max_abs()).fold(0.0, f64::max),
                })
            }
            _ => Residual::Value(f64::INFINITY),
        }
    }

    pub fn passes(&self) -> bool {
        match (self.residual(), self.tolerance) {
            (Residual::Exact, _) => true,
            (Residual::Value(v), Some(tol)) => v < tol,
            (Residual::Value(_), None) => false,
        }
    }

    /// Coefficients that differ, for word level, or every coefficient, for zeta level.
    pub fn residual_table(&self) -> Vec<ResidualRow> {
        match (&self.lhs, &self.rhs) {
            (Side::Word(a), Side::Word(b)) => {
                let d = a - b;
                d.terms()
                    .map(|(w, c)| ResidualRow {
                        monomial: Element::word_label(w),
                        lhs: a.coeff(w).to_string(),
                        rhs: b.coeff(w).to_string(),
                        diff: c.max_abs(),
                    })
                    .collect()
            }
            (Side::Zeta(a), Side::Zeta(b)) => {
                let mut keys: Vec<(u32, u32)> =
                    a.terms().chain(b.terms()).map(|(k, _)| k).collect();
                keys.sort_unstable();
                keys.dedup();
                keys.into_iter()
                    .map(|(i, j)| {
                        let (l, r) = (a.coeff(i, j), b.coeff(i, j));
                        ResidualRow {
                            monomial: format!("t^{i} T^{j}"),
                            lhs: format!("{:.12}", l.re),
                            rhs: format!("{:.12}", r.re),
                            diff: (l - r).norm(),
                        }
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn report(&self, wall_ms: Option<u64>) -> Report {
        Report {
            name: self.name.clone(),
            params: self.params.clone(),
            level: self.level,
            pass: self.passes(),
            max_abs_residual: self.residual(),
            wall_ms,
            error: None,
        }
    }
}

/// Verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub name: String,
    pub params: Params,
    pub level: Level,
    pub pass: bool,
    pub max_abs_residual: Residual,
    pub wall_ms: Option<u64>,
    pub error: Option<String>,
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("name", &self.name)?;
        map.serialize_entry("params", &self.params.to_json())?;
        map.serialize_entry("level", &self.level)?;
        map.serialize_entry("pass", &self.pass)?;
        map.serialize_entry("max_abs_residual", &self.max_abs_residual)?;
        if let Some(ms) = self.wall_ms {
            map.serialize_entry("wall_ms", &ms)?;
        }
        if let Some(e) = &self.error {
            map.serialize_entry("error", e)?;
        }
        map.end()
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} [{}] {} residual={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.params,
            self.level,
            self.max_abs_residual
        )?;
        if let Some(ms) = self.wall_ms {
            write!(f, " {ms}ms")?;
        }
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        Ok(())
    }
}

pub const WORD_IDENTITIES: &[&str] = &[
    "symmetric_sum",
    "hoffman",
    "sum_formula_word",
    "shuffle_reg_sum",
    "height_one",
    "weighted_stuffle",
    "tshuffle_1_n",
    "weighted_shuffle",
    "dm_sum",
    "St_power",
    "St_extension",
    "S_ast_inverse",
    "St_S1mt",
    "S1m2t_tast",
    "St_ast_gen",
    "St_power_new",
    "Nkn_first",
    "Nkn_second",
    "Nkn_third",
    "Nkn_second_third",
    "St_F",
];

pub const ZETA_IDENTITIES: &[&str] = &[
    "sum_formula",
    "sum_formula_alt",
    "symmetric_sum_zeta",
    "weighted_sum",
    "weighted_sum_n2",
    "height_one_zeta",
    "eval_2k",
    "zetat_k_star",
    "restricted_sum",
    "restricted_sum_word",
    "eds_rho",
    "eds_shuffle",
    "eds_reg",
    "eds_reg_star",
    "eds_derivation",
    "eds_sigma",
];

/// Largest word weight accepted by the exact builders.
pub const MAX_WORD_WEIGHT: u32 = 40;
/// Largest weight accepted by the numeric builders.
pub const MAX_ZETA_WEIGHT: u32 = 12;

const TOL_DEFAULT: f64 = 1e-2;
const TOL_SINGLE: f64 = 1e-3;
const TOL_CLOSED: f64 = 1e-4;

fn t() -> TPoly {
    TPoly::t()
}

fn one_minus(p: &TPoly) -> TPoly {
    &TPoly::one() - p
}

fn zpow(k: u32, n: usize) -> Element {
    Element::z(&vec![k; n])
}

fn s1(a: &Element) -> Element {
    s_map(a, &TPoly::one())
}

fn st(a: &Element) -> Element {
    s_map(a, &t())
}

fn stuffle(a: &Element, b: &Element) -> Element {
    a.stuffle(b).expect("operands lie in h1")
}

fn tstuffle(a: &Element, b: &Element) -> Element {
    a.tstuffle(b, &t()).expect("operands lie in h1")
}

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

fn sum_words(indices: &[Index]) -> Element {
    indices.iter().map(Element::index).sum()
}

fn guard(cond: bool, msg: &str) -> Result<(), Error> {
    if cond {
        Ok(())
    } else {
        Err(Error::Param(msg.into()))
    }
}

fn guard_weight(w: u64, cap: u32) -> Result<(), Error> {
    guard(w <= cap as u64, &format!("weight {w} exceeds the cap {cap}"))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            cur.swap(j, k - 1);
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

fn concat_parts(parts: &[&[u32]]) -> Vec<u32> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Builds an exact word-level instance.
pub fn word_identity(name: &str, p: &Params) -> Result<IdentityInstance, Error> {
    let inst = match name {
        "symmetric_sum" => symmetric_sum(p)?,
        "hoffman" => hoffman(p)?,
        "sum_formula_word" => sum_formula_word(p)?,
        "shuffle_reg_sum" => shuffle_reg_sum(p)?,
        "height_one" => height_one(p)?,
        "weighted_stuffle" => weighted_stuffle(p)?,
        "tshuffle_1_n" => tshuffle_1_n(p)?,
        "weighted_shuffle" => weighted_shuffle(p)?,
        "dm_sum" => dm_sum(p)?,
        "St_power" => st_power(p)?,
        "St_extension" => st_extension(p)?,
        "S_ast_inverse" => s_ast_inverse(p)?,
        "St_S1mt" => st_s1mt(p)?,
        "S1m2t_tast" => s1m2t_tast(p)?,
        "St_ast_gen" => st_ast_gen(p)?,
        "St_power_new" => st_power_new(p)?,
        "Nkn_first" => nkn_first(p)?,
        "Nkn_second" => nkn_second(p)?,
        "Nkn_third" => nkn_third(p)?,
        "Nkn_second_third" => nkn_second_third(p)?,
        "St_F" => st_f(p)?,
        other => return Err(Error::UnknownIdentity(other.into())),
    };
    Ok(inst)
}

fn symmetric_sum(p: &Params) -> Result<IdentityInstance, Error> {
    let k = p.index("index")?;
    let n = k.depth();
    guard((1..=6).contains(&n), "symmetric_sum needs depth 1..=6")?;
    guard_weight(k.weight() as u64, MAX_WORD_WEIGHT)?;
    let parts = k.parts();
    let lhs: Element = permutations(n)
        .iter()
        .map(|perm| Element::z(&perm.iter().map(|&i| parts[i]).collect::<Vec<_>>()))
        .sum();
    let mut rhs = Element::zero();
    for pi in partitions(n)? {
        let prod = pi.blocks.iter().fold(Element::one(), |acc, b| {
            let s: u32 = b.iter().map(|&i| parts[i - 1]).sum();
            tstuffle(&acc, &Element::z(&[s]))
        });
        rhs.add_scaled(&prod, &pi.coeff());
    }
    Ok(IdentityInstance::word("symmetric_sum", p, lhs, rhs))
}

fn hoffman(p: &Params) -> Result<IdentityInstance, Error> {
    let k = p.index("index")?;
    guard(k.depth() >= 1, "hoffman needs a nonempty index")?;
    guard_weight(k.weight() as u64, MAX_WORD_WEIGHT)?;
    let parts = k.parts();
    let n = parts.len();
    let lhs = del_n_t(&Element::index(&k), 1);
    let mut rhs = Element::zero();
    for i in 0..n {
        let (head, tail) = (&parts[..i], &parts[i + 1..]);
        for j in 2..=parts[i] {
            rhs.add_term(
                Index(concat_parts(&[head, &[j, parts[i] + 1 - j], tail])).to_word(),
                &TPoly::one(),
            );
        }
        let delta = if i == n - 1 { 1 } else { 0 };
        let c = TPoly::from_ints(&[-1, -(parts[i] as i64 + delta - 2)]);
        rhs.add_term(
            Index(concat_parts(&[head, &[parts[i] + 1], tail])).to_word(),
            &c,
        );
    }
    let t_minus_t2 = TPoly::from_ints(&[0, 1, -1]);
    for i in 0..n.saturating_sub(1) {
        let merged = parts[i] + parts[i + 1] + 1;
        rhs.add_term(
            Index(concat_parts(&[&parts[..i], &[merged], &parts[i + 2..]])).to_word(),
            &t_minus_t2,
        );
    }
    Ok(IdentityInstance::word("hoffman", p, lhs, rhs))
}

fn x_shuffle_y(a: usize, b: usize) -> Element {
    Element::word(Word::x_pow(a)).shuffle(&Element::word(Word::y_pow(b)))
}

fn sum_formula_word(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = (p.int("k")?, p.int("n")?);
    guard(k > n && n >= 1, "sum_formula_word needs k > n >= 1")?;
    guard_weight(k as u64, MAX_WORD_WEIGHT)?;
    let base = Element::z(&[k - n + 1]);
    let tp = t();
    let lhs = sigma_m_op(&base, n - 1, true, Some(&tp))? - sigma_m_op(&base, n - 1, false, Some(&tp))?;
    let x = Element::word(Word::X);
    let y = Element::word(Word::Y);
    let minus_t = TPoly::from_ints(&[0, -1]);
    let mut rhs = -Element::z(&[k]);
    for i in 1..=n {
        let c = minus_t
            .pow(n - i)
            .scale(&binom(k as i64 - i as i64 - 1, (n - i) as i64));
        let word = x
            .concat(&x_shuffle_y((k - i - 1) as usize, (i - 1) as usize))
            .concat(&y);
        rhs.add_scaled(&word, &c);
    }
    Ok(IdentityInstance::word("sum_formula_word", p, lhs, rhs))
}

fn shuffle_reg_sum(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = (p.int("k")?, p.int("n")?);
    guard(k >= 1 && n >= 1, "shuffle_reg_sum needs k, n >= 1")?;
    guard_weight((k + n) as u64, 16)?;
    let lhs = reg(&letter_count_sum(k as usize, n as usize), Product::TShuffle, &t())?;
    let mut rhs = Element::zero();
    for i in 1..=n as usize {
        let c = TPoly::monomial(sign(i - 1), n - i as u32);
        for idx in enumerate_indices(k + n, i, false) {
            let k1 = idx.parts()[0];
            if k1 > k {
                rhs.add_scaled(
                    &Element::index(&idx),
                    &c.scale(&binom(k1 as i64, k as i64 + 1)),
                );
            }
        }
    }
    Ok(IdentityInstance::word("shuffle_reg_sum", p, lhs, rhs))
}

/// Coefficients `[u^a v^b]` for `a <= k-1`, `b <= l-1` of
/// `(1 - xu - xv + x((1-t)x + y)uv)^{-1} x (1 - t x v)^{-1} y`.
fn height_one_kernel(k: usize, l: usize) -> Vec<Vec<Element>> {
    let x = Element::word(Word::X);
    let y = Element::word(Word::Y);
    let mixed = x.concat(&(&x.scale(&TPoly::from_ints(&[1, -1])) + &y));
    let mut g = vec![vec![Element::zero(); l]; k];
    for a in 0..k {
        for b in 0..l {
            let mut e = if a == 0 && b == 0 {
                Element::one()
            } else {
                Element::zero()
            };
            if a > 0 {
                e += &x.concat(&g[a - 1][b]);
            }
            if b > 0 {
                e += &x.concat(&g[a][b - 1]);
            }
            if a > 0 && b > 0 {
                e -= &mixed.concat(&g[a - 1][b - 1]);
            }
            g[a][b] = e;
        }
    }
    let mut kern = vec![vec![Element::zero(); l]; k];
    for a in 0..k {
        for b in 0..l {
            let mut e = Element::zero();
            for i in 0..=b {
                let tail = Element::term(
                    Word::x_pow(i + 1).concat(Word::Y),
                    TPoly::monomial(int(1), i as u32),
                );
                e += &g[a][b - i].concat(&tail);
            }
            kern[a][b] = e;
        }
    }
    kern
}

fn height_one(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, l) = (p.int("k")? as usize, p.int("l")? as usize);
    guard(k >= 1 && l >= 1, "height_one needs k, l >= 1")?;
    guard_weight((k + l) as u64, 14)?;
    let kern = height_one_kernel(k, l);
    let tp = t();
    let mut lhs = Element::zero();
    for r in 0..l {
        let graded = delta_v_trunc(&kern[k - 1][l - 1 - r], r, Some(&tp));
        lhs += &graded[r];
    }
    let rhs = Element::word(Word::x_pow(k).concat(Word::y_pow(l)));
    Ok(IdentityInstance::word("height_one", p, lhs, rhs).truncated(k - 1, l - 1))
}

/// `Σ_{l + k_1 + ... + k_{n-1} = k, k_1 >= 2} f(z_l, z_{k_1} ... z_{k_{n-1}})`
fn weighted_lhs(k: u32, n: usize, f: impl Fn(&Element, &Element) -> Element) -> Element {
    let mut out = Element::zero();
    for l in 1..k {
        for idx in enumerate_indices(k - l, n - 1, true) {
            out += &f(&Element::z(&[l]), &Element::index(&idx));
        }
    }
    out
}

fn weighted_params(p: &Params) -> Result<(u32, usize), Error> {
    let (k, n) = (p.int("k")?, p.int("n")?);
    guard(k > n && n >= 2, "needs k > n >= 2")?;
    guard_weight(k as u64, 16)?;
    Ok((k, n as usize))
}

fn weighted_stuffle(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = weighted_params(p)?;
    let lhs = weighted_lhs(k, n, tstuffle);
    let all = enumerate_indices(k, n, false);
    let first_one: Vec<Index> = all.iter().filter(|i| i.parts()[0] == 1).cloned().collect();
    let second_one: Vec<Index> = all.iter().filter(|i| i.parts()[1] == 1).cloned().collect();
    let mut rhs = sum_words(&enumerate_indices(k, n, true)).scale_rat(&int(n as i64));
    rhs += &sum_words(&first_one);
    rhs -= &sum_words(&second_one);
    rhs.add_scaled(
        &sum_words(&enumerate_indices(k, n - 1, true)),
        &TPoly::from_ints(&[1, -2]).scale(&int(k as i64 - n as i64)),
    );
    if n > 2 {
        let t2_minus_t = TPoly::from_ints(&[0, -1, 1]);
        for idx in enumerate_indices(k, n - 2, true) {
            rhs.add_scaled(&Element::index(&idx), &t2_minus_t.scale(&coeff_b(idx.parts())));
        }
    }
    Ok(IdentityInstance::word("weighted_stuffle", p, lhs, rhs))
}

fn tshuffle_1_n(p: &Params) -> Result<IdentityInstance, Error> {
    let l = p.int("l")?;
    let k = p.index("index")?;
    guard(l >= 1 && k.depth() >= 1, "tshuffle_1_n needs l >= 1 and a nonempty index")?;
    guard_weight((l + k.weight()) as u64, 16)?;
    let ks = k.parts();
    let n = ks.len() + 1;
    let lhs = Element::z(&[l]).tshuffle(&Element::index(&k), &t());
    let minus_t = TPoly::from_ints(&[0, -1]);
    let mut rhs = Element::zero();
    let mut add_pair = |alpha: &[u32], coef: &Rational, tail: &[u32]| {
        let c = TPoly::constant(coef.clone());
        rhs.add_term(Index(concat_parts(&[alpha, tail])).to_word(), &c);
        let m = alpha.len();
        let merged = alpha[m - 2] + alpha[m - 1];
        rhs.add_term(
            Index(concat_parts(&[&alpha[..m - 2], &[merged], tail])).to_word(),
            &minus_t.scale(coef),
        );
    };
    for i in 1..n {
        let total: u32 = l + ks[..i].iter().sum::<u32>();
        for alpha in enumerate_indices(total, i + 1, false) {
            let a = alpha.parts();
            let mut coef = Rational::one();
            for j in 0..i - 1 {
                coef *= binom(a[j] as i64 - 1, ks[j] as i64 - 1);
            }
            coef *= binom(a[i - 1] as i64 - 1, ks[i - 1] as i64 - a[i] as i64);
            if !coef.is_zero() {
                add_pair(a, &coef, &ks[i..]);
            }
        }
    }
    let total = l + k.weight();
    for alpha in enumerate_indices(total, n, false) {
        let a = alpha.parts();
        let mut coef = Rational::one();
        for j in 0..n - 1 {
            coef *= binom(a[j] as i64 - 1, ks[j] as i64 - 1);
        }
        if !coef.is_zero() {
            add_pair(a, &coef, &[]);
        }
    }
    Ok(IdentityInstance::word("tshuffle_1_n", p, lhs, rhs))
}

fn weighted_shuffle(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = weighted_params(p)?;
    let lhs = weighted_lhs(k, n, |a, b| a.tshuffle(b, &t()));
    let tp = t();
    let mut rhs = Element::zero();
    for idx in enumerate_indices(k, n, false) {
        let z = Element::index(&idx);
        if idx.parts()[1] == 1 {
            rhs -= &z;
        }
        rhs.add_scaled(&z, &TPoly::constant(Rational::from_integer(c_tilde_trunc(idx.parts()))));
    }
    rhs.add_scaled(&sum_words(&enumerate_indices(k, n - 1, true)), &tp);
    for idx in enumerate_indices(k, n - 1, false) {
        let c = c_tilde(idx.parts()) - c_tilde_trunc(idx.parts());
        rhs.add_scaled(&Element::index(&idx), &tp.scale(&-Rational::from_integer(c)));
    }
    Ok(IdentityInstance::word("weighted_shuffle", p, lhs, rhs))
}

fn dm_sum(p: &Params) -> Result<IdentityInstance, Error> {
    let (a, b, n) = (p.int("a")?, p.int("b")?, p.int("n")? as usize);
    guard(a >= 1 && b >= 1 && n >= 1, "dm_sum needs a, b, n >= 1")?;
    guard_weight(b as u64 + (n as u64 - 1) * a as u64, MAX_WORD_WEIGHT)?;
    let mut lhs = Element::zero();
    for m in 1..=n {
        let prod = tstuffle(&Element::z(&[b + (m as u32 - 1) * a]), &zpow(a, n - m));
        lhs.add_scaled(&prod, &coeff_d(m as u32));
    }
    let mut rhs = Element::zero();
    for m in 0..n {
        let mut parts = vec![a; n];
        parts[m] = b;
        rhs += &Element::z(&parts);
    }
    Ok(IdentityInstance::word("dm_sum", p, lhs, rhs))
}

fn kn_params(p: &Params, min_n: u32) -> Result<(u32, usize), Error> {
    let (k, n) = (p.int("k")?, p.int("n")?);
    guard(k >= 1 && n >= min_n, "needs k >= 1 and n in range")?;
    guard_weight(k as u64 * n as u64, MAX_WORD_WEIGHT)?;
    Ok((k, n as usize))
}

fn delta_0(n: usize) -> Element {
    if n == 0 {
        Element::one()
    } else {
        Element::zero()
    }
}

fn st_power(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = kn_params(p, 1)?;
    let lhs = st(&zpow(k, n));
    let (omt, tp) = (one_minus(&t()), t());
    let mut rhs = Element::zero();
    for i in 0..=n {
        let j = n - i;
        let c = &omt.pow(i as u32) * &tp.pow(j as u32);
        rhs.add_scaled(&stuffle(&zpow(k, i), &s1(&zpow(k, j))), &c);
    }
    Ok(IdentityInstance::word("St_power", p, lhs, rhs))
}

fn st_extension(p: &Params) -> Result<IdentityInstance, Error> {
    let k = p.index("index")?;
    guard(k.depth() >= 1, "St_extension needs a nonempty index")?;
    guard_weight(k.weight() as u64, MAX_WORD_WEIGHT)?;
    let parts = k.parts();
    let lhs = st(&Element::index(&k));
    let mut rhs = Element::zero();
    for i in 1..=parts.len() {
        let head: u32 = parts[..i].iter().sum();
        let term = Element::z(&[head]).concat(&st(&Element::z(&parts[i..])));
        rhs.add_scaled(&term, &TPoly::monomial(int(1), i as u32 - 1));
    }
    Ok(IdentityInstance::word("St_extension", p, lhs, rhs))
}

fn s_ast_inverse(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = kn_params(p, 1)?;
    let mut lhs = Element::zero();
    for j in 0..=n {
        lhs += &stuffle(&zpow(k, j), &s1(&zpow(k, n - j))).scale_rat(&sign(j));
    }
    Ok(IdentityInstance::word("S_ast_inverse", p, lhs, Element::zero()))
}

fn st_s1mt(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = kn_params(p, 0)?;
    let omt = one_minus(&t());
    let mut lhs = Element::zero();
    for j in 0..=n {
        let right = s_map(&zpow(k, n - j).scale_rat(&sign(n - j)), &omt);
        lhs += &stuffle(&st(&zpow(k, j)), &right);
    }
    Ok(IdentityInstance::word("St_S1mt", p, lhs, delta_0(n)).truncated(n, 0))
}

fn s1m2t_tast(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = kn_params(p, 0)?;
    let q = TPoly::from_ints(&[1, -2]);
    let mut lhs = Element::zero();
    for j in 0..=n {
        let left = s_map(&zpow(k, j), &q);
        lhs += &tstuffle(&left, &zpow(k, n - j).scale_rat(&sign(n - j)));
    }
    Ok(IdentityInstance::word("S1m2t_tast", p, lhs, delta_0(n)).truncated(n, 0))
}

fn st_ast_gen(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = kn_params(p, 0)?;
    let mut lhs = Element::zero();
    for j in 0..=n {
        lhs += &stuffle(&zpow(k, j), &st(&zpow(k, n - j))).scale_rat(&sign(j));
    }
    // [u^n] of (1 - Σ_{i>=2} t^{i-2}(t-1) z_{ik} u^i)^{-1}
    let mut b: Vec<Element> = vec![Element::one()];
    let t_minus_1 = TPoly::from_ints(&[-1, 1]);
    for m in 1..=n {
        let mut e = Element::zero();
        for i in 2..=m {
            let c = &TPoly::monomial(int(1), i as u32 - 2) * &t_minus_1;
            e.add_scaled(&Element::z(&[i as u32 * k]).concat(&b[m - i]), &c);
        }
        b.push(e);
    }
    Ok(IdentityInstance::word("St_ast_gen", p, lhs, b[n].clone()).truncated(n, 0))
}

/// `Σ z_{i_1 k} ... z_{i_m k}` over `i_1 + ... + i_m = j`, all `i >= 2`.
fn big_parts_sum(k: u32, j: u32, m: usize) -> Element {
    enumerate_indices(j, m, false)
        .iter()
        .filter(|idx| idx.parts().iter().all(|&i| i >= 2))
        .map(|idx| Element::z(&idx.parts().iter().map(|i| i * k).collect::<Vec<_>>()))
        .sum()
}

fn st_power_new(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n) = kn_params(p, 0)?;
    let lhs = st(&zpow(k, n));
    let mut rhs = s1(&zpow(k, n));
    let (tp, t_minus_1) = (t(), TPoly::from_ints(&[-1, 1]));
    for j in 2..=n {
        let tail = s1(&zpow(k, n - j));
        for m in 1..=j / 2 {
            let c = &tp.pow((j - 2 * m) as u32) * &t_minus_1.pow(m as u32);
            rhs.add_scaled(&stuffle(&big_parts_sum(k, j as u32, m), &tail), &c);
        }
    }
    Ok(IdentityInstance::word("St_power_new", p, lhs, rhs))
}

fn nkn_params(p: &Params) -> Result<(u32, usize, u32), Error> {
    let (k, n, a) = (p.int("k")?, p.int("n")?, p.int("a")?);
    guard(k >= n && n >= 1 && a >= 1, "needs k >= n >= 1 and a >= 1")?;
    guard_weight(k as u64 * a as u64, MAX_WORD_WEIGHT)?;
    Ok((k, n as usize, a))
}

fn nkn_first(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n, a) = nkn_params(p)?;
    let lhs = st(&build_N(k, n, a)?);
    let mut rhs = Element::zero();
    for i in 1..=n {
        let c = TPoly::monomial(binom(k as i64 - i as i64, k as i64 - n as i64), (n - i) as u32);
        rhs.add_scaled(&build_N(k, i, a)?, &c);
    }
    Ok(IdentityInstance::word("Nkn_first", p, lhs, rhs))
}

fn nkn_second_rhs(k: u32, n: usize, a: u32) -> Element {
    let (k, ni) = (k as i64, n as i64);
    let mut rhs = Element::zero();
    for j in 0..k {
        let mut c = TPoly::zero();
        for i in 1..=ni.min(k - j) {
            let coef = sign((k - i - j) as usize) * binom(k - i, k - ni) * binom(k - j, i);
            c.add_term((ni - i) as u32, coef);
        }
        if !c.is_zero() {
            let prod = stuffle(&s1(&zpow(a, j as usize)), &zpow(a, (k - j) as usize));
            rhs.add_scaled(&prod, &c);
        }
    }
    rhs
}

fn nkn_third_rhs(k: u32, n: usize, a: u32) -> Element {
    let (omt, tp) = (one_minus(&t()), t());
    let mut rhs = Element::zero();
    for j1 in 0..=k as usize {
        let j2 = k as usize - j1;
        let mut c = TPoly::zero();
        for i1 in 0..=j1.min(n) {
            let i2 = n - i1;
            if i2 > j2 {
                continue;
            }
            let coef = sign(j1 - i1) * binom(j1 as i64, i1 as i64) * binom(j2 as i64, i2 as i64);
            c += &(&omt.pow(i1 as u32) * &tp.pow(i2 as u32)).scale(&coef);
        }
        if !c.is_zero() {
            rhs.add_scaled(&stuffle(&zpow(a, j1), &s1(&zpow(a, j2))), &c);
        }
    }
    rhs
}

fn nkn_second(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n, a) = nkn_params(p)?;
    let lhs = st(&build_N(k, n, a)?);
    Ok(IdentityInstance::word("Nkn_second", p, lhs, nkn_second_rhs(k, n, a)))
}

fn nkn_third(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n, a) = nkn_params(p)?;
    let lhs = st(&build_N(k, n, a)?);
    Ok(IdentityInstance::word("Nkn_third", p, lhs, nkn_third_rhs(k, n, a)))
}

fn nkn_second_third(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n, a) = nkn_params(p)?;
    Ok(IdentityInstance::word(
        "Nkn_second_third",
        p,
        nkn_second_rhs(k, n, a),
        nkn_third_rhs(k, n, a),
    ))
}

/// Polynomials in `v` with coefficients in `Q[t]`, ascending.
fn vpoly_mul(a: &[TPoly], b: &[TPoly]) -> Vec<TPoly> {
    let mut out = vec![TPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

fn vpoly_pow(a: &[TPoly], e: usize) -> Vec<TPoly> {
    (0..e).fold(vec![TPoly::one()], |acc, _| vpoly_mul(&acc, a))
}

fn st_f(p: &Params) -> Result<IdentityInstance, Error> {
    let (k, n, a) = (p.int("k")?, p.int("n")? as usize, p.int("a")?);
    guard(k >= 1 && a >= 1 && n <= k as usize, "St_F needs k >= 1, a >= 1, n <= k")?;
    guard_weight(k as u64 * a as u64, MAX_WORD_WEIGHT)?;
    let lhs = if n == 0 {
        Element::zero()
    } else {
        st(&build_N(k, n, a)?)
    };
    // E((v - tv - 1)u) * H((1 + tv)u), coefficient of u^k v^n
    let e_arg = [TPoly::from_int(-1), one_minus(&t())];
    let h_arg = [TPoly::one(), t()];
    let mut rhs = Element::zero();
    for j1 in 0..=k as usize {
        let j2 = k as usize - j1;
        let poly = vpoly_mul(&vpoly_pow(&e_arg, j1), &vpoly_pow(&h_arg, j2));
        if let Some(c) = poly.get(n).filter(|c| !c.is_zero()) {
            rhs.add_scaled(&stuffle(&zpow(a, j1), &s1(&zpow(a, j2))), c);
        }
    }
    Ok(IdentityInstance::word("St_F", p, lhs, rhs).truncated(k as usize, n))
}

/// Builds a numeric instance; both sides use the evaluator's configuration.
pub fn zeta_identity(name: &str, p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    match name {
        "sum_formula" => sum_formula(p, ev, false),
        "sum_formula_alt" => sum_formula(p, ev, true),
        "symmetric_sum_zeta" => symmetric_sum_zeta(p, ev),
        "weighted_sum" => weighted_sum(p, ev),
        "weighted_sum_n2" => weighted_sum_n2(p, ev),
        "height_one_zeta" => height_one_zeta(p, ev),
        "eval_2k" => eval_2k(p, ev),
        "zetat_k_star" => zetat_k_star(p, ev),
        "restricted_sum" => restricted_sum(p, ev),
        "restricted_sum_word" => restricted_sum_word(p, ev),
        "eds_rho" => eds_rho(p, ev),
        "eds_shuffle" => eds_shuffle(p, ev),
        "eds_reg" => eds_reg(p, ev, Product::TShuffle),
        "eds_reg_star" => eds_reg(p, ev, Product::TStuffle),
        "eds_derivation" => eds_derivation(p, ev),
        "eds_sigma" => eds_sigma(p, ev),
        other => Err(Error::UnknownIdentity(other.into())),
    }
}

/// Dispatches on the catalog name.
pub fn build(name: &str, p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    if WORD_IDENTITIES.contains(&name) {
        word_identity(name, p)
    } else {
        zeta_identity(name, p, ev)
    }
}

fn zeta_sum(ev: &Evaluator, indices: &[Index]) -> Result<NumPolyTT, Error> {
    let mut out = NumPolyTT::zero();
    for idx in indices {
        out = out.add(&ev.zeta_t(idx)?);
    }
    Ok(out)
}

fn zeta_times(ev: &Evaluator, poly: &TPoly, parts: &[u32]) -> Result<NumPolyTT, Error> {
    let z = ev.zeta_parts(parts)?;
    let mut out = NumPolyTT::from_tpoly(poly, z.value);
    out.err = z.err * poly.max_abs();
    Ok(out)
}

fn zguard(w: u32) -> Result<(), Error> {
    guard_weight(w as u64, MAX_ZETA_WEIGHT)
}

fn sum_formula(p: &Params, ev: &Evaluator, alt: bool) -> Result<IdentityInstance, Error> {
    let (k, n) = (p.int("k")?, p.int("n")?);
    guard(k > n && n >= 1, "sum_formula needs k > n >= 1")?;
    zguard(k)?;
    let lhs = zeta_sum(ev, &enumerate_indices(k, n as usize, true))?;
    let (ki, ni) = (k as i64, n as i64);
    let mut poly = TPoly::zero();
    if alt {
        for i in 1..=ni {
            poly.add_term((ni - i) as u32, binom(ki - i - 1, ni - i));
        }
    } else {
        let omt = one_minus(&t());
        for i in 0..ni {
            let term = &TPoly::monomial(binom(ki - 1, i), i as u32) * &omt.pow((ni - 1 - i) as u32);
            poly += &term;
        }
    }
    let rhs = zeta_times(ev, &poly, &[k])?;
    let name = if alt { "sum_formula_alt" } else { "sum_formula" };
    Ok(IdentityInstance::zeta(name, p, lhs, rhs, TOL_SINGLE))
}

fn symmetric_sum_zeta(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let k = p.index("index")?;
    let n = k.depth();
    guard((1..=6).contains(&n), "symmetric_sum_zeta needs depth 1..=6")?;
    guard(k.parts().iter().all(|&x| x >= 2), "symmetric_sum_zeta needs all parts >= 2")?;
    zguard(k.weight())?;
    let parts = k.parts();
    let mut lhs = NumPolyTT::zero();
    for perm in permutations(n) {
        let idx = Index(perm.iter().map(|&i| parts[i]).collect());
        lhs = lhs.add(&ev.zeta_t(&idx)?);
    }
    let mut rhs = NumPolyTT::zero();
    for pi in partitions(n)? {
        let mut prod = NumPolyTT::from_tpoly(&pi.coeff(), 1.0);
        for b in &pi.blocks {
            let s: u32 = b.iter().map(|&i| parts[i - 1]).sum();
            let z = ev.zeta_parts(&[s])?;
            let mut f = NumPolyTT::constant(z.value);
            f.err = z.err;
            prod = prod.mul(&f);
        }
        rhs = rhs.add(&prod);
    }
    Ok(IdentityInstance::zeta("symmetric_sum_zeta", p, lhs, rhs, TOL_DEFAULT))
}

fn weighted_sum(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let (k, n) = weighted_params(p)?;
    zguard(k)?;
    let tp = t();
    let mut lhs = NumPolyTT::zero();
    for idx in enumerate_indices(k, n, true) {
        let c = Rational::from_integer(c_tilde_trunc(idx.parts()));
        lhs = lhs.add(&ev.zeta_t(&idx)?.mul_tpoly(&TPoly::constant(c)));
    }
    for idx in enumerate_indices(k, n - 1, true) {
        let c = Rational::from_integer(c_tilde(idx.parts()) - c_tilde_trunc(idx.parts()));
        lhs = lhs.sub(&ev.zeta_t(&idx)?.mul_tpoly(&tp.scale(&c)));
    }
    if n > 2 {
        let t_minus_t2 = TPoly::from_ints(&[0, 1, -1]);
        for idx in enumerate_indices(k, n - 2, true) {
            let c = t_minus_t2.scale(&coeff_b(idx.parts()));
            lhs = lhs.add(&ev.zeta_t(&idx)?.mul_tpoly(&c));
        }
    }
    let (ki, ni) = (k as i64, n as i64);
    let omt = one_minus(&tp);
    let mut poly = TPoly::zero();
    for i in 1..=ni - 2 {
        let c = int(ki) * binom(ki - 1, i) - int(ki - ni + 1) * binom(ki - 1, i - 1);
        poly += &(&TPoly::monomial(c, i as u32) * &omt.pow((ni - 1 - i) as u32));
    }
    poly += &omt.pow((ni - 1) as u32).scale(&int(ki));
    poly.add_term((ni - 1) as u32, binom(ki - 1, ni - 1));
    let rhs = zeta_times(ev, &poly, &[k])?;
    Ok(IdentityInstance::zeta("weighted_sum", p, lhs, rhs, TOL_DEFAULT))
}

fn weighted_sum_n2(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let k = p.int("k")?;
    guard(k >= 3, "weighted_sum_n2 needs k >= 3")?;
    zguard(k)?;
    let mut lhs = NumPolyTT::zero();
    for idx in enumerate_indices(k, 2, true) {
        let c = Rational::from_integer(pow2(idx.parts()[0] as i64));
        lhs = lhs.add(&ev.zeta_t(&idx)?.mul_tpoly(&TPoly::constant(c)));
    }
    let poly = TPoly::linear(int(k as i64 + 1), Rational::from_integer(pow2(k as i64)) - int(4));
    let rhs = zeta_times(ev, &poly, &[k])?;
    Ok(IdentityInstance::zeta("weighted_sum_n2", p, lhs, rhs, TOL_SINGLE))
}

fn height_one_zeta(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let (k, l) = (p.int("k")?, p.int("l")?);
    guard(k >= 1 && l >= 1, "height_one_zeta needs k, l >= 1")?;
    zguard(k + l)?;
    let mut parts = vec![k + 1];
    parts.extend(std::iter::repeat_n(1, l as usize - 1));
    let lhs = ev.zeta_t(&Index(parts))?;
    let mut rhs = NumPolyTT::zero();
    for j in 1..=k.min(l) as usize {
        let s = sign(j - 1);
        for ks in enumerate_indices(k, j, false) {
            for ls in enumerate_indices(l, j, false) {
                let sum: Vec<u32> = ks.parts().iter().zip(ls.parts()).map(|(a, b)| a + b).collect();
                let geo = TPoly::geometric(ls.parts()[j - 1]).scale(&s);
                rhs = rhs.add(&zeta_times(ev, &geo, &sum)?);
            }
        }
    }
    Ok(IdentityInstance::zeta("height_one_zeta", p, lhs, rhs, TOL_DEFAULT))
}

fn eval_2k(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let (k, n) = (p.int("k")?, p.int("n")?);
    guard(k >= 1, "eval_2k needs k >= 1")?;
    zguard(2 * k * n)?;
    let lhs = ev.zeta_t(&Index(vec![2 * k; n as usize]))?;
    let rhs = closed_form_2k(k as usize, n as usize)?;
    Ok(IdentityInstance::zeta("eval_2k", p, lhs, rhs, TOL_CLOSED))
}

fn zetat_k_star(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let (k, n) = (p.int("k")?, p.int("n")? as usize);
    guard(k >= 2, "zetat_k_star needs k >= 2")?;
    zguard(k * n as u32)?;
    let lhs = ev.zeta_t(&Index(vec![k; n]))?;
    let star = |j: usize| -> Result<NumPolyTT, Error> {
        let z = ev.zeta_star(&Index(vec![k; j]))?;
        let mut out = NumPolyTT::constant(z.value);
        out.err = z.err;
        Ok(out)
    };
    let mut rhs = star(n)?;
    let (tp, t_minus_1) = (t(), TPoly::from_ints(&[-1, 1]));
    for j in 2..=n {
        for m in 1..=j / 2 {
            let c = &tp.pow((j - 2 * m) as u32) * &t_minus_1.pow(m as u32);
            let mut inner = NumPolyTT::zero();
            for idx in enumerate_indices(j as u32, m, false) {
                if idx.parts().iter().all(|&i| i >= 2) {
                    let scaled: Vec<u32> = idx.parts().iter().map(|i| i * k).collect();
                    inner = inner.add(&zeta_times(ev, &c, &scaled)?);
                }
            }
            rhs = rhs.add(&inner.mul(&star(n - j)?));
        }
    }
    Ok(IdentityInstance::zeta("zetat_k_star", p, lhs, rhs, TOL_DEFAULT))
}

fn restricted_lhs(ev: &Evaluator, k: u32, n: usize, scale: u32) -> Result<NumPolyTT, Error> {
    let mut lhs = NumPolyTT::zero();
    for idx in enumerate_indices(k, n, false) {
        let parts: Vec<u32> = idx.parts().iter().map(|x| x * scale).collect();
        lhs = lhs.add(&ev.zeta_t(&Index(parts))?);
    }
    Ok(lhs)
}

fn restricted_sum(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let (m, k, n) = (p.int("m")? as usize, p.int("k")? as usize, p.int("n")? as usize);
    guard(m >= 1 && k >= n && n >= 1, "restricted_sum needs m >= 1, k >= n >= 1")?;
    zguard((2 * m * k) as u32)?;
    let lhs = restricted_lhs(ev, k as u32, n, 2 * m as u32)?;
    let mut by_residue = vec![TPoly::zero(); m];
    for i in 1..=n {
        let outer = sign(i) * binom((k - i) as i64, (k - n) as i64);
        for j in 0..=k - i {
            let c = &outer * binom((k - j) as i64, i as i64);
            for (r, b) in bernoulli_block(m, j, k - j).into_iter().enumerate() {
                by_residue[r].add_term((n - i) as u32, &c * b);
            }
        }
    }
    let rhs = residues_to_real(&by_residue, lambda_factor(k * m))?;
    Ok(IdentityInstance::zeta("restricted_sum", p, lhs, rhs, TOL_DEFAULT))
}

fn restricted_sum_word(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let (k, n, a) = (p.int("k")? as usize, p.int("n")? as usize, p.int("a")?);
    guard(a >= 2 && k >= n && n >= 1, "restricted_sum_word needs a >= 2, k >= n >= 1")?;
    zguard(a * k as u32)?;
    let lhs = restricted_lhs(ev, k as u32, n, a)?;
    let (ki, ni) = (k as i64, n as i64);
    let mut rhs = NumPolyTT::zero();
    for j in 0..ki {
        let mut c = TPoly::zero();
        for i in 1..=ni.min(ki - j) {
            let coef = sign((ki - i - j) as usize) * binom(ki - i, ki - ni) * binom(ki - j, i);
            c.add_term((ni - i) as u32, coef);
        }
        let star = ev.zeta_star(&Index(vec![a; j as usize]))?;
        let strict = ev.zeta(&Index(vec![a; (ki - j) as usize]))?;
        let mut term = NumPolyTT::from_tpoly(&c, star.value * strict.value);
        term.err = (star.err * strict.value.abs() + strict.err * star.value.abs()) * c.max_abs();
        rhs = rhs.add(&term);
    }
    Ok(IdentityInstance::zeta("restricted_sum_word", p, lhs, rhs, TOL_DEFAULT))
}

fn h1_word(p: &Params, key: &str) -> Result<Element, Error> {
    let w = p.word(key)?;
    guard(w.is_h1(), &format!("--{key} must be an h1 word"))?;
    guard_weight(w.len() as u64, MAX_ZETA_WEIGHT)?;
    Ok(Element::word(w))
}

fn h0_word(p: &Params, key: &str) -> Result<Element, Error> {
    let w = p.word(key)?;
    guard(w.is_h0(), &format!("--{key} must be an h0 word"))?;
    guard_weight(w.len() as u64, MAX_ZETA_WEIGHT)?;
    Ok(Element::word(w))
}

/// `(Z^{t,⧢} - ρ Z^{t,∗})(w)` at `T = 0`, compared at `t = 0` and `t = 1`.
fn eds_rho(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let w = h1_word(p, "w")?;
    let sh = ev.z_reg_eval(&w, Product::TShuffle)?;
    let st = ev.rho_apply(&ev.z_reg_eval(&w, Product::TStuffle)?)?;
    let lhs = sh.at_big_t_zero();
    let rhs = st.at_big_t_zero();
    let mut inst = IdentityInstance::zeta("eds_rho", p, lhs, rhs, TOL_DEFAULT);
    inst.points = Some(vec![0.0, 1.0]);
    Ok(inst)
}

fn eds_difference(p: &Params) -> Result<Element, Error> {
    let w1 = h1_word(p, "w1")?;
    let w0 = h0_word(p, "w0")?;
    let tp = t();
    Ok(&w1.tshuffle(&w0, &tp) - &w1.tstuffle(&w0, &tp)?)
}

/// `Z^{t,⧢}(w_1 ⧢_t w_0 - w_1 ∗_t w_0)`
fn eds_shuffle(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let d = eds_difference(p)?;
    let lhs = ev.z_reg_eval(&d, Product::TShuffle)?;
    Ok(IdentityInstance::zeta("eds_shuffle", p, lhs, NumPolyTT::zero(), TOL_DEFAULT))
}

/// `Z^t(reg(w_1 ⧢_t w_0 - w_1 ∗_t w_0))` under either t-product.
fn eds_reg(p: &Params, ev: &Evaluator, product: Product) -> Result<IdentityInstance, Error> {
    let d = eds_difference(p)?;
    let lhs = ev.zt_eval(&reg(&d, product, &t())?)?;
    let name = if product == Product::TShuffle {
        "eds_reg"
    } else {
        "eds_reg_star"
    };
    Ok(IdentityInstance::zeta(name, p, lhs, NumPolyTT::zero(), TOL_DEFAULT))
}

/// `Z^t(∂_n^t(w_0))`
fn eds_derivation(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let n = p.int("n")?;
    guard(n >= 1, "eds_derivation needs n >= 1")?;
    let w0 = h0_word(p, "w0")?;
    guard_weight(n as u64, MAX_ZETA_WEIGHT)?;
    let lhs = ev.zt_eval(&del_n_t(&w0, n))?;
    Ok(IdentityInstance::zeta("eds_derivation", p, lhs, NumPolyTT::zero(), TOL_DEFAULT))
}

/// `Z^t((σ_m^t - σ̄_m^t)(w_0))`
fn eds_sigma(p: &Params, ev: &Evaluator) -> Result<IdentityInstance, Error> {
    let m = p.int("m")?;
    let w0 = h0_word(p, "w0")?;
    let tp = t();
    let d = &sigma_m_op(&w0, m, false, Some(&tp))? - &sigma_m_op(&w0, m, true, Some(&tp))?;
    let lhs = ev.zt_eval(&d)?;
    Ok(IdentityInstance::zeta("eds_sigma", p, lhs, NumPolyTT::zero(), TOL_DEFAULT))
}

/// Builds and checks one instance.
pub fn check(name: &str, p: &Params, ev: &Evaluator, timings: bool) -> Result<Report, Error> {
    let start = Instant::now();
    let inst = build(name, p, ev)?;
    let ms = start.elapsed().as_millis() as u64;
    Ok(inst.report(timings.then_some(ms)))
}

fn words_h1(max_len: usize) -> Vec<Word> {
    Word::all_up_to(max_len)
        .filter(|w| !w.is_empty() && w.is_h1())
        .collect()
}

fn words_h0(max_len: usize) -> Vec<Word> {
    Word::all_up_to(max_len)
        .filter(|w| !w.is_empty() && w.is_h0())
        .collect()
}

/// Catalog sweep in a fixed order; `weight_cap` drops cases above the given weight.
pub fn suite_cases(weight_cap: u32) -> Vec<(String, Params)> {
    let mut cases: Vec<(String, Params, u32)> = Vec::new();
    let mut push = |name: &str, p: Params, w: u32| cases.push((name.to_string(), p, w));
    let ip = |k: &Index| Params::new().with("index", k);
    let kn = |k: u32, n: u32| Params::new().with("k", k).with("n", n);

    for w in 1..=8 {
        for d in 1..=4usize {
            for idx in enumerate_indices(w, d, false) {
                push("symmetric_sum", ip(&idx), w);
            }
        }
    }
    for w in 1..=6 {
        for idx in crate::words::all_indices_of_weight(w, false) {
            push("hoffman", ip(&idx), w + 1);
        }
    }
    for k in 2..=8 {
        for n in 1..k {
            push("sum_formula_word", kn(k, n), k);
        }
    }
    for k in 1..=7 {
        for n in 1..=8 - k {
            push("shuffle_reg_sum", kn(k, n), k + n);
        }
    }
    for k in 1..=6 {
        for l in 1..=7 - k {
            push("height_one", Params::new().with("k", k).with("l", l), k + l);
        }
    }
    for k in 3..=8 {
        for n in 2..=4u32.min(k - 1) {
            push("weighted_stuffle", kn(k, n), k);
            push("weighted_shuffle", kn(k, n), k);
            for l in 1..k {
                for idx in enumerate_indices(k - l, n as usize - 1, false) {
                    push(
                        "tshuffle_1_n",
                        Params::new().with("l", l).with("index", &idx),
                        k,
                    );
                }
            }
        }
    }
    for a in 1..=4 {
        for b in 1..=4 {
            for n in 1..=5 {
                let p = Params::new().with("a", a).with("b", b).with("n", n);
                push("dm_sum", p, b + (n - 1) * a);
            }
        }
    }
    for k in 1..=4 {
        for n in 0..=8 {
            for name in ["St_S1mt", "S1m2t_tast", "St_ast_gen", "St_power_new"] {
                push(name, kn(k, n), k * n);
            }
            if n >= 1 {
                push("St_power", kn(k, n), k * n);
                push("S_ast_inverse", kn(k, n), k * n);
            }
        }
    }
    for w in 1..=8 {
        for idx in crate::words::all_indices_of_weight(w, false) {
            if idx.depth() <= 4 {
                push("St_extension", ip(&idx), w);
            }
        }
    }
    for a in 1..=3 {
        for k in 1..=8 {
            for n in 0..=k {
                let p = Params::new().with("k", k).with("n", n).with("a", a);
                push("St_F", p.clone(), a * k);
                if n >= 1 {
                    for name in ["Nkn_first", "Nkn_second", "Nkn_third", "Nkn_second_third"] {
                        push(name, p.clone(), a * k);
                    }
                }
            }
        }
    }

    for (k, n) in [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3), (6, 3)] {
        push("sum_formula", kn(k, n), k);
        push("sum_formula_alt", kn(k, n), k);
    }
    for (k, n) in [(4, 2), (5, 2), (5, 3), (6, 3)] {
        push("weighted_sum", kn(k, n), k);
    }
    for k in 3..=5 {
        push("weighted_sum_n2", Params::new().with("k", k), k);
    }
    for k in 1..=4 {
        for l in 1..=5 - k {
            push("height_one_zeta", Params::new().with("k", k).with("l", l), k + l);
        }
    }
    for k in 1..=2 {
        for n in 1..=3 {
            push("eval_2k", kn(k, n), 2 * k * n);
        }
    }
    for k in 2..=3 {
        for n in 1..=3 {
            push("zetat_k_star", kn(k, n), k * n);
        }
    }
    for k in 1..=3 {
        for n in 1..=k {
            push("restricted_sum", kn(k, n).with("m", 1), 2 * k);
            push("restricted_sum_word", kn(k, n).with("a", 3), 3 * k);
        }
    }
    for w in 2..=6 {
        for d in 1..=3usize {
            for idx in enumerate_indices(w, d, true) {
                if idx.parts().iter().all(|&x| x >= 2) {
                    push("symmetric_sum_zeta", ip(&idx), w);
                }
            }
        }
    }
    for w in words_h1(5) {
        push("eds_rho", Params::new().with("w", w), w.len() as u32);
    }
    for w1 in words_h1(3) {
        for w0 in words_h0(5 - w1.len()) {
            let p = Params::new().with("w1", w1).with("w0", w0);
            let w = (w1.len() + w0.len()) as u32;
            push("eds_reg", p.clone(), w);
            push("eds_reg_star", p.clone(), w);
            push("eds_shuffle", p, w);
        }
    }
    for w0 in words_h0(4) {
        for n in 1..=5 - w0.len() as u32 {
            let p = Params::new().with("n", n).with("w0", w0);
            push("eds_derivation", p, w0.len() as u32 + n);
        }
        for m in 0..=5 - w0.len() as u32 {
            let p = Params::new().with("m", m).with("w0", w0);
            push("eds_sigma", p, w0.len() as u32 + m);
        }
    }
    cases
        .into_iter()
        .filter(|(_, _, w)| *w <= weight_cap)
        .map(|(n, p, _)| (n, p))
        .collect()
}

/// Checks every case on a pool of `jobs` workers; reports keep the input order.
pub fn run_suite(
    cases: &[(String, Params)],
    ev: &Evaluator,
    jobs: usize,
    timings: bool,
) -> Result<Vec<Report>, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Param(e.to_string()))?;
    Ok(pool.install(|| {
        cases
            .par_iter()
            .map(|(name, p)| match check(name, p, ev, timings) {
                Ok(r) => r,
                Err(e) => Report {
                    name: name.clone(),
                    params: p.clone(),
                    level: if WORD_IDENTITIES.contains(&name.as_str()) {
                        Level::Word
                    } else {
                        Level::Zeta
                    },
                    pass: false,
                    max_abs_residual: Residual::Value(f64::NAN),
                    wall_ms: None,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::EvalConfig;

    fn ev() -> Evaluator {
        Evaluator::new(EvalConfig::default()).unwrap()
    }

    #[test]
    fn c_and_d_examples() {
        assert_eq!(coeff_c(1), TPoly::one());
        assert_eq!(coeff_c(2), TPoly::from_ints(&[-1, 2]));
        assert_eq!(coeff_c(3), TPoly::from_ints(&[2, -6, 6]));
        assert_eq!(coeff_c(4), TPoly::from_ints(&[-6, 24, -36, 24]));
        assert_eq!(coeff_d(0), TPoly::zero());
        assert_eq!(coeff_d(2), TPoly::from_ints(&[-1, 2]));
        assert_eq!(coeff_d(3), TPoly::from_ints(&[1, -3, 3]));
    }

    #[test]
    fn c_recurrence_and_endpoints() {
        let a = TPoly::from_ints(&[-1, 2]);
        let b = TPoly::from_ints(&[0, -1, 1]);
        for m in 2..=12u32 {
            let mi = int(m as i64);
            let rhs = &(&a * &coeff_c(m)).scale(&mi)
                - &(&b * &coeff_c(m - 1)).scale(&(&mi * int(m as i64 - 1)));
            assert_eq!(coeff_c(m + 1), rhs, "m={m}");
        }
        for m in 1..=12u32 {
            let f = Rational::from_integer(factorial(m as u64 - 1));
            assert_eq!(coeff_c(m).eval(&int(0)), &f * sign(m as usize - 1));
            assert_eq!(coeff_c(m).eval(&int(1)), f);
            assert_eq!(coeff_c(m).degree(), Some(m - 1));
            assert_eq!(
                coeff_c(m).coeff(m - 1),
                Rational::from_integer(factorial(m as u64))
            );
        }
        for m in 1..=12u32 {
            let rhs = &(&a * &coeff_d(m)) - &(&b * &coeff_d(m - 1));
            assert_eq!(coeff_d(m + 1), rhs);
        }
    }

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                next.push(next.last().unwrap() + v);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn partition_examples() {
        let p2 = partitions(2).unwrap();
        assert_eq!(p2[0].blocks, vec![vec![1, 2]]);
        assert_eq!(p2[1].blocks, vec![vec![1], vec![2]]);
        for n in 1..=8 {
            let ps = partitions(n).unwrap();
            assert_eq!(ps.len(), bell(n), "n={n}");
            for p in &ps {
                let mut all: Vec<usize> = p.blocks.iter().flatten().copied().collect();
                all.sort_unstable();
                assert_eq!(all, (1..=n).collect::<Vec<_>>());
                let mins: Vec<usize> = p.blocks.iter().map(|b| b[0]).collect();
                assert!(mins.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert!(partitions(11).is_err());
        assert!(partitions(0).is_err());
        let pi = SetPartition {
            blocks: vec![vec![1, 2], vec![3, 4], vec![5]],
        };
        assert_eq!(pi.coeff(), TPoly::from_ints(&[-1, 2]).pow(2));
        assert_eq!(pi.to_string(), "{{1,2},{3,4},{5}}");
    }

    #[test]
    fn weight_c_examples() {
        for k in 1..=10u32 {
            let (c, ct) = weight_C(&Index(vec![k])).unwrap();
            assert_eq!(c, pow2(k as i64));
            assert_eq!(ct, pow2(k as i64) - 1);
        }
        let (c21, ct21) = weight_C(&Index(vec![2, 1])).unwrap();
        let (c1, _) = weight_C(&Index(vec![1])).unwrap();
        assert_eq!(c21.clone() - c1, ct21);
        // 2^{2-1} + 2^{3-2} + 2^{3-2}
        assert_eq!(c21, BigInt::from(6));
        assert!(weight_C(&Index(vec![])).is_err());
    }

    #[test]
    fn build_n_examples() {
        assert_eq!(build_N(2, 2, 5).unwrap(), Element::z(&[5, 5]));
        assert_eq!(
            build_N(3, 2, 1).unwrap(),
            &Element::z(&[1, 2]) + &Element::z(&[2, 1])
        );
        assert_eq!(build_N(2, 1, 2).unwrap(), Element::z(&[4]));
        assert!(build_N(1, 2, 1).is_err());
    }

    #[test]
    fn b_coefficients() {
        assert_eq!(coeff_b(&[2]), int(0));
        assert_eq!(coeff_b(&[5, 3]), int(3 + 1));
    }

    fn word_ok(name: &str, p: Params) {
        let inst = word_identity(name, &p).unwrap();
        assert_eq!(inst.residual(), Residual::Exact, "{name} {p}: {:?}", inst.residual_table());
    }

    #[test]
    fn symmetric_sum_examples() {
        word_ok("symmetric_sum", Params::new().with("index", "2,3"));
        word_ok("symmetric_sum", Params::new().with("index", "1,2,1"));
        word_ok("symmetric_sum", Params::new().with("index", "2,1,3,1"));
        // depth 2 reduces to the t-stuffle rule
        let p = Params::new().with("index", "2,3");
        let inst = word_identity("symmetric_sum", &p).unwrap();
        let expect = &tstuffle(&Element::z(&[2]), &Element::z(&[3]))
            + &Element::z(&[5]).scale(&coeff_c(2));
        assert_eq!(inst.rhs, Side::Word(expect));
    }

    #[test]
    fn word_identity_examples() {
        word_ok("hoffman", Params::new().with("index", "2,1,3"));
        word_ok("hoffman", Params::new().with("index", "1"));
        word_ok("sum_formula_word", Params::new().with("k", 5).with("n", 3));
        word_ok("shuffle_reg_sum", Params::new().with("k", 2).with("n", 3));
        word_ok("height_one", Params::new().with("k", 2).with("l", 3));
        word_ok("weighted_stuffle", Params::new().with("k", 6).with("n", 3));
        word_ok("weighted_shuffle", Params::new().with("k", 6).with("n", 3));
        word_ok("tshuffle_1_n", Params::new().with("l", 2).with("index", "3,1"));
        word_ok("dm_sum", Params::new().with("a", 2).with("b", 3).with("n", 3));
        word_ok("St_power", Params::new().with("k", 2).with("n", 4));
        word_ok("St_extension", Params::new().with("index", "2,1,3"));
        word_ok("S_ast_inverse", Params::new().with("k", 2).with("n", 3));
        word_ok("St_S1mt", Params::new().with("k", 2).with("n", 3));
        word_ok("S1m2t_tast", Params::new().with("k", 2).with("n", 3));
        word_ok("St_ast_gen", Params::new().with("k", 2).with("n", 4));
        word_ok("St_power_new", Params::new().with("k", 2).with("n", 4));
        let kna = Params::new().with("k", 4).with("n", 2).with("a", 2);
        for name in ["Nkn_first", "Nkn_second", "Nkn_third", "Nkn_second_third", "St_F"] {
            word_ok(name, kna.clone());
        }
    }

    #[test]
    fn dm_sum_hand_case() {
        let p = Params::new().with("a", 3).with("b", 3).with("n", 2);
        let inst = word_identity("dm_sum", &p).unwrap();
        assert_eq!(inst.lhs, Side::Word(Element::z(&[3, 3]).scale_rat(&int(2))));
    }

    #[test]
    fn s_ast_inverse_hand_case() {
        // S(z_k^2) - z_k * S(z_k) + z_k^2 with S(z_k^2) = z_k^2 + z_2k
        let k = 3;
        let s_sq = &zpow(k, 2) + &Element::z(&[2 * k]);
        assert_eq!(s1(&zpow(k, 2)), s_sq);
        let sum = &(&s_sq - &stuffle(&Element::z(&[k]), &Element::z(&[k]))) + &zpow(k, 2);
        assert!(sum.is_zero());
    }

    #[test]
    fn unknown_and_bad_params() {
        assert!(matches!(
            word_identity("nope", &Params::new()),
            Err(Error::UnknownIdentity(_))
        ));
        assert!(word_identity("sum_formula_word", &Params::new().with("k", 2).with("n", 3)).is_err());
        assert!(word_identity("dm_sum", &Params::new().with("a", 1)).is_err());
        assert!(zeta_identity("sum_formula", &Params::new().with("k", 40).with("n", 2), &ev()).is_err());
    }

    #[test]
    fn zeta_examples() {
        let ev = ev();
        let inst = zeta_identity("sum_formula", &Params::new().with("k", 3).with("n", 2), &ev).unwrap();
        assert!(inst.passes());
        if let Side::Zeta(r) = &inst.rhs {
            let z3 = ev.zeta_parts(&[3]).unwrap().value;
            assert!((r.re_t(0) - z3).abs() < 1e-12 && (r.re_t(1) - z3).abs() < 1e-12);
        }
        let inst = zeta_identity("weighted_sum_n2", &Params::new().with("k", 3), &ev).unwrap();
        assert!(inst.passes());
        if let Side::Zeta(r) = &inst.rhs {
            let z3 = ev.zeta_parts(&[3]).unwrap().value;
            assert!((r.re_t(0) - 4.0 * z3).abs() < 1e-12 && (r.re_t(1) - 4.0 * z3).abs() < 1e-12);
        }
        let inst = zeta_identity("sum_formula", &Params::new().with("k", 4).with("n", 2), &ev).unwrap();
        if let (Side::Zeta(l), Side::Zeta(r)) = (&inst.lhs, &inst.rhs) {
            assert!((l.re_t(0) - r.re_t(0)).abs() < 1e-3);
            assert!((r.re_t(0) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-10);
        }
        for (name, p) in [
            ("eval_2k", Params::new().with("k", 1).with("n", 2)),
            ("restricted_sum", Params::new().with("m", 1).with("k", 2).with("n", 1)),
            ("restricted_sum_word", Params::new().with("a", 2).with("k", 2).with("n", 2)),
            ("zetat_k_star", Params::new().with("k", 2).with("n", 3)),
            ("height_one_zeta", Params::new().with("k", 2).with("l", 2)),
            ("symmetric_sum_zeta", Params::new().with("index", "2,3")),
            ("weighted_sum", Params::new().with("k", 5).with("n", 3)),
            ("eds_rho", Params::new().with("w", "yxy")),
            ("eds_reg", Params::new().with("w1", "y").with("w0", "xy")),
            ("eds_derivation", Params::new().with("n", 1).with("w0", "xy")),
            ("eds_sigma", Params::new().with("m", 1).with("w0", "xy")),
        ] {
            let inst = zeta_identity(name, &p, &ev).unwrap();
            assert!(inst.passes(), "{name} {p}: {}", inst.residual());
        }
    }

    #[test]
    fn report_json_shape() {
        let inst = word_identity("St_power", &Params::new().with("k", 2).with("n", 2)).unwrap();
        let r = inst.report(None);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"name":"St_power","params":{"k":2,"n":2},"level":"word","pass":true,"max_abs_residual":"exact"}"#
        );
        let r = inst.report(Some(3));
        assert!(serde_json::to_string(&r).unwrap().ends_with(r#""wall_ms":3}"#));
    }

    #[test]
    fn suite_is_deterministic_and_capped() {
        let a = suite_cases(4);
        let b = suite_cases(4);
        assert_eq!(a, b);
        assert!(!a.is_empty());
        assert!(suite_cases(100).len() > a.len());
    }
}
