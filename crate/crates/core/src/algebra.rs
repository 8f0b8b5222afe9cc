//! Elements of `Q[t]<x, y>` and the concatenation, (t-)shuffle and (t-)stuffle products.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, LazyLock, RwLock};

use num_traits::{One, Signed};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactnum::{Rational, TPoly};
use crate::words::{Index, Letter, Word};

/// Finite `Q[t]`-linear combination of words. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<Word, TPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Product {
    Concat,
    Shuffle,
    TShuffle,
    Stuffle,
    TStuffle,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Word::EMPTY)
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, TPoly::one())
    }

    pub fn term(w: Word, c: TPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(w, &c);
        e
    }

    /// `z_{k1} ... z_{kn}`
    pub fn z(parts: &[u32]) -> Self {
        Self::word(Index(parts.to_vec()).to_word())
    }

    pub fn index(k: &Index) -> Self {
        Self::word(k.to_word())
    }

    pub fn parse_word(s: &str) -> Result<Self, Error> {
        Ok(Self::word(s.parse()?))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Word, &TPoly)> + '_ {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn coeff(&self, w: Word) -> TPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: &TPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &TPoly) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(*w, &(d * c));
        }
    }

    pub fn scale(&self, c: &TPoly) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn scale_rat(&self, c: &Rational) -> Element {
        self.scale(&TPoly::constant(c.clone()))
    }

    pub fn is_h1(&self) -> bool {
        self.terms.keys().all(|w| w.is_h1())
    }

    pub fn is_h0(&self) -> bool {
        self.terms.keys().all(|w| w.is_h0())
    }

    pub fn check_h1(&self) -> Result<(), Error> {
        match self.terms.keys().find(|w| !w.is_h1()) {
            Some(w) => Err(Error::NotH1(w.to_string())),
            None => Ok(()),
        }
    }

    pub fn check_h0(&self) -> Result<(), Error> {
        match self.terms.keys().find(|w| !w.is_h0()) {
            Some(w) => Err(Error::NotH0(w.to_string())),
            None => Ok(()),
        }
    }

    /// Linear extension of a word-level map.
    pub fn map_words(&self, mut f: impl FnMut(Word) -> Element) -> Element {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(*w), c);
        }
        out
    }

    /// Substitutes `t := p` in every coefficient.
    pub fn compose_t(&self, p: &TPoly) -> Element {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(*w, &c.compose(p));
        }
        out
    }

    pub fn concat(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(*b), &(ca * cb));
            }
        }
        out
    }

    pub fn shuffle(&self, other: &Element) -> Element {
        self.tshuffle(other, &TPoly::zero())
    }

    pub fn tshuffle(&self, other: &Element, p: &TPoly) -> Element {
        bilinear(self, other, p, sh_words)
    }

    pub fn stuffle(&self, other: &Element) -> Result<Element, Error> {
        self.tstuffle(other, &TPoly::zero())
    }

    pub fn tstuffle(&self, other: &Element, p: &TPoly) -> Result<Element, Error> {
        self.check_h1()?;
        other.check_h1()?;
        Ok(bilinear(self, other, p, st_words))
    }

    /// `tstuffle` for operands already known to lie in h1.
    ///
    /// # Panics
    /// If either operand has a word not ending in `y`.
    pub fn tst(&self, other: &Element, p: &TPoly) -> Element {
        self.tstuffle(other, p).expect("t-stuffle operands must lie in h1")
    }

    pub fn product(&self, other: &Element, product: Product, p: &TPoly) -> Result<Element, Error> {
        match product {
            Product::Concat => Ok(self.concat(other)),
            Product::Shuffle => Ok(self.shuffle(other)),
            Product::TShuffle => Ok(self.tshuffle(other, p)),
            Product::Stuffle => self.stuffle(other),
            Product::TStuffle => self.tstuffle(other, p),
        }
    }

    pub fn power(&self, n: u32, product: Product, p: &TPoly) -> Result<Element, Error> {
        let mut acc = Element::one();
        for _ in 0..n {
            acc = acc.product(self, product, p)?;
        }
        Ok(acc)
    }

    /// Maximal absolute coefficient over all words and all powers of `t`.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(TPoly::max_abs).fold(0.0, f64::max)
    }

    /// Renders a single word: h1 words as `z` blocks, the unit as `1`, others as letters.
    pub fn word_label(w: Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        if w.is_h1() {
            let idx = Index::from_word(w).expect("h1 checked");
            idx.parts()
                .iter()
                .map(|k| format!("z{k}"))
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            w.to_string()
        }
    }

    /// Text form with a caller-supplied word renderer; terms in descending canonical order.
    pub fn render(&self, label: impl Fn(Word) -> String, mul: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let name = label(*w);
            let single = c.terms().count() == 1;
            let (neg, mag) = if single {
                let (e, v) = c.terms().next().expect("nonzero");
                (v.is_negative(), TPoly::monomial(v.abs(), e))
            } else {
                (false, c.clone())
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = if single {
                mag.to_string_with("t", mul)
            } else {
                format!("({})", mag.to_string_with("t", mul))
            };
            if mag.is_one() {
                out.push_str(&name);
            } else if w.is_empty() {
                out.push_str(&coef);
            } else {
                out.push_str(&coef);
                out.push_str(if mul.is_empty() { " " } else { mul });
                out.push_str(&name);
            }
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Element::word_label, ""))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[")?;
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({c}){w}")?;
        }
        write!(f, "]")
    }
}

impl From<Word> for Element {
    fn from(w: Word) -> Self {
        Element::word(w)
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, c);
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, &-c);
        }
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += &rhs;
        self
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(mut self, rhs: Element) -> Element {
        self -= &rhs;
        self
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&TPoly::from_int(-1))
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl std::iter::Sum for Element {
    fn sum<I: Iterator<Item = Element>>(iter: I) -> Element {
        iter.fold(Element::zero(), |acc, e| acc + e)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    word: String,
    coeff: TPoly,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            seq.serialize_element(&JsonTerm {
                word: w.to_string(),
                coeff: c.clone(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<JsonTerm>::deserialize(deserializer)?;
        let mut e = Element::zero();
        for t in raw {
            let w: Word = t.word.parse().map_err(de::Error::custom)?;
            e.add_term(w, &t.coeff);
        }
        Ok(e)
    }
}

/// Word-pair expansion with coefficients polynomial in a formal parameter `q`.
type Expansion = Arc<Vec<(Word, TPoly)>>;
type Memo = LazyLock<RwLock<HashMap<(Word, Word), Expansion>>>;

static SH_MEMO: Memo = LazyLock::new(|| RwLock::new(HashMap::new()));
static ST_MEMO: Memo = LazyLock::new(|| RwLock::new(HashMap::new()));

/// Drops all memoized product expansions.
pub fn clear_caches() {
    SH_MEMO.write().expect("memo lock").clear();
    ST_MEMO.write().expect("memo lock").clear();
}

fn memo_get(memo: &Memo, key: &(Word, Word)) -> Option<Expansion> {
    memo.read().expect("memo lock").get(key).cloned()
}

fn memo_put(memo: &Memo, key: (Word, Word), value: HashMap<Word, TPoly>) -> Expansion {
    let mut v: Vec<(Word, TPoly)> = value.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by_key(|a| a.0);
    let v = Arc::new(v);
    memo.write()
        .expect("memo lock")
        .insert(key, Arc::clone(&v));
    v
}

fn acc_add(acc: &mut HashMap<Word, TPoly>, w: Word, c: &TPoly) {
    *acc.entry(w).or_default() += c;
}

fn unit_expansion(w: Word) -> Expansion {
    Arc::new(vec![(w, TPoly::one())])
}

/// `u ⧢_q v` on words, formal in `q`.
fn sh_words(u: Word, v: Word) -> Expansion {
    if u.is_empty() {
        return unit_expansion(v);
    }
    if v.is_empty() {
        return unit_expansion(u);
    }
    let key = if u <= v { (u, v) } else { (v, u) };
    if let Some(hit) = memo_get(&SH_MEMO, &key) {
        return hit;
    }
    let (u, v) = key;
    let (a, w1) = u.split_first().expect("nonempty");
    let (b, w2) = v.split_first().expect("nonempty");
    let mut acc: HashMap<Word, TPoly> = HashMap::new();
    for (w, c) in sh_words(w1, v).iter() {
        acc_add(&mut acc, w.prepend(a), c);
    }
    for (w, c) in sh_words(u, w2).iter() {
        acc_add(&mut acc, w.prepend(b), c);
    }
    let minus_q = TPoly::monomial(-Rational::one(), 1);
    if w1.is_empty() && a == Letter::Y {
        acc_add(&mut acc, v.prepend(Letter::X), &minus_q);
    }
    if w2.is_empty() && b == Letter::Y {
        acc_add(&mut acc, u.prepend(Letter::X), &minus_q);
    }
    memo_put(&SH_MEMO, key, acc)
}

/// `u *_q v` on h1 words, formal in `q`.
fn st_words(u: Word, v: Word) -> Expansion {
    if u.is_empty() {
        return unit_expansion(v);
    }
    if v.is_empty() {
        return unit_expansion(u);
    }
    let key = if u <= v { (u, v) } else { (v, u) };
    if let Some(hit) = memo_get(&ST_MEMO, &key) {
        return hit;
    }
    let (u, v) = key;
    let (k, w1) = u.split_first_z().expect("h1 word");
    let (l, w2) = v.split_first_z().expect("h1 word");
    let zk = Word::z(k);
    let zl = Word::z(l);
    let mut acc: HashMap<Word, TPoly> = HashMap::new();
    for (w, c) in st_words(w1, v).iter() {
        acc_add(&mut acc, zk.concat(*w), c);
    }
    for (w, c) in st_words(u, w2).iter() {
        acc_add(&mut acc, zl.concat(*w), c);
    }
    let tails = st_words(w1, w2);
    let one_minus_2q = TPoly::from_ints(&[1, -2]);
    let zkl = Word::z(k + l);
    for (w, c) in tails.iter() {
        acc_add(&mut acc, zkl.concat(*w), &(c * &one_minus_2q));
    }
    if !(w1.is_empty() && w2.is_empty()) {
        let q2_minus_q = TPoly::from_ints(&[0, -1, 1]);
        let xkl = Word::x_pow((k + l) as usize);
        for (w, c) in tails.iter() {
            acc_add(&mut acc, xkl.concat(*w), &(c * &q2_minus_q));
        }
    }
    memo_put(&ST_MEMO, key, acc)
}

/// Evaluates formal-`q` coefficients at `q = p`, caching powers of `p`.
struct Specializer<'a> {
    p: &'a TPoly,
    pows: Vec<TPoly>,
}

impl<'a> Specializer<'a> {
    fn new(p: &'a TPoly) -> Self {
        Specializer {
            p,
            pows: vec![TPoly::one()],
        }
    }

    fn apply(&mut self, c: &TPoly) -> TPoly {
        if self.p.is_t() {
            return c.clone();
        }
        if self.p.is_zero() {
            return TPoly::constant(c.coeff(0));
        }
        let deg = c.degree().unwrap_or(0) as usize;
        while self.pows.len() <= deg {
            let next = self.pows.last().expect("nonempty") * self.p;
            self.pows.push(next);
        }
        let mut out = TPoly::zero();
        for (e, v) in c.terms() {
            out += &self.pows[e as usize].scale(v);
        }
        out
    }
}

fn bilinear(a: &Element, b: &Element, p: &TPoly, words: fn(Word, Word) -> Expansion) -> Element {
    let mut spec = Specializer::new(p);
    let mut cache: HashMap<TPoly, TPoly> = HashMap::new();
    let mut out = Element::zero();
    for (u, cu) in &a.terms {
        for (v, cv) in &b.terms {
            let cuv = cu * cv;
            for (w, c) in words(*u, *v).iter() {
                let c = match cache.get(c) {
                    Some(hit) => hit.clone(),
                    None => {
                        let s = spec.apply(c);
                        cache.insert(c.clone(), s.clone());
                        s
                    }
                };
                if c.is_zero() {
                    continue;
                }
                out.add_term(*w, &(&c * &cuv));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::maps::s_map;
    use proptest::prelude::*;

    fn w(s: &str) -> Element {
        Element::parse_word(s).unwrap()
    }

    fn t() -> TPoly {
        TPoly::t()
    }

    fn c(cs: &[i64]) -> TPoly {
        TPoly::from_ints(cs)
    }

    /// Classical shuffle by choosing which positions carry the letters of `u`.
    fn shuffle_oracle(u: Word, v: Word) -> Element {
        let n = u.len() + v.len();
        let mut out = Element::zero();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != u.len() {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            let mut word = Word::EMPTY;
            for pos in 0..n {
                if mask >> pos & 1 == 1 {
                    word = word.push(u.letter(i));
                    i += 1;
                } else {
                    word = word.push(v.letter(j));
                    j += 1;
                }
            }
            out.add_term(word, &TPoly::one());
        }
        out
    }

    /// Classical quasi-shuffle on index vectors, recursing on the last entries.
    fn stuffle_oracle(a: &[u32], b: &[u32]) -> BTreeMap<Vec<u32>, i64> {
        let mut out = BTreeMap::new();
        if a.is_empty() || b.is_empty() {
            let v = if a.is_empty() { b } else { a };
            out.insert(v.to_vec(), 1);
            return out;
        }
        let (ka, ra) = (a[a.len() - 1], &a[..a.len() - 1]);
        let (kb, rb) = (b[b.len() - 1], &b[..b.len() - 1]);
        let mut push = |m: BTreeMap<Vec<u32>, i64>, last: u32| {
            for (mut k, c) in m {
                k.push(last);
                *out.entry(k).or_insert(0) += c;
            }
        };
        push(stuffle_oracle(ra, b), ka);
        push(stuffle_oracle(a, rb), kb);
        push(stuffle_oracle(ra, rb), ka + kb);
        out
    }

    fn oracle_element(m: BTreeMap<Vec<u32>, i64>) -> Element {
        let mut e = Element::zero();
        for (k, c) in m {
            e.add_term(Index(k).to_word(), &TPoly::from_int(c));
        }
        e
    }

    fn h1_words_up_to(n: usize) -> Vec<Word> {
        Word::all_up_to(n).filter(|w| w.is_h1()).collect()
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("xy").concat(&w("y")), w("xyy"));
        assert_eq!(Element::one().concat(&w("xyx")), w("xyx"));
        assert_eq!((&w("x") + &w("y")).concat(&w("y")), &w("xy") + &w("yy"));
    }

    #[test]
    fn tshuffle_examples() {
        let yy = w("y").tshuffle(&w("y"), &t());
        let mut expect = w("yy").scale(&TPoly::from_int(2));
        expect.add_term("xy".parse().unwrap(), &c(&[0, -2]));
        assert_eq!(yy, expect);

        let xy = w("x").tshuffle(&w("y"), &t());
        let mut expect = &w("xy") + &w("yx");
        expect.add_term("xx".parse().unwrap(), &c(&[0, -1]));
        assert_eq!(xy, expect);

        assert_eq!(Element::one().tshuffle(&w("xyx"), &t()), w("xyx"));
    }

    #[test]
    fn tstuffle_examples() {
        let z1 = Element::z(&[1]);
        let got = z1.tst(&z1, &t());
        let mut expect = Element::z(&[1, 1]).scale(&TPoly::from_int(2));
        expect.add_scaled(&Element::z(&[2]), &c(&[1, -2]));
        assert_eq!(got, expect);
        assert_eq!(got.to_string(), "2 z1 z1 + (1-2t) z2");

        let got = Element::z(&[1, 1]).tst(&z1, &t());
        let mut expect = Element::z(&[1, 1, 1]).scale(&TPoly::from_int(3));
        expect.add_scaled(&(&Element::z(&[1, 2]) + &Element::z(&[2, 1])), &c(&[1, -2]));
        expect.add_scaled(&Element::z(&[3]), &c(&[0, -1, 1]));
        assert_eq!(got, expect);

        assert_eq!(Element::one().tst(&Element::z(&[2, 1]), &t()), Element::z(&[2, 1]));
        assert!(w("yx").tstuffle(&z1, &t()).is_err());
    }

    #[test]
    fn power_examples() {
        let p = TPoly::zero();
        assert_eq!(
            w("y").power(2, Product::Shuffle, &p).unwrap(),
            w("yy").scale(&TPoly::from_int(2))
        );
        assert_eq!(Element::z(&[2]).power(2, Product::Concat, &p).unwrap(), w("xyxy"));
        assert_eq!(Element::z(&[1]).power(3, Product::Concat, &p).unwrap(), w("yyy"));
        assert_eq!(w("xy").power(0, Product::TStuffle, &t()).unwrap(), Element::one());
    }

    #[test]
    fn shuffle_matches_subset_oracle() {
        for u in Word::all_up_to(4) {
            for v in Word::all_up_to(4) {
                assert_eq!(
                    Element::word(u).shuffle(&Element::word(v)),
                    shuffle_oracle(u, v),
                    "{u} sh {v}"
                );
            }
        }
    }

    #[test]
    fn stuffle_matches_index_oracle() {
        let ws = h1_words_up_to(5);
        for &u in &ws {
            for &v in &ws {
                if u.len() + v.len() > 8 {
                    continue;
                }
                let a = Index::from_word(u).unwrap();
                let b = Index::from_word(v).unwrap();
                assert_eq!(
                    Element::word(u).stuffle(&Element::word(v)).unwrap(),
                    oracle_element(stuffle_oracle(&a.0, &b.0)),
                    "{u} st {v}"
                );
            }
        }
    }

    #[test]
    fn t_products_match_conjugated_classical() {
        let minus_t = c(&[0, -1]);
        for u in Word::all_up_to(4) {
            for v in Word::all_up_to(3) {
                let (a, b) = (Element::word(u), Element::word(v));
                let conj = s_map(&s_map(&a, &t()).shuffle(&s_map(&b, &t())), &minus_t);
                assert_eq!(a.tshuffle(&b, &t()), conj, "{u} tsh {v}");
                if u.is_h1() && v.is_h1() {
                    let conj = s_map(
                        &s_map(&a, &t()).stuffle(&s_map(&b, &t())).unwrap(),
                        &minus_t,
                    );
                    assert_eq!(a.tst(&b, &t()), conj, "{u} tst {v}");
                }
            }
        }
    }

    #[test]
    fn specialization_at_zero() {
        // the memo is formal in q; specializing at 0 must reproduce the oracle products
        for u in Word::all_up_to(5) {
            for v in Word::all_up_to(5) {
                if u.len() + v.len() > 7 {
                    continue;
                }
                let (a, b) = (Element::word(u), Element::word(v));
                assert_eq!(a.tshuffle(&b, &TPoly::zero()), shuffle_oracle(u, v));
                if u.is_h1() && v.is_h1() {
                    let ia = Index::from_word(u).unwrap();
                    let ib = Index::from_word(v).unwrap();
                    assert_eq!(
                        a.tstuffle(&b, &TPoly::zero()).unwrap(),
                        oracle_element(stuffle_oracle(&ia.0, &ib.0))
                    );
                }
            }
        }
    }

    #[test]
    fn depth_one_stuffle() {
        for k in 1..=6 {
            for l in 1..=6 {
                let got = Element::z(&[k]).tst(&Element::z(&[l]), &t());
                let mut expect = &Element::z(&[k, l]) + &Element::z(&[l, k]);
                expect.add_scaled(&Element::z(&[k + l]), &c(&[1, -2]));
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn h0_closure() {
        let h0: Vec<Word> = Word::all_up_to(5).filter(|w| w.is_h0()).collect();
        for &u in &h0 {
            for &v in &h0 {
                if u.len() + v.len() > 8 {
                    continue;
                }
                let (a, b) = (Element::word(u), Element::word(v));
                assert!(a.tshuffle(&b, &t()).is_h0());
                assert!(a.tst(&b, &t()).is_h0());
            }
        }
    }

    #[test]
    fn rational_parameter() {
        let p = TPoly::constant(rat(-1, 3));
        let got = w("y").tshuffle(&w("y"), &p);
        let mut expect = w("yy").scale(&TPoly::from_int(2));
        expect.add_term("xy".parse().unwrap(), &TPoly::constant(rat(2, 3)));
        assert_eq!(got, expect);
        assert_eq!(got.compose_t(&TPoly::from_int(5)), got);
        let _ = int(0);
    }

    #[test]
    fn json_round_trip() {
        let mut e = w("xyy");
        e.add_term("xy".parse().unwrap(), &c(&[1, -2]));
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(
            s,
            r#"[{"word":"xy","coeff":{"0":"1","1":"-2"}},{"word":"xyy","coeff":{"0":"1"}}]"#
        );
        let back: Element = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Element::zero().to_string(), "0");
        assert_eq!(Element::one().to_string(), "1");
        let mut e = Element::z(&[2, 1]);
        e.add_term(Word::z(3), &t());
        assert_eq!(e.to_string(), "z2 z1 + t z3");
        let e = -&w("yx");
        assert_eq!(e.to_string(), "-yx");
        let mut e = Element::term(Word::EMPTY, c(&[-3]));
        e.add_term(Word::Y, &c(&[0, 0, -1]));
        assert_eq!(e.to_string(), "-t^2 z1 - 3");
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(any::<bool>(), 0..=max).prop_map(|bits| {
            let letters: Vec<Letter> = bits
                .into_iter()
                .map(|b| if b { Letter::Y } else { Letter::X })
                .collect();
            Word::from_letters(&letters).unwrap()
        })
    }

    fn arb_h1(max: usize) -> impl Strategy<Value = Word> {
        arb_word(max.saturating_sub(1)).prop_map(|w| w.push(Letter::Y))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn tshuffle_assoc_comm(a in arb_word(5), b in arb_word(5), cc in arb_word(5)) {
            let (a, b, cc) = (Element::word(a), Element::word(b), Element::word(cc));
            let p = t();
            prop_assert_eq!(a.tshuffle(&b, &p), b.tshuffle(&a, &p));
            prop_assert_eq!(
                a.tshuffle(&b, &p).tshuffle(&cc, &p),
                a.tshuffle(&b.tshuffle(&cc, &p), &p)
            );
        }

        #[test]
        fn tstuffle_assoc_comm(a in arb_h1(5), b in arb_h1(5), cc in arb_h1(5)) {
            let (a, b, cc) = (Element::word(a), Element::word(b), Element::word(cc));
            let p = t();
            prop_assert_eq!(a.tst(&b, &p), b.tst(&a, &p));
            prop_assert_eq!(a.tst(&b, &p).tst(&cc, &p), a.tst(&b.tst(&cc, &p), &p));
        }
    }
}
