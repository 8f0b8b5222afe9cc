//! Words over `{x, y}`, indices, and the `z_k = x^(k-1) y` correspondence.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub const MAX_LEN: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    X,
    Y,
}

/// A bit-packed word. Bit `len - 1` holds the first letter, bit 0 the last; `y` is a set bit.
///
/// Ordering is by length, then lexicographic with `x < y`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    bits: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    H0,
    H1Only,
    HtOnly,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };
    pub const X: Word = Word { len: 1, bits: 0 };
    pub const Y: Word = Word { len: 1, bits: 1 };

    pub fn from_letters(letters: &[Letter]) -> Result<Word, Error> {
        if letters.len() > MAX_LEN {
            return Err(Error::TooLong(MAX_LEN));
        }
        let mut w = Word::EMPTY;
        for &l in letters {
            w = w.push(l);
        }
        Ok(w)
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn letter(self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        if (self.bits >> (self.len() - 1 - i)) & 1 == 1 {
            Letter::Y
        } else {
            Letter::X
        }
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.len()).map(move |i| self.letter(i))
    }

    pub fn first(self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.letter(0))
    }

    pub fn last(self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.letter(self.len() - 1))
    }

    pub fn push(self, l: Letter) -> Word {
        assert!(self.len() < MAX_LEN, "word length exceeds {MAX_LEN}");
        Word {
            len: self.len + 1,
            bits: (self.bits << 1) | (l == Letter::Y) as u128,
        }
    }

    pub fn prepend(self, l: Letter) -> Word {
        Word::from_letter(l).concat(self)
    }

    pub fn from_letter(l: Letter) -> Word {
        match l {
            Letter::X => Word::X,
            Letter::Y => Word::Y,
        }
    }

    /// Splits `z_k w` into `(k, w)`; `None` if the word has no `y`.
    pub fn split_first_z(self) -> Option<(u32, Word)> {
        let pos = self.letters().position(|l| l == Letter::Y)?;
        Some((pos as u32 + 1, self.slice(pos + 1, self.len())))
    }

    pub fn concat(self, other: Word) -> Word {
        assert!(
            self.len() + other.len() <= MAX_LEN,
            "word length exceeds {MAX_LEN}"
        );
        Word {
            len: self.len + other.len,
            bits: self.bits.checked_shl(other.len as u32).unwrap_or(0) | other.bits,
        }
    }

    /// Letters `start..end`.
    pub fn slice(self, start: usize, end: usize) -> Word {
        debug_assert!(start <= end && end <= self.len());
        let len = end - start;
        if len == 0 {
            return Word::EMPTY;
        }
        let shifted = self.bits >> (self.len() - end);
        let mask = if len == 128 { u128::MAX } else { (1u128 << len) - 1 };
        Word {
            len: len as u8,
            bits: shifted & mask,
        }
    }

    pub fn split_first(self) -> Option<(Letter, Word)> {
        let l = self.first()?;
        Some((l, self.slice(1, self.len())))
    }

    pub fn split_last(self) -> Option<(Word, Letter)> {
        let l = self.last()?;
        Some((self.slice(0, self.len() - 1), l))
    }

    pub fn x_pow(n: usize) -> Word {
        Word::from_letters(&vec![Letter::X; n]).expect("length checked by caller")
    }

    pub fn y_pow(n: usize) -> Word {
        Word::from_letters(&vec![Letter::Y; n]).expect("length checked by caller")
    }

    /// `z_k = x^(k-1) y`
    pub fn z(k: u32) -> Word {
        assert!(k >= 1, "z_k needs k >= 1");
        Word::x_pow(k as usize - 1).push(Letter::Y)
    }

    pub fn count_y(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn count_x(self) -> usize {
        self.len() - self.count_y()
    }

    /// Number of leading `y` letters.
    pub fn leading_y(self) -> usize {
        self.letters().take_while(|&l| l == Letter::Y).count()
    }

    pub fn is_h1(self) -> bool {
        self.is_empty() || self.last() == Some(Letter::Y)
    }

    pub fn is_h0(self) -> bool {
        self.is_empty() || (self.first() == Some(Letter::X) && self.last() == Some(Letter::Y))
    }

    pub fn classify(self) -> Class {
        if self.is_h0() {
            Class::H0
        } else if self.is_h1() {
            Class::H1Only
        } else {
            Class::HtOnly
        }
    }

    /// Reverse the word and swap `x <-> y`.
    pub fn tau(self) -> Word {
        let mut w = Word::EMPTY;
        for l in self.letters().collect::<Vec<_>>().into_iter().rev() {
            w = w.push(match l {
                Letter::X => Letter::Y,
                Letter::Y => Letter::X,
            });
        }
        w
    }

    /// All words of the given length, in canonical order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < 64);
        (0..(1u128 << len)).map(move |bits| Word {
            len: len as u8,
            bits,
        })
    }

    /// All words of length at most `max_len`.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(Word::all_of_len)
    }

    pub fn to_index(self) -> Result<Index, Error> {
        Index::from_word(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in self.letters() {
            f.write_str(match l {
                Letter::X => "x",
                Letter::Y => "y",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word, Error> {
        if s == "1" || s.is_empty() {
            return Ok(Word::EMPTY);
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                'y' => Ok(Letter::Y),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::from_letters(&letters)
    }
}

/// A finite sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Index(pub Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Index, Error> {
        if parts.contains(&0) {
            return Err(Error::ZeroPart);
        }
        Ok(Index(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.first().is_none_or(|&k| k >= 2)
    }

    pub fn to_word(&self) -> Word {
        self.0
            .iter()
            .fold(Word::EMPTY, |acc, &k| acc.concat(Word::z(k)))
    }

    pub fn from_word(w: Word) -> Result<Index, Error> {
        if !w.is_h1() {
            return Err(Error::NotH1(w.to_string()));
        }
        let mut parts = Vec::new();
        let mut run = 0u32;
        for l in w.letters() {
            run += 1;
            if l == Letter::Y {
                parts.push(run);
                run = 0;
            }
        }
        Ok(Index(parts))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Index {
    type Err = Error;
    fn from_str(s: &str) -> Result<Index, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Index::default());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidNumber(p.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Index::new(parts)
    }
}

pub fn word_of_index(k: &Index) -> Word {
    k.to_word()
}

pub fn index_of_word(w: Word) -> Result<Index, Error> {
    Index::from_word(w)
}

pub fn classify(w: Word) -> Class {
    w.classify()
}

/// Compositions of `k` into `n` positive parts in lexicographic order.
/// With `admissible`, the first part must be at least 2.
pub fn enumerate_indices(k: u32, n: usize, admissible: bool) -> Vec<Index> {
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Index::default());
        }
        return out;
    }
    if (k as usize) < n {
        return out;
    }
    let mut cur = Vec::with_capacity(n);
    fn rec(rest: u32, slots: usize, first_min: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
        if slots == 1 {
            if rest >= first_min {
                cur.push(rest);
                out.push(Index(cur.clone()));
                cur.pop();
            }
            return;
        }
        let max = rest - (slots as u32 - 1);
        for part in first_min..=max {
            cur.push(part);
            rec(rest - part, slots - 1, 1, cur, out);
            cur.pop();
        }
    }
    rec(k, n, if admissible { 2 } else { 1 }, &mut cur, &mut out);
    out
}

/// All indices of weight `k`, any depth, in depth-then-lexicographic order.
pub fn all_indices_of_weight(k: u32, admissible: bool) -> Vec<Index> {
    (1..=k as usize)
        .flat_map(|n| enumerate_indices(k, n, admissible))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::binom_int;
    use num_bigint::BigInt;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Brute force: all tuples in [1, k]^n summing to k, sorted.
    fn compositions_oracle(k: u32, n: usize, admissible: bool) -> Vec<Vec<u32>> {
        let mut all: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..n {
            all = all
                .into_iter()
                .flat_map(|v| {
                    (1..=k).map(move |p| {
                        let mut v = v.clone();
                        v.push(p);
                        v
                    })
                })
                .collect();
        }
        let mut out: Vec<Vec<u32>> = all
            .into_iter()
            .filter(|v| v.iter().sum::<u32>() == k && (!admissible || v[0] >= 2))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn index_word_examples() {
        assert_eq!(word_of_index(&Index(vec![2, 1])), w("xyy"));
        assert_eq!(word_of_index(&Index(vec![3])), w("xxy"));
        assert_eq!(word_of_index(&Index(vec![])), Word::EMPTY);
        assert_eq!(index_of_word(w("xyy")).unwrap(), Index(vec![2, 1]));
        assert_eq!(index_of_word(w("yyy")).unwrap(), Index(vec![1, 1, 1]));
        assert!(index_of_word(w("xyx")).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(w("xy")), Class::H0);
        assert_eq!(classify(w("yxy")), Class::H1Only);
        assert_eq!(classify(w("yx")), Class::HtOnly);
        assert_eq!(classify(Word::EMPTY), Class::H0);
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_indices(4, 2, true),
            vec![Index(vec![2, 2]), Index(vec![3, 1])]
        );
        assert!(enumerate_indices(3, 3, true).is_empty());
        assert_eq!(
            enumerate_indices(3, 2, false),
            vec![Index(vec![1, 2]), Index(vec![2, 1])]
        );
    }

    #[test]
    fn enumerate_matches_oracle_and_counts() {
        for k in 1..=10u32 {
            for n in 1..=k as usize {
                for adm in [false, true] {
                    let got: Vec<Vec<u32>> = enumerate_indices(k, n, adm)
                        .into_iter()
                        .map(|i| i.0)
                        .collect();
                    if k <= 8 {
                        assert_eq!(got, compositions_oracle(k, n, adm), "k={k} n={n}");
                    }
                    let expect = if adm {
                        binom_int(k as i64 - 2, n as i64 - 1)
                    } else {
                        binom_int(k as i64 - 1, n as i64 - 1)
                    };
                    if !adm || k as usize > n {
                        assert_eq!(BigInt::from(got.len()), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip_and_degrees() {
        for k in 1..=10u32 {
            for idx in all_indices_of_weight(k, false) {
                let word = idx.to_word();
                assert_eq!(index_of_word(word).unwrap(), idx);
                assert_eq!(word.len() as u32, idx.weight());
                assert_eq!(word.count_y(), idx.depth());
            }
        }
    }

    #[test]
    fn ordering_is_length_then_lex() {
        let mut ws = [w("yy"), w("x"), w("xy"), w("y"), Word::EMPTY, w("xxx"), w("yx")];
        ws.sort();
        let shown: Vec<String> = ws.iter().map(Word::to_string).collect();
        assert_eq!(shown, ["1", "x", "y", "xy", "yx", "yy", "xxx"]);
    }

    #[test]
    fn slicing_and_concat() {
        let a = w("xyyxy");
        assert_eq!(a.slice(1, 4), w("yyx"));
        assert_eq!(a.slice(0, 0), Word::EMPTY);
        assert_eq!(a.slice(0, 2).concat(a.slice(2, 5)), a);
        assert_eq!(a.split_first(), Some((Letter::X, w("yyxy"))));
        assert_eq!(a.split_last(), Some((w("xyyx"), Letter::Y)));
        assert_eq!(a.leading_y(), 0);
        assert_eq!(w("yyx").leading_y(), 2);
        let long = Word::x_pow(100).concat(Word::y_pow(28));
        assert_eq!(long.len(), 128);
        assert_eq!(long.count_y(), 28);
        assert_eq!(long.slice(99, 101), w("xy"));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(w("xy").tau(), w("xy"));
        assert_eq!(w("xxy").tau(), w("xyy"));
        assert_eq!(Word::EMPTY.tau(), Word::EMPTY);
    }
}
