//! Linear maps on words: `σ_p`, `S_p`, `S̃_p`, `τ`, the derivations `∂_n`, `σ_m` and `Δ_v`.

use num_traits::One;

use crate::algebra::Element;
use crate::error::Error;
use crate::exactnum::{int, Rational, TPoly};
use crate::words::{Index, Letter, Word};

fn neg(p: &TPoly) -> TPoly {
    -p
}

/// `σ_p` on a single word: every `y` becomes `p x + y`.
pub fn sigma_word(w: Word, p: &TPoly) -> Element {
    if p.is_zero() {
        return Element::word(w);
    }
    let mut acc: Vec<(Word, TPoly)> = vec![(Word::EMPTY, TPoly::one())];
    for l in w.letters() {
        let mut next = Vec::with_capacity(acc.len() * 2);
        for (u, c) in acc {
            match l {
                Letter::X => next.push((u.push(Letter::X), c)),
                Letter::Y => {
                    next.push((u.push(Letter::X), &c * p));
                    next.push((u.push(Letter::Y), c));
                }
            }
        }
        acc = next;
    }
    let mut out = Element::zero();
    for (u, c) in acc {
        out.add_term(u, &c);
    }
    out
}

/// The automorphism `σ_p`: `x -> x`, `y -> p x + y`.
pub fn sigma_auto(a: &Element, p: &TPoly) -> Element {
    a.map_words(|w| sigma_word(w, p))
}

/// `S_p(w a) = σ_p(w) a`, `S_p(1) = 1`.
pub fn s_map(a: &Element, p: &TPoly) -> Element {
    if p.is_zero() {
        return a.clone();
    }
    a.map_words(|w| match w.split_last() {
        None => Element::one(),
        Some((head, last)) => sigma_word(head, p).concat(&Element::word(Word::from_letter(last))),
    })
}

/// `S̃_p(w a) = w σ_p(a)`, `S̃_p(1) = 1`.
pub fn s_tilde(a: &Element, p: &TPoly) -> Element {
    a.map_words(|w| match w.split_last() {
        None => Element::one(),
        Some((head, last)) => {
            Element::word(head).concat(&sigma_word(Word::from_letter(last), p))
        }
    })
}

/// Antiautomorphism swapping `x` and `y`.
pub fn tau_dual(a: &Element) -> Element {
    a.map_words(|w| Element::word(w.tau()))
}

/// `x (x + y)^(n-1) y`
fn del_generator(n: u32) -> Element {
    let x_plus_y = &Element::word(Word::X) + &Element::word(Word::Y);
    let mut acc = Element::word(Word::X);
    for _ in 1..n {
        acc = acc.concat(&x_plus_y);
    }
    acc.concat(&Element::word(Word::Y))
}

/// The derivation with `∂_n(x) = x(x+y)^(n-1) y = -∂_n(y)`.
pub fn del_n(a: &Element, n: u32) -> Element {
    assert!(n >= 1, "derivation index must be positive");
    let gen = del_generator(n);
    let neg_gen = -&gen;
    a.map_words(|w| {
        let mut out = Element::zero();
        for i in 0..w.len() {
            let image = match w.letter(i) {
                Letter::X => &gen,
                Letter::Y => &neg_gen,
            };
            let left = Element::word(w.slice(0, i));
            let right = Element::word(w.slice(i + 1, w.len()));
            out += &left.concat(image).concat(&right);
        }
        out
    })
}

/// `∂_n^t = S_{-t} ∂_n S_t`.
pub fn del_n_t(a: &Element, n: u32) -> Element {
    del_n_p(a, n, &TPoly::t())
}

/// `S_{-p} ∂_n S_p`.
pub fn del_n_p(a: &Element, n: u32, p: &TPoly) -> Element {
    s_map(&del_n(&s_map(a, p), n), &neg(p))
}

/// Weak compositions of `m` into `slots` parts.
pub fn weak_compositions(m: u32, slots: usize) -> Vec<Vec<u32>> {
    if slots == 0 {
        return if m == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(slots);
    fn rec(rest: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=rest {
            cur.push(e);
            rec(rest - e, slots - 1, cur, out);
            cur.pop();
        }
    }
    rec(m, slots, &mut cur, &mut out);
    out
}

fn sigma_m_plain(a: &Element, m: u32) -> Result<Element, Error> {
    a.check_h1()?;
    Ok(a.map_words(|w| {
        let k = Index::from_word(w).expect("h1 checked");
        if k.depth() == 0 {
            return Element::one();
        }
        let mut out = Element::zero();
        for eps in weak_compositions(m, k.depth()) {
            let parts: Vec<u32> = k.parts().iter().zip(&eps).map(|(a, b)| a + b).collect();
            out.add_term(Index(parts).to_word(), &TPoly::one());
        }
        out
    }))
}

/// `σ_m`, or `σ̄_m = τ σ_m τ` when `barred`; with `Some(p)` conjugated as `S_{-p} ∘ · ∘ S_p`.
pub fn sigma_m_op(a: &Element, m: u32, barred: bool, p: Option<&TPoly>) -> Result<Element, Error> {
    let inner = match p {
        Some(p) => s_map(a, p),
        None => a.clone(),
    };
    let mapped = if barred {
        tau_dual(&sigma_m_plain(&tau_dual(&inner), m).map_err(|_| {
            Error::Param("barred sigma needs words starting with x".into())
        })?)
    } else {
        sigma_m_plain(&inner, m)?
    };
    Ok(match p {
        Some(p) => s_map(&mapped, &neg(p)),
        None => mapped,
    })
}

/// Graded components `0..=order` of `Δ_v(a) = exp(Σ_n ∂_n v^n / n)(a)`, or its
/// conjugate `S_{-p} Δ_v S_p` when `p` is given.
pub fn delta_v_trunc(a: &Element, order: usize, p: Option<&TPoly>) -> Vec<Element> {
    let start = match p {
        Some(p) => s_map(a, p),
        None => a.clone(),
    };
    let mut total = vec![Element::zero(); order + 1];
    let mut term = vec![Element::zero(); order + 1];
    term[0] = start;
    total[0] = term[0].clone();
    for r in 1..=order {
        // term <- P(term) / r, with P = Σ_n ∂_n v^n / n
        let mut next = vec![Element::zero(); order + 1];
        for (d, slot) in next.iter_mut().enumerate().skip(1) {
            for n in 1..=d {
                let src = &term[d - n];
                if src.is_zero() {
                    continue;
                }
                let scale = Rational::one() / int(n as i64 * r as i64);
                *slot += &del_n(src, n as u32).scale_rat(&scale);
            }
        }
        term = next;
        for d in 0..=order {
            total[d] += &term[d];
        }
    }
    match p {
        Some(p) => total.iter().map(|e| s_map(e, &neg(p))).collect(),
        None => total,
    }
}
