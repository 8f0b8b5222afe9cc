//! Shuffle and stuffle regularization via the decomposition `w = Σ_i w_i ⊙ y^{⊙i}`.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use num_traits::One;

use crate::algebra::{Element, Product};
use crate::error::Error;
use crate::exactnum::{Rational, TPoly};
use crate::maps::s_map;
use crate::words::Word;

/// Components `w_0, w_1, ...` with `w = Σ_i w_i ⊙ y^{⊙i}`; every component lies in h0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YDecomposition {
    pub product: Product,
    pub p: TPoly,
    pub components: Vec<Element>,
}

impl YDecomposition {
    pub fn component(&self, i: usize) -> Element {
        self.components.get(i).cloned().unwrap_or_default()
    }

    /// `Σ_i w_i ⊙ y^{⊙i}` under the decomposition's product.
    pub fn reconstruct(&self) -> Element {
        let y = Element::word(Word::Y);
        let mut y_pow = Element::one();
        let mut out = Element::zero();
        for comp in &self.components {
            out += &comp
                .product(&y_pow, self.product, &self.p)
                .expect("components are h0");
            y_pow = y_pow
                .product(&y, self.product, &self.p)
                .expect("y lies in h1");
        }
        out
    }
}

type Memo = LazyLock<RwLock<HashMap<(Word, bool), Arc<Vec<Element>>>>>;
static DECOMP_MEMO: Memo = LazyLock::new(|| RwLock::new(HashMap::new()));

pub fn clear_caches() {
    DECOMP_MEMO.write().expect("memo lock").clear();
}

fn add_into(comps: &mut Vec<Element>, i: usize, e: &Element, c: &TPoly) {
    if comps.len() <= i {
        comps.resize(i + 1, Element::zero());
    }
    comps[i].add_scaled(e, c);
}

/// Classical decomposition of one h1 word; `stuffle` selects `∗` over `⧢`.
fn decompose_word(w: Word, stuffle: bool) -> Arc<Vec<Element>> {
    let j = w.leading_y();
    if j == 0 {
        return Arc::new(vec![Element::word(w)]);
    }
    if let Some(hit) = DECOMP_MEMO.read().expect("memo lock").get(&(w, stuffle)) {
        return Arc::clone(hit);
    }
    let product = if stuffle {
        Product::Stuffle
    } else {
        Product::Shuffle
    };
    let zero = TPoly::zero();
    let v = Element::word(w.slice(j, w.len()));
    let y_pow = Element::word(Word::Y)
        .power(j as u32, product, &zero)
        .expect("y lies in h1");
    let expanded = y_pow.product(&v, product, &zero).expect("h1 operands");
    let lead = expanded.coeff(w);
    let lead = lead
        .as_constant()
        .expect("leading coefficient is a nonzero integer");
    let inv = TPoly::constant(Rational::one() / lead.clone());
    let mut rest = expanded;
    rest.add_term(w, &TPoly::constant(-lead));
    let mut comps = Vec::new();
    add_into(&mut comps, j, &v, &inv);
    let neg_inv = -&inv;
    for (u, c) in rest.terms() {
        let sub = decompose_word(u, stuffle);
        let scale = c * &neg_inv;
        for (i, e) in sub.iter().enumerate() {
            add_into(&mut comps, i, e, &scale);
        }
    }
    while comps.last().is_some_and(Element::is_zero) {
        comps.pop();
    }
    let comps = Arc::new(comps);
    DECOMP_MEMO
        .write()
        .expect("memo lock")
        .insert((w, stuffle), Arc::clone(&comps));
    comps
}

fn decompose_classical(a: &Element, stuffle: bool) -> Vec<Element> {
    let mut comps = Vec::new();
    for (w, c) in a.terms() {
        for (i, e) in decompose_word(w, stuffle).iter().enumerate() {
            add_into(&mut comps, i, e, c);
        }
    }
    while comps.last().is_some_and(Element::is_zero) {
        comps.pop();
    }
    comps
}

/// Decomposes an h1 element under `Shuffle`, `Stuffle`, `TShuffle` or `TStuffle`.
/// The t-products use parameter `p` and are computed as `S_{-p} ∘ classical ∘ S_p`.
pub fn decompose(a: &Element, product: Product, p: &TPoly) -> Result<YDecomposition, Error> {
    a.check_h1()?;
    let (stuffle, conj) = match product {
        Product::Shuffle => (false, None),
        Product::Stuffle => (true, None),
        Product::TShuffle => (false, Some(p)),
        Product::TStuffle => (true, Some(p)),
        Product::Concat => {
            return Err(Error::Param(
                "regularization needs a shuffle or stuffle product".into(),
            ))
        }
    };
    let components = match conj {
        None => decompose_classical(a, stuffle),
        Some(p) => {
            let minus_p = -p;
            decompose_classical(&s_map(a, p), stuffle)
                .iter()
                .map(|e| s_map(e, &minus_p))
                .collect()
        }
    };
    Ok(YDecomposition {
        product,
        p: conj.cloned().unwrap_or_default(),
        components,
    })
}

/// The constant term `w_0` of the decomposition.
pub fn reg(a: &Element, product: Product, p: &TPoly) -> Result<Element, Error> {
    Ok(decompose(a, product, p)?.component(0))
}

/// Sum of all h1 words with `k` letters `x` and `n` letters `y`.
pub fn letter_count_sum(k: usize, n: usize) -> Element {
    let mut out = Element::zero();
    if n == 0 {
        return out;
    }
    for w in Word::all_of_len(k + n) {
        if w.count_x() == k && w.is_h1() {
            out.add_term(w, &TPoly::one());
        }
    }
    out
}

/// Regularization of [`letter_count_sum`].
pub fn reg_sum_word(k: usize, n: usize, product: Product, p: &TPoly) -> Result<Element, Error> {
    reg(&letter_count_sum(k, n), product, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::maps::s_map;
    use crate::words::Letter;
    use proptest::prelude::*;

    fn t() -> TPoly {
        TPoly::t()
    }

    const ALL: [Product; 4] = [
        Product::Shuffle,
        Product::Stuffle,
        Product::TShuffle,
        Product::TStuffle,
    ];

    #[test]
    fn decompose_examples() {
        let z2 = Element::z(&[2]);
        let d = decompose(&z2, Product::Shuffle, &t()).unwrap();
        assert_eq!(d.components, vec![z2.clone()]);
        let d = decompose(&Element::z(&[1]), Product::Shuffle, &t()).unwrap();
        assert_eq!(d.components, vec![Element::zero(), Element::one()]);
        let d = decompose(&Element::z(&[1, 2]), Product::Shuffle, &t()).unwrap();
        assert_eq!(
            d.components,
            vec![Element::z(&[2, 1]).scale(&TPoly::from_int(-2)), z2]
        );
        assert!(decompose(&Element::parse_word("yx").unwrap(), Product::Shuffle, &t()).is_err());
    }

    #[test]
    fn reg_examples() {
        let yz2 = Element::z(&[1, 2]);
        assert_eq!(
            reg(&yz2, Product::Shuffle, &t()).unwrap(),
            Element::z(&[2, 1]).scale(&TPoly::from_int(-2))
        );
        assert_eq!(
            reg(&yz2, Product::Stuffle, &t()).unwrap(),
            -(&Element::z(&[2, 1]) + &Element::z(&[3]))
        );
        let h0 = Element::z(&[3, 1, 2]);
        assert_eq!(reg(&h0, Product::Shuffle, &t()).unwrap(), h0);
    }

    #[test]
    fn reg_sum_word_examples() {
        let z = TPoly::zero();
        assert_eq!(
            reg_sum_word(1, 1, Product::Shuffle, &z).unwrap(),
            Element::parse_word("xy").unwrap()
        );
        assert_eq!(
            reg_sum_word(1, 2, Product::Shuffle, &z).unwrap(),
            -Element::parse_word("xyy").unwrap()
        );
        assert_eq!(letter_count_sum(2, 1), Element::parse_word("xxy").unwrap());
        assert_eq!(
            reg_sum_word(2, 1, Product::Shuffle, &z).unwrap(),
            Element::parse_word("xxy").unwrap()
        );
    }

    #[test]
    fn reconstruction_all_flavors() {
        for w in Word::all_up_to(6).filter(|w| w.is_h1()) {
            let a = Element::word(w);
            for product in ALL {
                let d = decompose(&a, product, &t()).unwrap();
                assert!(d.components.iter().all(Element::is_h0), "{w} {product:?}");
                assert_eq!(d.reconstruct(), a, "{w} {product:?}");
            }
        }
    }

    #[test]
    fn classical_closed_form() {
        for k in 1..=6usize {
            for n in 1..=(8 - k) {
                let expect = Element::word(Word::x_pow(k).concat(Word::y_pow(n)))
                    .scale_rat(&int(if n % 2 == 1 { 1 } else { -1 }));
                assert_eq!(
                    reg_sum_word(k, n, Product::Shuffle, &TPoly::zero()).unwrap(),
                    expect,
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn conjugation_matches_direct_t_reconstruction() {
        // reg_tsh(w) is the constant term of a decomposition that reconstructs under tsh
        let minus_t = TPoly::from_ints(&[0, -1]);
        for w in Word::all_up_to(5).filter(|w| w.is_h1()) {
            let a = Element::word(w);
            let lhs = reg(&a, Product::TShuffle, &t()).unwrap();
            let rhs = s_map(&reg(&s_map(&a, &t()), Product::Shuffle, &t()).unwrap(), &minus_t);
            assert_eq!(lhs, rhs);
        }
    }

    fn arb_h1(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(any::<bool>(), 0..max).prop_map(|bits| {
            let letters: Vec<Letter> = bits
                .into_iter()
                .map(|b| if b { Letter::Y } else { Letter::X })
                .collect();
            Word::from_letters(&letters).unwrap().push(Letter::Y)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn reg_is_homomorphism(u in arb_h1(3), v in arb_h1(3), which in 0usize..4) {
            let product = ALL[which];
            let p = t();
            let (a, b) = (Element::word(u), Element::word(v));
            let lhs = reg(&a.product(&b, product, &p).unwrap(), product, &p).unwrap();
            let rhs = reg(&a, product, &p)
                .unwrap()
                .product(&reg(&b, product, &p).unwrap(), product, &p)
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
