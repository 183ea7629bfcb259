//! Property tests for the operator algebra: recurrence oracles for the
//! normal product, pair-count combinatorics, canonical-form invariants and
//! adjoint structure.

use csmx_core::algebra::{
    canonicalize, coeff, fermi_parity, mul, normal_inverse_expand, normal_order_expand,
    ContractionSymbol, Expression, FieldSymbol, Flavor, LabelRegistry, Mass, Ordering, Term,
};
use csmx_core::smatrix::adjoint;
use proptest::prelude::*;

fn m1() -> Mass {
    Mass::from_integer(1)
}

fn symbol(code: u8, comp: u8, reg: &mut LabelRegistry) -> FieldSymbol {
    let l = reg.fresh();
    match code % 4 {
        0 => FieldSymbol::scalar(m1(), l),
        1 => FieldSymbol::em(comp % 4, l).unwrap(),
        2 => FieldSymbol::spinor(m1(), comp % 4 + 1, l).unwrap(),
        _ => FieldSymbol::spinor_bar(m1(), comp % 4 + 1, l).unwrap(),
    }
}

/// The normal product written recursively by extracting the first factor:
/// the plain first factor times the shorter normal word, minus its pair
/// scalars against each later factor with the extraction sign.
fn normal_by_front_recurrence(word: &[FieldSymbol]) -> Expression {
    let n = word.len();
    if n <= 1 {
        return Expression::word(word.to_vec());
    }
    let parities: Vec<bool> = word.iter().map(|s| s.parity()).collect();
    let tail = normal_by_front_recurrence(&word[1..]);
    // Prepend the first factor to every plain word of the tail expansion.
    let mut out = Expression::zero();
    for (k, c) in tail.iter() {
        let mut w = vec![word[0]];
        w.extend(k.word.iter().copied());
        out.add_term(Term::new(c.clone(), k.contractions.clone(), w, Ordering::Plain));
    }
    for l in 1..n {
        if let Ok(sym) = ContractionSymbol::new(Flavor::Vac, word[0], word[l]) {
            // Extraction permutation: first and l-th to the front.
            let mut images = vec![0, l];
            images.extend((1..n).filter(|&i| i != l));
            let sign = fermi_parity(&images, &parities).unwrap();
            let mut rest: Vec<FieldSymbol> = Vec::new();
            for (i, s) in word.iter().enumerate() {
                if i != 0 && i != l {
                    rest.push(*s);
                }
            }
            let inner = normal_by_front_recurrence(&rest);
            let factor = if sign { -coeff::one() } else { coeff::one() };
            for (k, c) in inner.iter() {
                let mut cs = vec![sym];
                cs.extend(k.contractions.iter().copied());
                out.add_term(Term::new(
                    factor.clone() * c.clone() * (-coeff::one()),
                    cs,
                    k.word.clone(),
                    k.ordering,
                ));
            }
        }
    }
    out
}

/// The mirror recurrence extracting the last factor.
fn normal_by_back_recurrence(word: &[FieldSymbol]) -> Expression {
    let n = word.len();
    if n <= 1 {
        return Expression::word(word.to_vec());
    }
    let parities: Vec<bool> = word.iter().map(|s| s.parity()).collect();
    let head = normal_by_back_recurrence(&word[..n - 1]);
    let mut out = Expression::zero();
    for (k, c) in head.iter() {
        let mut w = k.word.clone();
        w.push(word[n - 1]);
        out.add_term(Term::new(c.clone(), k.contractions.clone(), w, Ordering::Plain));
    }
    for k_idx in 0..n - 1 {
        if let Ok(sym) = ContractionSymbol::new(Flavor::Vac, word[k_idx], word[n - 1]) {
            let mut images = vec![k_idx, n - 1];
            images.extend((0..n - 1).filter(|&i| i != k_idx));
            let sign = fermi_parity(&images, &parities).unwrap();
            let rest: Vec<FieldSymbol> = (0..n - 1).filter(|&i| i != k_idx).map(|i| word[i]).collect();
            let inner = normal_by_back_recurrence(&rest);
            let factor = if sign { -coeff::one() } else { coeff::one() };
            for (k, c) in inner.iter() {
                let mut cs = vec![sym];
                cs.extend(k.contractions.iter().copied());
                out.add_term(Term::new(
                    factor.clone() * c.clone() * (-coeff::one()),
                    cs,
                    k.word.clone(),
                    k.ordering,
                ));
            }
        }
    }
    out
}

fn words_up_to(max_len: usize) -> Vec<Vec<FieldSymbol>> {
    // A deterministic mixed sample: every species pattern for short words,
    // cycled patterns at the longest length.
    let mut out = Vec::new();
    for len in 0..=max_len {
        if len <= 3 {
            let mut pattern = vec![0u8; len];
            loop {
                let mut reg = LabelRegistry::new();
                out.push(
                    pattern
                        .iter()
                        .enumerate()
                        .map(|(i, &s)| symbol(s, i as u8, &mut reg))
                        .collect(),
                );
                let mut i = 0;
                while i < len {
                    pattern[i] += 1;
                    if pattern[i] < 4 {
                        break;
                    }
                    pattern[i] = 0;
                    i += 1;
                }
                if i == len {
                    break;
                }
            }
        } else {
            for start in 0..4u8 {
                let mut reg = LabelRegistry::new();
                out.push(
                    (0..len).map(|i| symbol(start + i as u8, (i % 4) as u8, &mut reg)).collect(),
                );
            }
        }
    }
    out
}

#[test]
fn front_recurrence_matches_the_inverse_expansion() {
    for word in words_up_to(5) {
        let rec = canonicalize(&normal_by_front_recurrence(&word)).unwrap();
        let inv = canonicalize(&normal_inverse_expand(&word).unwrap()).unwrap();
        assert_eq!(rec, inv, "word {word:?}");
    }
}

#[test]
fn back_recurrence_matches_the_inverse_expansion() {
    for word in words_up_to(5) {
        let rec = canonicalize(&normal_by_back_recurrence(&word)).unwrap();
        let inv = canonicalize(&normal_inverse_expand(&word).unwrap()).unwrap();
        assert_eq!(rec, inv, "word {word:?}");
    }
}

#[test]
fn pair_count_combinatorics() {
    // A word of n mutually contractible factors expands into
    // sum_k n! / (2^k k! (n - 2k)!) terms.
    fn expected(n: u64) -> u64 {
        let fact = |x: u64| (1..=x).product::<u64>().max(1);
        (0..=n / 2).map(|k| fact(n) / (2u64.pow(k as u32) * fact(k) * fact(n - 2 * k))).sum()
    }
    for n in 0..=7usize {
        let mut reg = LabelRegistry::new();
        let word: Vec<FieldSymbol> = (0..n).map(|_| FieldSymbol::scalar(m1(), reg.fresh())).collect();
        let e = normal_order_expand(&word).unwrap();
        assert_eq!(e.len() as u64, expected(n as u64), "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent(codes in prop::collection::vec((0u8..4, 0u8..4), 0..6)) {
        let mut reg = LabelRegistry::new();
        let word: Vec<FieldSymbol> = codes.iter().map(|&(s, c)| symbol(s, c, &mut reg)).collect();
        let e = canonicalize(&Expression::word(word)).unwrap();
        prop_assert_eq!(canonicalize(&e).unwrap(), e);
    }

    #[test]
    fn products_associate(
        a in prop::collection::vec((0u8..4, 0u8..4), 1..4),
        b in prop::collection::vec((0u8..4, 0u8..4), 1..4),
        c in prop::collection::vec((0u8..4, 0u8..4), 1..3),
    ) {
        let mut reg = LabelRegistry::new();
        let wa: Vec<FieldSymbol> = a.iter().map(|&(s, k)| symbol(s, k, &mut reg)).collect();
        let wb: Vec<FieldSymbol> = b.iter().map(|&(s, k)| symbol(s, k, &mut reg)).collect();
        let wc: Vec<FieldSymbol> = c.iter().map(|&(s, k)| symbol(s, k, &mut reg)).collect();
        let (ea, eb, ec) = (Expression::word(wa), Expression::word(wb), Expression::word(wc));
        let left = mul(&mul(&ea, &eb).unwrap(), &ec).unwrap();
        let right = mul(&ea, &mul(&eb, &ec).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn adjoint_is_an_involutive_antihomomorphism(
        a in prop::collection::vec((0u8..4, 0u8..4), 1..5),
        b in prop::collection::vec((0u8..4, 0u8..4), 1..4),
    ) {
        let mut reg = LabelRegistry::new();
        let wa: Vec<FieldSymbol> = a.iter().map(|&(s, k)| symbol(s, k, &mut reg)).collect();
        let wb: Vec<FieldSymbol> = b.iter().map(|&(s, k)| symbol(s, k, &mut reg)).collect();
        let ea = canonicalize(&Expression::word(wa)).unwrap();
        let eb = canonicalize(&Expression::word(wb)).unwrap();
        prop_assert_eq!(adjoint(&adjoint(&ea).unwrap()).unwrap(), ea.clone());
        let lhs = adjoint(&mul(&ea, &eb).unwrap()).unwrap();
        let rhs = mul(&adjoint(&eb).unwrap(), &adjoint(&ea).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vacuum_of_normal_words_vanishes(codes in prop::collection::vec((0u8..4, 0u8..4), 1..6)) {
        let mut reg = LabelRegistry::new();
        let word: Vec<FieldSymbol> = codes.iter().map(|&(s, c)| symbol(s, c, &mut reg)).collect();
        let v = csmx_core::algebra::vacuum_expectation(&Expression::normal_word(word)).unwrap();
        prop_assert!(v.is_zero());
    }
}
