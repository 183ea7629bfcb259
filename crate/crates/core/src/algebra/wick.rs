//! Fermi sign bookkeeping, pair expansions (normal ordering and its inverse),
//! canonical forms and operator products.
//!
//! Expansions run over sets of disjoint ordered position pairs. For a pair
//! set the sign is the Fermi parity of the permutation that pulls the paired
//! positions to the front, pair by pair; contractible pairs have even total
//! parity, so the extraction order does not matter.

use super::coeff::{self, Coeff};
use super::expr::{ContractionSymbol, Expression, Flavor, Ordering, Term};
use super::fields::{two_point_class, FieldSymbol, TwoPointClass};
use crate::error::{Error, Result};

/// Parity of the Fermi-operator permutation `0..n -> perm`, counting a sign
/// flip for every crossing of two odd-parity factors: position `k` of the
/// output holds the factor originally at `perm[k]`.
pub fn fermi_parity(perm: &[usize], parities: &[bool]) -> Result<bool> {
    let n = perm.len();
    if parities.len() != n {
        return Err(Error::NotAPermutation { n });
    }
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n || seen[j] {
            return Err(Error::NotAPermutation { n });
        }
        seen[j] = true;
    }
    let mut sigma = false;
    for k in 0..n {
        let jk = perm[k];
        if !parities[jk] {
            continue;
        }
        for i in 0..jk {
            // Skip factors already moved out: those among the first k+1 images.
            if perm[..=k].contains(&i) {
                continue;
            }
            sigma ^= parities[i];
        }
    }
    Ok(sigma)
}

/// Enumerates all sets of disjoint position pairs `(k, l)`, `k < l`, with
/// every pair accepted by `admissible`. The empty set is included.
pub(crate) fn for_each_matching(
    n: usize,
    admissible: &dyn Fn(usize, usize) -> bool,
    f: &mut dyn FnMut(&[(usize, usize)]),
) {
    let mut used = vec![false; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        used: &mut Vec<bool>,
        stack: &mut Vec<(usize, usize)>,
        admissible: &dyn Fn(usize, usize) -> bool,
        f: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        let mut k = start;
        while k < n && used[k] {
            k += 1;
        }
        if k >= n {
            f(stack);
            return;
        }
        used[k] = true;
        // k stays uncontracted.
        rec(k + 1, n, used, stack, admissible, f);
        // k pairs with a later free position.
        for l in k + 1..n {
            if used[l] || !admissible(k, l) {
                continue;
            }
            used[l] = true;
            stack.push((k, l));
            rec(k + 1, n, used, stack, admissible, f);
            stack.pop();
            used[l] = false;
        }
        used[k] = false;
    }
    rec(0, n, &mut used, &mut stack, admissible, f);
}

/// Sign of extracting the pairs of `pairs` to the front of the word,
/// remaining factors kept in position order.
pub(crate) fn pair_set_sign(parities: &[bool], pairs: &[(usize, usize)]) -> bool {
    let n = parities.len();
    let mut images = Vec::with_capacity(n);
    for &(k, l) in pairs {
        images.push(k);
        images.push(l);
    }
    let mut in_pair = vec![false; n];
    for &(k, l) in pairs {
        in_pair[k] = true;
        in_pair[l] = true;
    }
    images.extend((0..n).filter(|&i| !in_pair[i]));
    fermi_parity(&images, parities).expect("valid permutation by construction")
}

/// Expansion over pair sets with a chosen contraction flavor and residual
/// ordering; `alternating` flips the sign with the pair count.
pub(crate) fn pair_expansion(
    word: &[FieldSymbol],
    flavor: Flavor,
    residual: Ordering,
    alternating: bool,
) -> Result<Expression> {
    let n = word.len();
    let parities: Vec<bool> = word.iter().map(|s| s.parity()).collect();
    // Precompute admissible pairs; a contractible pair at coincident labels is
    // the undefined equal-argument product and is refused outright.
    let mut table = vec![vec![None; n]; n];
    for k in 0..n {
        for l in k + 1..n {
            if let TwoPointClass::Nonzero(_) = two_point_class(&word[k], &word[l]) {
                let sym = ContractionSymbol::new(flavor, word[k], word[l])?;
                table[k][l] = Some(sym);
            }
        }
    }
    let mut out = Expression::zero();
    for_each_matching(n, &|k, l| table[k][l].is_some(), &mut |pairs| {
        let mut sign = pair_set_sign(&parities, pairs);
        if alternating && pairs.len() % 2 == 1 {
            sign = !sign;
        }
        let contractions: Vec<ContractionSymbol> =
            pairs.iter().map(|&(k, l)| table[k][l].unwrap()).collect();
        let mut in_pair = vec![false; n];
        for &(k, l) in pairs {
            in_pair[k] = true;
            in_pair[l] = true;
        }
        let rest: Vec<FieldSymbol> = (0..n).filter(|&i| !in_pair[i]).map(|i| word[i]).collect();
        let c = if sign { -coeff::one() } else { coeff::one() };
        out.add_term(Term::new(c, contractions, rest, residual));
    });
    Ok(out)
}

/// Wick expansion of a plain word into normal products with plain vacuum
/// contractions. Lengths 0 and 1 return the word unchanged.
pub fn normal_order_expand(word: &[FieldSymbol]) -> Result<Expression> {
    pair_expansion(word, Flavor::Vac, Ordering::Normal, false)
}

/// Inverse expansion: a normal word as a signed sum of plain words, the sign
/// alternating with the number of extracted pairs.
pub fn normal_inverse_expand(word: &[FieldSymbol]) -> Result<Expression> {
    pair_expansion(word, Flavor::Vac, Ordering::Plain, true)
}

/// Reorders a normal word by `perm`, returning the permuted word and the
/// Fermi sign (true = negative).
pub fn normal_permute(word: &[FieldSymbol], perm: &[usize]) -> Result<(bool, Vec<FieldSymbol>)> {
    let parities: Vec<bool> = word.iter().map(|s| s.parity()).collect();
    let sign = fermi_parity(perm, &parities)?;
    let new_word = perm.iter().map(|&j| word[j]).collect();
    Ok((sign, new_word))
}

/// Sorts a normal word into registry order. Returns `None` when the word
/// contains two identical odd factors (the term is zero), otherwise the sign
/// and the sorted word.
fn sort_normal_word(word: &[FieldSymbol]) -> Option<(bool, Vec<FieldSymbol>)> {
    let n = word.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| (word[i].label, word[i].kind, word[i].component));
    let parities: Vec<bool> = word.iter().map(|s| s.parity()).collect();
    let sign = fermi_parity(&idx, &parities).expect("sort permutation is valid");
    let sorted: Vec<FieldSymbol> = idx.iter().map(|&i| word[i]).collect();
    for w in sorted.windows(2) {
        if w[0] == w[1] && w[0].parity() {
            return None;
        }
    }
    Some((sign, sorted))
}

/// Canonical form: every word normal-ordered (plain words Wick-expanded),
/// sorted by label registry order with the permutation sign absorbed, like
/// terms merged and zero terms dropped. Idempotent.
pub fn canonicalize(e: &Expression) -> Result<Expression> {
    let mut out = Expression::zero();
    for (key, c) in e.iter() {
        match key.ordering {
            Ordering::Normal => {
                add_sorted(&mut out, c.clone(), &key.contractions, &key.word);
            }
            Ordering::Plain => {
                let expanded = normal_order_expand(&key.word)?;
                for (k2, c2) in expanded.iter() {
                    let mut contractions = key.contractions.clone();
                    contractions.extend(k2.contractions.iter().copied());
                    add_sorted(&mut out, c.clone() * c2.clone(), &contractions, &k2.word);
                }
            }
        }
    }
    Ok(out)
}

fn add_sorted(out: &mut Expression, c: Coeff, contractions: &[ContractionSymbol], word: &[FieldSymbol]) {
    if let Some((sign, sorted)) = sort_normal_word(word) {
        let coeff = if sign { -c } else { c };
        out.add_term(Term::new(coeff, contractions.to_vec(), sorted, Ordering::Normal));
    }
}

/// Vacuum functional: keeps only the purely scalar part of the canonical
/// form (`<I>0 = 1`, every nonempty normal word averages to zero).
pub fn vacuum_expectation(e: &Expression) -> Result<Expression> {
    let canon = canonicalize(e)?;
    let mut out = Expression::zero();
    for (k, c) in canon.iter() {
        if k.word.is_empty() {
            out.add_term(Term { coeff: c.clone(), key: k.clone() });
        }
    }
    Ok(out)
}

/// Operator product. Both factors are brought to canonical form and term
/// pairs are combined with contractions running only across the boundary;
/// equivalent to concatenating the underlying plain words (the internal pair
/// sums cancel pairwise) and checked against that route in tests.
pub fn mul(a: &Expression, b: &Expression) -> Result<Expression> {
    let ca = canonicalize(a)?;
    let cb = canonicalize(b)?;
    let mut out = Expression::zero();
    for (ka, va) in ca.iter() {
        for (kb, vb) in cb.iter() {
            let coeff = va.clone() * vb.clone();
            let cut = ka.word.len();
            let mut word = ka.word.clone();
            word.extend(kb.word.iter().copied());
            let n = word.len();
            let parities: Vec<bool> = word.iter().map(|s| s.parity()).collect();
            let mut table = vec![vec![None; n]; n];
            let mut bad: Option<Error> = None;
            for k in 0..cut {
                for l in cut..n {
                    if let TwoPointClass::Nonzero(_) = two_point_class(&word[k], &word[l]) {
                        match ContractionSymbol::new(Flavor::Vac, word[k], word[l]) {
                            Ok(sym) => table[k][l] = Some(sym),
                            Err(e) => bad = Some(e),
                        }
                    }
                }
            }
            if let Some(e) = bad {
                return Err(e);
            }
            for_each_matching(n, &|k, l| table[k][l].is_some(), &mut |pairs| {
                let sign = pair_set_sign(&parities, pairs);
                let mut contractions = ka.contractions.clone();
                contractions.extend(kb.contractions.iter().copied());
                contractions.extend(pairs.iter().map(|&(k, l)| table[k][l].unwrap()));
                let mut in_pair = vec![false; n];
                for &(k, l) in pairs {
                    in_pair[k] = true;
                    in_pair[l] = true;
                }
                let rest: Vec<FieldSymbol> = (0..n).filter(|&i| !in_pair[i]).map(|i| word[i]).collect();
                let c = if sign { -coeff.clone() } else { coeff.clone() };
                out.add_term(Term::new(c, contractions, rest, Ordering::Normal));
            });
        }
    }
    canonicalize(&out)
}

/// The product by word concatenation: normal words are first expanded into
/// plain words. Exponential in the word content; used as the oracle route.
pub fn mul_raw(a: &Expression, b: &Expression) -> Result<Expression> {
    let plain_terms = |e: &Expression| -> Result<Vec<Term>> {
        let mut ts = Vec::new();
        for (k, c) in e.iter() {
            match k.ordering {
                Ordering::Plain => ts.push(Term { coeff: c.clone(), key: k.clone() }),
                Ordering::Normal => {
                    let inv = normal_inverse_expand(&k.word)?;
                    for (k2, c2) in inv.iter() {
                        let mut contractions = k.contractions.clone();
                        contractions.extend(k2.contractions.iter().copied());
                        ts.push(Term::new(c.clone() * c2.clone(), contractions, k2.word.clone(), Ordering::Plain));
                    }
                }
            }
        }
        Ok(ts)
    };
    let ta = plain_terms(a)?;
    let tb = plain_terms(b)?;
    let mut out = Expression::zero();
    for x in &ta {
        for y in &tb {
            let mut word = x.key.word.clone();
            word.extend(y.key.word.iter().copied());
            let mut contractions = x.key.contractions.clone();
            contractions.extend(y.key.contractions.iter().copied());
            out.add_term(Term::new(x.coeff.clone() * y.coeff.clone(), contractions, word, Ordering::Plain));
        }
    }
    canonicalize(&out)
}

/// Rewrites every chronological-pair scalar as plain pair plus causal pair,
/// multiplying the expansion out.
pub fn expand_tvac(e: &Expression) -> Expression {
    let mut out = Expression::zero();
    for (k, c) in e.iter() {
        let mut parts: Vec<(Coeff, Vec<ContractionSymbol>)> = vec![(c.clone(), Vec::new())];
        for cs in &k.contractions {
            if cs.flavor == Flavor::TVac {
                let vac = ContractionSymbol { flavor: Flavor::Vac, ..*cs };
                let cau = ContractionSymbol { flavor: Flavor::Causal, ..*cs };
                let mut next = Vec::with_capacity(parts.len() * 2);
                for (pc, list) in parts {
                    let mut l1 = list.clone();
                    l1.push(vac);
                    next.push((pc.clone(), l1));
                    let mut l2 = list;
                    l2.push(cau);
                    next.push((pc, l2));
                }
                parts = next;
            } else {
                for (_, list) in parts.iter_mut() {
                    list.push(*cs);
                }
            }
        }
        for (pc, list) in parts {
            out.add_term(Term::new(pc, list, k.word.clone(), k.ordering));
        }
    }
    out
}

/// Drops every term carrying a causal contraction scalar.
pub fn drop_causal(e: &Expression) -> Expression {
    let mut out = Expression::zero();
    for (k, c) in e.iter() {
        if k.contractions.iter().all(|cs| cs.flavor != Flavor::Causal) {
            out.add_term(Term { coeff: c.clone(), key: k.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fields::{FieldSymbol, LabelRegistry, Mass};

    fn m() -> Mass {
        Mass::from_integer(1)
    }

    #[test]
    fn parity_two_factors() {
        // Identity is even; a swap of two odd factors is odd, of mixed even.
        assert!(!fermi_parity(&[0, 1], &[true, true]).unwrap());
        assert!(fermi_parity(&[1, 0], &[true, true]).unwrap());
        assert!(!fermi_parity(&[1, 0], &[true, false]).unwrap());
    }

    #[test]
    fn parity_three_factors() {
        // Printed table for three factors with parities p1 p2 p3:
        // reversal has parity p1 p2 + (p1 + p2) p3, the cycle (3,1,2) has
        // (p1 + p2) p3.
        assert!(fermi_parity(&[2, 1, 0], &[true, true, true]).unwrap());
        assert!(!fermi_parity(&[2, 0, 1], &[true, true, true]).unwrap());
        assert!(!fermi_parity(&[0, 1, 2], &[true, true, true]).unwrap());
        assert!(fermi_parity(&[1, 0, 2], &[true, true, false]).unwrap());
        assert!(!fermi_parity(&[0, 2, 1], &[true, true, false]).unwrap());
        assert!(fermi_parity(&[2, 0, 1], &[true, false, true]).unwrap());
    }

    #[test]
    fn parity_rejects_non_bijections() {
        assert!(fermi_parity(&[0, 0], &[true, true]).is_err());
        assert!(fermi_parity(&[0, 2], &[true, true]).is_err());
    }

    #[test]
    fn parity_equals_fermi_inversion_count_exhaustive() {
        // Independent oracle: parity of inversions among odd-parity factors.
        fn oracle(perm: &[usize], parities: &[bool]) -> bool {
            let mut s = false;
            for k in 0..perm.len() {
                for l in k + 1..perm.len() {
                    if perm[k] > perm[l] && parities[perm[k]] && parities[perm[l]] {
                        s = !s;
                    }
                }
            }
            s
        }
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        for n in 0..=6 {
            for perm in permutations(n) {
                for mask in 0..(1u32 << n) {
                    let parities: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                    assert_eq!(
                        fermi_parity(&perm, &parities).unwrap(),
                        oracle(&perm, &parities),
                        "perm {perm:?} parities {parities:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn wick_two_bose_fields() {
        let mut reg = LabelRegistry::new();
        let [x, y] = reg.fresh_n();
        let u = FieldSymbol::scalar(m(), x);
        let v = FieldSymbol::scalar(m(), y);
        let e = normal_order_expand(&[u, v]).unwrap();
        // u v = :u v: + <u v>0
        assert_eq!(e.len(), 2);
        let expected = Expression::normal_word(vec![u, v])
            + Expression::from_term(Term::new(
                coeff::one(),
                vec![ContractionSymbol::new(Flavor::Vac, u, v).unwrap()],
                vec![],
                Ordering::Normal,
            ));
        assert_eq!(e, expected);
    }

    #[test]
    fn wick_single_field_is_itself() {
        let mut reg = LabelRegistry::new();
        let x = reg.fresh();
        let u = FieldSymbol::scalar(m(), x);
        let e = normal_order_expand(&[u]).unwrap();
        assert_eq!(e, Expression::normal_word(vec![u]));
    }

    #[test]
    fn wick_four_contractible_fields_has_ten_terms() {
        // 1 empty + 6 single pairs + 3 double pairs.
        let mut reg = LabelRegistry::new();
        let word: Vec<FieldSymbol> = (0..4).map(|_| FieldSymbol::scalar(m(), reg.fresh())).collect();
        let e = normal_order_expand(&word).unwrap();
        assert_eq!(e.len(), 10);
    }

    #[test]
    fn inverse_expand_two_fields() {
        let mut reg = LabelRegistry::new();
        let [x, y] = reg.fresh_n();
        let u = FieldSymbol::scalar(m(), x);
        let v = FieldSymbol::scalar(m(), y);
        let e = normal_inverse_expand(&[u, v]).unwrap();
        let expected = Expression::word(vec![u, v])
            + Expression::from_term(Term::new(
                -coeff::one(),
                vec![ContractionSymbol::new(Flavor::Vac, u, v).unwrap()],
                vec![],
                Ordering::Normal,
            ));
        assert_eq!(e, expected);
    }

    #[test]
    fn empty_word_is_identity() {
        let e = normal_inverse_expand(&[]).unwrap();
        assert_eq!(e, Expression::one());
    }

    /// Mixed-species alphabet with a fresh label per position.
    fn mixed_word(reg: &mut LabelRegistry, species: &[u8]) -> Vec<FieldSymbol> {
        species
            .iter()
            .map(|&s| {
                let l = reg.fresh();
                match s {
                    0 => FieldSymbol::scalar(m(), l),
                    1 => FieldSymbol::em(1, l).unwrap(),
                    2 => FieldSymbol::spinor(m(), 1, l).unwrap(),
                    _ => FieldSymbol::spinor_bar(m(), 2, l).unwrap(),
                }
            })
            .collect()
    }

    #[test]
    fn normal_then_inverse_roundtrip() {
        // Expanding a plain word and running the inverse on each normal word
        // must reproduce the plain word, and vice versa.
        for pattern in [
            vec![2u8, 3],
            vec![2, 3, 2, 3],
            vec![0, 2, 3, 1],
            vec![3, 2, 3, 2],
            vec![0, 0, 1, 1],
        ] {
            let mut reg = LabelRegistry::new();
            let word = mixed_word(&mut reg, &pattern);
            let plain = Expression::word(word.clone());
            let normal_form = canonicalize(&plain).unwrap();
            // Re-expand every normal word back to plain products.
            let mut back = Expression::zero();
            for (k, c) in normal_form.iter() {
                let inv = normal_inverse_expand(&k.word).unwrap();
                for (k2, c2) in inv.iter() {
                    let mut contractions = k.contractions.clone();
                    contractions.extend(k2.contractions.iter().copied());
                    back.add_term(Term::new(c.clone() * c2.clone(), contractions, k2.word.clone(), k2.ordering));
                }
            }
            // The only fully plain representation of the original word.
            let back = canonicalize(&back).unwrap();
            assert_eq!(back, normal_form, "pattern {pattern:?}");
        }
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let mut reg = LabelRegistry::new();
        let word = mixed_word(&mut reg, &[2, 3, 1, 0, 2, 3]);
        let e = canonicalize(&Expression::word(word)).unwrap();
        assert_eq!(canonicalize(&e).unwrap(), e);
    }

    #[test]
    fn anticommutator_is_a_c_number() {
        // psi(x) psibar(y) + psibar(y) psi(x) collapses to contraction scalars.
        let mut reg = LabelRegistry::new();
        let [x, y] = reg.fresh_n();
        let psi = FieldSymbol::spinor(m(), 1, x).unwrap();
        let bar = FieldSymbol::spinor_bar(m(), 1, y).unwrap();
        let e = Expression::word(vec![psi, bar]) + Expression::word(vec![bar, psi]);
        let canon = canonicalize(&e).unwrap();
        assert!(canon.iter().all(|(k, _)| k.word.is_empty()), "{canon}");
        assert_eq!(canon.len(), 2);
    }

    #[test]
    fn commutator_of_bose_fields_is_a_c_number() {
        let mut reg = LabelRegistry::new();
        let [x, y] = reg.fresh_n();
        let u = FieldSymbol::scalar(m(), x);
        let v = FieldSymbol::scalar(m(), y);
        let e = Expression::word(vec![u, v]) - Expression::word(vec![v, u]);
        let canon = canonicalize(&e).unwrap();
        assert!(canon.iter().all(|(k, _)| k.word.is_empty()));
        assert_eq!(canon.len(), 2, "<uv>0 - <vu>0");
    }

    #[test]
    fn normal_antisymmetry_cancels() {
        // :u2 u1: + (-1)^(p1 p2 + 1) :u1 u2: = 0 in both parity sectors.
        let mut reg = LabelRegistry::new();
        let [x, y] = reg.fresh_n();
        // Fermi pair: p1 p2 = 1, so the combination is :u2 u1: + :u1 u2:.
        let psi = FieldSymbol::spinor(m(), 1, x).unwrap();
        let bar = FieldSymbol::spinor_bar(m(), 1, y).unwrap();
        let e = Expression::normal_word(vec![bar, psi]) + Expression::normal_word(vec![psi, bar]);
        assert!(canonicalize(&e).unwrap().is_zero());
        // Bose pair: p1 p2 = 0, the combination is :u2 u1: - :u1 u2:.
        let u = FieldSymbol::scalar(m(), x);
        let v = FieldSymbol::scalar(m(), y);
        let e = Expression::normal_word(vec![v, u]) - Expression::normal_word(vec![u, v]);
        assert!(canonicalize(&e).unwrap().is_zero());
    }

    #[test]
    fn vacuum_functional() {
        let mut reg = LabelRegistry::new();
        let [x, y] = reg.fresh_n();
        let u = FieldSymbol::scalar(m(), x);
        let v = FieldSymbol::scalar(m(), y);
        // <:u v:>0 = 0
        assert!(vacuum_expectation(&Expression::normal_word(vec![u, v])).unwrap().is_zero());
        // <u v>0 survives from the plain product.
        let vac = vacuum_expectation(&Expression::word(vec![u, v])).unwrap();
        assert_eq!(vac.len(), 1);
        // <I>0 = 1
        assert_eq!(vacuum_expectation(&Expression::one()).unwrap(), Expression::one());
    }

    #[test]
    fn product_routes_agree() {
        let mut reg = LabelRegistry::new();
        let wa = mixed_word(&mut reg, &[3, 2, 1]);
        let wb = mixed_word(&mut reg, &[2, 3, 0]);
        let a = canonicalize(&Expression::word(wa)).unwrap();
        let b = canonicalize(&Expression::word(wb)).unwrap();
        assert_eq!(mul(&a, &b).unwrap(), mul_raw(&a, &b).unwrap());
    }

    #[test]
    fn normal_permute_signs() {
        let mut reg = LabelRegistry::new();
        let [x, y, z] = [reg.fresh(), reg.fresh(), reg.fresh()];
        // Swapping two even factors is free.
        let bose = [FieldSymbol::em(0, x).unwrap(), FieldSymbol::em(1, y).unwrap()];
        let (sign, word) = normal_permute(&bose, &[1, 0]).unwrap();
        assert!(!sign);
        assert_eq!(word, vec![bose[1], bose[0]]);
        // Swapping adjacent odd factors flips the sign.
        let fermi = [
            FieldSymbol::spinor(m(), 1, x).unwrap(),
            FieldSymbol::spinor_bar(m(), 2, y).unwrap(),
            FieldSymbol::em(3, z).unwrap(),
        ];
        let (sign, _) = normal_permute(&fermi, &[1, 0, 2]).unwrap();
        assert!(sign);
        // Any permutation matches the inversion count over odd positions.
        for perm in [[0usize, 2, 1], [2, 0, 1], [2, 1, 0], [1, 2, 0]] {
            let parities: Vec<bool> = fermi.iter().map(|s| s.parity()).collect();
            let mut inv = false;
            for a in 0..3 {
                for b in a + 1..3 {
                    if perm[a] > perm[b] && parities[perm[a]] && parities[perm[b]] {
                        inv = !inv;
                    }
                }
            }
            let (sign, _) = normal_permute(&fermi, &perm).unwrap();
            assert_eq!(sign, inv, "{perm:?}");
        }
        // Non-bijections are rejected.
        assert!(normal_permute(&fermi, &[0, 0, 1]).is_err());
    }

    #[test]
    fn coincident_contractible_labels_are_refused() {
        let mut reg = LabelRegistry::new();
        let x = reg.fresh();
        let psi = FieldSymbol::spinor(m(), 1, x).unwrap();
        let bar = FieldSymbol::spinor_bar(m(), 1, x).unwrap();
        assert!(matches!(
            normal_order_expand(&[psi, bar]),
            Err(Error::CoincidentLabels(_))
        ));
    }
}
