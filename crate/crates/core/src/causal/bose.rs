//! Chronological products of photon words.

use crate::algebra::expr::{ContractionSymbol, Expression, Flavor, Ordering, Term};
use crate::algebra::fields::{two_point_class, FieldSymbol, Species, TwoPointClass};
use crate::algebra::wick::pair_expansion;
use crate::error::{Error, Result};

/// Chronological product of two arbitrary free fields: the plain product
/// plus the causal pair scalar (absent for a zero-class pair).
pub fn chrono_two(a: FieldSymbol, b: FieldSymbol) -> Result<Expression> {
    let mut e = Expression::word(vec![a, b]);
    if let TwoPointClass::Nonzero(_) = two_point_class(&a, &b) {
        let sym = ContractionSymbol::new(Flavor::Causal, a, b)?;
        e.add_term(Term::new(crate::algebra::coeff::one(), vec![sym], vec![], Ordering::Normal));
    }
    Ok(e)
}

fn require_em(word: &[FieldSymbol]) -> Result<()> {
    for s in word {
        if s.kind.species != Species::Em {
            return Err(Error::NotABoseWord(s.kind.species.name()));
        }
    }
    Ok(())
}

/// Chronological product of a photon word: sum over pair sets of causal
/// scalars with plain residual words. All signs are positive.
pub fn chrono_bose(word: &[FieldSymbol]) -> Result<Expression> {
    require_em(word)?;
    pair_expansion(word, Flavor::Causal, Ordering::Plain, false)
}

/// The same product built by the one-step recurrence
/// `T(A_1..A_{n+1}) = T(A_1..A_n) A_{n+1} + sum_k <A_k A_{n+1}>_c T(.. without A_k ..)`.
pub fn chrono_bose_recurrent(word: &[FieldSymbol]) -> Result<Expression> {
    require_em(word)?;
    fn rec(word: &[FieldSymbol]) -> Result<Expression> {
        let n = word.len();
        if n <= 1 {
            return Ok(if n == 0 { Expression::one() } else { Expression::word(word.to_vec()) });
        }
        let last = word[n - 1];
        let head = &word[..n - 1];
        // Append the last field to every term of T(head).
        let mut out = Expression::zero();
        for (k, c) in rec(head)?.iter() {
            let mut w = k.word.clone();
            w.push(last);
            out.add_term(Term::new(c.clone(), k.contractions.clone(), w, Ordering::Plain));
        }
        for i in 0..n - 1 {
            let sym = ContractionSymbol::new(Flavor::Causal, word[i], last)?;
            let mut rest = head.to_vec();
            rest.remove(i);
            for (k, c) in rec(&rest)?.iter() {
                let mut contractions = k.contractions.clone();
                contractions.push(sym);
                out.add_term(Term::new(c.clone(), contractions, k.word.clone(), k.ordering));
            }
        }
        Ok(out)
    }
    rec(word)
}

/// Wick form of the photon chronological product: chronological pair
/// scalars with normal residual words.
pub fn chrono_bose_wick(word: &[FieldSymbol]) -> Result<Expression> {
    require_em(word)?;
    pair_expansion(word, Flavor::TVac, Ordering::Normal, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fields::LabelRegistry;
    use crate::algebra::wick::{canonicalize, expand_tvac, vacuum_expectation};
    use crate::algebra::Mass;

    fn em_word(n: usize) -> Vec<FieldSymbol> {
        let mut reg = LabelRegistry::new();
        (0..n).map(|i| FieldSymbol::em((i % 4) as u8, reg.fresh()).unwrap()).collect()
    }

    #[test]
    fn two_photons_match_the_pair_definition() {
        let w = em_word(2);
        assert_eq!(chrono_bose(&w).unwrap(), chrono_two(w[0], w[1]).unwrap());
    }

    #[test]
    fn mixed_pair_has_no_causal_scalar() {
        let mut reg = LabelRegistry::new();
        let phi = FieldSymbol::scalar(Mass::from_integer(1), reg.fresh());
        let a = FieldSymbol::em(0, reg.fresh()).unwrap();
        let e = chrono_two(phi, a).unwrap();
        assert_eq!(e, Expression::word(vec![phi, a]));
    }

    #[test]
    fn chrono_two_vacuum_is_vac_plus_causal() {
        let w = em_word(2);
        let vac = vacuum_expectation(&chrono_two(w[0], w[1]).unwrap()).unwrap();
        assert_eq!(vac.len(), 2, "{vac}");
    }

    #[test]
    fn four_photons_give_ten_terms() {
        let w = em_word(4);
        assert_eq!(chrono_bose(&w).unwrap().len(), 10);
    }

    #[test]
    fn recurrence_matches_direct_sum() {
        for n in 0..=5 {
            let w = em_word(n);
            assert_eq!(chrono_bose(&w).unwrap(), chrono_bose_recurrent(&w).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn wick_form_matches_after_pair_splitting() {
        for n in 1..=5 {
            let w = em_word(n);
            let direct = canonicalize(&chrono_bose(&w).unwrap()).unwrap();
            let wick = canonicalize(&expand_tvac(&chrono_bose_wick(&w).unwrap())).unwrap();
            assert_eq!(direct, wick, "n = {n}");
        }
    }

    #[test]
    fn wick_vacuum_at_four_photons() {
        // Only the three full pairings survive the vacuum functional.
        let w = em_word(4);
        let vac = vacuum_expectation(&chrono_bose_wick(&w).unwrap()).unwrap();
        assert_eq!(vac.len(), 3);
        assert!(vac.iter().all(|(k, _)| k.contractions.len() == 2));
    }

    #[test]
    fn single_photon_is_itself() {
        let w = em_word(1);
        assert_eq!(chrono_bose_wick(&w).unwrap(), Expression::normal_word(w.clone()));
        assert_eq!(chrono_bose(&w).unwrap(), Expression::word(w));
    }

    #[test]
    fn non_photon_word_is_rejected() {
        let mut reg = LabelRegistry::new();
        let w = vec![FieldSymbol::scalar(Mass::from_integer(1), reg.fresh())];
        assert!(matches!(chrono_bose(&w), Err(Error::NotABoseWord(_))));
    }
}
