//! Time-ordering and causal-factorization identity checkers.

use crate::algebra::expr::{ContractionSymbol, Expression, Flavor, Ordering, Term};
use crate::algebra::fields::{two_point_class, FieldSymbol, Label, TwoPointClass};
use crate::algebra::wick::{canonicalize, fermi_parity, mul};
use crate::algebra::coeff;
use crate::causal::bilocal::{chrono_bilocal, chrono_bilocal_normal, BilocalFactor};
use crate::causal::bose::chrono_bose;
use crate::causal::restrict::{restrict, restrict_partial, TimeOrderAssumption};
use crate::error::Result;

/// A family of chronological products the checkers know how to build, both
/// in full and on factor subsets.
#[derive(Debug, Clone)]
pub enum ChronoFamily {
    /// Photon word; each field is its own factor.
    Em(Vec<FieldSymbol>),
    /// Plain bilocal blocks.
    Bilocal(Vec<BilocalFactor>),
    /// Normal bilocal blocks.
    BilocalNormal(Vec<BilocalFactor>),
}

impl ChronoFamily {
    pub fn len(&self) -> usize {
        match self {
            ChronoFamily::Em(w) => w.len(),
            ChronoFamily::Bilocal(f) | ChronoFamily::BilocalNormal(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn factor_labels(&self, i: usize) -> Vec<Label> {
        match self {
            ChronoFamily::Em(w) => vec![w[i].label],
            ChronoFamily::Bilocal(f) | ChronoFamily::BilocalNormal(f) => f[i].labels().to_vec(),
        }
    }

    /// The chronological product of the factors selected by `idx`, in the
    /// given order.
    pub fn build_subset(&self, idx: &[usize]) -> Result<Expression> {
        match self {
            ChronoFamily::Em(w) => {
                let sub: Vec<FieldSymbol> = idx.iter().map(|&i| w[i]).collect();
                chrono_bose(&sub)
            }
            ChronoFamily::Bilocal(f) => {
                let sub: Vec<BilocalFactor> = idx.iter().map(|&i| f[i]).collect();
                chrono_bilocal(&sub)
            }
            ChronoFamily::BilocalNormal(f) => {
                let sub: Vec<BilocalFactor> = idx.iter().map(|&i| f[i]).collect();
                chrono_bilocal_normal(&sub)
            }
        }
    }

    pub fn build(&self) -> Result<Expression> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.build_subset(&all)
    }

    /// The product of the factors in the given order, as written (no
    /// chronological scalars). For normal blocks this is the operator
    /// product of the per-factor normal words.
    pub fn ordered_product(&self, perm: &[usize]) -> Result<Expression> {
        match self {
            ChronoFamily::Em(w) => {
                let word: Vec<FieldSymbol> = perm.iter().map(|&i| w[i]).collect();
                Ok(Expression::word(word))
            }
            ChronoFamily::Bilocal(f) => {
                let mut word = Vec::with_capacity(2 * perm.len());
                for &i in perm {
                    word.extend(f[i].word());
                }
                Ok(Expression::word(word))
            }
            ChronoFamily::BilocalNormal(f) => {
                let mut acc = Expression::one();
                for &i in perm {
                    acc = mul(&acc, &Expression::normal_word(f[i].word()))?;
                }
                Ok(acc)
            }
        }
    }

    fn grouped_order(&self, groups_desc: &[Vec<usize>]) -> Result<TimeOrderAssumption> {
        let label_groups: Vec<Vec<Label>> = groups_desc
            .iter()
            .map(|g| g.iter().flat_map(|&i| self.factor_labels(i)).collect())
            .collect();
        let refs: Vec<&[Label]> = label_groups.iter().map(|g| g.as_slice()).collect();
        TimeOrderAssumption::grouped(&refs)
    }
}

/// Restricting the chronological product to the total factor order
/// `perm_desc` (latest first) must reproduce the plainly ordered product.
pub fn check_time_order_identity(family: &ChronoFamily, perm_desc: &[usize]) -> Result<bool> {
    let groups: Vec<Vec<usize>> = perm_desc.iter().map(|&i| vec![i]).collect();
    let order = family.grouped_order(&groups)?;
    let lhs = restrict(&family.build()?, &order)?;
    let rhs = canonicalize(&family.ordered_product(perm_desc)?)?;
    Ok(lhs == rhs)
}

/// Factorization: with every label of the `late` factors later than every
/// label of the `early` factors, the full chronological product equals the
/// product of the two partial ones. Within-group pair scalars stay symbolic
/// on both sides.
pub fn check_factorization(family: &ChronoFamily, late: &[usize], early: &[usize]) -> Result<bool> {
    check_factorization_with(
        |idx| family.build_subset(idx),
        |i| family.factor_labels(i),
        late,
        early,
    )
}

/// Generic form of [`check_factorization`] over any subset builder; also
/// used for the interaction-vertex products.
pub fn check_factorization_with(
    build: impl Fn(&[usize]) -> Result<Expression>,
    factor_labels: impl Fn(usize) -> Vec<Label>,
    late: &[usize],
    early: &[usize],
) -> Result<bool> {
    let mut all: Vec<usize> = late.iter().chain(early.iter()).copied().collect();
    all.sort_unstable();
    let full = build(&all)?;
    let late_labels: Vec<Label> = late.iter().flat_map(|&i| factor_labels(i)).collect();
    let early_labels: Vec<Label> = early.iter().flat_map(|&i| factor_labels(i)).collect();
    let order = TimeOrderAssumption::grouped(&[&late_labels, &early_labels])?;
    let lhs = restrict_partial(&full, &order)?;
    let rhs = canonicalize(&mul(&build(late)?, &build(early)?)?)?;
    Ok(lhs == rhs)
}

/// The three-field chronological form: plain product plus one causal pair
/// scalar times the left-over field, summed over which field is left out,
/// each with the Fermi sign of pulling the pair to the front.
pub fn three_field_chrono(fields: &[FieldSymbol; 3]) -> Result<Expression> {
    let parities = [fields[0].parity(), fields[1].parity(), fields[2].parity()];
    let mut e = Expression::word(fields.to_vec());
    for leave in 0..3 {
        let (a, b) = match leave {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        if let TwoPointClass::Nonzero(_) = two_point_class(&fields[a], &fields[b]) {
            let sym = ContractionSymbol::new(Flavor::Causal, fields[a], fields[b])?;
            let sign = fermi_parity(&[a, b, leave], &parities)?;
            let c = if sign { -coeff::one() } else { coeff::one() };
            e.add_term(Term::new(c, vec![sym], vec![fields[leave]], Ordering::Plain));
        }
    }
    Ok(e)
}

/// Checks the three-field form against the signed ordered product on the
/// total order `perm_desc` (latest first).
pub fn check_three_field_chrono(fields: &[FieldSymbol; 3], perm_desc: &[usize; 3]) -> Result<bool> {
    let parities = [fields[0].parity(), fields[1].parity(), fields[2].parity()];
    let labels: Vec<Label> = perm_desc.iter().map(|&i| fields[i].label).collect();
    let order = TimeOrderAssumption::total(&labels)?;
    let lhs = restrict(&three_field_chrono(fields)?, &order)?;
    let sign = fermi_parity(perm_desc, &parities)?;
    let word: Vec<FieldSymbol> = perm_desc.iter().map(|&i| fields[i]).collect();
    let rhs_raw = Expression::word(word).scale(&if sign { -coeff::one() } else { coeff::one() });
    let rhs = canonicalize(&rhs_raw)?;
    Ok(lhs == rhs)
}

/// Parity conditions under which the three-field form matches the ordered
/// product in every domain: the first factor must see equal parities to its
/// right, and so must the second.
pub fn three_field_conditions_hold(parities: &[bool; 3]) -> bool {
    let p = |a: bool, b: bool| a && b;
    p(parities[0], parities[1]) == p(parities[0], parities[2])
        && p(parities[1], parities[0]) == p(parities[1], parities[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fields::{LabelRegistry, Mass};

    fn m() -> Mass {
        Mass::from_integer(1)
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

    fn em_family(n: usize) -> ChronoFamily {
        let mut reg = LabelRegistry::new();
        ChronoFamily::Em((0..n).map(|i| FieldSymbol::em((i % 4) as u8, reg.fresh()).unwrap()).collect())
    }

    fn bilocal_family(n: usize, normal: bool) -> ChronoFamily {
        let mut reg = LabelRegistry::new();
        let f: Vec<BilocalFactor> = (0..n)
            .map(|i| {
                BilocalFactor::new(
                    FieldSymbol::spinor_bar(m(), (i % 4 + 1) as u8, reg.fresh()).unwrap(),
                    FieldSymbol::spinor(m(), ((i + 2) % 4 + 1) as u8, reg.fresh()).unwrap(),
                )
                .unwrap()
            })
            .collect();
        if normal {
            ChronoFamily::BilocalNormal(f)
        } else {
            ChronoFamily::Bilocal(f)
        }
    }

    #[test]
    fn em_time_order_identity_small() {
        for n in 2..=4 {
            let fam = em_family(n);
            for perm in permutations(n) {
                assert!(check_time_order_identity(&fam, &perm).unwrap(), "n={n} perm={perm:?}");
            }
        }
    }

    #[test]
    fn bilocal_time_order_identity_small() {
        for n in 2..=3 {
            for normal in [false, true] {
                let fam = bilocal_family(n, normal);
                for perm in permutations(n) {
                    assert!(
                        check_time_order_identity(&fam, &perm).unwrap(),
                        "n={n} normal={normal} perm={perm:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn em_factorization_small() {
        let fam = em_family(4);
        // Split 2 + 2 with ascending index convention inside each part.
        assert!(check_factorization(&fam, &[0, 2], &[1, 3]).unwrap());
        assert!(check_factorization(&fam, &[1, 3], &[0, 2]).unwrap());
        assert!(check_factorization(&fam, &[3], &[0, 1, 2]).unwrap());
    }

    #[test]
    fn bilocal_factorization_small() {
        for normal in [false, true] {
            let fam = bilocal_family(3, normal);
            assert!(check_factorization(&fam, &[0, 1], &[2]).unwrap(), "normal={normal}");
            assert!(check_factorization(&fam, &[2], &[0, 1]).unwrap(), "normal={normal}");
        }
    }

    #[test]
    fn three_field_form_all_fermi_and_all_bose() {
        let mut reg = LabelRegistry::new();
        let fermi = [
            FieldSymbol::spinor(m(), 1, reg.fresh()).unwrap(),
            FieldSymbol::spinor_bar(m(), 2, reg.fresh()).unwrap(),
            FieldSymbol::spinor(m(), 3, reg.fresh()).unwrap(),
        ];
        let bose = [
            FieldSymbol::em(0, reg.fresh()).unwrap(),
            FieldSymbol::em(1, reg.fresh()).unwrap(),
            FieldSymbol::em(2, reg.fresh()).unwrap(),
        ];
        assert!(three_field_conditions_hold(&[true, true, true]));
        assert!(three_field_conditions_hold(&[false, false, false]));
        for perm in permutations(3) {
            let p: [usize; 3] = [perm[0], perm[1], perm[2]];
            assert!(check_three_field_chrono(&fermi, &p).unwrap(), "fermi {p:?}");
            assert!(check_three_field_chrono(&bose, &p).unwrap(), "bose {p:?}");
        }
    }

    #[test]
    fn three_field_conditions_fail_for_mixed_parities() {
        assert!(!three_field_conditions_hold(&[true, true, false]));
        assert!(!three_field_conditions_hold(&[true, false, true]));
        // One odd factor first, two even: conditions hold trivially.
        assert!(three_field_conditions_hold(&[true, false, false]));
    }
}
