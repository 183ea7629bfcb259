//! Operator adjoints on canonical expressions.

use std::collections::BTreeMap;

use crate::algebra::coeff::{self, Coeff};
use crate::algebra::expr::{ContractionSymbol, Expression, Flavor, Term};
use crate::algebra::fields::{FieldKind, FieldSymbol, Label, Species};
use crate::algebra::gamma::g0_sign;
use crate::algebra::wick::canonicalize;
use crate::error::{Error, Result};

/// Conjugates one field symbol: spinor components map onto the conjugate
/// species with the sign of the time gamma matrix's diagonal, the photon
/// and scalar are self-conjugate, the vector species swap.
fn star(s: &FieldSymbol) -> (Coeff, FieldSymbol) {
    let (sign, species) = match s.kind.species {
        Species::Spinor => (g0_sign(s.component), Species::SpinorBar),
        Species::SpinorBar => (g0_sign(s.component), Species::Spinor),
        Species::Scalar => (1, Species::Scalar),
        Species::Em => (1, Species::Em),
        Species::Vector => (1, Species::VectorConj),
        Species::VectorConj => (1, Species::Vector),
    };
    let sym = FieldSymbol {
        kind: FieldKind { species, mass: s.kind.mass },
        component: s.component,
        label: s.label,
    };
    (coeff::int(sign as i64), sym)
}

/// The adjoint of a canonicalized expression: words reverse with each field
/// conjugated, coefficients conjugate, and every plain pair scalar maps to
/// the reversed conjugated pair. Expressions still carrying causal or
/// chronological pair scalars are refused: their conjugates leave this
/// symbol algebra (the harnesses reduce those cases through the vacuum
/// conjugation identity instead).
pub fn adjoint(e: &Expression) -> Result<Expression> {
    let canon = canonicalize(e)?;
    let mut out = Expression::zero();
    for (k, c) in canon.iter() {
        let mut coeff = coeff::conj(c);
        let mut word = Vec::with_capacity(k.word.len());
        for s in k.word.iter().rev() {
            let (sg, sym) = star(s);
            coeff = coeff * sg;
            word.push(sym);
        }
        let mut contractions = Vec::with_capacity(k.contractions.len());
        for cs in &k.contractions {
            if cs.flavor != Flavor::Vac {
                return Err(Error::InvalidInput(
                    "adjoint of an unresolved chronological pair scalar is outside the symbol algebra"
                        .into(),
                ));
            }
            let (sl, left) = star(&cs.right);
            let (sr, right) = star(&cs.left);
            coeff = coeff * sl * sr;
            contractions.push(ContractionSymbol::new(Flavor::Vac, left, right)?);
        }
        out.add_term(Term::new(coeff, contractions, word, k.ordering));
    }
    canonicalize(&out)
}

/// Averages an expression over a family of label substitutions (the group
/// of weight-preserving relabelings of an integrand).
pub fn average_over_relabelings(
    e: &Expression,
    maps: &[BTreeMap<Label, Label>],
) -> Result<Expression> {
    let mut sum = Expression::zero();
    for map in maps {
        let relabeled = e.relabel(&|l| map.get(&l).copied().unwrap_or(l));
        sum = sum + relabeled;
    }
    let inv = coeff::ratio(1, maps.len() as i64);
    canonicalize(&sum.scale(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fields::{LabelRegistry, Mass};
    use crate::algebra::wick::mul;
    use crate::smatrix::series::bilocal_lagrangian;

    fn m() -> Mass {
        Mass::from_integer(1)
    }

    fn random_word(reg: &mut LabelRegistry, seed: &mut u64, len: usize) -> Vec<FieldSymbol> {
        (0..len)
            .map(|_| {
                *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let l = reg.fresh();
                match (*seed >> 33) % 4 {
                    0 => FieldSymbol::scalar(m(), l),
                    1 => FieldSymbol::em(((*seed >> 20) % 4) as u8, l).unwrap(),
                    2 => FieldSymbol::spinor(m(), ((*seed >> 20) % 4 + 1) as u8, l).unwrap(),
                    _ => FieldSymbol::spinor_bar(m(), ((*seed >> 20) % 4 + 1) as u8, l).unwrap(),
                }
            })
            .collect()
    }

    #[test]
    fn involution() {
        let mut reg = LabelRegistry::new();
        let mut seed = 42;
        for len in [1usize, 2, 3, 4, 5] {
            let w = random_word(&mut reg, &mut seed, len);
            let e = canonicalize(&Expression::word(w)).unwrap();
            let twice = adjoint(&adjoint(&e).unwrap()).unwrap();
            assert_eq!(twice, e, "len {len}");
        }
    }

    #[test]
    fn antihomomorphism() {
        let mut reg = LabelRegistry::new();
        let mut seed = 7;
        for _ in 0..6 {
            let a = canonicalize(&Expression::word(random_word(&mut reg, &mut seed, 3))).unwrap();
            let b = canonicalize(&Expression::word(random_word(&mut reg, &mut seed, 3))).unwrap();
            let lhs = adjoint(&mul(&a, &b).unwrap()).unwrap();
            let rhs = mul(&adjoint(&b).unwrap(), &adjoint(&a).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn vertex_adjoint_swaps_the_spinor_arguments() {
        let mut reg = LabelRegistry::new();
        let [x, y, z] = reg.fresh_n();
        let l3 = bilocal_lagrangian(m(), &coeff::one(), x, y, z).unwrap();
        let l3_swapped = bilocal_lagrangian(m(), &coeff::one(), y, x, z).unwrap();
        assert_eq!(adjoint(&l3).unwrap(), canonicalize(&l3_swapped).unwrap());
    }

    #[test]
    fn photon_field_is_self_adjoint() {
        let mut reg = LabelRegistry::new();
        let a = FieldSymbol::em(2, reg.fresh()).unwrap();
        let e = Expression::word(vec![a]);
        assert_eq!(adjoint(&e).unwrap(), canonicalize(&e).unwrap());
    }
}
