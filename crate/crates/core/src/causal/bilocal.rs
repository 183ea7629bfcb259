//! Chronological products of bilocal spinor pairs.

use crate::algebra::coeff;
use crate::algebra::expr::{ContractionSymbol, Expression, Flavor, Ordering, Term};
use crate::algebra::fields::{two_point_class, FieldSymbol, Label, Species, TwoPointClass};
use crate::algebra::wick::{for_each_matching, pair_set_sign};
use crate::error::{Error, Result};

/// One bilocal block: a conjugate spinor then a spinor at distinct labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BilocalFactor {
    pub bar: FieldSymbol,
    pub psi: FieldSymbol,
}

impl BilocalFactor {
    pub fn new(bar: FieldSymbol, psi: FieldSymbol) -> Result<Self> {
        if bar.kind.species != Species::SpinorBar
            || psi.kind.species != Species::Spinor
            || bar.kind.mass != psi.kind.mass
            || bar.label == psi.label
        {
            return Err(Error::MalformedBilocal);
        }
        Ok(BilocalFactor { bar, psi })
    }

    pub fn labels(&self) -> [Label; 2] {
        [self.bar.label, self.psi.label]
    }

    pub fn word(&self) -> Vec<FieldSymbol> {
        vec![self.bar, self.psi]
    }
}

/// Shared expansion over the interleaved word of all block fields.
/// Cross-block conjugate/plain spinor pairs contribute chronological pair
/// scalars; same-block pairs contribute plain vacuum scalars when
/// `with_same_block` is set and are excluded otherwise. Signs pull each pair
/// to the front; residual words are normal.
fn block_wick(factors: &[BilocalFactor], with_same_block: bool) -> Result<Expression> {
    let n = factors.len();
    if n == 0 {
        return Ok(Expression::one());
    }
    let mut word = Vec::with_capacity(2 * n);
    for f in factors {
        word.extend(f.word());
    }
    let parities: Vec<bool> = word.iter().map(|s| s.parity()).collect();
    let m = word.len();
    let mut table = vec![vec![None; m]; m];
    for k in 0..m {
        for l in k + 1..m {
            if let TwoPointClass::Zero = two_point_class(&word[k], &word[l]) {
                continue;
            }
            if k / 2 == l / 2 {
                if with_same_block {
                    table[k][l] = Some(ContractionSymbol::new(Flavor::Vac, word[k], word[l])?);
                }
            } else {
                table[k][l] = Some(ContractionSymbol::new(Flavor::TVac, word[k], word[l])?);
            }
        }
    }
    let mut out = Expression::zero();
    for_each_matching(m, &|k, l| table[k][l].is_some(), &mut |pairs| {
        let sign = pair_set_sign(&parities, pairs);
        let contractions: Vec<ContractionSymbol> =
            pairs.iter().map(|&(k, l)| table[k][l].unwrap()).collect();
        let mut in_pair = vec![false; m];
        for &(k, l) in pairs {
            in_pair[k] = true;
            in_pair[l] = true;
        }
        let rest: Vec<FieldSymbol> = (0..m).filter(|&i| !in_pair[i]).map(|i| word[i]).collect();
        let c = if sign { -coeff::one() } else { coeff::one() };
        out.add_term(Term::new(c, contractions, rest, Ordering::Normal));
    });
    Ok(out)
}

/// Chronological product of plain bilocal blocks, in the symmetric form:
/// normal residual words with chronological pair scalars between fields of
/// different blocks and plain vacuum scalars inside a block.
///
/// For two blocks this is exactly the four-term expansion of the plain
/// product plus causal pair scalars (see [`chrono_bilocal_block_form`]); the
/// fixed-slot block sum stops reproducing the time-ordered products at three
/// blocks, so the symmetric form is the definition used throughout.
pub fn chrono_bilocal(factors: &[BilocalFactor]) -> Result<Expression> {
    block_wick(factors, true)
}

/// Chronological product of normal bilocal blocks: as [`chrono_bilocal`]
/// but with every same-block average taken to be zero.
pub fn chrono_bilocal_normal(factors: &[BilocalFactor]) -> Result<Expression> {
    block_wick(factors, false)
}

/// Which slot of a contracted factor pair receives the pair block in the
/// explicit block sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubstitutionSlot {
    Earlier,
    Later,
}

/// The explicit block sum: disjoint factor pairs, each contributing the
/// two-block chronological product minus the plain product, substituted at
/// the chosen slot with the partner slot deleted. Agrees with
/// [`chrono_bilocal`] for up to two blocks; kept for the equivalence tests.
pub fn chrono_bilocal_block_form(
    factors: &[BilocalFactor],
    slot: SubstitutionSlot,
) -> Result<Expression> {
    let n = factors.len();
    if n == 0 {
        return Ok(Expression::one());
    }
    if n == 1 {
        return Ok(Expression::word(factors[0].word()));
    }
    type Block = Vec<(Vec<ContractionSymbol>, Vec<FieldSymbol>)>;
    let mut blocks: Vec<Vec<Option<Block>>> = vec![vec![None; n]; n];
    for k in 0..n {
        for l in k + 1..n {
            let bk = &factors[k];
            let bl = &factors[l];
            let bar_psi = ContractionSymbol::new(Flavor::Causal, bk.bar, bl.psi)?;
            let psi_bar = ContractionSymbol::new(Flavor::Causal, bk.psi, bl.bar)?;
            blocks[k][l] = Some(vec![
                (vec![bar_psi], vec![bk.psi, bl.bar]),
                (vec![psi_bar], vec![bk.bar, bl.psi]),
                (vec![bar_psi, psi_bar], vec![]),
            ]);
        }
    }
    let mut out = Expression::zero();
    for_each_matching(n, &|_, _| true, &mut |pairs| {
        let mut partner: Vec<Option<(usize, bool)>> = vec![None; n];
        for &(k, l) in pairs {
            partner[k] = Some((l, true));
            partner[l] = Some((k, false));
        }
        let mut parts: Vec<(Vec<ContractionSymbol>, Vec<FieldSymbol>)> = vec![(vec![], vec![])];
        for i in 0..n {
            match partner[i] {
                None => {
                    for (_, w) in parts.iter_mut() {
                        w.extend(factors[i].word());
                    }
                }
                Some((j, is_first)) => {
                    let insert_here = match slot {
                        SubstitutionSlot::Earlier => is_first,
                        SubstitutionSlot::Later => !is_first,
                    };
                    if !insert_here {
                        continue;
                    }
                    let (k, l) = if is_first { (i, j) } else { (j, i) };
                    let block = blocks[k][l].as_ref().unwrap();
                    let mut next = Vec::with_capacity(parts.len() * block.len());
                    for (cs, w) in &parts {
                        for (bcs, bw) in block {
                            let mut cs2 = cs.clone();
                            cs2.extend(bcs.iter().copied());
                            let mut w2 = w.clone();
                            w2.extend(bw.iter().copied());
                            next.push((cs2, w2));
                        }
                    }
                    parts = next;
                }
            }
        }
        for (cs, w) in parts {
            out.add_term(Term::new(coeff::one(), cs, w, Ordering::Plain));
        }
    });
    Ok(out)
}
