//! Domain-conditioned rewriting: resolving causal and chronological pair
//! scalars under an assumed time ordering.

use std::collections::BTreeSet;

use crate::algebra::coeff::Coeff;
use crate::algebra::expr::{ContractionSymbol, Expression, Flavor, Term};
use crate::algebra::fields::{two_point_class, Label, TwoPointClass};
use crate::algebra::wick::canonicalize;
use crate::error::{Error, Result};

/// Ordered list of disjoint label groups, latest first: every label of group
/// `i` is strictly later than every label of group `i + 1`. Labels inside a
/// group carry no relative order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeOrderAssumption {
    groups: Vec<BTreeSet<Label>>,
}

impl TimeOrderAssumption {
    pub fn new(groups: Vec<BTreeSet<Label>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &groups {
            for l in g {
                if !seen.insert(*l) {
                    return Err(Error::OverlappingGroups);
                }
            }
        }
        Ok(TimeOrderAssumption { groups })
    }

    /// Total order: one label per group, latest first.
    pub fn total(labels_desc: &[Label]) -> Result<Self> {
        Self::new(labels_desc.iter().map(|l| BTreeSet::from([*l])).collect())
    }

    /// Grouped order from per-group label slices, latest first.
    pub fn grouped(groups_desc: &[&[Label]]) -> Result<Self> {
        Self::new(groups_desc.iter().map(|g| g.iter().copied().collect()).collect())
    }

    pub fn position(&self, l: Label) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&l))
    }

    pub fn covers(&self, labels: &BTreeSet<Label>) -> Option<Label> {
        labels.iter().find(|l| self.position(**l).is_none()).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    LeftLater,
    LeftEarlier,
    Unresolved,
}

fn relation(order: &TimeOrderAssumption, a: Label, b: Label) -> Relation {
    match (order.position(a), order.position(b)) {
        (Some(ia), Some(ib)) if ia < ib => Relation::LeftLater,
        (Some(ia), Some(ib)) if ia > ib => Relation::LeftEarlier,
        _ => Relation::Unresolved,
    }
}

/// Restricts `e` to the assumed ordering, resolving every causal and
/// chronological pair scalar; an unresolved pair is an error. The result is
/// re-canonicalized.
pub fn restrict(e: &Expression, order: &TimeOrderAssumption) -> Result<Expression> {
    if let Some(l) = order.covers(&e.labels()) {
        return Err(Error::LabelNotOrdered(l));
    }
    restrict_impl(e, order, true)
}

/// Like [`restrict`], but leaves pair scalars between same-group or
/// uncovered labels symbolic. Used by the factorization checkers, where the
/// identity keeps the within-group distributions unresolved.
pub fn restrict_partial(e: &Expression, order: &TimeOrderAssumption) -> Result<Expression> {
    restrict_impl(e, order, false)
}

fn restrict_impl(e: &Expression, order: &TimeOrderAssumption, strict: bool) -> Result<Expression> {
    let mut out = Expression::zero();
    'terms: for (key, c) in e.iter() {
        // Branches: (coefficient multiplier, resolved contraction list).
        let mut branches: Vec<(Coeff, Vec<ContractionSymbol>)> = vec![(c.clone(), Vec::new())];
        for cs in &key.contractions {
            let rel = relation(order, cs.left.label, cs.right.label);
            match (cs.flavor, rel) {
                (Flavor::Vac, _) => {
                    for (_, list) in branches.iter_mut() {
                        list.push(*cs);
                    }
                }
                (_, Relation::Unresolved) => {
                    if strict {
                        return Err(Error::OrderTooCoarse(cs.left.label, cs.right.label));
                    }
                    for (_, list) in branches.iter_mut() {
                        list.push(*cs);
                    }
                }
                (Flavor::Causal, Relation::LeftLater) => {
                    // Supported at delayed left arguments only.
                    continue 'terms;
                }
                (Flavor::Causal, Relation::LeftEarlier) => {
                    // <a b>_c = (-1)^(pa pb) <b a>0 - <a b>0 on this domain.
                    let fermi = cs.left.parity() && cs.right.parity();
                    let mut next = Vec::with_capacity(branches.len() * 2);
                    for (bc, list) in branches {
                        if let TwoPointClass::Nonzero(_) = two_point_class(&cs.right, &cs.left) {
                            let swapped =
                                ContractionSymbol::new(Flavor::Vac, cs.right, cs.left)?;
                            let sign = if fermi { -bc.clone() } else { bc.clone() };
                            let mut l1 = list.clone();
                            l1.push(swapped);
                            next.push((sign, l1));
                        }
                        let direct = ContractionSymbol { flavor: Flavor::Vac, ..*cs };
                        let mut l2 = list;
                        l2.push(direct);
                        next.push((-bc, l2));
                    }
                    branches = next;
                }
                (Flavor::TVac, Relation::LeftLater) => {
                    let direct = ContractionSymbol { flavor: Flavor::Vac, ..*cs };
                    for (_, list) in branches.iter_mut() {
                        list.push(direct);
                    }
                }
                (Flavor::TVac, Relation::LeftEarlier) => {
                    // <T(a b)>0 = (-1)^(pa pb) <b a>0 when b is later.
                    let fermi = cs.left.parity() && cs.right.parity();
                    if let TwoPointClass::Nonzero(_) = two_point_class(&cs.right, &cs.left) {
                        let swapped = ContractionSymbol::new(Flavor::Vac, cs.right, cs.left)?;
                        for (bc, list) in branches.iter_mut() {
                            if fermi {
                                *bc = -bc.clone();
                            }
                            list.push(swapped);
                        }
                    } else {
                        // The reversed plain pair is identically zero.
                        continue 'terms;
                    }
                }
            }
        }
        for (bc, list) in branches {
            out.add_term(Term::new(bc, list, key.word.clone(), key.ordering));
        }
    }
    canonicalize(&out)
}
