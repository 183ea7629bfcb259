//! The interaction vertex and the scattering series organized by
//! contraction pattern.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::algebra::coeff::{self, Coeff};
use crate::algebra::expr::{ContractionSymbol, Expression, Ordering, Term, TermKey};
use crate::algebra::fields::{FieldSymbol, Label, LabelRegistry, Mass, Species};
use crate::algebra::gamma::{gamma, GAMMA};
use crate::causal::{chrono_bilocal_normal, chrono_bose_wick, BilocalFactor};
use crate::error::{Error, Result};
use crate::propagators::TestFunction;

/// Default series truncation: the pattern count per order grows like a
/// factorial times `16^n`, and three is where desk-scale evaluation stops.
pub const DEFAULT_ORDER_CAP: usize = 3;

/// Rapidly decreasing three-point switching weight: an overall amplitude
/// times one Gaussian per argument slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchingFunction {
    pub amp: Complex64,
    pub gx: TestFunction,
    pub gy: TestFunction,
    pub gz: TestFunction,
}

impl SwitchingFunction {
    pub fn new(amp: Complex64, gx: TestFunction, gy: TestFunction, gz: TestFunction) -> Self {
        SwitchingFunction { amp, gx, gy, gz }
    }

    /// Symmetric under exchange of the first two arguments.
    pub fn is_symmetric(&self) -> bool {
        self.gx == self.gy
    }

    /// Real-valued: all amplitudes real.
    pub fn is_real(&self) -> bool {
        self.amp.im == 0.0 && self.gx.amp.im == 0.0 && self.gy.amp.im == 0.0 && self.gz.amp.im == 0.0
    }

    pub fn scale_amp(&self, s: Complex64) -> SwitchingFunction {
        SwitchingFunction { amp: self.amp * s, ..*self }
    }

    /// Effective time support, `k` widths around the centers of all three
    /// slot Gaussians.
    pub fn time_support(&self, k: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for g in [&self.gx, &self.gy, &self.gz] {
            lo = lo.min(g.center[0] - k * g.widths[0]);
            hi = hi.max(g.center[0] + k * g.widths[0]);
        }
        (lo, hi)
    }
}

/// Labels of one interaction slot, in vertex argument order: conjugate
/// spinor, spinor, photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotLabels {
    pub x: Label,
    pub y: Label,
    pub z: Label,
}

/// One cross-slot contraction of a series term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WickPair {
    /// Conjugate spinor of the first slot paired with the spinor of the
    /// second.
    BarPsi(usize, usize),
    /// Spinor of the first slot paired with the conjugate spinor of the
    /// second.
    PsiBar(usize, usize),
    /// Photon pair between two slots.
    Photon(usize, usize),
}

/// The contraction pattern of a series term: which slot fields pair up.
pub type WickClass = Vec<WickPair>;

/// All terms of one order sharing a contraction pattern.
#[derive(Debug, Clone)]
pub struct SeriesTerm {
    pub order: usize,
    pub class: WickClass,
    pub expr: Expression,
}

/// The truncated scattering series: the identity, the single-vertex term
/// and the pattern-classified higher orders, over a fixed slot-label block.
#[derive(Debug, Clone)]
pub struct SmatrixSeries {
    pub mass: Mass,
    pub charge: Coeff,
    pub slots: Vec<SlotLabels>,
    pub terms: Vec<SeriesTerm>,
    pub registry: LabelRegistry,
}

/// The interaction vertex: charge times the gamma contraction of a normal
/// conjugate-spinor/spinor pair at two points with a photon at a third.
/// Coincident arguments are the forbidden point-localized limit.
pub fn bilocal_lagrangian(
    mass: Mass,
    charge: &Coeff,
    x: Label,
    y: Label,
    z: Label,
) -> Result<Expression> {
    if x == y || y == z || x == z {
        let dup = if x == y { x } else { z };
        return Err(Error::CoincidentLabels(dup));
    }
    let mut e = Expression::zero();
    for mu in 0..4usize {
        for alpha in 1..=4u8 {
            for beta in 1..=4u8 {
                let entry = gamma(mu, alpha, beta);
                if entry.is_zero() {
                    continue;
                }
                let word = vec![
                    FieldSymbol::spinor_bar(mass, alpha, x)?,
                    FieldSymbol::spinor(mass, beta, y)?,
                    FieldSymbol::em(mu as u8, z)?,
                ];
                e.add_term(Term::new(charge.clone() * entry.coeff(), vec![], word, Ordering::Normal));
            }
        }
    }
    Ok(e)
}

/// The chronological product of `n` interaction vertices over the given
/// slots: gamma-contracted photon and normal-bilocal chronological products
/// with the `charge^n` weight. Grows like `16^n` times the pattern count;
/// refused above `cap`.
pub fn chrono_lagrangians(
    n: usize,
    mass: Mass,
    charge: &Coeff,
    slots: &[SlotLabels],
    cap: usize,
) -> Result<Expression> {
    if n > cap {
        return Err(Error::OrderCapExceeded { requested: n, cap });
    }
    assert!(slots.len() >= n);
    let mut e = Expression::zero();
    let charge_n = (0..n).fold(coeff::one(), |acc, _| acc * charge.clone());
    for_each_gamma_assignment(n, &mut |assign| {
        let mut gamma_coeff = charge_n.clone();
        for (mu, alpha, beta) in assign {
            gamma_coeff = gamma_coeff * gamma(*mu, *alpha, *beta).coeff();
        }
        let photon_word: Vec<FieldSymbol> = assign
            .iter()
            .zip(slots)
            .map(|((mu, _, _), s)| FieldSymbol::em(*mu as u8, s.z).unwrap())
            .collect();
        let factors: Vec<BilocalFactor> = assign
            .iter()
            .zip(slots)
            .map(|((_, alpha, beta), s)| {
                BilocalFactor::new(
                    FieldSymbol::spinor_bar(mass, *alpha, s.x).unwrap(),
                    FieldSymbol::spinor(mass, *beta, s.y).unwrap(),
                )
                .unwrap()
            })
            .collect();
        let photons = chrono_bose_wick(&photon_word).expect("photon word");
        let fermions = chrono_bilocal_normal(&factors).expect("bilocal word");
        // Fermions commute with photons and never contract with them, so
        // the product of the two normal forms is a single normal word.
        for (kf, cf) in fermions.iter() {
            for (kp, cp) in photons.iter() {
                let mut word = kf.word.clone();
                word.extend(kp.word.iter().copied());
                let mut contractions = kf.contractions.clone();
                contractions.extend(kp.contractions.iter().copied());
                e.add_term(Term::new(
                    gamma_coeff.clone() * cf.clone() * cp.clone(),
                    contractions,
                    word,
                    Ordering::Normal,
                ));
            }
        }
    });
    Ok(e)
}

/// Visits every assignment of nonzero gamma entries `(mu, alpha, beta)` to
/// the `n` slots.
fn for_each_gamma_assignment(n: usize, f: &mut impl FnMut(&[(usize, u8, u8)])) {
    let mut nonzero = Vec::new();
    for mu in 0..4usize {
        for (a, row) in GAMMA[mu].iter().enumerate() {
            for (b, entry) in row.iter().enumerate() {
                if !entry.is_zero() {
                    nonzero.push((mu, (a + 1) as u8, (b + 1) as u8));
                }
            }
        }
    }
    let mut assign = vec![nonzero[0]; n];
    fn rec(
        depth: usize,
        n: usize,
        nonzero: &[(usize, u8, u8)],
        assign: &mut Vec<(usize, u8, u8)>,
        f: &mut impl FnMut(&[(usize, u8, u8)]),
    ) {
        if depth == n {
            f(assign);
            return;
        }
        for &choice in nonzero {
            assign[depth] = choice;
            rec(depth + 1, n, nonzero, assign, f);
        }
    }
    rec(0, n, &nonzero, &mut assign, f);
}

/// Classifies a term's contractions by slot pattern. Returns `None` when a
/// contraction does not join two slot fields (cannot happen for the series
/// expressions themselves).
fn classify(contractions: &[ContractionSymbol], slots: &[SlotLabels]) -> Option<WickClass> {
    let role = |s: &FieldSymbol| -> Option<(usize, Species)> {
        slots.iter().position(|sl| sl.x == s.label || sl.y == s.label || sl.z == s.label).map(
            |i| (i, s.kind.species),
        )
    };
    let mut class = Vec::new();
    for c in contractions {
        let (i, si) = role(&c.left)?;
        let (j, sj) = role(&c.right)?;
        let pair = match (si, sj) {
            (Species::SpinorBar, Species::Spinor) => WickPair::BarPsi(i, j),
            (Species::Spinor, Species::SpinorBar) => WickPair::PsiBar(i, j),
            (Species::Em, Species::Em) => WickPair::Photon(i.min(j), i.max(j)),
            _ => return None,
        };
        class.push(pair);
    }
    class.sort();
    Some(class)
}

/// Builds the series up to order `n_max`: the identity term, the
/// single-vertex term, and the pattern-classified expansion of each higher
/// order, each carrying its `i^m / m!` weight.
pub fn smatrix_terms(
    n_max: usize,
    mass: Mass,
    charge: &Coeff,
    cap: usize,
) -> Result<SmatrixSeries> {
    if n_max > cap {
        return Err(Error::OrderCapExceeded { requested: n_max, cap });
    }
    let mut registry = LabelRegistry::new();
    let slots: Vec<SlotLabels> = (0..n_max.max(1))
        .map(|_| {
            let [x, y, z] = registry.fresh_n();
            SlotLabels { x, y, z }
        })
        .collect();
    let mut terms = vec![SeriesTerm { order: 0, class: Vec::new(), expr: Expression::one() }];
    for m in 1..=n_max {
        let weight = coeff::i_pow(m as u32) * coeff::inv_factorial(m as u32);
        let full = chrono_lagrangians(m, mass, charge, &slots[..m], cap)?.scale(&weight);
        // Split by contraction pattern.
        let mut by_class: BTreeMap<WickClass, Expression> = BTreeMap::new();
        for (k, c) in full.iter() {
            let class = classify(&k.contractions, &slots).expect("series contractions join slots");
            by_class.entry(class).or_default().add_term(Term {
                coeff: c.clone(),
                key: TermKey::new(k.contractions.clone(), k.word.clone(), k.ordering),
            });
        }
        for (class, expr) in by_class {
            terms.push(SeriesTerm { order: m, class, expr });
        }
    }
    Ok(SmatrixSeries { mass, charge: charge.clone(), slots, terms, registry })
}

impl SmatrixSeries {
    pub fn max_order(&self) -> usize {
        self.terms.iter().map(|t| t.order).max().unwrap_or(0)
    }

    /// Terms of one order.
    pub fn order_terms(&self, m: usize) -> impl Iterator<Item = &SeriesTerm> {
        self.terms.iter().filter(move |t| t.order == m)
    }

    /// The distinct contraction patterns at one order.
    pub fn classes_at(&self, m: usize) -> Vec<&WickClass> {
        self.order_terms(m).map(|t| &t.class).collect()
    }
}
