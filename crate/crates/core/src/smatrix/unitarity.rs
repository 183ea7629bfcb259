//! Unitarity brackets: order-by-order combinations of chronological and
//! antichronological vertex products that must vanish for real symmetric
//! switching weights.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::coeff::{self, Coeff};
use crate::algebra::wick::{drop_causal, expand_tvac, mul, vacuum_expectation};
use crate::algebra::{Expression, Label};
use crate::error::{Error, Result};
use crate::propagators::smear::QuadratureConfig;
use crate::smatrix::adjoint::{adjoint, average_over_relabelings};
use crate::smatrix::element::{evaluate_vacuum_terms, SmearCache, StateSpec};
use crate::smatrix::series::{
    bilocal_lagrangian, chrono_lagrangians, SlotLabels, SmatrixSeries, SwitchingFunction,
};

#[derive(Debug, Clone, Serialize)]
pub struct UnitarityReport {
    pub order: usize,
    pub causal_zeroed: bool,
    /// Number of canonical terms in the symmetrized bracket; zero is the
    /// exact vanishing statement.
    pub symmetrized_terms: usize,
    pub symbolically_zero: bool,
}

fn swap_map(pairs: &[(Label, Label)]) -> BTreeMap<Label, Label> {
    let mut m = BTreeMap::new();
    for (a, b) in pairs {
        m.insert(*a, *b);
        m.insert(*b, *a);
    }
    m
}

/// Compositions of the given involutions (as label maps), all 2^n of them.
fn relabeling_group(involutions: &[Vec<(Label, Label)>]) -> Vec<BTreeMap<Label, Label>> {
    let mut maps = vec![BTreeMap::new()];
    for inv in involutions {
        let swap = swap_map(inv);
        let mut next = Vec::with_capacity(maps.len() * 2);
        for m in maps {
            let mut composed = m.clone();
            for (k, v) in &swap {
                let target = m.get(v).copied().unwrap_or(*v);
                composed.insert(*k, target);
            }
            next.push(m);
            next.push(composed);
        }
        maps = next;
    }
    maps
}

/// The order-`k` unitarity bracket for a real symmetric switching weight,
/// averaged over the weight-preserving relabelings (each slot's spinor
/// argument swap, and the slot exchange).
///
/// Supported exact statements: the first-order bracket vanishes
/// identically, and the second-order bracket vanishes once every causal
/// pair scalar is set to zero. The second-order bracket with live causal
/// scalars contains antichronological pairs outside this symbol algebra and
/// is evaluated numerically instead (see [`unitarity_defect_numeric`]).
pub fn unitarity_defect(
    k: usize,
    h3: &SwitchingFunction,
    series: &SmatrixSeries,
    zero_causal: bool,
) -> Result<UnitarityReport> {
    if !h3.is_real() {
        return Err(Error::NonRealSwitching(h3.amp));
    }
    if !h3.is_symmetric() {
        return Err(Error::InvalidInput(
            "the exact vanishing statement needs a symmetric switching weight".into(),
        ));
    }
    let slots = &series.slots;
    if slots.len() < k {
        return Err(Error::StateMismatch);
    }
    let bracket = match (k, zero_causal) {
        (1, _) => {
            let t1 = chrono_lagrangians(1, series.mass, &series.charge, &slots[..1], k)?;
            (t1.clone() - adjoint(&t1)?).scale(&coeff::i())
        }
        (2, true) => {
            // With vanishing causal scalars the chronological pair scalars
            // reduce to plain pairs.
            let zero = |e: &Expression| drop_causal(&expand_tvac(e));
            let t2 = zero(&chrono_lagrangians(2, series.mass, &series.charge, &slots[..2], k)?);
            let l_a = bilocal_lagrangian(series.mass, &series.charge, slots[0].x, slots[0].y, slots[0].z)?;
            let l_b = bilocal_lagrangian(series.mass, &series.charge, slots[1].x, slots[1].y, slots[1].z)?;
            let middle = mul(&l_a, &adjoint(&l_b)?)?;
            let weight = coeff::i_pow(2) * coeff::inv_factorial(2);
            (t2.clone() - middle.scale(&coeff::int(2)) + adjoint(&t2)?).scale(&weight)
        }
        (2, false) => {
            return Err(Error::InvalidInput(
                "the live second-order bracket is numeric; use unitarity_defect_numeric".into(),
            ))
        }
        _ => {
            return Err(Error::OrderCapExceeded { requested: k, cap: 2 });
        }
    };
    // Average over the relabelings that leave the switching weights fixed.
    let mut involutions: Vec<Vec<(Label, Label)>> =
        slots[..k].iter().map(|s| vec![(s.x, s.y)]).collect();
    if k == 2 {
        involutions.push(vec![
            (slots[0].x, slots[1].x),
            (slots[0].y, slots[1].y),
            (slots[0].z, slots[1].z),
        ]);
    }
    let group = relabeling_group(&involutions);
    let averaged = average_over_relabelings(&bracket, &group)?;
    Ok(UnitarityReport {
        order: k,
        causal_zeroed: zero_causal,
        symmetrized_terms: averaged.len(),
        symbolically_zero: averaged.is_zero(),
    })
}

/// Numeric first-order defect for an arbitrary (possibly asymmetric)
/// switching weight: `<bra, i (L - L*) ket>` with the weight map given by
/// the slot labels.
pub fn unitarity_defect_numeric(
    h3: &SwitchingFunction,
    series: &SmatrixSeries,
    bra: &StateSpec,
    ket: &StateSpec,
    cfg: &QuadratureConfig,
    cache: &mut SmearCache,
) -> Result<(Complex64, f64)> {
    let slot: SlotLabels = series.slots[0];
    let t1 = chrono_lagrangians(1, series.mass, &series.charge, &[slot], 1)?;
    let defect = (t1.clone() - adjoint(&t1)?).scale(&coeff::i());
    let mut registry = series.registry.clone();
    let mut weights = BTreeMap::new();
    weights.insert(slot.x, h3.gx);
    weights.insert(slot.y, h3.gy);
    weights.insert(slot.z, h3.gz);
    let bra_word = state_word(bra, series.mass, &mut registry, &mut weights)?;
    let ket_word = state_word(ket, series.mass, &mut registry, &mut weights)?;
    let sandwiched = mul(
        &mul(&Expression::word(bra_word), &defect)?,
        &Expression::word(ket_word),
    )?;
    let vac = vacuum_expectation(&sandwiched)?;
    let (v, e) = evaluate_vacuum_terms(&vac, &weights, cfg, cache)?;
    Ok((v * h3.amp, e * h3.amp.norm()))
}

fn state_word(
    state: &StateSpec,
    mass: crate::algebra::Mass,
    registry: &mut crate::algebra::LabelRegistry,
    weights: &mut BTreeMap<Label, crate::propagators::TestFunction>,
) -> Result<Vec<crate::algebra::FieldSymbol>> {
    use crate::algebra::FieldSymbol;
    let mut word = Vec::new();
    for (comp, w) in &state.bars {
        let l = registry.fresh();
        word.push(FieldSymbol::spinor_bar(mass, *comp, l)?);
        weights.insert(l, *w);
    }
    for (comp, w) in &state.psis {
        let l = registry.fresh();
        word.push(FieldSymbol::spinor(mass, *comp, l)?);
        weights.insert(l, *w);
    }
    for (comp, w) in &state.photons {
        let l = registry.fresh();
        word.push(FieldSymbol::em(*comp, l)?);
        weights.insert(l, *w);
    }
    Ok(word)
}

/// Scales a coefficient into the charge power used by the bracket weights.
#[allow(dead_code)]
fn charge_power(charge: &Coeff, n: usize) -> Coeff {
    (0..n).fold(coeff::one(), |acc, _| acc * charge.clone())
}
