//! Vacuum matrix elements of series terms between smeared multi-field
//! states.
//!
//! States, switching weights and two-point kernels are all Gaussian
//! convolution chains: once the operator algebra reduces a sandwiched term
//! to pure contraction products, every label carries exactly one Gaussian
//! weight and appears in exactly one contraction, so the value factorizes
//! into smeared two-point evaluations of correlated weight pairs.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::algebra::coeff;
use crate::algebra::expr::{ContractionSymbol, Expression};
use crate::algebra::fields::{two_point_class, FieldSymbol, Label, LabelRegistry, Mass, TwoPointClass};
use crate::algebra::wick::{mul, vacuum_expectation};
use crate::error::{Error, Result};
use crate::propagators::smear::{QuadratureConfig, RetardedRoute, SmearResult};
use crate::propagators::twopoint::smear_two_point_entry;
use crate::propagators::TestFunction;
use crate::smatrix::series::{SmatrixSeries, SwitchingFunction, WickClass};

/// A smeared multi-field state: conjugate-spinor, spinor and photon factors
/// in that order, each with a component index and a Gaussian weight.
#[derive(Debug, Clone, Default)]
pub struct StateSpec {
    pub bars: Vec<(u8, TestFunction)>,
    pub psis: Vec<(u8, TestFunction)>,
    pub photons: Vec<(u8, TestFunction)>,
}

impl StateSpec {
    pub fn vacuum() -> Self {
        StateSpec::default()
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.bars.len(), self.psis.len(), self.photons.len()]
    }

    fn word(
        &self,
        mass: Mass,
        registry: &mut LabelRegistry,
        weights: &mut BTreeMap<Label, TestFunction>,
    ) -> Result<Vec<FieldSymbol>> {
        let mut word = Vec::new();
        for (comp, w) in &self.bars {
            let l = registry.fresh();
            word.push(FieldSymbol::spinor_bar(mass, *comp, l)?);
            weights.insert(l, *w);
        }
        for (comp, w) in &self.psis {
            let l = registry.fresh();
            word.push(FieldSymbol::spinor(mass, *comp, l)?);
            weights.insert(l, *w);
        }
        for (comp, w) in &self.photons {
            let l = registry.fresh();
            word.push(FieldSymbol::em(*comp, l)?);
            weights.insert(l, *w);
        }
        Ok(word)
    }
}

/// The selection rule for the contraction-free part of an order: it cannot
/// connect the states once the order exceeds the available factor count of
/// any species.
pub fn selection_rule_violated(order: usize, bra: &StateSpec, ket: &StateSpec) -> bool {
    let b = bra.counts();
    let k = ket.counts();
    (0..3).any(|j| order > b[j] + k[j])
}

/// Smear cache key: the contraction symbol plus the bit patterns of both
/// endpoint weights, so evaluations are shared across assignments and
/// repeated calls.
type CacheKey = (ContractionSymbol, [u64; 10], [u64; 10]);

pub type SmearCache = BTreeMap<CacheKey, SmearResult>;

fn weight_key(w: &TestFunction) -> [u64; 10] {
    let mut k = [0u64; 10];
    k[0] = w.amp.re.to_bits();
    k[1] = w.amp.im.to_bits();
    for i in 0..4 {
        k[2 + i] = w.center[i].to_bits();
        k[6 + i] = w.widths[i].to_bits();
    }
    k
}

/// Value of one contraction scalar under the weight map: the two-point
/// kernel smeared against the correlation of the endpoint weights.
fn contraction_value(
    cs: &ContractionSymbol,
    weights: &BTreeMap<Label, TestFunction>,
    cfg: &QuadratureConfig,
    cache: &mut SmearCache,
) -> Result<SmearResult> {
    let wl = weights
        .get(&cs.left.label)
        .ok_or_else(|| Error::InvalidInput(format!("no weight for label {}", cs.left.label)))?;
    let wr = weights
        .get(&cs.right.label)
        .ok_or_else(|| Error::InvalidInput(format!("no weight for label {}", cs.right.label)))?;
    let key = (*cs, weight_key(wl), weight_key(wr));
    if let Some(v) = cache.get(&key) {
        return Ok(*v);
    }
    let pair = match two_point_class(&cs.left, &cs.right) {
        TwoPointClass::Nonzero(p) => p,
        TwoPointClass::Zero => return Err(Error::ZeroClassPair),
    };
    let corr = wl.correlate(wr);
    let v = smear_two_point_entry(
        pair,
        cs.left.kind.mass_f64(),
        cs.flavor,
        cs.left.component,
        cs.right.component,
        &corr,
        cfg,
        RetardedRoute::Auto,
    )?;
    cache.insert(key, v);
    Ok(v)
}

/// Numeric value of a fully reduced vacuum expression (scalar terms only)
/// under the weight map.
pub(crate) fn evaluate_vacuum_terms(
    vac: &Expression,
    weights: &BTreeMap<Label, TestFunction>,
    cfg: &QuadratureConfig,
    cache: &mut SmearCache,
) -> Result<(Complex64, f64)> {
    let mut total = Complex64::ZERO;
    let mut err = 0.0;
    for (k, c) in vac.iter() {
        debug_assert!(k.word.is_empty());
        let mut prod = coeff::to_c64(c);
        let mut values: Vec<SmearResult> = Vec::with_capacity(k.contractions.len());
        let mut zero = false;
        for cs in &k.contractions {
            let v = contraction_value(cs, weights, cfg, cache)?;
            if v.value() == Complex64::ZERO && v.error == 0.0 {
                zero = true;
                break;
            }
            values.push(v);
        }
        if zero {
            continue;
        }
        for v in &values {
            prod *= v.value();
        }
        // First-order error propagation through the product.
        let mut term_err = 0.0;
        for i in 0..values.len() {
            let mut partial = coeff::to_c64(c).norm();
            for (j, v) in values.iter().enumerate() {
                partial *= if i == j { v.error } else { v.value().norm() };
            }
            term_err += partial;
        }
        total += prod;
        err += term_err;
    }
    Ok((total, err))
}

/// Per-class contribution to a matrix element.
#[derive(Debug, Clone)]
pub struct ClassValue {
    pub order: usize,
    pub class: WickClass,
    /// Number of scalar terms surviving the vacuum functional.
    pub symbolic_terms: usize,
    pub value: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct MatrixElement {
    pub value: Complex64,
    pub error: f64,
    pub per_class: Vec<ClassValue>,
}

impl MatrixElement {
    /// Sum of the contributions of one order.
    pub fn order_value(&self, m: usize) -> Complex64 {
        self.per_class.iter().filter(|c| c.order == m).map(|c| c.value).sum()
    }
}

/// Matrix element with one switching function per slot (the multilinear
/// expansion of a sum of switching functions assigns them slotwise).
/// `max_order` truncates the series.
#[allow(clippy::too_many_arguments)]
pub fn matrix_element_with_assignment(
    bra: &StateSpec,
    ket: &StateSpec,
    series: &SmatrixSeries,
    assign: &[&SwitchingFunction],
    max_order: usize,
    cfg: &QuadratureConfig,
    cache: &mut SmearCache,
) -> Result<MatrixElement> {
    if assign.len() < max_order.min(series.max_order()) {
        return Err(Error::StateMismatch);
    }
    let mut registry = series.registry.clone();
    let mut weights: BTreeMap<Label, TestFunction> = BTreeMap::new();
    for (i, slot) in series.slots.iter().enumerate() {
        if i < assign.len() {
            weights.insert(slot.x, assign[i].gx);
            weights.insert(slot.y, assign[i].gy);
            weights.insert(slot.z, assign[i].gz);
        }
    }
    let bra_word = bra.word(series.mass, &mut registry, &mut weights)?;
    let ket_word = ket.word(series.mass, &mut registry, &mut weights)?;
    let bra_expr = Expression::word(bra_word);
    let ket_expr = Expression::word(ket_word);

    let mut per_class = Vec::new();
    let mut total = Complex64::ZERO;
    let mut error = 0.0;
    for term in &series.terms {
        if term.order > max_order {
            continue;
        }
        let amp_factor: Complex64 = (0..term.order).map(|i| assign[i].amp).product();
        if amp_factor == Complex64::ZERO && term.order > 0 {
            continue;
        }
        let sandwiched = mul(&mul(&bra_expr, &term.expr)?, &ket_expr)?;
        let vac = vacuum_expectation(&sandwiched)?;
        let (v, e) = evaluate_vacuum_terms(&vac, &weights, cfg, cache)?;
        let value = v * amp_factor;
        let err = e * amp_factor.norm();
        per_class.push(ClassValue {
            order: term.order,
            class: term.class.clone(),
            symbolic_terms: vac.len(),
            value,
            error: err,
        });
        total += value;
        error += err;
    }
    Ok(MatrixElement { value: total, error, per_class })
}

/// Certified norm bound on the orders at or above `k_floor` of a matrix
/// element: the triangle inequality over the reduced scalar terms with each
/// pair scalar replaced by its verified inequality bound. A finite bound
/// that dominates the evaluated residual is the smallness statement for the
/// higher series orders.
pub fn matrix_element_norm_bound(
    bra: &StateSpec,
    ket: &StateSpec,
    series: &SmatrixSeries,
    h3: &SwitchingFunction,
    k_floor: usize,
    max_order: usize,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let mut registry = series.registry.clone();
    let mut weights: BTreeMap<Label, TestFunction> = BTreeMap::new();
    for slot in series.slots.iter() {
        weights.insert(slot.x, h3.gx);
        weights.insert(slot.y, h3.gy);
        weights.insert(slot.z, h3.gz);
    }
    let bra_word = bra.word(series.mass, &mut registry, &mut weights)?;
    let ket_word = ket.word(series.mass, &mut registry, &mut weights)?;
    let bra_expr = Expression::word(bra_word);
    let ket_expr = Expression::word(ket_word);
    let mut bound = 0.0;
    for term in &series.terms {
        if term.order < k_floor || term.order > max_order {
            continue;
        }
        let amp_factor = h3.amp.norm().powi(term.order as i32);
        let sandwiched = mul(&mul(&bra_expr, &term.expr)?, &ket_expr)?;
        let vac = vacuum_expectation(&sandwiched)?;
        for (k, c) in vac.iter() {
            let mut prod = coeff::to_c64(c).norm();
            for cs in &k.contractions {
                let pair = match two_point_class(&cs.left, &cs.right) {
                    TwoPointClass::Nonzero(p) => p,
                    TwoPointClass::Zero => return Err(Error::ZeroClassPair),
                };
                let wl = weights.get(&cs.left.label).ok_or(Error::StateMismatch)?;
                let wr = weights.get(&cs.right.label).ok_or(Error::StateMismatch)?;
                prod *= crate::propagators::bounds::pair_entry_norm_bound(
                    pair,
                    cs.left.kind.mass_f64(),
                    cs.flavor,
                    cs.left.component,
                    cs.right.component,
                    wl,
                    wr,
                    cfg.contour_shift,
                );
            }
            bound += prod * amp_factor;
        }
    }
    Ok(bound)
}

/// Matrix element with a single switching function on every slot.
pub fn matrix_element(
    bra: &StateSpec,
    ket: &StateSpec,
    series: &SmatrixSeries,
    h3: &SwitchingFunction,
    max_order: usize,
    cfg: &QuadratureConfig,
    cache: &mut SmearCache,
) -> Result<MatrixElement> {
    let assign: Vec<&SwitchingFunction> = series.slots.iter().map(|_| h3).collect();
    matrix_element_with_assignment(bra, ket, series, &assign, max_order, cfg, cache)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff;
    use crate::smatrix::series::smatrix_terms;

    fn gauss(c0: f64, spread: f64) -> TestFunction {
        TestFunction::new(Complex64::ONE, [c0, 0.0, 0.0, 0.0], [spread, 1.0, 1.0, 1.0]).unwrap()
    }

    fn switching() -> SwitchingFunction {
        SwitchingFunction::new(Complex64::ONE, gauss(0.2, 0.4), gauss(-0.1, 0.4), gauss(0.0, 0.5))
    }

    #[test]
    fn identity_element_between_vacua_is_one() {
        let series = smatrix_terms(0, Mass::from_integer(1), &coeff::one(), 3).unwrap();
        let mut cache = SmearCache::new();
        let me = matrix_element(
            &StateSpec::vacuum(),
            &StateSpec::vacuum(),
            &series,
            &switching(),
            0,
            &QuadratureConfig::default(),
            &mut cache,
        )
        .unwrap();
        assert_eq!(me.value, Complex64::ONE);
        assert_eq!(me.error, 0.0);
    }

    #[test]
    fn first_order_vacuum_element_is_a_symbolic_zero() {
        let series = smatrix_terms(1, Mass::from_integer(1), &coeff::one(), 3).unwrap();
        let mut cache = SmearCache::new();
        let me = matrix_element(
            &StateSpec::vacuum(),
            &StateSpec::vacuum(),
            &series,
            &switching(),
            1,
            &QuadratureConfig::default(),
            &mut cache,
        )
        .unwrap();
        // Nothing was smeared: the vacuum functional kills every term.
        assert!(cache.is_empty());
        let order1 = me.per_class.iter().find(|c| c.order == 1).unwrap();
        assert_eq!(order1.symbolic_terms, 0);
        assert_eq!(me.value, Complex64::ONE);
    }

    #[test]
    fn selection_rule_is_a_symbolic_zero() {
        // One vertex between a single-photon bra and the vacuum: the fermion
        // pair of the vertex cannot contract anywhere.
        let series = smatrix_terms(1, Mass::from_integer(1), &coeff::one(), 3).unwrap();
        let bra = StateSpec { photons: vec![(2, gauss(3.0, 0.4))], ..Default::default() };
        let ket = StateSpec::vacuum();
        assert!(selection_rule_violated(1, &bra, &ket));
        let mut cache = SmearCache::new();
        let me = matrix_element(&bra, &ket, &series, &switching(), 1, &QuadratureConfig::default(), &mut cache)
            .unwrap();
        let order1 = me.per_class.iter().find(|c| c.order == 1).unwrap();
        assert_eq!(order1.symbolic_terms, 0);
        assert!(cache.is_empty());
    }
}
