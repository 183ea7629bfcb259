//! Numeric causal-factorization defect and the first-order smallness
//! report.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::wick::{mul, vacuum_expectation};
use crate::algebra::Expression;
use crate::error::{Error, Result};
use crate::propagators::smear::QuadratureConfig;
use crate::smatrix::element::{
    evaluate_vacuum_terms, matrix_element, matrix_element_with_assignment, SmearCache, StateSpec,
};
use crate::smatrix::series::{smatrix_terms, SmatrixSeries, SwitchingFunction};

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    /// Whether the second weight really is the later one; a swapped call is
    /// evaluated and reported, since it demonstrates that the ordering
    /// matters, but the vanishing claim only covers the ordered case.
    pub ordered: bool,
    /// Element of the series with the summed switching function.
    pub combined_re: f64,
    pub combined_im: f64,
    /// Element of the ordered product of the two partial series.
    pub product_re: f64,
    pub product_im: f64,
    pub defect_abs: f64,
    pub defect_rel: f64,
    pub quadrature_error: f64,
    /// Largest Gaussian tail mass across the center separation.
    pub tail_bound: f64,
}

/// Demands disjoint effective time supports (six widths); returns whether
/// `later` really is later, and the worst tail mass across the separation.
fn check_separated(earlier: &SwitchingFunction, later: &SwitchingFunction) -> Result<(bool, f64)> {
    let (e_lo, e_hi) = earlier.time_support(6.0);
    let (l_lo, l_hi) = later.time_support(6.0);
    let ordered = l_lo > e_hi;
    if !ordered && e_lo <= l_hi {
        let gap = (l_lo - e_hi).max(e_lo - l_hi);
        if gap <= 0.0 {
            return Err(Error::SupportsOverlap { gap });
        }
    }
    let mut tail: f64 = 0.0;
    for a in [&earlier.gx, &earlier.gy, &earlier.gz] {
        for b in [&later.gx, &later.gy, &later.gz] {
            let d = b.center[0] - a.center[0];
            let s2 = a.widths[0] * a.widths[0] + b.widths[0] * b.widths[0];
            tail = tail.max((-d * d / (2.0 * s2)).exp());
        }
    }
    Ok((ordered, tail))
}

/// `<bra, (S_N(h1 + h2) - S_N(h2) S_N(h1)) ket>` with the supports of `h2`
/// later than those of `h1`, compared order by order in the total switching
/// degree up to `n`.
pub fn factorization_defect(
    h1: &SwitchingFunction,
    h2: &SwitchingFunction,
    n: usize,
    bra: &StateSpec,
    ket: &StateSpec,
    series: &SmatrixSeries,
    cfg: &QuadratureConfig,
    cache: &mut SmearCache,
) -> Result<FactorizationReport> {
    let (ordered, tail_bound) = check_separated(h1, h2)?;
    // Combined switching function: expand multilinearly over the slotwise
    // assignments of h1 or h2.
    let mut combined = Complex64::ZERO;
    let mut combined_err = 0.0;
    let mut identity_value = Complex64::ZERO;
    for mask in 0u32..(1 << n) {
        let assign: Vec<&SwitchingFunction> =
            (0..n).map(|i| if mask >> i & 1 == 0 { h1 } else { h2 }).collect();
        let me = matrix_element_with_assignment(bra, ket, series, &assign, n, cfg, cache)?;
        // The multilinear expansion at order m uses only the first m slots;
        // summing the full element over all 2^n masks overcounts lower
        // orders by the number of unconstrained slots, so sum per order.
        for cv in &me.per_class {
            let unconstrained = n - cv.order;
            let weight = 1.0 / (1u64 << unconstrained) as f64;
            combined += cv.value * weight;
            combined_err += cv.error * weight;
            if cv.order == 0 {
                identity_value += cv.value * weight;
            }
        }
    }
    // Ordered product: the h2 series times the h1 series on disjoint slot
    // blocks, truncated at total order n. The second factor reuses the same
    // series with its labels shifted past the first block.
    let series_a = smatrix_terms(n, series.mass, &series.charge, n.max(1))?;
    let offset = series_a.registry.issued();
    let shift = |e: &Expression| e.relabel(&|l| crate::algebra::Label(l.0 + offset));
    let mut registry = series_a.registry.clone();
    for _ in 0..offset {
        registry.fresh(); // reserve the shifted block
    }
    let mut weights = std::collections::BTreeMap::new();
    for slot in &series_a.slots {
        weights.insert(slot.x, h2.gx);
        weights.insert(slot.y, h2.gy);
        weights.insert(slot.z, h2.gz);
        weights.insert(crate::algebra::Label(slot.x.0 + offset), h1.gx);
        weights.insert(crate::algebra::Label(slot.y.0 + offset), h1.gy);
        weights.insert(crate::algebra::Label(slot.z.0 + offset), h1.gz);
    }
    let bra_word = {
        let mut w = std::collections::BTreeMap::new();
        let word = state_word(bra, series.mass, &mut registry, &mut w)?;
        weights.extend(w);
        word
    };
    let ket_word = {
        let mut w = std::collections::BTreeMap::new();
        let word = state_word(ket, series.mass, &mut registry, &mut w)?;
        weights.extend(w);
        word
    };
    let bra_expr = Expression::word(bra_word);
    let ket_expr = Expression::word(ket_word);
    let mut product = Complex64::ZERO;
    let mut product_err = 0.0;
    for ta in &series_a.terms {
        for tb in &series_a.terms {
            if ta.order + tb.order > n {
                continue;
            }
            let amp = h2.amp.powu(ta.order as u32) * h1.amp.powu(tb.order as u32);
            if amp == Complex64::ZERO && ta.order + tb.order > 0 {
                continue;
            }
            let op = mul(&ta.expr, &shift(&tb.expr))?;
            let sandwiched = mul(&mul(&bra_expr, &op)?, &ket_expr)?;
            let vac = vacuum_expectation(&sandwiched)?;
            let (v, e) = evaluate_vacuum_terms(&vac, &weights, cfg, cache)?;
            product += v * amp;
            product_err += e * amp.norm();
        }
    }
    let defect_abs = (combined - product).norm();
    let scale =
        (combined - identity_value).norm().max((product - identity_value).norm());
    let defect_rel = if scale > 0.0 { defect_abs / scale } else { defect_abs };
    Ok(FactorizationReport {
        ordered,
        combined_re: combined.re,
        combined_im: combined.im,
        product_re: product.re,
        product_im: product.im,
        defect_abs,
        defect_rel,
        quadrature_error: combined_err + product_err,
        tail_bound,
    })
}

fn state_word(
    state: &StateSpec,
    mass: crate::algebra::Mass,
    registry: &mut crate::algebra::LabelRegistry,
    weights: &mut std::collections::BTreeMap<crate::algebra::Label, crate::propagators::TestFunction>,
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

#[derive(Debug, Clone, Serialize)]
pub struct SmallnessReport {
    /// Residual magnitudes per amplitude scale.
    pub lambdas: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Fitted scaling exponents between successive scales.
    pub exponents: Vec<f64>,
    pub residual_at_zero: f64,
}

/// Scaling of the residual after subtracting every order below `k_floor`
/// from the truncated series, as the switching amplitude scales.
#[allow(clippy::too_many_arguments)]
pub fn first_order_smallness_report(
    bra: &StateSpec,
    ket: &StateSpec,
    series: &SmatrixSeries,
    h3: &SwitchingFunction,
    k_floor: usize,
    lambdas: &[f64],
    cfg: &QuadratureConfig,
    cache: &mut SmearCache,
) -> Result<SmallnessReport> {
    let n = series.max_order();
    let mut residuals = Vec::new();
    for &l in lambdas {
        let scaled = h3.scale_amp(Complex64::new(l, 0.0));
        let me = matrix_element(bra, ket, series, &scaled, n, cfg, cache)?;
        let residual: Complex64 =
            me.per_class.iter().filter(|c| c.order >= k_floor).map(|c| c.value).sum();
        residuals.push(residual.norm());
    }
    let mut exponents = Vec::new();
    for i in 0..residuals.len().saturating_sub(1) {
        let (r0, r1) = (residuals[i], residuals[i + 1]);
        let (l0, l1) = (lambdas[i], lambdas[i + 1]);
        if r0 > 0.0 && r1 > 0.0 && l0 != l1 {
            exponents.push((r0 / r1).ln() / (l0 / l1).ln());
        }
    }
    // Zero amplitude: every weighted order vanishes without quadrature.
    let me0 = matrix_element(bra, ket, series, &h3.scale_amp(Complex64::ZERO), n, cfg, cache)?;
    let residual_at_zero: Complex64 =
        me0.per_class.iter().filter(|c| c.order >= k_floor).map(|c| c.value).sum();
    Ok(SmallnessReport {
        lambdas: lambdas.to_vec(),
        residuals,
        exponents,
        residual_at_zero: residual_at_zero.norm(),
    })
}
