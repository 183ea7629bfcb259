//! Reproducible verification suites: every identity family and numeric
//! check packaged as pass/fail instances shared by the acceptance tests and
//! the command-line driver.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::coeff;
use crate::algebra::expr::{ContractionSymbol, Expression, Flavor, Term};
use crate::algebra::fields::{FieldSymbol, Label, LabelRegistry, Mass};
use crate::algebra::wick::{canonicalize, expand_tvac, fermi_parity, mul, vacuum_expectation};
use crate::causal::{
    check_factorization, check_factorization_with, check_three_field_chrono,
    check_time_order_identity, chrono_bilocal, chrono_bilocal_normal, chrono_bose,
    chrono_bose_recurrent, chrono_bose_wick, three_field_conditions_hold, BilocalFactor,
    ChronoFamily,
};
use crate::error::Result;
use crate::propagators::quad::{gauss_legendre, gauss_legendre_on};
use crate::propagators::{
    check_bound, smear_dminus, smear_dret, smear_dret_eff, smear_pauli_jordan_eff, BoundId,
    EffectiveTf, QuadratureConfig, RetardedRoute, TestFunction,
};
use crate::sl2c::{lorentz_of, rep_matrix, CMatrix, Complex2x2, SpinLabel};
use crate::smatrix::{
    adjoint, bilocal_lagrangian, factorization_defect, first_order_smallness_report,
    matrix_element, smatrix_terms, unitarity_defect, SmearCache, StateSpec, SwitchingFunction,
    WickPair,
};

/// One checked instance of a suite.
#[derive(Debug, Clone, Serialize)]
pub struct Instance {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl Instance {
    fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Instance { id: id.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub instances: Vec<Instance>,
}

impl Report {
    fn new(suite: &str) -> Self {
        Report { suite: suite.into(), instances: Vec::new() }
    }

    fn push(&mut self, i: Instance) {
        self.instances.push(i);
    }

    pub fn passed(&self) -> bool {
        self.instances.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> usize {
        self.instances.iter().filter(|i| !i.pass).count()
    }
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

fn m1() -> Mass {
    Mass::from_integer(1)
}

// ---------------------------------------------------------------------------
// Fermi parity
// ---------------------------------------------------------------------------

/// The printed two- and three-factor parity table plus the exhaustive
/// inversion-count oracle up to six factors.
pub fn parity_suite() -> Result<Report> {
    let mut r = Report::new("parity");
    // Printed values: all factors odd unless stated.
    let table: [(&str, Vec<usize>, Vec<bool>, bool); 8] = [
        ("id2", vec![0, 1], vec![true, true], false),
        ("swap2-fermi", vec![1, 0], vec![true, true], true),
        ("swap2-mixed", vec![1, 0], vec![true, false], false),
        ("id3", vec![0, 1, 2], vec![true, true, true], false),
        ("swap12", vec![1, 0, 2], vec![true, true, true], true),
        ("swap23", vec![0, 2, 1], vec![true, true, true], true),
        ("cycle312", vec![2, 0, 1], vec![true, true, true], false),
        ("reverse3", vec![2, 1, 0], vec![true, true, true], true),
    ];
    for (id, perm, parities, expect) in table {
        let got = fermi_parity(&perm, &parities)?;
        r.push(Instance::new(
            format!("printed-{id}"),
            got == expect,
            format!("got {got}, expect {expect}"),
        ));
    }
    // Exhaustive oracle.
    let mut checked = 0usize;
    let mut ok = true;
    for n in 0..=6 {
        for perm in permutations(n) {
            for mask in 0..(1u32 << n) {
                let parities: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let mut inv = false;
                for k in 0..n {
                    for l in k + 1..n {
                        if perm[k] > perm[l] && parities[perm[k]] && parities[perm[l]] {
                            inv = !inv;
                        }
                    }
                }
                if fermi_parity(&perm, &parities)? != inv {
                    ok = false;
                }
                checked += 1;
            }
        }
    }
    r.push(Instance::new("inversion-oracle-n<=6", ok, format!("{checked} instances")));
    Ok(r)
}

// ---------------------------------------------------------------------------
// Wick duality
// ---------------------------------------------------------------------------

fn species_symbol(code: u8, comp: u8, l: Label) -> FieldSymbol {
    match code % 4 {
        0 => FieldSymbol::scalar(m1(), l),
        1 => FieldSymbol::em(comp % 4, l).unwrap(),
        2 => FieldSymbol::spinor(m1(), comp % 4 + 1, l).unwrap(),
        _ => FieldSymbol::spinor_bar(m1(), comp % 4 + 1, l).unwrap(),
    }
}

/// Expands the word both ways and checks the compositions are the identity.
fn round_trip_ok(word: &[FieldSymbol]) -> Result<bool> {
    // Plain -> normal form -> re-expand every normal word to plain.
    let normal_form = canonicalize(&Expression::word(word.to_vec()))?;
    let mut back = Expression::zero();
    for (k, c) in normal_form.iter() {
        let inv = crate::algebra::normal_inverse_expand(&k.word)?;
        for (k2, c2) in inv.iter() {
            let mut contractions = k.contractions.clone();
            contractions.extend(k2.contractions.iter().copied());
            back.add_term(Term::new(
                c.clone() * c2.clone(),
                contractions,
                k2.word.clone(),
                k2.ordering,
            ));
        }
    }
    if canonicalize(&back)? != normal_form {
        return Ok(false);
    }
    // Normal -> plain expansion -> canonical form equals the normal word.
    let target = canonicalize(&Expression::normal_word(word.to_vec()))?;
    let inv = crate::algebra::normal_inverse_expand(word)?;
    Ok(canonicalize(&inv)? == target)
}

/// Exhaustive duality over all species patterns up to length four, then
/// randomized component assignments at lengths five and six.
pub fn wick_duality_suite(seed: u64, randomized: usize) -> Result<Report> {
    let mut r = Report::new("wick-duality");
    let mut ok = true;
    let mut count = 0usize;
    for len in 0..=4usize {
        let mut pattern = vec![0u8; len];
        loop {
            let mut reg = LabelRegistry::new();
            let word: Vec<FieldSymbol> = pattern
                .iter()
                .enumerate()
                .map(|(i, &s)| species_symbol(s, (i % 4) as u8, reg.fresh()))
                .collect();
            ok &= round_trip_ok(&word)?;
            count += 1;
            let mut i = 0;
            while i < len {
                pattern[i] += 1;
                if pattern[i] < 4 {
                    break;
                }
                pattern[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    r.push(Instance::new("exhaustive-n<=4", ok, format!("{count} words")));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for case in 0..randomized {
        let len = 5 + case % 2;
        let mut reg = LabelRegistry::new();
        let word: Vec<FieldSymbol> = (0..len)
            .map(|_| species_symbol(rng.random::<u8>(), rng.random::<u8>(), reg.fresh()))
            .collect();
        ok &= round_trip_ok(&word)?;
    }
    r.push(Instance::new("randomized-n5-6", ok, format!("{randomized} words")));
    Ok(r)
}

// ---------------------------------------------------------------------------
// Time ordering and chronological forms
// ---------------------------------------------------------------------------

fn em_word(n: usize) -> Vec<FieldSymbol> {
    let mut reg = LabelRegistry::new();
    (0..n).map(|i| FieldSymbol::em((i % 4) as u8, reg.fresh()).unwrap()).collect()
}

fn bilocal_factors(n: usize) -> Vec<BilocalFactor> {
    let mut reg = LabelRegistry::new();
    (0..n)
        .map(|i| {
            BilocalFactor::new(
                FieldSymbol::spinor_bar(m1(), (i % 4 + 1) as u8, reg.fresh()).unwrap(),
                FieldSymbol::spinor(m1(), ((i + 2) % 4 + 1) as u8, reg.fresh()).unwrap(),
            )
            .unwrap()
        })
        .collect()
}

/// Restriction of every chronological product family to every total order.
pub fn time_order_suite(max_n: usize) -> Result<Report> {
    let mut r = Report::new("time-order");
    for n in 2..=max_n.max(2) {
        let fam = ChronoFamily::Em(em_word(n));
        let mut ok = true;
        for perm in permutations(n) {
            ok &= check_time_order_identity(&fam, &perm)?;
        }
        r.push(Instance::new(
            format!("photon-word-n{n}"),
            ok,
            format!("{} orders", permutations(n).len()),
        ));
    }
    for n in 2..=max_n.min(4).max(2) {
        for (tag, normal) in [("plain", false), ("normal", true)] {
            let f = bilocal_factors(n);
            let fam =
                if normal { ChronoFamily::BilocalNormal(f) } else { ChronoFamily::Bilocal(f) };
            let mut ok = true;
            for perm in permutations(n) {
                ok &= check_time_order_identity(&fam, &perm)?;
            }
            r.push(Instance::new(
                format!("bilocal-{tag}-n{n}"),
                ok,
                format!("{} grouped orders", permutations(n).len()),
            ));
        }
    }
    // Three-field single-contraction form under its parity conditions.
    let mut reg = LabelRegistry::new();
    let fermi = [
        FieldSymbol::spinor(m1(), 1, reg.fresh()).unwrap(),
        FieldSymbol::spinor_bar(m1(), 2, reg.fresh()).unwrap(),
        FieldSymbol::spinor(m1(), 3, reg.fresh()).unwrap(),
    ];
    let bose = [
        FieldSymbol::em(0, reg.fresh()).unwrap(),
        FieldSymbol::em(1, reg.fresh()).unwrap(),
        FieldSymbol::em(2, reg.fresh()).unwrap(),
    ];
    for (tag, fields, parities) in
        [("fermi", &fermi, [true, true, true]), ("bose", &bose, [false, false, false])]
    {
        let mut ok = three_field_conditions_hold(&parities);
        for perm in permutations(3) {
            let p = [perm[0], perm[1], perm[2]];
            ok &= check_three_field_chrono(fields, &p)?;
        }
        r.push(Instance::new(
            format!("three-field-{tag}"),
            ok,
            "6 orders under the parity conditions",
        ));
    }
    // Mixed parities violate the conditions; the checker reports without
    // asserting, so the suite only records how many orders match.
    let mixed = [
        FieldSymbol::spinor(m1(), 1, reg.fresh()).unwrap(),
        FieldSymbol::spinor_bar(m1(), 2, reg.fresh()).unwrap(),
        FieldSymbol::scalar(m1(), reg.fresh()),
    ];
    let mut matches = 0;
    for perm in permutations(3) {
        let p = [perm[0], perm[1], perm[2]];
        if check_three_field_chrono(&mixed, &p)? {
            matches += 1;
        }
    }
    r.push(Instance::new(
        "three-field-mixed-report",
        !three_field_conditions_hold(&[true, true, false]),
        format!("conditions violated; {matches} of 6 orders match (reported, not asserted)"),
    ));
    Ok(r)
}

/// Equivalence of the chronological product forms and the
/// inclusion-exclusion relation between plain and normal block products.
pub fn chrono_forms_suite(max_n: usize) -> Result<Report> {
    let mut r = Report::new("chrono-forms");
    for n in 1..=max_n.max(1) {
        let w = em_word(n);
        let direct = canonicalize(&chrono_bose(&w)?)?;
        let recurrent = canonicalize(&chrono_bose_recurrent(&w)?)?;
        let wick = canonicalize(&expand_tvac(&chrono_bose_wick(&w)?))?;
        r.push(Instance::new(
            format!("photon-forms-n{n}"),
            direct == recurrent && direct == wick,
            "pair sum = recurrence = chronological-pair form after splitting",
        ));
    }
    for n in 1..=max_n.min(4) {
        let f = bilocal_factors(n);
        let mut lhs = Expression::zero();
        for mask in 0u32..(1 << n) {
            let kept: Vec<BilocalFactor> =
                (0..n).filter(|&i| mask >> i & 1 == 0).map(|i| f[i]).collect();
            let removed: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let sign = if removed.len() % 2 == 1 { -coeff::one() } else { coeff::one() };
            let prefix: Vec<ContractionSymbol> = removed
                .iter()
                .map(|&i| ContractionSymbol::new(Flavor::Vac, f[i].bar, f[i].psi).unwrap())
                .collect();
            for (kt, ct) in chrono_bilocal(&kept)?.iter() {
                let mut cs = prefix.clone();
                cs.extend(kt.contractions.iter().copied());
                lhs.add_term(Term::new(
                    sign.clone() * ct.clone(),
                    cs,
                    kt.word.clone(),
                    kt.ordering,
                ));
            }
        }
        let ok = canonicalize(&lhs)? == canonicalize(&chrono_bilocal_normal(&f)?)?;
        r.push(Instance::new(
            format!("inclusion-exclusion-n{n}"),
            ok,
            "alternating block-average sum",
        ));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

fn bipartitions(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let late: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let early: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
        out.push((late, early));
    }
    out
}

/// Exact factorization of every family over every bipartition, plus the
/// vertex products.
pub fn factorization_suite(max_n: usize, vertex_n3: bool) -> Result<Report> {
    let mut r = Report::new("factorization");
    for n in 2..=max_n.max(2) {
        let fam = ChronoFamily::Em(em_word(n));
        let mut ok = true;
        let splits = bipartitions(n);
        for (late, early) in &splits {
            ok &= check_factorization(&fam, late, early)?;
        }
        r.push(Instance::new(
            format!("photon-splits-n{n}"),
            ok,
            format!("{} bipartitions", splits.len()),
        ));
    }
    for n in 2..=max_n.min(4) {
        for (tag, normal) in [("plain", false), ("normal", true)] {
            let f = bilocal_factors(n);
            let fam =
                if normal { ChronoFamily::BilocalNormal(f) } else { ChronoFamily::Bilocal(f) };
            let mut ok = true;
            let splits = bipartitions(n);
            for (late, early) in &splits {
                ok &= check_factorization(&fam, late, early)?;
            }
            r.push(Instance::new(
                format!("bilocal-{tag}-splits-n{n}"),
                ok,
                format!("{} bipartitions", splits.len()),
            ));
        }
    }
    // Vertex products: all splits of two vertices, and the three-vertex
    // splits when requested.
    let mut registry = LabelRegistry::new();
    let slots: Vec<crate::smatrix::SlotLabels> = (0..3)
        .map(|_| {
            let [x, y, z] = registry.fresh_n();
            crate::smatrix::SlotLabels { x, y, z }
        })
        .collect();
    let build = |idx: &[usize]| -> Result<Expression> {
        let sub: Vec<crate::smatrix::SlotLabels> = idx.iter().map(|&i| slots[i]).collect();
        crate::smatrix::chrono_lagrangians(sub.len(), m1(), &coeff::one(), &sub, 3)
    };
    let labels = |i: usize| vec![slots[i].x, slots[i].y, slots[i].z];
    let mut ok = true;
    for (late, early) in bipartitions(2) {
        ok &= check_factorization_with(build, labels, &late, &early)?;
    }
    r.push(Instance::new("vertex-splits-n2", ok, "2 bipartitions"));
    if vertex_n3 {
        let ok = check_factorization_with(build, labels, &[2], &[0, 1])?
            && check_factorization_with(build, labels, &[1, 2], &[0])?;
        r.push(Instance::new("vertex-splits-n3", ok, "late singleton and late pair"));
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Green-function numerics
// ---------------------------------------------------------------------------

/// Frozen reference: the frequency-negative part of the standard Gaussian.
/// The massless value is exactly i/2; the massive value was fixed once by
/// an independent radial rule.
const DMINUS_UNIT_M1_IM: f64 = 0.183_005_512_193_91;

pub fn green_function_suite(cfg: &QuadratureConfig) -> Result<Report> {
    let mut r = Report::new("green-function");
    // Reference values.
    let v0 = smear_dminus(0.0, &TestFunction::unit(), cfg)?;
    r.push(Instance::new(
        "reference-m0",
        (v0.value() - Complex64::new(0.0, 0.5)).norm() < 1e-9,
        format!("{:+.12e} expect +0.5i", v0.value().im),
    ));
    let v1 = smear_dminus(1.0, &TestFunction::unit(), cfg)?;
    r.push(Instance::new(
        "reference-m1",
        (v1.value() - Complex64::new(0.0, DMINUS_UNIT_M1_IM)).norm() < 1e-9,
        format!("{:+.12e} expect {DMINUS_UNIT_M1_IM}i", v1.value().im),
    ));
    // Fundamental solution: twelve cases across the mass grid, mixing the
    // cut route (clear of the origin) and the contour route (wide widths).
    // Clearance stays in the six-to-seven width range: far enough for the
    // sharp cut, close enough that the target value beats roundoff.
    let kg_cases: [(f64, f64, [f64; 3]); 4] = [
        (2.4, 0.38, [0.9, 1.0, 1.1]),
        (3.0, 0.5, [1.2, 0.8, 1.0]),
        (1.6, 0.25, [0.8, 0.8, 0.8]),
        (2.0, 0.8, [1.0, 1.3, 0.7]),
    ];
    for (ci, (c0, w0, ws)) in kg_cases.iter().enumerate() {
        for m in [0.0, 0.5, 1.0] {
            let tf = TestFunction::new(
                Complex64::ONE,
                [*c0, 0.0, 0.0, 0.2],
                [*w0, ws[0], ws[1], ws[2]],
            )?;
            let eff = EffectiveTf::klein_gordon(m, tf);
            let v = smear_dret_eff(m, &eff, cfg, RetardedRoute::Auto)?;
            let phi0 = tf.value([0.0; 4]);
            let rel = (v.value() - phi0).norm() / phi0.norm();
            r.push(Instance::new(
                format!("fundamental-solution-{ci}-m{m}"),
                rel < 1e-3,
                format!("relative deviation {rel:.2e}"),
            ));
        }
    }
    // Splitting: causal = retarded-reflected + frequency-negative.
    for (i, (m, c0)) in [(0.0, 2.2), (0.5, 2.6), (1.0, -2.4)].iter().enumerate() {
        let tf =
            TestFunction::new(Complex64::new(1.0, 0.4), [*c0, 0.3, -0.2, 0.5], [0.3, 1.0, 1.1, 0.9])?;
        let c = crate::propagators::smear_dcausal(*m, &tf, cfg, RetardedRoute::Auto)?;
        let ret = smear_dret(*m, &tf.reflect(), cfg, RetardedRoute::Auto)?;
        let dm = smear_dminus(*m, &tf, cfg)?;
        let lhs = c.value();
        let rhs = ret.value() + dm.value();
        let budget = 1e-9 + 10.0 * (c.error + ret.error + dm.error);
        r.push(Instance::new(
            format!("splitting-{i}"),
            (lhs - rhs).norm() < budget,
            format!("difference {:.2e} within {budget:.2e}", (lhs - rhs).norm()),
        ));
    }
    // Causal evenness.
    let tf = TestFunction::new(Complex64::ONE, [2.2, 0.4, 0.0, -0.6], [0.3, 1.0, 0.9, 1.1])?;
    let a = crate::propagators::smear_dcausal(0.5, &tf, cfg, RetardedRoute::Auto)?;
    let b = crate::propagators::smear_dcausal(0.5, &tf.reflect(), cfg, RetardedRoute::Auto)?;
    r.push(Instance::new(
        "causal-evenness",
        (a.value() - b.value()).norm() < 1e-9 + 10.0 * (a.error + b.error),
        format!("difference {:.2e}", (a.value() - b.value()).norm()),
    ));
    // Retarded support: past-timelike and spacelike placements.
    for (id, center, widths, route) in [
        ("support-past", [-5.0, 0.0, 0.0, 0.0], [0.5, 0.8, 0.8, 0.8], RetardedRoute::SharpCut),
        ("support-spacelike", [3.0, 0.0, 0.0, 20.0], [0.5, 0.5, 0.5, 0.5], RetardedRoute::SharpCut),
        (
            "support-spacelike-straddling",
            [0.0, 0.0, 0.0, 12.0],
            [0.5, 0.5, 0.5, 0.5],
            RetardedRoute::Contour,
        ),
    ] {
        let tf = TestFunction::new(Complex64::ONE, center, widths)?;
        let v = smear_dret(0.5, &tf, cfg, route)?;
        let bound = 1e-6 * tf.l1_norm();
        r.push(Instance::new(
            id,
            v.value().norm() < bound,
            format!("|value| {:.2e} < {bound:.2e}", v.value().norm()),
        ));
    }
    // Commutator: equal-time spacelike suppression and exact cancellation
    // for an even test function.
    let tf = TestFunction::new(Complex64::ONE, [0.0, 0.0, 0.0, 4.0], [0.25, 0.4, 0.4, 0.4])?;
    let v = smear_pauli_jordan_eff(0.5, &EffectiveTf::plain(tf), cfg)?;
    r.push(Instance::new(
        "microcausality-equal-time",
        v.value().norm() < 1e-6 * tf.l1_norm(),
        format!("|value| {:.2e}", v.value().norm()),
    ));
    let even = TestFunction::unit();
    let v = smear_pauli_jordan_eff(1.0, &EffectiveTf::plain(even), cfg)?;
    r.push(Instance::new(
        "commutator-even-cancellation",
        v.value() == Complex64::ZERO,
        "exact zero",
    ));
    // Massless closed form: the light-cone shell integral.
    let tf = TestFunction::new(Complex64::ONE, [2.5, 0.0, 0.0, 0.8], [0.3, 0.7, 0.7, 0.7])?;
    let quad = smear_dret(0.0, &tf, cfg, RetardedRoute::SharpCut)?;
    let oracle = light_cone_integral(&tf);
    let rel = (quad.value() - oracle).norm() / oracle.norm();
    r.push(Instance::new(
        "massless-closed-form",
        rel < 1e-3,
        format!("quadrature vs shell integral, rel {rel:.2e}"),
    ));
    // Route agreement, shift independence.
    let tf =
        TestFunction::new(Complex64::new(1.0, 0.3), [2.0, 0.4, 0.0, -0.3], [0.3, 0.9, 1.0, 1.1])?;
    let cut = smear_dret(0.5, &tf, cfg, RetardedRoute::SharpCut)?;
    let mut values = vec![cut.value()];
    for delta in [0.5, 1.0, 2.0] {
        let c = QuadratureConfig { contour_shift: delta, ..*cfg };
        values.push(smear_dret(0.5, &tf, &c, RetardedRoute::Contour)?.value());
    }
    let spread = values
        .iter()
        .flat_map(|a| values.iter().map(move |b| (a - b).norm()))
        .fold(0.0f64, f64::max);
    r.push(Instance::new(
        "route-agreement",
        spread < 1e-6,
        format!("max spread over cut and three shifts {spread:.2e}"),
    ));
    // Linearity (amplitude factors through analytically) and reflection
    // covariance of the two evaluation paths.
    let s = Complex64::new(-1.3, 0.7);
    let va = smear_dminus(1.0, &tf.scale_amp(s), cfg)?;
    let vb = smear_dminus(1.0, &tf, cfg)?;
    r.push(Instance::new(
        "linearity",
        (va.value() - s * vb.value()).norm() <= 1e-12 * va.value().norm(),
        format!("difference {:.2e}", (va.value() - s * vb.value()).norm()),
    ));
    let refl_a = crate::propagators::smear_dminus_reflected_eff(1.0, &EffectiveTf::plain(tf), cfg)?;
    let refl_b = smear_dminus(1.0, &tf.reflect(), cfg)?;
    r.push(Instance::new(
        "reflection-covariance",
        (refl_a.value() - refl_b.value()).norm() <= 1e-12 * refl_b.value().norm().max(1e-30),
        format!("difference {:.2e}", (refl_a.value() - refl_b.value()).norm()),
    ));
    Ok(r)
}

/// Independent oracle for the massless retarded pairing: the forward
/// light-cone shell integral of the test function.
fn light_cone_integral(tf: &TestFunction) -> Complex64 {
    let r_max = tf.center[0].abs()
        + 12.0 * tf.widths.iter().cloned().fold(0.0, f64::max)
        + tf.center[1..].iter().map(|c| c.abs()).sum::<f64>();
    let (rs, rw) = gauss_legendre_on(400, 0.0, r_max);
    let (us, uw) = gauss_legendre(64);
    let n_phi = 16;
    let dphi = std::f64::consts::TAU / n_phi as f64;
    let mut total = Complex64::ZERO;
    for (rad, wr) in rs.iter().zip(&rw) {
        for (u, wu) in us.iter().zip(&uw) {
            let s = (1.0 - u * u).max(0.0).sqrt();
            for q in 0..n_phi {
                let phi = dphi * q as f64;
                let x = [rad * s * phi.cos(), rad * s * phi.sin(), rad * u];
                let v = tf.value([*rad, x[0], x[1], x[2]]);
                total += v * (wr * wu * dphi * rad / (2.0 * std::f64::consts::TAU));
            }
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// The twenty-case Gaussian suite for every inequality, with the frozen
/// constants.
pub fn bounds_suite(cfg: &QuadratureConfig) -> Result<Report> {
    let mut r = Report::new("bounds");
    let masses = [0.0, 0.5, 1.0];
    let mut cases = Vec::new();
    for i in 0..20 {
        let m = masses[i % 3];
        let fi = i as f64;
        let f = TestFunction::new(
            Complex64::new(1.0 + 0.1 * fi, 0.05 * fi),
            [2.0 + 0.1 * fi, 0.0, 0.0, 0.1 * (i % 4) as f64],
            [0.3 + 0.02 * fi, 0.8 + 0.05 * fi, 1.0, 1.2 - 0.02 * fi],
        )?;
        let g = TestFunction::new(
            Complex64::new(0.8, -0.03 * fi),
            [-0.5 - 0.05 * fi, 0.0, 0.05 * (i % 3) as f64, 0.0],
            [0.35, 1.1, 0.9 + 0.03 * fi, 0.8],
        )?;
        cases.push((m, f, g));
    }
    for id in [
        BoundId::RetardedSmear,
        BoundId::MinusSmear,
        BoundId::PhotonCausalPair,
        BoundId::PhotonPlainPair,
        BoundId::FermionCausalPair,
        BoundId::FermionPlainPair,
    ] {
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for (m, f, g) in &cases {
            let needs_pair = !matches!(id, BoundId::RetardedSmear | BoundId::MinusSmear);
            let mass = if matches!(id, BoundId::PhotonCausalPair | BoundId::PhotonPlainPair) {
                0.0
            } else {
                *m
            };
            let rep = check_bound(id, mass, f, needs_pair.then_some(g), cfg)?;
            ok &= rep.pass;
            worst = worst.max(rep.ratio / rep.constant);
        }
        r.push(Instance::new(
            format!("{id:?}"),
            ok,
            format!("20 cases, worst ratio/constant {worst:.3}"),
        ));
    }
    // Homogeneity: scaling the test function scales both sides linearly.
    let f = &cases[0].1;
    let base = check_bound(BoundId::RetardedSmear, 0.5, f, None, cfg)?;
    let scaled = check_bound(
        BoundId::RetardedSmear,
        0.5,
        &f.scale_amp(Complex64::new(4.0, 0.0)),
        None,
        cfg,
    )?;
    r.push(Instance::new(
        "homogeneity",
        (base.ratio - scaled.ratio).abs() < 1e-9 * base.ratio,
        format!("ratio drift {:.2e}", (base.ratio - scaled.ratio).abs()),
    ));
    // Widening the time profile grows the tilted norm monotonically.
    let mut prev = 0.0;
    let mut monotone = true;
    for w0 in [0.3, 0.5, 0.8, 1.2] {
        let f = TestFunction::new(Complex64::ONE, [2.0, 0.0, 0.0, 0.0], [w0, 1.0, 1.0, 1.0])?;
        let rep = check_bound(BoundId::RetardedSmear, 0.5, &f, None, cfg)?;
        monotone &= rep.rhs > prev;
        prev = rep.rhs;
    }
    r.push(Instance::new("time-widening-monotone", monotone, "tilted norm grows with the width"));
    Ok(r)
}

// ---------------------------------------------------------------------------
// Scattering-series structure
// ---------------------------------------------------------------------------

fn gauss_at(c0: f64, w: f64) -> TestFunction {
    TestFunction::new(Complex64::ONE, [c0, 0.0, 0.0, 0.0], [w, 1.0, 1.0, 1.0]).unwrap()
}

fn sym_probe() -> SwitchingFunction {
    SwitchingFunction::new(Complex64::ONE, gauss_at(0.0, 0.5), gauss_at(0.0, 0.5), gauss_at(0.0, 0.5))
}

pub fn smatrix_suite(cfg: &QuadratureConfig) -> Result<Report> {
    let mut r = Report::new("smatrix");
    let series = smatrix_terms(2, m1(), &coeff::one(), 3)?;
    // Selection rule: the single-vertex element against a photon state is a
    // symbolic zero, with no quadrature performed.
    let bra = StateSpec { photons: vec![(2, gauss_at(3.0, 0.4))], ..Default::default() };
    let ket = StateSpec::vacuum();
    let h = SwitchingFunction::new(
        Complex64::ONE,
        gauss_at(0.0, 0.5),
        gauss_at(0.0, 0.5),
        gauss_at(0.1, 0.4),
    );
    let mut cache = SmearCache::new();
    let me = matrix_element(&bra, &ket, &series, &h, 1, cfg, &mut cache)?;
    let order1 = me.per_class.iter().find(|c| c.order == 1).unwrap();
    r.push(Instance::new(
        "selection-rule",
        crate::smatrix::selection_rule_violated(1, &bra, &ket)
            && order1.symbolic_terms == 0
            && cache.is_empty(),
        "symbolic zero without quadrature",
    ));
    // Contraction-pattern census at order two against the pairing oracle.
    let classes = series.classes_at(2);
    let mut expected = Vec::new();
    for f in [
        vec![],
        vec![WickPair::BarPsi(0, 1)],
        vec![WickPair::PsiBar(0, 1)],
        vec![WickPair::BarPsi(0, 1), WickPair::PsiBar(0, 1)],
    ] {
        for p in [vec![], vec![WickPair::Photon(0, 1)]] {
            let mut c = f.clone();
            c.extend(p.iter().copied());
            c.sort();
            expected.push(c);
        }
    }
    expected.sort();
    let mut got: Vec<_> = classes.into_iter().cloned().collect();
    got.sort();
    r.push(Instance::new("order-2-class-census", got == expected, format!("{} patterns", got.len())));
    // Residual scaling.
    let rep = first_order_smallness_report(
        &StateSpec::vacuum(),
        &StateSpec::vacuum(),
        &series,
        &h,
        2,
        &[1.0, 0.5, 0.25, 0.125],
        cfg,
        &mut cache,
    )?;
    r.push(Instance::new(
        "residual-scaling",
        rep.exponents.iter().all(|e| *e >= 1.9) && rep.residual_at_zero == 0.0,
        format!("exponents {:?}", rep.exponents),
    ));
    // The evaluated residual sits under its certified pair-norm bound.
    let me_full =
        matrix_element(&StateSpec::vacuum(), &StateSpec::vacuum(), &series, &h, 2, cfg, &mut cache)?;
    let residual: Complex64 =
        me_full.per_class.iter().filter(|c| c.order >= 2).map(|c| c.value).sum();
    let norm_bound = crate::smatrix::matrix_element_norm_bound(
        &StateSpec::vacuum(),
        &StateSpec::vacuum(),
        &series,
        &h,
        2,
        2,
        cfg,
    )?;
    r.push(Instance::new(
        "residual-norm-bound",
        residual.norm() <= norm_bound && norm_bound.is_finite(),
        format!("|residual| {:.3e} <= certified {:.3e}", residual.norm(), norm_bound),
    ));
    // An asymmetric switching weight leaves a visible first-order defect;
    // the symmetric one cancels numerically too.
    let asym = SwitchingFunction::new(
        Complex64::ONE,
        gauss_at(0.5, 0.4),
        gauss_at(-0.5, 0.6),
        gauss_at(0.0, 0.5),
    );
    let def_bra = StateSpec {
        bars: vec![(1, gauss_at(2.5, 0.4))],
        photons: vec![(0, gauss_at(2.5, 0.4))],
        ..Default::default()
    };
    let def_ket = StateSpec { psis: vec![(1, gauss_at(-2.5, 0.4))], ..Default::default() };
    let (va, ea) = crate::smatrix::unitarity_defect_numeric(
        &asym, &series, &def_bra, &def_ket, cfg, &mut cache,
    )?;
    let (vs, es) = crate::smatrix::unitarity_defect_numeric(
        &sym_probe(), &series, &def_bra, &def_ket, cfg, &mut cache,
    )?;
    r.push(Instance::new(
        "asymmetric-defect-visible",
        va.norm() > 10.0 * ea && vs.norm() <= 1e-9 + 10.0 * es,
        format!("asymmetric {:.3e}, symmetric {:.3e}", va.norm(), vs.norm()),
    ));
    // Vertex adjoint swaps the spinor arguments.
    let mut reg = LabelRegistry::new();
    let [x, y, z] = reg.fresh_n();
    let l3 = bilocal_lagrangian(m1(), &coeff::one(), x, y, z)?;
    let swapped = bilocal_lagrangian(m1(), &coeff::one(), y, x, z)?;
    r.push(Instance::new(
        "vertex-adjoint",
        adjoint(&l3)? == canonicalize(&swapped)?,
        "adjoint exchanges the spinor arguments",
    ));
    // Unitarity brackets.
    let sym = SwitchingFunction::new(
        Complex64::ONE,
        gauss_at(0.0, 0.5),
        gauss_at(0.0, 0.5),
        gauss_at(0.1, 0.4),
    );
    let u1 = unitarity_defect(1, &sym, &series, false)?;
    r.push(Instance::new(
        "unitarity-first-order",
        u1.symbolically_zero,
        "symmetrized bracket vanishes",
    ));
    let u2 = unitarity_defect(2, &sym, &series, true)?;
    r.push(Instance::new(
        "unitarity-second-order-zero-causal",
        u2.symbolically_zero,
        "bracket vanishes with causal scalars set to zero",
    ));
    // Photon metric zeros propagate to exact zeros.
    let z = crate::propagators::smear_two_point_entry(
        crate::algebra::PairKind::EmEm,
        0.0,
        Flavor::TVac,
        0,
        3,
        &gauss_at(0.3, 0.5),
        cfg,
        RetardedRoute::Auto,
    )?;
    r.push(Instance::new(
        "photon-off-diagonal-zero",
        z.value() == Complex64::ZERO && z.error == 0.0,
        "exact zero without quadrature",
    ));
    // Every series term's labels stay within its own vertices.
    let ok = series.terms.iter().all(|t| {
        t.expr.labels().iter().all(|l| {
            series.slots[..t.order.max(1)].iter().any(|s| s.x == *l || s.y == *l || s.z == *l)
        })
    });
    r.push(Instance::new("term-slot-budget", ok, "labels confined to the term's vertices"));
    Ok(r)
}

/// The numeric causal-factorization defect at second order with separated
/// switching functions.
pub fn factorization_numeric_suite(cfg: &QuadratureConfig) -> Result<Report> {
    let mut r = Report::new("factorization-numeric");
    let series = smatrix_terms(2, m1(), &coeff::one(), 3)?;
    let w = 0.35;
    let g = |c0: f64| gauss_at(c0, w);
    let h1 = SwitchingFunction::new(Complex64::ONE, g(-2.5), g(-2.5), g(-2.5));
    let h2 = SwitchingFunction::new(Complex64::ONE, g(2.5), g(2.5), g(2.5));
    let mut cache = SmearCache::new();
    let rep = factorization_defect(
        &h1,
        &h2,
        2,
        &StateSpec::vacuum(),
        &StateSpec::vacuum(),
        &series,
        cfg,
        &mut cache,
    )?;
    r.push(Instance::new(
        "separated-defect",
        rep.ordered && rep.defect_rel < 1e-2,
        format!("relative defect {:.2e}, tail bound {:.1e}", rep.defect_rel, rep.tail_bound),
    ));
    let swapped = factorization_defect(
        &h2,
        &h1,
        2,
        &StateSpec::vacuum(),
        &StateSpec::vacuum(),
        &series,
        cfg,
        &mut cache,
    )?;
    r.push(Instance::new(
        "swapped-order-reported",
        !swapped.ordered && swapped.defect_rel > 1e-3,
        format!("relative defect {:.2e} with the later weight first", swapped.defect_rel),
    ));
    let zero = SwitchingFunction::new(Complex64::ZERO, g(2.5), g(2.5), g(2.5));
    let rep0 = factorization_defect(
        &h1,
        &zero,
        2,
        &StateSpec::vacuum(),
        &StateSpec::vacuum(),
        &series,
        cfg,
        &mut cache,
    )?;
    r.push(Instance::new("vanishing-second-weight", rep0.defect_abs == 0.0, "defect exactly zero"));
    Ok(r)
}

// ---------------------------------------------------------------------------
// Representation layer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct RepsDeviations {
    pub metric: f64,
    pub homomorphism: f64,
    pub unitarity: f64,
    pub determinant: f64,
}

pub fn reps_suite(seed: u64) -> Result<Report> {
    let mut r = Report::new("reps");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Exact low weights.
    let a = Complex2x2::random_sl2c(&mut rng, 2.0);
    let t0 = rep_matrix(SpinLabel::new(0), &a);
    let t1 = rep_matrix(SpinLabel::new(1), &a);
    let mut exact = t0.n == 1 && t0.at(0, 0) == Complex64::ONE;
    for i in 0..2 {
        for j in 0..2 {
            exact &= t1.at(i, j) == a.0[i][j];
        }
    }
    r.push(Instance::new("low-weights-exact", exact, "weight 0 trivial, weight 1/2 identical"));
    let dev = reps_deviations(seed, 100)?;
    r.push(Instance::new("metric", dev.metric < 1e-12, format!("max deviation {:.2e}", dev.metric)));
    r.push(Instance::new(
        "homomorphism",
        dev.homomorphism < 1e-10,
        format!("max deviation {:.2e}", dev.homomorphism),
    ));
    r.push(Instance::new(
        "unitarity",
        dev.unitarity < 1e-10,
        format!("max deviation {:.2e}", dev.unitarity),
    ));
    r.push(Instance::new(
        "determinant",
        dev.determinant < 1e-10,
        format!("max modulus deviation {:.2e}", dev.determinant),
    ));
    Ok(r)
}

/// Maximum deviations over the randomized representation checks; the shape
/// consumed by the command-line report.
pub fn reps_deviations(seed: u64, cases: usize) -> Result<RepsDeviations> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut metric: f64 = 0.0;
    for _ in 0..cases {
        let a = Complex2x2::random_sl2c(&mut rng, 2.0);
        metric = metric.max(lorentz_of(&a)?.metric_deviation());
    }
    let mut homomorphism: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    let mut determinant: f64 = 0.0;
    for twice_l in 0..=4u32 {
        let l = SpinLabel::new(twice_l);
        for _ in 0..cases.div_ceil(5) {
            let a = Complex2x2::random_su2(&mut rng);
            let b = Complex2x2::random_su2(&mut rng);
            let tab = rep_matrix(l, &a.mul(&b));
            let ta_tb = rep_matrix(l, &a).mul(&rep_matrix(l, &b));
            homomorphism = homomorphism.max(tab.sub(&ta_tb).max_abs());
            let t = rep_matrix(l, &a);
            unitarity =
                unitarity.max(t.adjoint().mul(&t).sub(&CMatrix::identity(l.dim())).max_abs());
            determinant = determinant.max((t.det().norm() - 1.0).abs());
        }
    }
    Ok(RepsDeviations { metric, homomorphism, unitarity, determinant })
}

// ---------------------------------------------------------------------------
// Forbidden limits
// ---------------------------------------------------------------------------

/// Negative tests: the point-localized switching limit and every
/// equal-argument distribution product must be structured errors.
pub fn guards_suite() -> Result<Report> {
    use crate::error::Error;
    let mut r = Report::new("guards");
    // Zero-width switching factor: the point-localized limit.
    let zero_width = TestFunction::new(Complex64::ONE, [0.0; 4], [0.0, 1.0, 1.0, 1.0]);
    r.push(Instance::new(
        "point-localized-switching",
        matches!(zero_width, Err(Error::NonPositiveWidth(_))),
        "zero width refused",
    ));
    // Coincident vertex arguments.
    let mut reg = LabelRegistry::new();
    let [x, z] = reg.fresh_n();
    r.push(Instance::new(
        "coincident-vertex",
        matches!(bilocal_lagrangian(m1(), &coeff::one(), x, x, z), Err(Error::CoincidentLabels(_))),
        "repeated vertex argument refused",
    ));
    // Equal-argument pair scalar.
    let psi = FieldSymbol::spinor(m1(), 1, x)?;
    let bar = FieldSymbol::spinor_bar(m1(), 2, x)?;
    r.push(Instance::new(
        "equal-argument-pair",
        matches!(ContractionSymbol::new(Flavor::TVac, bar, psi), Err(Error::CoincidentLabels(_))),
        "pair scalar at one point refused",
    ));
    // Equal-argument products inside an expansion.
    let word = [bar, psi];
    r.push(Instance::new(
        "equal-argument-expansion",
        matches!(crate::algebra::normal_order_expand(&word), Err(Error::CoincidentLabels(_))),
        "expansion refuses the coincident contraction",
    ));
    // Time-origin cut without clearance.
    let tf = TestFunction::new(Complex64::ONE, [0.2, 0.0, 0.0, 0.0], [0.5, 1.0, 1.0, 1.0])?;
    r.push(Instance::new(
        "straddling-cut",
        matches!(
            smear_dret(0.5, &tf, &QuadratureConfig::default(), RetardedRoute::SharpCut),
            Err(Error::StraddlesTimeOrigin { .. })
        ),
        "sharp cut refused for a straddling profile",
    ));
    // Series order cap.
    r.push(Instance::new(
        "order-cap",
        matches!(smatrix_terms(4, m1(), &coeff::one(), 3), Err(Error::OrderCapExceeded { .. })),
        "series order above the cap refused",
    ));
    // Overlapping switching supports in the factorization harness.
    let g = gauss_at(0.0, 0.5);
    let h = SwitchingFunction::new(Complex64::ONE, g, g, g);
    let series = smatrix_terms(1, m1(), &coeff::one(), 3)?;
    let mut cache = SmearCache::new();
    let res = factorization_defect(
        &h,
        &h,
        1,
        &StateSpec::vacuum(),
        &StateSpec::vacuum(),
        &series,
        &QuadratureConfig::default(),
        &mut cache,
    );
    r.push(Instance::new(
        "overlapping-supports",
        matches!(res, Err(Error::SupportsOverlap { .. })),
        "factorization claim refused for overlapping supports",
    ));
    Ok(r)
}

// ---------------------------------------------------------------------------
// Randomized extras used by the command-line driver
// ---------------------------------------------------------------------------

/// Randomized canonical-form invariants: idempotence and the product rule
/// against the raw concatenation route.
pub fn canonical_form_suite(seed: u64, cases: usize) -> Result<Report> {
    let mut r = Report::new("canonical-form");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idempotent = true;
    let mut products = true;
    for _ in 0..cases {
        let mut reg = LabelRegistry::new();
        let len = 2 + (rng.random::<u32>() % 4) as usize;
        let word: Vec<FieldSymbol> = (0..len)
            .map(|_| species_symbol(rng.random::<u8>(), rng.random::<u8>(), reg.fresh()))
            .collect();
        let e = canonicalize(&Expression::word(word.clone()))?;
        idempotent &= canonicalize(&e)? == e;
        let wa: Vec<FieldSymbol> = (0..2)
            .map(|_| species_symbol(rng.random::<u8>(), rng.random::<u8>(), reg.fresh()))
            .collect();
        let a = canonicalize(&Expression::word(wa))?;
        products &= mul(&a, &e)? == crate::algebra::wick::mul_raw(&a, &e)?;
    }
    r.push(Instance::new("idempotence", idempotent, format!("{cases} cases")));
    r.push(Instance::new("product-routes", products, format!("{cases} cases")));
    Ok(r)
}

/// Vacuum functional sanity: scalars survive, normal words vanish.
pub fn vacuum_suite() -> Result<Report> {
    let mut r = Report::new("vacuum");
    let mut reg = LabelRegistry::new();
    let [x, y] = reg.fresh_n();
    let u = FieldSymbol::scalar(m1(), x);
    let v = FieldSymbol::scalar(m1(), y);
    let normal_zero = vacuum_expectation(&Expression::normal_word(vec![u, v]))?.is_zero();
    let plain = vacuum_expectation(&Expression::word(vec![u, v]))?;
    let identity = vacuum_expectation(&Expression::one())? == Expression::one();
    r.push(Instance::new("normal-word-vanishes", normal_zero, ""));
    r.push(Instance::new("plain-pair-survives", plain.len() == 1, ""));
    r.push(Instance::new("identity-normalized", identity, ""));
    Ok(r)
}
