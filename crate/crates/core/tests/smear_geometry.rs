//! Geometry checks on the smearing engine: rotational invariance for
//! isotropic profiles and stability of the serialized expression shape.

use csmx_core::algebra::{Expression, FieldSymbol, LabelRegistry, Mass};
use csmx_core::propagators::{
    smear_dminus, smear_dret, QuadratureConfig, RetardedRoute, TestFunction,
};
use num_complex::Complex64;

#[test]
fn isotropic_profiles_smear_rotation_invariantly() {
    // The same spatial offset magnitude along different directions must give
    // the same value when the widths are isotropic.
    let cfg = QuadratureConfig::default();
    let d = 2.5_f64;
    let along3 = TestFunction::new(Complex64::ONE, [1.0, 0.0, 0.0, d], [0.6, 0.9, 0.9, 0.9]).unwrap();
    let along1 = TestFunction::new(Complex64::ONE, [1.0, d, 0.0, 0.0], [0.6, 0.9, 0.9, 0.9]).unwrap();
    let diag = {
        let s = d / 3f64.sqrt();
        TestFunction::new(Complex64::ONE, [1.0, s, s, s], [0.6, 0.9, 0.9, 0.9]).unwrap()
    };
    for m in [0.0, 1.0] {
        let v3 = smear_dminus(m, &along3, &cfg).unwrap();
        let v1 = smear_dminus(m, &along1, &cfg).unwrap();
        let vd = smear_dminus(m, &diag, &cfg).unwrap();
        let budget = 1e-9 + 10.0 * (v3.error + v1.error + vd.error);
        assert!((v3.value() - v1.value()).norm() < budget, "m={m}: axis mismatch");
        assert!((v3.value() - vd.value()).norm() < budget, "m={m}: diagonal mismatch");
    }
}

#[test]
fn contour_route_is_rotation_invariant_too() {
    let cfg = QuadratureConfig::default();
    let d = 1.8_f64;
    let along3 =
        TestFunction::new(Complex64::ONE, [0.0, 0.0, 0.0, d], [0.5, 0.8, 0.8, 0.8]).unwrap();
    let along2 =
        TestFunction::new(Complex64::ONE, [0.0, 0.0, d, 0.0], [0.5, 0.8, 0.8, 0.8]).unwrap();
    let a = smear_dret(0.5, &along3, &cfg, RetardedRoute::Contour).unwrap();
    let b = smear_dret(0.5, &along2, &cfg, RetardedRoute::Contour).unwrap();
    assert!(
        (a.value() - b.value()).norm() < 1e-8 + 10.0 * (a.error + b.error),
        "{:?} vs {:?}",
        a.value(),
        b.value()
    );
}

#[test]
fn expression_json_shape_is_the_documented_one() {
    let mut reg = LabelRegistry::new();
    let m = Mass::from_integer(1);
    let word =
        vec![FieldSymbol::spinor_bar(m, 2, reg.fresh()).unwrap(), FieldSymbol::spinor(m, 1, reg.fresh()).unwrap()];
    let e = csmx_core::algebra::canonicalize(&Expression::word(word)).unwrap();
    let json = e.to_json();
    let terms = json["terms"].as_array().unwrap();
    assert!(!terms.is_empty());
    for t in terms {
        // coeff: two numerator/denominator string pairs (real, imaginary).
        let coeff = t["coeff"].as_array().unwrap();
        assert_eq!(coeff.len(), 2);
        assert_eq!(coeff[0].as_array().unwrap().len(), 2);
        // contractions: [flavor, left, right] triples.
        for c in t["contractions"].as_array().unwrap() {
            let triple = c.as_array().unwrap();
            assert_eq!(triple.len(), 3);
            assert!(triple[0].is_string());
        }
        assert!(t["word"].is_array());
        let ordering = t["ordering"].as_str().unwrap();
        assert!(ordering == "plain" || ordering == "normal");
    }
}
