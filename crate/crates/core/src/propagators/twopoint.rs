//! Smeared two-point functions for every classified field pair and flavor.
//!
//! Each kernel is a first-order differential operator with matrix
//! coefficients applied to a scalar distribution, evaluated against the
//! test function by parts: the plain pair rides on the frequency-negative
//! part, the causal pair on the retarded function at reflected argument,
//! and the chronological pair on the causal function.

use num_complex::Complex64;

use super::smear::{
    smear_dcausal_eff, smear_dminus_eff, smear_dret_eff, QuadratureConfig, RetardedRoute,
    SmearResult,
};
use super::testfn::{EffectiveTf, TestFunction};
use crate::algebra::gamma::{gamma, ETA};
use crate::algebra::{Flavor, PairKind};
use crate::error::Result;

/// Smeared value of one matrix entry of a two-point distribution.
///
/// Components are the field components: spinor indices 1..=4 for the
/// fermion pairs, tensor indices 0..=3 for the photon and vector pairs
/// (where off-diagonal entries vanish identically and are returned as exact
/// zeros without quadrature), and 0 for the scalar pair.
pub fn smear_two_point_entry(
    pair: PairKind,
    mass: f64,
    flavor: Flavor,
    left_comp: u8,
    right_comp: u8,
    tf: &TestFunction,
    cfg: &QuadratureConfig,
    route: RetardedRoute,
) -> Result<SmearResult> {
    let i = Complex64::I;
    match pair {
        PairKind::ScalarScalar => {
            scalar_kernel(mass, flavor, -i, tf, cfg, route)
        }
        PairKind::EmEm | PairKind::VectorConjVector => {
            if left_comp != right_comp {
                return Ok(SmearResult::exact_zero());
            }
            let factor = i * ETA[left_comp as usize];
            scalar_kernel(mass, flavor, factor, tf, cfg, route)
        }
        PairKind::SpinorSpinorBar => {
            let (alpha, beta) = (left_comp, right_comp);
            let c_mu: [Complex64; 4] = std::array::from_fn(|mu| gamma(mu, alpha, beta).c64());
            let c0 = if alpha == beta { -i * mass } else { Complex64::ZERO };
            dressed_kernel(mass, flavor, c_mu, c0, tf, cfg, route)
        }
        PairKind::SpinorBarSpinor => {
            let (alpha, beta) = (left_comp, right_comp);
            // Transposed spinor indices and the opposite mass sign.
            let c_mu: [Complex64; 4] = std::array::from_fn(|mu| gamma(mu, beta, alpha).c64());
            let c0 = if alpha == beta { i * mass } else { Complex64::ZERO };
            dressed_kernel(mass, flavor, c_mu, c0, tf, cfg, route)
        }
    }
}

fn scalar_kernel(
    mass: f64,
    flavor: Flavor,
    factor: Complex64,
    tf: &TestFunction,
    cfg: &QuadratureConfig,
    route: RetardedRoute,
) -> Result<SmearResult> {
    let r = match flavor {
        Flavor::Vac => smear_dminus_eff(mass, &EffectiveTf::plain(*tf), cfg)?,
        Flavor::Causal => smear_dret_eff(mass, &EffectiveTf::plain(tf.reflect()), cfg, route)?,
        Flavor::TVac => smear_dcausal_eff(mass, &EffectiveTf::plain(*tf), cfg, route)?,
    };
    Ok(scaled(r, factor))
}

fn dressed_kernel(
    mass: f64,
    flavor: Flavor,
    c_mu: [Complex64; 4],
    c0: Complex64,
    tf: &TestFunction,
    cfg: &QuadratureConfig,
    route: RetardedRoute,
) -> Result<SmearResult> {
    if c_mu.iter().all(|c| *c == Complex64::ZERO) && c0 == Complex64::ZERO {
        return Ok(SmearResult::exact_zero());
    }
    // Integration by parts flips the first-order coefficients; pairing the
    // reflected-argument kernel flips them back while reflecting the base.
    let flipped: [Complex64; 4] = std::array::from_fn(|mu| -c_mu[mu]);
    match flavor {
        Flavor::Vac => smear_dminus_eff(mass, &EffectiveTf::first_order(*tf, flipped, c0), cfg),
        Flavor::Causal => {
            let eff = EffectiveTf::first_order(tf.reflect(), c_mu, c0);
            smear_dret_eff(mass, &eff, cfg, route)
        }
        Flavor::TVac => {
            smear_dcausal_eff(mass, &EffectiveTf::first_order(*tf, flipped, c0), cfg, route)
        }
    }
}

fn scaled(r: SmearResult, factor: Complex64) -> SmearResult {
    let v = r.value() * factor;
    SmearResult { value_re: v.re, value_im: v.im, error: r.error * factor.norm() }
}

/// The full smeared block of a two-point distribution: a 1x1 block for the
/// scalar pair, otherwise 4x4 in the pair's component indices.
#[derive(Debug, Clone)]
pub enum TwoPointSmear {
    Scalar(SmearResult),
    Matrix(Box<[[SmearResult; 4]; 4]>),
}

pub fn smear_two_point(
    pair: PairKind,
    mass: f64,
    flavor: Flavor,
    tf: &TestFunction,
    cfg: &QuadratureConfig,
    route: RetardedRoute,
) -> Result<TwoPointSmear> {
    match pair {
        PairKind::ScalarScalar => Ok(TwoPointSmear::Scalar(smear_two_point_entry(
            pair, mass, flavor, 0, 0, tf, cfg, route,
        )?)),
        PairKind::EmEm | PairKind::VectorConjVector => {
            let mut m = [[SmearResult::exact_zero(); 4]; 4];
            for mu in 0..4u8 {
                m[mu as usize][mu as usize] =
                    smear_two_point_entry(pair, mass, flavor, mu, mu, tf, cfg, route)?;
            }
            Ok(TwoPointSmear::Matrix(Box::new(m)))
        }
        PairKind::SpinorSpinorBar | PairKind::SpinorBarSpinor => {
            let mut m = [[SmearResult::exact_zero(); 4]; 4];
            for a in 1..=4u8 {
                for b in 1..=4u8 {
                    m[(a - 1) as usize][(b - 1) as usize] =
                        smear_two_point_entry(pair, mass, flavor, a, b, tf, cfg, route)?;
                }
            }
            Ok(TwoPointSmear::Matrix(Box::new(m)))
        }
    }
}
