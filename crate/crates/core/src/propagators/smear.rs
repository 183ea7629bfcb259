//! Smeared evaluation of the scalar two-point distributions.
//!
//! Conventions: the transform is `fhat(k0, k) = ∫ d4x f(x) e^{-i k0 x0 + i k·x}`,
//! and the on-shell frequency is `omega = sqrt(|k|^2 + m^2)`. The
//! frequency-negative part pairs as
//!
//! `Dminus[f] = i (2 (2 pi)^3)^{-1} ∫ d3k omega^{-1} fhat(omega, k)`;
//!
//! the commutator function is the difference with the reflected-argument
//! evaluation, the retarded function cuts the time integral at the origin,
//! and the causal function pastes the two frequency parts on either side of
//! the cut. The cuts demand the test function effectively clear of the time
//! origin; the alternative evaluation shifts the frequency contour by
//! `Delta > 0` and needs no cut.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quad::{gauss_legendre, gauss_legendre_on, SphericalGrid};
use super::testfn::{EffectiveTf, TestFunction, TimeEnv};
use crate::error::{Error, Result};

/// Node budgets and tolerances for every quadrature in this module. Node
/// counts are floors; oscillatory inputs scale them up automatically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Momentum cutoff; `None` picks it from the reciprocal widths.
    pub momentum_cutoff: Option<f64>,
    pub radial_nodes: usize,
    pub polar_nodes: usize,
    pub azimuth_nodes: usize,
    pub time_nodes: usize,
    pub p0_nodes: usize,
    /// Contour shift for the no-cut retarded route.
    pub contour_shift: f64,
    /// Error-estimate budget: a result is returned only when the nested-rule
    /// difference is below `tolerance` times the result scale.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            momentum_cutoff: None,
            radial_nodes: 48,
            polar_nodes: 16,
            azimuth_nodes: 12,
            time_nodes: 160,
            p0_nodes: 48,
            contour_shift: 1.0,
            tolerance: 1e-6,
        }
    }
}

/// A smeared value together with its nested-rule error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmearResult {
    pub value_re: f64,
    pub value_im: f64,
    pub error: f64,
}

impl SmearResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }

    pub fn exact_zero() -> Self {
        SmearResult { value_re: 0.0, value_im: 0.0, error: 0.0 }
    }

    fn new(value: Complex64, error: f64) -> Self {
        SmearResult { value_re: value.re, value_im: value.im, error }
    }
}

/// How the retarded and causal distributions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RetardedRoute {
    /// Sharp time cut when the test function clears the origin, contour
    /// shift otherwise.
    Auto,
    SharpCut,
    Contour,
}

#[derive(Debug, Clone, Copy)]
struct GridSpec {
    cutoff: f64,
    nr: usize,
    nth: usize,
    nph: usize,
    nt: usize,
}

impl GridSpec {
    fn refined(&self) -> GridSpec {
        let up = |n: usize| (n as f64 * 1.6).ceil() as usize + 1;
        GridSpec { cutoff: self.cutoff, nr: up(self.nr), nth: up(self.nth), nph: up(self.nph), nt: up(self.nt) }
    }
}

const NODE_CAP: usize = 4096;

fn plan(eff: &EffectiveTf, mass: f64, cfg: &QuadratureConfig) -> Result<GridSpec> {
    let wmin = eff.min_spatial_width();
    let cutoff = cfg.momentum_cutoff.unwrap_or(9.0 / wmin);
    let c = eff.base.center;
    let cs_norm = (c[1] * c[1] + c[2] * c[2] + c[3] * c[3]).sqrt();
    let c_perp = (c[1] * c[1] + c[2] * c[2]).sqrt();
    let omega_max = (cutoff * cutoff + mass * mass).sqrt();
    let t_len = 20.0 * eff.base.widths[0];
    let nr = cfg.radial_nodes.max((0.45 * cutoff * (cs_norm + c[0].abs())).ceil() as usize + 24);
    let nth = cfg.polar_nodes.max((0.7 * cutoff * cs_norm).ceil() as usize + 12);
    let nph = cfg.azimuth_nodes.max((0.9 * cutoff * c_perp).ceil() as usize + 8);
    let nt = cfg.time_nodes.max((0.5 * omega_max * t_len).ceil() as usize + 32);
    let spec = GridSpec { cutoff, nr, nth, nph, nt };
    if spec.nr > NODE_CAP || spec.nth > NODE_CAP || spec.nph > NODE_CAP || spec.nt > NODE_CAP {
        return Err(Error::InvalidInput(format!(
            "test function too oscillatory for the quadrature budget (needs {spec:?})"
        )));
    }
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Minus,
    MinusReflected,
    PauliJordan,
    RetardedCut,
    CausalCut,
}

/// Weighted time transform `∫ env(t) e^{-i omega t} dt` over the positive or
/// negative half-line (clipped to the envelope's effective support).
fn cut_time_transform(eff: &EffectiveTf, env: TimeEnv, omega: f64, positive: bool, nt: usize) -> Complex64 {
    let (c, w) = (eff.base.center[0], eff.base.widths[0]);
    let (lo, hi) = if positive {
        ((c - 10.0 * w).max(0.0), (c + 10.0 * w).max(0.0))
    } else {
        ((c - 10.0 * w).min(0.0), (c + 10.0 * w).min(0.0))
    };
    if hi - lo <= 0.0 {
        return Complex64::ZERO;
    }
    let (nodes, weights) = gauss_legendre_on(nt, lo, hi);
    let mut s = Complex64::ZERO;
    for (t, wt) in nodes.iter().zip(&weights) {
        s += eff.time_envelope(env, *t) * Complex64::new(0.0, -omega * t).exp() * wt;
    }
    s
}

fn envs_used(eff: &EffectiveTf) -> Vec<TimeEnv> {
    let mut v = Vec::new();
    for t in &eff.terms {
        if !v.contains(&t.env) {
            v.push(t.env);
        }
    }
    v
}

fn on_shell_sum(mass: f64, eff: &EffectiveTf, spec: &GridSpec, mode: Mode) -> Complex64 {
    let grid = SphericalGrid::new(spec.cutoff, spec.nr, spec.nth, spec.nph);
    // Per-radial-node time transforms for the cut modes, keyed by env kind
    // and sign; radial nodes are visited in order so a simple map suffices.
    let envs = envs_used(eff);
    let mut cache: std::collections::HashMap<u64, Vec<(Complex64, Complex64)>> =
        std::collections::HashMap::new();
    let pref = Complex64::new(0.0, 1.0 / (2.0 * (std::f64::consts::TAU).powi(3)));
    let total = grid.sum(|r, k| {
        let omega = (r * r + mass * mass).sqrt();
        let v = match mode {
            Mode::Minus => eff.fhat(omega, k),
            Mode::MinusReflected => eff.fhat(-omega, [-k[0], -k[1], -k[2]]),
            Mode::PauliJordan => {
                eff.fhat(omega, k) - eff.fhat(-omega, [-k[0], -k[1], -k[2]])
            }
            Mode::RetardedCut | Mode::CausalCut => {
                let per_env = cache.entry(r.to_bits()).or_insert_with(|| {
                    envs.iter()
                        .map(|e| match mode {
                            Mode::RetardedCut => (
                                cut_time_transform(eff, *e, omega, true, spec.nt),
                                cut_time_transform(eff, *e, -omega, true, spec.nt),
                            ),
                            _ => (
                                cut_time_transform(eff, *e, omega, true, spec.nt),
                                cut_time_transform(eff, *e, -omega, false, spec.nt),
                            ),
                        })
                        .collect()
                });
                let spatial_fwd = eff.spatial_hat(k);
                let spatial_rev = eff.spatial_hat([-k[0], -k[1], -k[2]]);
                let mut v = Complex64::ZERO;
                for t in &eff.terms {
                    let idx = envs.iter().position(|e| *e == t.env).unwrap();
                    let (t_fwd, t_rev) = per_env[idx];
                    let sf_fwd = EffectiveTf::spatial_term_factor(t, k);
                    let sf_rev = EffectiveTf::spatial_term_factor(t, [-k[0], -k[1], -k[2]]);
                    let fwd = t.coeff * t_fwd * sf_fwd * spatial_fwd;
                    let rev = t.coeff * t_rev * sf_rev * spatial_rev;
                    v += match mode {
                        Mode::RetardedCut => fwd - rev,
                        _ => fwd + rev,
                    };
                }
                v
            }
        };
        v / omega
    });
    pref * total
}

fn result_scale(eff: &EffectiveTf, value: Complex64) -> f64 {
    let w0 = eff.base.widths[0];
    let wmin = eff.min_spatial_width();
    let mut dress = 0.0;
    for t in &eff.terms {
        let t_ord = match t.env {
            TimeEnv::G => 0,
            TimeEnv::DG => 1,
            TimeEnv::DDG => 2,
        };
        let s_ord = match t.spatial {
            super::testfn::SpatialOp::One => 0,
            super::testfn::SpatialOp::Deriv(_) => 1,
            super::testfn::SpatialOp::Laplacian => 2,
        };
        dress += t.coeff.norm() * w0.powi(-t_ord) * wmin.powi(-(s_ord as i32));
    }
    value.norm().max(eff.base.l1_norm() * dress.max(1e-300))
}

fn nested(mass: f64, eff: &EffectiveTf, cfg: &QuadratureConfig, mode: Mode) -> Result<SmearResult> {
    let spec = plan(eff, mass, cfg)?;
    let coarse = on_shell_sum(mass, eff, &spec, mode);
    let fine = on_shell_sum(mass, eff, &spec.refined(), mode);
    let error = (fine - coarse).norm();
    if error > cfg.tolerance * result_scale(eff, fine) {
        return Err(Error::QuadratureNotConverged { estimate: error, tolerance: cfg.tolerance });
    }
    Ok(SmearResult::new(fine, error))
}

/// Offset of the time envelope from the cut, in widths.
fn origin_clearance(eff: &EffectiveTf) -> f64 {
    eff.base.center[0].abs() / eff.base.widths[0]
}

const REQUIRED_CLEARANCE: f64 = 6.0;

pub fn smear_dminus_eff(mass: f64, eff: &EffectiveTf, cfg: &QuadratureConfig) -> Result<SmearResult> {
    nested(mass, eff, cfg, Mode::Minus)
}

pub fn smear_dminus(mass: f64, tf: &TestFunction, cfg: &QuadratureConfig) -> Result<SmearResult> {
    smear_dminus_eff(mass, &EffectiveTf::plain(*tf), cfg)
}

/// The reflected-argument pairing `∫ Dminus(-x) f(x) d4x`.
pub fn smear_dminus_reflected_eff(
    mass: f64,
    eff: &EffectiveTf,
    cfg: &QuadratureConfig,
) -> Result<SmearResult> {
    nested(mass, eff, cfg, Mode::MinusReflected)
}

pub fn smear_pauli_jordan_eff(
    mass: f64,
    eff: &EffectiveTf,
    cfg: &QuadratureConfig,
) -> Result<SmearResult> {
    nested(mass, eff, cfg, Mode::PauliJordan)
}

pub fn smear_pauli_jordan(mass: f64, tf: &TestFunction, cfg: &QuadratureConfig) -> Result<SmearResult> {
    smear_pauli_jordan_eff(mass, &EffectiveTf::plain(*tf), cfg)
}

/// Composite Gauss-Legendre: `panels` equal panels with `per` nodes each.
fn composite_gl(a: f64, b: f64, panels: usize, per: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(panels * per);
    let mut weights = Vec::with_capacity(panels * per);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let (x, w) = gauss_legendre_on(per, a + p as f64 * h, a + (p + 1) as f64 * h);
        nodes.extend(x);
        weights.extend(w);
    }
    (nodes, weights)
}

/// Retarded pairing by contour shift: no time cut, any test function.
///
/// The resolvent couples only the frequency and the radial momentum, so the
/// angular sums are precomputed per radial node and the remaining double
/// integral is panelized finely enough to resolve the resolvent ridge of
/// width ~ shift along the mass shell.
fn retarded_contour(mass: f64, eff: &EffectiveTf, cfg: &QuadratureConfig) -> Result<SmearResult> {
    let delta = cfg.contour_shift;
    if !(delta > 0.0) {
        return Err(Error::InvalidInput("contour shift must be positive".into()));
    }
    let spec = plan(eff, mass, cfg)?;
    let w0 = eff.base.widths[0];
    let p0_max = 9.0 / w0 + 3.0 * delta;
    let panel_width = delta.min(1.5) * 0.75;
    // Oscillation from the time center also limits the usable panel width.
    let panel_width = panel_width.min(4.0 / (1.0 + eff.base.center[0].abs()));
    let eval = |nth: usize, nph: usize, per: usize| -> Complex64 {
        let r_panels = (spec.cutoff / panel_width).ceil() as usize;
        let p0_panels = (2.0 * p0_max / panel_width).ceil() as usize;
        let (rs, rws) = composite_gl(0.0, spec.cutoff, r_panels, per);
        let (p0s, p0ws) = composite_gl(-p0_max, p0_max, p0_panels, per);
        // Angular sums per radial node and dressing term.
        let (us, uws) = gauss_legendre(nth);
        let dphi = std::f64::consts::TAU / nph as f64;
        let n_terms = eff.terms.len();
        let mut angular = vec![Complex64::ZERO; rs.len() * n_terms];
        for (ri, r) in rs.iter().enumerate() {
            for (u, wu) in us.iter().zip(&uws) {
                let s = (1.0 - u * u).max(0.0).sqrt();
                for q in 0..nph {
                    let phi = dphi * q as f64;
                    let k = [r * s * phi.cos(), r * s * phi.sin(), r * u];
                    let spatial = eff.spatial_hat(k);
                    let w = wu * dphi;
                    for (ti, t) in eff.terms.iter().enumerate() {
                        angular[ri * n_terms + ti] +=
                            t.coeff * EffectiveTf::spatial_term_factor(t, k) * spatial * w;
                    }
                }
            }
        }
        let mut total = Complex64::ZERO;
        for (p0, wp) in p0s.iter().zip(&p0ws) {
            let s = Complex64::new(delta, -p0);
            let tg = eff.time_laplace(TimeEnv::G, s);
            let tdg = eff.time_laplace(TimeEnv::DG, s);
            let tddg = eff.time_laplace(TimeEnv::DDG, s);
            let pole = Complex64::new(*p0, delta);
            // Skip frequencies whose time factor is negligible.
            if tg.norm() + tdg.norm() + tddg.norm() < 1e-22 {
                continue;
            }
            let mut slice = Complex64::ZERO;
            for (ri, (r, wr)) in rs.iter().zip(&rws).enumerate() {
                let resolvent = (pole * pole - r * r - mass * mass).finv();
                let mut e = Complex64::ZERO;
                for (ti, t) in eff.terms.iter().enumerate() {
                    let tf = match t.env {
                        TimeEnv::G => tg,
                        TimeEnv::DG => tdg,
                        TimeEnv::DDG => tddg,
                    };
                    e += tf * angular[ri * n_terms + ti];
                }
                slice += resolvent * e * (r * r * wr);
            }
            total += slice * *wp;
        }
        -total / (std::f64::consts::TAU).powi(4)
    };
    let coarse = eval(spec.nth, spec.nph, 6);
    let fine = eval((spec.nth as f64 * 1.6) as usize + 1, (spec.nph as f64 * 1.6) as usize + 1, 10);
    let error = (fine - coarse).norm();
    if error > cfg.tolerance * result_scale(eff, fine) {
        return Err(Error::QuadratureNotConverged { estimate: error, tolerance: cfg.tolerance });
    }
    Ok(SmearResult::new(fine, error))
}

pub fn smear_dret_eff(
    mass: f64,
    eff: &EffectiveTf,
    cfg: &QuadratureConfig,
    route: RetardedRoute,
) -> Result<SmearResult> {
    let clear = origin_clearance(eff);
    match route {
        RetardedRoute::Contour => retarded_contour(mass, eff, cfg),
        RetardedRoute::SharpCut => {
            if clear < REQUIRED_CLEARANCE {
                return Err(Error::StraddlesTimeOrigin { sigmas: clear, required: REQUIRED_CLEARANCE });
            }
            nested(mass, eff, cfg, Mode::RetardedCut)
        }
        RetardedRoute::Auto => {
            if clear < REQUIRED_CLEARANCE {
                retarded_contour(mass, eff, cfg)
            } else {
                nested(mass, eff, cfg, Mode::RetardedCut)
            }
        }
    }
}

pub fn smear_dret(
    mass: f64,
    tf: &TestFunction,
    cfg: &QuadratureConfig,
    route: RetardedRoute,
) -> Result<SmearResult> {
    smear_dret_eff(mass, &EffectiveTf::plain(*tf), cfg, route)
}

pub fn smear_dcausal_eff(
    mass: f64,
    eff: &EffectiveTf,
    cfg: &QuadratureConfig,
    route: RetardedRoute,
) -> Result<SmearResult> {
    let clear = origin_clearance(eff);
    let piecewise = |cfg: &QuadratureConfig| nested(mass, eff, cfg, Mode::CausalCut);
    let split = |cfg: &QuadratureConfig| -> Result<SmearResult> {
        // Causal = retarded-reflected + frequency-negative part.
        let r = retarded_contour(mass, &eff.reflected(), cfg)?;
        let m = smear_dminus_eff(mass, eff, cfg)?;
        Ok(SmearResult::new(r.value() + m.value(), r.error + m.error))
    };
    match route {
        RetardedRoute::Contour => split(cfg),
        RetardedRoute::SharpCut => {
            if clear < REQUIRED_CLEARANCE {
                return Err(Error::StraddlesTimeOrigin { sigmas: clear, required: REQUIRED_CLEARANCE });
            }
            piecewise(cfg)
        }
        RetardedRoute::Auto => {
            if clear < REQUIRED_CLEARANCE {
                split(cfg)
            } else {
                piecewise(cfg)
            }
        }
    }
}

pub fn smear_dcausal(
    mass: f64,
    tf: &TestFunction,
    cfg: &QuadratureConfig,
    route: RetardedRoute,
) -> Result<SmearResult> {
    smear_dcausal_eff(mass, &EffectiveTf::plain(*tf), cfg, route)
}
