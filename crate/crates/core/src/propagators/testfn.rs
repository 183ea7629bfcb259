//! Gaussian test functions with analytic Fourier data, and the dressed
//! variants produced by first- and second-order differential operators.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Product Gaussian on spacetime:
/// `amp * prod_mu exp(-(x^mu - c^mu)^2 / (2 w_mu^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub amp: Complex64,
    pub center: [f64; 4],
    pub widths: [f64; 4],
}

impl TestFunction {
    pub fn new(amp: Complex64, center: [f64; 4], widths: [f64; 4]) -> Result<Self> {
        for &w in &widths {
            if !(w > 0.0) {
                return Err(Error::NonPositiveWidth(w));
            }
        }
        Ok(TestFunction { amp, center, widths })
    }

    /// Unit-amplitude standard Gaussian.
    pub fn unit() -> Self {
        TestFunction { amp: Complex64::ONE, center: [0.0; 4], widths: [1.0; 4] }
    }

    pub fn value(&self, x: [f64; 4]) -> Complex64 {
        let mut e = 0.0;
        for mu in 0..4 {
            let d = x[mu] - self.center[mu];
            e -= d * d / (2.0 * self.widths[mu] * self.widths[mu]);
        }
        self.amp * e.exp()
    }

    /// `f(-x)`; again a Gaussian.
    pub fn reflect(&self) -> TestFunction {
        TestFunction {
            amp: self.amp,
            center: std::array::from_fn(|mu| -self.center[mu]),
            widths: self.widths,
        }
    }

    pub fn scale_amp(&self, s: Complex64) -> TestFunction {
        TestFunction { amp: self.amp * s, ..*self }
    }

    /// L1 norm, `|amp| prod_mu w_mu sqrt(2 pi)`.
    pub fn l1_norm(&self) -> f64 {
        let mut n = self.amp.norm();
        for w in self.widths {
            n *= w * std::f64::consts::TAU.sqrt();
        }
        n
    }

    /// The correlation `(f corr g)(u) = ∫ f(u + y) g(y) d4y`, again a
    /// Gaussian: widths add in quadrature, centers subtract.
    pub fn correlate(&self, g: &TestFunction) -> TestFunction {
        let mut amp = self.amp * g.amp;
        let mut center = [0.0; 4];
        let mut widths = [0.0; 4];
        for mu in 0..4 {
            let (wf, wg) = (self.widths[mu], g.widths[mu]);
            let w = (wf * wf + wg * wg).sqrt();
            amp *= std::f64::consts::TAU.sqrt() * wf * wg / w;
            center[mu] = self.center[mu] - g.center[mu];
            widths[mu] = w;
        }
        TestFunction { amp, center, widths }
    }
}

/// Time-envelope derivative order of one dressing term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeEnv {
    /// The bare Gaussian.
    G,
    /// First time derivative.
    DG,
    /// Second time derivative.
    DDG,
}

/// Spatial operator of one dressing term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialOp {
    One,
    /// `∂_j`, axis 0..=2 (spacetime axis j + 1).
    Deriv(usize),
    /// Spatial Laplacian.
    Laplacian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressTerm {
    pub coeff: Complex64,
    pub env: TimeEnv,
    pub spatial: SpatialOp,
}

/// A differential operator applied to a Gaussian: the effective test
/// function every smearing route consumes. Fourier data stays analytic in
/// the spatial directions; the time envelope is available in position space
/// for the time-cut routes.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveTf {
    pub base: TestFunction,
    pub terms: Vec<DressTerm>,
}

impl EffectiveTf {
    pub fn plain(base: TestFunction) -> Self {
        EffectiveTf {
            base,
            terms: vec![DressTerm { coeff: Complex64::ONE, env: TimeEnv::G, spatial: SpatialOp::One }],
        }
    }

    /// `(sum_mu c_mu d/dx^mu + c) base`.
    pub fn first_order(base: TestFunction, c_mu: [Complex64; 4], c: Complex64) -> Self {
        let mut terms = Vec::new();
        if c != Complex64::ZERO {
            terms.push(DressTerm { coeff: c, env: TimeEnv::G, spatial: SpatialOp::One });
        }
        if c_mu[0] != Complex64::ZERO {
            terms.push(DressTerm { coeff: c_mu[0], env: TimeEnv::DG, spatial: SpatialOp::One });
        }
        for j in 0..3 {
            if c_mu[j + 1] != Complex64::ZERO {
                terms.push(DressTerm { coeff: c_mu[j + 1], env: TimeEnv::G, spatial: SpatialOp::Deriv(j) });
            }
        }
        EffectiveTf { base, terms }
    }

    /// The wave operator plus mass squared applied to the base Gaussian.
    pub fn klein_gordon(mass: f64, base: TestFunction) -> Self {
        EffectiveTf {
            base,
            terms: vec![
                DressTerm { coeff: Complex64::ONE, env: TimeEnv::DDG, spatial: SpatialOp::One },
                DressTerm { coeff: -Complex64::ONE, env: TimeEnv::G, spatial: SpatialOp::Laplacian },
                DressTerm {
                    coeff: Complex64::new(mass * mass, 0.0),
                    env: TimeEnv::G,
                    spatial: SpatialOp::One,
                },
            ],
        }
    }

    /// The dressed function composed with the point reflection: the base
    /// reflects and every term of odd total derivative order flips sign.
    pub fn reflected(&self) -> EffectiveTf {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let t_ord = match t.env {
                    TimeEnv::G => 0,
                    TimeEnv::DG => 1,
                    TimeEnv::DDG => 2,
                };
                let s_ord = match t.spatial {
                    SpatialOp::One => 0,
                    SpatialOp::Deriv(_) => 1,
                    SpatialOp::Laplacian => 2,
                };
                let odd = (t_ord + s_ord) % 2 == 1;
                DressTerm { coeff: if odd { -t.coeff } else { t.coeff }, ..*t }
            })
            .collect();
        EffectiveTf { base: self.base.reflect(), terms }
    }

    /// Scales every coefficient.
    pub fn scaled(&self, s: Complex64) -> EffectiveTf {
        EffectiveTf {
            base: self.base,
            terms: self.terms.iter().map(|t| DressTerm { coeff: t.coeff * s, ..*t }).collect(),
        }
    }

    /// Full Fourier transform at `(k0, k)` under
    /// `∫ d4x f(x) exp(-i k0 x0 + i k·x)`.
    pub fn fhat(&self, k0: f64, k: [f64; 3]) -> Complex64 {
        let b = &self.base;
        let root_tau = std::f64::consts::TAU.sqrt();
        // Time factor.
        let gt = b.widths[0]
            * root_tau
            * (Complex64::new(0.0, -k0 * b.center[0])
                + Complex64::new(-k0 * k0 * b.widths[0] * b.widths[0] / 2.0, 0.0))
            .exp();
        // Spatial factors.
        let mut gs = Complex64::ONE;
        for j in 0..3 {
            let (c, w) = (b.center[j + 1], b.widths[j + 1]);
            gs *= w
                * root_tau
                * (Complex64::new(-k[j] * k[j] * w * w / 2.0, k[j] * c)).exp();
        }
        let base_hat = b.amp * gt * gs;
        let k2: f64 = k.iter().map(|x| x * x).sum();
        let mut sum = Complex64::ZERO;
        for t in &self.terms {
            let tf = match t.env {
                TimeEnv::G => Complex64::ONE,
                TimeEnv::DG => Complex64::new(0.0, k0),
                TimeEnv::DDG => Complex64::new(-k0 * k0, 0.0),
            };
            let sf = match t.spatial {
                SpatialOp::One => Complex64::ONE,
                SpatialOp::Deriv(j) => Complex64::new(0.0, -k[j]),
                SpatialOp::Laplacian => Complex64::new(-k2, 0.0),
            };
            sum += t.coeff * tf * sf;
        }
        sum * base_hat
    }

    /// Spatial-only Fourier factor (amplitude included) at `k`, and the
    /// per-term spatial multiplier; the time envelope is handled separately
    /// by the cut routes.
    pub fn spatial_hat(&self, k: [f64; 3]) -> Complex64 {
        let b = &self.base;
        let root_tau = std::f64::consts::TAU.sqrt();
        let mut gs = b.amp;
        for j in 0..3 {
            let (c, w) = (b.center[j + 1], b.widths[j + 1]);
            gs *= w * root_tau * (Complex64::new(-k[j] * k[j] * w * w / 2.0, k[j] * c)).exp();
        }
        gs
    }

    pub fn spatial_term_factor(term: &DressTerm, k: [f64; 3]) -> Complex64 {
        match term.spatial {
            SpatialOp::One => Complex64::ONE,
            SpatialOp::Deriv(j) => Complex64::new(0.0, -k[j]),
            SpatialOp::Laplacian => {
                let k2: f64 = k.iter().map(|x| x * x).sum();
                Complex64::new(-k2, 0.0)
            }
        }
    }

    /// Position-space time envelope of one term (unit amplitude; the
    /// amplitude lives in the spatial factor).
    pub fn time_envelope(&self, env: TimeEnv, t: f64) -> f64 {
        let (c, w) = (self.base.center[0], self.base.widths[0]);
        let z = (t - c) / w;
        let g = (-0.5 * z * z).exp();
        match env {
            TimeEnv::G => g,
            TimeEnv::DG => -z / w * g,
            TimeEnv::DDG => (z * z - 1.0) / (w * w) * g,
        }
    }

    /// Analytic full-line weighted time transform
    /// `∫ env(t) exp(s t) dt` for `s = shift - i p0`, per envelope order.
    pub fn time_laplace(&self, env: TimeEnv, s: Complex64) -> Complex64 {
        let (c, w) = (self.base.center[0], self.base.widths[0]);
        let g = w
            * std::f64::consts::TAU.sqrt()
            * (s * c + s * s * w * w / 2.0).exp();
        match env {
            TimeEnv::G => g,
            TimeEnv::DG => -s * g,
            TimeEnv::DDG => s * s * g,
        }
    }

    pub fn min_spatial_width(&self) -> f64 {
        self.base.widths[1].min(self.base.widths[2]).min(self.base.widths[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_width_is_refused() {
        assert!(matches!(
            TestFunction::new(Complex64::ONE, [0.0; 4], [1.0, 0.0, 1.0, 1.0]),
            Err(Error::NonPositiveWidth(_))
        ));
    }

    #[test]
    fn correlation_matches_direct_quadrature() {
        let f = TestFunction::new(Complex64::new(1.3, 0.0), [0.4, -0.2, 0.0, 0.7], [1.0, 0.8, 1.2, 0.9])
            .unwrap();
        let g = TestFunction::new(Complex64::new(0.7, 0.0), [-0.1, 0.5, 0.3, 0.0], [0.6, 1.1, 0.7, 1.3])
            .unwrap();
        let corr = f.correlate(&g);
        // 1-d factor check along the time axis: fix the spatial axes at zero
        // offset and compare against a direct product integral.
        let u = 0.35;
        let (nodes, weights) = crate::propagators::quad::gauss_legendre_on(200, -12.0, 12.0);
        let mut direct = Complex64::ZERO;
        for (y, w) in nodes.iter().zip(&weights) {
            // Integrate over the time argument only, all spatial = 0.
            let fy = f.value([u + y, 0.0, 0.0, 0.0]);
            let gy = g.value([*y, 0.0, 0.0, 0.0]);
            direct += fy * gy * w;
        }
        // The correlation restricted the same way: corr has the full 4-d
        // amplitude; strip the three spatial correlation factors and add
        // back the plain spatial values at the fixed arguments.
        let mut expected = corr.amp;
        for j in 1..4 {
            let (wf, wg) = (f.widths[j], g.widths[j]);
            let wc = (wf * wf + wg * wg).sqrt();
            expected /= std::f64::consts::TAU.sqrt() * wf * wg / wc;
            // spatial values at x_j = 0, y_j = 0:
            expected *= (-(0.0 - f.center[j]) * (0.0 - f.center[j]) / (2.0 * wf * wf)).exp();
            expected *= (-(0.0 - g.center[j]) * (0.0 - g.center[j]) / (2.0 * wg * wg)).exp();
        }
        let d = u - corr.center[0];
        expected *= (-d * d / (2.0 * corr.widths[0] * corr.widths[0])).exp();
        assert!((direct - expected).norm() < 1e-10, "{direct} vs {expected}");
    }

    #[test]
    fn fourier_transform_matches_quadrature() {
        let f = TestFunction::new(Complex64::new(0.9, 0.4), [0.3, -0.6, 0.2, 0.0], [0.8, 1.0, 1.4, 0.7])
            .unwrap();
        let eff = EffectiveTf::first_order(
            f,
            [Complex64::new(0.5, 0.0), Complex64::ZERO, Complex64::new(0.0, 1.0), Complex64::ZERO],
            Complex64::new(0.2, -0.1),
        );
        let (k0, k) = (1.3, [0.4, -0.9, 0.6]);
        let analytic = eff.fhat(k0, k);
        // 4-d product quadrature of the dressed Gaussian.
        let (tn, tw) = crate::propagators::quad::gauss_legendre_on(90, -10.0, 10.0);
        let mut axes = Vec::new();
        for j in 1..4 {
            axes.push(crate::propagators::quad::gauss_legendre_on(
                90,
                f.center[j] - 10.0 * f.widths[j],
                f.center[j] + 10.0 * f.widths[j],
            ));
        }
        let mut direct = Complex64::ZERO;
        let h = 1e-4;
        let dressed = |x: [f64; 4]| {
            // numerical first derivatives of the base Gaussian
            let d0 = (f.value([x[0] + h, x[1], x[2], x[3]]) - f.value([x[0] - h, x[1], x[2], x[3]]))
                / (2.0 * h);
            let d2 = (f.value([x[0], x[1], x[2] + h, x[3]]) - f.value([x[0], x[1], x[2] - h, x[3]]))
                / (2.0 * h);
            Complex64::new(0.5, 0.0) * d0
                + Complex64::new(0.0, 1.0) * d2
                + Complex64::new(0.2, -0.1) * f.value(x)
        };
        for (t, wt) in tn.iter().zip(&tw) {
            for (x1, w1) in axes[0].0.iter().zip(&axes[0].1) {
                for (x2, w2) in axes[1].0.iter().zip(&axes[1].1) {
                    for (x3, w3) in axes[2].0.iter().zip(&axes[2].1) {
                        let x = [*t, *x1, *x2, *x3];
                        let phase = Complex64::new(
                            0.0,
                            -k0 * t + k[0] * x1 + k[1] * x2 + k[2] * x3,
                        )
                        .exp();
                        direct += dressed(x) * phase * (wt * w1 * w2 * w3);
                    }
                }
            }
        }
        assert!(
            (analytic - direct).norm() < 1e-6 * analytic.norm().max(1.0),
            "{analytic} vs {direct}"
        );
    }

    #[test]
    fn reflection_flips_odd_derivative_orders() {
        let f = TestFunction::new(Complex64::ONE, [0.5, 0.2, -0.3, 0.1], [0.9, 1.1, 0.8, 1.2]).unwrap();
        let eff = EffectiveTf::first_order(
            f,
            [Complex64::ONE, Complex64::new(2.0, 0.0), Complex64::ZERO, Complex64::ZERO],
            Complex64::new(0.0, 3.0),
        );
        let r = eff.reflected();
        // fhat of the reflected dressed function is fhat(-k) of the original.
        let (k0, k) = (0.7, [0.2, -0.4, 1.1]);
        let a = r.fhat(k0, k);
        let b = eff.fhat(-k0, [-k[0], -k[1], -k[2]]);
        assert!((a - b).norm() < 1e-12 * b.norm().max(1.0));
    }
}
