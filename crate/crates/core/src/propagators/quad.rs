//! Gauss-Legendre nodes and the spherical momentum grid.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights on [-1, 1]; construction is cached per order since the
/// inner loops request the same rules millions of times.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = gauss_legendre_uncached(n);
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

fn gauss_legendre_uncached(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and its derivative.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Affine image of the [-1, 1] rule on [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

/// Spherical product grid over momentum space: Gauss-Legendre radially on
/// [0, cutoff] and in the polar cosine, uniform azimuth (spectrally accurate
/// for periodic integrands).
pub struct SphericalGrid {
    pub radial: (Vec<f64>, Vec<f64>),
    pub polar: (Vec<f64>, Vec<f64>),
    pub n_azimuth: usize,
}

impl SphericalGrid {
    pub fn new(cutoff: f64, n_radial: usize, n_polar: usize, n_azimuth: usize) -> Self {
        SphericalGrid {
            radial: gauss_legendre_on(n_radial, 0.0, cutoff),
            polar: gauss_legendre(n_polar),
            n_azimuth,
        }
    }

    /// Σ w · f(r, k), with the r² measure factor included in the weight.
    pub fn sum(&self, mut f: impl FnMut(f64, [f64; 3]) -> num_complex::Complex64) -> num_complex::Complex64 {
        let mut total = num_complex::Complex64::ZERO;
        let dphi = std::f64::consts::TAU / self.n_azimuth as f64;
        for (r, wr) in self.radial.0.iter().zip(&self.radial.1) {
            let r2w = r * r * wr;
            for (u, wu) in self.polar.0.iter().zip(&self.polar.1) {
                let s = (1.0 - u * u).max(0.0).sqrt();
                for q in 0..self.n_azimuth {
                    let phi = dphi * q as f64;
                    let k = [r * s * phi.cos(), r * s * phi.sin(), r * u];
                    total += f(*r, k) * (r2w * wu * dphi);
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules_are_exact_for_polynomials() {
        // n-point rule integrates degree 2n-1 exactly.
        let (x, w) = gauss_legendre(5);
        for deg in 0..=9u32 {
            let num: f64 = x.iter().zip(&w).map(|(t, v)| v * t.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((num - exact).abs() < 1e-13, "degree {deg}");
        }
    }

    #[test]
    fn gaussian_integral_on_interval() {
        let (x, w) = gauss_legendre_on(64, -8.0, 8.0);
        let s: f64 = x.iter().zip(&w).map(|(t, v)| v * (-t * t / 2.0).exp()).sum();
        assert!((s - (std::f64::consts::TAU).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn spherical_grid_integrates_an_isotropic_gaussian() {
        // ∫ d3k exp(-|k|^2 / 2) = (2 pi)^(3/2)
        let grid = SphericalGrid::new(12.0, 48, 8, 8);
        let v = grid.sum(|_, k| {
            let k2: f64 = k.iter().map(|x| x * x).sum();
            num_complex::Complex64::new((-k2 / 2.0).exp(), 0.0)
        });
        assert!((v.re - std::f64::consts::TAU.powf(1.5)).abs() < 1e-10);
        assert!(v.im.abs() < 1e-14);
    }
}
