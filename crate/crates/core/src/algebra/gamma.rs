//! Dirac gamma matrices in the standard representation:
//! `g0 = diag(1,1,-1,-1)`, `gk = [[0, sigma_k], [-sigma_k, 0]]`.
//!
//! Entries are exact (`0`, `±1`, `±i`), so the operator algebra built on them
//! stays in Gaussian rationals. `g0` is Hermitian, the spatial ones are
//! anti-Hermitian, and `g^mu g^nu + g^nu g^mu = 2 eta^{mu nu}`.

use num_complex::Complex64;

use super::coeff::{self, Coeff};

/// Entry of a gamma matrix: 0, ±1 or ±i, encoded as (re, im) in {-1,0,1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaEntry {
    pub re: i8,
    pub im: i8,
}

impl GammaEntry {
    pub const ZERO: GammaEntry = GammaEntry { re: 0, im: 0 };

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn coeff(&self) -> Coeff {
        coeff::int(self.re as i64) + coeff::int(self.im as i64) * coeff::i()
    }

    pub fn c64(&self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    pub fn conj(&self) -> GammaEntry {
        GammaEntry { re: self.re, im: -self.im }
    }
}

const O: GammaEntry = GammaEntry { re: 0, im: 0 };
const P: GammaEntry = GammaEntry { re: 1, im: 0 };
const N: GammaEntry = GammaEntry { re: -1, im: 0 };
const PI: GammaEntry = GammaEntry { re: 0, im: 1 };
const NI: GammaEntry = GammaEntry { re: 0, im: -1 };

/// `GAMMA[mu][row][col]`, rows and columns 0-based (spinor component - 1).
pub const GAMMA: [[[GammaEntry; 4]; 4]; 4] = [
    // g0
    [
        [P, O, O, O],
        [O, P, O, O],
        [O, O, N, O],
        [O, O, O, N],
    ],
    // g1
    [
        [O, O, O, P],
        [O, O, P, O],
        [O, N, O, O],
        [N, O, O, O],
    ],
    // g2
    [
        [O, O, O, NI],
        [O, O, PI, O],
        [O, PI, O, O],
        [NI, O, O, O],
    ],
    // g3
    [
        [O, O, P, O],
        [O, O, O, N],
        [N, O, O, O],
        [O, P, O, O],
    ],
];

/// Minkowski metric diag(1,-1,-1,-1).
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Gamma entry with 1-based spinor indices, matching component labels.
pub fn gamma(mu: usize, alpha: u8, beta: u8) -> GammaEntry {
    GAMMA[mu][(alpha - 1) as usize][(beta - 1) as usize]
}

/// Sign of the diagonal of g0 at 1-based spinor index: +1, +1, -1, -1.
/// This is the sign picked up when conjugating a single spinor component.
pub fn g0_sign(alpha: u8) -> i8 {
    GAMMA[0][(alpha - 1) as usize][(alpha - 1) as usize].re
}
