//! Finite-dimensional spinor representation matrices and the covering map
//! onto Lorentz transformations.
//!
//! The irreducible representation of weight `l` acts on polynomials of
//! degree at most `2l`; its matrix elements are finite sums of monomials in
//! the four entries of a complex 2x2 matrix, with reciprocal factorials that
//! vanish whenever an argument would be negative. The same polynomials
//! extend from the unitary subgroup to every unimodular matrix.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Spin weight stored as `2l`, so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinLabel {
    pub twice_l: u32,
}

impl SpinLabel {
    pub fn new(twice_l: u32) -> Self {
        SpinLabel { twice_l }
    }

    /// Dimension of the representation, `2l + 1`.
    pub fn dim(&self) -> usize {
        self.twice_l as usize + 1
    }
}

/// Complex 2x2 matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2(pub [[Complex64; 2]; 2]);

impl Complex2x2 {
    pub fn identity() -> Self {
        Complex2x2([[Complex64::ONE, Complex64::ZERO], [Complex64::ZERO, Complex64::ONE]])
    }

    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Complex2x2([[a11, a12], [a21, a22]])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn mul(&self, other: &Complex2x2) -> Complex2x2 {
        let mut r = [[Complex64::ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    r[i][j] += self.0[i][k] * other.0[k][j];
                }
            }
        }
        Complex2x2(r)
    }

    pub fn conj(&self) -> Complex2x2 {
        Complex2x2([
            [self.0[0][0].conj(), self.0[0][1].conj()],
            [self.0[1][0].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Complex2x2 {
        Complex2x2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Complex2x2 {
        self.conj().transpose()
    }

    /// Inverse by the adjugate; valid for invertible matrices.
    pub fn inverse(&self) -> Complex2x2 {
        let d = self.det();
        Complex2x2([
            [self.0[1][1] / d, -self.0[0][1] / d],
            [-self.0[1][0] / d, self.0[0][0] / d],
        ])
    }

    /// Draws a Gaussian complex matrix and rescales it to determinant one.
    /// Entries are redrawn until they stay within the requested bound.
    pub fn random_sl2c(rng: &mut impl Rng, entry_bound: f64) -> Complex2x2 {
        loop {
            let mut g = || {
                // Box-Muller
                let u1: f64 = rng.random::<f64>().max(1e-12);
                let u2: f64 = rng.random();
                let r = (-2.0 * u1.ln()).sqrt();
                Complex64::new(
                    r * (std::f64::consts::TAU * u2).cos(),
                    r * (std::f64::consts::TAU * u2).sin(),
                )
            };
            let m = Complex2x2::new(g(), g(), g(), g());
            let d = m.det();
            if d.norm() < 0.2 {
                continue;
            }
            let s = d.sqrt();
            let a = Complex2x2([
                [m.0[0][0] / s, m.0[0][1] / s],
                [m.0[1][0] / s, m.0[1][1] / s],
            ]);
            if a.0.iter().flatten().all(|z| z.norm() <= entry_bound) {
                return a;
            }
        }
    }

    /// Uniform-enough unitary unimodular matrix from a random unit quaternion.
    pub fn random_su2(rng: &mut impl Rng) -> Complex2x2 {
        loop {
            let q: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() * 2.0 - 1.0);
            let n2: f64 = q.iter().map(|x| x * x).sum();
            if n2 < 1e-6 || n2 > 1.0 {
                continue;
            }
            let n = n2.sqrt();
            let (a, b, c, d) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
            return Complex2x2::new(
                Complex64::new(a, b),
                Complex64::new(c, d),
                Complex64::new(-c, d),
                Complex64::new(a, -b),
            );
        }
    }
}

/// Real 4x4 Lorentz matrix, row index first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentz4x4(pub [[f64; 4]; 4]);

impl Lorentz4x4 {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Lorentz4x4(m)
    }

    pub fn mul(&self, other: &Lorentz4x4) -> Lorentz4x4 {
        let mut r = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    r[i][j] += self.0[i][k] * other.0[k][j];
                }
            }
        }
        Lorentz4x4(r)
    }

    pub fn apply(&self, x: [f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| (0..4).map(|j| self.0[i][j] * x[j]).sum())
    }

    /// Max-norm of `L^T eta L - eta`.
    pub fn metric_deviation(&self) -> f64 {
        const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let mut s = 0.0;
                for k in 0..4 {
                    s += self.0[k][mu] * ETA[k] * self.0[k][nu];
                }
                let target = if mu == nu { ETA[mu] } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

fn sigma(mu: usize) -> [[Complex64; 2]; 2] {
    let i = Complex64::I;
    let o = Complex64::ZERO;
    let e = Complex64::ONE;
    match mu {
        0 => [[e, o], [o, e]],
        1 => [[o, e], [e, o]],
        2 => [[o, -i], [i, o]],
        _ => [[e, o], [o, -e]],
    }
}

/// The Lorentz transformation covered by a unimodular matrix: the unique
/// `L` with `sum_mu L^mu_nu sigma^mu = A sigma^nu A*`.
pub fn lorentz_of(a: &Complex2x2) -> Result<Lorentz4x4> {
    let deviation = (a.det() - Complex64::ONE).norm();
    if deviation >= 1e-9 {
        return Err(Error::NonUnimodular { deviation });
    }
    let astar = a.adjoint();
    let mut l = [[0.0; 4]; 4];
    for nu in 0..4 {
        // M = A sigma^nu A*; expand on the Hermitian basis.
        let s = Complex2x2(sigma(nu));
        let m = a.mul(&s).mul(&astar);
        for mu in 0..4 {
            // tr(sigma^mu M) / 2 is real for Hermitian M.
            let smu = sigma(mu);
            let mut tr = Complex64::ZERO;
            for p in 0..2 {
                for q in 0..2 {
                    tr += smu[p][q] * m.0[q][p];
                }
            }
            l[mu][nu] = 0.5 * tr.re;
        }
    }
    Ok(Lorentz4x4(l))
}

/// Dense complex matrix just large enough for the representation algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, a: vec![Complex64::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = Complex64::ONE;
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut r = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let v = self.at(i, k);
                for j in 0..n {
                    r.a[i * n + j] += v * other.at(k, j);
                }
            }
        }
        r
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut r = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                r.set(i, j, self.at(j, i).conj());
            }
        }
        r
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix { n: self.n, a: self.a.iter().zip(&other.a).map(|(x, y)| x - y).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn det(&self) -> Complex64 {
        // Gaussian elimination; the matrices here are at most a few rows.
        let n = self.n;
        let mut a = self.a.clone();
        let mut det = Complex64::ONE;
        for col in 0..n {
            let p = (col..n)
                .max_by(|&p, &q| a[p * n + col].norm().partial_cmp(&a[q * n + col].norm()).unwrap())
                .unwrap();
            if a[p * n + col].norm() == 0.0 {
                return Complex64::ZERO;
            }
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Matrix of the weight-`l` representation at `a`, rows and columns ordered
/// by ascending weight component. The entry sum is finite: any term with a
/// negative factorial argument vanishes identically.
pub fn rep_matrix(l: SpinLabel, a: &Complex2x2) -> CMatrix {
    let tl = l.twice_l;
    let dim = l.dim();
    let [a11, a12] = a.0[0];
    let [a21, a22] = a.0[1];
    let mut t = CMatrix::zeros(dim);
    for r in 0..dim as u32 {
        for c in 0..dim as u32 {
            // Exponent bookkeeping in doubled-integer arithmetic:
            // l - m = tl - r, l + m = r, l - n = tl - c, l + n = c.
            let pref =
                (factorial(tl - r) * factorial(r) * factorial(tl - c) * factorial(c)).sqrt();
            let j_lo = c.saturating_sub(r);
            let j_hi = c.min(tl - r);
            let mut sum = Complex64::ZERO;
            for j in j_lo..=j_hi {
                // Powers: A11^(tl-r-j) A12^j A21^(r-c+j) A22^(c-j).
                let num = a11.powu(tl - r - j)
                    * a12.powu(j)
                    * a21.powu(r + j - c)
                    * a22.powu(c - j);
                let den = factorial(j)
                    * factorial(tl - r - j)
                    * factorial(r + j - c)
                    * factorial(c - j);
                sum += num / den;
            }
            t.set(r as usize, c as usize, pref * sum);
        }
    }
    t
}

/// Applies the two-block wave-function transformation law at the given grid
/// points. `psi` must supply component vectors at the pulled-back points;
/// each block of `2l + 1` weight components mixes with its own
/// representation matrix, the dotted index with the conjugate family in the
/// first block and the inverse-transpose family in the second. Blocks are
/// stored concatenated, weight index major.
pub fn transform_wavefunction(
    l: SpinLabel,
    l_dot: SpinLabel,
    a: &Complex2x2,
    points: &[[f64; 4]],
    psi: impl Fn([f64; 4]) -> Vec<Complex64>,
) -> Result<Vec<Vec<Complex64>>> {
    let d1 = l.dim();
    let ddot = l_dot.dim();
    let total = 2 * d1 * ddot;
    let t1 = rep_matrix(l, a);
    let tdot1 = rep_matrix(l_dot, &a.conj());
    let t2 = rep_matrix(l, &a.adjoint().inverse());
    let tdot2 = rep_matrix(l_dot, &a.transpose().inverse());
    let back = lorentz_of(&a.inverse())?;
    let mut out = Vec::with_capacity(points.len());
    for &x in points {
        let v = psi(back.apply(x));
        if v.len() != total {
            return Err(Error::ComponentCountMismatch { expected: total, got: v.len() });
        }
        let mut w = vec![Complex64::ZERO; total];
        for block in 0..2 {
            let (t, tdot) = if block == 0 { (&t1, &tdot1) } else { (&t2, &tdot2) };
            let base = block * d1;
            for r in 0..d1 {
                for rd in 0..ddot {
                    let mut s = Complex64::ZERO;
                    for c in 0..d1 {
                        for cd in 0..ddot {
                            s += t.at(r, c) * tdot.at(rd, cd) * v[(base + c) * ddot + cd];
                        }
                    }
                    w[(base + r) * ddot + rd] = s;
                }
            }
        }
        out.push(w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_maps_to_identity() {
        let l = lorentz_of(&Complex2x2::identity()).unwrap();
        assert_eq!(l, Lorentz4x4::identity());
    }

    #[test]
    fn diagonal_unimodular_matrix_is_a_boost() {
        // diag(e^(t/2), e^(-t/2)) boosts along the third axis.
        let t = 0.7_f64;
        let a = Complex2x2::new(
            Complex64::new((t / 2.0).exp(), 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new((-t / 2.0).exp(), 0.0),
        );
        let l = lorentz_of(&a).unwrap();
        let (ch, sh) = (t.cosh(), t.sinh());
        let expected = [
            [ch, 0.0, 0.0, sh],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [sh, 0.0, 0.0, ch],
        ];
        for mu in 0..4 {
            for nu in 0..4 {
                assert!((l.0[mu][nu] - expected[mu][nu]).abs() < 1e-12, "{mu} {nu}");
            }
        }
    }

    #[test]
    fn non_unimodular_input_is_rejected() {
        let a = Complex2x2::new(
            Complex64::new(2.0, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(1.0, 0.0),
        );
        assert!(matches!(lorentz_of(&a), Err(Error::NonUnimodular { .. })));
    }

    #[test]
    fn covering_map_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = Complex2x2::random_su2(&mut rng);
            let b = Complex2x2::random_su2(&mut rng);
            let lab = lorentz_of(&a.mul(&b)).unwrap();
            let la_lb = lorentz_of(&a).unwrap().mul(&lorentz_of(&b).unwrap());
            for mu in 0..4 {
                for nu in 0..4 {
                    assert!((lab.0[mu][nu] - la_lb.0[mu][nu]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn metric_preservation_for_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = Complex2x2::random_sl2c(&mut rng, 2.0);
            let l = lorentz_of(&a).unwrap();
            assert!(l.metric_deviation() < 1e-12);
        }
    }

    #[test]
    fn weight_zero_is_trivial_and_half_is_the_matrix_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Complex2x2::random_sl2c(&mut rng, 2.0);
        let t0 = rep_matrix(SpinLabel::new(0), &a);
        assert_eq!(t0.n, 1);
        assert!((t0.at(0, 0) - Complex64::ONE).norm() == 0.0);
        let t_half = rep_matrix(SpinLabel::new(1), &a);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t_half.at(i, j), a.0[i][j], "entry {i}{j}");
            }
        }
    }

    #[test]
    fn representation_is_a_homomorphism_up_to_weight_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for twice_l in 0..=4 {
            let l = SpinLabel::new(twice_l);
            for _ in 0..20 {
                let a = Complex2x2::random_su2(&mut rng);
                let b = Complex2x2::random_su2(&mut rng);
                let tab = rep_matrix(l, &a.mul(&b));
                let ta_tb = rep_matrix(l, &a).mul(&rep_matrix(l, &b));
                assert!(tab.sub(&ta_tb).max_abs() < 1e-10, "2l = {twice_l}");
            }
        }
    }

    #[test]
    fn unitarity_and_unimodularity_on_the_compact_subgroup() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for twice_l in 0..=4 {
            let l = SpinLabel::new(twice_l);
            for _ in 0..10 {
                let a = Complex2x2::random_su2(&mut rng);
                let t = rep_matrix(l, &a);
                let gram = t.adjoint().mul(&t);
                assert!(gram.sub(&CMatrix::identity(l.dim())).max_abs() < 1e-10);
                assert!((t.det().norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    fn gaussian_wave(total: usize) -> impl Fn([f64; 4]) -> Vec<Complex64> {
        move |x: [f64; 4]| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            (0..total)
                .map(|k| Complex64::new((-0.5 * r2).exp() * (1.0 + k as f64 * x[0]), 0.3 * x[1]))
                .collect()
        }
    }

    #[test]
    fn identity_leaves_wave_functions_unchanged() {
        let l = SpinLabel::new(1);
        let ld = SpinLabel::new(0);
        let total = 2 * l.dim() * ld.dim();
        let points = [[0.3, -0.2, 0.9, 1.4], [0.0, 0.0, 0.0, 0.0]];
        let psi = gaussian_wave(total);
        let out = transform_wavefunction(l, ld, &Complex2x2::identity(), &points, &psi).unwrap();
        for (p, row) in points.iter().zip(&out) {
            let direct = psi(*p);
            for (a, b) in row.iter().zip(&direct) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn scalar_weights_relabel_points_only() {
        let l = SpinLabel::new(0);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = Complex2x2::random_su2(&mut rng);
        let points = [[1.0, 0.5, -0.3, 0.2]];
        let psi = gaussian_wave(2);
        let out = transform_wavefunction(l, l, &a, &points, &psi).unwrap();
        let back = lorentz_of(&a.inverse()).unwrap();
        let expected = psi(back.apply(points[0]));
        for (x, y) in out[0].iter().zip(&expected) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn component_count_mismatch_is_rejected() {
        let l = SpinLabel::new(1);
        let out = transform_wavefunction(l, l, &Complex2x2::identity(), &[[0.0; 4]], |_| {
            vec![Complex64::ZERO; 3]
        });
        assert!(matches!(out, Err(Error::ComponentCountMismatch { .. })));
    }

    #[test]
    fn successive_transforms_compose_in_reverse_product_order() {
        let l = SpinLabel::new(1);
        let ld = SpinLabel::new(1);
        let total = 2 * l.dim() * ld.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let a = Complex2x2::random_sl2c(&mut rng, 2.0);
        let b = Complex2x2::random_sl2c(&mut rng, 2.0);
        let points = [[0.4, 1.1, -0.7, 0.2], [2.0, 0.1, 0.0, -1.2]];
        let psi = gaussian_wave(total);
        // First transform by A, evaluated wherever the second pass asks.
        let psi_a =
            |x: [f64; 4]| transform_wavefunction(l, ld, &a, &[x], &psi).unwrap().pop().unwrap();
        let two_step = transform_wavefunction(l, ld, &b, &points, psi_a).unwrap();
        let ba = b.mul(&a);
        let one_step = transform_wavefunction(l, ld, &ba, &points, &psi).unwrap();
        for (r1, r2) in two_step.iter().zip(&one_step) {
            for (x, y) in r1.iter().zip(r2) {
                assert!((x - y).norm() < 1e-6, "{x} vs {y}");
            }
        }
    }
}
