//! Exact Gaussian-rational coefficients.
//!
//! Every coefficient produced by the operator algebra is of the form
//! `i^m * p/q` times integer matrix entries, so `a + b i` with rational
//! `a`, `b` closes under all operations and keeps identity checks decidable.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact complex rational `a + b i`.
pub type Coeff = num_complex::Complex<BigRational>;

pub fn zero() -> Coeff {
    Coeff::new(BigRational::zero(), BigRational::zero())
}

pub fn one() -> Coeff {
    Coeff::new(BigRational::one(), BigRational::zero())
}

/// The imaginary unit.
pub fn i() -> Coeff {
    Coeff::new(BigRational::zero(), BigRational::one())
}

pub fn int(n: i64) -> Coeff {
    Coeff::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

pub fn ratio(num: i64, den: i64) -> Coeff {
    Coeff::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// `i^m` for any integer exponent.
pub fn i_pow(m: u32) -> Coeff {
    match m % 4 {
        0 => one(),
        1 => i(),
        2 => -one(),
        _ => -i(),
    }
}

/// `1/m!` as an exact rational.
pub fn inv_factorial(m: u32) -> Coeff {
    let mut f = BigInt::one();
    for k in 2..=m {
        f *= BigInt::from(k);
    }
    Coeff::new(BigRational::new(BigInt::one(), f), BigRational::zero())
}

pub fn conj(c: &Coeff) -> Coeff {
    Coeff::new(c.re.clone(), -c.im.clone())
}

pub fn is_zero(c: &Coeff) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // Good to ~1e-15 for the coefficient sizes the series produces.
    let num = r.numer();
    let den = r.denom();
    let nf = num.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = den.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

pub fn to_c64(c: &Coeff) -> Complex64 {
    Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im))
}

/// Renders `3/4 - 1/2 i` style; used by displays and the JSON form.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_coeff(c: &Coeff) -> String {
    if c.im.is_zero() {
        format_rational(&c.re)
    } else if c.re.is_zero() {
        format!("{} i", format_rational(&c.im))
    } else if c.im.is_negative() {
        format!("{} - {} i", format_rational(&c.re), format_rational(&(-c.im.clone())))
    } else {
        format!("{} + {} i", format_rational(&c.re), format_rational(&c.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_powers_cycle() {
        assert_eq!(i_pow(0), one());
        assert_eq!(i_pow(1), i());
        assert_eq!(i_pow(2), -one());
        assert_eq!(i_pow(3), -i());
        assert_eq!(i_pow(4), one());
    }

    #[test]
    fn factorial_inverse() {
        assert_eq!(inv_factorial(0), one());
        assert_eq!(inv_factorial(3), ratio(1, 6));
        assert_eq!(inv_factorial(5), ratio(1, 120));
    }

    #[test]
    fn conversion_to_f64() {
        let c = ratio(3, 4) + ratio(-1, 2) * i();
        let z = to_c64(&c);
        assert!((z.re - 0.75).abs() < 1e-15);
        assert!((z.im + 0.5).abs() < 1e-15);
    }
}
