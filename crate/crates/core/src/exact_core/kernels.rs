use num_bigint::BigInt;
use num_traits::One;

use super::rational::{factorial, Rational};
use super::series::Series;
use crate::error::Result;

fn inv_factorial(n: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// `exp(c w) = sum c^n w^n / n!`.
pub fn exp_series(c: &Rational, order: usize) -> Series {
    let mut power = Rational::one();
    Series::from_fn(order, |n| {
        let term = &power * inv_factorial(n);
        power *= c;
        term
    })
}

/// `cosh(c w) = sum c^{2k} w^{2k} / (2k)!`.
pub fn cosh_series(c: &Rational, order: usize) -> Series {
    let c2 = c * c;
    let mut power = Rational::one();
    let mut out = Series::zero(order).into_coeffs();
    for k in (0..=order).step_by(2) {
        out[k] = &power * inv_factorial(k);
        power *= &c2;
    }
    Series::from_coeffs(out)
}

/// `sinh(c w) / w = sum c^{2k+1} w^{2k} / (2k+1)!`.
///
/// Ratios of hyperbolic sines go through this kernel so the common factor
/// `w` never has to be divided out of a series with zero constant term.
pub fn sinh_over_w_series(c: &Rational, order: usize) -> Series {
    sinhc_series(c, order).scale(c)
}

/// `sinh(c w) / (c w) = sum c^{2k} w^{2k} / (2k+1)!`, equal to one at `c = 0`.
pub fn sinhc_series(c: &Rational, order: usize) -> Series {
    let c2 = c * c;
    let mut power = Rational::one();
    let mut out = Series::zero(order).into_coeffs();
    for k in (0..=order).step_by(2) {
        out[k] = &power * inv_factorial(k + 1);
        power *= &c2;
    }
    Series::from_coeffs(out)
}

/// `n! * [w^n] a`.
pub fn egf_coeff(a: &Series, n: usize) -> Result<Rational> {
    let c = a.coeff(n)?;
    Ok(c * Rational::from_integer(factorial(n)))
}
