use num_traits::{One, Zero};

use super::sech_series;
use crate::error::{Error, Result};
use crate::exact_core::{exp_series, sinh_over_w_series, sinhc_series, Rational, Series};
use crate::loop_engine::{count_nonadjacent, count_with_initial};
use crate::report::VerificationReport;
use crate::special_polys::{euler_kernel, exp_difference_quotient};

/// An even polynomial `sum_j c_j s^{2j}` stored as `(2j, c_j)`, ascending,
/// with `j` running over `1..=ceil(m/2)`.
pub type BracketPoly = Vec<(usize, Rational)>;

fn power_of_two(e: usize) -> Rational {
    Rational::from_integer(num_bigint::BigInt::one() << e)
}

fn signed(j: usize, value: Rational) -> Rational {
    if j % 2 == 1 {
        value
    } else {
        -value
    }
}

fn require_loops(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidArgument("m must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Reflected Brownian motion: the first loop is `sech^2/2`, every other is
/// `sech^2/4`, so
/// `P_m(s) = sum_j (-1)^{j+1} [n(1,j,m)/2^{2j-1} + N(j,m-1)/2^{2j}] s^{2j}`.
pub fn bm_bracket_poly(m: usize) -> Result<BracketPoly> {
    require_loops(m)?;
    Ok((1..=m.div_ceil(2))
        .map(|j| {
            let with_first = Rational::from_integer(count_with_initial(1, j, m).into()) / power_of_two(2 * j - 1);
            let without = Rational::from_integer(count_nonadjacent(j, m - 1).into()) / power_of_two(2 * j);
            (2 * j, signed(j, with_first + without))
        })
        .collect())
}

/// Bessel(3): every loop is `sech^2/4`, so
/// `Q_m(s) = sum_j (-1)^{j+1} N(j,m) s^{2j} / 4^j`.
pub fn bessel_bracket_poly(m: usize) -> Result<BracketPoly> {
    require_loops(m)?;
    Ok((1..=m.div_ceil(2))
        .map(|j| {
            let count = Rational::from_integer(count_nonadjacent(j, m).into());
            (2 * j, signed(j, count / power_of_two(2 * j)))
        })
        .collect())
}

/// Coefficients of the bracket as a polynomial in `s^2`.
pub(crate) fn in_square(bracket: &BracketPoly) -> Vec<Rational> {
    let top = bracket.iter().map(|(p, _)| p / 2).max().unwrap_or(0);
    let mut dense = vec![Rational::zero(); top + 1];
    for (p, c) in bracket {
        dense[p / 2] += c;
    }
    dense
}

/// The bracket at a series `s`.
pub fn eval_bracket(bracket: &BracketPoly, s: &Series) -> Series {
    s.mul_series(s).compose_polynomial(&in_square(bracket))
}

fn geometric(bracket_value: &Series) -> Result<Series> {
    (&Series::one(bracket_value.order()) - bracket_value).recip()
}

/// `2^m sech((m+1) w) = sech^{m+1}(w) / (1 - P_m(sech w))`.
pub fn bm_master_check(m: usize, order: usize) -> Result<VerificationReport> {
    let bracket = bm_bracket_poly(m)?;
    let s = sech_series(order);
    let lhs = s.scale_argument(&Rational::from_integer((m + 1).into())).scale(&power_of_two(m));
    let rhs = s.pow(m + 1).mul_series(&geometric(&eval_bracket(&bracket, &s))?);
    Ok(VerificationReport::compare(&lhs, &rhs))
}

/// `(m+2) w / sinh((m+2) w) = ((m+2) w / sinh(2w)) (sech^m w / 2^m) / (1 - Q_m(sech w))`.
pub fn bessel_master_check(m: usize, order: usize) -> Result<VerificationReport> {
    let bracket = bessel_bracket_poly(m)?;
    let s = sech_series(order);
    let mm2 = Rational::from_integer((m + 2).into());
    let lhs = sinhc_series(&mm2, order).recip()?;
    let two = Rational::from_integer(2.into());
    let front = sinh_over_w_series(&two, order).recip()?.scale(&mm2);
    let rhs = front
        .mul_series(&s.pow(m).scale(&power_of_two(m).recip()))
        .mul_series(&geometric(&eval_bracket(&bracket, &s))?);
    Ok(VerificationReport::compare(&lhs, &rhs))
}

/// `E(u)^2 e^u = sech^2(u/2)`, the bracket variable after `w -> t/2`.
fn euler_square_shift(u: &Rational, order: usize) -> Series {
    let e = euler_kernel(u, order);
    e.mul_series(&e).mul_series(&exp_series(u, order))
}

/// Generating-function form of the Euler identity:
/// `2 e^{x t} / (e^{(m+1) t} + 1) = e^{x t} E(t)^{m+1} / 2^m / (1 - P_m(E(t)^2 e^t))`
/// with `E(t) = 2 / (e^t + 1)`. Coefficient `n` is `(m+1)^n E_n(x/(m+1)) / n!`.
pub fn bm_egf_check(m: usize, x: &Rational, order: usize) -> Result<VerificationReport> {
    let bracket = bm_bracket_poly(m)?;
    let one = Rational::one();
    let shift = exp_series(x, order);
    let lhs = euler_kernel(&Rational::from_integer((m + 1).into()), order).mul_series(&shift);
    let g = euler_square_shift(&one, order);
    let rhs = shift
        .mul_series(&euler_kernel(&one, order).pow(m + 1))
        .scale(&power_of_two(m).recip())
        .mul_series(&geometric(&g.compose_polynomial(&in_square(&bracket)))?);
    Ok(VerificationReport::compare(&lhs, &rhs))
}

/// Generating-function form of the Bessel identity, in `t` with `u = t/(m+2)`:
/// `t (e^{2u} - 1) e^{x u} / (e^t - 1) = t e^{x u} (e^u + 1)^{-m} / (1 - Q_m(E(u)^2 e^u))`.
/// Coefficient `n + 1` is `(B_{n+1}((x+2)/(m+2)) - B_{n+1}(x/(m+2))) / (n+1)!`.
pub fn bessel_egf_check(m: usize, x: &Rational, order: usize) -> Result<VerificationReport> {
    let bracket = bessel_bracket_poly(m)?;
    let one = Rational::one();
    let u = Rational::new(1.into(), (m + 2).into());
    let two_u = &u + &u;
    let shift = exp_series(&(x * &u), order);
    // (e^{2u} - 1)/t = 2u * (e^{2u t'} - 1)/(2u t'), dividing t out before the reciprocal
    let lhs = exp_difference_quotient(&two_u, order)
        .scale(&two_u)
        .mul_series(&exp_difference_quotient(&one, order).recip()?)
        .mul_series(&shift)
        .mul_w_power(1);
    let half_e = euler_kernel(&u, order).scale(&Rational::new(1.into(), 2.into()));
    let g = euler_square_shift(&u, order);
    let rhs = shift
        .mul_series(&half_e.pow(m))
        .mul_series(&geometric(&g.compose_polynomial(&in_square(&bracket)))?)
        .mul_w_power(1);
    Ok(VerificationReport::compare(&lhs, &rhs))
}

/// The three-loop Bessel case `t (e^{2t/5} - 1) e^{t x / 5} / (e^t - 1)`.
pub fn egf_proof_check(x: &Rational, order: usize) -> Result<VerificationReport> {
    bessel_egf_check(3, x, order)
}
