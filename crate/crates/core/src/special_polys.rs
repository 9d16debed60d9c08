//! Higher-order Bernoulli and Euler polynomials from their exponential
//! generating functions
//!
//! ```text
//! (t / (e^t - 1))^p e^{x t} = sum B_n^{(p)}(x) t^n / n!
//! (2 / (e^t + 1))^p e^{x t} = sum E_n^{(p)}(x) t^n / n!
//! ```
//!
//! All values come from one route: build the EGF as a truncated series and
//! read off `n! [t^n]`.
//!
//! Bernoulli numbers have two conventions in play: `B_n(1)` (first
//! Bernoulli number `+1/2`) and `B_n(0)` (first Bernoulli number `-1/2`,
//! the one the umbral evaluation `B^n` produces). There is deliberately no
//! bare `bernoulli_number`; use [`bernoulli_number_at`].

use num_traits::{One, Zero};

use crate::exact_core::{binomial, egf_coeff, exp_series, factorial, Rational, Series};

/// `(e^{c w} - 1) / (c w) = sum c^k w^k / (k+1)!`, the constant 1 at `c = 0`.
pub(crate) fn exp_difference_quotient(c: &Rational, order: usize) -> Series {
    let mut power = Rational::one();
    Series::from_fn(order, |k| {
        let term = &power / Rational::from_integer(factorial(k + 1));
        power *= c;
        term
    })
}

/// `2 / (e^{c w} + 1)`.
pub(crate) fn euler_kernel(c: &Rational, order: usize) -> Series {
    let denom = &exp_series(c, order) + &Series::one(order);
    denom
        .recip()
        .expect("constant term is 2")
        .scale(&Rational::from_integer(2.into()))
}

/// `(t / (e^t - 1))^p` to the given order.
pub fn bernoulli_egf(p: usize, order: usize) -> Series {
    exp_difference_quotient(&Rational::one(), order)
        .recip()
        .expect("constant term is 1")
        .pow(p)
}

/// `(2 / (e^t + 1))^p` to the given order.
pub fn euler_egf(p: usize, order: usize) -> Series {
    euler_kernel(&Rational::one(), order).pow(p)
}

fn coefficient_with_shift(base: &Series, n: usize, x: &Rational) -> Rational {
    let shifted = base.mul_series(&exp_series(x, n));
    egf_coeff(&shifted, n).expect("order is n")
}

/// `B_n^{(p)}(x)`.
pub fn bernoulli_poly(n: usize, p: usize, x: &Rational) -> Rational {
    coefficient_with_shift(&bernoulli_egf(p, n), n, x)
}

/// `E_n^{(p)}(x)`.
pub fn euler_poly(n: usize, p: usize, x: &Rational) -> Rational {
    coefficient_with_shift(&euler_egf(p, n), n, x)
}

/// Euler number `E_n = 2^n E_n(1/2)`, the EGF coefficients of `sech t`.
pub fn euler_number(n: usize) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    euler_poly(n, 1, &half) * Rational::from_integer(num_traits::pow(2.into(), n))
}

/// Which evaluation point defines the Bernoulli numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BernoulliAt {
    /// `B_n(0)`: `B_1 = -1/2`. This is what `(B)^n` evaluates to umbrally.
    Zero,
    /// `B_n(1)`: `B_1 = +1/2`.
    One,
}

pub fn bernoulli_number_at(n: usize, at: BernoulliAt) -> Rational {
    let x = match at {
        BernoulliAt::Zero => Rational::zero(),
        BernoulliAt::One => Rational::one(),
    };
    bernoulli_poly(n, 1, &x)
}

/// An Appell sequence `P_n(x) = sum_j C(n,j) P_j(0) x^{n-j}`, stored by its
/// values at zero. Evaluating many arguments of one order `p` this way
/// avoids rebuilding the EGF per argument.
#[derive(Clone, Debug)]
pub struct AppellValues {
    at_zero: Vec<Rational>,
}

impl AppellValues {
    /// `E_j^{(p)}(0)` for `j <= max_n`.
    pub fn euler(p: usize, max_n: usize) -> Self {
        let egf = euler_egf(p, max_n);
        let at_zero = (0..=max_n).map(|j| egf_coeff(&egf, j).expect("in range")).collect();
        AppellValues { at_zero }
    }

    /// `B_j^{(p)}(0)` for `j <= max_n`.
    pub fn bernoulli(p: usize, max_n: usize) -> Self {
        let egf = bernoulli_egf(p, max_n);
        let at_zero = (0..=max_n).map(|j| egf_coeff(&egf, j).expect("in range")).collect();
        AppellValues { at_zero }
    }

    pub fn max_n(&self) -> usize {
        self.at_zero.len() - 1
    }

    /// `P_n(x)`.
    ///
    /// # Panics
    /// Panics when `n` exceeds the tabulated range.
    pub fn eval(&self, n: usize, x: &Rational) -> Rational {
        assert!(n <= self.max_n(), "degree {n} beyond table");
        let mut acc = Rational::zero();
        let mut x_power = Rational::one();
        for k in 0..=n {
            // term with x^k uses P_{n-k}(0)
            acc += Rational::from_integer(binomial(n, k)) * &self.at_zero[n - k] * &x_power;
            x_power *= x;
        }
        acc
    }
}
