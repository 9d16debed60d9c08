use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Power series `c_0 + c_1 w + ... + c_T w^T + O(w^{T+1})` with exact
/// rational coefficients.
///
/// Invariant: `coeffs.len() == order + 1`. Binary operations truncate to
/// the smaller of the two orders, so every stored coefficient is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    /// Builds a series from its coefficients, lowest power first.
    ///
    /// # Panics
    /// Panics on an empty vector; a series always carries at least `c_0`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Series { coeffs }
    }

    /// Convenience constructor from integer ratios `(p, q)`.
    pub fn from_ratios(ratios: &[(i64, i64)]) -> Self {
        Self::from_coeffs(
            ratios
                .iter()
                .map(|&(p, q)| Rational::new(p.into(), q.into()))
                .collect(),
        )
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * w^power`, or zero if the power is beyond the order.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Builds a series of the given order from a coefficient generator.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Series { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, index: usize) -> Result<&Rational> {
        self.coeffs
            .get(index)
            .ok_or(Error::IndexOutOfOrder { index, order: self.order() })
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when every odd-index coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// Drops coefficients above `order`. Asking for a higher order than
    /// the series carries is a no-op: precision cannot be invented.
    pub fn truncate(&self, order: usize) -> Series {
        let keep = order.min(self.order()) + 1;
        Series { coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `f(c w)`: multiplies the k-th coefficient by `c^k`.
    pub fn scale_argument(&self, c: &Rational) -> Series {
        let mut power = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &power);
            power *= c;
        }
        Series { coeffs: out }
    }

    /// Cauchy product truncated to the common order.
    pub fn mul_series(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }

    pub fn add_series(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series::from_fn(order, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn sub_series(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series::from_fn(order, |k| &self.coeffs[k] - &other.coeffs[k])
    }

    /// Multiplicative inverse up to the truncation order.
    pub fn recip(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = a0.recip();
        let order = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc += a * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    /// Divides by `w^power`. The first `power` coefficients must vanish;
    /// the result has order `order - power`.
    pub fn div_w_power(&self, power: usize) -> Result<Series> {
        if power > self.order() {
            return Err(Error::IndexOutOfOrder { index: power, order: self.order() });
        }
        if let Some(index) = self.coeffs[..power].iter().position(|c| !c.is_zero()) {
            return Err(Error::NonzeroLowCoefficient { index, power });
        }
        Ok(Series { coeffs: self.coeffs[power..].to_vec() })
    }

    /// Multiplies by `w^power`, keeping the order (top terms fall off).
    pub fn mul_w_power(&self, power: usize) -> Series {
        let order = self.order();
        Series::from_fn(order, |k| {
            if k >= power {
                self.coeffs[k - power].clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn pow(&self, mut exp: usize) -> Series {
        let mut base = self.clone();
        let mut acc = Series::one(self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_series(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_series(&base);
            }
        }
        acc
    }

    /// Evaluates the polynomial `sum_k poly[k] * self^k` as a series.
    pub fn compose_polynomial(&self, poly: &[Rational]) -> Series {
        let mut acc = Series::zero(self.order());
        for c in poly.iter().rev() {
            acc = acc.mul_series(self);
            acc.coeffs[0] += c;
        }
        acc
    }

    /// Coefficients rendered as `p/q` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "\"{}\"", format_rational(c))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        if raw.is_empty() {
            return Err(serde::de::Error::custom("empty series"));
        }
        let coeffs = raw
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Series { coeffs })
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.add_series(rhs)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.sub_series(rhs)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.mul_series(rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
