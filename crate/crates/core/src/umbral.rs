//! Umbral Bernoulli, Euler and uniform symbols, evaluated through their
//! exponential generating functions.
//!
//! A [`SymbolCombo`] is an affine expression `x + c_1 S_1 + c_2 S_2 + ...`
//! in which every `S_i` is an independent copy of a symbol of some order
//! `p` (the `p`-fold independent sum). Its `n`-th moment is
//! `n! [w^n] e^{x w} prod_i F_{kind_i}(c_i w)^{p_i}` with
//!
//! | kind      | `F(w)`              |
//! |-----------|---------------------|
//! | Bernoulli | `w / (e^w - 1)`     |
//! | Euler     | `2 / (e^w + 1)`     |
//! | Uniform   | `(e^w - 1) / w`     |
//!
//! Mixed moments of dependent copies are not modelled.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_core::{egf_coeff, exp_series, format_rational, parse_rational, rational_serde, Rational, Series};
use crate::report::VerificationReport;
use crate::special_polys::{euler_kernel, exp_difference_quotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolKind {
    Bernoulli,
    Euler,
    Uniform,
}

impl SymbolKind {
    fn letter(self) -> char {
        match self {
            SymbolKind::Bernoulli => 'B',
            SymbolKind::Euler => 'E',
            SymbolKind::Uniform => 'U',
        }
    }

    /// `F(c w)^order` to the given truncation order.
    fn egf(self, scale: &Rational, order: usize, trunc: usize) -> Series {
        if scale.is_zero() || order == 0 {
            return Series::one(trunc);
        }
        let base = match self {
            SymbolKind::Uniform => exp_difference_quotient(scale, trunc),
            SymbolKind::Bernoulli => exp_difference_quotient(scale, trunc)
                .recip()
                .expect("constant term is 1"),
            SymbolKind::Euler => euler_kernel(scale, trunc),
        };
        base.pow(order)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTerm {
    pub kind: SymbolKind,
    /// Number of independent copies summed, `p >= 1`.
    pub order: usize,
    #[serde(with = "rational_serde")]
    pub scale: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolCombo {
    #[serde(with = "rational_serde")]
    pub offset: Rational,
    pub terms: Vec<SymbolTerm>,
}

impl SymbolCombo {
    pub fn new(offset: Rational) -> Self {
        SymbolCombo { offset, terms: Vec::new() }
    }

    /// Appends an independent `scale * S^{(order)}`.
    pub fn with(mut self, kind: SymbolKind, order: usize, scale: Rational) -> Self {
        self.terms.push(SymbolTerm { kind, order, scale });
        self
    }

    /// Independent union of two combos; offsets add.
    pub fn union(&self, other: &SymbolCombo) -> SymbolCombo {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SymbolCombo { offset: &self.offset + &other.offset, terms }
    }

    /// Parses the compact grammar
    ///
    /// ```text
    /// combo := ['-'] term (('+' | '-') term)*
    /// term  := coef | [coef '*'] atom
    /// atom  := 'x' | ('B' | 'E' | 'U') ['^' order]
    /// coef  := integer ['/' integer]
    /// ```
    ///
    /// `x` stands for the supplied `x` value; every symbol occurrence is an
    /// independent copy. Example: `"x + 2*B^1 + E^3"`.
    pub fn parse_with_x(src: &str, x: &Rational) -> Result<SymbolCombo> {
        parse::combo(src, x)
    }
}

/// EGF of the combo truncated at `order`.
pub fn combo_egf(c: &SymbolCombo, order: usize) -> Series {
    c.terms.iter().fold(exp_series(&c.offset, order), |acc, t| {
        acc.mul_series(&t.kind.egf(&t.scale, t.order, order))
    })
}

/// `(x + sum c_i S_i)^n` under the evaluation rule.
pub fn combo_moment(c: &SymbolCombo, n: usize) -> Rational {
    egf_coeff(&combo_egf(c, n), n).expect("egf built to order n")
}

pub fn verify_symbol_identity(lhs: &SymbolCombo, rhs: &SymbolCombo, order: usize) -> VerificationReport {
    VerificationReport::compare(&combo_egf(lhs, order), &combo_egf(rhs, order))
}

impl fmt::Display for SymbolCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.offset.is_zero() || self.terms.is_empty() {
            write!(f, "{}", format_rational(&self.offset))?;
            first = false;
        }
        for t in &self.terms {
            let neg = t.scale.is_negative();
            let mag = t.scale.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", format_rational(&mag))?;
            }
            write!(f, "{}^{}", t.kind.letter(), t.order)?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for SymbolCombo {
    type Err = Error;

    /// Parses with `x = 0`.
    fn from_str(s: &str) -> Result<Self> {
        SymbolCombo::parse_with_x(s, &Rational::zero())
    }
}

mod parse {
    use super::*;

    enum Atom {
        X,
        Symbol(SymbolKind, usize),
    }

    fn err(src: &str, what: &str) -> Error {
        Error::Parse(format!("{what} in combo {src:?}"))
    }

    pub(super) fn combo(src: &str, x: &Rational) -> Result<SymbolCombo> {
        let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err(src, "empty expression"));
        }
        let mut out = SymbolCombo::new(Rational::zero());
        let mut rest = compact.as_str();
        let mut sign = Rational::one();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        loop {
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            if term.is_empty() {
                return Err(err(src, "missing term"));
            }
            apply_term(src, term, &sign, x, &mut out)?;
            if tail.is_empty() {
                break;
            }
            sign = if tail.starts_with('-') { -Rational::one() } else { Rational::one() };
            rest = &tail[1..];
        }
        Ok(out)
    }

    fn apply_term(src: &str, term: &str, sign: &Rational, x: &Rational, out: &mut SymbolCombo) -> Result<()> {
        let (coef, atom) = match term.split_once('*') {
            Some((c, a)) => (parse_rational(c).map_err(|_| err(src, "bad coefficient"))?, Some(a)),
            None => match atom(src, term) {
                Ok(a) => return push(out, sign.clone(), a, x),
                Err(_) => (parse_rational(term).map_err(|_| err(src, "bad term"))?, None),
            },
        };
        let coef = coef * sign;
        match atom {
            None => {
                out.offset += coef;
                Ok(())
            }
            Some(a) => push(out, coef, self::atom(src, a)?, x),
        }
    }

    fn push(out: &mut SymbolCombo, coef: Rational, atom: Atom, x: &Rational) -> Result<()> {
        match atom {
            Atom::X => out.offset += coef * x,
            Atom::Symbol(kind, order) => out.terms.push(SymbolTerm { kind, order, scale: coef }),
        }
        Ok(())
    }

    fn atom(src: &str, s: &str) -> Result<Atom> {
        if s == "x" {
            return Ok(Atom::X);
        }
        let (name, order) = match s.split_once('^') {
            Some((n, o)) => (n, o.parse::<usize>().map_err(|_| err(src, "bad order"))?),
            None => (s, 1),
        };
        if order == 0 {
            return Err(err(src, "symbol order must be at least 1"));
        }
        let kind = match name {
            "B" => SymbolKind::Bernoulli,
            "E" => SymbolKind::Euler,
            "U" => SymbolKind::Uniform,
            _ => return Err(err(src, "unknown symbol")),
        };
        Ok(Atom::Symbol(kind, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{cosh_series, Series};
    use crate::special_polys::{bernoulli_poly, euler_poly};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn one() -> Rational {
        q(1, 1)
    }

    #[test]
    fn uniform_egf_and_moments() {
        let u = SymbolCombo::new(q(0, 1)).with(SymbolKind::Uniform, 1, one());
        let expected = Series::from_fn(6, |k| Rational::new(1.into(), crate::exact_core::factorial(k + 1)));
        assert_eq!(combo_egf(&u, 6), expected);
        for n in 0..10 {
            assert_eq!(combo_moment(&u, n), q(1, n as i64 + 1));
        }
    }

    #[test]
    fn cancellation_rule() {
        let bu = SymbolCombo::new(q(0, 1))
            .with(SymbolKind::Bernoulli, 1, one())
            .with(SymbolKind::Uniform, 1, one());
        assert_eq!(combo_egf(&bu, 20), Series::one(20));
        let x = q(-7, 3);
        let shifted = SymbolCombo { offset: x.clone(), ..bu.clone() };
        for n in 0..8 {
            assert_eq!(combo_moment(&shifted, n), num_traits::pow(x.clone(), n));
        }
        assert!(verify_symbol_identity(&bu, &SymbolCombo::default(), 30).equal);
    }

    #[test]
    fn euler_symbol_gives_sech() {
        let c = SymbolCombo::new(one()).with(SymbolKind::Euler, 1, q(2, 1));
        assert_eq!(combo_egf(&c, 16), cosh_series(&one(), 16).recip().unwrap());
    }

    #[test]
    fn moments_match_polynomials() {
        let x = q(3, 5);
        let e = SymbolCombo::new(x.clone()).with(SymbolKind::Euler, 1, one());
        let b = SymbolCombo::new(x.clone()).with(SymbolKind::Bernoulli, 3, one());
        for n in 0..10 {
            assert_eq!(combo_moment(&e, n), euler_poly(n, 1, &x));
            assert_eq!(combo_moment(&b, n), bernoulli_poly(n, 3, &x));
        }
    }

    #[test]
    fn doubling_and_order_identities() {
        let two_b = SymbolCombo::default().with(SymbolKind::Bernoulli, 1, q(2, 1));
        let b_plus_e = SymbolCombo::default()
            .with(SymbolKind::Bernoulli, 1, one())
            .with(SymbolKind::Euler, 1, one());
        assert!(verify_symbol_identity(&two_b, &b_plus_e, 40).equal);

        let e2 = SymbolCombo::default().with(SymbolKind::Euler, 2, one());
        let e1e1 = SymbolCombo::default()
            .with(SymbolKind::Euler, 1, one())
            .with(SymbolKind::Euler, 1, one());
        assert!(verify_symbol_identity(&e2, &e1e1, 40).equal);

        // and a genuinely different pair is caught
        let r = verify_symbol_identity(&two_b, &e2, 10);
        assert!(!r.equal);
        assert_eq!(r.first_mismatch, Some(2));
    }

    #[test]
    fn zero_scale_is_empty_factor() {
        let c = SymbolCombo::default().with(SymbolKind::Bernoulli, 3, q(0, 1));
        assert_eq!(combo_egf(&c, 5), Series::one(5));
    }

    #[test]
    fn parses_grammar() {
        let c = SymbolCombo::parse_with_x("x + 2*B^1 + E^3", &q(1, 2)).unwrap();
        assert_eq!(
            c,
            SymbolCombo::new(q(1, 2))
                .with(SymbolKind::Bernoulli, 1, q(2, 1))
                .with(SymbolKind::Euler, 3, one())
        );
        let d: SymbolCombo = "-1/3*U^2 - B + 5/2 - 2*x".parse().unwrap();
        assert_eq!(
            d,
            SymbolCombo::new(q(5, 2))
                .with(SymbolKind::Uniform, 2, q(-1, 3))
                .with(SymbolKind::Bernoulli, 1, q(-1, 1))
        );
        assert_eq!(d.to_string(), "5/2 - 1/3*U^2 - B^1");
        assert_eq!(d.to_string().parse::<SymbolCombo>().unwrap(), d);
        for bad in ["", "B^0", "Q", "2*", "1/2*x*y", "B +", "0.5*B"] {
            assert!(bad.parse::<SymbolCombo>().is_err(), "{bad:?} should fail");
        }
    }
}
