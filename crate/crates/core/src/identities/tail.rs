use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::brackets::{eval_bracket, BracketPoly};
use crate::error::{Error, Result};
use crate::exact_core::{rational_serde, rational_vec_serde, Rational, Series};

/// Truncation error of the geometric sum `sum_{k <= K} P^k` against
/// `1 / (1 - P)`, per coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailReport {
    pub max_k: usize,
    /// `P` at `w = 0`.
    #[serde(with = "rational_serde")]
    pub base: Rational,
    /// `recip(1 - P) - sum_{k <= K} P^k`.
    #[serde(with = "rational_vec_serde")]
    pub errors: Vec<Rational>,
}

impl TailReport {
    pub fn max_abs_error(&self) -> Rational {
        self.errors.iter().map(|e| e.abs()).max().expect("nonempty")
    }
}

/// Evaluates the bracket at `s` and measures the geometric truncation.
pub fn geometric_tail_report(bracket: &BracketPoly, s: &Series, max_k: usize) -> Result<TailReport> {
    let p = eval_bracket(bracket, s);
    let base = p.constant_term().clone();
    if base.abs() >= Rational::one() {
        return Err(Error::ContractionViolated(format!("bracket at w = 0 is {base}, need |.| < 1")));
    }
    let order = p.order();
    let one = Series::one(order);
    let exact = (&one - &p).recip()?;
    let mut partial = one.clone();
    for _ in 0..max_k {
        partial = &one + &p.mul_series(&partial);
    }
    let errors = exact.sub_series(&partial).into_coeffs();
    Ok(TailReport { max_k, base, errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{bm_bracket_poly, sech_series};
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn zeroth_truncation() {
        let s = sech_series(6);
        let r = geometric_tail_report(&bm_bracket_poly(3).unwrap(), &s, 0).unwrap();
        assert_eq!(r.base, q(7, 8));
        assert_eq!(r.errors[0], q(8, 1) - q(1, 1));
    }

    #[test]
    fn zero_bracket_has_no_error() {
        let r = geometric_tail_report(&vec![(2, q(0, 1))], &sech_series(6), 5).unwrap();
        assert!(r.errors.iter().all(|e| e.is_zero()));
    }

    #[test]
    fn non_contracting_base_rejected() {
        let err = geometric_tail_report(&vec![(2, q(1, 1))], &sech_series(4), 3).unwrap_err();
        assert!(matches!(err, Error::ContractionViolated(_)));
    }

    #[test]
    fn longer_sums_are_closer() {
        let s = sech_series(10);
        let bracket = bm_bracket_poly(3).unwrap();
        let short = geometric_tail_report(&bracket, &s, 50).unwrap();
        let long = geometric_tail_report(&bracket, &s, 200).unwrap();
        for (a, b) in short.errors.iter().zip(&long.errors) {
            assert!(b.abs() <= a.abs());
        }
        assert!(long.errors[0].abs() < q(1, 100_000_000));
        // higher coefficients carry polynomial factors in K
        assert!(long.errors[10].abs() > q(1, 100));
    }
}
