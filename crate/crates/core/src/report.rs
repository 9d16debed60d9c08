use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact_core::{rational_vec_serde, Rational, Series};

/// Coefficient-by-coefficient comparison of two series.
///
/// `equal` holds exactly when every entry of `diffs` is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub equal: bool,
    pub first_mismatch: Option<usize>,
    /// `lhs - rhs` for each coefficient up to the common order.
    #[serde(with = "rational_vec_serde")]
    pub diffs: Vec<Rational>,
}

impl VerificationReport {
    pub fn compare(lhs: &Series, rhs: &Series) -> Self {
        let diffs = lhs.sub_series(rhs).into_coeffs();
        let first_mismatch = diffs.iter().position(|d| !d.is_zero());
        VerificationReport { equal: first_mismatch.is_none(), first_mismatch, diffs }
    }

    pub fn order(&self) -> usize {
        self.diffs.len().saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_first_mismatch() {
        let a = Series::from_ratios(&[(1, 1), (2, 1), (3, 1)]);
        let b = Series::from_ratios(&[(1, 1), (2, 1), (4, 1), (9, 1)]);
        let r = VerificationReport::compare(&a, &b);
        assert!(!r.equal);
        assert_eq!(r.first_mismatch, Some(2));
        assert_eq!(r.order(), 2);
        let same = VerificationReport::compare(&a, &a);
        assert!(same.equal && same.first_mismatch.is_none());
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<VerificationReport>(&js).unwrap(), r);
    }
}
