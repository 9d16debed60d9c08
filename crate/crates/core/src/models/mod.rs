//! Loop systems for concrete walks.
//!
//! Reflected Brownian motion and the 3-dimensional Bessel process give
//! closed-form hitting transforms in `w` (Laplace variable `w^2 / 2`);
//! birth-death chains give exact probability generating functions in `z`
//! from a dynamic program over the site distribution.

mod bessel;
mod birth_death;
mod brownian;

pub use bessel::{bessel_phi, bessel_phi_down, bessel_phi_up, bessel_system};
pub use birth_death::{bd_hitting_pgf, bd_hitting_pgf_with_remainder, bd_system, BirthDeathChain};
pub use brownian::{bm_phi, bm_phi_down, bm_phi_up, bm_system};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_core::{rational_vec_serde, sinh_over_w_series, Rational, Series};

/// Site positions `0 = a_0 < a_1 < ... < a_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteConfig {
    #[serde(with = "rational_vec_serde")]
    sites: Vec<Rational>,
}

impl SiteConfig {
    pub fn new(sites: Vec<Rational>) -> Result<Self> {
        if sites.len() < 2 {
            return Err(Error::DegenerateSites(format!("need at least two sites, got {}", sites.len())));
        }
        if !sites[0].is_zero() {
            return Err(Error::DegenerateSites("first site must be 0".into()));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateSites("sites must be strictly increasing".into()));
        }
        Ok(SiteConfig { sites })
    }

    /// Sites `0, 1, ..., count - 1`.
    pub fn equally_spaced(count: usize) -> Result<Self> {
        Self::new((0..count).map(|k| Rational::from_integer(k.into())).collect())
    }

    /// Parses a JSON array of rational strings, e.g. `["0", "1/2", "2"]`.
    pub fn from_json(src: &str) -> Result<Self> {
        let raw: SiteConfig = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.sites)
    }

    pub fn sites(&self) -> &[Rational] {
        &self.sites
    }

    pub fn last(&self) -> &Rational {
        self.sites.last().expect("nonempty")
    }
}

/// `sinh(num w) / sinh(den w)` for positive `den`, through `sinh(.)/w`.
pub(crate) fn sinh_ratio(num: &Rational, den: &Rational, order: usize) -> Series {
    let top = sinh_over_w_series(num, order);
    let bottom = sinh_over_w_series(den, order).recip().expect("sinh(c w)/w has constant term c > 0");
    top.mul_series(&bottom)
}

pub(crate) fn require_ordered(a: &Rational, b: &Rational, c: Option<&Rational>) -> Result<()> {
    let ok = !a.is_negative() && a < b && c.is_none_or(|c| b < c);
    if ok {
        Ok(())
    } else {
        Err(Error::DegenerateSites(format!(
            "need 0 <= a < b{}; got a={a}, b={b}{}",
            if c.is_some() { " < c" } else { "" },
            c.map(|c| format!(", c={c}")).unwrap_or_default()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn site_validation() {
        assert!(SiteConfig::new(vec![q(0, 1), q(1, 2), q(3, 2)]).is_ok());
        assert!(SiteConfig::new(vec![q(1, 1), q(2, 1)]).is_err());
        assert!(SiteConfig::new(vec![q(0, 1), q(1, 1), q(1, 1)]).is_err());
        assert!(SiteConfig::new(vec![q(0, 1)]).is_err());
        let cfg = SiteConfig::from_json(r#"["0", "1/2", "3/2", "2"]"#).unwrap();
        assert_eq!(cfg.sites().len(), 4);
        assert_eq!(serde_json::to_string(&cfg).unwrap(), r#"["0","1/2","3/2","2"]"#);
        assert!(SiteConfig::from_json(r#"["0", "0.5"]"#).is_err());
        assert_eq!(SiteConfig::equally_spaced(3).unwrap().last(), &q(2, 1));
    }
}
