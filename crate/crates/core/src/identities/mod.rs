//! Polynomial identities from equally spaced loop systems.
//!
//! Each identity is checked at the generating-function level, where the
//! infinite sum over `k` collapses to `1 / (1 - bracket)`. The `k`-sums
//! themselves are only available as convergence diagnostics
//! ([`euler_identity_partial`], [`bessel_identity_partial`]).

mod brackets;
mod partial;
mod tail;

pub use brackets::{
    bessel_bracket_poly, bessel_egf_check, bessel_master_check, bm_bracket_poly, bm_egf_check, bm_master_check,
    egf_proof_check, eval_bracket, BracketPoly,
};
pub use partial::{bessel_identity_partial, euler_identity_partial, PartialRow, PartialSumTable};
pub use tail::{geometric_tail_report, TailReport};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_core::{cosh_series, Rational, Series};
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Bm,
    Bessel,
}

impl Model {
    pub fn bracket(self, m: usize) -> Result<BracketPoly> {
        match self {
            Model::Bm => bm_bracket_poly(m),
            Model::Bessel => bessel_bracket_poly(m),
        }
    }

    pub fn master_check(self, m: usize, order: usize) -> Result<VerificationReport> {
        match self {
            Model::Bm => bm_master_check(m, order),
            Model::Bessel => bessel_master_check(m, order),
        }
    }

    pub fn egf_check(self, m: usize, x: &Rational, order: usize) -> Result<VerificationReport> {
        match self {
            Model::Bm => bm_egf_check(m, x, order),
            Model::Bessel => bessel_egf_check(m, x, order),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Model::Bm => "bm",
            Model::Bessel => "bessel",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bm" => Ok(Model::Bm),
            "bessel" => Ok(Model::Bessel),
            _ => Err(Error::Parse(format!("unknown model {s:?}, expected bm or bessel"))),
        }
    }
}

/// `sech w` to the given order.
pub fn sech_series(order: usize) -> Series {
    cosh_series(&Rational::from_integer(1.into()), order)
        .recip()
        .expect("cosh has constant term 1")
}

/// Which identity to check, for how many loops, and at which `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySpec {
    pub model: Model,
    pub m: usize,
    pub order: usize,
    #[serde(with = "crate::exact_core::rational_vec_serde")]
    pub x_points: Vec<Rational>,
}

impl IdentitySpec {
    pub fn new(model: Model, m: usize, order: usize, x_points: Vec<Rational>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        let distinct: HashSet<&Rational> = x_points.iter().collect();
        if distinct.len() != x_points.len() {
            return Err(Error::InvalidArgument("x points must be pairwise distinct".into()));
        }
        Ok(IdentitySpec { model, m, order, x_points })
    }

    /// Enough points to pin down every coefficient as a polynomial in `x`.
    pub fn is_degree_complete(&self) -> bool {
        self.x_points.len() > self.order
    }

    /// The master check followed by one EGF check per `x` point.
    pub fn run(&self) -> Result<Vec<IdentityReport>> {
        let mut out = vec![IdentityReport::new(
            format!("{}-master", self.model),
            self.m,
            self.model.master_check(self.m, self.order)?,
        )];
        for x in &self.x_points {
            let report = self.model.egf_check(self.m, x, self.order)?;
            out.push(IdentityReport::new(format!("{}-egf x={x}", self.model), self.m, report));
        }
        Ok(out)
    }
}

/// Serialized form of one identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub m: usize,
    pub order: usize,
    pub pass: bool,
    pub first_mismatch: Option<usize>,
    pub details: VerificationReport,
}

impl IdentityReport {
    pub fn new(identity: impl Into<String>, m: usize, details: VerificationReport) -> Self {
        IdentityReport {
            identity: identity.into(),
            m,
            order: details.order(),
            pass: details.equal,
            first_mismatch: details.first_mismatch,
            details,
        }
    }
}
