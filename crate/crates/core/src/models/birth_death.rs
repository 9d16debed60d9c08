use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_core::{rational_vec_serde, Rational, Series};
use crate::loop_engine::LoopSystem;

/// Nearest-neighbour chain on sites `0..=K` with `K = up_probs.len() + 1`.
///
/// Interior site `i` steps up with probability `up_probs[i - 1]` and down
/// otherwise. Site 0 reflects upward and site `K` reflects downward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BirthDeathChain {
    #[serde(with = "rational_vec_serde")]
    up_probs: Vec<Rational>,
}

impl BirthDeathChain {
    pub fn new(up_probs: Vec<Rational>) -> Result<Self> {
        if up_probs.is_empty() {
            return Err(Error::InvalidSites("need at least one interior site".into()));
        }
        if let Some(p) = up_probs.iter().find(|p| **p <= Rational::zero() || **p >= Rational::one()) {
            return Err(Error::InvalidSites(format!("up probability {p} not in (0, 1)")));
        }
        Ok(BirthDeathChain { up_probs })
    }

    /// Parses a JSON array of rational strings, e.g. `["1/2", "2/3"]`.
    pub fn from_json(src: &str) -> Result<Self> {
        let raw: BirthDeathChain = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.up_probs)
    }

    pub fn up_probs(&self) -> &[Rational] {
        &self.up_probs
    }

    pub fn last_site(&self) -> usize {
        self.up_probs.len() + 1
    }

    /// `(P(up), P(down))` at a site.
    pub fn step_probs(&self, site: usize) -> (Rational, Rational) {
        if site == 0 {
            (Rational::one(), Rational::zero())
        } else if site == self.last_site() {
            (Rational::zero(), Rational::one())
        } else {
            let p = self.up_probs[site - 1].clone();
            let q = Rational::one() - &p;
            (p, q)
        }
    }
}

/// First-passage PGF from `from` to `to`, with `taboo` absorbing as
/// failure, plus the probability mass still in flight after `order` steps.
pub fn bd_hitting_pgf_with_remainder(
    chain: &BirthDeathChain,
    from: usize,
    to: usize,
    taboo: Option<usize>,
    order: usize,
) -> Result<(Series, Rational)> {
    let k = chain.last_site();
    if from > k || to > k || taboo.is_some_and(|t| t > k) {
        return Err(Error::InvalidSites(format!("site out of range 0..={k}")));
    }
    if from == to || taboo == Some(from) || taboo == Some(to) {
        return Err(Error::InvalidSites(format!(
            "need distinct from/to/taboo, got {from}, {to}, {taboo:?}"
        )));
    }
    let mut dist = vec![Rational::zero(); k + 1];
    dist[from] = Rational::one();
    let mut coeffs = vec![Rational::zero(); order + 1];
    for coeff in coeffs.iter_mut().skip(1) {
        let mut next = vec![Rational::zero(); k + 1];
        for (site, mass) in dist.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            let (up, down) = chain.step_probs(site);
            if !up.is_zero() {
                next[site + 1] += mass * &up;
            }
            if !down.is_zero() {
                next[site - 1] += mass * &down;
            }
        }
        *coeff = std::mem::take(&mut next[to]);
        if let Some(t) = taboo {
            next[t] = Rational::zero();
        }
        dist = next;
    }
    let remainder = dist.iter().fold(Rational::zero(), |acc, m| acc + m);
    Ok((Series::from_coeffs(coeffs), remainder))
}

/// Coefficient of `z^t` is the probability of first reaching `to` at step
/// `t` without visiting `taboo` before.
pub fn bd_hitting_pgf(
    chain: &BirthDeathChain,
    from: usize,
    to: usize,
    taboo: Option<usize>,
    order: usize,
) -> Result<Series> {
    bd_hitting_pgf_with_remainder(chain, from, to, taboo, order).map(|(s, _)| s)
}

/// Loop system from site 0 to the top site, every series from the DP.
pub fn bd_system(chain: &BirthDeathChain, order: usize) -> Result<LoopSystem> {
    let k = chain.last_site();
    let pgf = |from, to, taboo| bd_hitting_pgf(chain, from, to, taboo, order);
    let mut forward = vec![pgf(0, 1, None)?];
    for j in 1..k {
        forward.push(pgf(j, j + 1, Some(j - 1))?);
    }
    let mut loops = vec![forward[0].mul_series(&pgf(1, 0, Some(2))?)];
    for j in 2..k {
        loops.push(forward[j - 1].mul_series(&pgf(j, j - 1, Some(j + 1))?));
    }
    let lhs = pgf(0, k, None)?;
    LoopSystem::new(forward, loops, lhs)
}
