//! Loop decomposition of the hitting-time transform from site 0 to site
//! `n + 1`:
//!
//! ```text
//! phi_{0 -> n+1} = phi_{0->1} prod_j phi_{j->j+1 | not j-1} / D,
//! D = 1 + sum_S (-1)^{|S|} prod_{j in S} L_j
//! ```
//!
//! where `S` runs over nonempty subsets of `{1..n}` with no two consecutive
//! indices. The denominator is built from explicit subset enumeration.
//! [`transfer_expansion`] sums the same quantity the long way, over loop
//! words in which a step from index `i` to `j` is allowed iff `j == i`,
//! `j == i - 1` or `j > i`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_core::{rational_serde, Rational, Series};
use crate::report::VerificationReport;

/// A set of loop indices from `{1..n}` with pairwise gaps of at least two,
/// stored in strictly descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NonadjacentSubset {
    indices: Vec<usize>,
    n: usize,
}

impl NonadjacentSubset {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable_by(|a, b| b.cmp(a));
        if indices.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidArgument(format!("indices {indices:?} outside 1..={n}")));
        }
        if indices.windows(2).any(|w| w[0] - w[1] < 2) {
            return Err(Error::InvalidArgument(format!("indices {indices:?} contain neighbours")));
        }
        Ok(NonadjacentSubset { indices, n })
    }

    /// Descending.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Ascending view, the order used by the recursive peel-off form.
    pub fn ascending(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().rev().copied()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn smallest(&self) -> Option<usize> {
        self.indices.last().copied()
    }
}

impl fmt::Display for NonadjacentSubset {
    /// `L5*L3*L1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "L{i}")?;
        }
        Ok(())
    }
}

/// Visits every size-`len` nonadjacent subset of `{1..n}` as a descending
/// slice, in descending-lexicographic order.
pub fn for_each_nonadjacent(n: usize, len: usize, mut visit: impl FnMut(&[usize])) {
    fn go(top: usize, remaining: usize, stack: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if remaining == 0 {
            visit(stack);
            return;
        }
        // need room for the remaining - 1 smaller picks below `i`
        let lowest = 2 * remaining - 1;
        let mut i = top;
        while i >= lowest {
            stack.push(i);
            go(i.saturating_sub(2), remaining - 1, stack, visit);
            stack.pop();
            i -= 1;
        }
    }
    if len == 0 {
        visit(&[]);
        return;
    }
    go(n, len, &mut Vec::with_capacity(len), &mut visit);
}

/// All size-`len` subsets of `{1..n}` with gaps of at least two.
pub fn nonadjacent_subsets(n: usize, len: usize) -> Vec<NonadjacentSubset> {
    let mut out = Vec::new();
    for_each_nonadjacent(n, len, |s| out.push(NonadjacentSubset { indices: s.to_vec(), n }));
    out
}

/// `N(len, n)`, by enumeration.
pub fn count_nonadjacent(len: usize, n: usize) -> u64 {
    let mut count = 0u64;
    for_each_nonadjacent(n, len, |_| count += 1);
    count
}

/// `n(initial, len, n)`: subsets whose smallest index is `initial`.
pub fn count_with_initial(initial: usize, len: usize, n: usize) -> u64 {
    let mut count = 0u64;
    for_each_nonadjacent(n, len, |s| {
        if s.last() == Some(&initial) {
            count += 1;
        }
    });
    count
}

/// One signed monomial of the denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenominatorTerm {
    /// `+1` or `-1`.
    pub sign: i8,
    pub subset: NonadjacentSubset,
}

impl fmt::Display for DenominatorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { '-' } else { '+' };
        write!(f, "{s}{}", self.subset)
    }
}

/// Every nonempty nonadjacent subset with sign `(-1)^{|S|}`: singletons
/// `L1..Ln` in ascending order, then larger subsets by size, each size in
/// descending-lexicographic order.
pub fn denominator_terms(n: usize) -> Vec<DenominatorTerm> {
    let mut out = Vec::new();
    for len in 1..=n.div_ceil(2) {
        let sign = if len % 2 == 0 { 1 } else { -1 };
        let mut block = nonadjacent_subsets(n, len);
        if len == 1 {
            block.reverse();
        }
        out.extend(block.into_iter().map(|subset| DenominatorTerm { sign, subset }));
    }
    out
}

/// `"-L1 -L2 -L3 +L3*L1"`.
pub fn format_denominator(terms: &[DenominatorTerm]) -> String {
    terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn common_order(series: &[Series]) -> Result<usize> {
    let first = series.first().map(Series::order).ok_or_else(|| {
        Error::InvalidArgument("at least one series is required".into())
    })?;
    for s in series {
        if s.order() != first {
            return Err(Error::OrderMismatch(first, s.order()));
        }
    }
    Ok(first)
}

/// `1 + sum_S (-1)^{|S|} prod_{j in S} L_j` over nonempty nonadjacent `S`.
pub fn denominator_series(loops: &[Series]) -> Result<Series> {
    let order = common_order(loops)?;
    let n = loops.len();
    let mut total = Series::one(order);
    // depth-first over descending index lists, sharing partial products
    fn extend(loops: &[Series], below: usize, partial: &Series, size: usize, total: &mut Series) {
        for j in (1..=below).rev() {
            let product = partial.mul_series(&loops[j - 1]);
            let signed = if size % 2 == 1 { product.clone() } else { -&product };
            *total = total.add_series(&signed);
            extend(loops, j.saturating_sub(2), &product, size + 1, total);
        }
    }
    extend(loops, n, &Series::one(order), 0, &mut total);
    Ok(total)
}

/// Forward factors, loops and an independently computed left-hand side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopSystem {
    forward: Vec<Series>,
    loops: Vec<Series>,
    lhs: Series,
}

impl LoopSystem {
    /// Checks that every series shares one order and that each loop's
    /// constant term is a probability in `[0, 1)`.
    ///
    /// Continuous models in `w` have loop constant terms in `(0, 1)`;
    /// probability generating functions in `z` have constant term zero.
    pub fn new(forward: Vec<Series>, loops: Vec<Series>, lhs: Series) -> Result<Self> {
        if forward.is_empty() {
            return Err(Error::InvalidArgument("no forward factors".into()));
        }
        let mut all: Vec<Series> = forward.clone();
        all.extend(loops.iter().cloned());
        all.push(lhs.clone());
        common_order(&all)?;
        for (j, l) in loops.iter().enumerate() {
            let c = l.constant_term();
            if c.is_negative() || *c >= Rational::one() {
                return Err(Error::InvalidArgument(format!(
                    "loop L{} has constant term {} outside [0, 1)",
                    j + 1,
                    crate::exact_core::format_rational(c)
                )));
            }
        }
        Ok(LoopSystem { forward, loops, lhs })
    }

    pub fn forward(&self) -> &[Series] {
        &self.forward
    }

    pub fn loops(&self) -> &[Series] {
        &self.loops
    }

    pub fn lhs(&self) -> &Series {
        &self.lhs
    }

    pub fn order(&self) -> usize {
        self.lhs.order()
    }
}

/// Product of forward factors over the loop denominator.
pub fn rhs_series(sys: &LoopSystem) -> Result<Series> {
    let order = sys.order();
    let product = sys.forward.iter().fold(Series::one(order), |acc, f| acc.mul_series(f));
    if sys.loops.is_empty() {
        return Ok(product);
    }
    Ok(product.mul_series(&denominator_series(&sys.loops)?.recip()?))
}

pub fn verify_loop(sys: &LoopSystem) -> Result<VerificationReport> {
    Ok(VerificationReport::compare(&sys.lhs, &rhs_series(sys)?))
}

/// Truncated word sum together with the size of its last increment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferExpansion {
    pub series: Series,
    pub words: usize,
    /// Largest absolute coefficient among the length-`words` terms; the sum
    /// is never claimed to have converged.
    #[serde(with = "rational_serde")]
    pub last_increment: Rational,
}

/// `sum_{k <= max_len} sum over admissible words i_1..i_k of prod L_{i_t}`.
///
/// The state is the last index used; from `i` the next index `j` must
/// satisfy `j >= i - 1`. The empty word contributes 1.
pub fn transfer_expansion(loops: &[Series], max_len: usize) -> Result<TransferExpansion> {
    let order = common_order(loops)?;
    let n = loops.len();
    let mut total = Series::one(order);
    // ending[j] = sum over admissible words of the current length ending in j
    let mut ending: Vec<Series> = loops.to_vec();
    let mut last_increment = Rational::one();
    for len in 1..=max_len {
        if len > 1 {
            // prefix[j] = sum_{i <= j + 1} ending[i]
            let mut next = Vec::with_capacity(n);
            let mut prefix = ending[0].clone();
            for j in 0..n {
                if j + 1 < n {
                    prefix = prefix.add_series(&ending[j + 1]);
                }
                next.push(loops[j].mul_series(&prefix));
            }
            ending = next;
        }
        let increment = ending.iter().fold(Series::zero(order), |acc, s| acc.add_series(s));
        last_increment = increment
            .coeffs()
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero);
        total = total.add_series(&increment);
    }
    Ok(TransferExpansion { series: total, words: max_len, last_increment })
}
