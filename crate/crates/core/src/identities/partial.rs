use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::brackets::{bessel_bracket_poly, bm_bracket_poly, BracketPoly};
use crate::error::Result;
use crate::exact_core::{factorial, format_rational, rational_serde, Rational};
use crate::special_polys::{bernoulli_poly, euler_poly, AppellValues};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialRow {
    pub k: usize,
    #[serde(with = "rational_serde")]
    pub partial_sum: Rational,
    #[serde(with = "rational_serde")]
    pub target: Rational,
    #[serde(with = "rational_serde")]
    pub abs_error: Rational,
}

/// Partial sums `S_0..S_K` of an identity's right-hand side, grouped by `k`
/// with the inner sum complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSumTable {
    pub identity: String,
    pub m: usize,
    pub n: usize,
    #[serde(with = "rational_serde")]
    pub x: Rational,
    #[serde(with = "rational_serde")]
    pub target: Rational,
    pub rows: Vec<PartialRow>,
    /// Same sums with every Euler order lowered by one, for comparison.
    pub literal_rows: Option<Vec<PartialRow>>,
}

impl PartialSumTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,partial_sum,target,abs_error\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.k,
                format_rational(&r.partial_sum),
                format_rational(&r.target),
                format_rational(&r.abs_error)
            ));
        }
        out
    }

    /// Smallest `k` from which the error never increases again.
    pub fn monotone_from(&self) -> usize {
        let errs: Vec<&Rational> = self.rows.iter().map(|r| &r.abs_error).collect();
        let mut start = errs.len().saturating_sub(1);
        while start > 0 && errs[start - 1] >= errs[start] {
            start -= 1;
        }
        self.rows.get(start).map_or(0, |r| r.k)
    }

    pub fn final_error(&self) -> &Rational {
        &self.rows.last().expect("at least one row").abs_error
    }
}

/// Calls `visit(exponents)` for each tuple of `len` naturals summing to `total`.
fn for_each_composition(total: usize, len: usize, visit: &mut impl FnMut(&[usize])) {
    fn go(rest: usize, slot: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if slot + 1 == cur.len() {
            cur[slot] = rest;
            visit(cur);
            return;
        }
        for a in 0..=rest {
            cur[slot] = a;
            go(rest - a, slot + 1, cur, visit);
        }
    }
    let mut cur = vec![0; len];
    go(total, 0, &mut cur, visit);
}

/// `sum_{k <= K} sum_{a_1 + ... = k} multinomial(k; a) prod c_j^{a_j} / 2^m
///  * E_n^{(base + 2d)}(d + x)`, `d = sum j a_j`, accumulated per `k` and
/// scaled by `scale`.
fn grouped_sums(
    bracket: &BracketPoly,
    m: usize,
    base: usize,
    n: usize,
    x: &Rational,
    max_k: usize,
    scale: &Rational,
) -> Vec<Rational> {
    let coeffs: Vec<&Rational> = bracket.iter().map(|(_, c)| c).collect();
    let norm = Rational::from_integer(num_bigint::BigInt::one() << m).recip() * scale;
    let mut tables: HashMap<usize, AppellValues> = HashMap::new();
    let mut running = Rational::zero();
    let mut out = Vec::with_capacity(max_k + 1);
    for k in 0..=max_k {
        let k_fact = factorial(k);
        let mut group = Rational::zero();
        for_each_composition(k, coeffs.len(), &mut |a| {
            let mut weight = Rational::from_integer(k_fact.clone());
            let mut d = 0;
            for (j, (&aj, c)) in a.iter().zip(&coeffs).enumerate() {
                if aj > 0 {
                    weight = weight * c.pow(aj as i32) / Rational::from_integer(factorial(aj));
                }
                d += (j + 1) * aj;
            }
            if weight.is_zero() {
                return;
            }
            let p = base + 2 * d;
            let table = tables.entry(p).or_insert_with(|| AppellValues::euler(p, n));
            group += weight * table.eval(n, &(x + Rational::from_integer(d.into())));
        });
        running += group * &norm;
        out.push(running.clone());
    }
    out
}

fn rows(sums: Vec<Rational>, target: &Rational) -> Vec<PartialRow> {
    sums.into_iter()
        .enumerate()
        .map(|(k, s)| PartialRow {
            k,
            abs_error: (&s - target).abs(),
            partial_sum: s,
            target: target.clone(),
        })
        .collect()
}

/// `E_n(x/(m+1))` against `(m+1)^{-n} sum_k sum_a weight(a)
///  E_n^{(2k + 2 sum i n_i + m + 1)}(k + sum i n_i + x)`.
///
/// `literal_rows` uses Euler order `2k + 2 sum i n_i + m` instead.
pub fn euler_identity_partial(m: usize, n: usize, x: &Rational, max_k: usize) -> Result<PartialSumTable> {
    let bracket = bm_bracket_poly(m)?;
    let mp1 = Rational::from_integer((m + 1).into());
    let target = euler_poly(n, 1, &(x / &mp1));
    let scale = mp1.pow(n as i32).recip();
    let sums = grouped_sums(&bracket, m, m + 1, n, x, max_k, &scale);
    let literal = grouped_sums(&bracket, m, m, n, x, max_k, &scale);
    Ok(PartialSumTable {
        identity: "euler".into(),
        m,
        n,
        x: x.clone(),
        rows: rows(sums, &target),
        literal_rows: Some(rows(literal, &target)),
        target,
    })
}

/// `B_{n+1}((2+x)/(m+2)) - B_{n+1}(x/(m+2))` against
/// `(n+1)/(m+2)^n sum_k sum_a weight(a) E_n^{(2k + 2 sum i n_i + m)}(k + sum i n_i + x)`.
pub fn bessel_identity_partial(m: usize, n: usize, x: &Rational, max_k: usize) -> Result<PartialSumTable> {
    let bracket = bessel_bracket_poly(m)?;
    let mp2 = Rational::from_integer((m + 2).into());
    let two = Rational::from_integer(2.into());
    let target = bernoulli_poly(n + 1, 1, &((&two + x) / &mp2)) - bernoulli_poly(n + 1, 1, &(x / &mp2));
    let scale = Rational::from_integer((n + 1).into()) / mp2.pow(n as i32);
    let sums = grouped_sums(&bracket, m, m, n, x, max_k, &scale);
    Ok(PartialSumTable {
        identity: "bessel".into(),
        m,
        n,
        x: x.clone(),
        rows: rows(sums, &target),
        literal_rows: None,
        target,
    })
}
