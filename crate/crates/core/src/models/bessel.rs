use num_traits::Zero;

use super::{require_ordered, sinh_ratio, SiteConfig};
use crate::error::{Error, Result};
use crate::exact_core::{sinh_over_w_series, Rational, Series};
use crate::loop_engine::LoopSystem;

/// `phi_{a -> b} = b sinh(a w) / (a sinh(b w))`; from the origin this is
/// the limit `b w / sinh(b w)`.
pub fn bessel_phi(a: &Rational, b: &Rational, order: usize) -> Result<Series> {
    require_ordered(a, b, None)?;
    if a.is_zero() {
        let s = sinh_over_w_series(b, order).recip()?;
        return Ok(s.scale(b));
    }
    Ok(sinh_ratio(a, b, order).scale(&(b / a)))
}

/// `phi_{b -> a | not c} = a sinh((c - b) w) / (b sinh((c - a) w))`.
/// Zero when `a = 0`: the process never returns to the origin.
pub fn bessel_phi_down(b: &Rational, a: &Rational, c: &Rational, order: usize) -> Result<Series> {
    require_ordered(a, b, Some(c))?;
    Ok(sinh_ratio(&(c - b), &(c - a), order).scale(&(a / b)))
}

/// `phi_{b -> c | not a} = c sinh((b - a) w) / (b sinh((c - a) w))`.
pub fn bessel_phi_up(b: &Rational, c: &Rational, a: &Rational, order: usize) -> Result<Series> {
    require_ordered(a, b, Some(c))?;
    Ok(sinh_ratio(&(b - a), &(c - a), order).scale(&(c / b)))
}

/// Bessel(3) from the origin to the last site. The origin is never
/// revisited, so loops live on interior pairs `(a_k, a_{k+1})` for
/// `k = 1..N-2`.
pub fn bessel_system(cfg: &SiteConfig, order: usize) -> Result<LoopSystem> {
    let a = cfg.sites();
    let last = a.len() - 1;
    if last < 3 {
        return Err(Error::DegenerateSites("need at least four sites for a Bessel loop".into()));
    }
    let mut forward = vec![bessel_phi(&a[0], &a[1], order)?];
    for j in 1..last {
        forward.push(bessel_phi_up(&a[j], &a[j + 1], &a[j - 1], order)?);
    }
    let loops = (1..last - 1)
        .map(|k| {
            let down = bessel_phi_down(&a[k + 1], &a[k], &a[k + 2], order)?;
            Ok(forward[k].mul_series(&down))
        })
        .collect::<Result<Vec<_>>>()?;
    let lhs = bessel_phi(&a[0], &a[last], order)?;
    LoopSystem::new(forward, loops, lhs)
}
