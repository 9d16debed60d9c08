use super::{require_ordered, sinh_ratio, SiteConfig};
use crate::error::{Error, Result};
use crate::exact_core::{cosh_series, Rational, Series};
use crate::loop_engine::LoopSystem;

/// `phi_{a -> b} = cosh(a w) / cosh(b w)` for `0 <= a < b`.
pub fn bm_phi(a: &Rational, b: &Rational, order: usize) -> Result<Series> {
    require_ordered(a, b, None)?;
    Ok(cosh_series(a, order).mul_series(&cosh_series(b, order).recip()?))
}

/// `phi_{b -> a | not c} = sinh((c - b) w) / sinh((c - a) w)` for `a < b < c`.
pub fn bm_phi_down(b: &Rational, a: &Rational, c: &Rational, order: usize) -> Result<Series> {
    require_ordered(a, b, Some(c))?;
    Ok(sinh_ratio(&(c - b), &(c - a), order))
}

/// `phi_{b -> c | not a} = sinh((b - a) w) / sinh((c - a) w)` for `a < b < c`.
pub fn bm_phi_up(b: &Rational, c: &Rational, a: &Rational, order: usize) -> Result<Series> {
    require_ordered(a, b, Some(c))?;
    Ok(sinh_ratio(&(b - a), &(c - a), order))
}

/// Reflected Brownian motion from 0 to the last site, with one loop per
/// interior site: `L_1 = phi_{0->a_1} phi_{a_1->0|not a_2}` and
/// `L_j = phi_{a_{j-1}->a_j|not a_{j-2}} phi_{a_j->a_{j-1}|not a_{j+1}}`.
pub fn bm_system(cfg: &SiteConfig, order: usize) -> Result<LoopSystem> {
    let a = cfg.sites();
    let last = a.len() - 1;
    if last < 2 {
        return Err(Error::DegenerateSites("need at least three sites for a loop".into()));
    }
    let mut forward = vec![bm_phi(&a[0], &a[1], order)?];
    for j in 1..last {
        forward.push(bm_phi_up(&a[j], &a[j + 1], &a[j - 1], order)?);
    }
    let mut loops = vec![forward[0].mul_series(&bm_phi_down(&a[1], &a[0], &a[2], order)?)];
    for j in 2..last {
        let up = &forward[j - 1];
        loops.push(up.mul_series(&bm_phi_down(&a[j], &a[j - 1], &a[j + 1], order)?));
    }
    let lhs = bm_phi(&a[0], &a[last], order)?;
    LoopSystem::new(forward, loops, lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_engine::{denominator_series, verify_loop};
    use num_traits::{One, Zero};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn phi_from_origin() {
        let phi = bm_phi(&q(0, 1), &q(1, 1), 4).unwrap();
        assert_eq!(phi, Series::from_ratios(&[(1, 1), (0, 1), (-1, 2), (0, 1), (5, 24)]));
        assert!(bm_phi(&q(1, 1), &q(1, 1), 4).is_err());
        assert!(bm_phi(&q(-1, 1), &q(1, 1), 4).is_err());
    }

    #[test]
    fn down_step_halves_sech() {
        // sinh(w) / sinh(2w) = sech(w) / 2
        let down = bm_phi_down(&q(1, 1), &q(0, 1), &q(2, 1), 12).unwrap();
        let sech = cosh_series(&q(1, 1), 12).recip().unwrap();
        assert_eq!(down, sech.scale(&q(1, 2)));
        assert!(bm_phi_down(&q(2, 1), &q(0, 1), &q(2, 1), 4).is_err());
    }

    #[test]
    fn telescoping() {
        let (a, b, c) = (q(1, 3), q(1, 1), q(7, 4));
        let lhs = bm_phi(&a, &b, 14).unwrap().mul_series(&bm_phi(&b, &c, 14).unwrap());
        assert_eq!(lhs, bm_phi(&a, &c, 14).unwrap());
    }

    #[test]
    fn equally_spaced_loops() {
        let order = 16;
        let sech2 = cosh_series(&q(1, 1), order).recip().unwrap().pow(2);
        let one = bm_system(&SiteConfig::equally_spaced(3).unwrap(), order).unwrap();
        assert_eq!(one.loops()[0], sech2.scale(&q(1, 2)));
        let three = bm_system(&SiteConfig::equally_spaced(5).unwrap(), order).unwrap();
        assert_eq!(&three.loops()[1] + &three.loops()[2], sech2.scale(&q(1, 2)));
        for s in three.forward().iter().chain(three.loops()).chain([three.lhs()]) {
            assert!(s.is_even());
        }
    }

    #[test]
    fn unequal_spacing_verifies() {
        let cfg = SiteConfig::new(vec![q(0, 1), q(1, 2), q(3, 2), q(2, 1)]).unwrap();
        let sys = bm_system(&cfg, 30).unwrap();
        assert!(verify_loop(&sys).unwrap().equal);
    }

    #[test]
    fn denominator_constant_term_is_power_of_two() {
        for m in 1..=8usize {
            let sys = bm_system(&SiteConfig::equally_spaced(m + 2).unwrap(), 2).unwrap();
            let d = denominator_series(sys.loops()).unwrap();
            assert_eq!(*d.constant_term(), Rational::one() / Rational::from_integer((1u64 << m).into()));
            assert!(!d.constant_term().is_zero());
        }
    }
}
