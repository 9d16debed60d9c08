//! Monte Carlo estimates of hitting-time transforms.
//!
//! This is the only floating-point module. Every path draws from its own
//! ChaCha8 stream (`seed`, stream = path index) and the per-path values are
//! reduced in path order, so results do not depend on the thread count.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_core::Rational;
use crate::models::{bd_hitting_pgf_with_remainder, BirthDeathChain};

pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

/// Grid-crossing bias allowance for the diffusions at `dt = 1e-3`.
pub const DIFFUSION_ABS_FLOOR: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub estimate: f64,
    pub std_error: f64,
    pub target: f64,
    pub paths: u64,
    /// Grid step; 1 for chains.
    pub dt: f64,
    pub seed: u64,
    pub pass: bool,
    pub abs_floor: f64,
}

impl SimReport {
    fn from_samples(samples: &[f64], target: f64, dt: f64, seed: u64, abs_floor: f64) -> Self {
        let n = samples.len() as f64;
        let estimate = samples.iter().sum::<f64>() / n;
        let std_error = if samples.len() > 1 {
            let ss: f64 = samples.iter().map(|v| (v - estimate).powi(2)).sum();
            (ss / (n - 1.0) / n).sqrt()
        } else {
            0.0
        };
        let pass = (estimate - target).abs() <= (3.0 * std_error).max(abs_floor);
        SimReport { estimate, std_error, target, paths: samples.len() as u64, dt, seed, pass, abs_floor }
    }
}

fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

fn run_paths(paths: u64, f: impl Fn(u64) -> Result<f64> + Sync + Send) -> Result<Vec<f64>> {
    let results: Vec<Result<f64>> = (0..paths).into_par_iter().map(f).collect();
    results.into_iter().collect()
}

fn check_diffusion_args(level: &Rational, w: f64, paths: u64, dt: f64) -> Result<f64> {
    if !(w.is_finite() && w >= 0.0) {
        return Err(Error::InvalidArgument(format!("w must be finite and >= 0, got {w}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be > 0, got {dt}")));
    }
    if paths == 0 {
        return Err(Error::InvalidArgument("need at least one path".into()));
    }
    match level.to_f64() {
        Some(l) if l > 0.0 => Ok(l),
        _ => Err(Error::InvalidArgument(format!("level must be > 0, got {level}"))),
    }
}

/// First grid step at which the norm of a `dim`-dimensional Gaussian walk
/// with step variance `dt` reaches `level`.
fn norm_hit_steps(rng: &mut ChaCha8Rng, dim: usize, level: f64, dt: f64, cap: u64, path: u64) -> Result<u64> {
    let sd = dt.sqrt();
    let level_sq = level * level;
    let mut pos = [0.0f64; 3];
    for step in 1..=cap {
        let mut r2 = 0.0;
        for x in pos.iter_mut().take(dim) {
            let z: f64 = rng.sample(StandardNormal);
            *x += sd * z;
            r2 += *x * *x;
        }
        if r2 >= level_sq {
            return Ok(step);
        }
    }
    Err(Error::BudgetExceeded { path, cap })
}

#[allow(clippy::too_many_arguments)]
fn simulate_norm_hit(
    dim: usize,
    level: &Rational,
    w: f64,
    paths: u64,
    dt: f64,
    seed: u64,
    cap: u64,
    target: f64,
) -> Result<SimReport> {
    let l = check_diffusion_args(level, w, paths, dt)?;
    let rate = w * w / 2.0;
    let samples = run_paths(paths, |i| {
        let mut rng = path_rng(seed, i);
        let steps = norm_hit_steps(&mut rng, dim, l, dt, cap, i)?;
        Ok((-rate * steps as f64 * dt).exp())
    })?;
    Ok(SimReport::from_samples(&samples, target, dt, seed, DIFFUSION_ABS_FLOOR))
}

/// `E[exp(-w^2 T / 2)]` for reflected Brownian motion from 0 hitting
/// `level`; target `1 / cosh(level w)`.
pub fn simulate_bm_hit(level: &Rational, w: f64, paths: u64, dt: f64, seed: u64) -> Result<SimReport> {
    simulate_bm_hit_capped(level, w, paths, dt, seed, DEFAULT_STEP_CAP)
}

pub fn simulate_bm_hit_capped(level: &Rational, w: f64, paths: u64, dt: f64, seed: u64, cap: u64) -> Result<SimReport> {
    let l = level.to_f64().unwrap_or(f64::NAN);
    simulate_norm_hit(1, level, w, paths, dt, seed, cap, 1.0 / (l * w).cosh())
}

/// Same transform for the 3-dimensional Bessel process from the origin;
/// target `level w / sinh(level w)`.
pub fn simulate_bessel_hit(level: &Rational, w: f64, paths: u64, dt: f64, seed: u64) -> Result<SimReport> {
    simulate_bessel_hit_capped(level, w, paths, dt, seed, DEFAULT_STEP_CAP)
}

pub fn simulate_bessel_hit_capped(level: &Rational, w: f64, paths: u64, dt: f64, seed: u64, cap: u64) -> Result<SimReport> {
    let x = level.to_f64().unwrap_or(f64::NAN) * w;
    let target = if x == 0.0 { 1.0 } else { x / x.sinh() };
    simulate_norm_hit(3, level, w, paths, dt, seed, cap, target)
}

/// The exact PGF at `z`, with a bound on the neglected tail.
fn chain_target(chain: &BirthDeathChain, from: usize, to: usize, taboo: Option<usize>, z: f64) -> Result<(f64, f64)> {
    let mut order = 64;
    loop {
        let (series, alive) = bd_hitting_pgf_with_remainder(chain, from, to, taboo, order)?;
        let bound = alive.to_f64().unwrap_or(1.0) * z.powi(order as i32 + 1);
        if bound < 1e-12 || order >= 2048 {
            let mut value = 0.0;
            let mut power = 1.0;
            for c in series.coeffs() {
                value += c.to_f64().unwrap_or(0.0) * power;
                power *= z;
            }
            return Ok((value, bound));
        }
        order *= 2;
    }
}

/// `E[z^T; hit before taboo]` for a birth-death chain, against
/// `bd_hitting_pgf` at `z`. `abs_floor` carries the target's tail bound.
#[allow(clippy::too_many_arguments)]
pub fn simulate_bd(
    chain: &BirthDeathChain,
    from: usize,
    to: usize,
    taboo: Option<usize>,
    z: f64,
    paths: u64,
    seed: u64,
) -> Result<SimReport> {
    simulate_bd_capped(chain, from, to, taboo, z, paths, seed, DEFAULT_STEP_CAP)
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_bd_capped(
    chain: &BirthDeathChain,
    from: usize,
    to: usize,
    taboo: Option<usize>,
    z: f64,
    paths: u64,
    seed: u64,
    cap: u64,
) -> Result<SimReport> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(Error::InvalidArgument(format!("z must lie in (0, 1], got {z}")));
    }
    if paths == 0 {
        return Err(Error::InvalidArgument("need at least one path".into()));
    }
    let (target, tail) = chain_target(chain, from, to, taboo, z)?;
    let ups: Vec<f64> = (0..=chain.last_site())
        .map(|s| chain.step_probs(s).0.to_f64().unwrap_or(0.0))
        .collect();
    let samples = run_paths(paths, |i| {
        let mut rng = path_rng(seed, i);
        let mut site = from;
        for step in 1..=cap {
            let up = ups[site];
            site = if up >= 1.0 || (up > 0.0 && rng.gen::<f64>() < up) { site + 1 } else { site - 1 };
            if site == to {
                return Ok(z.powi(step.min(i32::MAX as u64) as i32));
            }
            if Some(site) == taboo {
                return Ok(0.0);
            }
        }
        Err(Error::BudgetExceeded { path: i, cap })
    })?;
    Ok(SimReport::from_samples(&samples, target, 1.0, seed, tail))
}
