use rand::RngCore;
use rayon::prelude::*;

use super::{CapacityEstimate, Method};
use crate::error::{out_of_range, Result};
use crate::function_class::TabulatedClass;
use crate::rng;

/// `sup_f (1/n) sum_i sigma_i f(t_i)` for one sign draw.
fn trial_sup(f: &TabulatedClass, seed: u64, trial: u64, signs: &mut Vec<f64>) -> f64 {
    let n = f.n_points();
    let mut r = rng::substream(seed, trial);
    signs.clear();
    while signs.len() < n {
        let mut bits = r.next_u64();
        for _ in 0..64.min(n - signs.len()) {
            signs.push(if bits & 1 == 1 { 1.0 } else { -1.0 });
            bits >>= 1;
        }
    }
    f.rows()
        .map(|row| row.iter().zip(signs.iter()).map(|(v, s)| v * s).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
        / n as f64
}

/// Monte Carlo estimate of the empirical Rademacher complexity.
///
/// Trial `t` draws its signs from substream `t` of `seed`, so the estimate is
/// identical however the trials are scheduled.
pub fn rademacher_mc(f: &TabulatedClass, trials: usize, seed: u64) -> Result<CapacityEstimate> {
    if trials < 1 {
        return Err(out_of_range("trials", "need at least one trial"));
    }
    let sups: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map_init(Vec::new, |signs, t| trial_sup(f, seed, t, signs))
        .collect();
    let mean = sups.iter().sum::<f64>() / trials as f64;
    let stderr = if trials > 1 {
        let var = sups.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        (var / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(CapacityEstimate {
        value: mean,
        method: Method::MonteCarlo,
        stderr,
        trials,
        epsilon: None,
        p: None,
    })
}
