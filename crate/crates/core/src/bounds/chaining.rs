use crate::capacity::{exact_cover, greedy_net, LpNorm};
use crate::error::{out_of_range, Result};
use crate::function_class::TabulatedClass;

/// Scales `h(j) = gamma 2^{-alpha j}` for `j = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainingSchedule {
    pub n_steps: u32,
    pub alpha: f64,
}

impl ChainingSchedule {
    pub fn new(n_steps: u32, alpha: f64) -> Result<Self> {
        if n_steps < 1 {
            return Err(out_of_range("n_steps", "need N >= 1"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(out_of_range("alpha", format!("{alpha} is not a positive real")));
        }
        Ok(Self { n_steps, alpha })
    }

    /// The exponent used for each growth regime of `d_G`.
    pub fn default_alpha(d_g: f64) -> f64 {
        if d_g < 2.0 {
            2.0 / (2.0 - d_g)
        } else if d_g == 2.0 {
            1.0
        } else {
            2.0 / (d_g - 2.0)
        }
    }

    pub fn h(&self, j: u32, gamma: f64) -> f64 {
        gamma * 2f64.powf(-self.alpha * j as f64)
    }
}

/// `h(N) + 2 sum_{j=1}^N (h(j) + h(j-1)) sqrt(entropy(h(j)) / m)`.
pub fn chaining_eval(
    schedule: &ChainingSchedule,
    mut entropy: impl FnMut(f64) -> Result<f64>,
    m: f64,
    gamma: f64,
) -> Result<f64> {
    if !(m >= 1.0) {
        return Err(out_of_range("m", format!("{m} < 1")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(out_of_range("gamma", format!("{gamma} is not a positive real")));
    }
    let mut sum = 0.0;
    for j in 1..=schedule.n_steps {
        let (hj, hp) = (schedule.h(j, gamma), schedule.h(j - 1, gamma));
        let e = entropy(hj)?;
        if !(e >= 0.0) {
            return Err(out_of_range("entropy", format!("{e} at scale {hj} is negative")));
        }
        sum += (hj + hp) * (e / m).sqrt();
    }
    Ok(schedule.h(schedule.n_steps, gamma) + 2.0 * sum)
}

/// `ln N(epsilon, F, d_p)`: exact while `|F| <= cap`, greedy cover above.
pub fn covering_entropy(f: &TabulatedClass, epsilon: f64, p: LpNorm, cap: usize) -> Result<f64> {
    let size = if f.len() <= cap {
        exact_cover(f, epsilon, p, cap)?.len()
    } else {
        greedy_net(f, epsilon, p).len()
    };
    Ok((size as f64).ln())
}

/// The smallest value of [`chaining_eval`] over `N` in `1..=n_max`, as
/// `(N, value)`. Entropy values are cached across `N`.
pub fn chaining_best(
    alpha: f64,
    mut entropy: impl FnMut(f64) -> Result<f64>,
    m: f64,
    gamma: f64,
    n_max: u32,
) -> Result<(u32, f64)> {
    let top = ChainingSchedule::new(n_max, alpha)?;
    let mut cache = Vec::with_capacity(n_max as usize);
    for j in 1..=n_max {
        cache.push(entropy(top.h(j, gamma))?);
    }
    let mut best = (0, f64::INFINITY);
    for n in 1..=n_max {
        let s = ChainingSchedule::new(n, alpha)?;
        // scales are visited in order j = 1..=n
        let mut j = 0;
        let v = chaining_eval(
            &s,
            |_| {
                j += 1;
                Ok(cache[j - 1])
            },
            m,
            gamma,
        )?;
        if v < best.1 {
            best = (n, v);
        }
    }
    Ok(best)
}
