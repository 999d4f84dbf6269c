use serde::Serialize;

use super::complexity::bracket;
use crate::error::{out_of_range, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralCheck {
    /// `(t + 1/(2t)) / sqrt(2(2 - d_G))` with `t = sqrt(ln(2K'))`.
    pub closed_form: f64,
    /// `sqrt(2/(2 - d_G)) int_0^{1/2} sqrt(ln(K'/eps)) d eps`.
    pub quadrature: f64,
    pub evaluations: usize,
}

impl IntegralCheck {
    pub fn dominates(&self) -> bool {
        self.closed_form >= self.quadrature
    }
}

/// Upper limit of the substituted integral; the tail beyond is below
/// `sqrt(a + 60) e^{-60}`.
const S_MAX: f64 = 60.0;

struct Simpson<'a> {
    f: &'a dyn Fn(f64) -> f64,
    budget: usize,
    used: usize,
}

impl Simpson<'_> {
    fn eval(&mut self, x: f64) -> f64 {
        self.used += 1;
        (self.f)(x)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        if self.used + 2 > self.budget {
            return whole;
        }
        let (flm, frm) = (self.eval(lm), self.eval(rm));
        let h = (b - a) / 12.0;
        let left = h * (fa + 4.0 * flm + fm);
        let right = h * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        self.refine(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + self.refine(m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature within `budget` integrand evaluations.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, budget: usize) -> (f64, usize) {
    let mut s = Simpson { f, budget, used: 0 };
    let (fa, fm, fb) = (s.eval(a), s.eval(0.5 * (a + b)), s.eval(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let v = s.refine(a, b, fa, fm, fb, whole, tol, 50);
    (v, s.used)
}

/// Compares the closed-form bound on the entropy integral of the sub-2
/// regime with a numerical evaluation. With `eps = e^{-s}/2` the integral
/// becomes `(1/2) int_0^inf sqrt(ln(2K') + s) e^{-s} ds`.
pub fn integral_l_check(k_const: f64, d_g: f64, quadrature_points: usize) -> Result<IntegralCheck> {
    if !(k_const >= 1.0 && k_const.is_finite()) {
        return Err(out_of_range("k_const", format!("{k_const} < 1")));
    }
    if !(d_g > 0.0 && d_g < 2.0) {
        return Err(out_of_range("d_g", format!("{d_g} not in (0, 2)")));
    }
    if quadrature_points < 3 {
        return Err(out_of_range("quadrature_points", "need at least 3"));
    }
    let k_prime = k_const.powf((2.0 - d_g) / 2.0);
    let a = (2.0 * k_prime).ln();
    let integrand = move |s: f64| (a + s).sqrt() * (-s).exp();
    let (raw, evaluations) = adaptive_simpson(&integrand, 0.0, S_MAX, 1e-13, quadrature_points);
    let quadrature = (2.0 / (2.0 - d_g)).sqrt() * 0.5 * raw;
    let closed_form = bracket(k_prime) / (2.0 * (2.0 - d_g)).sqrt();
    Ok(IntegralCheck {
        closed_form,
        quadrature,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_on_known_integrals() {
        let (v, used) = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 60.0, 1e-13, 10_000);
        assert!((v - 1.0).abs() < 1e-10, "{v}");
        assert!(used <= 10_000);
        let (v, _) = adaptive_simpson(&|x: f64| x * x, 0.0, 3.0, 1e-12, 100);
        assert!((v - 9.0).abs() < 1e-12);
    }

    #[test]
    fn direct_integral_agrees() {
        // midpoint rule on the original variable, K' = K^{(2-d)/2}
        let (k, d) = (17.06f64, 1.0f64);
        let kp = k.powf((2.0 - d) / 2.0);
        let n = 2_000_000;
        let h = 0.5 / n as f64;
        let direct: f64 = (0..n).map(|i| (kp / ((i as f64 + 0.5) * h)).ln().sqrt() * h).sum();
        let c = integral_l_check(k, d, 10_000).unwrap();
        assert!((c.quadrature - (2.0 / (2.0 - d)).sqrt() * direct).abs() < 1e-5, "{c:?}");
        assert!(c.dominates());
        assert!(c.closed_form - c.quadrature < 0.5 * c.closed_form);
    }

    #[test]
    fn monotone_in_k_and_rejects_small_k() {
        let mut last = 0.0;
        for k in [1.1, 10.0, 1e3, 1e6] {
            let q = integral_l_check(k, 0.5, 10_000).unwrap();
            assert!(q.quadrature > last && q.dominates());
            last = q.quadrature;
        }
        assert!(integral_l_check(0.9, 1.0, 10_000).is_err());
        assert!(integral_l_check(2.0, 2.0, 10_000).is_err());
        assert!(integral_l_check(2.0, 1e-6, 10_000).unwrap().quadrature.is_finite());
    }
}
