//! The series `K_p = sum_{k>=1} k^p / 2^k`, the Eulerian recursion that
//! evaluates it in closed form, and the Sauer-type pair count.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{out_of_range, Result};

pub const KP_MIN: u32 = 3;
pub const KP_MAX: u32 = 64;

/// Relative size of the certified tail at which summation stops.
const KP_TAIL_RTOL: f64 = 1e-12;

/// `K_p` as a partial sum plus a certified bound on the remainder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpValue {
    pub p: u32,
    /// Partial sum `sum_{k=1}^{truncation_terms} k^p / 2^k`, exact up to the
    /// final conversion to `f64`.
    pub value: f64,
    pub truncation_terms: u32,
    /// Upper bound on `sum_{k > truncation_terms} k^p / 2^k`.
    pub tail_bound: f64,
    #[serde(skip)]
    numerator: BigUint,
}

impl KpValue {
    /// Upper bound on `K_p`.
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }

    /// Whether `partial sum + tail < p^p`.
    ///
    /// The partial sum is compared exactly; the tail (a float) is then added
    /// against the exact gap.
    pub fn certifies_p_pow_p(&self) -> bool {
        let pp = BigUint::from(self.p).pow(self.p);
        let scaled = &pp << self.truncation_terms as usize;
        if self.numerator >= scaled {
            return false;
        }
        let gap = big_ratio_to_f64(&(scaled - &self.numerator), self.truncation_terms);
        self.tail_bound < gap
    }

    /// `(4 K_p)^{1/p}` computed from the upper bound.
    pub fn four_kp_root(&self) -> f64 {
        (4.0 * self.upper()).powf(1.0 / self.p as f64)
    }
}

/// `num / 2^shift` as a float, without overflowing on huge numerators.
fn big_ratio_to_f64(num: &BigUint, shift: u32) -> f64 {
    let bits = num.bits();
    if bits <= 1000 {
        let drop = bits.saturating_sub(64);
        let top = (num >> drop as usize).to_f64().unwrap_or(f64::INFINITY);
        return top * 2f64.powi(drop as i32 - shift as i32);
    }
    let drop = bits - 64;
    let top = (num >> drop as usize).to_f64().unwrap_or(f64::INFINITY);
    (top.ln() + (drop as f64 - shift as f64) * std::f64::consts::LN_2).exp()
}

/// Computes `K_p` for `3 <= p <= 64`.
///
/// Once `(1 + 1/k)^p <= sqrt 2` the term ratio is at most `sqrt 2 / 2`, so the
/// remainder after term `k` is bounded by `term(k) (sqrt 2/2) / (1 - sqrt 2/2)`.
/// Summation continues until that bound drops below `1e-12` of the sum.
pub fn k_p(p: u32) -> Result<KpValue> {
    if !(KP_MIN..=KP_MAX).contains(&p) {
        return Err(out_of_range("p", format!("{p} not in [{KP_MIN}, {KP_MAX}]")));
    }
    let ratio = std::f64::consts::FRAC_1_SQRT_2;
    let geometric = ratio / (1.0 - ratio);
    let pf = p as f64;
    let mut numerator = BigUint::zero();
    let mut k: u32 = 0;
    loop {
        k += 1;
        // numerator / 2^k == sum_{j<=k} j^p / 2^j
        numerator = (numerator << 1usize) + BigUint::from(k).pow(p);
        let ratio_ok = (1.0 + 1.0 / k as f64).powf(pf) <= std::f64::consts::SQRT_2;
        if !ratio_ok {
            continue;
        }
        let term = (pf * (k as f64).ln() - k as f64 * std::f64::consts::LN_2).exp();
        let tail = term * geometric;
        let value = big_ratio_to_f64(&numerator, k);
        if tail <= KP_TAIL_RTOL * value {
            return Ok(KpValue {
                p,
                value,
                truncation_terms: k,
                tail_bound: tail,
                numerator,
            });
        }
    }
}

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `psi_0 .. psi_p` at `u`, by the recursion
/// `psi_q(u) = sum_{j=0}^{q-1} (-1)^j C(q, j+1) (u+1)^j psi_{q-1-j}(u)`
/// with `psi_0 = psi_1 = 1`.
pub fn eulerian_psi_table(p: u32, u: &BigRational) -> Vec<BigRational> {
    let shifted = u + BigRational::one();
    let mut powers = vec![BigRational::one()];
    for j in 1..p as usize {
        let next = &powers[j - 1] * &shifted;
        powers.push(next);
    }
    let mut psi: Vec<BigRational> = Vec::with_capacity(p as usize + 1);
    psi.push(BigRational::one());
    if p >= 1 {
        psi.push(BigRational::one());
    }
    for q in 2..=p as usize {
        let mut acc = BigRational::zero();
        for j in 0..q {
            let c = BigRational::from_integer(BigInt::from(binomial(q as u64, j as u64 + 1)));
            let term = c * &powers[j] * &psi[q - 1 - j];
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        psi.push(acc);
    }
    psi
}

/// `psi_p(u)` in exact rational arithmetic.
pub fn eulerian_psi_exact(p: u32, u: &BigRational) -> BigRational {
    eulerian_psi_table(p, u).pop().expect("table holds psi_0")
}

/// `psi_p(u)` at an integer argument, exactly.
pub fn eulerian_psi_int(p: u32, u: i64) -> BigInt {
    let v = eulerian_psi_exact(p, &BigRational::from_integer(BigInt::from(u)));
    debug_assert!(v.is_integer());
    v.to_integer()
}

/// `psi_p(u)` for a float argument. The argument is converted exactly and
/// only the result is rounded.
pub fn eulerian_psi(p: u32, u: f64) -> f64 {
    let u = BigRational::from_float(u).expect("finite argument");
    eulerian_psi_exact(p, &u).to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SauerCount {
    pub n: u64,
    pub d: u64,
    pub b: u64,
    /// `sum_{k=0}^{d} C(n,k) b^k`.
    #[serde(serialize_with = "serialize_big")]
    pub exact_sum: BigUint,
    pub sum: f64,
    /// `(e n b / d)^d`.
    pub bound: f64,
    pub holds: bool,
}

fn serialize_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// The number of pairs `(S, v)` with `|S| <= d` on `n` points and `b`
/// witness values, against its `(e n b / d)^d` bound. The bound is only
/// guaranteed for `d <= n`; `holds` reports the comparison either way.
pub fn sauer_count_bound(n: u64, d: u64, b: u64) -> Result<SauerCount> {
    if n < 1 || d < 1 || b < 1 {
        return Err(out_of_range("n, d, b", format!("need all >= 1, got ({n}, {d}, {b})")));
    }
    let bb = BigUint::from(b);
    let exact_sum = (0..=d).fold(BigUint::zero(), |acc, k| acc + binomial(n, k) * bb.pow(k as u32));
    let sum = exact_sum.to_f64().unwrap_or(f64::INFINITY);
    let bound = (std::f64::consts::E * n as f64 * b as f64 / d as f64).powf(d as f64);
    Ok(SauerCount {
        n,
        d,
        b,
        holds: sum <= bound,
        exact_sum,
        sum,
        bound,
    })
}
