use crate::capacity::fat_shattering_dim;
use crate::error::{out_of_range, Result};
use crate::function_class::TabulatedClass;

/// A scale-sensitive dimension `epsilon -> d(epsilon)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FatDimOracle {
    /// `K_G epsilon^{-d_G}`.
    PowerLaw { k_g: f64, d_g: f64 },
    Constant(f64),
    /// Exact fat-shattering dimension of a tabulated class.
    Empirical(TabulatedClass),
}

impl FatDimOracle {
    pub fn power_law(k_g: f64, d_g: f64) -> Result<Self> {
        if !(k_g > 0.0 && k_g.is_finite()) {
            return Err(out_of_range("k_g", format!("{k_g} is not a positive real")));
        }
        if !(d_g > 0.0 && d_g.is_finite()) {
            return Err(out_of_range("d_g", format!("{d_g} is not a positive real")));
        }
        Ok(Self::PowerLaw { k_g, d_g })
    }

    pub fn eval(&self, epsilon: f64) -> Result<f64> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(out_of_range("epsilon", format!("{epsilon} is not a positive real")));
        }
        match self {
            Self::PowerLaw { k_g, d_g } => Ok(k_g * epsilon.powf(-d_g)),
            Self::Constant(d) => Ok(*d),
            Self::Empirical(f) => fat_shattering_dim(f, epsilon).map(|d| d as f64),
        }
    }

    /// Smallest `K` with `fat(s) <= K s^{-d_g}` at every listed scale, as a
    /// power-law oracle. A class with zero dimension at every scale gets the
    /// smallest positive `K`.
    pub fn fit(f: &TabulatedClass, d_g: f64, scales: &[f64]) -> Result<Self> {
        let mut k = 0.0f64;
        for &s in scales {
            let d = fat_shattering_dim(f, s)? as f64;
            k = k.max(d * s.powf(d_g));
        }
        Self::power_law(k.max(f64::MIN_POSITIVE), d_g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_form() {
        let o = FatDimOracle::power_law(2.0, 1.5).unwrap();
        assert!((o.eval(0.25).unwrap() - 16.0).abs() < 1e-12);
        assert!(o.eval(0.0).is_err());
        assert!(FatDimOracle::power_law(0.0, 1.0).is_err());
    }

    #[test]
    fn fitted_oracle_dominates_on_its_scales() {
        let rows = (0u32..8)
            .map(|s| (0..3).map(|b| if s >> b & 1 == 1 { 1.0 } else { 0.0 }).collect())
            .collect();
        let f = TabulatedClass::new(rows, 1.0).unwrap();
        let scales = [0.1, 0.3, 0.5, 0.7];
        let o = FatDimOracle::fit(&f, 0.5, &scales).unwrap();
        for s in scales {
            assert!(o.eval(s).unwrap() >= fat_shattering_dim(&f, s).unwrap() as f64 - 1e-12);
        }
        assert_eq!(FatDimOracle::Empirical(f).eval(0.5).unwrap(), 3.0);
    }
}
