//! Space tags: the Hardy space (square-summable coefficients) and the
//! Bergman-type scale with norm sum |a_n|^2 / (1 + log n)^{1+alpha}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ln_index, real, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space<T: Real> {
    Hardy,
    Bergman { alpha: T },
}

impl<T: Real> Space<T> {
    pub fn bergman(alpha: T) -> Result<Self> {
        if !(alpha > -T::one()) {
            return Err(Error::InvalidParameter(format!(
                "Bergman exponent must exceed -1, got {alpha}"
            )));
        }
        Ok(Space::Bergman { alpha })
    }

    /// Squared norm of the basis monomial n^{-s}: 1 for Hardy,
    /// (1 + log n)^{-(1+alpha)} for Bergman.
    pub fn basis_norm_sq(&self, n: u64) -> T {
        match *self {
            Space::Hardy => T::one(),
            Space::Bergman { alpha } => {
                (T::one() + ln_index::<T>(n)).powf(-(T::one() + alpha))
            }
        }
    }

    /// Orthonormalization weight w_n with e_n = w_n n^{-s} of unit norm.
    pub fn basis_weight(&self, n: u64) -> T {
        match *self {
            Space::Hardy => T::one(),
            Space::Bergman { alpha } => {
                (T::one() + ln_index::<T>(n)).powf((T::one() + alpha) * real::<T>(0.5))
            }
        }
    }

    pub fn is_hardy(&self) -> bool {
        matches!(self, Space::Hardy)
    }

    pub fn label(&self) -> String {
        match *self {
            Space::Hardy => "hardy".to_string(),
            Space::Bergman { alpha } => format!("bergman({alpha})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bergman_validation() {
        assert!(Space::bergman(-1.0f64).is_err());
        assert!(Space::bergman(-0.5f64).is_ok());
        assert!(Space::bergman(f64::NAN).is_err());
    }

    #[test]
    fn weights() {
        let s = Space::bergman(1.0f64).unwrap();
        let w = s.basis_norm_sq(2);
        assert!((w - 1.0 / (1.0 + 2.0f64.ln()).powi(2)).abs() < 1e-15);
        assert!((Space::<f64>::Hardy.basis_weight(17) - 1.0).abs() == 0.0);
        let bw = s.basis_weight(2);
        assert!((bw * bw * w - 1.0).abs() < 1e-14);
    }
}
