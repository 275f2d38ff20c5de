//! Phase fractions.

use crate::error::{Error, Result};

/// How far a fraction sum may stray from 1 before construction fails.
///
/// Loose enough to accept fractions read from low-precision text, tight
/// enough that the weight error stays far below every tolerance used by the
/// numerical routines.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Volume (or area) fractions of the phases in a mixture.
///
/// Entries are nonnegative and sum to 1 within [`SUM_TOLERANCE`]. Fractions
/// are stored exactly as given; use [`Composition::normalized`] to rescale
/// raw measurements whose sum drifts beyond the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    fractions: Vec<f64>,
}

impl Composition {
    /// Accepts fractions already summing to 1 within [`SUM_TOLERANCE`].
    pub fn new(fractions: impl Into<Vec<f64>>) -> Result<Self> {
        let fractions = fractions.into();
        if fractions.is_empty() {
            return Err(Error::EmptyComposition);
        }
        for &a in &fractions {
            if !a.is_finite() {
                return Err(Error::NonFiniteValue(a));
            }
            if a < 0.0 {
                return Err(Error::NegativeFraction(a));
            }
        }
        let sum: f64 = fractions.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::UnnormalizedComposition { sum });
        }
        Ok(Self { fractions })
    }

    /// Rescales raw nonnegative weights so they sum to 1.
    pub fn normalized(raw: impl Into<Vec<f64>>) -> Result<Self> {
        let raw = raw.into();
        if raw.is_empty() {
            return Err(Error::EmptyComposition);
        }
        for &a in &raw {
            if !a.is_finite() {
                return Err(Error::NonFiniteValue(a));
            }
            if a < 0.0 {
                return Err(Error::NegativeFraction(a));
            }
        }
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::UnnormalizableComposition);
        }
        let fractions = raw.into_iter().map(|a| a / sum).collect();
        Ok(Self { fractions })
    }

    #[must_use]
    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_exact_and_tolerated_sums() {
        assert!(Composition::new([0.5, 0.5]).is_ok());
        assert!(Composition::new([1.0]).is_ok());
        assert!(Composition::new([0.3, 0.7 + 0.9e-9]).is_ok());
        assert!(Composition::new([1.0, 0.0]).is_ok());
    }

    #[test]
    fn rejects_bad_sums_and_signs() {
        assert_eq!(
            Composition::new([0.5, 0.6]),
            Err(Error::UnnormalizedComposition { sum: 1.1 })
        );
        assert!(matches!(
            Composition::new([0.3, 0.7 + 2e-9]),
            Err(Error::UnnormalizedComposition { .. })
        ));
        assert_eq!(
            Composition::new([-0.1, 1.1]),
            Err(Error::NegativeFraction(-0.1))
        );
        assert_eq!(Composition::new([]), Err(Error::EmptyComposition));
        assert!(matches!(
            Composition::new([f64::NAN, 1.0]),
            Err(Error::NonFiniteValue(_))
        ));
    }

    #[test]
    fn normalized_rescales() {
        let c = Composition::normalized([2.0, 6.0]).unwrap();
        assert_eq!(c.fractions(), &[0.25, 0.75]);
        assert_eq!(
            Composition::normalized([0.0, 0.0]),
            Err(Error::UnnormalizableComposition)
        );
    }
}
