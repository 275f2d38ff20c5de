//! Per-phase property values.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nonnegative real phase values (conductivities, permittivities, ...).
///
/// Zeros are legal at construction; whether a zero is usable depends on the
/// exponent, so the mixing operations decide that case by case.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseValues {
    values: Vec<f64>,
}

impl PhaseValues {
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let values = values.into();
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(v));
            }
            if v < 0.0 {
                return Err(Error::NegativeValue(v));
            }
        }
        Ok(Self { values })
    }

    #[must_use]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All values multiplied by `t`. Rescaling by a positive factor keeps
    /// every invariant, so this cannot fail for finite positive `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: t,
            });
        }
        Self::new(self.values.iter().map(|v| v * t).collect::<Vec<_>>())
    }
}

/// Complex phase values restricted to the closed right half-plane.
///
/// Nonzero entries must have a strictly positive real part so the principal
/// power exp(p Log z) stays single-valued on the inputs; exact zeros are
/// allowed and handled by the mixing operation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPhaseValues {
    values: Vec<Complex64>,
}

impl ComplexPhaseValues {
    pub fn new(values: impl Into<Vec<Complex64>>) -> Result<Self> {
        let values = values.into();
        for &z in &values {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteValue(if z.re.is_finite() { z.im } else { z.re }));
            }
            let zero = z.re == 0.0 && z.im == 0.0;
            if !zero && z.re <= 0.0 {
                return Err(Error::BranchDomainError(z));
            }
        }
        Ok(Self { values })
    }

    #[must_use]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_values_must_be_nonnegative_finite() {
        assert!(PhaseValues::new([0.0, 1.5, 1e300]).is_ok());
        assert_eq!(PhaseValues::new([-1.0]), Err(Error::NegativeValue(-1.0)));
        assert!(matches!(
            PhaseValues::new([f64::INFINITY]),
            Err(Error::NonFiniteValue(_))
        ));
    }

    #[test]
    fn complex_values_need_positive_real_part_or_zero() {
        assert!(ComplexPhaseValues::new([Complex64::new(3.0, -0.2)]).is_ok());
        assert!(ComplexPhaseValues::new([Complex64::new(0.0, 0.0)]).is_ok());
        assert!(matches!(
            ComplexPhaseValues::new([Complex64::new(-1.0, 2.0)]),
            Err(Error::BranchDomainError(_))
        ));
        assert!(matches!(
            ComplexPhaseValues::new([Complex64::new(0.0, 2.0)]),
            Err(Error::BranchDomainError(_))
        ));
    }

    #[test]
    fn scaling_multiplies_every_value() {
        let v = PhaseValues::new([1.0, 2.0]).unwrap();
        assert_eq!(v.scaled(3.0).unwrap().values(), &[3.0, 6.0]);
        assert!(v.scaled(0.0).is_err());
        assert!(v.scaled(f64::NAN).is_err());
    }
}
