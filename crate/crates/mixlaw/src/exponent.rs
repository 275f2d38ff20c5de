//! Mixing exponent.

use std::fmt;

use crate::error::{Error, Result};

/// Exponent of the power-mean family.
///
/// The geometric mean is the explicit [`Exponent::Zero`] variant, never a
/// small-number special case: a finite exponent of 1e-30 is evaluated as a
/// finite exponent. The infinite variants select the largest respectively
/// smallest contributing phase value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    /// Finite nonzero exponent. Build through [`Exponent::finite`] so the
    /// nonzero/finite invariant is checked; operations revalidate it.
    Finite(f64),
    Zero,
    PlusInfinity,
    MinusInfinity,
}

impl Exponent {
    /// Checked constructor for the finite variant.
    pub fn finite(p: f64) -> Result<Self> {
        if !p.is_finite() || p == 0.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(Exponent::Finite(p))
    }

    /// The finite exponent value, if this is the finite variant.
    #[must_use]
    pub fn as_finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Zero => write!(f, "0"),
            Exponent::PlusInfinity => write!(f, "inf"),
            Exponent::MinusInfinity => write!(f, "-inf"),
        }
    }
}
