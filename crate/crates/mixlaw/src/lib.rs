//! Scale-independent mixing laws for multiphase media.
//!
//! When a bulk property of a mixture (conductivity, permittivity, elastic
//! modulus, ...) is averaged from its phase values through a monotone
//! generator function, demanding that the law commute with a change of
//! units pins the generator down to logarithms and powers. This crate
//! implements that family end to end:
//!
//! * [`mean`]: power means for any exponent including the geometric (p = 0)
//!   and min/max (p = +-inf) limits, general quasi-arithmetic means,
//!   complex-valued mixing, and the derivative of the mean in its exponent.
//! * [`invert`]: closed-form recovery of a missing phase value or of a
//!   two-phase fraction from a measured mixture, including the saturation
//!   law used in petrophysics.
//! * [`fit`]: exponent estimation from measured samples, per sample and by
//!   global least squares.
//! * [`characterize`]: numeric checks of whether an arbitrary generator's
//!   mean is scale-independent (or translation-independent), equivalence of
//!   generators up to affine wrapping, and the shift decomposition
//!   f(x + t) = c(t) f(x) + d(t).

pub mod characterize;
mod composition;
mod error;
mod exponent;
pub mod fit;
mod generator;
pub mod invert;
pub mod mean;
mod values;

pub use composition::{Composition, SUM_TOLERANCE};
pub use error::{Error, LimitHint, Result};
pub use exponent::Exponent;
pub use generator::Generator;
pub use mean::{
    geometric_mean, power_mean, power_mean_complex, power_mean_dp, quasi_arithmetic_mean,
    ComplexMixResult, MixFlags, MixResult,
};
pub use values::{ComplexPhaseValues, PhaseValues};
