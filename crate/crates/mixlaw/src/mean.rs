//! Mean evaluation: the power-mean family and general quasi-arithmetic means.
//!
//! All mixing rules here share one shape: push the phase values through a
//! monotone function, average with the phase fractions, pull back. The
//! power family (finite exponent, geometric mean at zero, min/max at the
//! infinities) is the scale-independent subset and gets a dedicated stable
//! evaluator; arbitrary generators go through [`quasi_arithmetic_mean`].
//!
//! # Numerical strategy
//!
//! A finite-exponent mean is never evaluated as `(sum a v^p)^(1/p)`
//! directly: `v^p` overflows long before the mean itself does. Instead the
//! dominant phase value m is factored out (the largest value for p > 0, the
//! smallest for p < 0, so every ratio term is <= 1 either way) and the sum
//! is accumulated as `T = sum a_k expm1(p ln(v_k / m))`, all terms in
//! [-1, 0]. The mean is `m exp(ln1p(T) / p)`. Because the terms share a
//! sign there is no cancellation, and because expm1/ln1p keep full relative
//! precision near 0 the formula stays accurate down to |p| around 1e-300 as
//! well as up at |p| in the hundreds. Rescaling the inputs by t changes the
//! ratio terms only through one extra rounding, which is what makes the
//! evaluator scale-independent to machine precision even at t = 1e-150.

use num_complex::Complex64;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::generator::Generator;
use crate::values::{ComplexPhaseValues, PhaseValues};

/// |p ln v| beyond which `v^p` itself would leave the f64 range; used only
/// to report that factoring mattered, never to change the result.
const NAIVE_OVERFLOW_EXPONENT: f64 = 700.0;

/// Complex moduli outside [1/MODULUS_RESCALE_LIMIT, MODULUS_RESCALE_LIMIT]
/// are factored out before powering (|p| <= 4 turns 1e60 into 1e240, close
/// enough to f64's ceiling to act early).
const MODULUS_RESCALE_LIMIT: f64 = 1e60;

/// Largest |p| accepted by the complex evaluator; beyond it the principal
/// power is far outside the regime where the right-half-plane restriction
/// keeps arguments meaningful.
pub const COMPLEX_EXPONENT_LIMIT: f64 = 4.0;

/// Notes about which evaluation path produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MixFlags {
    /// The explicit geometric-mean limit (p = 0) was evaluated.
    pub geometric_limit_used: bool,
    /// A zero phase value with nonzero fraction forced the result to 0
    /// (happens for p <= 0, where a zero phase dominates).
    pub zero_phase_short_circuit: bool,
    /// Direct evaluation would have over- or underflowed; the factored form
    /// carried the computation.
    pub rescaled_for_stability: bool,
}

impl MixFlags {
    #[must_use]
    pub fn is_empty(&self) -> bool {
        !(self.geometric_limit_used || self.zero_phase_short_circuit || self.rescaled_for_stability)
    }
}

impl std::fmt::Display for MixFlags {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        let mut put = |f: &mut std::fmt::Formatter<'_>, name: &str| -> std::fmt::Result {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{name}")
        };
        if self.geometric_limit_used {
            put(f, "GeometricLimitUsed")?;
        }
        if self.zero_phase_short_circuit {
            put(f, "ZeroPhaseShortCircuit")?;
        }
        if self.rescaled_for_stability {
            put(f, "RescaledForStability")?;
        }
        Ok(())
    }
}

/// A real mixture value plus evaluation notes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixResult {
    pub value: f64,
    pub flags: MixFlags,
}

/// A complex mixture value plus evaluation notes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMixResult {
    pub value: Complex64,
    pub flags: MixFlags,
}

fn check_lengths(comp: &Composition, values_len: usize) -> Result<()> {
    if comp.len() != values_len {
        return Err(Error::LengthMismatch {
            left: comp.len(),
            right: values_len,
        });
    }
    Ok(())
}

/// Pairs (fraction, value) of the phases that can influence the result.
#[inline]
fn contributing<'a>(
    fractions: &'a [f64],
    values: &'a [f64],
) -> impl Iterator<Item = (f64, f64)> + 'a {
    fractions
        .iter()
        .zip(values)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, v)| (*a, *v))
}

fn geometric_core(fractions: &[f64], values: &[f64]) -> MixResult {
    let mut anchor = 0.0f64;
    for (_, v) in contributing(fractions, values) {
        if v == 0.0 {
            return MixResult {
                value: 0.0,
                flags: MixFlags {
                    zero_phase_short_circuit: true,
                    ..MixFlags::default()
                },
            };
        }
        anchor = anchor.max(v);
    }
    // Anchoring at the largest value keeps the log sum small and makes a
    // rescaling of all inputs cancel inside the ratios instead of riding on
    // the (only approximately unit) fraction sum.
    let log_sum: f64 = contributing(fractions, values)
        .map(|(a, v)| a * (v / anchor).ln())
        .sum();
    MixResult {
        value: anchor * log_sum.exp(),
        flags: MixFlags::default(),
    }
}

struct FinitePower {
    value: f64,
    flags: MixFlags,
    /// sum of a_k expm1(p ln(v_k/anchor)) over contributing phases; kept
    /// for the derivative, which reuses the same factored pieces.
    t_sum: f64,
    anchor: f64,
}

fn finite_power_core(p: f64, fractions: &[f64], values: &[f64]) -> FinitePower {
    debug_assert!(p.is_finite() && p != 0.0);
    let mut anchor = if p > 0.0 { 0.0 } else { f64::INFINITY };
    let mut has_zero = false;
    for (_, v) in contributing(fractions, values) {
        if v == 0.0 {
            has_zero = true;
        }
        anchor = if p > 0.0 { anchor.max(v) } else { anchor.min(v) };
    }
    if has_zero && p < 0.0 {
        // v^p blows up as v -> 0 for negative p, so the mean collapses to 0.
        return FinitePower {
            value: 0.0,
            flags: MixFlags {
                zero_phase_short_circuit: true,
                ..MixFlags::default()
            },
            t_sum: 0.0,
            anchor: 0.0,
        };
    }
    if anchor == 0.0 {
        // p > 0 and every contributing value is zero.
        return FinitePower {
            value: 0.0,
            flags: MixFlags::default(),
            t_sum: 0.0,
            anchor: 0.0,
        };
    }
    let mut naive_overflow = false;
    let mut t_sum = 0.0f64;
    for (a, v) in contributing(fractions, values) {
        if v > 0.0 && (p * v.ln()).abs() > NAIVE_OVERFLOW_EXPONENT {
            naive_overflow = true;
        }
        // v = 0 (p > 0 here): ln gives -inf, expm1 gives exactly -1, which
        // is the correct dropped-phase contribution.
        t_sum += a * (p * (v / anchor).ln()).exp_m1();
    }
    let value = anchor * (t_sum.ln_1p() / p).exp();
    FinitePower {
        value,
        flags: MixFlags {
            rescaled_for_stability: naive_overflow,
            ..MixFlags::default()
        },
        t_sum,
        anchor,
    }
}

/// Power mean of `vals` weighted by `comp`.
///
/// Finite nonzero exponents use the factored evaluator described in the
/// module docs; [`Exponent::Zero`] is the geometric mean; the infinite
/// variants return the largest respectively smallest value among phases
/// with nonzero fraction. Zero-weight phases never influence the result.
///
/// A zero value with nonzero fraction is included normally when p > 0 and
/// forces the result to 0 (flagged `ZeroPhaseShortCircuit`) when p <= 0.
pub fn power_mean(p: Exponent, comp: &Composition, vals: &PhaseValues) -> Result<MixResult> {
    check_lengths(comp, vals.len())?;
    let fractions = comp.fractions();
    let values = vals.values();
    match p {
        Exponent::Zero => {
            let mut result = geometric_core(fractions, values);
            result.flags.geometric_limit_used = true;
            Ok(result)
        }
        Exponent::PlusInfinity => {
            let value = contributing(fractions, values)
                .map(|(_, v)| v)
                .fold(0.0f64, f64::max);
            Ok(MixResult {
                value,
                flags: MixFlags::default(),
            })
        }
        Exponent::MinusInfinity => {
            let mut value = f64::INFINITY;
            let mut hit_zero = false;
            for (_, v) in contributing(fractions, values) {
                if v == 0.0 {
                    hit_zero = true;
                }
                value = value.min(v);
            }
            Ok(MixResult {
                value,
                flags: MixFlags {
                    zero_phase_short_circuit: hit_zero,
                    ..MixFlags::default()
                },
            })
        }
        Exponent::Finite(p) => {
            if !p.is_finite() || p == 0.0 {
                return Err(Error::InvalidExponent(p));
            }
            let core = finite_power_core(p, fractions, values);
            Ok(MixResult {
                value: core.value,
                flags: core.flags,
            })
        }
    }
}

/// Geometric mean of `vals` weighted by `comp`, evaluated in the log
/// domain. Returns 0 (flagged) when any contributing value is zero.
pub fn geometric_mean(comp: &Composition, vals: &PhaseValues) -> Result<MixResult> {
    check_lengths(comp, vals.len())?;
    Ok(geometric_core(comp.fractions(), vals.values()))
}

/// General quasi-arithmetic mean `f_inv(sum a_k f(v_k))`.
///
/// Every value (including zero-weight phases) must lie strictly inside the
/// generator's domain; only phases with nonzero fraction enter the sum.
/// The generator's affine wrapping cancels between f and f_inv, so
/// generators that differ by c f + d produce the same mean.
pub fn quasi_arithmetic_mean(
    g: &Generator,
    comp: &Composition,
    vals: &PhaseValues,
) -> Result<f64> {
    check_lengths(comp, vals.len())?;
    let mut sum = 0.0f64;
    for (&a, &v) in comp.fractions().iter().zip(vals.values()) {
        let y = g.eval(v)?;
        if a > 0.0 {
            sum += a * y;
        }
    }
    g.eval_inv(sum)
}

/// Derivative of the power mean with respect to its exponent.
///
/// For finite nonzero p this is `M (S'/(p S) - ln S / p^2)` with
/// `S = sum a v^p` and `S' = sum a v^p ln v`, evaluated in the same
/// factored form as the mean itself. At p = 0 the closed limit
/// `G Var(ln v)/2` is used. The true derivative is nonnegative (power
/// means grow with p), so roundoff dips below zero are clamped to 0.
///
/// All contributing values must be strictly positive. Accuracy degrades
/// like 1/|p| below about |p| = 1e-8 because the two bracket terms cancel;
/// pass [`Exponent::Zero`] for the exact limit instead. The infinite
/// variants are flat in p and return 0.
pub fn power_mean_dp(p: Exponent, comp: &Composition, vals: &PhaseValues) -> Result<f64> {
    check_lengths(comp, vals.len())?;
    let fractions = comp.fractions();
    let values = vals.values();
    for (_, v) in contributing(fractions, values) {
        if v <= 0.0 {
            return Err(Error::NonPositiveValue(v));
        }
    }
    match p {
        Exponent::PlusInfinity | Exponent::MinusInfinity => Ok(0.0),
        Exponent::Zero => {
            let g = geometric_core(fractions, values).value;
            let anchor = contributing(fractions, values)
                .map(|(_, v)| v)
                .fold(0.0f64, f64::max);
            let mean_log: f64 = contributing(fractions, values)
                .map(|(a, v)| a * (v / anchor).ln())
                .sum();
            let variance: f64 = contributing(fractions, values)
                .map(|(a, v)| {
                    let d = (v / anchor).ln() - mean_log;
                    a * d * d
                })
                .sum();
            Ok(g * variance / 2.0)
        }
        Exponent::Finite(p) => {
            if !p.is_finite() || p == 0.0 {
                return Err(Error::InvalidExponent(p));
            }
            let core = finite_power_core(p, fractions, values);
            let s = 1.0 + core.t_sum;
            // S'/S in the anchored ratios r = v/anchor: sum a r^p ln r / S.
            let s_prime_over_s: f64 = contributing(fractions, values)
                .map(|(a, v)| {
                    let log_r = (v / core.anchor).ln();
                    a * (p * log_r).exp() * log_r
                })
                .sum::<f64>()
                / s;
            let log_s_over_p = core.t_sum.ln_1p() / p;
            let derivative = core.value * (s_prime_over_s - log_s_over_p) / p;
            Ok(derivative.max(0.0))
        }
    }
}

/// Power mean of complex phase values through the principal branch
/// `z^p = exp(p Log z)`.
///
/// The exponent must be finite, nonzero, and within |p| <= 4; inputs live
/// in the right half-plane (enforced by [`ComplexPhaseValues`]). Zero
/// values are legal only for p > 0. When the largest modulus is extreme it
/// is factored out first and the result flagged `RescaledForStability`.
///
/// Note the principal branch makes the root well-defined, not globally
/// consistent: if |p arg z| exceeds pi the power wraps and the mean of
/// identical inputs can land on another branch. With |p| <= 2 the
/// half-plane restriction rules that out; between 2 and 4 it is the
/// caller's bargain.
///
/// A word on conventions: the refractive-index mixing rule (CRIM) is
/// quoted in the literature both as the quadratic mean (p = 2) and as the
/// square-root mean (p = 1/2), depending on whether the mixed parameter is
/// the permittivity or its root. This function takes no side; pass the
/// exponent matching your parameterization.
pub fn power_mean_complex(
    p: f64,
    comp: &Composition,
    vals: &ComplexPhaseValues,
) -> Result<ComplexMixResult> {
    check_lengths(comp, vals.len())?;
    if !p.is_finite() || p == 0.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.abs() > COMPLEX_EXPONENT_LIMIT {
        return Err(Error::ExponentOutOfRange(p));
    }
    let fractions = comp.fractions();
    let values = vals.values();
    let mut max_modulus = 0.0f64;
    for (&a, &z) in fractions.iter().zip(values) {
        if a > 0.0 {
            if z == Complex64::ZERO && p < 0.0 {
                return Err(Error::ZeroWithNonpositiveP);
            }
            max_modulus = max_modulus.max(z.norm());
        }
    }
    if max_modulus == 0.0 {
        return Ok(ComplexMixResult {
            value: Complex64::ZERO,
            flags: MixFlags::default(),
        });
    }
    let rescale = !(1.0 / MODULUS_RESCALE_LIMIT..=MODULUS_RESCALE_LIMIT).contains(&max_modulus);
    let scale = if rescale { max_modulus } else { 1.0 };
    let mut sum = Complex64::ZERO;
    for (&a, &z) in fractions.iter().zip(values) {
        if a > 0.0 && z != Complex64::ZERO {
            sum += a * (z / scale).powf(p);
        }
    }
    let value = if sum == Complex64::ZERO {
        // Complete cancellation of the powered sum; the only consistent
        // mean is 0 (reachable in the limit, exact only for p > 0).
        Complex64::ZERO
    } else {
        scale * sum.powf(1.0 / p)
    };
    Ok(ComplexMixResult {
        value,
        flags: MixFlags {
            rescaled_for_stability: rescale,
            ..MixFlags::default()
        },
    })
}
