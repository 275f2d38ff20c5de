//! Generator functions for quasi-arithmetic means.
//!
//! A generator is a continuous strictly monotone function f on an interval;
//! the mean it induces is f_inv(sum a_k f(v_k)). Two built-in families cover
//! every scale-independent case (log and power, each up to the affine wrap
//! that leaves the mean unchanged); arbitrary user functions come in through
//! [`Generator::custom`], which probe-validates them instead of trusting the
//! caller.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Grid size used to probe custom generators at construction.
const VALIDATION_POINTS: usize = 32;

/// Largest tolerated round-trip error for custom generators at construction,
/// relative to the probe value.
const ROUND_TRIP_TOLERANCE: f64 = 1e-9;

/// Looser round-trip tolerance applied when inverting a custom generator at
/// run time, where the queried ordinate was produced by averaging rather
/// than by f itself.
const INVERSION_TOLERANCE: f64 = 1e-6;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied generator with an explicit bounded domain.
#[derive(Clone)]
pub struct CustomGenerator {
    f: RealFn,
    f_inv: RealFn,
    lo: f64,
    hi: f64,
}

/// A continuous strictly monotone generator.
#[derive(Clone)]
pub enum Generator {
    /// f(x) = a ln x + b on (0, inf), a != 0.
    AffineLog { a: f64, b: f64 },
    /// f(x) = a x^p + b on (0, inf), a != 0, p != 0.
    AffinePower { a: f64, b: f64, p: f64 },
    /// Probe-validated user function on a bounded interval.
    Custom(CustomGenerator),
}

impl Generator {
    pub fn affine_log(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a == 0.0 {
            return Err(Error::InvalidGenerator(format!(
                "affine log needs finite a != 0 and finite b, got a = {a}, b = {b}"
            )));
        }
        Ok(Generator::AffineLog { a, b })
    }

    pub fn affine_power(a: f64, b: f64, p: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || !p.is_finite() || a == 0.0 || p == 0.0 {
            return Err(Error::InvalidGenerator(format!(
                "affine power needs finite a != 0, finite b, finite p != 0, got a = {a}, b = {b}, p = {p}"
            )));
        }
        Ok(Generator::AffinePower { a, b, p })
    }

    /// Wraps `f` and its inverse over the closed interval `[lo, hi]`.
    ///
    /// The pair is probed on a 32-point grid: f must be finite and strictly
    /// monotone there, and f_inv must undo f to within 1e-9 relative error.
    /// Declaring a domain wider than the region where that holds is the one
    /// misuse this cannot always catch.
    pub fn custom<F, G>(f: F, f_inv: G, lo: f64, hi: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(Error::InvalidGenerator(format!(
                "custom domain [{lo}, {hi}] is not a bounded interval"
            )));
        }
        let width = hi - lo;
        let mut previous = f64::NAN;
        let mut direction = 0.0f64;
        for i in 0..VALIDATION_POINTS {
            let x = lo + width * (i as f64) / ((VALIDATION_POINTS - 1) as f64);
            let y = f(x);
            if !y.is_finite() {
                return Err(Error::InvalidGenerator(format!(
                    "f({x}) is not finite on the declared domain"
                )));
            }
            if i > 0 {
                let step = y - previous;
                if step == 0.0 || (direction != 0.0 && step.signum() != direction) {
                    return Err(Error::InvalidGenerator(format!(
                        "f is not strictly monotone near x = {x}"
                    )));
                }
                direction = step.signum();
            }
            previous = y;
            let back = f_inv(y);
            let tol = ROUND_TRIP_TOLERANCE * (x.abs() + 1e-3 * width);
            if !back.is_finite() || (back - x).abs() > tol {
                return Err(Error::InvalidGenerator(format!(
                    "f_inv(f({x})) = {back} misses the round trip"
                )));
            }
        }
        Ok(Generator::Custom(CustomGenerator {
            f: Arc::new(f),
            f_inv: Arc::new(f_inv),
            lo,
            hi,
        }))
    }

    /// Domain endpoints; values fed to the mean must lie strictly inside.
    #[must_use]
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Generator::AffineLog { .. } | Generator::AffinePower { .. } => (0.0, f64::INFINITY),
            Generator::Custom(c) => (c.lo, c.hi),
        }
    }

    #[must_use]
    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x.is_finite() && x > lo && x < hi
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.contains(x) {
            let (lo, hi) = self.domain();
            return Err(Error::DomainError { value: x, lo, hi });
        }
        let y = match self {
            Generator::AffineLog { a, b } => a * x.ln() + b,
            Generator::AffinePower { a, b, p } => a * x.powf(*p) + b,
            Generator::Custom(c) => (c.f)(x),
        };
        if !y.is_finite() {
            return Err(Error::NonFiniteValue(y));
        }
        Ok(y)
    }

    pub fn eval_inv(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::NonInvertible { at: y });
        }
        match self {
            Generator::AffineLog { a, b } => {
                let x = ((y - b) / a).exp();
                if !x.is_finite() || x <= 0.0 {
                    return Err(Error::NonInvertible { at: y });
                }
                Ok(x)
            }
            Generator::AffinePower { a, b, p } => {
                let u = (y - b) / a;
                if !(u > 0.0) {
                    return Err(Error::NonInvertible { at: y });
                }
                let x = u.powf(1.0 / p);
                if !x.is_finite() || x <= 0.0 {
                    return Err(Error::NonInvertible { at: y });
                }
                Ok(x)
            }
            Generator::Custom(c) => {
                let x = (c.f_inv)(y);
                if !x.is_finite() {
                    return Err(Error::NonInvertible { at: y });
                }
                // The averaged ordinate may sit anywhere in f's range; trust
                // the inverse only if f maps its answer back to the query.
                let back = (c.f)(x);
                if !back.is_finite() || (back - y).abs() > INVERSION_TOLERANCE * (1.0 + y.abs()) {
                    return Err(Error::NonInvertible { at: y });
                }
                Ok(x)
            }
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::AffineLog { a, b } => write!(f, "AffineLog {{ a: {a}, b: {b} }}"),
            Generator::AffinePower { a, b, p } => {
                write!(f, "AffinePower {{ a: {a}, b: {b}, p: {p} }}")
            }
            Generator::Custom(c) => write!(f, "Custom {{ domain: [{}, {}] }}", c.lo, c.hi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_constructors_reject_degenerate_coefficients() {
        assert!(Generator::affine_log(0.0, 1.0).is_err());
        assert!(Generator::affine_log(f64::NAN, 0.0).is_err());
        assert!(Generator::affine_power(1.0, 0.0, 0.0).is_err());
        assert!(Generator::affine_power(0.0, 0.0, 2.0).is_err());
        assert!(Generator::affine_log(-2.0, 5.0).is_ok());
    }

    #[test]
    fn affine_round_trips() {
        let g = Generator::affine_log(-2.0, 5.0).unwrap();
        let y = g.eval(3.0).unwrap();
        assert!((g.eval_inv(y).unwrap() - 3.0).abs() < 1e-14);

        let g = Generator::affine_power(1.5, -0.5, -3.0).unwrap();
        let y = g.eval(0.7).unwrap();
        assert!((g.eval_inv(y).unwrap() - 0.7).abs() < 1e-14);
    }

    #[test]
    fn domain_is_enforced_strictly() {
        let g = Generator::affine_log(1.0, 0.0).unwrap();
        assert!(matches!(g.eval(0.0), Err(Error::DomainError { .. })));
        assert!(matches!(g.eval(-1.0), Err(Error::DomainError { .. })));

        let c = Generator::custom(|x| x.exp(), |y: f64| y.ln(), 0.5, 4.0).unwrap();
        assert!(c.eval(2.0).is_ok());
        assert!(matches!(c.eval(4.5), Err(Error::DomainError { .. })));
    }

    #[test]
    fn custom_probe_rejects_non_monotone_and_wrong_inverse() {
        // x^2 reverses direction inside [-2, 2].
        let err = Generator::custom(|x| x * x, |y: f64| y.sqrt(), -2.0, 2.0);
        assert!(matches!(err, Err(Error::InvalidGenerator(_))));

        // Inverse that does not undo f.
        let err = Generator::custom(|x| x.exp(), |y| y, 0.5, 4.0);
        assert!(matches!(err, Err(Error::InvalidGenerator(_))));

        // Unbounded declared domain.
        let err = Generator::custom(|x| x, |y| y, 0.0, f64::INFINITY);
        assert!(matches!(err, Err(Error::InvalidGenerator(_))));
    }

    #[test]
    fn custom_inverse_is_cross_checked_at_run_time() {
        // Correct shape but a deliberately biased inverse: construction fails,
        // and even if the same closures are queried through eval_inv the
        // round-trip guard trips.
        let err = Generator::custom(|x| x, |y| y + 0.5, -1.0, 1.0);
        assert!(matches!(err, Err(Error::InvalidGenerator(_))));
    }

    #[test]
    fn power_inverse_detects_out_of_range_ordinates() {
        // Range of 2 x^2 + 1 on (0, inf) is (1, inf); 0 is below it.
        let g = Generator::affine_power(2.0, 1.0, 2.0).unwrap();
        assert!(matches!(g.eval_inv(0.0), Err(Error::NonInvertible { .. })));
    }
}
