//! Closed-form inversions of the power-mean law.
//!
//! Each solver rearranges the mixing formula for one unknown and refuses,
//! with a typed error, whenever no physically meaningful solution exists.
//! Nothing here clamps a measurement into feasibility: an infeasible target
//! is a signal about the data or the model, and callers get to see it.

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exponent::Exponent;

/// Overshoot tolerated when an inverted saturation lands just above 1;
/// measurements taken at full saturation sit numerically on the boundary.
pub const SATURATION_OVERSHOOT_TOLERANCE: f64 = 1e-9;

/// Recovers the phase value at the hole so the power mean at exponent `p`
/// reproduces `target`.
///
/// `known` mirrors the composition: one `None` marks the unknown phase,
/// every other entry holds that phase's value. The solution is
/// `sigma_j = ((target^p - sum a_k sigma_k^p) / a_j)^(1/p)`, evaluated
/// with all values factored by `target` so moderate exponents cannot
/// overflow on the way.
pub fn solve_phase_value(
    p: f64,
    comp: &Composition,
    known: &[Option<f64>],
    target: f64,
) -> Result<f64> {
    if !p.is_finite() || p == 0.0 {
        return Err(Error::InvalidExponent(p));
    }
    let j = hole_index(comp, known)?;
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::NonPositiveValue(target));
    }
    let fractions = comp.fractions();
    if fractions[j] == 0.0 {
        return Err(Error::ZeroFraction(j));
    }
    let mut rest = 0.0f64;
    for (k, (&a, v)) in fractions.iter().zip(known).enumerate() {
        if k == j {
            continue;
        }
        let v = v.expect("hole_index guarantees a single hole");
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(v));
        }
        if v < 0.0 {
            return Err(Error::NegativeValue(v));
        }
        if v == 0.0 && p < 0.0 {
            return Err(Error::NonPositiveValue(v));
        }
        if a > 0.0 {
            rest += a * (v / target).powf(p);
        }
    }
    // target^p factored out: remainder = (target^p - sum)/target^p.
    let remainder = 1.0 - rest;
    if remainder < 0.0 {
        return Err(Error::Infeasible);
    }
    if remainder == 0.0 {
        // Exactly absorbed by the known phases: a zero value closes the
        // balance for p > 0; negative p admits no zero phase.
        return if p > 0.0 { Ok(0.0) } else { Err(Error::Infeasible) };
    }
    let solved = target * (remainder / fractions[j]).powf(1.0 / p);
    if !solved.is_finite() {
        return Err(Error::NonInvertible { at: target });
    }
    Ok(solved)
}

/// Geometric-mean counterpart of [`solve_phase_value`].
///
/// Solves `sigma_j = exp((ln target - sum a_k ln sigma_k) / a_j)`; all
/// known values and the target must be strictly positive because a zero
/// phase pins the geometric mean to 0 and carries no invertible
/// information.
pub fn solve_phase_value_geometric(
    comp: &Composition,
    known: &[Option<f64>],
    target: f64,
) -> Result<f64> {
    let j = hole_index(comp, known)?;
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::NonPositiveValue(target));
    }
    let fractions = comp.fractions();
    if fractions[j] == 0.0 {
        return Err(Error::ZeroFraction(j));
    }
    let mut rest = 0.0f64;
    for (k, (&a, v)) in fractions.iter().zip(known).enumerate() {
        if k == j {
            continue;
        }
        let v = v.expect("hole_index guarantees a single hole");
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveValue(v));
        }
        if a > 0.0 {
            rest += a * v.ln();
        }
    }
    let solved = ((target.ln() - rest) / fractions[j]).exp();
    if !solved.is_finite() {
        return Err(Error::NonInvertible { at: target });
    }
    Ok(solved)
}

/// Recovers the first fraction of a two-phase mixture from a measured
/// mixture value; the second fraction is its complement.
///
/// Finite exponent: `a1 = (target^p - sigma2^p) / (sigma1^p - sigma2^p)`.
/// [`Exponent::Zero`]: `a1 = ln(target/sigma2) / ln(sigma1/sigma2)`.
/// The infinite exponents are rejected: the min/max laws are flat between
/// the extremes, so no fraction is identifiable from a measurement.
pub fn solve_fraction_two_phase(
    p: Exponent,
    sigma1: f64,
    sigma2: f64,
    target: f64,
) -> Result<f64> {
    for v in [sigma1, sigma2, target] {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(v));
        }
        if v < 0.0 {
            return Err(Error::NegativeValue(v));
        }
    }
    if sigma1 == sigma2 {
        return Err(Error::DegenerateEqualPhases);
    }
    let (lo, hi) = if sigma1 < sigma2 {
        (sigma1, sigma2)
    } else {
        (sigma2, sigma1)
    };
    if target < lo || target > hi {
        return Err(Error::OutOfRange { target, lo, hi });
    }
    let a1 = match p {
        Exponent::Zero => {
            for v in [sigma1, sigma2, target] {
                if v == 0.0 {
                    return Err(Error::NonPositiveValue(v));
                }
            }
            (target / sigma2).ln() / (sigma1 / sigma2).ln()
        }
        Exponent::Finite(p) => {
            if !p.is_finite() || p == 0.0 {
                return Err(Error::InvalidExponent(p));
            }
            if p < 0.0 && (sigma1 == 0.0 || sigma2 == 0.0) {
                return Err(Error::NonPositiveValue(0.0));
            }
            let m = hi;
            let s1 = (sigma1 / m).powf(p);
            let s2 = (sigma2 / m).powf(p);
            let tp = (target / m).powf(p);
            (tp - s2) / (s1 - s2)
        }
        Exponent::PlusInfinity | Exponent::MinusInfinity => {
            return Err(Error::UnsupportedExponent);
        }
    };
    // The target is inside [lo, hi], so the true fraction is in [0, 1];
    // only roundoff can push the quotient over the edge.
    Ok(a1.clamp(0.0, 1.0))
}

/// Rock/brine description for the saturation law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchieParams {
    sigma_w: f64,
    phi: f64,
    s_w: f64,
    m: f64,
}

impl ArchieParams {
    /// `sigma_w`: brine conductivity (> 0); `phi`: porosity in [0, 1];
    /// `s_w`: water saturation in [0, 1]; `m`: exponent (> 0).
    pub fn new(sigma_w: f64, phi: f64, s_w: f64, m: f64) -> Result<Self> {
        if !(sigma_w > 0.0) || !sigma_w.is_finite() {
            return Err(Error::InvalidParameter {
                name: "sigma_w",
                value: sigma_w,
            });
        }
        if !(0.0..=1.0).contains(&phi) {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: phi,
            });
        }
        if !(0.0..=1.0).contains(&s_w) {
            return Err(Error::InvalidParameter {
                name: "s_w",
                value: s_w,
            });
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter { name: "m", value: m });
        }
        Ok(Self {
            sigma_w,
            phi,
            s_w,
            m,
        })
    }

    #[must_use]
    pub fn sigma_w(&self) -> f64 {
        self.sigma_w
    }

    #[must_use]
    pub fn phi(&self) -> f64 {
        self.phi
    }

    #[must_use]
    pub fn s_w(&self) -> f64 {
        self.s_w
    }

    #[must_use]
    pub fn m(&self) -> f64 {
        self.m
    }
}

/// Bulk conductivity `sigma_w (phi s_w)^m`.
///
/// This is the two-phase power mean at exponent 1/m of brine against a
/// nonconductive remainder: water fills fraction `phi s_w` at value
/// `sigma_w`, everything else (matrix plus hydrocarbon, lumped) conducts
/// nothing. The water and gas exponents are equal by construction here;
/// unequal exponents do not embed in this family.
#[must_use]
pub fn archie_conductivity(params: &ArchieParams) -> f64 {
    params.sigma_w * (params.phi * params.s_w).powf(params.m)
}

/// Water saturation from bulk conductivity: `(sigma/sigma_w)^(1/m) / phi`.
///
/// A result within [`SATURATION_OVERSHOOT_TOLERANCE`] above 1 is clamped
/// to 1 (fully saturated rock measures at the boundary); anything further
/// out is an error, not a clamp.
pub fn archie_saturation(sigma: f64, sigma_w: f64, phi: f64, m: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::NegativeValue(sigma));
    }
    if !(sigma_w > 0.0) || !sigma_w.is_finite() {
        return Err(Error::InvalidParameter {
            name: "sigma_w",
            value: sigma_w,
        });
    }
    if !(phi > 0.0) || phi > 1.0 {
        return Err(Error::InvalidParameter {
            name: "phi",
            value: phi,
        });
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidParameter { name: "m", value: m });
    }
    let s_w = (sigma / sigma_w).powf(1.0 / m) / phi;
    if s_w > 1.0 + SATURATION_OVERSHOOT_TOLERANCE {
        return Err(Error::SaturationOutOfRange(s_w));
    }
    Ok(s_w.min(1.0))
}

fn hole_index(comp: &Composition, known: &[Option<f64>]) -> Result<usize> {
    if comp.len() != known.len() {
        return Err(Error::LengthMismatch {
            left: comp.len(),
            right: known.len(),
        });
    }
    let holes: Vec<usize> = known
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.is_none().then_some(i))
        .collect();
    if holes.len() != 1 {
        return Err(Error::HoleCount { got: holes.len() });
    }
    Ok(holes[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean::{power_mean, geometric_mean};
    use crate::values::PhaseValues;

    fn comp(fractions: &[f64]) -> Composition {
        Composition::new(fractions.to_vec()).unwrap()
    }

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let scale = expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            (actual - expected).abs() <= tol * scale,
            "actual {actual:e} vs expected {expected:e}"
        );
    }

    #[test]
    fn solves_the_missing_phase_value() {
        // sqrt((5^2 - 0.5*1)/0.5) = 7
        let s = solve_phase_value(2.0, &comp(&[0.5, 0.5]), &[None, Some(1.0)], 5.0).unwrap();
        assert_rel(s, 7.0, 1e-14);

        let s = solve_phase_value(1.0, &comp(&[0.25, 0.75]), &[None, Some(8.0)], 7.0).unwrap();
        assert_rel(s, 4.0, 1e-14);
    }

    #[test]
    fn missing_phase_round_trips_through_the_forward_law() {
        let c = comp(&[0.3, 0.45, 0.25]);
        let s_true = 1.3;
        for p in [-3.0, -1.0, 0.5, 2.0, 6.0] {
            let vals = PhaseValues::new([2.0, s_true, 0.6]).unwrap();
            let target = power_mean(Exponent::Finite(p), &c, &vals).unwrap().value;
            let s = solve_phase_value(p, &c, &[Some(2.0), None, Some(0.6)], target).unwrap();
            assert_rel(s, s_true, 1e-10);
        }
    }

    #[test]
    fn infeasible_targets_are_typed_errors() {
        // Would need sigma_j = -8.
        let err = solve_phase_value(1.0, &comp(&[0.5, 0.5]), &[None, Some(10.0)], 1.0);
        assert_eq!(err, Err(Error::Infeasible));

        let err = solve_phase_value(1.0, &comp(&[0.0, 1.0]), &[None, Some(1.0)], 2.0);
        assert_eq!(err, Err(Error::ZeroFraction(0)));

        let err = solve_phase_value(2.0, &comp(&[0.5, 0.5]), &[Some(1.0), Some(2.0)], 2.0);
        assert_eq!(err, Err(Error::HoleCount { got: 0 }));

        let err = solve_phase_value(-1.0, &comp(&[0.5, 0.5]), &[None, Some(0.0)], 2.0);
        assert_eq!(err, Err(Error::NonPositiveValue(0.0)));
    }

    #[test]
    fn exact_balance_gives_a_zero_phase_only_for_positive_p() {
        // 0.5*2^1 = 1 = target^1, so the hole must hold 0.
        let s = solve_phase_value(1.0, &comp(&[0.5, 0.5]), &[None, Some(2.0)], 1.0).unwrap();
        assert_eq!(s, 0.0);
        let err = solve_phase_value(-1.0, &comp(&[0.5, 0.5]), &[None, Some(0.5)], 1.0);
        assert_eq!(err, Err(Error::Infeasible));
    }

    #[test]
    fn geometric_hole_solving() {
        let s = solve_phase_value_geometric(&comp(&[0.5, 0.5]), &[None, Some(8.0)], 4.0).unwrap();
        assert_rel(s, 2.0, 1e-14);

        let s = solve_phase_value_geometric(&comp(&[1.0]), &[None], 3.7).unwrap();
        assert_rel(s, 3.7, 1e-15);

        // exp(2 ln 10) = 100
        let s = solve_phase_value_geometric(&comp(&[0.5, 0.5]), &[None, Some(1.0)], 10.0).unwrap();
        assert_rel(s, 100.0, 1e-13);

        let vals = PhaseValues::new([s, 1.0]).unwrap();
        let back = geometric_mean(&comp(&[0.5, 0.5]), &vals).unwrap().value;
        assert_rel(back, 10.0, 1e-10);

        let err = solve_phase_value_geometric(&comp(&[0.5, 0.5]), &[None, Some(0.0)], 1.0);
        assert_eq!(err, Err(Error::NonPositiveValue(0.0)));
    }

    #[test]
    fn two_phase_fraction_recovery() {
        let a1 = solve_fraction_two_phase(Exponent::Finite(1.0), 1.0, 0.0, 0.3).unwrap();
        assert_rel(a1, 0.3, 1e-15);

        let a1 =
            solve_fraction_two_phase(Exponent::Zero, 10.0, 1.0, 10.0f64.sqrt()).unwrap();
        assert_rel(a1, 0.5, 1e-14);

        assert_eq!(
            solve_fraction_two_phase(Exponent::Finite(2.0), 3.0, 1.0, 5.0),
            Err(Error::OutOfRange {
                target: 5.0,
                lo: 1.0,
                hi: 3.0
            })
        );
        assert_eq!(
            solve_fraction_two_phase(Exponent::Finite(1.0), 2.0, 2.0, 2.0),
            Err(Error::DegenerateEqualPhases)
        );
        assert_eq!(
            solve_fraction_two_phase(Exponent::PlusInfinity, 2.0, 1.0, 2.0),
            Err(Error::UnsupportedExponent)
        );
    }

    #[test]
    fn fraction_round_trips_and_is_monotone_in_target() {
        for p in [
            Exponent::Finite(-2.0),
            Exponent::Finite(0.5),
            Exponent::Zero,
            Exponent::Finite(3.0),
        ] {
            let (s1, s2) = (4.0, 0.5);
            let mut last = -1.0;
            for i in 0..=10 {
                let target = 0.5 + (4.0 - 0.5) * (i as f64) / 10.0;
                let a1 = solve_fraction_two_phase(p, s1, s2, target).unwrap();
                assert!(a1 >= last, "monotone in target for p = {p}");
                last = a1;
                let c = Composition::new([a1, 1.0 - a1]).unwrap();
                let vals = PhaseValues::new([s1, s2]).unwrap();
                let back = power_mean(p, &c, &vals).unwrap().value;
                assert_rel(back, target, 1e-10);
            }
        }
    }

    #[test]
    fn conductivity_forward_law() {
        let p = ArchieParams::new(5.0, 0.2, 0.5, 2.0).unwrap();
        assert_rel(archie_conductivity(&p), 0.05, 1e-15);

        let brine = ArchieParams::new(3.3, 1.0, 1.0, 1.7).unwrap();
        assert_eq!(archie_conductivity(&brine), 3.3);

        let dry = ArchieParams::new(5.0, 0.2, 0.0, 2.0).unwrap();
        assert_eq!(archie_conductivity(&dry), 0.0);
    }

    #[test]
    fn conductivity_is_the_two_phase_power_mean() {
        let params = ArchieParams::new(5.0, 0.2, 0.5, 2.0).unwrap();
        let sigma = archie_conductivity(&params);
        let water = params.phi() * params.s_w();
        let c = Composition::new([water, 1.0 - water]).unwrap();
        let vals = PhaseValues::new([params.sigma_w(), 0.0]).unwrap();
        let mean = power_mean(Exponent::Finite(1.0 / params.m()), &c, &vals)
            .unwrap()
            .value;
        assert_rel(mean, sigma, 1e-13);
    }

    #[test]
    fn saturation_inverts_conductivity() {
        let s = archie_saturation(0.05, 5.0, 0.2, 2.0).unwrap();
        assert_rel(s, 0.5, 1e-13);

        assert_eq!(archie_saturation(0.0, 5.0, 0.2, 2.0).unwrap(), 0.0);

        // Exactly saturated: clamps the epsilon overshoot to 1.
        let full = 5.0 * 0.2f64.powf(2.0);
        assert_eq!(archie_saturation(full, 5.0, 0.2, 2.0).unwrap(), 1.0);

        let over = full * 1.001;
        assert!(matches!(
            archie_saturation(over, 5.0, 0.2, 2.0),
            Err(Error::SaturationOutOfRange(_))
        ));

        assert!(matches!(
            archie_saturation(0.05, 5.0, 0.0, 2.0),
            Err(Error::InvalidParameter { name: "phi", .. })
        ));
    }

    #[test]
    fn params_are_validated() {
        assert!(ArchieParams::new(0.0, 0.2, 0.5, 2.0).is_err());
        assert!(ArchieParams::new(5.0, 1.2, 0.5, 2.0).is_err());
        assert!(ArchieParams::new(5.0, 0.2, -0.1, 2.0).is_err());
        assert!(ArchieParams::new(5.0, 0.2, 0.5, 0.0).is_err());
    }
}
