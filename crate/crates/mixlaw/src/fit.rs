//! Exponent estimation from measured mixture data.
//!
//! The map p -> M_p is strictly increasing whenever the phase values are
//! not all equal, so recovering p from one sample is a bracketed
//! root-finding problem and bisection is unconditionally convergent; no
//! optimizer can fail here, which is why per-sample solving never uses one.
//! The global fit minimizes squared error in the measured (linear) domain
//! over all samples, the simplest defensible loss; a log-domain loss would
//! be a reasonable alternative but is not implemented.

use crate::composition::Composition;
use crate::error::{Error, LimitHint, Result};
use crate::exponent::Exponent;
use crate::mean::{geometric_mean, power_mean, power_mean_dp};
use crate::values::PhaseValues;

/// Largest |p| ever reported. Past this the data cannot distinguish an
/// enormous exponent from the min/max limit: at the cap the mean sits
/// within |ln a_dominant|/64 of the limit (a fraction of a percent for
/// ordinary compositions), which is far inside measurement noise, so
/// larger estimates would be noise artifacts dressed as exponents.
pub const EXPONENT_CAP: f64 = 64.0;

/// Default solve/fit bracket.
pub const DEFAULT_BRACKET: (f64, f64) = (-EXPONENT_CAP, EXPONENT_CAP);

/// Measured values within this relative distance of the extreme phase
/// values are attributed to the infinite limits rather than to a finite p.
const BOUNDARY_REL: f64 = 1e-12;

/// Per-sample solve stops once the mean reproduces the measurement this
/// tightly (relative).
const SOLVE_RESIDUAL_REL: f64 = 1e-12;

/// Absolute bracket width below which bisection cannot refine further.
const SOLVE_WIDTH_TOLERANCE: f64 = 1e-14;

/// Global-fit bracket width at convergence.
const FIT_WIDTH_TOLERANCE: f64 = 1e-10;

/// Global fit also stops when |dRSS/dp| falls below this times RSS.
const FIT_DERIVATIVE_REL: f64 = 1e-14;

/// One measured mixture: its composition, phase values, and observed bulk
/// value in the same units as the phase values.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    comp: Composition,
    vals: PhaseValues,
    measured: f64,
}

impl Sample {
    pub fn new(comp: Composition, vals: PhaseValues, measured: f64) -> Result<Self> {
        if comp.len() != vals.len() {
            return Err(Error::LengthMismatch {
                left: comp.len(),
                right: vals.len(),
            });
        }
        if !(measured > 0.0) || !measured.is_finite() {
            return Err(Error::NonPositiveValue(measured));
        }
        Ok(Self {
            comp,
            vals,
            measured,
        })
    }

    #[must_use]
    pub fn comp(&self) -> &Composition {
        &self.comp
    }

    #[must_use]
    pub fn vals(&self) -> &PhaseValues {
        &self.vals
    }

    #[must_use]
    pub fn measured(&self) -> f64 {
        self.measured
    }

    /// Extremes over phases that can influence the mean.
    fn contributing_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for (&a, &v) in self.comp.fractions().iter().zip(self.vals.values()) {
            if a > 0.0 {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }

    fn is_degenerate(&self) -> bool {
        let (lo, hi) = self.contributing_range();
        lo == hi
    }

    /// Mean at a finite-or-zero exponent, bridging p = 0 continuously.
    fn mean_at(&self, p: f64) -> f64 {
        let e = if p == 0.0 {
            Exponent::Zero
        } else {
            Exponent::Finite(p)
        };
        power_mean(e, &self.comp, &self.vals)
            .expect("sample lengths validated at construction")
            .value
    }
}

/// Ordered collection of samples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    samples: Vec<Sample>,
}

impl Dataset {
    #[must_use]
    pub fn new(samples: Vec<Sample>) -> Self {
        Self { samples }
    }

    #[must_use]
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// A solved exponent, with a note when it ran into the reporting cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentEstimate {
    pub p: f64,
    /// The root lies at or beyond [`EXPONENT_CAP`]; `p` holds the capped
    /// value and the data is better described by the min/max limit.
    pub max_exponent: bool,
}

/// Per-sample outcome: an estimate, or the reason there is none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleOutcome {
    Solved(ExponentEstimate),
    /// All contributing values equal; every exponent reproduces the sample.
    Degenerate,
    /// Measured value at or outside the extreme phase values; only the
    /// named infinite limit approaches it.
    Unsolvable(LimitHint),
}

/// Result of a global fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub p_hat: f64,
    /// Residual sum of squares at `p_hat`, in measured units squared.
    pub rss: f64,
    /// Refinement iterations after the coarse grid scan.
    pub iterations: usize,
    pub per_sample_p: Option<Vec<(usize, SampleOutcome)>>,
}

fn validate_bracket(bracket: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = bracket;
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(Error::BadBracket { lo, hi });
    }
    Ok((lo.max(-EXPONENT_CAP), hi.min(EXPONENT_CAP)))
}

/// Grows one bracket end geometrically toward the cap, flipping sign when
/// the end starts on the wrong side of zero.
fn expand_end(end: f64, upward: bool) -> f64 {
    let grown = if upward {
        if end > 0.0 {
            end * 2.0
        } else if end < 0.0 {
            -end
        } else {
            1.0
        }
    } else if end < 0.0 {
        end * 2.0
    } else if end > 0.0 {
        -end
    } else {
        -1.0
    };
    grown.clamp(-EXPONENT_CAP, EXPONENT_CAP)
}

/// Finds the exponent whose power mean reproduces `sample.measured`.
///
/// Bisection on the strictly monotone map p -> M_p inside `bracket`
/// (clamped to +-[`EXPONENT_CAP`]), geometrically expanded first if the
/// mean at the ends does not straddle the measurement. Stops when the mean
/// matches within 1e-12 relative or the bracket is 1e-14 wide. A
/// measurement equal to the geometric mean (within 1e-12 relative) returns
/// p = 0 directly.
pub fn solve_p_single(sample: &Sample, bracket: (f64, f64)) -> Result<ExponentEstimate> {
    let (mut lo, mut hi) = validate_bracket(bracket)?;
    let (v_min, v_max) = sample.contributing_range();
    if v_min == v_max {
        return Err(Error::Degenerate);
    }
    let measured = sample.measured();
    if measured >= v_max * (1.0 - BOUNDARY_REL) {
        return Err(Error::Unsolvable {
            hint: LimitHint::PlusInfinity,
        });
    }
    if measured <= v_min * (1.0 + BOUNDARY_REL) {
        return Err(Error::Unsolvable {
            hint: LimitHint::MinusInfinity,
        });
    }
    let g = geometric_mean(sample.comp(), sample.vals())
        .expect("sample lengths validated at construction")
        .value;
    if (measured - g).abs() <= SOLVE_RESIDUAL_REL * measured {
        return Ok(ExponentEstimate {
            p: 0.0,
            max_exponent: false,
        });
    }

    // Expand until the bracket straddles the measurement or hits the cap.
    // M is increasing in p, so only the matching end needs to move.
    loop {
        if sample.mean_at(lo) > measured {
            if lo <= -EXPONENT_CAP {
                return Ok(ExponentEstimate {
                    p: -EXPONENT_CAP,
                    max_exponent: true,
                });
            }
            lo = expand_end(lo, false);
        } else if sample.mean_at(hi) < measured {
            if hi >= EXPONENT_CAP {
                return Ok(ExponentEstimate {
                    p: EXPONENT_CAP,
                    max_exponent: true,
                });
            }
            hi = expand_end(hi, true);
        } else {
            break;
        }
    }

    let mut mid = 0.5 * (lo + hi);
    while hi - lo > SOLVE_WIDTH_TOLERANCE {
        mid = 0.5 * (lo + hi);
        let m = sample.mean_at(mid);
        if (m - measured).abs() <= SOLVE_RESIDUAL_REL * measured {
            break;
        }
        if m < measured {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ExponentEstimate {
        p: mid,
        max_exponent: false,
    })
}

/// Applies [`solve_p_single`] to every sample with the default bracket;
/// individual failures become outcomes instead of aborting the batch.
pub fn per_sample_p(data: &Dataset) -> Result<Vec<(usize, SampleOutcome)>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(data
        .samples()
        .iter()
        .enumerate()
        .map(|(i, sample)| {
            let outcome = match solve_p_single(sample, DEFAULT_BRACKET) {
                Ok(est) => SampleOutcome::Solved(est),
                Err(Error::Degenerate) => SampleOutcome::Degenerate,
                Err(Error::Unsolvable { hint }) => SampleOutcome::Unsolvable(hint),
                Err(other) => unreachable!(
                    "solve_p_single on a constructed sample cannot fail with {other}"
                ),
            };
            (i, outcome)
        })
        .collect())
}

fn rss_at(data: &Dataset, p: f64) -> f64 {
    data.samples()
        .iter()
        .map(|s| {
            let r = s.mean_at(p) - s.measured();
            r * r
        })
        .sum()
}

/// dRSS/dp, or None when the analytic derivative is unavailable (a zero
/// phase value makes d/dp undefined at that sample).
fn rss_derivative(data: &Dataset, p: f64) -> Option<f64> {
    let e = if p == 0.0 {
        Exponent::Zero
    } else {
        Exponent::Finite(p)
    };
    let mut total = 0.0;
    for s in data.samples() {
        let dm = power_mean_dp(e, s.comp(), s.vals()).ok()?;
        total += 2.0 * (s.mean_at(p) - s.measured()) * dm;
    }
    Some(total)
}

/// Least-squares fit of a single exponent to the whole dataset.
///
/// A coarse scan over the (cap-clamped) bracket locates the best cell,
/// then the minimum is refined by bisecting on the sign of dRSS/dp;
/// when the analytic derivative is unavailable or numerically mute the
/// refinement falls back to golden-section on RSS itself. Converges when
/// the refinement bracket is narrower than 1e-10 or the derivative drops
/// below 1e-14 relative to the current RSS.
pub fn fit_p_global(data: &Dataset, bracket: (f64, f64)) -> Result<FitReport> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if data.samples().iter().all(Sample::is_degenerate) {
        return Err(Error::AllDegenerate);
    }
    let (lo, hi) = validate_bracket(bracket)?;

    const GRID: usize = 129;
    let grid_p = |i: usize| lo + (hi - lo) * (i as f64) / ((GRID - 1) as f64);
    let mut best_i = 0;
    let mut best_rss = f64::INFINITY;
    for i in 0..GRID {
        let r = rss_at(data, grid_p(i));
        if r < best_rss {
            best_rss = r;
            best_i = i;
        }
    }
    let mut a = grid_p(best_i.saturating_sub(1));
    let mut b = grid_p((best_i + 1).min(GRID - 1));

    let mut iterations = 0usize;
    let derivative_bisection = matches!(
        (rss_derivative(data, a), rss_derivative(data, b)),
        (Some(da), Some(db)) if da < 0.0 && db > 0.0
    );
    let p_hat = if derivative_bisection {
        let mut mid = 0.5 * (a + b);
        while b - a > FIT_WIDTH_TOLERANCE {
            mid = 0.5 * (a + b);
            iterations += 1;
            match rss_derivative(data, mid) {
                Some(d) => {
                    if d.abs() < FIT_DERIVATIVE_REL * rss_at(data, mid) {
                        break;
                    }
                    if d < 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                None => break,
            }
        }
        mid
    } else {
        // Golden-section keeps the minimum inside [a, b] without derivatives.
        let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = rss_at(data, x1);
        let mut f2 = rss_at(data, x2);
        while b - a > FIT_WIDTH_TOLERANCE {
            iterations += 1;
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = rss_at(data, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = rss_at(data, x2);
            }
        }
        0.5 * (a + b)
    };

    Ok(FitReport {
        p_hat,
        rss: rss_at(data, p_hat),
        iterations,
        per_sample_p: None,
    })
}
