//! Closed-form stability constants for perturbed exponential systems.
//!
//! - Kadec: `D(L) = 1 − cos πL + sin πL`. For `sup|λₙ − n| ≤ L < 1/4` on the
//!   unit interval, `1 ∓ D(L)` bound `‖Σ aₙ e_{λₙ}‖ / ‖a‖`, so Gram
//!   eigenvalues lie in `[(1 − D)², (1 + D)²]`.
//! - A Balan-type radius `L(γ)` for real perturbations of a frame sequence
//!   on `[−γ, γ]`, and the bounds of the perturbed sequence.
//! - The m-segment criterion for `{e^{2πi(n+δₙ)x}}` on a split interval with
//!   integer gaps, plus its linearized sufficient form.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kadec's radius.
pub const KADEC_RADIUS: f64 = 0.25;

pub fn kadec_d(l: f64) -> Result<f64> {
    if !l.is_finite() || l < 0.0 {
        return Err(Error::InvalidParameter(format!("L must be a nonnegative real, got {l}")));
    }
    Ok(1.0 - (PI * l).cos() + (PI * l).sin())
}

/// `(A, B) = (cos πL − sin πL, 2 − cos πL + sin πL)` for `0 ≤ L < 1/4`.
///
/// These bound the synthesis norm, not its square.
pub fn kadec_bounds(l: f64) -> Result<(f64, f64)> {
    if !l.is_finite() || l < 0.0 {
        return Err(Error::InvalidParameter(format!("L must be a nonnegative real, got {l}")));
    }
    if l >= KADEC_RADIUS {
        return Err(Error::OutOfTheoremRange(format!("L = {l} is not below 1/4")));
    }
    let (s, c) = (PI * l).sin_cos();
    Ok((c - s, 2.0 - c + s))
}

fn check_frame_pair(gamma: f64, a: f64, b: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    if !(a.is_finite() && b.is_finite() && a > 0.0 && a <= b) {
        return Err(Error::InvalidParameter(format!("need 0 < A <= B, got A = {a}, B = {b}")));
    }
    Ok(())
}

/// `1/(8γ) − (1/(2πγ))·arcsin((1 − √(A/B))/√2)`.
pub fn balan_radius(gamma: f64, a: f64, b: f64) -> Result<f64> {
    check_frame_pair(gamma, a, b)?;
    let inner = FRAC_1_SQRT_2 * (1.0 - (a / b).sqrt());
    Ok(1.0 / (8.0 * gamma) - inner.asin() / (2.0 * PI * gamma))
}

/// Bounds of the really-perturbed sequence at perturbation size `δ`:
/// `(A(1 − √(A/B)(1 − cos γδ + sin γδ))², B(2 − cos γδ + sin γδ)²)`.
pub fn balan_perturbed_bounds(gamma: f64, a: f64, b: f64, delta: f64) -> Result<(f64, f64)> {
    let radius = balan_radius(gamma, a, b)?;
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be nonnegative, got {delta}")));
    }
    if delta >= radius {
        return Err(Error::OutOfTheoremRange(format!(
            "delta = {delta} is not below the radius {radius}"
        )));
    }
    let (s, c) = (gamma * delta).sin_cos();
    let lower = a * (1.0 - (a / b).sqrt() * (1.0 - c + s)).powi(2);
    let upper = b * (2.0 - c + s).powi(2);
    Ok((lower, upper))
}

/// `B_γ(L) = 2 − cos(πγL) + sin(πγL)`.
pub fn segment_upper_constant(gamma: f64, l: f64) -> f64 {
    let x = PI * gamma * l;
    2.0 - x.cos() + x.sin()
}

/// Distance from `x` to the nearest integer.
pub fn dist_to_integer(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// How the deviations `δₙ` are described to [`stability_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Deviations {
    /// Only `sup|δₙ| ≤ L` is known.
    Envelope(f64),
    /// The deviations themselves.
    Explicit(Vec<f64>),
}

impl Deviations {
    fn sup(&self) -> f64 {
        match self {
            Deviations::Envelope(l) => *l,
            Deviations::Explicit(v) => v.iter().fold(0.0, |m, d| m.max(d.abs())),
        }
    }

    /// `sup_n dist(ℤ, δₙ·b)`; for an envelope the worst case over `|δ| ≤ L`.
    pub fn worst_distance(&self, gap: u64) -> f64 {
        match self {
            Deviations::Envelope(l) => (gap as f64 * l).min(0.5),
            Deviations::Explicit(v) => {
                v.iter().map(|d| dist_to_integer(d * gap as f64)).fold(0.0, f64::max)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub segments: usize,
    pub sup_deviation: f64,
    pub a: f64,
    /// `B_{γⱼ}(L)` for `j = 1..m−1`.
    pub b_gamma: Vec<f64>,
    /// `B_{γⱼ}·sup_n sin(π·dist(ℤ, δₙbⱼ))` for `j = 1..m−1`.
    pub margins: Vec<f64>,
    pub lhs: f64,
    /// `A / (2√m)`.
    pub rhs: f64,
    pub satisfied: bool,
}

fn check_instance(m: usize, gammas: &[f64], gaps: &[u64], l: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("segment count must be positive".into()));
    }
    if gammas.len() != m || gaps.len() != m {
        return Err(Error::InvalidParameter(format!(
            "need {m} half-lengths and {m} gaps, got {} and {}",
            gammas.len(),
            gaps.len()
        )));
    }
    if let Some(g) = gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::InvalidParameter(format!("half-lengths must be positive, got {g}")));
    }
    if !l.is_finite() || l < 0.0 {
        return Err(Error::InvalidParameter(format!("L must be a nonnegative real, got {l}")));
    }
    if l >= KADEC_RADIUS {
        return Err(Error::OutOfTheoremRange(format!("sup|delta_n| = {l} is not below 1/4")));
    }
    Ok(())
}

/// The m-segment criterion
/// `max_{j=1..m−1} B_{γⱼ}·sup_n sin(π·dist(ℤ, δₙbⱼ)) < A/(2√m)`.
///
/// `gammas[j]` is the half-length of piece `j` and `gaps[j]` its integer
/// translation; index 0 (the untranslated piece) does not enter the maximum.
pub fn stability_check(m: usize, gammas: &[f64], gaps: &[u64], deviations: &Deviations) -> Result<StabilityReport> {
    if let Deviations::Explicit(v) = deviations {
        if v.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidParameter("non-finite deviation".into()));
        }
    }
    let l = deviations.sup();
    check_instance(m, gammas, gaps, l)?;
    let (a, _) = kadec_bounds(l)?;
    let b_gamma: Vec<f64> = gammas[1..].iter().map(|&g| segment_upper_constant(g, l)).collect();
    let margins: Vec<f64> = b_gamma
        .iter()
        .zip(&gaps[1..])
        .map(|(b, &gap)| b * (PI * deviations.worst_distance(gap)).sin())
        .collect();
    let lhs = margins.iter().copied().fold(0.0, f64::max);
    let rhs = a / (2.0 * (m as f64).sqrt());
    Ok(StabilityReport { segments: m, sup_deviation: l, a, b_gamma, margins, lhs, rhs, satisfied: lhs < rhs })
}

/// Linearized sufficient condition
/// `max_{j=1..m−1} (1 + 4Lγⱼ)·distsⱼ ≤ (1 − 4L)/(2√m·π)`.
///
/// `dists[j]` bounds `sup_n dist(ℤ, δₙbⱼ)`. For half-lengths `γⱼ ≤ 1` a
/// `true` result implies [`stability_check`] is satisfied.
pub fn stability_linearized(m: usize, gammas: &[f64], gaps: &[u64], l: f64, dists: &[f64]) -> Result<bool> {
    check_instance(m, gammas, gaps, l)?;
    if dists.len() != m {
        return Err(Error::InvalidParameter(format!("need {m} distances, got {}", dists.len())));
    }
    let lhs = gammas[1..]
        .iter()
        .zip(&dists[1..])
        .map(|(g, d)| (1.0 + 4.0 * l * g) * d)
        .fold(0.0, f64::max);
    let rhs = (1.0 - 4.0 * l) / (2.0 * (m as f64).sqrt() * PI);
    Ok(lhs <= rhs)
}
