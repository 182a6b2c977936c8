//! Frequency sequences: the star perturbation `δ*ₙ`, the frequency sets it
//! generates, and the diagnostics used to argue they form Riesz bases
//! (separation, periodicity, block averages, equidistribution averages).

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Values of `x` within this relative distance of an integer are snapped to it
/// before the branch on `{x} ≥ 1/2` is taken.
pub const SNAP_TOLERANCE: f64 = 1e-12;

/// The scale `β > 0` that drives the star construction.
///
/// `Exact` holds `p/q` in lowest terms and is evaluated in integer
/// arithmetic end to end. `Real` is for irrational (or simply decimal)
/// scales and uses floating point with integer snapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScaleParameter {
    Exact(Rational),
    Real(f64),
}

impl ScaleParameter {
    pub fn exact(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Self::from_rational(Rational::new(p, q))
    }

    pub fn from_rational(r: Rational) -> Result<Self> {
        if !rational::is_positive(&r) {
            return Err(Error::InvalidParameter(format!(
                "scale parameter must be positive, got {}",
                rational::format_rational(&r)
            )));
        }
        Ok(ScaleParameter::Exact(r))
    }

    pub fn real(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite scale parameter {value}")));
        }
        if value <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "scale parameter must be positive, got {value}"
            )));
        }
        Ok(ScaleParameter::Real(value))
    }

    pub fn value(&self) -> f64 {
        match self {
            ScaleParameter::Exact(r) => rational::to_f64(r),
            ScaleParameter::Real(v) => *v,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ScaleParameter::Exact(r) => Some(*r),
            ScaleParameter::Real(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScaleParameter::Exact(_))
    }

    fn validate(&self) -> Result<()> {
        match self {
            ScaleParameter::Exact(r) if !rational::is_positive(r) => Err(Error::InvalidParameter(
                "scale parameter must be positive".into(),
            )),
            ScaleParameter::Real(v) if !v.is_finite() => {
                Err(Error::InvalidParameter(format!("non-finite scale parameter {v}")))
            }
            ScaleParameter::Real(v) if *v <= 0.0 => {
                Err(Error::InvalidParameter(format!("scale parameter must be positive, got {v}")))
            }
            _ => Ok(()),
        }
    }

    fn require_at_least_one(&self) -> Result<()> {
        let below = match self {
            ScaleParameter::Exact(r) => *r < Rational::from_integer(1),
            ScaleParameter::Real(v) => *v < 1.0,
        };
        if below {
            return Err(Error::DomainViolation(format!(
                "star construction needs beta >= 1, got {self}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ScaleParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleParameter::Exact(r) => f.write_str(&rational::format_rational(r)),
            ScaleParameter::Real(v) => write!(f, "{v}"),
        }
    }
}

/// `p/q` or an integer gives an exact scale; any other decimal literal a real one.
impl FromStr for ScaleParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') || s.parse::<i64>().is_ok() {
            return ScaleParameter::from_rational(rational::parse_rational(s)?);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse scale parameter {s:?}")))?;
        ScaleParameter::real(v)
    }
}

/// Floor and fractional part of `x` with near-integers snapped.
fn snapped_floor_frac(x: f64) -> (f64, f64) {
    let mut fl = x.floor();
    let mut fr = x - fl;
    let eps = SNAP_TOLERANCE * x.abs().max(1.0);
    if fr < eps {
        fr = 0.0;
    } else if 1.0 - fr < eps {
        fl += 1.0;
        fr = 0.0;
    }
    (fl, fr)
}

/// The integer `Mₙ` with `n + δ*ₙ = Mₙ / β`: `βn` rounded to the nearest
/// integer, halves rounded up.
pub fn star_numerator(n: i64, beta: &ScaleParameter) -> Result<i64> {
    beta.validate()?;
    match beta {
        ScaleParameter::Exact(r) => {
            let (p, q) = (*r.numer() as i128, *r.denom() as i128);
            let scaled = p * n as i128;
            let fl = scaled.div_euclid(q);
            let rem = scaled.rem_euclid(q);
            let m = if 2 * rem >= q { fl + 1 } else { fl };
            i64::try_from(m).map_err(|_| Error::OutOfRange(format!("beta*n overflows at n={n}")))
        }
        ScaleParameter::Real(b) => {
            let (fl, fr) = snapped_floor_frac(b * n as f64);
            let m = if fr >= 0.5 { fl + 1.0 } else { fl };
            if m.abs() >= 9.0e15 {
                return Err(Error::OutOfRange(format!("beta*n too large at n={n}")));
            }
            Ok(m as i64)
        }
    }
}

/// Exact `δ*ₙ` for a rational scale.
pub fn delta_star_exact(n: i64, beta: Rational) -> Result<Rational> {
    let scale = ScaleParameter::from_rational(beta)?;
    let m = star_numerator(n, &scale)?;
    Ok(Rational::from_integer(m) / beta - Rational::from_integer(n))
}

/// `δ*ₙ`: the offset moving `n` to the nearest point of `(1/β)ℤ`, ties going up.
pub fn delta_star(n: i64, beta: &ScaleParameter) -> Result<f64> {
    match beta {
        ScaleParameter::Exact(r) => Ok(rational::to_f64(&delta_star_exact(n, *r)?)),
        ScaleParameter::Real(b) => {
            let m = star_numerator(n, beta)?;
            let d = m as f64 / b - n as f64;
            Ok(if d == 0.0 { 0.0 } else { d })
        }
    }
}

/// `ξₙ ∈ {−1, +1}`: `+1` exactly when `{βn} ≥ 1/2`.
pub fn sign_xi(n: i64, beta: &ScaleParameter) -> Result<i8> {
    beta.validate()?;
    let upper = match beta {
        ScaleParameter::Exact(r) => {
            let f = rational::frac(&(r * Rational::from_integer(n)));
            f * 2 >= Rational::from_integer(1)
        }
        ScaleParameter::Real(b) => snapped_floor_frac(b * n as f64).1 >= 0.5,
    };
    Ok(if upper { 1 } else { -1 })
}

/// The 1-periodic sawtooth `g` with `δ*ₙ = g(nβ)/β`.
pub fn sawtooth_g(x: f64) -> f64 {
    let (_, fr) = snapped_floor_frac(x);
    let g = if fr >= 0.5 { 1.0 - fr } else { -fr };
    if g == 0.0 {
        0.0
    } else {
        g
    }
}

pub fn sawtooth_g_exact(x: &Rational) -> Rational {
    let fr = rational::frac(x);
    if fr * 2 >= Rational::from_integer(1) {
        Rational::from_integer(1) - fr
    } else {
        -fr
    }
}

/// Where a frequency set came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    /// `λₙ = n + δ*ₙ(β)`.
    Star(ScaleParameter),
    /// `λₙ = n + δₙ` for caller-supplied deviations.
    Perturbed,
    /// `(1/Δ)ℤ`; entry index `k` stands for `k/Δ`.
    Lattice { delta: Rational },
    /// `(1/Δ)ℤ` minus the star set of `β`; entry index is the lattice index.
    LatticeComplement { delta: Rational, beta: ScaleParameter },
    /// Arbitrary list, e.g. a rescaled copy of another set.
    Custom,
}

impl Provenance {
    /// Star and perturbed sets are indexed by `n` with `λₙ = n + δₙ`.
    pub fn is_index_perturbation(&self) -> bool {
        matches!(self, Provenance::Star(_) | Provenance::Perturbed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub index: i64,
    pub lambda: f64,
    /// `λ − index` for index-perturbation sets.
    pub deviation: Option<f64>,
    /// Exact value when the construction is rational.
    pub exact: Option<Rational>,
    /// Exact deviation when available.
    pub exact_deviation: Option<Rational>,
}

/// A finite window of real frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySet {
    window: usize,
    provenance: Provenance,
    entries: Vec<Frequency>,
}

fn window_as_i64(window: usize) -> Result<i64> {
    if window == 0 {
        return Err(Error::InvalidParameter("window must be at least 1".into()));
    }
    i64::try_from(window).map_err(|_| Error::InvalidParameter("window too large".into()))
}

impl FrequencySet {
    /// `{n + δ*ₙ : |n| ≤ window}`; requires `β ≥ 1`.
    pub fn star(beta: ScaleParameter, window: usize) -> Result<Self> {
        beta.require_at_least_one()?;
        Self::star_unchecked(beta, window)
    }

    /// Like [`FrequencySet::star`] but allows `0 < β < 1` for experiments.
    pub fn star_unchecked(beta: ScaleParameter, window: usize) -> Result<Self> {
        beta.validate()?;
        let w = window_as_i64(window)?;
        let mut entries = Vec::with_capacity(2 * window + 1);
        for n in -w..=w {
            let m = star_numerator(n, &beta)?;
            let entry = match beta {
                ScaleParameter::Exact(r) => {
                    let lambda = Rational::from_integer(m) / r;
                    let dev = lambda - Rational::from_integer(n);
                    Frequency {
                        index: n,
                        lambda: rational::to_f64(&lambda),
                        deviation: Some(rational::to_f64(&dev)),
                        exact: Some(lambda),
                        exact_deviation: Some(dev),
                    }
                }
                ScaleParameter::Real(b) => {
                    let lambda = m as f64 / b;
                    Frequency {
                        index: n,
                        lambda,
                        deviation: Some(lambda - n as f64),
                        exact: None,
                        exact_deviation: None,
                    }
                }
            };
            entries.push(entry);
        }
        Ok(FrequencySet { window, provenance: Provenance::Star(beta), entries })
    }

    /// `λₙ = n + deviations[n + window]` for `|n| ≤ window`.
    pub fn perturbed(window: usize, deviations: &[f64]) -> Result<Self> {
        let w = window_as_i64(window)?;
        if deviations.len() != 2 * window + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} deviations for window {window}, got {}",
                2 * window + 1,
                deviations.len()
            )));
        }
        if let Some(bad) = deviations.iter().find(|d| !d.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite deviation {bad}")));
        }
        let entries = (-w..=w)
            .zip(deviations)
            .map(|(n, &d)| Frequency {
                index: n,
                lambda: n as f64 + d,
                deviation: Some(d),
                exact: None,
                exact_deviation: None,
            })
            .collect();
        Ok(FrequencySet { window, provenance: Provenance::Perturbed, entries })
    }

    /// Perturbed set with deviations given by a function of the index.
    pub fn perturbed_fn(window: usize, mut deviation: impl FnMut(i64) -> f64) -> Result<Self> {
        let w = window_as_i64(window)?;
        let devs: Vec<f64> = (-w..=w).map(&mut deviation).collect();
        Self::perturbed(window, &devs)
    }

    /// `(1/Δ)ℤ ∩ [−window, window]`.
    pub fn lattice(delta: Rational, window: usize) -> Result<Self> {
        let w = window_as_i64(window)?;
        if !rational::is_positive(&delta) {
            return Err(Error::InvalidParameter("lattice spacing must be positive".into()));
        }
        let kmax = (delta * Rational::from_integer(w)).floor().to_integer();
        let entries = (-kmax..=kmax)
            .map(|k| {
                let lambda = Rational::from_integer(k) / delta;
                Frequency {
                    index: k,
                    lambda: rational::to_f64(&lambda),
                    deviation: None,
                    exact: Some(lambda),
                    exact_deviation: None,
                }
            })
            .collect();
        Ok(FrequencySet { window, provenance: Provenance::Lattice { delta }, entries })
    }

    /// Arbitrary `(index, λ)` list, stored in the given order.
    pub fn custom(window: usize, points: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let entries: Vec<Frequency> = points
            .into_iter()
            .map(|(index, lambda)| Frequency {
                index,
                lambda,
                deviation: None,
                exact: None,
                exact_deviation: None,
            })
            .collect();
        if let Some(bad) = entries.iter().find(|f| !f.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite frequency {}", bad.lambda)));
        }
        Ok(FrequencySet { window, provenance: Provenance::Custom, entries })
    }

    pub(crate) fn from_parts(window: usize, provenance: Provenance, entries: Vec<Frequency>) -> Self {
        FrequencySet { window, provenance, entries }
    }

    /// Copy with every frequency multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor == 0.0 {
            return Err(Error::InvalidParameter(format!("bad scale factor {factor}")));
        }
        Self::custom(self.window, self.entries.iter().map(|f| (f.index, f.lambda * factor)))
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn entries(&self) -> &[Frequency] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.entries.iter().map(|f| f.lambda).collect()
    }

    /// Entry with the given index, if stored.
    pub fn get(&self, index: i64) -> Option<&Frequency> {
        if self.provenance.is_index_perturbation() {
            let pos = index + self.window as i64;
            if pos < 0 {
                return None;
            }
            self.entries.get(pos as usize).filter(|f| f.index == index)
        } else {
            self.entries.iter().find(|f| f.index == index)
        }
    }

    /// Largest `|δₙ|` over the window (index-perturbation sets only).
    pub fn sup_deviation(&self) -> Option<f64> {
        self.entries
            .iter()
            .map(|f| f.deviation.map(f64::abs))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }
}

/// Smallest gap between consecutive stored frequencies.
///
/// Returns `+∞` for sets with fewer than two entries.
pub fn separation_gap(fs: &FrequencySet) -> f64 {
    let exact: Option<Vec<Rational>> = fs.entries.iter().map(|f| f.exact).collect();
    if let Some(ex) = exact {
        return ex
            .windows(2)
            .map(|w| w[1] - w[0])
            .min()
            .map(|r| rational::to_f64(&r))
            .unwrap_or(f64::INFINITY);
    }
    fs.entries
        .windows(2)
        .map(|w| w[1].lambda - w[0].lambda)
        .fold(f64::INFINITY, f64::min)
}

/// Period `q` of `δ*` for `β = p/q`.
pub fn period_of(beta: &ScaleParameter) -> Result<i64> {
    match beta {
        ScaleParameter::Exact(r) => {
            beta.validate()?;
            Ok(*r.denom())
        }
        ScaleParameter::Real(_) => Err(Error::Unsupported(
            "a real (possibly irrational) scale has no period".into(),
        )),
    }
}

/// `|(1/N) Σ_{n=mN+1}^{(m+1)N} δₙ|`, the block average bounded in Avdonin's condition.
pub fn avdonin_average(fs: &FrequencySet, block: usize, m: i64) -> Result<f64> {
    if block == 0 {
        return Err(Error::InvalidParameter("block length must be at least 1".into()));
    }
    if !fs.provenance.is_index_perturbation() {
        return Err(Error::InvalidParameter(
            "block averages need a set indexed as n + delta_n".into(),
        ));
    }
    let n_blk = block as i64;
    let first = m
        .checked_mul(n_blk)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::OutOfRange("block start overflows".into()))?;
    let last = first + n_blk - 1;
    let w = fs.window as i64;
    if first < -w || last > w {
        return Err(Error::OutOfRange(format!(
            "block [{first}, {last}] outside window [-{w}, {w}]"
        )));
    }
    let block_entries: Vec<&Frequency> =
        (first..=last).map(|n| fs.get(n).expect("index inside window")).collect();
    let exact: Option<Vec<Rational>> = block_entries.iter().map(|f| f.exact_deviation).collect();
    if let Some(devs) = exact {
        let sum: Rational = devs.iter().fold(Rational::zero(), |acc, d| acc + d);
        return Ok(rational::to_f64(&(sum / Rational::from_integer(n_blk)).abs()));
    }
    let sum: f64 = block_entries.iter().map(|f| f.deviation.unwrap_or(0.0)).sum();
    Ok((sum / block as f64).abs())
}

/// `(1/N) Σ_{n=1}^{N} g(nβ)`.
///
/// Any scale is accepted; no attempt is made to decide whether it is
/// irrational. Exact scales are summed in integer arithmetic.
pub fn weyl_average(beta: &ScaleParameter, count: usize) -> Result<f64> {
    beta.validate()?;
    if count == 0 {
        return Err(Error::InvalidParameter("need at least one term".into()));
    }
    match beta {
        ScaleParameter::Exact(r) => {
            let (p, q) = (*r.numer() as i128, *r.denom() as i128);
            // q·g(n p/q) is an integer: q - rem or -rem.
            let mut total: i128 = 0;
            for n in 1..=count as i128 {
                let rem = (p * n).rem_euclid(q);
                total += if 2 * rem >= q { q - rem } else { -rem };
            }
            Ok(total as f64 / (q as f64 * count as f64))
        }
        ScaleParameter::Real(b) => {
            let sum: f64 = (1..=count).map(|n| sawtooth_g(n as f64 * b)).sum();
            Ok(sum / count as f64)
        }
    }
}
