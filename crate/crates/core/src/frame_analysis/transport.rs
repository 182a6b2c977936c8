//! Translation phases, the transport identity between `[0, 1)` and a split
//! interval, lattice complements, and the dilation/translation rule.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigenvalues;
use super::gram::{gram, GramMatrix};
use super::inner_product::segment_integral;
use crate::domains::{build_split, SegmentUnion, SplitSpec};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sequences::{star_numerator, Frequency, FrequencySet, Provenance, ScaleParameter};

/// `bλ` reduced to `[−1/2, 1/2)` turns, exactly when both factors are rational.
fn reduced_turns(gap: &Rational, f: &Frequency) -> f64 {
    match f.exact {
        Some(lambda) => {
            let x = gap * lambda;
            let fr = rational::frac(&x);
            let fr = if fr * 2 >= Rational::from_integer(1) { fr - Rational::from_integer(1) } else { fr };
            rational::to_f64(&fr)
        }
        None => {
            let x = rational::to_f64(gap) * f.lambda;
            x - x.round()
        }
    }
}

fn unit_phase(turns: f64) -> Complex64 {
    if turns == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let (s, c) = (2.0 * PI * turns).sin_cos();
    Complex64::new(c, s)
}

/// `max_{n,k} |e^{−2πi bₖ λₙ} − 1|`.
///
/// Zero exactly when every `bₖλₙ` is an integer, i.e. when translating the
/// pieces of `[0, 1)` by the gaps does not change any exponential.
pub fn modulation_defect(fs: &FrequencySet, gaps: &[Rational]) -> f64 {
    fs.entries()
        .iter()
        .flat_map(|f| gaps.iter().map(move |b| reduced_turns(b, f)))
        .map(|t| 2.0 * (PI * t).sin().abs())
        .fold(0.0, f64::max)
}

/// Phase table `e^{2πi bₖ λₙ}`: one row per frequency, one column per gap.
pub fn transport_phases(fs: &FrequencySet, gaps: &[Rational]) -> Vec<Vec<Complex64>> {
    fs.entries()
        .iter()
        .map(|f| gaps.iter().map(|b| unit_phase(reduced_turns(b, f))).collect())
        .collect()
}

/// Gram matrix on `J` of the transported system
/// `gₙ(x) = e^{2πiλₙ(x − bₖ)}` for `x ∈ Jₖ`.
pub fn transported_gram(spec: &SplitSpec, fs: &FrequencySet) -> Result<GramMatrix> {
    let j = build_split(spec)?;
    let phases = transport_phases(fs, spec.gaps());
    let lambdas = fs.lambdas();
    let n = lambdas.len();
    let segments = j.segments();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    entries.par_chunks_mut(n.max(1)).enumerate().for_each(|(row, out)| {
        for (col, slot) in out.iter_mut().enumerate() {
            let theta = lambdas[row] - lambdas[col];
            *slot = segments
                .iter()
                .enumerate()
                .map(|(k, s)| phases[row][k].conj() * phases[col][k] * segment_integral(theta, s.start, s.end))
                .sum();
        }
    });
    Ok(GramMatrix::from_entries(n, entries, j.measure())?
        .with_indices(fs.entries().iter().map(|f| f.index).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportReport {
    pub order: usize,
    /// Largest entrywise gap between the transported Gram on `J` and the
    /// source Gram on `[0, 1)`.
    pub max_deviation: f64,
}

/// Compare the transported system on `J` with the source system on `[0, 1)`.
/// The two Gram matrices agree for every frequency set.
pub fn transported_gram_check(spec: &SplitSpec, fs: &FrequencySet) -> Result<TransportReport> {
    let moved = transported_gram(spec, fs)?;
    let source = gram(fs, &SegmentUnion::unit_interval());
    Ok(TransportReport { order: moved.order(), max_deviation: moved.max_abs_diff(&source)? })
}

/// `(1/Δ)ℤ ∩ [−window, window]` with the star set `{n + δ*ₙ}` removed.
///
/// Requires an exact `β` with `Δ/β ∈ ℤ`, so that the star set lies on the
/// lattice; membership is decided in rational arithmetic.
pub fn complement_frequencies(beta: &ScaleParameter, delta: Rational, window: usize) -> Result<FrequencySet> {
    let b = beta.as_rational().ok_or_else(|| {
        Error::Unsupported("lattice complements need an exact rational beta".into())
    })?;
    if rational::integer_quotient(&delta, &b).is_none() {
        return Err(Error::InvalidParameter(format!(
            "Delta = {} is not an integer multiple of beta = {beta}",
            rational::format_rational(&delta)
        )));
    }
    let lattice = FrequencySet::lattice(delta, window)?;
    let w = window as i64;
    // |δ*ₙ| ≤ 1/2, so only |n| ≤ window + 1 can land inside the window.
    let mut star: HashSet<Rational> = HashSet::new();
    for n in -(w + 1)..=(w + 1) {
        star.insert(Rational::from_integer(star_numerator(n, beta)?) / b);
    }
    let entries: Vec<Frequency> = lattice
        .entries()
        .iter()
        .filter(|f| !star.contains(&f.exact.expect("lattice points are exact")))
        .copied()
        .collect();
    Ok(FrequencySet::from_parts(window, Provenance::LatticeComplement { delta, beta: *beta }, entries))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationReport {
    pub scale: f64,
    pub offset: f64,
    /// Largest `|μ' − ρμ| / max(|ρμ|, ρ·‖G‖₂)` over paired eigenvalues.
    pub max_relative_deviation: f64,
    pub source_spectrum: Vec<f64>,
    pub dilated_spectrum: Vec<f64>,
}

/// Spectrum of `Gram(λ/ρ, v + ρD)` against `ρ · spectrum(Gram(λ, D))`.
pub fn dilation_check(fs: &FrequencySet, domain: &SegmentUnion, scale: f64, offset: f64) -> Result<DilationReport> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidParameter(format!("dilation factor must be positive, got {scale}")));
    }
    let moved_domain = domain.dilate_translate(scale, offset)?;
    let moved_set = fs.scaled(1.0 / scale)?;
    let source = hermitian_eigenvalues(&gram(fs, domain))?;
    let dilated = hermitian_eigenvalues(&gram(&moved_set, &moved_domain))?;
    let norm = source.iter().fold(0.0f64, |m, x| m.max(x.abs())) * scale;
    let max_relative_deviation = source
        .iter()
        .zip(&dilated)
        .map(|(s, d)| (d - scale * s).abs() / (scale * s.abs()).max(norm).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(DilationReport { scale, offset, max_relative_deviation, source_spectrum: source, dilated_spectrum: dilated })
}
