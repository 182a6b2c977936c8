use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigenvalues;
use super::gram::gram;
use crate::domains::SegmentUnion;
use crate::error::{Error, Result};
use crate::sequences::FrequencySet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundPoint {
    pub window: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Extreme Gram eigenvalues along a schedule of nested windows.
///
/// Each point is a finite-section certificate: the family restricted to
/// `|n| ≤ N` has Riesz bounds exactly `(lambda_min, lambda_max)`. Nothing
/// here claims a limit as `N → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundEstimate {
    pub series: Vec<FrameBoundPoint>,
}

impl FrameBoundEstimate {
    /// `lambda_min` nonincreasing and `lambda_max` nondecreasing, up to `tol`.
    pub fn is_interlaced(&self, tol: f64) -> bool {
        self.series.windows(2).all(|w| {
            w[1].lambda_min <= w[0].lambda_min + tol && w[1].lambda_max >= w[0].lambda_max - tol
        })
    }

    /// Every point inside `[lower − tol, upper + tol]`.
    pub fn contained_in(&self, lower: f64, upper: f64, tol: f64) -> bool {
        self.series
            .iter()
            .all(|p| p.lambda_min >= lower - tol && p.lambda_max <= upper + tol)
    }

    /// `N,lambda_min,lambda_max` with a header row; floats at 15 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,lambda_min,lambda_max\n");
        for p in &self.series {
            out.push_str(&format!("{},{:.14e},{:.14e}\n", p.window, p.lambda_min, p.lambda_max));
        }
        out
    }
}

/// Run the finite-section analysis for each window in `schedule`.
///
/// `family` builds the frequency set for a given window; `schedule` must be
/// strictly increasing so the sections are nested.
pub fn frame_bounds<F>(family: F, domain: &SegmentUnion, schedule: &[usize]) -> Result<FrameBoundEstimate>
where
    F: Fn(usize) -> Result<FrequencySet>,
{
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty window schedule".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("window schedule must be strictly increasing".into()));
    }
    let mut series = Vec::with_capacity(schedule.len());
    for &window in schedule {
        let fs = family(window)?;
        let spectrum = hermitian_eigenvalues(&gram(&fs, domain))?;
        let (lambda_min, lambda_max) = match (spectrum.first(), spectrum.last()) {
            (Some(lo), Some(hi)) => (*lo, *hi),
            _ => return Err(Error::InvalidParameter(format!("window {window} produced no frequencies"))),
        };
        series.push(FrameBoundPoint { window, lambda_min, lambda_max });
    }
    Ok(FrameBoundEstimate { series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::ScaleParameter;

    #[test]
    fn integer_lattice_is_tight() {
        let beta = ScaleParameter::exact(1, 1).unwrap();
        let est = frame_bounds(|n| FrequencySet::star(beta, n), &SegmentUnion::unit_interval(), &[8, 16, 32]).unwrap();
        for p in &est.series {
            assert!((p.lambda_min - 1.0).abs() < 1e-12 && (p.lambda_max - 1.0).abs() < 1e-12);
        }
        assert!(est.is_interlaced(1e-12));
    }

    #[test]
    fn schedule_validation() {
        let beta = ScaleParameter::exact(1, 1).unwrap();
        let d = SegmentUnion::unit_interval();
        assert!(frame_bounds(|n| FrequencySet::star(beta, n), &d, &[]).is_err());
        assert!(frame_bounds(|n| FrequencySet::star(beta, n), &d, &[8, 8]).is_err());
        assert!(frame_bounds(|n| FrequencySet::star(beta, n), &d, &[16, 8]).is_err());
    }

    #[test]
    fn csv_layout() {
        let est = FrameBoundEstimate {
            series: vec![FrameBoundPoint { window: 4, lambda_min: 0.5, lambda_max: 1.25 }],
        };
        assert_eq!(est.to_csv(), "N,lambda_min,lambda_max\n4,5.00000000000000e-1,1.25000000000000e0\n");
    }
}
