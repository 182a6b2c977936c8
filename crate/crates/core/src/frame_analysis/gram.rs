use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::inner_product::pair_inner_product;
use crate::domains::SegmentUnion;
use crate::error::{Error, Result};
use crate::sequences::FrequencySet;

/// Dense Hermitian matrix of pairwise exponential inner products, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    order: usize,
    entries: Vec<Complex64>,
    /// Measure of the domain the entries were integrated over.
    measure: f64,
    /// Frequency index of each row.
    indices: Vec<i64>,
}

impl GramMatrix {
    /// Wrap row-major entries. Hermitian symmetry is not checked here.
    pub fn from_entries(order: usize, entries: Vec<Complex64>, measure: f64) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        Ok(GramMatrix { order, entries, measure, indices: (0..order as i64).collect() })
    }

    pub(crate) fn with_indices(mut self, indices: Vec<i64>) -> Self {
        debug_assert_eq!(indices.len(), self.order);
        self.indices = indices;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.order + col]
    }

    /// Largest `|G[i][j] − H[i][j]|`.
    pub fn max_abs_diff(&self, other: &GramMatrix) -> Result<f64> {
        if self.order != other.order {
            return Err(Error::InvalidMatrix(format!(
                "order mismatch: {} vs {}",
                self.order, other.order
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest deviation from `scale · I`.
    pub fn max_deviation_from_identity(&self, scale: f64) -> f64 {
        let n = self.order;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let target = if i == j { scale } else { 0.0 };
                (self.get(i, j) - Complex64::new(target, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|G[i][j] − conj(G[j][i])|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.order;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i).re).sum()
    }

    /// `Σ_{m,n} aₘ conj(aₙ) G[m][n]`, i.e. `‖Σ aₙ e_{λₙ}‖²` for a Gram matrix.
    pub fn quadratic_form(&self, coeffs: &[Complex64]) -> Result<f64> {
        if coeffs.len() != self.order {
            return Err(Error::InvalidParameter(format!(
                "need {} coefficients, got {}",
                self.order,
                coeffs.len()
            )));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (m, am) in coeffs.iter().enumerate() {
            let row = &self.entries[m * self.order..(m + 1) * self.order];
            let inner: Complex64 = row.iter().zip(coeffs).map(|(g, an)| g * an.conj()).sum();
            total += am * inner;
        }
        Ok(total.re)
    }

    /// Matrix dump: the order on the first line, then one `re,im` pair per
    /// line in row-major order, floats at 17 significant digits.
    pub fn to_dump(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 48);
        let _ = writeln!(out, "{}", self.order);
        for z in &self.entries {
            let _ = writeln!(out, "{:.16e},{:.16e}", z.re, z.im);
        }
        out
    }
}

/// Parse the format written by [`GramMatrix::to_dump`].
pub fn read_matrix_dump(text: &str) -> Result<GramMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let order: usize = lines
        .next()
        .ok_or_else(|| Error::InvalidMatrix("empty dump".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::InvalidMatrix("bad order header".into()))?;
    let mut entries = Vec::with_capacity(order * order);
    for (i, line) in lines.enumerate() {
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| Error::InvalidMatrix(format!("line {} is not a re,im pair", i + 2)))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidMatrix(format!("bad number on line {}", i + 2)))
        };
        entries.push(Complex64::new(parse(re)?, parse(im)?));
    }
    let diag_mean = if order == 0 {
        0.0
    } else {
        (0..order).map(|i| entries.get(i * order + i).map_or(0.0, |z| z.re)).sum::<f64>() / order as f64
    };
    GramMatrix::from_entries(order, entries, diag_mean)
}

/// Gram matrix of `{e^{2πiλₙx}}` over `domain`, rows in the set's order.
///
/// Entries are computed independently (in parallel on the rayon pool), and
/// `G[n][m]` is the exact floating-point conjugate of `G[m][n]`.
pub fn gram(fs: &FrequencySet, domain: &SegmentUnion) -> GramMatrix {
    let lambdas = fs.lambdas();
    let n = lambdas.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    entries.par_chunks_mut(n.max(1)).enumerate().for_each(|(row, out)| {
        let lm = lambdas[row];
        for (col, slot) in out.iter_mut().enumerate() {
            *slot = pair_inner_product(lm, lambdas[col], domain);
        }
    });
    GramMatrix { order: n, entries, measure: domain.measure(), indices: fs.entries().iter().map(|f| f.index).collect() }
}
