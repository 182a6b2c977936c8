//! d-dimensional star systems on split cubes.
//!
//! Only full Cartesian products are handled: the domain is `D₁ × … × D_d`
//! with each `Dₖ` a split interval, and the frequencies are products of
//! one-dimensional star sets. The Gram matrix is then the Kronecker product
//! of the axis Gram matrices, assembled entry by entry from 1-D values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domains::BoxUnion;
use crate::error::{Error, Result};
use crate::frame_analysis::{gram, GramMatrix};
use crate::sequences::{FrequencySet, ScaleParameter};

/// Largest supported dimension; keeps `(2N+1)^d` at desk scale.
pub const MAX_DIMENSION: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductFrequencySet {
    factors: Vec<FrequencySet>,
}

impl ProductFrequencySet {
    pub fn new(factors: Vec<FrequencySet>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("need at least one axis".into()));
        }
        if factors.len() > MAX_DIMENSION {
            return Err(Error::InvalidParameter(format!(
                "dimension {} exceeds the supported maximum {MAX_DIMENSION}",
                factors.len()
            )));
        }
        let w = factors[0].window();
        if factors.iter().any(|f| f.window() != w) {
            return Err(Error::InvalidParameter("all axes must share one window".into()));
        }
        Ok(ProductFrequencySet { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[FrequencySet] {
        &self.factors
    }

    /// Number of multi-indices.
    pub fn len(&self) -> usize {
        self.factors.iter().map(FrequencySet::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Frequency vectors in lexicographic order, first axis slowest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for f in &self.factors {
            let lambdas = f.lambdas();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    lambdas.iter().map(move |l| {
                        let mut p = prefix.clone();
                        p.push(*l);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

/// Per-axis star sets `n + δ*ₙ(βₖ)` over a common window.
pub fn product_frequencies(betas: &[ScaleParameter], window: usize) -> Result<ProductFrequencySet> {
    let factors = betas
        .iter()
        .map(|b| FrequencySet::star(*b, window))
        .collect::<Result<Vec<_>>>()?;
    ProductFrequencySet::new(factors)
}

/// Kronecker product `G₁ ⊗ … ⊗ G_d`, first factor slowest.
pub fn kronecker(factors: &[GramMatrix]) -> Result<GramMatrix> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidParameter("need at least one factor".into()))?;
    let mut order = first.order();
    let mut entries = first.entries().to_vec();
    let mut measure = first.measure();
    for g in &factors[1..] {
        let (n1, n2) = (order, g.order());
        let new_order = n1 * n2;
        let mut next = vec![Complex64::new(0.0, 0.0); new_order * new_order];
        for i1 in 0..n1 {
            for j1 in 0..n1 {
                let a = entries[i1 * n1 + j1];
                for i2 in 0..n2 {
                    let row = (i1 * n2 + i2) * new_order + j1 * n2;
                    for j2 in 0..n2 {
                        next[row + j2] = a * g.get(i2, j2);
                    }
                }
            }
        }
        order = new_order;
        entries = next;
        measure *= g.measure();
    }
    GramMatrix::from_entries(order, entries, measure)
}

/// Gram matrix of the product system over a split cube.
pub fn product_gram(pfs: &ProductFrequencySet, cube: &BoxUnion) -> Result<GramMatrix> {
    if pfs.dim() != cube.dim() {
        return Err(Error::InvalidParameter(format!(
            "frequency set has {} axes but the cube has {}",
            pfs.dim(),
            cube.dim()
        )));
    }
    let axis_grams: Vec<GramMatrix> = pfs
        .factors()
        .iter()
        .zip(cube.axis_domains())
        .map(|(f, d)| gram(f, d))
        .collect();
    kronecker(&axis_grams)
}

/// `(Π Aₖ, Π Bₖ)`.
pub fn product_bounds(bounds: &[(f64, f64)]) -> Result<(f64, f64)> {
    if bounds.is_empty() {
        return Err(Error::InvalidParameter("need at least one axis".into()));
    }
    if let Some((a, b)) = bounds.iter().find(|(a, b)| !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite())) {
        return Err(Error::InvalidParameter(format!("bounds must be positive, got ({a}, {b})")));
    }
    Ok(bounds.iter().fold((1.0, 1.0), |(pa, pb), (a, b)| (pa * a, pb * b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{box_product, SplitSpec};
    use crate::frame_analysis::{hermitian_eigenvalues, modulation_defect, pair_inner_product};
    use crate::rational::Rational;

    fn exact(p: i64, d: i64) -> ScaleParameter {
        ScaleParameter::exact(p, d).unwrap()
    }

    fn worked() -> SplitSpec {
        SplitSpec::new(
            vec![Rational::new(0, 1), Rational::new(1, 2), Rational::new(1, 1)],
            vec![Rational::new(0, 1), Rational::new(5, 2)],
        )
        .unwrap()
    }

    #[test]
    fn one_axis_is_star_set() {
        let p = product_frequencies(&[exact(5, 2)], 6).unwrap();
        assert_eq!(p.factors()[0], FrequencySet::star(exact(5, 2), 6).unwrap());
    }

    #[test]
    fn integer_lattice_in_two_dims() {
        let p = product_frequencies(&[exact(1, 1), exact(1, 1)], 4).unwrap();
        assert_eq!(p.len(), 81);
        assert!(p.points().iter().all(|v| v.iter().all(|x| x.fract() == 0.0)));
        let cube = box_product(&[SplitSpec::unsplit(), SplitSpec::unsplit()]).unwrap();
        let g = product_gram(&p, &cube).unwrap();
        assert!(g.max_deviation_from_identity(1.0) < 1e-12);
    }

    #[test]
    fn axes_match_one_dimensional_sets() {
        let p = product_frequencies(&[exact(5, 2), exact(3, 2)], 8).unwrap();
        assert_eq!(p.factors()[0], FrequencySet::star(exact(5, 2), 8).unwrap());
        assert_eq!(p.factors()[1], FrequencySet::star(exact(3, 2), 8).unwrap());
    }

    #[test]
    fn entries_are_products_of_axis_entries() {
        let p = product_frequencies(&[exact(5, 2), exact(7, 4)], 3).unwrap();
        let cube = box_product(&[worked(), SplitSpec::unsplit()]).unwrap();
        let g = product_gram(&p, &cube).unwrap();
        let pts = p.points();
        let (d1, d2) = (&cube.axis_domains()[0], &cube.axis_domains()[1]);
        for (i, x) in pts.iter().enumerate() {
            for (j, y) in pts.iter().enumerate() {
                let want = pair_inner_product(x[0], y[0], d1) * pair_inner_product(x[1], y[1], d2);
                assert_eq!(g.get(i, j), want);
            }
        }
    }

    #[test]
    fn split_cube_equals_unit_cube_when_phases_vanish() {
        let betas = [exact(5, 2), exact(5, 2)];
        let p = product_frequencies(&betas, 5).unwrap();
        for f in p.factors() {
            assert_eq!(modulation_defect(f, worked().gaps()), 0.0);
        }
        let split = product_gram(&p, &box_product(&[worked(), worked()]).unwrap()).unwrap();
        let unit = product_gram(&p, &box_product(&[SplitSpec::unsplit(), SplitSpec::unsplit()]).unwrap()).unwrap();
        assert!(split.max_abs_diff(&unit).unwrap() < 1e-10);
    }

    #[test]
    fn spectrum_is_pairwise_products() {
        let p = product_frequencies(&[exact(5, 2), exact(3, 2)], 4).unwrap();
        let cube = box_product(&[worked(), SplitSpec::unsplit()]).unwrap();
        let g = product_gram(&p, &cube).unwrap();
        let e1 = hermitian_eigenvalues(&gram(&p.factors()[0], &cube.axis_domains()[0])).unwrap();
        let e2 = hermitian_eigenvalues(&gram(&p.factors()[1], &cube.axis_domains()[1])).unwrap();
        let mut want: Vec<f64> = e1.iter().flat_map(|a| e2.iter().map(move |b| a * b)).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got = hermitian_eigenvalues(&g).unwrap();
        for (x, y) in got.iter().zip(&want) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!((got[0] - e1[0] * e2[0]).abs() < 1e-9);
    }

    #[test]
    fn mismatch_and_limits() {
        let p = product_frequencies(&[exact(1, 1), exact(1, 1)], 2).unwrap();
        let cube = box_product(&[SplitSpec::unsplit()]).unwrap();
        assert!(product_gram(&p, &cube).is_err());
        assert!(product_frequencies(&[exact(1, 1); 4], 1).is_err());
        assert!(matches!(
            product_frequencies(&[exact(1, 2)], 2),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn product_bounds_values() {
        assert_eq!(product_bounds(&[(1.0, 1.0), (1.0, 1.0)]).unwrap(), (1.0, 1.0));
        assert_eq!(product_bounds(&[(0.2212, 1.7788), (1.0, 1.0)]).unwrap(), (0.2212, 1.7788));
        let (a, b) = product_bounds(&[(0.2212, 1.7788), (0.2212, 1.7788)]).unwrap();
        assert!((a - 0.04893).abs() < 1e-5 && (b - 3.16413).abs() < 1e-5);
        assert!(product_bounds(&[(0.0, 1.0)]).is_err());
        assert!(product_bounds(&[]).is_err());
    }
}
