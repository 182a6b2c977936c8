//! Eigenvalues of dense Hermitian matrices.
//!
//! Householder reflections reduce the matrix to Hermitian tridiagonal form;
//! the off-diagonal entries are then replaced by their moduli (a diagonal
//! unitary similarity), and the resulting real symmetric tridiagonal matrix
//! is diagonalized with the implicitly shifted QL iteration.

use num_complex::Complex64;
use rayon::prelude::*;

use super::gram::GramMatrix;
use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Below this order the reduction runs on one thread.
const PARALLEL_THRESHOLD: usize = 96;

/// Full spectrum of a Gram matrix, ascending.
pub fn hermitian_eigenvalues(g: &GramMatrix) -> Result<Vec<f64>> {
    hermitian_eigenvalues_dense(g.order(), g.entries())
}

/// Full spectrum of a row-major `order × order` Hermitian matrix, ascending.
///
/// The input is symmetrized as `(A + A*)/2` first, so slightly
/// non-Hermitian rounding noise is tolerated.
pub fn hermitian_eigenvalues_dense(order: usize, entries: &[Complex64]) -> Result<Vec<f64>> {
    if entries.len() != order * order {
        return Err(Error::InvalidMatrix(format!(
            "expected {} entries, got {}",
            order * order,
            entries.len()
        )));
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    if order == 0 {
        return Ok(Vec::new());
    }
    let n = order;
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (entries[i * n + j] + entries[j * n + i].conj()) * 0.5;
        }
    }
    let (mut diag, mut off) = tridiagonalize(n, &mut a);
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(diag)
}

/// Reduce in place; returns the real diagonal and the moduli of the
/// off-diagonal (`off[i]` couples `i` and `i+1`, `off[n-1] = 0`).
fn tridiagonalize(n: usize, a: &mut [Complex64]) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        diag[k] = a[k * n + k].re;
        let base = k + 1;
        let m = n - base;
        let x0 = a[base * n + k];
        let norm = (0..m).map(|i| a[(base + i) * n + k].norm_sqr()).sum::<f64>().sqrt();
        off[k] = norm;
        if norm == 0.0 {
            continue;
        }
        let x0_abs = x0.norm();
        let phase = if x0_abs == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0_abs };
        let alpha = -phase * norm;
        for i in 0..m {
            v[i] = a[(base + i) * n + k];
        }
        v[0] -= alpha;
        // ‖v‖² = 2‖x‖(‖x‖ + |x₀|)
        let tau = 1.0 / (norm * (norm + x0_abs));
        let vv = &v[..m];

        // p = τ A v over the trailing block
        let compute_row = |i: usize| -> Complex64 {
            let row = &a[(base + i) * n + base..(base + i) * n + n];
            row.iter().zip(vv).map(|(aij, vj)| aij * vj).sum::<Complex64>() * tau
        };
        if m >= PARALLEL_THRESHOLD {
            p[..m].par_iter_mut().enumerate().for_each(|(i, pi)| *pi = compute_row(i));
        } else {
            for (i, pi) in p[..m].iter_mut().enumerate() {
                *pi = compute_row(i);
            }
        }
        let c: f64 = vv.iter().zip(&p[..m]).map(|(vi, pi)| (vi.conj() * pi).re).sum();
        let kk = 0.5 * tau * c;
        for i in 0..m {
            p[i] -= v[i] * kk;
        }
        let q = &p[..m];

        // A ← A − v q* − q v*
        let update = |i: usize, row: &mut [Complex64]| {
            let (vi, qi) = (vv[i], q[i]);
            for j in 0..m {
                row[j] -= vi * q[j].conj() + qi * vv[j].conj();
            }
        };
        let block = &mut a[base * n..];
        if m >= PARALLEL_THRESHOLD {
            block.par_chunks_mut(n).enumerate().for_each(|(i, row)| update(i, &mut row[base..]));
        } else {
            for (i, row) in block.chunks_mut(n).enumerate() {
                update(i, &mut row[base..]);
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2].re;
        off[n - 2] = a[(n - 1) * n + n - 2].norm();
    }
    diag[n - 1] = a[(n - 1) * n + n - 1].re;
    off[n - 1] = 0.0;
    (diag, off)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
/// Eigenvalues overwrite `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::InvalidMatrix("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(rng.gen_range(-2.0..2.0), 0.0);
            for j in i + 1..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                a[i * n + j] = z;
                a[j * n + i] = z.conj();
            }
        }
        a
    }

    #[test]
    fn identity_spectrum() {
        let n = 9;
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(1.0, 0.0);
        }
        assert_eq!(hermitian_eigenvalues_dense(n, &a).unwrap(), vec![1.0; 9]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let z = c(0.3, -0.4);
        let ev = hermitian_eigenvalues_dense(2, &[c(1.0, 0.0), z, z.conj(), c(1.0, 0.0)]).unwrap();
        assert!((ev[0] - 0.5).abs() < 1e-15 && (ev[1] - 1.5).abs() < 1e-15, "{ev:?}");
    }

    #[test]
    fn rejects_non_finite_and_bad_shape() {
        assert!(hermitian_eigenvalues_dense(1, &[c(f64::NAN, 0.0)]).is_err());
        assert!(hermitian_eigenvalues_dense(2, &[c(1.0, 0.0)]).is_err());
        assert!(hermitian_eigenvalues_dense(0, &[]).unwrap().is_empty());
    }

    #[test]
    fn diagonal_with_phases() {
        // Unitary diagonal similarity of a real tridiagonal: spectrum unchanged.
        let n = 5;
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(2.0, 0.0);
            if i + 1 < n {
                let z = Complex64::from_polar(-1.0, 0.7 * i as f64);
                a[i * n + i + 1] = z;
                a[(i + 1) * n + i] = z.conj();
            }
        }
        let ev = hermitian_eigenvalues_dense(n, &a).unwrap();
        // 2 − 2cos(kπ/(n+1))
        let mut want: Vec<f64> = (1..=n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        want.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (g, w) in ev.iter().zip(&want) {
            assert!((g - w).abs() < 1e-13, "{ev:?} vs {want:?}");
        }
    }

    #[test]
    fn trace_and_frobenius_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3, 17, 64, 130] {
            let a = random_hermitian(&mut rng, n);
            let ev = hermitian_eigenvalues_dense(n, &a).unwrap();
            let trace: f64 = (0..n).map(|i| a[i * n + i].re).sum();
            let fro2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            let scale = fro2.sqrt();
            assert!((ev.iter().sum::<f64>() - trace).abs() < 1e-11 * scale * n as f64);
            assert!((ev.iter().map(|x| x * x).sum::<f64>() - fro2).abs() < 1e-10 * fro2);
            // Gershgorin enclosure
            let radius = (0..n)
                .map(|i| a[i * n + i].re + (0..n).filter(|&j| j != i).map(|j| a[i * n + j].norm()).sum::<f64>())
                .fold(f64::MIN, f64::max);
            let low = (0..n)
                .map(|i| a[i * n + i].re - (0..n).filter(|&j| j != i).map(|j| a[i * n + j].norm()).sum::<f64>())
                .fold(f64::MAX, f64::min);
            assert!(ev[0] >= low - 1e-12 && *ev.last().unwrap() <= radius + 1e-12);
        }
    }

    #[test]
    fn eigenvalues_shift_with_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 40;
        let a = random_hermitian(&mut rng, n);
        let mut b = a.clone();
        for i in 0..n {
            b[i * n + i] += c(3.0, 0.0);
        }
        let ea = hermitian_eigenvalues_dense(n, &a).unwrap();
        let eb = hermitian_eigenvalues_dense(n, &b).unwrap();
        for (x, y) in ea.iter().zip(&eb) {
            assert!((x + 3.0 - y).abs() < 1e-12);
        }
    }
}
