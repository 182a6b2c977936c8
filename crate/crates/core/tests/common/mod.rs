//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the closed forms under test: integrals come from
//! adaptive Simpson quadrature, eigenvalues from the characteristic
//! polynomial, star deviations from a direct search over integers.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// `∫_a^b f` by adaptive Simpson with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, fa: Complex64, b: f64, fb: Complex64) -> (f64, Complex64, Complex64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (fa + fm * 4.0 + fb) * ((b - a) / 6.0))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        fa: Complex64,
        b: f64,
        fb: Complex64,
        m: f64,
        fm: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// `∫_s^t e^{2πiθx} dx` by quadrature, pre-split so no panel holds more
/// than a quarter oscillation.
pub fn quad_exponential(theta: f64, s: f64, t: f64, tol: f64) -> Complex64 {
    let f = |x: f64| Complex64::from_polar(1.0, 2.0 * PI * theta * x);
    let panels = ((t - s) * theta.abs() * 4.0).ceil().max(1.0) as usize;
    let h = (t - s) / panels as f64;
    (0..panels)
        .map(|k| {
            let a = s + k as f64 * h;
            let b = if k + 1 == panels { t } else { a + h };
            adaptive_simpson(&f, a, b, tol / panels as f64)
        })
        .sum()
}

/// Coefficients `c₀..c_n` (ascending) of `det(λI − A)` by Faddeev–LeVerrier.
pub fn characteristic_polynomial(n: usize, a: &[Complex64]) -> Vec<f64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut c = vec![zero; n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m = vec![zero; n * n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = vec![zero; n * n];
        for i in 0..n {
            for j in 0..n {
                next[i * n + j] = (0..n).map(|l| a[i * n + l] * m[l * n + j]).sum();
            }
            next[i * n + i] += c[n - k + 1];
        }
        m = next;
        let trace: Complex64 = (0..n).map(|i| (0..n).map(|l| a[i * n + l] * m[l * n + i]).sum::<Complex64>()).sum();
        c[n - k] = -trace / k as f64;
    }
    c.iter().map(|z| z.re).collect()
}

fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// All roots of a real polynomial known to have only real roots, ascending.
/// Critical points (roots of the derivative) bracket the roots; each
/// bracket is bisected to the last bit.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let lead = coeffs[deg];
    let bound = 1.0 + coeffs[..deg].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut marks = vec![-bound];
    marks.extend(real_roots(&derivative(coeffs)));
    marks.push(bound);
    let mut roots = Vec::with_capacity(deg);
    for w in marks.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (eval(coeffs, lo), eval(coeffs, hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            // tangency: a multiple root sits at the nearer critical point
            if fhi.abs() < 1e-9 * (1.0 + lead.abs()) {
                roots.push(hi);
            }
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval(coeffs, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.truncate(deg);
    roots
}

/// δ*ₙ for `β = p/q` by scanning integers: the nearest `k` to `βn`, ties
/// upward, then `k/β − n`.
pub fn brute_delta_star(n: i64, p: i64, q: i64) -> f64 {
    let target = (p * n) as f64 / q as f64;
    let mut best = i64::MIN;
    let mut best_dist = f64::INFINITY;
    let centre = target.round() as i64;
    for k in centre - 2..=centre + 2 {
        // compare |k − pn/q| as |kq − pn| / q in integers
        let d = ((k * q - p * n).abs()) as f64;
        if d < best_dist || (d == best_dist && k > best) {
            best_dist = d;
            best = k;
        }
    }
    best as f64 * q as f64 / p as f64 - n as f64
}
