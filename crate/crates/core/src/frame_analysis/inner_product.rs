use num_complex::Complex64;
use std::f64::consts::PI;

use crate::domains::SegmentUnion;

/// Below this `|x|` the sinc factor is summed from its Taylor series.
const SERIES_THRESHOLD: f64 = 1e-2;

/// `sin(x)/x`, with a 6-term series near zero.
fn sinc(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        // 1 - x²/3! + x⁴/5! - x⁶/7! + x⁸/9! - x¹⁰/11!
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..6 {
            let k = k as f64;
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        sum
    } else {
        x.sin() / x
    }
}

/// `∫_s^t e^{2πiθx} dx`.
///
/// Evaluated as `e^{iπθ(s+t)} · (t−s) · sinc(πθ(t−s))`, which equals
/// `(e^{2πiθt} − e^{2πiθs}) / (2πiθ)` without the cancellation that form
/// suffers for small `θ`. At `θ = 0` the result is exactly `t − s`.
pub fn segment_integral(theta: f64, start: f64, end: f64) -> Complex64 {
    let len = end - start;
    if theta == 0.0 {
        return Complex64::new(len, 0.0);
    }
    let magnitude = len * sinc(PI * theta * len);
    let phase = PI * theta * (start + end);
    let (s, c) = phase.sin_cos();
    Complex64::new(magnitude * c, magnitude * s)
}

/// `⟨e_λ, e_μ⟩_{L²(D)} = Σⱼ ∫_{sⱼ}^{tⱼ} e^{2πi(λ−μ)x} dx`.
pub fn pair_inner_product(lambda: f64, mu: f64, domain: &SegmentUnion) -> Complex64 {
    let theta = lambda - mu;
    if theta == 0.0 {
        return Complex64::new(domain.measure(), 0.0);
    }
    domain
        .segments()
        .iter()
        .map(|s| segment_integral(theta, s.start, s.end))
        .sum()
}
