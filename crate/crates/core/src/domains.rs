//! Unions of half-open segments: the unit interval split into pieces and
//! translated apart, the complement of such a union inside `[0, Δ]`, and
//! Cartesian products of split intervals ("split cubes").

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sequences::ScaleParameter;

/// Tolerance used when hypothesis checks must fall back to floating point.
pub const HYPOTHESIS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// Sorted, pairwise disjoint half-open segments `[start, end)`.
///
/// Exact endpoints are kept alongside the floating-point ones whenever the
/// union was built from rational data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentUnion {
    segments: Vec<Segment>,
    exact: Option<Vec<(Rational, Rational)>>,
    measure: f64,
}

impl SegmentUnion {
    pub fn new(segments: Vec<(f64, f64)>) -> Result<Self> {
        let mut problems = Vec::new();
        for (i, &(s, t)) in segments.iter().enumerate() {
            if !s.is_finite() || !t.is_finite() {
                problems.push(format!("segment {i} has a non-finite endpoint"));
            } else if s >= t {
                problems.push(format!("segment {i} is empty or reversed: [{s}, {t})"));
            }
        }
        for (i, w) in segments.windows(2).enumerate() {
            if w[0].1 > w[1].0 {
                problems.push(format!("segments {i} and {} overlap or are unsorted", i + 1));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidSpec(problems));
        }
        let segments: Vec<Segment> =
            segments.into_iter().map(|(start, end)| Segment { start, end }).collect();
        let measure = segments.iter().map(Segment::length).sum();
        Ok(SegmentUnion { segments, exact: None, measure })
    }

    pub fn from_exact(segments: Vec<(Rational, Rational)>) -> Result<Self> {
        let mut problems = Vec::new();
        for (i, (s, t)) in segments.iter().enumerate() {
            if s >= t {
                problems.push(format!(
                    "segment {i} is empty or reversed: [{}, {})",
                    rational::format_rational(s),
                    rational::format_rational(t)
                ));
            }
        }
        for (i, w) in segments.windows(2).enumerate() {
            if w[0].1 > w[1].0 {
                problems.push(format!("segments {i} and {} overlap or are unsorted", i + 1));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidSpec(problems));
        }
        let measure = segments.iter().fold(Rational::zero(), |acc, (s, t)| acc + (t - s));
        let floats = segments
            .iter()
            .map(|(s, t)| Segment { start: rational::to_f64(s), end: rational::to_f64(t) })
            .collect();
        Ok(SegmentUnion { segments: floats, exact: Some(segments), measure: rational::to_f64(&measure) })
    }

    pub fn empty() -> Self {
        SegmentUnion { segments: Vec::new(), exact: Some(Vec::new()), measure: 0.0 }
    }

    /// `[0, 1)`.
    pub fn unit_interval() -> Self {
        Self::from_exact(vec![(Rational::zero(), Rational::from_integer(1))])
            .expect("unit interval is valid")
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn exact_segments(&self) -> Option<&[(Rational, Rational)]> {
        self.exact.as_deref()
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// Exact measure when endpoints are rational.
    pub fn exact_measure(&self) -> Option<Rational> {
        self.exact
            .as_ref()
            .map(|ex| ex.iter().fold(Rational::zero(), |acc, (s, t)| acc + (t - s)))
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.segments.iter().any(|s| s.start <= x && x < s.end)
    }

    /// `offset + scale · D`.
    pub fn dilate_translate(&self, scale: f64, offset: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) || !offset.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dilation needs a positive finite scale and finite offset, got {scale}, {offset}"
            )));
        }
        Self::new(
            self.segments
                .iter()
                .map(|s| (offset + scale * s.start, offset + scale * s.end))
                .collect(),
        )
    }
}

/// A partition `0 = a₀ < a₁ < … < a_m = 1` together with nondecreasing gaps
/// `0 = b₀ ≤ b₁ ≤ …`; piece `j` is moved to `[aⱼ + bⱼ, aⱼ₊₁ + bⱼ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    cuts: Vec<Rational>,
    gaps: Vec<Rational>,
}

impl SplitSpec {
    pub fn new(cuts: Vec<Rational>, gaps: Vec<Rational>) -> Result<Self> {
        let problems = Self::violations(&cuts, &gaps);
        if problems.is_empty() {
            Ok(SplitSpec { cuts, gaps })
        } else {
            Err(Error::InvalidSpec(problems))
        }
    }

    /// Every invariant the pair `(cuts, gaps)` breaks, as readable messages.
    pub fn violations(cuts: &[Rational], gaps: &[Rational]) -> Vec<String> {
        let mut out = Vec::new();
        if cuts.len() < 2 {
            out.push("cuts must contain at least 0 and 1".to_string());
        } else {
            if !cuts[0].is_zero() {
                out.push("cuts must start at 0".to_string());
            }
            if *cuts.last().unwrap() != Rational::from_integer(1) {
                out.push("cuts must end at 1".to_string());
            }
            if cuts.windows(2).any(|w| w[0] >= w[1]) {
                out.push("cuts must be strictly increasing".to_string());
            }
        }
        let pieces = cuts.len().saturating_sub(1);
        if gaps.len() != pieces {
            out.push(format!("expected {pieces} gaps (one per piece), got {}", gaps.len()));
        }
        if let Some(first) = gaps.first() {
            if !first.is_zero() {
                out.push("gaps must start at 0".to_string());
            }
        }
        if gaps.windows(2).any(|w| w[0] > w[1]) {
            out.push("gaps must be nondecreasing".to_string());
        }
        out
    }

    /// The unit interval with no split.
    pub fn unsplit() -> Self {
        SplitSpec { cuts: vec![Rational::zero(), Rational::from_integer(1)], gaps: vec![Rational::zero()] }
    }

    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    pub fn gaps(&self) -> &[Rational] {
        &self.gaps
    }

    pub fn segment_count(&self) -> usize {
        self.gaps.len()
    }

    pub fn lengths(&self) -> Vec<Rational> {
        self.cuts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// The pieces of `[0, 1)` before translation.
    pub fn source_segments(&self) -> Vec<(Rational, Rational)> {
        self.cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

/// `J = ∪ⱼ [aⱼ + bⱼ, aⱼ₊₁ + bⱼ)`.
pub fn build_split(spec: &SplitSpec) -> Result<SegmentUnion> {
    let pieces = spec
        .cuts
        .windows(2)
        .zip(&spec.gaps)
        .map(|(w, b)| (w[0] + b, w[1] + b))
        .collect();
    SegmentUnion::from_exact(pieces)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterHalfLength {
    pub center: Rational,
    pub half_length: Rational,
}

/// Midpoint / half-length form of each translated piece.
pub fn centers_halflengths(spec: &SplitSpec) -> Vec<CenterHalfLength> {
    let two = Rational::from_integer(2);
    spec.cuts
        .windows(2)
        .zip(&spec.gaps)
        .map(|(w, b)| CenterHalfLength { center: (w[0] + w[1]) / two + b, half_length: (w[1] - w[0]) / two })
        .collect()
}

/// `[0, Δ] \ J` and the length `Δ` of the enclosing interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementDomain {
    pub delta: f64,
    pub delta_exact: Option<Rational>,
    pub domain: SegmentUnion,
}

fn check_gap_multiples(spec: &SplitSpec, beta: &ScaleParameter, tolerance: f64) -> Result<()> {
    for (k, b) in spec.gaps.iter().enumerate().skip(1) {
        let ok = match beta {
            ScaleParameter::Exact(r) => rational::integer_quotient(b, r).is_some(),
            ScaleParameter::Real(v) => {
                let ratio = rational::to_f64(b) / v;
                (ratio - ratio.round()).abs() <= tolerance * ratio.abs().max(1.0)
            }
        };
        if !ok {
            return Err(Error::HypothesisViolation(format!(
                "gap b_{k} = {} is not an integer multiple of beta = {beta}",
                rational::format_rational(b)
            )));
        }
    }
    Ok(())
}

/// Exact `[0, Δ] \ J` for `J` sorted and contained in `[0, Δ]`.
fn subtract_from_interval(total: Rational, j: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    let mut cursor = Rational::zero();
    for (s, t) in j {
        if *s > cursor {
            out.push((cursor, *s));
        }
        if *t > cursor {
            cursor = *t;
        }
    }
    if total > cursor {
        out.push((cursor, total));
    }
    out
}

/// Enclosing length `Δ = ⌈(1 + b_{m−1})/β⌉·β` and the complement of `J` in `[0, Δ]`.
///
/// Requires every gap to be an integer multiple of `β`; otherwise a
/// [`Error::HypothesisViolation`] is returned.
pub fn complement_domain(spec: &SplitSpec, beta: &ScaleParameter) -> Result<ComplementDomain> {
    complement_domain_with_tolerance(spec, beta, HYPOTHESIS_TOLERANCE)
}

/// As [`complement_domain`], with the floating-point tolerance used for real `β`.
pub fn complement_domain_with_tolerance(
    spec: &SplitSpec,
    beta: &ScaleParameter,
    tolerance: f64,
) -> Result<ComplementDomain> {
    if beta.value() <= 0.0 || !beta.value().is_finite() {
        return Err(Error::InvalidParameter("beta must be positive and finite".into()));
    }
    check_gap_multiples(spec, beta, tolerance)?;
    let j = build_split(spec)?;
    let last_gap = *spec.gaps.last().expect("valid spec has gaps");
    let reach = Rational::from_integer(1) + last_gap;
    match beta {
        ScaleParameter::Exact(r) => {
            let delta = (reach / r).ceil() * r;
            let pieces = subtract_from_interval(delta, j.exact_segments().expect("built exactly"));
            Ok(ComplementDomain {
                delta: rational::to_f64(&delta),
                delta_exact: Some(delta),
                domain: SegmentUnion::from_exact(pieces)?,
            })
        }
        ScaleParameter::Real(v) => {
            let ratio = rational::to_f64(&reach) / v;
            let rounded = ratio.round();
            let steps = if (ratio - rounded).abs() <= tolerance * ratio.abs().max(1.0) {
                rounded
            } else {
                ratio.ceil()
            };
            let delta = steps * v;
            let mut pieces = Vec::new();
            let mut cursor = 0.0;
            for s in j.segments() {
                if s.start > cursor {
                    pieces.push((cursor, s.start));
                }
                cursor = cursor.max(s.end);
            }
            if delta > cursor + tolerance {
                pieces.push((cursor, delta));
            }
            Ok(ComplementDomain { delta, delta_exact: None, domain: SegmentUnion::new(pieces)? })
        }
    }
}

/// Cartesian product of per-axis split intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxUnion {
    axes: Vec<SplitSpec>,
    domains: Vec<SegmentUnion>,
}

impl BoxUnion {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[SplitSpec] {
        &self.axes
    }

    pub fn axis_domains(&self) -> &[SegmentUnion] {
        &self.domains
    }

    /// Every box as its list of per-axis segments, first axis varying slowest.
    pub fn boxes(&self) -> Vec<Vec<Segment>> {
        let mut out: Vec<Vec<Segment>> = vec![Vec::new()];
        for dom in &self.domains {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    dom.segments().iter().map(move |s| {
                        let mut b = prefix.clone();
                        b.push(*s);
                        b
                    })
                })
                .collect();
        }
        out
    }

    pub fn volume(&self) -> f64 {
        self.domains.iter().map(SegmentUnion::measure).product()
    }
}

pub fn box_product(axes: &[SplitSpec]) -> Result<BoxUnion> {
    if axes.is_empty() {
        return Err(Error::InvalidParameter("a split cube needs at least one axis".into()));
    }
    let domains = axes.iter().map(build_split).collect::<Result<Vec<_>>>()?;
    Ok(BoxUnion { axes: axes.to_vec(), domains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    fn spec(cuts: &[(i64, i64)], gaps: &[(i64, i64)]) -> SplitSpec {
        SplitSpec::new(
            cuts.iter().map(|&(p, d)| q(p, d)).collect(),
            gaps.iter().map(|&(p, d)| q(p, d)).collect(),
        )
        .unwrap()
    }

    fn worked() -> SplitSpec {
        spec(&[(0, 1), (1, 2), (1, 1)], &[(0, 1), (5, 2)])
    }

    #[test]
    fn build_examples() {
        let j = build_split(&SplitSpec::unsplit()).unwrap();
        assert_eq!(j.exact_segments().unwrap(), &[(q(0, 1), q(1, 1))]);
        assert_eq!(j.measure(), 1.0);

        let j = build_split(&worked()).unwrap();
        assert_eq!(j.exact_segments().unwrap(), &[(q(0, 1), q(1, 2)), (q(3, 1), q(7, 2))]);

        let j = build_split(&spec(&[(0, 1), (1, 2), (1, 1)], &[(0, 1), (1, 1)])).unwrap();
        assert_eq!(j.exact_segments().unwrap(), &[(q(0, 1), q(1, 2)), (q(3, 2), q(2, 1))]);
    }

    #[test]
    fn spec_violations_are_named() {
        let err = SplitSpec::new(vec![q(0, 1), q(1, 2)], vec![q(0, 1)]).unwrap_err();
        assert_eq!(err, Error::InvalidSpec(vec!["cuts must end at 1".into()]));
        let err = SplitSpec::new(vec![q(0, 1), q(1, 3), q(2, 3), q(1, 1)], vec![q(0, 1), q(2, 1), q(1, 1)])
            .unwrap_err();
        assert_eq!(err, Error::InvalidSpec(vec!["gaps must be nondecreasing".into()]));
        let Error::InvalidSpec(list) =
            SplitSpec::new(vec![q(1, 4), q(1, 8)], vec![q(1, 1), q(0, 1)]).unwrap_err()
        else {
            panic!()
        };
        assert!(list.len() >= 4, "{list:?}");
    }

    #[test]
    fn centers_examples() {
        let c = centers_halflengths(&SplitSpec::unsplit());
        assert_eq!(c, vec![CenterHalfLength { center: q(1, 2), half_length: q(1, 2) }]);
        let c = centers_halflengths(&worked());
        assert_eq!(
            c,
            vec![
                CenterHalfLength { center: q(1, 4), half_length: q(1, 4) },
                CenterHalfLength { center: q(13, 4), half_length: q(1, 4) },
            ]
        );
    }

    #[test]
    fn complement_examples() {
        let beta = ScaleParameter::exact(5, 2).unwrap();
        let c = complement_domain(&worked(), &beta).unwrap();
        assert_eq!(c.delta_exact, Some(q(5, 1)));
        assert_eq!(c.domain.exact_segments().unwrap(), &[(q(1, 2), q(3, 1)), (q(7, 2), q(5, 1))]);
        assert_eq!(c.domain.measure(), 4.0);

        let c = complement_domain(&SplitSpec::unsplit(), &ScaleParameter::exact(1, 1).unwrap()).unwrap();
        assert_eq!(c.delta, 1.0);
        assert!(c.domain.is_empty());

        let s = spec(&[(0, 1), (1, 2), (1, 1)], &[(0, 1), (3, 1)]);
        let c = complement_domain(&s, &ScaleParameter::exact(3, 1).unwrap()).unwrap();
        assert_eq!(c.delta_exact, Some(q(6, 1)));
        assert_eq!(c.domain.exact_segments().unwrap(), &[(q(1, 2), q(7, 2)), (q(4, 1), q(6, 1))]);
        assert_eq!(c.domain.exact_measure(), Some(q(5, 1)));
    }

    #[test]
    fn complement_rejects_non_multiple_gap() {
        let s = spec(&[(0, 1), (1, 2), (1, 1)], &[(0, 1), (1, 1)]);
        let err = complement_domain(&s, &ScaleParameter::exact(5, 2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(_)));
        assert!(err.is_hypothesis_violation());
    }

    #[test]
    fn complement_real_beta_matches_exact() {
        let c = complement_domain(&worked(), &ScaleParameter::Real(2.5)).unwrap();
        assert_eq!(c.delta, 5.0);
        assert_eq!(c.domain.len(), 2);
        assert!((c.domain.measure() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn box_examples() {
        assert!(box_product(&[]).is_err());
        let one = box_product(&[worked()]).unwrap();
        assert_eq!(one.axis_domains()[0], build_split(&worked()).unwrap());
        let two = box_product(&[worked(), worked()]).unwrap();
        assert_eq!(two.boxes().len(), 4);
        assert_eq!(two.volume(), 1.0);
        let cube = box_product(&[SplitSpec::unsplit(), SplitSpec::unsplit(), SplitSpec::unsplit()]).unwrap();
        assert_eq!(cube.boxes(), vec![vec![Segment { start: 0.0, end: 1.0 }; 3]]);
    }

    #[test]
    fn segment_union_validation() {
        assert!(SegmentUnion::new(vec![(0.0, 1.0), (0.5, 2.0)]).is_err());
        assert!(SegmentUnion::new(vec![(1.0, 1.0)]).is_err());
        assert!(SegmentUnion::new(vec![(0.0, f64::NAN)]).is_err());
        let d = SegmentUnion::new(vec![(0.0, 0.5), (0.5, 2.0)]).unwrap();
        assert_eq!(d.measure(), 2.0);
        let e = d.dilate_translate(3.0, -1.0).unwrap();
        assert_eq!(e.segments()[1], Segment { start: 0.5, end: 5.0 });
    }

    /// Random valid split: sorted distinct cuts over a common denominator, random integer-ish gaps.
    pub(crate) fn arb_spec() -> impl Strategy<Value = SplitSpec> {
        (2i64..24, proptest::collection::vec(any::<bool>(), 1..23), proptest::collection::vec(0i64..7, 1..24), 1i64..4)
            .prop_map(|(den, picks, steps, gden)| {
                let mut cuts = vec![q(0, 1)];
                for (i, keep) in picks.iter().enumerate() {
                    let k = i as i64 + 1;
                    if *keep && k < den {
                        cuts.push(q(k, den));
                    }
                }
                cuts.push(q(1, 1));
                let mut gaps = vec![q(0, 1)];
                let mut acc = 0;
                for i in 1..cuts.len() - 1 {
                    acc += steps[i % steps.len()];
                    gaps.push(q(acc, gden));
                }
                SplitSpec::new(cuts, gaps).unwrap()
            })
    }

    proptest! {
        #[test]
        fn prop_split_measure_one_and_roundtrip(s in arb_spec()) {
            let j = build_split(&s).unwrap();
            prop_assert_eq!(j.exact_measure(), Some(q(1, 1)));
            prop_assert!((j.measure() - 1.0).abs() < 1e-12);
            let ch = centers_halflengths(&s);
            let total: Rational = ch.iter().fold(q(0, 1), |a, c| a + c.half_length * 2);
            prop_assert_eq!(total, q(1, 1));
            for (c, seg) in ch.iter().zip(j.segments()) {
                prop_assert!((rational::to_f64(&(c.center - c.half_length)) - seg.start).abs() < 1e-12);
                prop_assert!((rational::to_f64(&(c.center + c.half_length)) - seg.end).abs() < 1e-12);
            }
        }

        #[test]
        fn prop_complement_partitions_interval(s in arb_spec(), p in 1i64..5, d in 1i64..4) {
            let beta = q(p, d);
            // scale gaps to multiples of beta
            let gaps: Vec<Rational> = s.gaps().iter().map(|g| (g * 3).floor() * beta).collect();
            let s = SplitSpec::new(s.cuts().to_vec(), gaps).unwrap();
            let c = complement_domain(&s, &ScaleParameter::Exact(beta)).unwrap();
            let j = build_split(&s).unwrap();
            let delta = c.delta_exact.unwrap();
            prop_assert_eq!(c.domain.exact_measure().unwrap() + q(1, 1), delta);
            // disjointness: merge both lists and check sortedness without overlap
            let mut all: Vec<(Rational, Rational)> = j.exact_segments().unwrap().to_vec();
            all.extend_from_slice(c.domain.exact_segments().unwrap());
            all.sort();
            for w in all.windows(2) {
                prop_assert!(w[0].1 <= w[1].0);
            }
            prop_assert_eq!(all.first().unwrap().0, q(0, 1));
            prop_assert_eq!(all.last().unwrap().1, delta);
        }

        #[test]
        fn prop_boxes_disjoint_volume_one(a in arb_spec(), b in arb_spec()) {
            let bu = box_product(&[a, b]).unwrap();
            prop_assert!((bu.volume() - 1.0).abs() < 1e-12);
            let boxes = bu.boxes();
            let vol: f64 = boxes.iter().map(|bx| bx.iter().map(Segment::length).product::<f64>()).sum();
            prop_assert!((vol - 1.0).abs() < 1e-12);
            for (i, x) in boxes.iter().enumerate() {
                for y in &boxes[i + 1..] {
                    let overlap = x.iter().zip(y).all(|(s, t)| s.start < t.end && t.start < s.end);
                    prop_assert!(!overlap);
                }
            }
        }
    }
}
