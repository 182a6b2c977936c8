//! Exact rational scalars and their textual form.
//!
//! Domain data (cuts, gaps, exact scale parameters) is held as
//! `Ratio<i64>` so that hypothesis checks such as "gap / β is an integer"
//! are decided without rounding. Text accepts `p/q`, integers and plain
//! decimal literals (`2.5`, `-0.125`), all converted exactly.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Parse `p/q`, an integer, or a finite decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::InvalidParameter("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad numerator in {s:?}")))?;
        let q: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad denominator in {s:?}")))?;
        if q == 0 {
            return Err(Error::InvalidParameter(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("not a rational or decimal literal: {s:?}"));
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let significant = digits.trim_start_matches('0');
    let numer: i64 = if significant.is_empty() {
        0
    } else {
        significant.parse().map_err(|_| bad())?
    };
    let denom = 10i64
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(bad)?;
    let r = Rational::new(numer, denom);
    Ok(if negative { -r } else { r })
}

/// Exact rational closest to the decimal rendering of `x` (shortest round-trip form).
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite value {x}")));
    }
    let text = format!("{x}");
    if text.contains('e') || text.contains('E') {
        return Err(Error::InvalidParameter(format!(
            "{x} needs exponent notation; give it as p/q instead"
        )));
    }
    parse_decimal(&text)
}

pub fn to_f64(r: &Rational) -> f64 {
    // Ratio::to_f64 is correctly rounded for i64 parts.
    r.to_f64().unwrap_or(f64::NAN)
}

/// Render as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractional part `x - floor(x)` in `[0, 1)`, exact.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Distance from `r` to the nearest integer, exact.
pub fn dist_to_integer(r: &Rational) -> Rational {
    let f = frac(r);
    let g = Rational::from_integer(1) - f;
    if f < g {
        f
    } else {
        g
    }
}

/// `a / b` when it is an integer.
pub fn integer_quotient(a: &Rational, b: &Rational) -> Option<i64> {
    if b.is_zero() {
        return None;
    }
    let q = a / b;
    q.is_integer().then(|| q.to_integer())
}

pub(crate) fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}
