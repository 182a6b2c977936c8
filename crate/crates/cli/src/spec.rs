//! Domain spec input: `{"cuts": [...], "gaps": [...], "beta": ...}` or
//! `{"axes": [spec, ...]}`, given inline or as a file path.

use serde_json::{json, Map, Value};

use splice_core::domains::SplitSpec;
use splice_core::rational::{format_rational, parse_rational};
use splice_core::sequences::ScaleParameter;
use splice_core::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub split: SplitSpec,
    pub beta: Option<ScaleParameter>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Split(AxisSpec),
    Axes(Vec<AxisSpec>),
}

impl DomainSpec {
    pub fn axes(&self) -> Vec<&AxisSpec> {
        match self {
            DomainSpec::Split(a) => vec![a],
            DomainSpec::Axes(v) => v.iter().collect(),
        }
    }

    /// The single split, or an error naming the axis count.
    pub fn single(&self) -> Result<&AxisSpec, String> {
        match self {
            DomainSpec::Split(a) => Ok(a),
            DomainSpec::Axes(v) if v.len() == 1 => Ok(&v[0]),
            DomainSpec::Axes(v) => Err(format!("expected a one-dimensional spec, got {} axes", v.len())),
        }
    }

    /// Canonical JSON echo: rationals as strings, fixed key order.
    pub fn to_json(&self) -> Value {
        match self {
            DomainSpec::Split(a) => axis_json(a),
            DomainSpec::Axes(v) => json!({ "axes": v.iter().map(axis_json).collect::<Vec<_>>() }),
        }
    }
}

fn axis_json(a: &AxisSpec) -> Value {
    let mut m = Map::new();
    m.insert("cuts".into(), a.split.cuts().iter().map(|r| Value::String(format_rational(r))).collect());
    m.insert("gaps".into(), a.split.gaps().iter().map(|r| Value::String(format_rational(r))).collect());
    if let Some(b) = &a.beta {
        m.insert("beta".into(), beta_json(b));
    }
    Value::Object(m)
}

pub fn beta_json(b: &ScaleParameter) -> Value {
    match b {
        ScaleParameter::Exact(r) => Value::String(format_rational(r)),
        ScaleParameter::Real(v) => crate::report::num(*v),
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn load_text(arg: &str) -> Result<String, String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read spec {arg}: {e}"))
    }
}

fn rational_value(v: &Value, what: &str, errors: &mut Vec<String>) -> Option<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => {
            errors.push(format!("{what}: expected a rational string or number, got {other}"));
            return None;
        }
    };
    match parse_rational(&text) {
        Ok(r) => Some(r),
        Err(e) => {
            errors.push(format!("{what}: {e}"));
            None
        }
    }
}

fn beta_value(v: &Value, what: &str, errors: &mut Vec<String>) -> Option<ScaleParameter> {
    let parsed = match v {
        Value::String(s) => s.parse::<ScaleParameter>(),
        Value::Number(n) => n.to_string().parse::<ScaleParameter>(),
        other => {
            errors.push(format!("{what}: expected a rational string or number, got {other}"));
            return None;
        }
    };
    parsed.map_err(|e| errors.push(format!("{what}: {e}"))).ok()
}

fn rational_list(obj: &Map<String, Value>, key: &str, prefix: &str, errors: &mut Vec<String>) -> Option<Vec<Rational>> {
    match obj.get(key) {
        None => {
            errors.push(format!("{prefix}missing field \"{key}\""));
            None
        }
        Some(Value::Array(items)) => {
            let before = errors.len();
            let out: Vec<Rational> = items
                .iter()
                .enumerate()
                .filter_map(|(i, v)| rational_value(v, &format!("{prefix}{key}[{i}]"), errors))
                .collect();
            (errors.len() == before).then_some(out)
        }
        Some(_) => {
            errors.push(format!("{prefix}\"{key}\" must be an array"));
            None
        }
    }
}

fn parse_axis(v: &Value, prefix: &str, errors: &mut Vec<String>) -> Option<AxisSpec> {
    let Value::Object(obj) = v else {
        errors.push(format!("{prefix}spec must be a JSON object"));
        return None;
    };
    for key in obj.keys() {
        if !matches!(key.as_str(), "cuts" | "gaps" | "beta") {
            errors.push(format!("{prefix}unknown field \"{key}\""));
        }
    }
    let cuts = rational_list(obj, "cuts", prefix, errors);
    let gaps = rational_list(obj, "gaps", prefix, errors);
    let beta = obj.get("beta").and_then(|b| beta_value(b, &format!("{prefix}beta"), errors));
    let (cuts, gaps) = (cuts?, gaps?);
    let problems = SplitSpec::violations(&cuts, &gaps);
    if !problems.is_empty() {
        errors.extend(problems.into_iter().map(|p| format!("{prefix}{p}")));
        return None;
    }
    SplitSpec::new(cuts, gaps)
        .map(|split| AxisSpec { split, beta })
        .map_err(|e| errors.push(format!("{prefix}{e}")))
        .ok()
}

/// Parse and check a spec. Every violated invariant is reported.
pub fn validate_spec(text: &str) -> Result<DomainSpec, Vec<String>> {
    let value: Value = serde_json::from_str(text).map_err(|e| vec![format!("malformed JSON: {e}")])?;
    let mut errors = Vec::new();
    let parsed = match &value {
        Value::Object(obj) if obj.contains_key("axes") => {
            if obj.len() > 1 {
                errors.push("an axes spec takes no other fields".into());
            }
            match &obj["axes"] {
                Value::Array(items) if !items.is_empty() => {
                    let axes: Vec<Option<AxisSpec>> = items
                        .iter()
                        .enumerate()
                        .map(|(i, v)| parse_axis(v, &format!("axes[{i}]: "), &mut errors))
                        .collect();
                    axes.into_iter().collect::<Option<Vec<_>>>().map(DomainSpec::Axes)
                }
                _ => {
                    errors.push("\"axes\" must be a nonempty array".into());
                    None
                }
            }
        }
        _ => parse_axis(&value, "", &mut errors).map(DomainSpec::Split),
    };
    match parsed {
        Some(spec) if errors.is_empty() => Ok(spec),
        _ => Err(errors),
    }
}
