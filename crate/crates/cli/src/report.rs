//! Deterministic report assembly.
//!
//! Key order is insertion order, floats are rounded to 15 significant
//! digits, and the config hash is SHA-256 over the compact JSON of the
//! command, inputs and tolerances.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "splice";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x` rounded to 15 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() });
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    serde_json::Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}

/// CSV rendering of a float at 15 significant digits.
pub fn csv_num(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

/// Ordered object builder.
#[derive(Debug, Default, Clone)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Obj(Map::new())
    }

    pub fn put(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn float(self, key: &str, x: f64) -> Self {
        self.put(key, num(x))
    }

    pub fn build(self) -> Value {
        Value::Object(self.0)
    }

    pub fn entries(&self) -> &Map<String, Value> {
        &self.0
    }
}

impl From<Obj> for Value {
    fn from(o: Obj) -> Value {
        o.build()
    }
}

pub fn config_hash(command: &str, inputs: &Value, tolerances: &Value) -> String {
    let canonical = Obj::new()
        .put("command", command)
        .put("inputs", inputs.clone())
        .put("tolerances", tolerances.clone())
        .build();
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

/// The full report envelope.
pub fn envelope(command: &str, inputs: Value, tolerances: Value, result: Value) -> Value {
    let hash = config_hash(command, &inputs, &tolerances);
    Obj::new()
        .put("tool", TOOL)
        .put("version", VERSION)
        .put("command", command)
        .put("config_hash", hash)
        .put("tolerances", tolerances)
        .put("inputs", inputs)
        .put("result", result)
        .build()
}

/// `field,value` rows for the scalar members of a result object.
pub fn scalar_csv(result: &Value) -> String {
    let mut out = String::from("field,value\n");
    if let Value::Object(m) = result {
        for (k, v) in m {
            let cell = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => match n.as_f64() {
                    Some(f) if !n.is_i64() && !n.is_u64() => csv_num(f),
                    _ => n.to_string(),
                },
                Value::Bool(b) => b.to_string(),
                Value::Null => String::new(),
                _ => continue,
            };
            out.push_str(&format!("{k},{cell}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_fifteen_digits() {
        assert_eq!(num(0.1 + 0.2).to_string(), "0.3");
        assert_eq!(num(1.0 / 3.0).to_string(), "0.333333333333333");
        assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(csv_num(0.5), "5.00000000000000e-1");
    }

    #[test]
    fn hash_depends_on_inputs_only() {
        let a = envelope("weyl", Obj::new().put("beta", "3/2").build(), Obj::new().build(), Value::Null);
        let b = envelope("weyl", Obj::new().put("beta", "3/2").build(), Obj::new().build(), Value::Bool(true));
        let c = envelope("weyl", Obj::new().put("beta", "5/2").build(), Obj::new().build(), Value::Null);
        assert_eq!(a["config_hash"], b["config_hash"]);
        assert_ne!(a["config_hash"], c["config_hash"]);
        assert_eq!(a["config_hash"].as_str().unwrap().len(), 64);
        let keys: Vec<&String> = a.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["tool", "version", "command", "config_hash", "tolerances", "inputs", "result"]);
    }

    #[test]
    fn scalar_rows() {
        let r = Obj::new().put("count", 3).float("value", 0.25).put("ok", true).put("list", vec![1]).build();
        assert_eq!(scalar_csv(&r), "field,value\ncount,3\nvalue,2.50000000000000e-1\nok,true\n");
    }
}
