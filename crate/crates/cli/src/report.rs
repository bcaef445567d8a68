//! Deterministic JSON: floats with 17 significant digits, keys sorted.

use serde_json::{Map, Number, Value};

pub const SCHEMA: u64 = 1;

/// `x` as a JSON number with 17 significant digits, or `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    s.parse::<Number>()
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

/// Builder for JSON objects.
#[derive(Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Obj(Map::new())
    }
    pub fn set(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), v.into());
        self
    }
    pub fn float(self, key: &str, x: f64) -> Self {
        self.set(key, num(x))
    }
    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

/// Pretty-printed with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// Rewrites every number in `v` with 17 significant digits.
pub fn normalise(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(_), _, _) | (_, Some(_), _) => Value::Number(n.clone()),
            (_, _, Some(x)) => num(x),
            _ => Value::Null,
        },
        Value::Array(a) => Value::Array(a.iter().map(normalise).collect()),
        Value::Object(m) => {
            Value::Object(m.iter().map(|(k, v)| (k.clone(), normalise(v))).collect())
        }
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(-2.0).to_string(), "-2.0000000000000000e+0");
        assert_eq!(num(f64::NAN), Value::Null);
        let x = 0.1 + 0.2;
        assert_eq!(num(x).as_f64().unwrap(), x);
    }

    #[test]
    fn keys_are_sorted() {
        let v = Obj::new().set("b", 1).set("a", 2).build();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":2,"b":1}"#);
    }

    #[test]
    fn normalise_keeps_integers() {
        let v: Value = serde_json::from_str(r#"{"n": 3, "x": 0.5}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&normalise(&v)).unwrap(),
            r#"{"n":3,"x":5.0000000000000000e-1}"#
        );
    }
}
