//! Result records and their JSON-lines encoding.

use std::collections::BTreeMap;
use std::io::Write;

use roundlab_core::rational::{render, Ratio};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Text form of a number with at most 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{}", sig12(x))
    }
}

/// JSON value of a measured or bound quantity.
pub trait ToValue {
    fn to_value(&self) -> Value;
}

impl ToValue for f64 {
    fn to_value(&self) -> Value {
        match serde_json::Number::from_f64(sig12(*self)) {
            Some(n) => Value::Number(n),
            None => Value::String(fmt_num(*self)),
        }
    }
}

impl ToValue for Ratio {
    fn to_value(&self) -> Value {
        Value::String(render(self))
    }
}

impl ToValue for bool {
    fn to_value(&self) -> Value {
        Value::Bool(*self)
    }
}

impl ToValue for str {
    fn to_value(&self) -> Value {
        Value::String(self.into())
    }
}

impl ToValue for String {
    fn to_value(&self) -> Value {
        Value::String(self.clone())
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl ToValue for $t {
            fn to_value(&self) -> Value {
                Value::from(*self)
            }
        }
    )*};
}
int_value!(u32, u64, usize, i64);

impl<T: ToValue> ToValue for [T] {
    fn to_value(&self) -> Value {
        Value::Array(self.iter().map(ToValue::to_value).collect())
    }
}

impl<T: ToValue> ToValue for Vec<T> {
    fn to_value(&self) -> Value {
        self.as_slice().to_value()
    }
}

/// One checked case.
///
/// Every inequality leaves an entry in `slack` (`rhs − lhs`, after rounding
/// to 12 digits) and every equality its absolute residual in `residual`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub suite: String,
    pub case: u64,
    pub name: String,
    /// SHA-256 of the case inputs, hex.
    pub digest: String,
    pub measured: BTreeMap<String, Value>,
    pub bounds: BTreeMap<String, Value>,
    pub slack: BTreeMap<String, Value>,
    pub residual: BTreeMap<String, Value>,
    pub checks: BTreeMap<String, bool>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "NaN" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

/// Hex SHA-256 of a canonical description of the inputs.
pub fn digest(inputs: &str) -> String {
    Sha256::digest(inputs.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl ResultRecord {
    pub fn new(suite: &str, case: u64, name: impl Into<String>, inputs: &str) -> Self {
        Self {
            suite: suite.into(),
            case,
            name: name.into(),
            digest: digest(inputs),
            measured: BTreeMap::new(),
            bounds: BTreeMap::new(),
            slack: BTreeMap::new(),
            residual: BTreeMap::new(),
            checks: BTreeMap::new(),
            pass: true,
            wall_ms: None,
        }
    }

    pub fn measure<T: ToValue + ?Sized>(&mut self, key: &str, v: &T) -> &mut Self {
        self.measured.insert(key.into(), v.to_value());
        self
    }

    pub fn bound<T: ToValue + ?Sized>(&mut self, key: &str, v: &T) -> &mut Self {
        self.bounds.insert(key.into(), v.to_value());
        self
    }

    /// `lhs ≤ rhs + tol`.
    pub fn at_most(&mut self, key: &str, lhs: f64, rhs: f64, tol: f64) -> &mut Self {
        let s = rhs - lhs;
        self.measured.insert(key.into(), lhs.to_value());
        self.bounds.insert(key.into(), rhs.to_value());
        self.slack.insert(key.into(), s.to_value());
        // written so that NaN fails
        if !(s >= -tol) {
            self.fail(key);
        }
        self
    }

    /// `|a − b| ≤ tol`.
    pub fn close(&mut self, key: &str, a: f64, b: f64, tol: f64) -> &mut Self {
        let r = (a - b).abs();
        self.measured.insert(key.into(), a.to_value());
        self.bounds.insert(key.into(), b.to_value());
        self.residual.insert(key.into(), r.to_value());
        if !(r <= tol) {
            self.fail(key);
        }
        self
    }

    /// An exact or structural check.
    pub fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.checks.insert(key.into(), ok);
        if !ok {
            self.pass = false;
        }
        self
    }

    /// Marks a failure that has no value to compare, such as an error.
    pub fn error(&mut self, key: &str, msg: impl std::fmt::Display) -> &mut Self {
        self.measured.insert(format!("{key}_error"), Value::String(msg.to_string()));
        self.check(key, false)
    }

    fn fail(&mut self, key: &str) {
        self.checks.insert(key.into(), false);
        self.pass = false;
    }

    /// Smallest slack, if any inequality was checked.
    pub fn min_slack(&self) -> Option<f64> {
        self.slack.values().filter_map(as_f64).reduce(f64::min)
    }

    pub fn max_residual(&self) -> Option<f64> {
        self.residual.values().filter_map(as_f64).reduce(f64::max)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

/// Writes records, one per line.
pub fn write_records<W: Write>(mut w: W, records: &[ResultRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_line())?;
    }
    w.flush()
}
