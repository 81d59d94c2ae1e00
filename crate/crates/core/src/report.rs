//! JSON reports shared by the command-line tool and the examples.

use std::io::Write;
use std::path::Path;

use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::symcore::rational::fmt_rational;
use crate::symcore::Rational;

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

pub fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rational))
}

pub fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&fmt_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ser_display_seq<T: std::fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// One named invariant check with its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, detail: None }
    }

    pub fn with_detail(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: Some(detail.into()) }
    }
}

/// Result of one command run.
///
/// `outputs` and `inputs` are free-form JSON; object keys serialize in sorted
/// order so identical runs produce identical bytes apart from `wall_time_ms`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            inputs: Value::Object(Map::new()),
            outputs: Value::Object(Map::new()),
            checks: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        insert(&mut self.inputs, key, v);
        self
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        insert(&mut self.outputs, key, v);
        self
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Pretty JSON with every object's keys in sorted order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    /// JSON without the wall-time field, for determinism comparisons.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("wall_time_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

fn insert(target: &mut Value, key: &str, v: impl Serialize) {
    let v = serde_json::to_value(v).unwrap_or_else(|e| json!({ "serialization_error": e.to_string() }));
    if let Value::Object(m) = target {
        m.insert(key.to_string(), v);
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or_else(|| Path::new("."));
    let file_name = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{file_name}.tmp{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}
