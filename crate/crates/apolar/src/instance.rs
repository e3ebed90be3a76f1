//! Instance files: a versioned envelope around one payload, stamped with the digest of the
//! payload's canonical serialization.

use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::format::FormatError;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Code,
    CodePair,
    PointSet,
    Polynomial,
    Certificate,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Code => "code",
            Kind::CodePair => "code_pair",
            Kind::PointSet => "pointset",
            Kind::Polynomial => "polynomial",
            Kind::Certificate => "certificate",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        [Kind::Code, Kind::CodePair, Kind::PointSet, Kind::Polynomial, Kind::Certificate].into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub kind: Kind,
    pub payload: Value,
    pub seed: Option<u64>,
    pub params: Value,
}

/// Compact serialization with sorted keys.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical(v).as_bytes()))
}

impl InstanceFile {
    pub fn new(kind: Kind, payload: Value) -> InstanceFile {
        InstanceFile { kind, payload, seed: None, params: Value::Null }
    }

    pub fn with_meta(mut self, seed: Option<u64>, params: Value) -> InstanceFile {
        self.seed = seed;
        self.params = params;
        self
    }

    pub fn digest(&self) -> String {
        digest(&self.payload)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind.name(),
            "payload": self.payload,
            "meta": { "seed": self.seed, "params": self.params, "digest": self.digest() },
        })
    }

    /// Pretty JSON with a trailing newline; byte-identical for equal contents.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values always serialize");
        s.push('\n');
        s
    }

    /// Parses an envelope and checks its version and digest.
    pub fn parse(text: &str) -> Result<InstanceFile, FormatError> {
        let (file, intact) = InstanceFile::parse_envelope(text)?;
        if !intact {
            return Err(FormatError("digest does not match the payload".into()));
        }
        Ok(file)
    }

    /// Parses an envelope; the flag tells whether a stored digest matches the payload.
    pub fn parse_envelope(text: &str) -> Result<(InstanceFile, bool), FormatError> {
        let v: Value = serde_json::from_str(text).map_err(|e| FormatError(format!("invalid JSON: {e}")))?;
        let version = v.get("schema_version").and_then(Value::as_u64);
        if version != Some(SCHEMA_VERSION) {
            return Err(FormatError(format!("unsupported schema_version {version:?}")));
        }
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .and_then(Kind::parse)
            .ok_or_else(|| FormatError("unknown kind".into()))?;
        let payload = v.get("payload").cloned().ok_or_else(|| FormatError("missing payload".into()))?;
        let meta = v.get("meta").cloned().unwrap_or(Value::Null);
        let file = InstanceFile {
            kind,
            payload,
            seed: meta.get("seed").and_then(Value::as_u64),
            params: meta.get("params").cloned().unwrap_or(Value::Null),
        };
        let intact = meta.get("digest").and_then(Value::as_str).map_or(true, |d| d == file.digest());
        Ok((file, intact))
    }

    pub fn read(path: &Path) -> Result<InstanceFile, FormatError> {
        InstanceFile::parse(&read_text(path)?)
    }

    pub fn expect(self, kind: Kind) -> Result<InstanceFile, FormatError> {
        if self.kind != kind {
            return Err(FormatError(format!("expected a {kind} file, found {}", self.kind)));
        }
        Ok(self)
    }
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError(format!("{}: {e}", path.display())))
}
