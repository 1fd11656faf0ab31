use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Detail {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub inputs_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    pub counts: BTreeMap<String, usize>,
}

/// Machine-readable outcome of a check; `pass` holds iff `details` is empty.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub check: String,
    pub pass: bool,
    pub details: Vec<Detail>,
    pub meta: Meta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
}

impl Report {
    pub fn new(check: &str, details: Vec<Detail>, meta: Meta) -> Self {
        Report {
            check: check.to_string(),
            pass: details.is_empty(),
            details,
            meta,
            result: None,
        }
    }

    pub fn with_result(mut self, result: serde_json::Value) -> Self {
        self.result = Some(result);
        self
    }
}

/// Accumulates input file contents and parameters into a SHA-256 digest.
#[derive(Default)]
pub struct InputsHash {
    hasher: Sha256,
}

impl InputsHash {
    pub fn file(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        let s = format!("{key}={}", value.to_string());
        self.file(s.as_bytes());
    }

    pub fn finish(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}
