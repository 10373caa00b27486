//! Machine-readable reports. Keys serialize in sorted order, so a report
//! depends only on its contents.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::document::Kind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    Pass,
    Witness,
    Found,
    NotFound,
    NotApplicable,
    Exhausted,
    SyntaxError,
    ValidationError,
    Violation,
    KindMismatch,
    UsageError,
    IoError,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Valid | Verdict::Pass | Verdict::Witness | Verdict::Found => 0,
            Verdict::NotFound | Verdict::NotApplicable | Verdict::Exhausted => 2,
            Verdict::SyntaxError | Verdict::ValidationError => 3,
            Verdict::Violation => 4,
            Verdict::KindMismatch | Verdict::UsageError | Verdict::IoError => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputInfo {
    pub kind: Option<Kind>,
    /// SHA-256 of the input bytes, hex encoded.
    pub digest: String,
}

impl InputInfo {
    pub fn new(kind: Option<Kind>, bytes: &[u8]) -> Self {
        InputInfo { kind, digest: hex::encode(Sha256::digest(bytes)) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input: InputInfo,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub trace: Vec<Value>,
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: &str, input: InputInfo, verdict: Verdict) -> Self {
        Report {
            command: command.to_string(),
            input,
            verdict,
            witnesses: Vec::new(),
            trace: Vec::new(),
            elapsed_ms: None,
            error: None,
        }
    }

    pub fn failed(command: &str, input: InputInfo, verdict: Verdict, error: impl ToString) -> Self {
        Report { error: Some(error.to_string()), ..Report::new(command, input, verdict) }
    }

    pub fn exit_code(&self) -> u8 {
        self.verdict.exit_code()
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
        text.push('\n');
        text
    }
}

/// Fields holding block indices; the CLI numbers blocks from 1.
const BLOCK_FIELDS: [&str; 6] = ["block", "blocks", "k_map", "row", "support", "target"];

/// Shifts every block index in a serialized trace step or violation to
/// 1-based numbering.
pub fn one_based(mut value: Value) -> Value {
    fn bump(v: &mut Value) {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_u64() {
                    *v = Value::from(i + 1);
                }
            }
            Value::Array(items) => items.iter_mut().for_each(bump),
            _ => {}
        }
    }
    if let Value::Object(map) = &mut value {
        for (key, v) in map.iter_mut() {
            if BLOCK_FIELDS.contains(&key.as_str()) {
                bump(v);
            }
        }
    }
    value
}
