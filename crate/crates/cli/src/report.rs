use std::fmt;

use flowknot::diagram::CROSSING_CONVENTION;
use flowknot::template::ORDER_CONVENTION;
use flowknot::Error;
use serde_json::{json, Map, Value};

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files; exit code 2.
    Input(String),
    /// Inputs that contradict each other or a failed self-check; exit code 3.
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Inconsistent(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::RankMismatch(_) => CliError::Inconsistent(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// A command's output: a JSON object and the same facts as text lines.
pub struct Report {
    fields: Map<String, Value>,
    lines: Vec<String>,
    inconsistent: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        fields.insert(
            "conventions".into(),
            json!({ "crossing": CROSSING_CONVENTION, "templateOrder": ORDER_CONVENTION }),
        );
        Report { fields, lines: Vec::new(), inconsistent: false }
    }

    pub fn field(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.insert(key.into(), value);
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    /// Marks a failed self-check; the report is still printed.
    pub fn flag_inconsistent(&mut self, why: &str) {
        self.inconsistent = true;
        self.lines.push(format!("INCONSISTENT: {why}"));
        self.fields.insert("inconsistent".into(), json!(why));
    }

    pub fn exit_code(&self) -> u8 {
        if self.inconsistent {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone())).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}
