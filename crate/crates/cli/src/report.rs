use serde_json::{Map, Value};

pub const SENTINEL: &str = "---JSON---";

/// Text lines followed by a sentinel and a canonical JSON object.
#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
    json: Map<String, Value>,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.json.insert(key.to_string(), v.into());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(SENTINEL);
        out.push('\n');
        out.push_str(&symcone::document::to_canonical_json(&Value::Object(self.json.clone())));
        out
    }
}
