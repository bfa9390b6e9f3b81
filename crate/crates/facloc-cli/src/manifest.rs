use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Provenance block embedded in every emitted file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    /// `# key: value` header lines for CSV output; the timestamp gets its
    /// own line so determinism checks can drop it.
    pub fn csv_header(&self) -> String {
        let params = serde_json::to_string(&self.parameters).expect("map of JSON values");
        let seed = self.seed.map_or("null".to_string(), |s| s.to_string());
        format!(
            "# command: {}\n# parameters: {}\n# seed: {}\n# tool_version: {}\n# timestamp: {}\n",
            self.command, params, seed, self.tool_version, self.timestamp
        )
    }
}
