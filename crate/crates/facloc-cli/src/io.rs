//! The instance file format:
//!
//! ```json
//! {"agents":[{"x":0.0,"y":1.0,"w":4.0}],"prediction":{"x":0.0,"y":1.0},"confidence":0.7}
//! ```
//!
//! `prediction` and `confidence` may be `null`. Emitted files also carry a
//! `manifest` object, which readers ignore.

use std::fs;
use std::path::Path;

use facloc::{Agent, Instance, Point};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::manifest::RunManifest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentRecord {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub agents: Vec<AgentRecord>,
    pub prediction: Option<PointRecord>,
    pub confidence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance, manifest: Option<RunManifest>) -> Self {
        InstanceFile {
            agents: instance
                .agents()
                .iter()
                .map(|a| AgentRecord {
                    x: a.location().x,
                    y: a.location().y,
                    w: a.weight(),
                })
                .collect(),
            prediction: instance.prediction().map(|p| PointRecord { x: p.x, y: p.y }),
            confidence: instance.confidence(),
            manifest,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, CliError> {
        let agents = self
            .agents
            .iter()
            .map(|a| Agent::new(Point::new(a.x, a.y), a.w))
            .collect::<facloc::Result<Vec<_>>>()?;
        let mut instance = Instance::new(agents)?;
        if let Some(p) = &self.prediction {
            instance = instance.with_prediction(Point::new(p.x, p.y))?;
        }
        if let Some(c) = self.confidence {
            instance = instance.with_confidence(c)?;
        }
        Ok(instance)
    }
}

pub fn read_instance(path: &Path) -> Result<(Instance, InstanceFile), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed instance file {}: {e}", path.display())))?;
    Ok((file.to_instance()?, file))
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}
