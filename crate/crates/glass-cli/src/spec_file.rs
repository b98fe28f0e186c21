//! Network spec files.
//!
//! A network is described by a JSON document:
//!
//! ```json
//! {
//!   "variables": [
//!     {"name": "x1", "thresholds": [0.0]},
//!     {"name": "x2", "thresholds": [0.0]}
//!   ],
//!   "focal_points": {
//!     "0,0": [1.0, -2.0],
//!     "1,0": [2.0, 1.0]
//!   }
//! }
//! ```
//!
//! Focal point keys are region labels: comma-separated 0-based band levels,
//! one per variable. Parsing is strict (unknown fields are rejected); the
//! canonical serialization is deterministic, so parse -> serialize -> parse
//! is the identity on networks.

use std::collections::BTreeMap;

use glass_core::{GlassNetwork, RegionIndex, ThresholdLadder};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::Json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableSpec {
    pub name: String,
    pub thresholds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpecFile {
    pub variables: Vec<VariableSpec>,
    pub focal_points: BTreeMap<String, Vec<f64>>,
}

pub fn parse(text: &str) -> Result<NetworkSpecFile, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn parse_region_key(key: &str) -> Result<RegionIndex, String> {
    let levels: Result<Vec<usize>, _> = key.split(',').map(|p| p.trim().parse::<usize>()).collect();
    match levels {
        Ok(levels) if !levels.is_empty() => Ok(RegionIndex::new(levels)),
        _ => Err(format!("region key {key:?} is not a comma-separated list of band levels")),
    }
}

impl NetworkSpecFile {
    pub fn to_network(&self) -> Result<GlassNetwork, String> {
        let ladders: Vec<ThresholdLadder> =
            self.variables.iter().map(|v| ThresholdLadder::new(v.thresholds.clone())).collect();
        let mut focal = BTreeMap::new();
        for (key, f) in &self.focal_points {
            focal.insert(parse_region_key(key)?, f.clone());
        }
        GlassNetwork::new(ladders, focal).map_err(|e| e.to_string())
    }

    pub fn from_network(net: &GlassNetwork, names: &[String]) -> NetworkSpecFile {
        let variables = net
            .ladders()
            .iter()
            .zip(names)
            .map(|(l, name)| VariableSpec { name: name.clone(), thresholds: l.values().to_vec() })
            .collect();
        let focal_points = net
            .focal_entries()
            .map(|(r, f)| (r.to_string(), f.to_vec()))
            .collect();
        NetworkSpecFile { variables, focal_points }
    }

    /// Deterministic serialization: sorted keys, 17-significant-digit floats.
    pub fn canonical_json(&self) -> String {
        let variables = Json::Arr(
            self.variables
                .iter()
                .map(|v| {
                    Json::Obj(vec![
                        ("name".into(), Json::str(&v.name)),
                        ("thresholds".into(), Json::numbers(&v.thresholds)),
                    ])
                })
                .collect(),
        );
        let focal_points = Json::Obj(
            self.focal_points
                .iter()
                .map(|(k, f)| (k.clone(), Json::numbers(f)))
                .collect(),
        );
        Json::Obj(vec![
            ("variables".into(), variables),
            ("focal_points".into(), focal_points),
        ])
        .render()
    }

    /// SHA-256 of the canonical serialization; identifies the network
    /// independent of formatting in the source file.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical_json().as_bytes());
        format!("sha256:{:x}", h.finalize())
    }
}
