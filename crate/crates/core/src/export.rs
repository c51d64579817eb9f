// SPDX-License-Identifier: Apache-2.0

//! Versioned JSON records exchanged with the learning component.
//!
//! Node feature layout, per row of [`ContractRecord::nodes`]:
//!
//! | columns | meaning |
//! |---|---|
//! | `0..11` | one-hot node kind, in [`GraphNodeKind::ALL`] order |
//! | `11` | fixpoint taint level |
//! | `12` | strongest source sensitivity (0, 0.5 or 1) |
//! | `13` | sink risk (0, 0.33, 0.66 or 1) |
//!
//! Edge kind indices follow [`EdgeKind::ALL`]: Control 0, Data 1, State 2,
//! Flow 3. Path risk indices are HIGH 0, MEDIUM 1, LOW 2; SAFE paths are not
//! exported.

use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeKind, GraphNodeKind, SemanticGraph};
use crate::paths::FEATURE_COUNT;
use crate::risk::{PathAssessment, RiskLevel};

pub const SCHEMA_VERSION: &str = "1";
pub const NODE_KIND_COUNT: usize = GraphNodeKind::ALL.len();
pub const NODE_FEATURE_DIM: usize = NODE_KIND_COUNT + 3;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("non-finite value in {field}")]
    NonFinite { field: String },
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SchemaError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRow {
    pub id: usize,
    pub kind: usize,
    pub one_hot: Vec<u8>,
    pub taint: f64,
    pub source_sensitivity: f64,
    pub sink_risk: f64,
}

impl NodeRow {
    pub fn feature_vector(&self) -> Vec<f64> {
        let mut x: Vec<f64> = self.one_hot.iter().map(|&b| f64::from(b)).collect();
        x.extend([self.taint, self.source_sensitivity, self.sink_risk]);
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub src: usize,
    pub dst: usize,
    pub kind: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub id: usize,
    pub node_seq: Vec<usize>,
    pub features: Vec<f64>,
    pub risk: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub vulnerable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractRecord {
    pub schema_version: String,
    pub contract_id: String,
    pub nodes: Vec<NodeRow>,
    pub edges: Vec<EdgeRow>,
    pub paths: Vec<PathRow>,
    #[serde(default)]
    pub label: Option<GroundTruth>,
}

fn finite(value: f64, field: impl FnOnce() -> String) -> Result<f64, ExportError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ExportError::NonFinite { field: field() })
    }
}

/// Builds the model-facing record of one analysed contract.
pub fn export_contract(
    contract_id: &str,
    graph: &SemanticGraph,
    assessments: &[PathAssessment],
    label: Option<bool>,
) -> Result<ContractRecord, ExportError> {
    let mut nodes = Vec::with_capacity(graph.nodes.len());
    for n in &graph.nodes {
        let kind = n.kind.index();
        let mut one_hot = vec![0u8; NODE_KIND_COUNT];
        one_hot[kind] = 1;
        let source_sensitivity = n
            .sources
            .iter()
            .map(|l| l.sensitivity.score())
            .fold(0.0, f64::max);
        nodes.push(NodeRow {
            id: n.id,
            kind,
            one_hot,
            taint: finite(n.taint, || format!("nodes[{}].taint", n.id))?,
            source_sensitivity,
            sink_risk: n.sink.as_ref().map_or(0.0, |s| s.risk.score()),
        });
    }
    let edges = graph
        .edges
        .iter()
        .map(|e| EdgeRow {
            src: e.src,
            dst: e.dst,
            kind: e.kind.index(),
        })
        .collect();

    let mut kept: Vec<&PathAssessment> = assessments
        .iter()
        .filter(|a| a.risk != RiskLevel::Safe)
        .collect();
    kept.sort_by_key(|a| a.path.id);
    let mut paths = Vec::with_capacity(kept.len());
    for a in kept {
        for (i, &f) in a.path.features.iter().enumerate() {
            finite(f, || format!("paths[{}].features[{i}]", a.path.id))?;
        }
        paths.push(PathRow {
            id: a.path.id,
            node_seq: a.path.node_seq.clone(),
            features: a.path.features.clone(),
            risk: a.risk.class_index().expect("SAFE paths filtered"),
        });
    }

    Ok(ContractRecord {
        schema_version: SCHEMA_VERSION.to_string(),
        contract_id: contract_id.to_string(),
        nodes,
        edges,
        paths,
        label: label.map(|vulnerable| GroundTruth { vulnerable }),
    })
}

impl ContractRecord {
    /// Checks the structural invariants a reader relies on.
    pub fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {:?}", self.schema_version));
        }
        let n = self.nodes.len();
        for (i, row) in self.nodes.iter().enumerate() {
            if row.id != i {
                return Err(format!("node row {i} has id {}", row.id));
            }
            if row.kind >= NODE_KIND_COUNT || row.one_hot.len() != NODE_KIND_COUNT {
                return Err(format!("node {i}: bad kind encoding"));
            }
            let ones = row.one_hot.iter().filter(|&&b| b == 1).count();
            let zeros = row.one_hot.iter().filter(|&&b| b == 0).count();
            if ones != 1 || zeros != NODE_KIND_COUNT - 1 || row.one_hot[row.kind] != 1 {
                return Err(format!("node {i}: one-hot does not match kind {}", row.kind));
            }
            for v in [row.taint, row.source_sensitivity, row.sink_risk] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(format!("node {i}: scalar {v} outside [0, 1]"));
                }
            }
        }
        for e in &self.edges {
            if e.src >= n || e.dst >= n || e.kind >= EdgeKind::ALL.len() {
                return Err(format!("edge {}->{} out of range", e.src, e.dst));
            }
        }
        for p in &self.paths {
            if p.node_seq.is_empty() || p.node_seq.iter().any(|&v| v >= n) {
                return Err(format!("path {}: bad node sequence", p.id));
            }
            if p.features.len() != FEATURE_COUNT || p.features.iter().any(|f| !f.is_finite()) {
                return Err(format!("path {}: bad feature vector", p.id));
            }
            if RiskLevel::from_class_index(p.risk).is_none() {
                return Err(format!("path {}: risk index {} out of range", p.id, p.risk));
            }
        }
        Ok(())
    }
}

/// Reads JSON-Lines contract records, skipping blank lines.
pub fn read_contract_records(reader: impl BufRead) -> Result<Vec<ContractRecord>, SchemaError> {
    read_lines(reader, |rec: &ContractRecord| rec.validate())
}

/// Full graph dump written next to the analysis report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema_version: String,
    pub contract_id: String,
    pub graph: SemanticGraph,
    pub assessments: Vec<PathAssessment>,
    pub truncated: bool,
}

impl GraphDocument {
    pub fn new(contract_id: &str, graph: &SemanticGraph, assessments: &[PathAssessment], truncated: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            contract_id: contract_id.to_string(),
            graph: graph.clone(),
            assessments: assessments.to_vec(),
            truncated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRiskPrediction {
    pub path_id: usize,
    pub predicted: RiskLevel,
}

fn schema_v1() -> String {
    SCHEMA_VERSION.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    #[serde(default = "schema_v1")]
    pub schema_version: String,
    pub contract_id: String,
    pub score: f64,
    pub predicted_label: bool,
    pub threshold_used: f64,
    #[serde(default)]
    pub path_risks: Vec<PathRiskPrediction>,
}

impl PredictionRecord {
    pub fn new(contract_id: &str, score: f64, threshold: f64, path_risks: Vec<PathRiskPrediction>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            contract_id: contract_id.to_string(),
            score,
            predicted_label: score >= threshold,
            threshold_used: threshold,
            path_risks,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {:?}", self.schema_version));
        }
        if !(0.0..=1.0).contains(&self.score) {
            return Err(format!("score {} outside [0, 1]", self.score));
        }
        if !self.threshold_used.is_finite() {
            return Err("threshold_used is not finite".into());
        }
        if self.predicted_label != (self.score >= self.threshold_used) {
            return Err(format!(
                "predicted_label {} disagrees with score {} at threshold {}",
                self.predicted_label, self.score, self.threshold_used
            ));
        }
        if let Some(p) = self.path_risks.iter().find(|p| p.predicted == RiskLevel::Safe) {
            return Err(format!("path {} predicted SAFE", p.path_id));
        }
        Ok(())
    }

    /// Checks that every predicted path exists in the exported record.
    pub fn check_paths(&self, record: &ContractRecord) -> Result<(), String> {
        match self
            .path_risks
            .iter()
            .find(|p| !record.paths.iter().any(|r| r.id == p.path_id))
        {
            Some(p) => Err(format!("{}: unknown path id {}", self.contract_id, p.path_id)),
            None => Ok(()),
        }
    }
}

/// Reads and validates a JSON-Lines prediction file.
pub fn import_predictions(reader: impl BufRead) -> Result<Vec<PredictionRecord>, SchemaError> {
    read_lines(reader, PredictionRecord::validate)
}

fn read_lines<T: for<'de> Deserialize<'de>>(
    reader: impl BufRead,
    check: impl Fn(&T) -> Result<(), String>,
) -> Result<Vec<T>, SchemaError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let fail = |message: String| SchemaError {
            line: line_no,
            message,
        };
        let line = line.map_err(|e| fail(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: T = serde_json::from_str(&line).map_err(|e| fail(e.to_string()))?;
        check(&rec).map_err(fail)?;
        out.push(rec);
    }
    Ok(out)
}
