// SPDX-License-Identifier: Apache-2.0

//! End-to-end analysis of one source file.

use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::SentinelError;
use crate::export::{
    export_contract, ContractRecord, GraphDocument, PathRiskPrediction, PredictionRecord,
    SCHEMA_VERSION,
};
use crate::frontend::parse_source;
use crate::graph::{build_semantic_graph, SemanticGraph};
use crate::metrics::DEFAULT_THRESHOLD;
use crate::paths::extract_paths;
use crate::risk::{assess_path_risks, PathAssessment, RiskLevel};
use crate::taint::{identify_sources_sinks, propagate_taint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Vulnerable,
    Suspicious,
    Safe,
}

pub fn verdict_of(assessments: &[PathAssessment]) -> Verdict {
    if assessments.iter().any(|a| a.risk == RiskLevel::High) {
        Verdict::Vulnerable
    } else if assessments.iter().any(|a| a.risk == RiskLevel::Medium) {
        Verdict::Suspicious
    } else {
        Verdict::Safe
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub contract_id: String,
    pub contract_name: String,
    pub file: String,
    pub verdict: Verdict,
    pub assessments: Vec<PathAssessment>,
    pub timing_ms: f64,
    /// Set when a path cap stopped enumeration early.
    pub truncated: bool,
    pub node_count: usize,
    pub edge_count: usize,
}

#[derive(Debug, Clone)]
pub struct ContractAnalysis {
    pub report: AnalysisReport,
    pub graph: SemanticGraph,
}

impl ContractAnalysis {
    pub fn record(&self, label: Option<bool>) -> Result<ContractRecord, SentinelError> {
        Ok(export_contract(
            &self.report.contract_id,
            &self.graph,
            &self.report.assessments,
            label,
        )?)
    }

    pub fn graph_document(&self) -> GraphDocument {
        GraphDocument::new(
            &self.report.contract_id,
            &self.graph,
            &self.report.assessments,
            self.report.truncated,
        )
    }

    /// Prediction made by the rules alone: score 1 for Vulnerable, else 0.
    pub fn rule_prediction(&self) -> PredictionRecord {
        let score = if self.report.verdict == Verdict::Vulnerable { 1.0 } else { 0.0 };
        let mut path_risks: Vec<PathRiskPrediction> = self
            .report
            .assessments
            .iter()
            .filter(|a| a.risk != RiskLevel::Safe)
            .map(|a| PathRiskPrediction {
                path_id: a.path.id,
                predicted: a.risk,
            })
            .collect();
        path_risks.sort_by_key(|p| p.path_id);
        PredictionRecord::new(&self.report.contract_id, score, DEFAULT_THRESHOLD, path_risks)
    }
}

/// Runs every stage on each contract declared in `source`.
///
/// Contract ids are `stem` for a single-contract file and `stem:Name`
/// otherwise.
pub fn analyze_source(
    source: &str,
    file: &str,
    stem: &str,
    config: &Config,
) -> Result<Vec<ContractAnalysis>, SentinelError> {
    let start = Instant::now();
    let root = parse_source(source, file)?;
    let parse_ms = start.elapsed().as_secs_f64() * 1e3;
    let contracts: Vec<_> = root.contracts().collect();
    let single = contracts.len() == 1;
    let mut out = Vec::with_capacity(contracts.len());
    for contract in contracts {
        let start = Instant::now();
        let name = contract.name().unwrap_or_default().to_string();
        let mut graph = build_semantic_graph(contract)?;
        identify_sources_sinks(&mut graph, &config.rules);
        propagate_taint(&mut graph, &config.taint);
        let set = extract_paths(&graph, &config.taint, &config.paths);
        let assessments = assess_path_risks(&set.paths, &graph, config);
        let timing_ms = parse_ms + start.elapsed().as_secs_f64() * 1e3;
        out.push(ContractAnalysis {
            report: AnalysisReport {
                schema_version: SCHEMA_VERSION.to_string(),
                contract_id: if single {
                    stem.to_string()
                } else {
                    format!("{stem}:{name}")
                },
                contract_name: name,
                file: file.to_string(),
                verdict: verdict_of(&assessments),
                assessments,
                timing_ms,
                truncated: set.truncated,
                node_count: graph.nodes.len(),
                edge_count: graph.edges.len(),
            },
            graph,
        });
    }
    Ok(out)
}

pub fn analyze_file(path: &Path, config: &Config) -> Result<Vec<ContractAnalysis>, SentinelError> {
    let source = fs::read_to_string(path).map_err(SentinelError::io(path))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    analyze_source(&source, &path.to_string_lossy(), &stem, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::LOTTERY;

    fn analyze(src: &str) -> Vec<ContractAnalysis> {
        analyze_source(src, "t.sol", "t", &Config::default()).unwrap()
    }

    #[test]
    fn lottery_is_vulnerable() {
        let out = analyze(LOTTERY);
        assert_eq!(out.len(), 1);
        let r = &out[0].report;
        assert_eq!(r.contract_id, "t");
        assert_eq!(r.contract_name, "VulnerableLottery");
        assert_eq!(r.verdict, Verdict::Vulnerable);
        assert_eq!(r.assessments.len(), 1);
        assert!(!r.truncated);
        let p = out[0].rule_prediction();
        assert_eq!(p.score, 1.0);
        assert!(p.predicted_label);
        assert_eq!(p.path_risks.len(), 1);
        p.validate().unwrap();
    }

    #[test]
    fn empty_contract_is_safe() {
        let out = analyze("contract A {}");
        assert_eq!(out[0].report.verdict, Verdict::Safe);
        assert!(out[0].report.assessments.is_empty());
        assert!(analyze("").is_empty());
    }

    #[test]
    fn suspicious_on_medium_only() {
        let out = analyze(
            "contract K { uint s; function f() public { s = uint(blockhash(block.number - 1)); } }",
        );
        assert_eq!(out[0].report.verdict, Verdict::Suspicious);
        assert_eq!(out[0].rule_prediction().score, 0.0);
    }

    #[test]
    fn multiple_contracts_get_qualified_ids() {
        let out = analyze("contract A {} contract B {}");
        let ids: Vec<_> = out.iter().map(|a| a.report.contract_id.as_str()).collect();
        assert_eq!(ids, ["t:A", "t:B"]);
    }

    #[test]
    fn errors_propagate() {
        let err = analyze_source("contract A { assembly {} }", "t.sol", "t", &Config::default())
            .unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = analyze_file(Path::new("/nonexistent/x.sol"), &Config::default()).unwrap_err();
        assert!(matches!(err, SentinelError::Io { .. }));
    }
}
