// SPDX-License-Identifier: Apache-2.0

//! Graduated taint analysis for weak-randomness bugs in Solidity.
//!
//! [`analyze_source`] runs the whole chain: parse, build the semantic graph,
//! label sources and sinks, propagate taint, extract source-to-sink paths and
//! classify each path's risk.

pub mod config;
pub mod corpus;
pub mod error;
pub mod export;
pub mod frontend;
pub mod graph;
pub mod metrics;
pub mod paths;
pub mod pipeline;
pub mod risk;
pub mod taint;

#[cfg(test)]
pub(crate) mod testutil;

pub use config::Config;
pub use error::SentinelError;
pub use export::{ContractRecord, GraphDocument, PredictionRecord, SCHEMA_VERSION};
pub use frontend::{AstNode, SourceSpan};
pub use graph::SemanticGraph;
pub use metrics::{ConfusionMatrix, MetricsReport, Objective};
pub use paths::{PathSet, VulnPath};
pub use pipeline::{analyze_file, analyze_source, AnalysisReport, ContractAnalysis, Verdict};
pub use risk::{PathAssessment, RiskLevel};
