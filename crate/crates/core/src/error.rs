// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigError;
use crate::corpus::CorpusError;
use crate::export::{ExportError, SchemaError};
use crate::frontend::FrontendError;
use crate::graph::GraphError;
use crate::metrics::MetricsError;

/// Any failure surfaced by the pipeline, grouped for exit-code mapping.
#[derive(Debug, Error)]
pub enum SentinelError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("{path}: {source}")]
    Schema { path: PathBuf, source: SchemaError },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

impl SentinelError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| SentinelError::Io { path, source }
    }

    /// 3 for constructs outside the supported subset, 2 for single-class
    /// label sets, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            SentinelError::Frontend(FrontendError::Unsupported { .. })
            | SentinelError::Graph(GraphError::UnsupportedNode { .. }) => 3,
            SentinelError::Metrics(MetricsError::DegenerateLabels) => 2,
            _ => 1,
        }
    }
}
