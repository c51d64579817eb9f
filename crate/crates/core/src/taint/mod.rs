// SPDX-License-Identifier: Apache-2.0

//! Source/sink labelling and graduated taint propagation.

mod labels;
mod propagate;

pub use labels::{
    identify_sources_sinks, scan_sources, Sensitivity, SinkCategory, SinkLabel, SinkRisk,
    SourceLabel, SourcePattern,
};
pub(crate) use labels::has_keyword;
#[cfg(test)]
pub(crate) use labels::identifier_words;
pub use propagate::{graduated_propagate, propagate_levels, propagate_levels_by, propagate_taint};
