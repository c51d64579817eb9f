// SPDX-License-Identifier: Apache-2.0

use crate::config::Config;
use crate::frontend::parse_source;
use crate::graph::{build_semantic_graph, EdgeKind, SemanticGraph};
use crate::taint::{identify_sources_sinks, propagate_taint};

pub const LOTTERY: &str = include_str!("../tests/fixtures/lottery.sol");

/// Graph of the first contract in `src`, labelled and taint-annotated with defaults.
pub fn graph_of(src: &str) -> SemanticGraph {
    let root = parse_source(src, "t.sol").expect("fixture parses");
    let mut g = build_semantic_graph(&root.children[0]).expect("fixture builds");
    let config = Config::default();
    identify_sources_sinks(&mut g, &config.rules);
    propagate_taint(&mut g, &config.taint);
    g
}

pub fn edges(g: &SemanticGraph, kind: EdgeKind) -> Vec<(usize, usize)> {
    g.edges_of_kind(kind).map(|e| (e.src, e.dst)).collect()
}

/// Id of the first node whose snippet starts with `prefix`.
pub fn node(g: &SemanticGraph, prefix: &str) -> usize {
    g.nodes
        .iter()
        .position(|n| n.snippet.starts_with(prefix))
        .unwrap_or_else(|| panic!("no node starting with {prefix:?}"))
}
