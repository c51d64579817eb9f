// SPDX-License-Identifier: Apache-2.0

//! Source-to-sink path enumeration and per-path feature vectors.

use serde::{Deserialize, Serialize};

use crate::config::{PathConfig, TaintConfig};
use crate::frontend::AstKind;
use crate::graph::{AccessGuard, EdgeKind, GraphEdge, GraphNode, SemanticGraph};
use crate::risk::RiskLevel;

pub const FEATURE_COUNT: usize = 10;

/// Column names of [`VulnPath::features`], in order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "length",
    "sink_taint",
    "source_sensitivity",
    "sink_risk",
    "has_modulo",
    "has_keccak",
    "crosses_state_edge",
    "in_payable_context",
    "access_guard",
    "distinct_sources",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VulnPath {
    pub id: usize,
    pub node_seq: Vec<usize>,
    pub source: usize,
    pub sink: usize,
    /// Fixpoint taint of the sink node.
    pub sink_taint: f64,
    /// Product of the best edge factors along this particular path.
    pub path_taint: f64,
    pub features: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk: Option<RiskLevel>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PathSet {
    pub paths: Vec<VulnPath>,
    /// Set when a cap stopped enumeration early.
    pub truncated: bool,
}

/// Highest-factor edge kind per ordered node pair, ties going to the lower kind.
fn best_links(n: usize, edges: &[GraphEdge], config: &TaintConfig) -> Vec<Vec<(usize, EdgeKind)>> {
    let mut out: Vec<Vec<(usize, EdgeKind)>> = vec![Vec::new(); n];
    for e in edges {
        if config.factor(e.kind) <= 0.0 {
            continue;
        }
        let list = &mut out[e.src];
        match list.iter_mut().find(|(d, _)| *d == e.dst) {
            Some((_, k)) => {
                let (fa, fb) = (config.factor(e.kind), config.factor(*k));
                if fa > fb || (fa == fb && e.kind < *k) {
                    *k = e.kind;
                }
            }
            None => list.push((e.dst, e.kind)),
        }
    }
    for list in &mut out {
        list.sort_unstable();
    }
    out
}

/// Kind of the best edge from `a` to `b`, if any carries taint.
pub fn link_kind(graph: &SemanticGraph, a: usize, b: usize, config: &TaintConfig) -> Option<EdgeKind> {
    graph
        .edges
        .iter()
        .filter(|e| e.src == a && e.dst == b && config.factor(e.kind) > 0.0)
        .map(|e| e.kind)
        .min_by(|x, y| {
            config
                .factor(*y)
                .total_cmp(&config.factor(*x))
                .then(x.cmp(y))
        })
}

/// Enumerates simple source-to-sink paths over taint-carrying edges whose
/// own factor product stays above the threshold.
///
/// Output is in lexicographic order of node sequences. Returns the paths and
/// whether a cap cut the search short.
pub fn enumerate_paths(
    n: usize,
    edges: &[GraphEdge],
    is_source: &[bool],
    is_sink: &[bool],
    config: &TaintConfig,
    caps: &PathConfig,
) -> (Vec<(Vec<usize>, f64)>, bool) {
    struct Search<'a> {
        links: Vec<Vec<(usize, EdgeKind)>>,
        is_sink: &'a [bool],
        config: &'a TaintConfig,
        caps: &'a PathConfig,
        on_path: Vec<bool>,
        stack: Vec<usize>,
        out: Vec<(Vec<usize>, f64)>,
        truncated: bool,
    }

    impl Search<'_> {
        /// Returns false once the path budget is exhausted.
        fn visit(&mut self, v: usize, level: f64) -> bool {
            if self.is_sink[v] {
                if self.out.len() == self.caps.max_paths {
                    self.truncated = true;
                    return false;
                }
                self.out.push((self.stack.clone(), level));
            }
            for i in 0..self.links[v].len() {
                let (next, kind) = self.links[v][i];
                if self.on_path[next] {
                    continue;
                }
                let carried = level * self.config.factor(kind);
                if carried <= self.config.threshold {
                    continue;
                }
                if self.stack.len() == self.caps.max_len {
                    self.truncated = true;
                    continue;
                }
                self.on_path[next] = true;
                self.stack.push(next);
                let go_on = self.visit(next, carried);
                self.stack.pop();
                self.on_path[next] = false;
                if !go_on {
                    return false;
                }
            }
            true
        }
    }

    let mut search = Search {
        links: best_links(n, edges, config),
        is_sink,
        config,
        caps,
        on_path: vec![false; n],
        stack: Vec::new(),
        out: Vec::new(),
        truncated: false,
    };
    for s in (0..n).filter(|&s| is_source[s]) {
        search.on_path[s] = true;
        search.stack.push(s);
        let go_on = search.visit(s, 1.0);
        search.stack.pop();
        search.on_path[s] = false;
        if !go_on {
            break;
        }
    }
    (search.out, search.truncated)
}

/// Extracts and featurizes the tainted paths of an annotated graph.
pub fn extract_paths(graph: &SemanticGraph, config: &TaintConfig, caps: &PathConfig) -> PathSet {
    let is_source: Vec<bool> = graph.nodes.iter().map(GraphNode::is_source).collect();
    let is_sink: Vec<bool> = graph.nodes.iter().map(GraphNode::is_sink).collect();
    let (found, truncated) = enumerate_paths(
        graph.nodes.len(),
        &graph.edges,
        &is_source,
        &is_sink,
        config,
        caps,
    );
    let paths = found
        .into_iter()
        .enumerate()
        .map(|(id, (node_seq, path_taint))| {
            let source = node_seq[0];
            let sink = *node_seq.last().expect("non-empty path");
            let mut path = VulnPath {
                id,
                node_seq,
                source,
                sink,
                sink_taint: graph.nodes[sink].taint,
                path_taint,
                features: Vec::new(),
                risk: None,
            };
            path.features = compute_path_features(&path, graph, config, caps).to_vec();
            path
        })
        .collect();
    PathSet { paths, truncated }
}

pub(crate) fn path_has(graph: &SemanticGraph, path: &VulnPath, pred: impl Fn(&AstKind) -> bool) -> bool {
    path.node_seq.iter().any(|&id| {
        let mut hit = false;
        graph.nodes[id].walk_exprs(&mut |e| hit |= pred(&e.kind));
        hit
    })
}

pub(crate) fn is_modulo(kind: &AstKind) -> bool {
    matches!(kind, AstKind::BinaryOp { op } | AstKind::Assign { op } if op == "%" || op == "%=")
}

pub(crate) fn is_hash_call(kind: &AstKind) -> bool {
    matches!(kind, AstKind::Call { callee } if matches!(callee.as_str(), "keccak256" | "sha256" | "sha3"))
}

pub(crate) fn guard_score(guard: AccessGuard) -> f64 {
    match guard {
        AccessGuard::None => 1.0,
        AccessGuard::RoleGuarded => 0.5,
        AccessGuard::OwnerOnly => 0.0,
    }
}

/// The ten-entry feature vector described by [`FEATURE_NAMES`].
pub fn compute_path_features(
    path: &VulnPath,
    graph: &SemanticGraph,
    config: &TaintConfig,
    caps: &PathConfig,
) -> [f64; FEATURE_COUNT] {
    let nodes = &path.node_seq;
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let source_sensitivity = graph.nodes[path.source]
        .sources
        .iter()
        .map(|l| l.sensitivity.score())
        .fold(0.0, f64::max);
    let sink_risk = graph.nodes[path.sink]
        .sink
        .as_ref()
        .map_or(0.0, |s| s.risk.score());
    let crosses_state = nodes
        .windows(2)
        .any(|w| link_kind(graph, w[0], w[1], config) == Some(EdgeKind::State));
    let payable = nodes.iter().any(|&id| graph.context_of(id).payable);
    let weakest = nodes
        .iter()
        .map(|&id| graph.context_of(id).access_guard)
        .min()
        .unwrap_or_default();
    let mut patterns: Vec<_> = nodes
        .iter()
        .flat_map(|&id| graph.nodes[id].sources.iter().map(|l| l.pattern))
        .collect();
    patterns.sort_unstable();
    patterns.dedup();

    [
        nodes.len() as f64 / caps.max_len as f64,
        path.sink_taint,
        source_sensitivity,
        sink_risk,
        flag(path_has(graph, path, is_modulo)),
        flag(path_has(graph, path, is_hash_call)),
        flag(crosses_state),
        flag(payable),
        guard_score(weakest),
        (patterns.len() as f64 / 4.0).min(1.0),
    ]
}
