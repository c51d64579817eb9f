// SPDX-License-Identifier: Apache-2.0

use crate::config::TaintConfig;
use crate::graph::{EdgeKind, GraphEdge, SemanticGraph};

/// Taint carried across one edge. Results at or below the threshold are not
/// clamped here; callers decide whether the value survives.
pub fn graduated_propagate(incoming: f64, kind: EdgeKind, config: &TaintConfig) -> f64 {
    (incoming * config.factor(kind)).clamp(0.0, 1.0)
}

/// Max-product fixpoint over a plain edge list.
///
/// Sources start at 1.0. A node takes the best level offered by any
/// predecessor, provided it exceeds the threshold; improvements are
/// re-propagated until nothing changes.
pub fn propagate_levels(
    n: usize,
    edges: &[GraphEdge],
    sources: &[usize],
    config: &TaintConfig,
) -> Vec<f64> {
    propagate_levels_by(n, edges, sources, config, |_| 0)
}

/// Same as [`propagate_levels`], with `pick(len)` choosing which worklist
/// entry to process next.
pub fn propagate_levels_by(
    n: usize,
    edges: &[GraphEdge],
    sources: &[usize],
    config: &TaintConfig,
    mut pick: impl FnMut(usize) -> usize,
) -> Vec<f64> {
    let mut succ: Vec<Vec<(usize, EdgeKind)>> = vec![Vec::new(); n];
    for e in edges {
        succ[e.src].push((e.dst, e.kind));
    }
    let mut taint = vec![0.0f64; n];
    let mut queued = vec![false; n];
    let mut worklist = Vec::new();
    for &s in sources {
        taint[s] = 1.0;
        if !queued[s] {
            queued[s] = true;
            worklist.push(s);
        }
    }
    while !worklist.is_empty() {
        let v = worklist.remove(pick(worklist.len()) % worklist.len());
        queued[v] = false;
        for &(dst, kind) in &succ[v] {
            let t = graduated_propagate(taint[v], kind, config);
            if t > config.threshold && t > taint[dst] {
                taint[dst] = t;
                if !queued[dst] {
                    queued[dst] = true;
                    worklist.push(dst);
                }
            }
        }
    }
    taint
}

/// Writes fixpoint taint levels into the graph nodes.
pub fn propagate_taint(graph: &mut SemanticGraph, config: &TaintConfig) {
    let sources: Vec<usize> = graph
        .nodes
        .iter()
        .filter(|n| n.is_source())
        .map(|n| n.id)
        .collect();
    let levels = propagate_levels(graph.nodes.len(), &graph.edges, &sources, config);
    for (node, t) in graph.nodes.iter_mut().zip(levels) {
        node.taint = t;
    }
}
