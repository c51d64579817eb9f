// SPDX-License-Identifier: Apache-2.0

//! Statement-level semantic graph with typed edges and execution contexts.

mod builder;
mod context;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::{AstNode, FunctionKind, SourceSpan, Visibility};
use crate::taint::{SinkLabel, SourceLabel};

pub use builder::build_semantic_graph;
pub use context::extract_contexts;

/// Node categories. The order is frozen: exported one-hot vectors use it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphNodeKind {
    VarDecl,
    Assign,
    Require,
    If,
    Loop,
    Return,
    Transfer,
    Emit,
    Call,
    Placeholder,
    Expr,
}

impl GraphNodeKind {
    pub const ALL: [GraphNodeKind; 11] = [
        GraphNodeKind::VarDecl,
        GraphNodeKind::Assign,
        GraphNodeKind::Require,
        GraphNodeKind::If,
        GraphNodeKind::Loop,
        GraphNodeKind::Return,
        GraphNodeKind::Transfer,
        GraphNodeKind::Emit,
        GraphNodeKind::Call,
        GraphNodeKind::Placeholder,
        GraphNodeKind::Expr,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Nodes whose expression is a branch or loop predicate.
    pub fn is_predicate(self) -> bool {
        matches!(
            self,
            GraphNodeKind::If | GraphNodeKind::Loop | GraphNodeKind::Require
        )
    }
}

/// Edge categories.
///
/// `Control` is control dependence (a predicate or `require` governing the
/// statements it guards). `Flow` is plain execution order and never carries
/// taint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Control,
    Data,
    State,
    Flow,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 4] = [EdgeKind::Control, EdgeKind::Data, EdgeKind::State, EdgeKind::Flow];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphEdge {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
}

/// Ordered from weakest to strongest protection.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub enum AccessGuard {
    #[default]
    None,
    RoleGuarded,
    OwnerOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContextKind {
    Function(FunctionKind),
    Modifier,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionContext {
    pub id: usize,
    pub name: String,
    pub kind: ContextKind,
    pub visibility: Visibility,
    pub payable: bool,
    pub modifiers: Vec<String>,
    pub params: Vec<String>,
    pub access_guard: AccessGuard,
    /// First statement node, if the body is non-empty.
    pub entry: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateVar {
    pub name: String,
    pub type_name: String,
    pub constant: bool,
}

/// Name-level def/use summary of a single node.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeFacts {
    pub local_defs: BTreeSet<String>,
    pub local_uses: BTreeSet<String>,
    pub state_reads: BTreeSet<String>,
    pub state_writes: BTreeSet<String>,
    /// Internal functions invoked by name.
    pub calls: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub kind: GraphNodeKind,
    pub span: SourceSpan,
    pub context_id: usize,
    pub snippet: String,
    /// Expressions evaluated by this node: the whole statement for simple
    /// statements, only the predicate for `if` and loop headers.
    #[serde(skip)]
    pub exprs: Vec<AstNode>,
    #[serde(skip)]
    pub facts: NodeFacts,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sources: Vec<SourceLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sink: Option<SinkLabel>,
    #[serde(default)]
    pub taint: f64,
}

impl GraphNode {
    pub fn is_source(&self) -> bool {
        !self.sources.is_empty()
    }

    pub fn is_sink(&self) -> bool {
        self.sink.is_some()
    }

    /// Pre-order walk over every expression evaluated by the node.
    pub fn walk_exprs<'a>(&'a self, f: &mut impl FnMut(&'a AstNode)) {
        for e in &self.exprs {
            e.walk(f);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticGraph {
    pub contract_name: String,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub contexts: Vec<ExecutionContext>,
    pub state_vars: Vec<StateVar>,
}

impl SemanticGraph {
    pub fn context_of(&self, node: usize) -> &ExecutionContext {
        &self.contexts[self.nodes[node].context_id]
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    /// Outgoing adjacency lists, each sorted by (dst, kind).
    pub fn successors(&self) -> Vec<Vec<(usize, EdgeKind)>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            out[e.src].push((e.dst, e.kind));
        }
        for list in &mut out {
            list.sort_unstable();
        }
        out
    }

    pub fn is_state_var(&self, name: &str) -> bool {
        self.state_vars.iter().any(|v| v.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{span}: `{kind}` cannot appear in statement position")]
    UnsupportedNode { kind: String, span: SourceSpan },
    #[error("expected a contract node, found `{0}`")]
    NotAContract(String),
}

#[cfg(test)]
mod tests;
