// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::{AstKind, AstNode, LoopKind, SourceSpan};

use super::context::extract_contexts;
use super::{
    EdgeKind, ExecutionContext, GraphEdge, GraphError, GraphNode, GraphNodeKind, NodeFacts,
    SemanticGraph, StateVar,
};

/// Builds the semantic graph of one contract node.
pub fn build_semantic_graph(contract: &AstNode) -> Result<SemanticGraph, GraphError> {
    let AstKind::Contract { name } = &contract.kind else {
        return Err(GraphError::NotAContract(contract.kind.label().to_string()));
    };
    let mut contexts = extract_contexts(contract)?;
    let state_vars: Vec<StateVar> = contract
        .children
        .iter()
        .filter_map(|m| match &m.kind {
            AstKind::StateVar {
                name,
                type_name,
                constant,
            } => Some(StateVar {
                name: name.clone(),
                type_name: type_name.clone(),
                constant: *constant,
            }),
            _ => None,
        })
        .collect();
    let functions: BTreeSet<String> = contexts
        .iter()
        .filter(|c| matches!(c.kind, super::ContextKind::Function(_)))
        .map(|c| c.name.clone())
        .collect();

    let mut b = Builder::default();
    let bodies = contract
        .children
        .iter()
        .filter(|m| matches!(m.kind, AstKind::Function { .. } | AstKind::Modifier { .. }));
    for (ctx, body) in contexts.iter_mut().zip(bodies) {
        b.ctx = ctx.id;
        ctx.entry = b.block(&body.children, Vec::new())?.first;
    }

    let Builder {
        mut nodes,
        mut edges,
        ..
    } = b;
    resolve_facts(&mut nodes, &contexts, &state_vars, &functions);
    edges.extend(data_edges(&nodes, &contexts));
    edges.extend(state_edges(&nodes));
    edges.sort_unstable();
    edges.dedup();

    Ok(SemanticGraph {
        contract_name: name.clone(),
        nodes,
        edges,
        contexts,
        state_vars,
    })
}

#[derive(Default)]
struct Builder {
    nodes: Vec<GraphNode>,
    edges: Vec<GraphEdge>,
    ctx: usize,
}

/// Result of lowering a statement list.
struct Lowered {
    /// Nodes from which execution falls through past the list.
    exits: Vec<usize>,
    /// Nodes of the statements directly in the list, nested blocks flattened.
    heads: Vec<usize>,
    /// First node executed.
    first: Option<usize>,
}

/// Result of lowering one statement.
struct LoweredStmt {
    id: usize,
    first: usize,
    exits: Vec<usize>,
}

impl Builder {
    fn push(&mut self, kind: GraphNodeKind, span: SourceSpan, snippet: String, exprs: Vec<AstNode>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(GraphNode {
            id,
            kind,
            span,
            context_id: self.ctx,
            snippet,
            exprs,
            facts: NodeFacts::default(),
            sources: Vec::new(),
            sink: None,
            taint: 0.0,
        });
        id
    }

    fn flow(&mut self, preds: &[usize], dst: usize) {
        for &p in preds {
            self.edges.push(GraphEdge {
                src: p,
                dst,
                kind: EdgeKind::Flow,
            });
        }
    }

    fn control(&mut self, src: usize, dsts: &[usize]) {
        for &d in dsts {
            self.edges.push(GraphEdge {
                src,
                dst: d,
                kind: EdgeKind::Control,
            });
        }
    }

    fn block(&mut self, stmts: &[AstNode], preds: Vec<usize>) -> Result<Lowered, GraphError> {
        let mut exits = preds;
        let mut heads = Vec::new();
        let mut first = None;
        for s in stmts {
            if matches!(s.kind, AstKind::Block) {
                let inner = self.block(&s.children, exits)?;
                exits = inner.exits;
                heads.extend(inner.heads);
                first = first.or(inner.first);
                continue;
            }
            let lowered = self.statement(s, exits)?;
            heads.push(lowered.id);
            first = first.or(Some(lowered.first));
            exits = lowered.exits;
        }
        // A require governs every statement after it in the same list.
        for (i, &h) in heads.iter().enumerate() {
            if self.nodes[h].kind == GraphNodeKind::Require {
                let later = heads[i + 1..].to_vec();
                self.control(h, &later);
            }
        }
        Ok(Lowered {
            exits,
            heads,
            first,
        })
    }

    fn statement(&mut self, s: &AstNode, preds: Vec<usize>) -> Result<LoweredStmt, GraphError> {
        let kind = match &s.kind {
            AstKind::LocalVar { .. } => Some(GraphNodeKind::VarDecl),
            AstKind::Assign { .. } | AstKind::UnaryOp { .. } => Some(GraphNodeKind::Assign),
            AstKind::Require { .. } => Some(GraphNodeKind::Require),
            AstKind::Return => Some(GraphNodeKind::Return),
            AstKind::Transfer { .. } => Some(GraphNodeKind::Transfer),
            AstKind::Emit { .. } => Some(GraphNodeKind::Emit),
            AstKind::Call { .. } => Some(GraphNodeKind::Call),
            AstKind::Placeholder => Some(GraphNodeKind::Placeholder),
            AstKind::If | AstKind::Loop { .. } => None,
            other => {
                return Err(GraphError::UnsupportedNode {
                    kind: other.label().to_string(),
                    span: s.span.clone(),
                })
            }
        };
        if let Some(kind) = kind {
            let exprs = if kind == GraphNodeKind::Placeholder {
                Vec::new()
            } else {
                vec![s.clone()]
            };
            let id = self.push(kind, s.span.clone(), s.text.clone(), exprs);
            self.flow(&preds, id);
            let exits = if kind == GraphNodeKind::Return {
                Vec::new()
            } else {
                vec![id]
            };
            return Ok(LoweredStmt {
                id,
                first: id,
                exits,
            });
        }

        match &s.kind {
            AstKind::If => {
                let cond = &s.children[0];
                let then_block = &s.children[1];
                let (span, snippet) = header(s, then_block);
                let id = self.push(GraphNodeKind::If, span, snippet, vec![cond.clone()]);
                self.flow(&preds, id);
                let then = self.block(&then_block.children, vec![id])?;
                self.control(id, &then.heads);
                let mut exits = then.exits;
                if let Some(else_block) = s.children.get(2) {
                    let other = self.block(&else_block.children, vec![id])?;
                    self.control(id, &other.heads);
                    exits.extend(other.exits);
                } else {
                    exits.push(id);
                }
                exits.sort_unstable();
                exits.dedup();
                Ok(LoweredStmt {
                    id,
                    first: id,
                    exits,
                })
            }
            AstKind::Loop {
                loop_kind,
                has_init,
                has_cond,
                has_update,
            } => {
                let mut rest = s.children.iter();
                let init = if *has_init { rest.next() } else { None };
                let cond = if *has_cond { rest.next() } else { None };
                let update = if *has_update { rest.next() } else { None };
                let body = rest.next().expect("loop body");
                let (span, snippet) = header(s, body);
                let id = self.push(
                    GraphNodeKind::Loop,
                    span,
                    snippet,
                    cond.cloned().into_iter().collect(),
                );
                let mut header_preds = preds;
                let mut first = id;
                if let Some(init) = init {
                    let lowered = self.statement(init, header_preds)?;
                    header_preds = lowered.exits;
                    first = lowered.first;
                }
                let update_id = update.map(|u| {
                    self.push(GraphNodeKind::Assign, u.span.clone(), u.text.clone(), vec![u.clone()])
                });
                let lowered = if *loop_kind == LoopKind::DoWhile {
                    let mut body_preds = header_preds;
                    body_preds.push(id);
                    let lowered = self.block(&body.children, body_preds)?;
                    first = lowered.first.unwrap_or(id);
                    lowered
                } else {
                    self.flow(&header_preds, id);
                    self.block(&body.children, vec![id])?
                };
                let back = match update_id {
                    Some(u) => {
                        self.flow(&lowered.exits, u);
                        vec![u]
                    }
                    None => lowered.exits.clone(),
                };
                // Back edge; an empty body leaves the header looping on itself.
                self.flow(&back, id);
                self.control(id, &lowered.heads);
                if let Some(u) = update_id {
                    self.control(id, &[u]);
                }
                Ok(LoweredStmt {
                    id,
                    first,
                    exits: vec![id],
                })
            }
            _ => unreachable!("simple statements handled above"),
        }
    }
}

/// Span and verbatim text of an `if`/loop header, i.e. everything before the body.
fn header(stmt: &AstNode, body: &AstNode) -> (SourceSpan, String) {
    let mut len = body.span.offset.saturating_sub(stmt.span.offset);
    if len == 0 || len > stmt.text.len() {
        // do-while: the body comes first; keep the whole statement.
        len = stmt.text.len();
    }
    let text = stmt.text[..len].trim_end();
    let mut span = stmt.span.clone();
    span.length = text.len();
    (span, text.to_string())
}

fn root_name(target: &AstNode) -> Option<&str> {
    match &target.kind {
        AstKind::Identifier { name } => Some(name),
        AstKind::Index | AstKind::MemberAccess { .. } => root_name(&target.children[0]),
        _ => None,
    }
}

#[derive(Default)]
struct RawFacts {
    decls: Vec<String>,
    writes: BTreeSet<String>,
    reads: BTreeSet<String>,
    calls: BTreeSet<String>,
}

fn collect(e: &AstNode, out: &mut RawFacts) {
    match &e.kind {
        AstKind::LocalVar { name, .. } => {
            out.decls.push(name.clone());
            e.children.iter().for_each(|c| collect(c, out));
        }
        AstKind::Assign { op } => {
            collect_target(&e.children[0], op != "=", out);
            collect(&e.children[1], out);
        }
        AstKind::UnaryOp { op, .. } if matches!(op.as_str(), "++" | "--" | "delete") => {
            collect_target(&e.children[0], op != "delete", out);
        }
        AstKind::Identifier { name } => {
            out.reads.insert(name.clone());
        }
        AstKind::Call { .. } => {
            let callee = &e.children[0];
            match &callee.kind {
                AstKind::Identifier { name } => {
                    out.calls.insert(name.clone());
                }
                _ => collect(callee, out),
            }
            e.children[1..].iter().for_each(|c| collect(c, out));
        }
        _ => e.children.iter().for_each(|c| collect(c, out)),
    }
}

/// Records the root variable of an assignment target as written, and every
/// index expression inside the target as read.
fn collect_target(target: &AstNode, also_read: bool, out: &mut RawFacts) {
    if let Some(root) = root_name(target) {
        out.writes.insert(root.to_string());
        if also_read {
            out.reads.insert(root.to_string());
        }
    }
    let mut t = target;
    loop {
        match &t.kind {
            AstKind::Index => {
                collect(&t.children[1], out);
                t = &t.children[0];
            }
            AstKind::MemberAccess { .. } => t = &t.children[0],
            AstKind::Identifier { .. } => break,
            _ => {
                collect(t, out);
                break;
            }
        }
    }
}

fn resolve_facts(
    nodes: &mut [GraphNode],
    contexts: &[ExecutionContext],
    state_vars: &[StateVar],
    functions: &BTreeSet<String>,
) {
    let raw: Vec<RawFacts> = nodes
        .iter()
        .map(|n| {
            let mut f = RawFacts::default();
            n.exprs.iter().for_each(|e| collect(e, &mut f));
            f
        })
        .collect();

    // Locals in scope per context: parameters plus every declaration.
    let mut locals: Vec<BTreeSet<String>> = contexts
        .iter()
        .map(|c| c.params.iter().cloned().collect())
        .collect();
    for (n, f) in nodes.iter().zip(&raw) {
        locals[n.context_id].extend(f.decls.iter().cloned());
    }
    let is_state = |name: &str| state_vars.iter().any(|v| v.name == name);

    for (n, f) in nodes.iter_mut().zip(raw) {
        let scope = &locals[n.context_id];
        let mut facts = NodeFacts::default();
        facts.local_defs.extend(f.decls);
        for w in f.writes {
            if scope.contains(&w) {
                facts.local_defs.insert(w);
            } else if is_state(&w) {
                facts.state_writes.insert(w);
            }
        }
        for r in f.reads {
            if scope.contains(&r) {
                facts.local_uses.insert(r);
            } else if is_state(&r) {
                facts.state_reads.insert(r);
            }
        }
        facts.calls = f
            .calls
            .into_iter()
            .filter(|c| functions.contains(c))
            .collect();
        n.facts = facts;
    }
}

fn data_edges(nodes: &[GraphNode], contexts: &[ExecutionContext]) -> Vec<GraphEdge> {
    let mut edges = Vec::new();
    let mut push = |src: usize, dst: usize| {
        if src != dst {
            edges.push(GraphEdge {
                src,
                dst,
                kind: EdgeKind::Data,
            });
        }
    };

    // Local def -> use within a context, flow-insensitive.
    let mut defs: BTreeMap<(usize, &str), Vec<usize>> = BTreeMap::new();
    for n in nodes {
        for v in &n.facts.local_defs {
            defs.entry((n.context_id, v)).or_default().push(n.id);
        }
    }
    for n in nodes {
        for v in &n.facts.local_uses {
            for &d in defs.get(&(n.context_id, v.as_str())).into_iter().flatten() {
                push(d, n.id);
            }
        }
    }

    // Internal calls: arguments reach parameter uses; returned values reach the call site.
    for site in nodes {
        for callee in &site.facts.calls {
            for ctx in contexts.iter().filter(|c| &c.name == callee) {
                for n in nodes.iter().filter(|n| n.context_id == ctx.id) {
                    if n.facts.local_uses.iter().any(|u| ctx.params.contains(u)) {
                        push(site.id, n.id);
                    }
                    if n.kind == GraphNodeKind::Return {
                        push(n.id, site.id);
                    }
                }
            }
        }
    }
    edges
}

fn state_edges(nodes: &[GraphNode]) -> Vec<GraphEdge> {
    let mut edges = Vec::new();
    for w in nodes {
        for var in &w.facts.state_writes {
            for r in nodes {
                if r.id != w.id && r.facts.state_reads.contains(var) {
                    edges.push(GraphEdge {
                        src: w.id,
                        dst: r.id,
                        kind: EdgeKind::State,
                    });
                }
            }
        }
    }
    edges
}
