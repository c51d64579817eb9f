// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::config::RuleConfig;
use crate::frontend::{AstKind, AstNode, SourceSpan};
use crate::graph::{EdgeKind, GraphNode, GraphNodeKind, SemanticGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SourcePattern {
    BlockTimestamp,
    Blockhash,
    BlockDifficulty,
    BlockNumber,
    TxGasprice,
    GasLeft,
    MsgSenderEntropy,
    BalanceEntropy,
}

impl SourcePattern {
    pub fn sensitivity(self) -> Sensitivity {
        match self {
            SourcePattern::BlockTimestamp
            | SourcePattern::Blockhash
            | SourcePattern::BlockDifficulty => Sensitivity::High,
            _ => Sensitivity::Medium,
        }
    }

    /// Patterns that read the block clock or height.
    pub fn is_time_or_number(self) -> bool {
        matches!(self, SourcePattern::BlockTimestamp | SourcePattern::BlockNumber)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sensitivity {
    Medium,
    High,
}

impl Sensitivity {
    pub fn score(self) -> f64 {
        match self {
            Sensitivity::High => 1.0,
            Sensitivity::Medium => 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceLabel {
    pub pattern: SourcePattern,
    pub sensitivity: Sensitivity,
    pub standard: String,
    /// The matched sub-expression.
    pub span: SourceSpan,
}

impl SourceLabel {
    fn new(pattern: SourcePattern, span: SourceSpan) -> Self {
        Self {
            pattern,
            sensitivity: pattern.sensitivity(),
            standard: "CWE-330".into(),
            span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SinkCategory {
    RandomGeneration,
    ValueTransfer,
    PrizeAssignment,
    StateModification,
    ExternalCall,
    ConditionalLogic,
}

impl SinkCategory {
    pub fn risk(self) -> SinkRisk {
        match self {
            SinkCategory::RandomGeneration
            | SinkCategory::ValueTransfer
            | SinkCategory::PrizeAssignment => SinkRisk::High,
            SinkCategory::StateModification | SinkCategory::ExternalCall => SinkRisk::Medium,
            SinkCategory::ConditionalLogic => SinkRisk::Low,
        }
    }

    pub fn standard(self) -> &'static str {
        match self {
            SinkCategory::RandomGeneration | SinkCategory::PrizeAssignment => "SWC-120",
            SinkCategory::ValueTransfer => "SWC-105",
            SinkCategory::StateModification => "SWC-124",
            SinkCategory::ExternalCall => "SWC-107",
            SinkCategory::ConditionalLogic => "SWC-116",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SinkRisk {
    Low,
    Medium,
    High,
}

impl SinkRisk {
    pub fn score(self) -> f64 {
        match self {
            SinkRisk::High => 1.0,
            SinkRisk::Medium => 0.66,
            SinkRisk::Low => 0.33,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SinkLabel {
    pub category: SinkCategory,
    pub risk: SinkRisk,
    pub standard: String,
    pub span: SourceSpan,
}

impl SinkLabel {
    pub fn new(category: SinkCategory, span: SourceSpan) -> Self {
        Self {
            category,
            risk: category.risk(),
            standard: category.standard().into(),
            span,
        }
    }
}

const HASH_CALLS: &[&str] = &[
    "keccak256",
    "sha256",
    "sha3",
    "ripemd160",
    "abi.encode",
    "abi.encodePacked",
    "abi.encodeWithSignature",
    "abi.encodeWithSelector",
];

fn callee_path(call: &AstNode) -> Option<String> {
    call.children.first().and_then(AstNode::path)
}

fn is_this_balance(n: &AstNode) -> bool {
    let AstKind::MemberAccess { member } = &n.kind else {
        return false;
    };
    if member != "balance" {
        return false;
    }
    let base = &n.children[0];
    match &base.kind {
        AstKind::Identifier { name } => name == "this",
        AstKind::Call { .. } => {
            callee_path(base).as_deref() == Some("address")
                && base.children.get(1).and_then(AstNode::path).as_deref() == Some("this")
        }
        _ => false,
    }
}

/// Source patterns read by an expression tree, first occurrence per pattern.
pub fn scan_sources(expr: &AstNode) -> Vec<SourceLabel> {
    let mut out: Vec<SourceLabel> = Vec::new();
    scan(expr, false, false, &mut out);
    out
}

fn scan(e: &AstNode, in_hash: bool, in_blockhash: bool, out: &mut Vec<SourceLabel>) {
    let mut hit = |pattern: SourcePattern| {
        if !out.iter().any(|l| l.pattern == pattern) {
            out.push(SourceLabel::new(pattern, e.span.clone()));
        }
    };
    match &e.kind {
        AstKind::Identifier { name } if name == "now" => hit(SourcePattern::BlockTimestamp),
        AstKind::MemberAccess { .. } => {
            match e.path().as_deref() {
                Some("block.timestamp") => hit(SourcePattern::BlockTimestamp),
                Some("block.difficulty" | "block.prevrandao") => {
                    hit(SourcePattern::BlockDifficulty)
                }
                Some("block.number") if !in_blockhash => hit(SourcePattern::BlockNumber),
                Some("tx.gasprice") => hit(SourcePattern::TxGasprice),
                Some("msg.sender") if in_hash => hit(SourcePattern::MsgSenderEntropy),
                _ if in_hash && is_this_balance(e) => hit(SourcePattern::BalanceEntropy),
                _ => {}
            }
            scan(&e.children[0], in_hash, in_blockhash, out);
        }
        AstKind::Call { .. } => {
            let callee = callee_path(e);
            let (mut hash, mut bh) = (in_hash, in_blockhash);
            match callee.as_deref() {
                Some("blockhash" | "block.blockhash") => {
                    hit(SourcePattern::Blockhash);
                    bh = true;
                }
                Some("gasleft") => hit(SourcePattern::GasLeft),
                Some(c) if HASH_CALLS.contains(&c) => hash = true,
                _ => {}
            }
            for c in &e.children {
                scan(c, hash, bh, out);
            }
        }
        _ => {
            for c in &e.children {
                scan(c, in_hash, in_blockhash, out);
            }
        }
    }
}

/// Splits identifiers in `text` into lower-case words on `_`, digits and camelCase humps.
pub(crate) fn identifier_words(text: &str) -> Vec<String> {
    let mut words = Vec::new();
    for ident in text.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_')) {
        let mut cur = String::new();
        let mut prev_lower = false;
        for c in ident.chars() {
            if c == '_' || c.is_ascii_digit() {
                if !cur.is_empty() {
                    words.push(std::mem::take(&mut cur));
                }
                prev_lower = false;
                continue;
            }
            if c.is_ascii_uppercase() && prev_lower && !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
            }
            prev_lower = c.is_ascii_lowercase();
            cur.push(c.to_ascii_lowercase());
        }
        if !cur.is_empty() {
            words.push(cur);
        }
    }
    words
}

/// True when some word of `text` starts with one of `keywords`.
pub(crate) fn has_keyword(text: &str, keywords: &[String]) -> bool {
    identifier_words(text)
        .iter()
        .any(|w| keywords.iter().any(|k| w.starts_with(k.as_str())))
}

fn find<'a>(node: &'a GraphNode, pred: &mut impl FnMut(&AstNode) -> bool) -> Option<&'a AstNode> {
    let mut found = None;
    node.walk_exprs(&mut |e| {
        if found.is_none() && pred(e) {
            found = Some(e);
        }
    });
    found
}

fn is_external_call(e: &AstNode) -> bool {
    let AstKind::Call { .. } = e.kind else {
        return false;
    };
    let AstKind::MemberAccess { member } = &e.children[0].kind else {
        return false;
    };
    match member.as_str() {
        "call" | "delegatecall" | "staticcall" | "transferFrom" => true,
        "transfer" | "send" => e.children.len() > 2,
        _ => false,
    }
}

fn direct_sink(node: &GraphNode, rules: &RuleConfig) -> Option<SinkLabel> {
    let here = node.span.clone();
    if let Some(t) = find(node, &mut |e| matches!(e.kind, AstKind::Transfer { .. })) {
        return Some(SinkLabel::new(SinkCategory::ValueTransfer, t.span.clone()));
    }
    if node
        .facts
        .state_writes
        .iter()
        .any(|v| has_keyword(v, &rules.prize_keywords))
    {
        return Some(SinkLabel::new(SinkCategory::PrizeAssignment, here));
    }
    if node.kind == GraphNodeKind::Return {
        let rng = find(node, &mut |e| match &e.kind {
            AstKind::BinaryOp { op } => op == "%",
            AstKind::Call { .. } => callee_path(e).as_deref() == Some("keccak256"),
            _ => false,
        });
        if rng.is_some() {
            return Some(SinkLabel::new(SinkCategory::RandomGeneration, here));
        }
    }
    if let Some(c) = find(node, &mut is_external_call) {
        return Some(SinkLabel::new(SinkCategory::ExternalCall, c.span.clone()));
    }
    if !node.facts.state_writes.is_empty() || node.kind == GraphNodeKind::Emit {
        return Some(SinkLabel::new(SinkCategory::StateModification, here));
    }
    None
}

/// Attaches source and sink labels to every node of `graph`.
///
/// Predicates become conditional-logic sinks only when they do not govern,
/// directly or through nested predicates, any other sink.
pub fn identify_sources_sinks(graph: &mut SemanticGraph, rules: &RuleConfig) {
    for node in &mut graph.nodes {
        node.sources = Vec::new();
        for e in &node.exprs {
            for label in scan_sources(e) {
                if !node.sources.iter().any(|l| l.pattern == label.pattern) {
                    node.sources.push(label);
                }
            }
        }
        node.sink = direct_sink(node, rules);
    }

    let n = graph.nodes.len();
    let mut control = vec![Vec::new(); n];
    for e in graph.edges_of_kind(EdgeKind::Control) {
        control[e.src].push(e.dst);
    }
    for id in 0..n {
        let node = &graph.nodes[id];
        if !node.kind.is_predicate() || node.sink.is_some() {
            continue;
        }
        let mut seen = vec![false; n];
        let mut stack = control[id].clone();
        let mut governs_sink = false;
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            if v != id && direct_sink(&graph.nodes[v], rules).is_some() {
                governs_sink = true;
                break;
            }
            stack.extend(&control[v]);
        }
        if !governs_sink {
            let span = match (node.kind, node.exprs.first()) {
                (GraphNodeKind::Require, Some(req)) => req.children[0].span.clone(),
                (_, Some(cond)) => cond.span.clone(),
                (_, None) => node.span.clone(),
            };
            graph.nodes[id].sink = Some(SinkLabel::new(SinkCategory::ConditionalLogic, span));
        }
    }
}
