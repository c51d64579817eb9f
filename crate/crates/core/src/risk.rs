// SPDX-License-Identifier: Apache-2.0

//! Context-sensitive risk classification of extracted paths.
//!
//! Each path first gets a baseline from the source-sensitivity × sink-risk
//! matrix. Rules then override it: any `ForceHigh` match wins, otherwise any
//! `ForceSafe` match makes the path SAFE. Owner-only paths have their matrix
//! level lowered by one step; rule verdicts are never demoted.

use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::{Config, RuleConfig};
use crate::frontend::{AstKind, AstNode, SourceSpan};
use crate::graph::{AccessGuard, EdgeKind, GraphNodeKind, SemanticGraph};
use crate::paths::{is_hash_call, is_modulo, link_kind, path_has, VulnPath};
use crate::taint::{has_keyword, Sensitivity, SinkCategory, SinkRisk, SourcePattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RiskLevel {
    Safe,
    Low,
    Medium,
    High,
}

impl RiskLevel {
    pub fn rank(self) -> u8 {
        self as u8
    }

    /// Class index used by exported path tables; SAFE has none.
    pub fn class_index(self) -> Option<usize> {
        match self {
            RiskLevel::High => Some(0),
            RiskLevel::Medium => Some(1),
            RiskLevel::Low => Some(2),
            RiskLevel::Safe => None,
        }
    }

    pub fn from_class_index(i: usize) -> Option<Self> {
        [RiskLevel::High, RiskLevel::Medium, RiskLevel::Low].get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RiskLevel::High => "HIGH",
            RiskLevel::Medium => "MEDIUM",
            RiskLevel::Low => "LOW",
            RiskLevel::Safe => "SAFE",
        }
    }

    fn demoted(self) -> Self {
        match self {
            RiskLevel::High => RiskLevel::Medium,
            RiskLevel::Medium => RiskLevel::Low,
            other => other,
        }
    }
}

impl fmt::Display for RiskLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleVerdict {
    ForceHigh,
    ForceSafe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "ts-modulo")]
    TimestampModulo,
    #[serde(rename = "ts-gambling")]
    TimestampGambling,
    #[serde(rename = "ts-keccak-rng")]
    TimestampKeccakRng,
    #[serde(rename = "ts-deadline-guard")]
    DeadlineGuard,
    #[serde(rename = "ts-logging")]
    TimestampLogging,
    #[serde(rename = "ts-cooldown-guard")]
    CooldownGuard,
    /// Extension: a bare `stateVar = block.timestamp` bookkeeping write.
    #[serde(rename = "ts-record")]
    TimestampRecord,
}

impl RuleId {
    pub const ALL: [RuleId; 7] = [
        RuleId::TimestampModulo,
        RuleId::TimestampGambling,
        RuleId::TimestampKeccakRng,
        RuleId::DeadlineGuard,
        RuleId::TimestampLogging,
        RuleId::CooldownGuard,
        RuleId::TimestampRecord,
    ];

    pub fn verdict(self) -> RuleVerdict {
        match self {
            RuleId::TimestampModulo | RuleId::TimestampGambling | RuleId::TimestampKeccakRng => {
                RuleVerdict::ForceHigh
            }
            _ => RuleVerdict::ForceSafe,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::TimestampModulo => "ts-modulo",
            RuleId::TimestampGambling => "ts-gambling",
            RuleId::TimestampKeccakRng => "ts-keccak-rng",
            RuleId::DeadlineGuard => "ts-deadline-guard",
            RuleId::TimestampLogging => "ts-logging",
            RuleId::CooldownGuard => "ts-cooldown-guard",
            RuleId::TimestampRecord => "ts-record",
        }
    }

    pub fn pattern(self) -> &'static str {
        match self {
            RuleId::TimestampModulo => "block.timestamp % N",
            RuleId::TimestampGambling => "block.timestamp deciding a lottery or bet",
            RuleId::TimestampKeccakRng => "keccak256(block.timestamp, ...) as randomness",
            RuleId::DeadlineGuard => "block.timestamp >= deadline + delay",
            RuleId::TimestampLogging => "block.timestamp only emitted in an event",
            RuleId::CooldownGuard => "block.timestamp > lastAction + delay",
            RuleId::TimestampRecord => "stateVar = block.timestamp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleMatch {
    pub rule_id: RuleId,
    pub verdict: RuleVerdict,
    pub evidence_span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContextTag {
    Gambling,
    Timecheck,
    Logging,
    Rng,
    TransferBearing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RiskFactor {
    ModuloOnSource,
    KeccakOfSource,
    ValueAtStake,
    MultiSource,
    SameBlockConsumption,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathAssessment {
    pub path: VulnPath,
    pub risk: RiskLevel,
    pub matched_rules: Vec<RuleMatch>,
    pub context_tags: Vec<ContextTag>,
    pub access: AccessGuard,
    pub risk_factors: Vec<RiskFactor>,
    pub source_span: SourceSpan,
    pub sink_span: SourceSpan,
}

fn sink_category(graph: &SemanticGraph, id: usize) -> Option<SinkCategory> {
    graph.nodes[id].sink.as_ref().map(|s| s.category)
}

/// Keyword and pattern tags describing where a path lives.
pub fn analyze_context(path: &VulnPath, graph: &SemanticGraph, rules: &RuleConfig) -> Vec<ContextTag> {
    let mut tags = Vec::new();
    let mut names = vec![graph.contract_name.as_str()];
    for &id in &path.node_seq {
        names.push(graph.context_of(id).name.as_str());
        names.push(graph.nodes[id].snippet.as_str());
    }
    if names.iter().any(|t| has_keyword(t, &rules.gambling_keywords)) {
        tags.push(ContextTag::Gambling);
    }
    let timecheck = path.node_seq.iter().any(|&id| {
        let n = &graph.nodes[id];
        let clock = n.sources.iter().any(|l| l.pattern.is_time_or_number());
        let mut compares = false;
        n.walk_exprs(&mut |e| {
            compares |= matches!(&e.kind, AstKind::BinaryOp { op }
                if matches!(op.as_str(), "<" | ">" | "<=" | ">=" | "==" | "!="));
        });
        n.kind.is_predicate() && clock && compares
    });
    if timecheck {
        tags.push(ContextTag::Timecheck);
    }
    if graph.nodes[path.sink].kind == GraphNodeKind::Emit {
        tags.push(ContextTag::Logging);
    }
    if path_has(graph, path, is_modulo) || path_has(graph, path, is_hash_call) {
        tags.push(ContextTag::Rng);
    }
    if path
        .node_seq
        .iter()
        .any(|&id| sink_category(graph, id) == Some(SinkCategory::ValueTransfer))
    {
        tags.push(ContextTag::TransferBearing);
    }
    tags
}

/// Weakest access guard among the contexts the path touches.
pub fn check_access_control(path: &VulnPath, graph: &SemanticGraph) -> AccessGuard {
    path.node_seq
        .iter()
        .map(|&id| graph.context_of(id).access_guard)
        .min()
        .unwrap_or_default()
}

fn is_same_block_hash(e: &AstNode) -> bool {
    matches!(e.kind, AstKind::Call { .. })
        && matches!(
            e.children[0].path().as_deref(),
            Some("blockhash" | "block.blockhash")
        )
        && e.children.get(1).and_then(AstNode::path).as_deref() == Some("block.number")
}

pub fn identify_risk_factors(path: &VulnPath, graph: &SemanticGraph) -> Vec<RiskFactor> {
    let mut out = Vec::new();
    if path_has(graph, path, is_modulo) {
        out.push(RiskFactor::ModuloOnSource);
    }
    if path_has(graph, path, is_hash_call) {
        out.push(RiskFactor::KeccakOfSource);
    }
    if path.node_seq.iter().any(|&id| {
        matches!(
            sink_category(graph, id),
            Some(SinkCategory::ValueTransfer | SinkCategory::PrizeAssignment)
        )
    }) {
        out.push(RiskFactor::ValueAtStake);
    }
    let mut patterns: Vec<_> = path
        .node_seq
        .iter()
        .flat_map(|&id| graph.nodes[id].sources.iter().map(|l| l.pattern))
        .collect();
    patterns.sort_unstable();
    patterns.dedup();
    if patterns.len() >= 2 {
        out.push(RiskFactor::MultiSource);
    }
    let same_block = path.node_seq.iter().any(|&id| {
        let mut hit = false;
        graph.nodes[id].walk_exprs(&mut |e| hit |= is_same_block_hash(e));
        hit
    });
    if same_block {
        out.push(RiskFactor::SameBlockConsumption);
    }
    out
}

/// Seconds denoted by a literal such as `900`, `15 minutes` or `1 days`.
pub fn duration_seconds(literal: &str) -> Option<u64> {
    let mut parts = literal.split_whitespace();
    let number: u64 = parts.next()?.replace('_', "").parse().ok()?;
    let unit = match parts.next() {
        None | Some("seconds") => 1,
        Some("minutes") => 60,
        Some("hours") => 3600,
        Some("days") => 86_400,
        Some("weeks") => 604_800,
        Some(_) => return None,
    };
    number.checked_mul(unit)
}

fn is_timestamp(e: &AstNode) -> bool {
    matches!(e.path().as_deref(), Some("block.timestamp" | "now"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GuardKind {
    Deadline,
    Cooldown,
}

/// Matches `block.timestamp >= X + D` (or `>`), mirrored forms and `&&`
/// conjuncts, where `X` is a state variable and `D` a long enough duration.
fn guard_kind(cond: &AstNode, graph: &SemanticGraph, min_seconds: u64) -> Option<GuardKind> {
    let AstKind::BinaryOp { op } = &cond.kind else {
        return None;
    };
    let (lhs, rhs) = (&cond.children[0], &cond.children[1]);
    let (clock, bound, kind) = match op.as_str() {
        "&&" => {
            return guard_kind(lhs, graph, min_seconds)
                .or_else(|| guard_kind(rhs, graph, min_seconds))
        }
        ">=" => (lhs, rhs, GuardKind::Deadline),
        ">" => (lhs, rhs, GuardKind::Cooldown),
        "<=" => (rhs, lhs, GuardKind::Deadline),
        "<" => (rhs, lhs, GuardKind::Cooldown),
        _ => return None,
    };
    if !is_timestamp(clock) {
        return None;
    }
    let AstKind::BinaryOp { op } = &bound.kind else {
        return None;
    };
    if op != "+" {
        return None;
    }
    let is_state = |n: &AstNode| matches!(&n.kind, AstKind::Identifier { name } if graph.is_state_var(name));
    let long_enough = |n: &AstNode| match &n.kind {
        AstKind::Literal { value } => duration_seconds(value).is_some_and(|s| s >= min_seconds),
        _ => false,
    };
    let (a, b) = (&bound.children[0], &bound.children[1]);
    ((is_state(a) && long_enough(b)) || (long_enough(a) && is_state(b))).then_some(kind)
}

/// `stateVar = <clock>` or `stateVar = <clock> + literal`.
fn is_timestamp_record(graph: &SemanticGraph, id: usize) -> bool {
    let node = &graph.nodes[id];
    let [AstNode {
        kind: AstKind::Assign { op },
        children,
        ..
    }] = node.exprs.as_slice()
    else {
        return false;
    };
    let clock = |e: &AstNode| {
        matches!(
            e.path().as_deref(),
            Some("block.timestamp" | "now" | "block.number")
        )
    };
    let target_is_state =
        matches!(&children[0].kind, AstKind::Identifier { name } if graph.is_state_var(name));
    let value = &children[1];
    let value_ok = clock(value)
        || matches!(&value.kind, AstKind::BinaryOp { op } if op == "+")
            && value.children.iter().any(clock)
            && value
                .children
                .iter()
                .any(|c| matches!(c.kind, AstKind::Literal { .. }));
    op == "=" && target_is_state && value_ok
}

/// Guard node on the path and its kind, if the path is a guarded time check:
/// its first predicate is the guard, only timestamp bookkeeping precedes it,
/// only control dependences follow it, and nothing on it hashes or reduces.
fn guard_route(
    path: &VulnPath,
    graph: &SemanticGraph,
    config: &Config,
) -> Option<(usize, GuardKind)> {
    if path_has(graph, path, is_modulo) || path_has(graph, path, is_hash_call) {
        return None;
    }
    let pos = path
        .node_seq
        .iter()
        .position(|&id| graph.nodes[id].kind.is_predicate())?;
    let guard = path.node_seq[pos];
    let node = &graph.nodes[guard];
    let cond = match node.kind {
        GraphNodeKind::Require => node.exprs.first()?.children.first()?,
        _ => node.exprs.first()?,
    };
    let kind = guard_kind(cond, graph, config.rules.min_guard_seconds)?;
    let before_ok = path.node_seq[..pos]
        .iter()
        .all(|&id| is_timestamp_record(graph, id));
    let after_ok = path.node_seq[pos..]
        .windows(2)
        .all(|w| link_kind(graph, w[0], w[1], &config.taint) == Some(EdgeKind::Control));
    (before_ok && after_ok).then_some((guard, kind))
}

fn matrix(source: Sensitivity, sink: SinkRisk) -> RiskLevel {
    match (source, sink) {
        (Sensitivity::High, SinkRisk::High) => RiskLevel::High,
        (Sensitivity::High, SinkRisk::Medium) | (Sensitivity::Medium, SinkRisk::High) => {
            RiskLevel::Medium
        }
        _ => RiskLevel::Low,
    }
}

/// Classifies one path from its tags, access level and risk factors.
pub fn apply_rules(
    path: &VulnPath,
    graph: &SemanticGraph,
    tags: &[ContextTag],
    access: AccessGuard,
    factors: &[RiskFactor],
    config: &Config,
) -> PathAssessment {
    let source_node = &graph.nodes[path.source];
    let sink_node = &graph.nodes[path.sink];
    let sink = sink_node.sink.as_ref().expect("path ends at a sink");
    let source_label = source_node
        .sources
        .iter()
        .max_by_key(|l| (l.sensitivity, Reverse(l.pattern)))
        .expect("path starts at a source");

    let ts_span = path.node_seq.iter().find_map(|&id| {
        graph.nodes[id]
            .sources
            .iter()
            .find(|l| l.pattern == SourcePattern::BlockTimestamp)
            .map(|l| l.span.clone())
    });
    let mut matched = Vec::new();
    let mut hit = |rule: RuleId, span: &SourceSpan| {
        matched.push(RuleMatch {
            rule_id: rule,
            verdict: rule.verdict(),
            evidence_span: span.clone(),
        });
    };

    if let Some(ts) = &ts_span {
        let guard = guard_route(path, graph, config);
        if factors.contains(&RiskFactor::ModuloOnSource) {
            hit(RuleId::TimestampModulo, ts);
        }
        if tags.contains(&ContextTag::Gambling) && sink.risk == SinkRisk::High && guard.is_none() {
            hit(RuleId::TimestampGambling, ts);
        }
        if factors.contains(&RiskFactor::KeccakOfSource) {
            hit(RuleId::TimestampKeccakRng, ts);
        }
        if let Some((g, kind)) = guard {
            let span = graph.nodes[g].span.clone();
            match kind {
                GuardKind::Deadline => hit(RuleId::DeadlineGuard, &span),
                GuardKind::Cooldown => hit(RuleId::CooldownGuard, &span),
            }
        }
        let reduces = factors.contains(&RiskFactor::ModuloOnSource)
            || factors.contains(&RiskFactor::KeccakOfSource);
        if sink_node.kind == GraphNodeKind::Emit && !reduces {
            hit(RuleId::TimestampLogging, ts);
        }
    }
    if path.node_seq.len() == 1 && is_timestamp_record(graph, path.source) {
        let span = source_label.span.clone();
        hit(RuleId::TimestampRecord, &span);
    }

    let risk = if matched.iter().any(|m| m.verdict == RuleVerdict::ForceHigh) {
        RiskLevel::High
    } else if matched.iter().any(|m| m.verdict == RuleVerdict::ForceSafe) {
        RiskLevel::Safe
    } else {
        let base = matrix(source_label.sensitivity, sink.risk);
        if access == AccessGuard::OwnerOnly {
            base.demoted()
        } else {
            base
        }
    };

    let mut path = path.clone();
    path.risk = Some(risk);
    PathAssessment {
        path,
        risk,
        matched_rules: matched,
        context_tags: tags.to_vec(),
        access,
        risk_factors: factors.to_vec(),
        source_span: source_label.span.clone(),
        sink_span: sink.span.clone(),
    }
}

/// Assesses every path and sorts by risk, then sink taint, then path id.
pub fn assess_path_risks(paths: &[VulnPath], graph: &SemanticGraph, config: &Config) -> Vec<PathAssessment> {
    let mut out: Vec<PathAssessment> = paths
        .iter()
        .map(|p| {
            let tags = analyze_context(p, graph, &config.rules);
            let access = check_access_control(p, graph);
            let factors = identify_risk_factors(p, graph);
            apply_rules(p, graph, &tags, access, &factors, config)
        })
        .collect();
    sort_assessments(&mut out);
    out
}

pub fn sort_assessments(list: &mut [PathAssessment]) {
    list.sort_by(|a, b| {
        b.risk
            .cmp(&a.risk)
            .then(b.path.sink_taint.total_cmp(&a.path.sink_taint))
            .then(a.path.id.cmp(&b.path.id))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{PathConfig, TaintConfig};
    use crate::paths::extract_paths;
    use crate::testutil::{graph_of, LOTTERY};

    fn assess(src: &str) -> (SemanticGraph, Vec<PathAssessment>) {
        let g = graph_of(src);
        let set = extract_paths(&g, &TaintConfig::default(), &PathConfig::default());
        let out = assess_path_risks(&set.paths, &g, &Config::default());
        (g, out)
    }

    fn risks(src: &str) -> Vec<RiskLevel> {
        assess(src).1.iter().map(|a| a.risk).collect()
    }

    fn rules_of(a: &PathAssessment) -> Vec<RuleId> {
        a.matched_rules.iter().map(|m| m.rule_id).collect()
    }

    #[test]
    fn lottery_is_high_via_keccak_rule() {
        let (_, out) = assess(LOTTERY);
        assert_eq!(out.len(), 1);
        let a = &out[0];
        assert_eq!(a.risk, RiskLevel::High);
        assert!(rules_of(a).contains(&RuleId::TimestampKeccakRng));
        assert_eq!(a.path.risk, Some(RiskLevel::High));
        assert_eq!((a.source_span.line, a.sink_span.line), (4, 7));
        assert_eq!(
            a.risk_factors,
            [
                RiskFactor::ModuloOnSource,
                RiskFactor::KeccakOfSource,
                RiskFactor::ValueAtStake
            ]
        );
        assert!(a.context_tags.contains(&ContextTag::Gambling));
        assert_eq!(a.access, AccessGuard::None);
    }

    #[test]
    fn rule_modulo() {
        let (_, out) = assess(include_str!("../tests/fixtures/rule_modulo.sol"));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].risk, RiskLevel::High);
        assert_eq!(rules_of(&out[0]), [RuleId::TimestampModulo]);
    }

    #[test]
    fn rule_gambling() {
        let (_, out) = assess(include_str!("../tests/fixtures/rule_gambling.sol"));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].risk, RiskLevel::High);
        assert_eq!(rules_of(&out[0]), [RuleId::TimestampGambling]);
    }

    #[test]
    fn rule_keccak() {
        let (_, out) = assess(include_str!("../tests/fixtures/rule_keccak_rng.sol"));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].risk, RiskLevel::High);
        assert_eq!(rules_of(&out[0]), [RuleId::TimestampKeccakRng]);
    }

    #[test]
    fn rule_deadline() {
        let (_, out) = assess(include_str!("../tests/fixtures/rule_deadline_guard.sol"));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].risk, RiskLevel::Safe);
        assert_eq!(rules_of(&out[0]), [RuleId::DeadlineGuard]);
    }

    #[test]
    fn rule_logging() {
        let (_, out) = assess(include_str!("../tests/fixtures/rule_logging.sol"));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].risk, RiskLevel::Safe);
        assert_eq!(rules_of(&out[0]), [RuleId::TimestampLogging]);
        assert_eq!(out[0].context_tags, [ContextTag::Logging]);
        assert!(out[0].risk_factors.is_empty());
    }

    #[test]
    fn rule_cooldown() {
        let (_, out) = assess(include_str!("../tests/fixtures/rule_cooldown_guard.sol"));
        assert_eq!(out.len(), 4);
        assert!(out.iter().all(|a| a.risk == RiskLevel::Safe));
        assert!(out
            .iter()
            .any(|a| rules_of(a) == [RuleId::CooldownGuard]));
        assert!(out
            .iter()
            .any(|a| rules_of(a) == [RuleId::TimestampRecord]));
    }

    #[test]
    fn short_delays_are_not_guards() {
        let src = include_str!("../tests/fixtures/rule_deadline_guard.sol")
            .replace("15 minutes", "30 seconds");
        assert_eq!(risks(&src), [RiskLevel::High]);
    }

    #[test]
    fn mirrored_and_conjunct_guards() {
        let base = include_str!("../tests/fixtures/rule_deadline_guard.sol");
        let mirrored = base.replace(
            "block.timestamp >= deadline + 15 minutes",
            "deadline + 15 minutes <= block.timestamp",
        );
        assert_eq!(risks(&mirrored), [RiskLevel::Safe]);
        let conj = base.replace(
            "block.timestamp >= deadline + 15 minutes",
            "msg.value == 0 && block.timestamp >= deadline + 15 minutes",
        );
        assert_eq!(risks(&conj), [RiskLevel::Safe]);
    }

    #[test]
    fn matrix_low_for_block_number_condition() {
        let (_, out) = assess(
            "contract Calc { function f() public { uint b = block.number; if (b > 5) { uint y = 1; } } }",
        );
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].risk, RiskLevel::Low);
        assert!(out[0].matched_rules.is_empty());
        assert!(out[0].context_tags.is_empty());
    }

    #[test]
    fn matrix_medium_and_owner_demotion() {
        let open = r#"contract Keeper {
            uint stamp;
            function f() public { stamp = uint(blockhash(block.number - 1)); }
        }"#;
        assert_eq!(risks(open), [RiskLevel::Medium]);
        let guarded = r#"contract Keeper {
            address owner;
            uint stamp;
            function f() public onlyOwner { stamp = uint(blockhash(block.number - 1)); }
        }"#;
        let (_, out) = assess(guarded);
        assert_eq!(out[0].access, AccessGuard::OwnerOnly);
        assert_eq!(out[0].risk, RiskLevel::Low);
    }

    #[test]
    fn force_high_is_not_demoted() {
        let src = r#"contract Keeper {
            function f() public onlyOwner {
                if (block.timestamp % 2 == 0) { payable(msg.sender).transfer(1 ether); }
            }
        }"#;
        assert_eq!(risks(src), [RiskLevel::High]);
    }

    #[test]
    fn access_is_weakest_context() {
        let (_, out) = assess(
            r#"contract Split {
                uint seed;
                function set() public onlyOwner { seed = block.difficulty; }
                function draw() public { payable(msg.sender).transfer(seed); }
            }"#,
        );
        let cross = out.iter().find(|a| a.path.node_seq.len() == 2).unwrap();
        assert_eq!(cross.access, AccessGuard::None);
        let inner = out.iter().find(|a| a.path.node_seq.len() == 1).unwrap();
        assert_eq!(inner.access, AccessGuard::OwnerOnly);
    }

    #[test]
    fn multi_source_and_same_block_factors() {
        let (_, out) = assess(
            r#"contract M {
                function f() public {
                    uint r = uint(blockhash(block.number)) + block.difficulty;
                    payable(msg.sender).transfer(r);
                }
            }"#,
        );
        let f = &out[0].risk_factors;
        assert!(f.contains(&RiskFactor::MultiSource));
        assert!(f.contains(&RiskFactor::SameBlockConsumption));
    }

    #[test]
    fn sorted_by_rank_then_taint_then_id() {
        let (g, out) = assess(
            r#"contract Mixed {
                function f() public {
                    uint b = block.number;
                    if (b > 5) { uint y = 1; }
                    if (block.timestamp % 3 == 0) { payable(msg.sender).transfer(1 ether); }
                }
            }"#,
        );
        let levels: Vec<_> = out.iter().map(|a| a.risk).collect();
        assert_eq!(levels, [RiskLevel::High, RiskLevel::Low]);
        // Re-sorting a reversed copy gives the same order.
        let mut reversed: Vec<_> = out.iter().rev().cloned().collect();
        sort_assessments(&mut reversed);
        assert_eq!(reversed, out);
        let _ = g;
    }

    #[test]
    fn durations() {
        assert_eq!(duration_seconds("15 minutes"), Some(900));
        assert_eq!(duration_seconds("1 days"), Some(86_400));
        assert_eq!(duration_seconds("1_000"), Some(1000));
        assert_eq!(duration_seconds("2 ether"), None);
        assert_eq!(duration_seconds("0x10"), None);
    }

    #[test]
    fn risk_level_order_and_indices() {
        assert!(RiskLevel::High > RiskLevel::Medium && RiskLevel::Low > RiskLevel::Safe);
        assert_eq!(RiskLevel::Safe.rank(), 0);
        assert_eq!(RiskLevel::High.rank(), 3);
        for i in 0..3 {
            assert_eq!(RiskLevel::from_class_index(i).unwrap().class_index(), Some(i));
        }
        assert_eq!(RiskLevel::Safe.class_index(), None);
        assert_eq!(serde_json::to_string(&RiskLevel::Medium).unwrap(), "\"MEDIUM\"");
        assert_eq!(
            serde_json::to_string(&RuleId::TimestampKeccakRng).unwrap(),
            "\"ts-keccak-rng\""
        );
    }
}
