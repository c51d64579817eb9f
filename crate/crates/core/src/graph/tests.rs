// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, VecDeque};

use super::*;
use crate::frontend::{parse_source, tokenize, Visibility};
use crate::testutil::{edges, graph_of, node, LOTTERY};

#[test]
fn lottery_nodes_and_edges() {
    let g = graph_of(LOTTERY);
    assert_eq!(g.contract_name, "VulnerableLottery");
    let kinds: Vec<_> = g.nodes.iter().map(|n| n.kind).collect();
    assert_eq!(
        kinds,
        [
            GraphNodeKind::Require,
            GraphNodeKind::VarDecl,
            GraphNodeKind::VarDecl,
            GraphNodeKind::If,
            GraphNodeKind::Transfer
        ]
    );
    assert_eq!(g.nodes[3].snippet, "if (random == 0)");
    assert_eq!(edges(&g, EdgeKind::Flow), [(0, 1), (1, 2), (2, 3), (3, 4)]);
    assert_eq!(edges(&g, EdgeKind::Data), [(1, 2), (2, 3)]);
    assert_eq!(edges(&g, EdgeKind::Control), [(0, 1), (0, 2), (0, 3), (3, 4)]);
    assert!(edges(&g, EdgeKind::State).is_empty());
    assert_eq!(g.nodes[4].facts.state_reads, BTreeSet::from(["prize".to_string()]));
}

#[test]
fn lottery_contexts() {
    let g = graph_of(LOTTERY);
    let summary: Vec<_> = g
        .contexts
        .iter()
        .map(|c| (c.name.as_str(), c.visibility, c.payable, c.access_guard, c.entry))
        .collect();
    assert_eq!(
        summary,
        [
            ("play", Visibility::Public, true, AccessGuard::None, Some(0)),
            ("receive", Visibility::External, true, AccessGuard::None, None),
        ]
    );
    assert!(g.nodes.iter().all(|n| n.context_id == 0));
}

#[test]
fn empty_contract() {
    let g = graph_of("contract A {}");
    assert!(g.nodes.is_empty());
    assert!(g.edges.is_empty());
    assert!(g.contexts.is_empty());
}

#[test]
fn one_state_edge_between_functions() {
    let g = graph_of(
        "contract S { uint s; function f(uint x) public { s = x; } function g() public view returns (uint) { return s; } }",
    );
    assert_eq!(g.nodes.len(), 2);
    assert_eq!(edges(&g, EdgeKind::State), [(0, 1)]);
    assert_eq!(g.nodes[0].context_id, 0);
    assert_eq!(g.nodes[1].context_id, 1);
}

#[test]
fn locals_shadow_state_vars() {
    let g = graph_of(
        "contract S { uint s; function f() public { uint s = 1; s += 2; } function g() public { s = 3; } }",
    );
    assert!(edges(&g, EdgeKind::State).is_empty());
    assert_eq!(edges(&g, EdgeKind::Data), [(0, 1)]);
}

#[test]
fn access_guards() {
    let g = graph_of(
        r#"contract G {
            address owner;
            mapping(address => bool) admins;
            modifier onlyOwner() { require(msg.sender == owner); _; }
            modifier ownerCheck() { require(owner == msg.sender); _; }
            function a() public onlyOwner { }
            function b() external ownerCheck { }
            function c() public onlyMinter { }
            function d() public { require(msg.sender == owner); }
            function e() public { require(admins[msg.sender]); }
            function f() private { }
            function h() public { uint x = 1; require(msg.sender == owner); }
        }"#,
    );
    let guard = |name: &str| {
        g.contexts
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.access_guard)
            .unwrap()
    };
    assert_eq!(guard("a"), AccessGuard::OwnerOnly);
    assert_eq!(guard("b"), AccessGuard::OwnerOnly);
    assert_eq!(guard("c"), AccessGuard::RoleGuarded);
    assert_eq!(guard("d"), AccessGuard::OwnerOnly);
    assert_eq!(guard("e"), AccessGuard::RoleGuarded);
    assert_eq!(guard("f"), AccessGuard::None);
    // Only the prologue counts.
    assert_eq!(guard("h"), AccessGuard::None);
    let f = g.contexts.iter().find(|c| c.name == "f").unwrap();
    assert_eq!(f.visibility, Visibility::Private);
    assert_eq!(g.contexts[0].kind, ContextKind::Modifier);
}

#[test]
fn extract_contexts_rejects_non_contract() {
    let root = parse_source("contract A {}", "t.sol").unwrap();
    assert!(matches!(
        extract_contexts(&root),
        Err(GraphError::NotAContract(_))
    ));
    assert!(extract_contexts(&root.children[0]).unwrap().is_empty());
}

const LOOPS: &str = r#"contract L {
    uint total;
    function f(uint n) public {
        for (uint i = 0; i < n; i++) { total += i; }
        while (n > 10) { }
        if (n == 0) { return; } else { n = 1; }
        total = n;
    }
}"#;

#[test]
fn loop_lowering() {
    let g = graph_of(LOOPS);
    let header = node(&g, "for (");
    let init = node(&g, "uint i = 0");
    let update = node(&g, "i++");
    let body = node(&g, "total += i");
    assert!(header < init && init < update && update < body);
    let flow = edges(&g, EdgeKind::Flow);
    for pair in [(init, header), (header, body), (body, update), (update, header)] {
        assert!(flow.contains(&pair), "{pair:?}");
    }
    let ctrl = edges(&g, EdgeKind::Control);
    assert!(ctrl.contains(&(header, body)) && ctrl.contains(&(header, update)));
    // Empty while body: the header loops on itself.
    let w = node(&g, "while (n > 10)");
    assert!(flow.contains(&(w, w)));
    assert!(flow.contains(&(header, w)));
    // The return branch has no fall-through.
    let ret = node(&g, "return;");
    let last = node(&g, "total = n");
    assert!(!flow.iter().any(|&(s, _)| s == ret));
    assert!(flow.contains(&(node(&g, "n = 1"), last)));
}

#[test]
fn unsupported_statement_kind() {
    let mut root = parse_source("contract A { function f() public { x = 1; } }", "t.sol").unwrap();
    let func = &mut root.children[0].children[0];
    func.children[0] = func.children[0].children[1].clone();
    assert!(matches!(
        build_semantic_graph(&root.children[0]),
        Err(GraphError::UnsupportedNode { .. })
    ));
}

/// Flow edges alone: every context has one entry from which all of its
/// nodes are reachable, and no Flow edge leaves its context.
fn check_cfg(g: &SemanticGraph) {
    let flow = edges(g, EdgeKind::Flow);
    for (s, d) in &flow {
        assert_eq!(g.nodes[*s].context_id, g.nodes[*d].context_id);
    }
    for ctx in &g.contexts {
        let members: Vec<usize> = g
            .nodes
            .iter()
            .filter(|n| n.context_id == ctx.id)
            .map(|n| n.id)
            .collect();
        let Some(entry) = ctx.entry else {
            assert!(members.is_empty());
            continue;
        };
        // A leading do-while gives the entry a back edge, so it may have predecessors.
        let roots: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&m| !flow.iter().any(|&(s, d)| d == m && s != m))
            .collect();
        assert!(roots.iter().all(|&r| r == entry), "context {}", ctx.name);
        let mut seen = BTreeSet::from([entry]);
        let mut queue = VecDeque::from([entry]);
        while let Some(v) = queue.pop_front() {
            for &(s, d) in &flow {
                if s == v && seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), members);
    }
}

#[test]
fn control_flow_graphs_have_unique_entries() {
    check_cfg(&graph_of(LOTTERY));
    check_cfg(&graph_of(LOOPS));
    check_cfg(&graph_of(
        r#"contract M {
            address owner;
            modifier onlyOwner() { require(msg.sender == owner); _; }
            function f(uint a) public onlyOwner { do { a--; } while (a > 0); owner = msg.sender; }
        }"#,
    ));
    let g = graph_of("contract F { function f(uint n) public { for (uint i = 0; i < n; i++) { } } }");
    assert_eq!(g.contexts[0].entry, Some(node(&g, "uint i = 0")));
    check_cfg(&g);
}

/// Independent def-use check at the token level: every Data edge inside a
/// context links a statement that declares or assigns `v` to one that
/// mentions `v`, and every such pair has an edge.
fn check_def_use(src: &str) {
    let g = graph_of(src);
    let tokens = |n: &GraphNode| -> Vec<String> {
        tokenize(&n.snippet, "s.sol")
            .unwrap()
            .into_iter()
            .map(|t| t.text)
            .collect()
    };
    let defines = |n: &GraphNode| -> Option<String> {
        let t = tokens(n);
        match n.kind {
            GraphNodeKind::VarDecl => t.get(1).cloned(),
            GraphNodeKind::Assign if t.len() > 1 && t[1].ends_with('=') => Some(t[0].clone()),
            GraphNodeKind::Assign if t.len() > 1 && (t[1] == "++" || t[1] == "--") => {
                Some(t[0].clone())
            }
            _ => None,
        }
    };
    let reads = |n: &GraphNode| -> Vec<String> {
        let t = tokens(n);
        let start = match n.kind {
            GraphNodeKind::VarDecl => 2,
            GraphNodeKind::Assign if t.get(1).map(String::as_str) == Some("=") => 1,
            _ => 0,
        };
        t[start.min(t.len())..].to_vec()
    };
    let locals: BTreeSet<String> = g
        .nodes
        .iter()
        .filter_map(&defines)
        .filter(|v| !g.is_state_var(v))
        .collect();
    let mut expected = BTreeSet::new();
    for d in &g.nodes {
        let Some(v) = defines(d) else { continue };
        if !locals.contains(&v) {
            continue;
        }
        for u in &g.nodes {
            if u.id != d.id && u.context_id == d.context_id && reads(u).contains(&v) {
                expected.insert((d.id, u.id));
            }
        }
    }
    let actual: BTreeSet<(usize, usize)> = edges(&g, EdgeKind::Data).into_iter().collect();
    assert_eq!(actual, expected, "{src}");
}

#[test]
fn data_edges_match_token_level_def_use() {
    check_def_use(LOTTERY);
    check_def_use(
        r#"contract D {
            uint s;
            function f(uint a) public {
                uint x = a + 1;
                uint y = x * 2;
                x = y + s;
                if (x > y) { s = x; }
                y++;
            }
            function g() public { uint x = 3; s = x; }
        }"#,
    );
}

#[test]
fn internal_call_edges() {
    let g = graph_of(
        r#"contract C {
            function rand(uint seed) internal returns (uint) { return seed % 7; }
            function play() public { uint r = rand(block.timestamp); }
        }"#,
    );
    let ret = node(&g, "return seed % 7");
    let site = node(&g, "uint r = rand");
    let data = edges(&g, EdgeKind::Data);
    assert!(data.contains(&(site, ret)));
    assert!(data.contains(&(ret, site)));
}

#[test]
fn deterministic_build() {
    assert_eq!(graph_of(LOOPS), graph_of(LOOPS));
}
