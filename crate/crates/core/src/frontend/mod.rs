// SPDX-License-Identifier: Apache-2.0

//! Lexer, parser and syntax tree for the supported Solidity subset.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod span;

use thiserror::Error;

pub use ast::{AstKind, AstNode, FunctionKind, LoopKind, TransferMethod, Visibility};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;
pub use span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("{span}: lex error: {message}")]
    Lex { span: SourceSpan, message: String },
    #[error("{span}: parse error: expected one of [{}], found `{found}`", expected.join(", "))]
    Parse {
        span: SourceSpan,
        expected: Vec<String>,
        found: String,
    },
    #[error("{span}: unsupported feature: {feature}")]
    Unsupported { span: SourceSpan, feature: String },
}

impl FrontendError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            FrontendError::Lex { span, .. }
            | FrontendError::Parse { span, .. }
            | FrontendError::Unsupported { span, .. } => span,
        }
    }
}

/// Tokenizes and parses `source` in one step.
pub fn parse_source(source: &str, file: &str) -> Result<AstNode, FrontendError> {
    let tokens = tokenize(source, file)?;
    parse_with_file(&tokens, source, file)
}

fn parse_with_file(tokens: &[Token], source: &str, file: &str) -> Result<AstNode, FrontendError> {
    let mut root = parse(tokens, source)?;
    // `parse` takes the file name from the first token; an empty token stream has none.
    if tokens.is_empty() {
        root.span.file = file.into();
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const LOTTERY: &str = include_str!("../../tests/fixtures/lottery.sol");

    fn only_contract(src: &str) -> AstNode {
        let root = parse_source(src, "t.sol").unwrap();
        assert_eq!(root.kind, AstKind::SourceUnit);
        assert_eq!(root.children.len(), 1);
        root.children.into_iter().next().unwrap()
    }

    #[test]
    fn lottery_contract_shape() {
        let c = only_contract(LOTTERY);
        assert_eq!(c.name(), Some("VulnerableLottery"));
        let state: Vec<_> = c
            .children
            .iter()
            .filter(|n| matches!(n.kind, AstKind::StateVar { .. }))
            .collect();
        assert_eq!(state.len(), 1);
        let funcs: Vec<_> = c
            .children
            .iter()
            .filter_map(|n| match &n.kind {
                AstKind::Function {
                    name,
                    visibility,
                    payable,
                    ..
                } => Some((name.as_str(), *visibility, *payable)),
                _ => None,
            })
            .collect();
        assert_eq!(
            funcs,
            [
                ("play", Visibility::Public, true),
                ("receive", Visibility::External, true)
            ]
        );
    }

    #[test]
    fn lottery_statements() {
        let c = only_contract(LOTTERY);
        let play = &c.children[1];
        let labels: Vec<_> = play.children.iter().map(|s| s.kind.label()).collect();
        assert_eq!(labels, ["Require", "LocalVar", "LocalVar", "If"]);
        let iff = &play.children[3];
        assert_eq!(iff.children.len(), 2);
        let transfer = &iff.children[1].children[0];
        assert_eq!(
            transfer.kind,
            AstKind::Transfer {
                method: TransferMethod::Transfer
            }
        );
        assert_eq!(transfer.span.line, 7);
        assert_eq!(transfer.text, "payable(msg.sender).transfer(prize)");
    }

    #[test]
    fn empty_contract() {
        let c = only_contract("contract A {}");
        assert_eq!(c.name(), Some("A"));
        assert!(c.children.is_empty());
    }

    #[test]
    fn empty_source_unit() {
        let root = parse_source("", "e.sol").unwrap();
        assert!(root.children.is_empty());
        assert_eq!(&*root.span.file, "e.sol");
    }

    #[test]
    fn pragma_is_skipped() {
        let c = only_contract("pragma solidity ^0.8.0;\ncontract A { uint x; }");
        assert_eq!(c.children.len(), 1);
    }

    #[test]
    fn unsupported_constructs() {
        for src in [
            "contract A { assembly {} }",
            "contract A is B {}",
            "library L {}",
            "interface I {}",
            "contract A { function f() public { assembly { } } }",
            "contract A { function f() public { try x.f() {} catch {} } }",
            "contract A { function f() public { new B(); } }",
            "contract A { struct S { uint a; } }",
        ] {
            let err = parse_source(src, "t.sol").unwrap_err();
            assert!(
                matches!(err, FrontendError::Unsupported { .. }),
                "{src}: {err:?}"
            );
        }
    }

    #[test]
    fn parse_errors_carry_expected_set() {
        let err = parse_source("contract A { uint x }", "t.sol").unwrap_err();
        match err {
            FrontendError::Parse {
                expected, found, ..
            } => {
                assert!(expected.contains(&";".to_string()));
                assert_eq!(found, "}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_source("contract A { function f() public { x + 1; } }", "t.sol"),
            Err(FrontendError::Parse { .. })
        ));
    }

    #[test]
    fn arities() {
        let c = only_contract(
            "contract A { uint s; function f(uint a) public { if (a > 1) s = a; else { s = 2; } s += a % 3; } }",
        );
        let mut checked = 0;
        c.walk(&mut |n| match n.kind {
            AstKind::If => {
                assert!((2..=3).contains(&n.children.len()));
                checked += 1;
            }
            AstKind::Assign { .. } => {
                assert_eq!(n.children.len(), 2);
                checked += 1;
            }
            _ => {}
        });
        assert_eq!(checked, 4);
    }

    #[test]
    fn expressions() {
        let c = only_contract(
            "contract A { function f() public returns (uint) { return a + b * c ** d ** e - -f; } }",
        );
        let ret = &c.children[0].children[0];
        assert_eq!(ret.children[0].kind, AstKind::BinaryOp { op: "-".into() });
        let plus = &ret.children[0].children[0];
        assert_eq!(plus.kind, AstKind::BinaryOp { op: "+".into() });
        let pow = &plus.children[1].children[1];
        assert_eq!(pow.text, "c ** d ** e");
        assert_eq!(pow.children[1].text, "d ** e");
    }

    #[test]
    fn mappings_and_indexes() {
        let c = only_contract(
            "contract A { mapping(address => uint256) public bal; function f() public { bal[msg.sender] += 1; } }",
        );
        match &c.children[0].kind {
            AstKind::StateVar { type_name, .. } => {
                assert_eq!(type_name, "mapping(address => uint256)")
            }
            other => panic!("{other:?}"),
        }
        let assign = &c.children[1].children[0];
        assert_eq!(assign.children[0].kind, AstKind::Index);
    }

    #[test]
    fn transfer_variants() {
        let c = only_contract(
            r#"contract A {
                function f(address payable to) external {
                    to.send(1 wei);
                    to.call{value: address(this).balance}("");
                    token.transfer(to, 5);
                    require(x > 0, "msg");
                }
            }"#,
        );
        let body = &c.children[0].children;
        assert_eq!(
            body[0].kind,
            AstKind::Transfer {
                method: TransferMethod::Send
            }
        );
        assert_eq!(body[0].children[1].kind, AstKind::Literal { value: "1 wei".into() });
        assert_eq!(
            body[1].kind,
            AstKind::Transfer {
                method: TransferMethod::CallValue
            }
        );
        assert_eq!(body[1].children[1].text, "address(this).balance");
        assert_eq!(
            body[2].kind,
            AstKind::Call {
                callee: "token.transfer".into()
            }
        );
        assert_eq!(body[3].kind, AstKind::Require { callee: "require".into() });
        assert_eq!(body[3].children.len(), 2);
    }

    #[test]
    fn loops_and_modifiers() {
        let c = only_contract(
            r#"contract A {
                address owner;
                modifier onlyOwner() { require(msg.sender == owner); _; }
                function f(uint n) public onlyOwner {
                    for (uint i = 0; i < n; i++) { total += i; }
                    while (n > 0) n--;
                }
            }"#,
        );
        let m = &c.children[1];
        assert!(matches!(m.kind, AstKind::Modifier { .. }));
        assert_eq!(m.children[1].kind, AstKind::Placeholder);
        let f = &c.children[2];
        match &f.kind {
            AstKind::Function { modifiers, params, .. } => {
                assert_eq!(modifiers, &["onlyOwner"]);
                assert_eq!(params, &["n"]);
            }
            _ => unreachable!(),
        }
        let for_loop = &f.children[0];
        assert_eq!(for_loop.children.len(), 4);
        assert_eq!(for_loop.children[0].kind.label(), "LocalVar");
        let while_loop = &f.children[1];
        assert_eq!(while_loop.children[1].kind, AstKind::Block);
    }

    fn check_spans(n: &AstNode) {
        for c in &n.children {
            assert!(n.span.contains(&c.span), "{} !⊇ {}", n.text, c.text);
            check_spans(c);
        }
    }

    #[test]
    fn spans_nest() {
        let root = parse_source(LOTTERY, "l.sol").unwrap();
        check_spans(&root);
        root.walk(&mut |n| assert_eq!(&LOTTERY[n.span.offset..n.span.end()], n.text));
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            parse_source(LOTTERY, "l.sol").unwrap(),
            parse_source(LOTTERY, "l.sol").unwrap()
        );
    }

    #[test]
    fn ast_json_round_trip() {
        let root = parse_source(LOTTERY, "l.sol").unwrap();
        let json = serde_json::to_string(&root).unwrap();
        let back: AstNode = serde_json::from_str(&json).unwrap();
        assert_eq!(root, back);
    }

    proptest! {
        // Re-lexing the space-joined token texts yields the same token texts.
        #[test]
        fn relex_is_stable(picks in proptest::collection::vec(0usize..12, 0..40)) {
            const WORDS: &[&str] = &[
                "uint", "seed", "=", "block.timestamp", ";", "%", "2", "keccak256(x)",
                "if (a >= b + 15 minutes) {}", "\"s\"", "x += 0x1f;", "// c\n",
            ];
            let src: String = picks.iter().map(|&i| WORDS[i]).collect::<Vec<_>>().join(" ");
            let first: Vec<String> = tokenize(&src, "p.sol").unwrap().into_iter().map(|t| t.text).collect();
            let rejoined = first.join(" ");
            let second: Vec<String> = tokenize(&rejoined, "p.sol").unwrap().into_iter().map(|t| t.text).collect();
            prop_assert_eq!(first, second);
        }

        #[test]
        fn parse_never_panics(src in "[a-z(){};=%+. 0-9]{0,60}") {
            let _ = parse_source(&src, "p.sol");
        }
    }
}
