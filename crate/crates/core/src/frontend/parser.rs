// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser for the supported Solidity subset.

use std::sync::Arc;

use super::ast::{AstKind, AstNode, FunctionKind, LoopKind, TransferMethod, Visibility};
use super::lexer::{Token, TokenKind};
use super::span::SourceSpan;
use super::FrontendError;

const UNITS: &[&str] = &[
    "wei", "gwei", "szabo", "finney", "ether", "seconds", "minutes", "hours", "days", "weeks",
    "years",
];

const ASSIGN_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<=", ">>=",
];

fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "==" | "!=" => 3,
        "<" | ">" | "<=" | ">=" => 4,
        "|" => 5,
        "^" => 6,
        "&" => 7,
        "<<" | ">>" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        "**" => 11,
        _ => return None,
    })
}

pub(crate) fn is_elementary_type(word: &str) -> bool {
    let sized = |prefix: &str| {
        word.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    };
    matches!(
        word,
        "uint" | "int" | "address" | "bool" | "string" | "bytes" | "byte" | "mapping"
    ) || sized("uint")
        || sized("int")
        || sized("bytes")
}

/// Parses a token stream into a `SourceUnit` whose children are contracts.
pub fn parse(tokens: &[Token], source: &str) -> Result<AstNode, FrontendError> {
    let file: Arc<str> = tokens
        .first()
        .map(|t| t.span.file.clone())
        .unwrap_or_else(|| Arc::from(""));
    let mut p = Parser {
        tokens,
        pos: 0,
        source,
        file,
    };
    p.source_unit()
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    source: &'a str,
    file: Arc<str>,
}

type PResult<T> = Result<T, FrontendError>;

impl<'a> Parser<'a> {
    // ---- token helpers -------------------------------------------------

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + n)
    }

    fn at(&self, text: &str) -> bool {
        self.peek().is_some_and(|t| t.is(text))
    }

    fn at_n(&self, n: usize, text: &str) -> bool {
        self.peek_at(n).is_some_and(|t| t.is(text))
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn next(&mut self) -> PResult<&'a Token> {
        let tok = self.peek().ok_or_else(|| self.error(&["<token>"]))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, text: &str) -> PResult<&'a Token> {
        if self.at(text) {
            self.next()
        } else {
            Err(self.error(&[text]))
        }
    }

    fn ident(&mut self) -> PResult<&'a Token> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => self.next(),
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn eof_span(&self) -> SourceSpan {
        match self.tokens.last() {
            Some(t) => SourceSpan::new(
                self.file.clone(),
                t.span.line,
                t.span.column + t.span.length,
                t.span.end(),
                0,
            ),
            None => SourceSpan::new(self.file.clone(), 1, 1, 0, 0),
        }
    }

    fn error(&self, expected: &[&str]) -> FrontendError {
        let (span, found) = match self.peek() {
            Some(t) => (t.span.clone(), t.text.clone()),
            None => (self.eof_span(), "end of input".to_string()),
        };
        FrontendError::Parse {
            span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn unsupported(&self, feature: &str) -> FrontendError {
        FrontendError::Unsupported {
            span: self.peek().map(|t| t.span.clone()).unwrap_or_else(|| self.eof_span()),
            feature: feature.to_string(),
        }
    }

    fn node(&self, kind: AstKind, start: &SourceSpan, children: Vec<AstNode>) -> AstNode {
        let end = &self.tokens[self.pos - 1].span;
        let span = start.to(end);
        AstNode {
            kind,
            text: self.source[span.offset..span.end()].to_string(),
            span,
            children,
        }
    }

    fn start(&self) -> PResult<SourceSpan> {
        self.peek()
            .map(|t| t.span.clone())
            .ok_or_else(|| self.error(&["<token>"]))
    }

    // ---- declarations -------------------------------------------------

    fn source_unit(&mut self) -> PResult<AstNode> {
        let mut contracts = Vec::new();
        while let Some(tok) = self.peek() {
            match tok.text.as_str() {
                "pragma" => {
                    while !self.eat(";") {
                        self.next()?;
                    }
                }
                "contract" => contracts.push(self.contract()?),
                "abstract" | "interface" | "library" | "import" | "using" | "struct" | "enum"
                | "error" | "function" | "type" | "event" => {
                    return Err(self.unsupported(&format!("top-level `{}`", tok.text)))
                }
                _ => return Err(self.error(&["contract", "pragma"])),
            }
        }
        let span = SourceSpan::new(self.file.clone(), 1, 1, 0, self.source.len());
        Ok(AstNode {
            kind: AstKind::SourceUnit,
            text: self.source.to_string(),
            span,
            children: contracts,
        })
    }

    fn contract(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        self.expect("contract")?;
        let name = self.ident()?.text.clone();
        if self.at("is") {
            return Err(self.unsupported("inheritance"));
        }
        self.expect("{")?;
        let mut members = Vec::new();
        loop {
            let Some(tok) = self.peek() else {
                return Err(self.error(&["}"]));
            };
            match tok.text.as_str() {
                "}" => break,
                "function" | "constructor" | "receive" | "fallback" => {
                    members.push(self.function()?)
                }
                "modifier" => members.push(self.modifier()?),
                "event" => members.push(self.event()?),
                "assembly" => return Err(self.unsupported("inline assembly")),
                "struct" | "enum" | "using" | "error" | "type" | "contract" | "library"
                | "interface" => {
                    return Err(self.unsupported(&format!("`{}` declaration", tok.text)))
                }
                t if is_elementary_type(t) => members.push(self.state_var()?),
                _ => {
                    return Err(self.error(&[
                        "function",
                        "modifier",
                        "event",
                        "state variable",
                        "}",
                    ]))
                }
            }
        }
        self.expect("}")?;
        Ok(self.node(AstKind::Contract { name }, &start, members))
    }

    fn type_name(&mut self) -> PResult<String> {
        let tok = self.ident()?;
        let mut out = tok.text.clone();
        if tok.text == "mapping" {
            self.expect("(")?;
            let key = self.type_name()?;
            if !self.at("=>") {
                self.ident()?;
            }
            self.expect("=>")?;
            let value = self.type_name()?;
            if !self.at(")") {
                self.ident()?;
            }
            self.expect(")")?;
            out = format!("mapping({key} => {value})");
        } else if !is_elementary_type(&tok.text) {
            self.pos -= 1;
            return Err(self.unsupported("user-defined type"));
        } else if tok.text == "address" && self.eat("payable") {
            out.push_str(" payable");
        }
        while self.at("[") {
            self.next()?;
            out.push('[');
            if !self.at("]") {
                let n = self.next()?;
                if n.kind != TokenKind::Number {
                    self.pos -= 1;
                    return Err(self.error(&["array length", "]"]));
                }
                out.push_str(&n.text);
            }
            self.expect("]")?;
            out.push(']');
        }
        Ok(out)
    }

    fn state_var(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let type_name = self.type_name()?;
        let mut constant = false;
        loop {
            match self.peek().map(|t| t.text.as_str()) {
                Some("public" | "private" | "internal" | "override") => self.pos += 1,
                Some("constant" | "immutable") => {
                    constant = true;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let name = self.ident()?.text.clone();
        let mut children = Vec::new();
        if self.eat("=") {
            children.push(self.expression()?);
        }
        self.expect(";")?;
        Ok(self.node(
            AstKind::StateVar {
                name,
                type_name,
                constant,
            },
            &start,
            children,
        ))
    }

    fn event(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        self.expect("event")?;
        let name = self.ident()?.text.clone();
        self.expect("(")?;
        let mut depth = 1usize;
        while depth > 0 {
            let t = self.next()?;
            if t.is("(") {
                depth += 1;
            } else if t.is(")") {
                depth -= 1;
            }
        }
        self.eat("anonymous");
        self.expect(";")?;
        Ok(self.node(AstKind::Event { name }, &start, Vec::new()))
    }

    /// Parameter list between parentheses; returns the declared names.
    fn params(&mut self) -> PResult<Vec<String>> {
        self.expect("(")?;
        let mut names = Vec::new();
        while !self.at(")") {
            self.type_name()?;
            while matches!(
                self.peek().map(|t| t.text.as_str()),
                Some("memory" | "storage" | "calldata" | "indexed")
            ) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|t| t.kind == TokenKind::Ident) {
                names.push(self.next()?.text.clone());
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(names)
    }

    fn function(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let head = self.next()?;
        let (name, function_kind) = match head.text.as_str() {
            "function" => {
                if self.at("(") {
                    ("fallback".to_string(), FunctionKind::Fallback)
                } else {
                    (self.ident()?.text.clone(), FunctionKind::Function)
                }
            }
            "constructor" => ("constructor".to_string(), FunctionKind::Constructor),
            "receive" => ("receive".to_string(), FunctionKind::Receive),
            _ => ("fallback".to_string(), FunctionKind::Fallback),
        };
        let params = self.params()?;
        let mut visibility = None;
        let mut payable = false;
        let mut modifiers = Vec::new();
        loop {
            let Some(tok) = self.peek() else {
                return Err(self.error(&["{", ";"]));
            };
            match tok.text.as_str() {
                "{" | ";" => break,
                "public" => visibility = Some(Visibility::Public),
                "external" => visibility = Some(Visibility::External),
                "internal" => visibility = Some(Visibility::Internal),
                "private" => visibility = Some(Visibility::Private),
                "payable" => payable = true,
                "view" | "pure" | "virtual" | "nonpayable" => {}
                "override" => {
                    if self.at_n(1, "(") {
                        self.pos += 1;
                        while !self.at(")") {
                            self.next()?;
                        }
                    }
                }
                "returns" => {
                    self.pos += 1;
                    self.params()?;
                    continue;
                }
                _ if tok.kind == TokenKind::Ident => {
                    modifiers.push(tok.text.clone());
                    if self.at_n(1, "(") {
                        self.pos += 1;
                        self.call_args()?;
                        continue;
                    }
                }
                _ => return Err(self.error(&["function attribute", "{", ";"])),
            }
            self.pos += 1;
        }
        let body = if self.eat(";") {
            Vec::new()
        } else {
            self.block_statements()?
        };
        let visibility = visibility.unwrap_or(match function_kind {
            FunctionKind::Receive | FunctionKind::Fallback => Visibility::External,
            _ => Visibility::Public,
        });
        Ok(self.node(
            AstKind::Function {
                name,
                function_kind,
                visibility,
                payable,
                modifiers,
                params,
            },
            &start,
            body,
        ))
    }

    fn modifier(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        self.expect("modifier")?;
        let name = self.ident()?.text.clone();
        let params = if self.at("(") {
            self.params()?
        } else {
            Vec::new()
        };
        while self.eat("virtual") || self.eat("override") {}
        let body = self.block_statements()?;
        Ok(self.node(AstKind::Modifier { name, params }, &start, body))
    }

    // ---- statements ---------------------------------------------------

    fn block_statements(&mut self) -> PResult<Vec<AstNode>> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.at("}") {
            if self.peek().is_none() {
                return Err(self.error(&["}"]));
            }
            stmts.push(self.statement()?);
        }
        self.expect("}")?;
        Ok(stmts)
    }

    fn block(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let stmts = self.block_statements()?;
        Ok(self.node(AstKind::Block, &start, stmts))
    }

    /// A statement in branch position, wrapped into a `Block` if needed.
    fn branch(&mut self) -> PResult<AstNode> {
        if self.at("{") {
            return self.block();
        }
        let stmt = self.statement()?;
        Ok(AstNode {
            kind: AstKind::Block,
            span: stmt.span.clone(),
            text: stmt.text.clone(),
            children: vec![stmt],
        })
    }

    fn statement(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let tok = self.peek().expect("checked by start");
        match tok.text.as_str() {
            "{" => self.block(),
            "unchecked" if self.at_n(1, "{") => {
                self.pos += 1;
                let stmts = self.block_statements()?;
                Ok(self.node(AstKind::Block, &start, stmts))
            }
            "if" => {
                self.pos += 1;
                self.expect("(")?;
                let cond = self.expression()?;
                self.expect(")")?;
                let mut children = vec![cond, self.branch()?];
                if self.eat("else") {
                    children.push(self.branch()?);
                }
                Ok(self.node(AstKind::If, &start, children))
            }
            "while" => {
                self.pos += 1;
                self.expect("(")?;
                let cond = self.expression()?;
                self.expect(")")?;
                let body = self.branch()?;
                Ok(self.node(
                    AstKind::Loop {
                        loop_kind: LoopKind::While,
                        has_init: false,
                        has_cond: true,
                        has_update: false,
                    },
                    &start,
                    vec![cond, body],
                ))
            }
            "do" => {
                self.pos += 1;
                let body = self.branch()?;
                self.expect("while")?;
                self.expect("(")?;
                let cond = self.expression()?;
                self.expect(")")?;
                self.expect(";")?;
                Ok(self.node(
                    AstKind::Loop {
                        loop_kind: LoopKind::DoWhile,
                        has_init: false,
                        has_cond: true,
                        has_update: false,
                    },
                    &start,
                    vec![cond, body],
                ))
            }
            "for" => self.for_loop(start),
            "return" => {
                self.pos += 1;
                let mut children = Vec::new();
                if !self.at(";") {
                    children.push(self.expression()?);
                }
                self.expect(";")?;
                Ok(self.node(AstKind::Return, &start, children))
            }
            "emit" => {
                self.pos += 1;
                let event = self.ident()?.text.clone();
                let args = self.call_args()?;
                self.expect(";")?;
                Ok(self.node(AstKind::Emit { event }, &start, args))
            }
            "_" if self.at_n(1, ";") => {
                self.pos += 2;
                Ok(self.node(AstKind::Placeholder, &start, Vec::new()))
            }
            "assembly" => Err(self.unsupported("inline assembly")),
            "try" => Err(self.unsupported("try/catch")),
            "break" | "continue" => Err(self.unsupported(&format!("`{}`", tok.text))),
            t if is_elementary_type(t) && self.starts_declaration() => self.local_var(start),
            _ => {
                let expr = self.expression()?;
                self.expect(";")?;
                if !expr.kind.is_statement() || matches!(expr.kind, AstKind::Block) {
                    return Err(FrontendError::Parse {
                        span: expr.span.clone(),
                        expected: vec!["statement".into()],
                        found: expr.text,
                    });
                }
                Ok(expr)
            }
        }
    }

    /// Distinguishes `uint x = ...` from `uint(x)` / `address(this).balance`.
    fn starts_declaration(&self) -> bool {
        !(self.at_n(1, "(") && !self.at("mapping")) && !self.at_n(1, ".")
    }

    fn local_var(&mut self, start: SourceSpan) -> PResult<AstNode> {
        let type_name = self.type_name()?;
        while matches!(
            self.peek().map(|t| t.text.as_str()),
            Some("memory" | "storage" | "calldata")
        ) {
            self.pos += 1;
        }
        let name = self.ident()?.text.clone();
        let mut children = Vec::new();
        if self.eat("=") {
            children.push(self.expression()?);
        }
        self.expect(";")?;
        Ok(self.node(AstKind::LocalVar { name, type_name }, &start, children))
    }

    fn for_loop(&mut self, start: SourceSpan) -> PResult<AstNode> {
        self.expect("for")?;
        self.expect("(")?;
        let mut children = Vec::new();
        let has_init = !self.eat(";");
        if has_init {
            children.push(self.statement()?);
        }
        let has_cond = !self.at(";");
        if has_cond {
            children.push(self.expression()?);
        }
        self.expect(";")?;
        let has_update = !self.at(")");
        if has_update {
            children.push(self.expression()?);
        }
        self.expect(")")?;
        children.push(self.branch()?);
        Ok(self.node(
            AstKind::Loop {
                loop_kind: LoopKind::For,
                has_init,
                has_cond,
                has_update,
            },
            &start,
            children,
        ))
    }

    // ---- expressions --------------------------------------------------

    fn expression(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let lhs = self.conditional()?;
        if let Some(tok) = self.peek() {
            if tok.kind == TokenKind::Punct && ASSIGN_OPS.contains(&tok.text.as_str()) {
                let op = tok.text.clone();
                self.pos += 1;
                let rhs = self.expression()?;
                return Ok(self.node(AstKind::Assign { op }, &start, vec![lhs, rhs]));
            }
        }
        Ok(lhs)
    }

    fn conditional(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let cond = self.binary(1)?;
        if self.eat("?") {
            let a = self.expression()?;
            self.expect(":")?;
            let b = self.expression()?;
            return Ok(self.node(AstKind::Conditional, &start, vec![cond, a, b]));
        }
        Ok(cond)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<AstNode> {
        let start = self.start()?;
        let mut lhs = self.unary()?;
        while let Some(tok) = self.peek() {
            if tok.kind != TokenKind::Punct {
                break;
            }
            let Some(prec) = binary_precedence(&tok.text) else {
                break;
            };
            if prec < min_prec {
                break;
            }
            let op = tok.text.clone();
            self.pos += 1;
            // `**` is right-associative.
            let next_min = if op == "**" { prec } else { prec + 1 };
            let rhs = self.binary(next_min)?;
            lhs = self.node(AstKind::BinaryOp { op }, &start, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let tok = self.peek().expect("checked by start");
        if matches!(tok.text.as_str(), "!" | "-" | "~" | "++" | "--" | "delete")
            && tok.kind != TokenKind::Str
        {
            let op = tok.text.clone();
            self.pos += 1;
            let operand = self.unary()?;
            return Ok(self.node(AstKind::UnaryOp { op, prefix: true }, &start, vec![operand]));
        }
        self.postfix()
    }

    fn call_args(&mut self) -> PResult<Vec<AstNode>> {
        self.expect("(")?;
        if self.at("{") {
            return Err(self.unsupported("named call arguments"));
        }
        let mut args = Vec::new();
        while !self.at(")") {
            args.push(self.expression()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn postfix(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let mut expr = self.primary()?;
        loop {
            if self.eat(".") {
                let member = self.ident()?.text.clone();
                expr = self.node(AstKind::MemberAccess { member }, &start, vec![expr]);
            } else if self.eat("[") {
                let index = self.expression()?;
                self.expect("]")?;
                expr = self.node(AstKind::Index, &start, vec![expr, index]);
            } else if self.at("(") {
                let args = self.call_args()?;
                expr = self.finish_call(expr, args, None, &start)?;
            } else if self.at("{")
                && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Ident)
                && self.at_n(2, ":")
            {
                self.pos += 1;
                let mut value = None;
                while !self.at("}") {
                    let key = self.ident()?.text.clone();
                    self.expect(":")?;
                    let v = self.expression()?;
                    if key == "value" {
                        value = Some(v);
                    }
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect("}")?;
                let args = self.call_args()?;
                expr = self.finish_call(expr, args, value, &start)?;
            } else if self.at("++") || self.at("--") {
                let op = self.next()?.text.clone();
                expr = self.node(AstKind::UnaryOp { op, prefix: false }, &start, vec![expr]);
            } else {
                break;
            }
        }
        Ok(expr)
    }

    fn finish_call(
        &mut self,
        callee: AstNode,
        args: Vec<AstNode>,
        value: Option<AstNode>,
        start: &SourceSpan,
    ) -> PResult<AstNode> {
        let path = callee.path();
        if let Some(value) = value {
            if let AstKind::MemberAccess { member } = &callee.kind {
                if member == "call" {
                    let target = callee.children.into_iter().next().expect("member base");
                    let mut children = vec![target, value];
                    children.extend(args);
                    return Ok(self.node(
                        AstKind::Transfer {
                            method: TransferMethod::CallValue,
                        },
                        start,
                        children,
                    ));
                }
            }
        }
        if let Some(name @ ("require" | "assert")) = path.as_deref() {
            if args.is_empty() {
                return Err(self.error(&["condition"]));
            }
            return Ok(self.node(
                AstKind::Require {
                    callee: name.to_string(),
                },
                start,
                args,
            ));
        }
        if let AstKind::MemberAccess { member } = &callee.kind {
            let method = match member.as_str() {
                "transfer" => Some(TransferMethod::Transfer),
                "send" => Some(TransferMethod::Send),
                _ => None,
            };
            if let (Some(method), 1) = (method, args.len()) {
                let target = callee.children.into_iter().next().expect("member base");
                let mut children = vec![target];
                children.extend(args);
                return Ok(self.node(AstKind::Transfer { method }, start, children));
            }
        }
        let name = path.unwrap_or_else(|| callee.text.clone());
        let mut children = vec![callee];
        children.extend(args);
        Ok(self.node(AstKind::Call { callee: name }, start, children))
    }

    fn primary(&mut self) -> PResult<AstNode> {
        let start = self.start()?;
        let tok = self.next()?;
        match tok.kind {
            TokenKind::Number => {
                let mut value = tok.text.clone();
                if let Some(unit) = self.peek().filter(|t| UNITS.contains(&t.text.as_str())) {
                    value = format!("{value} {}", unit.text);
                    self.pos += 1;
                }
                Ok(self.node(AstKind::Literal { value }, &start, Vec::new()))
            }
            TokenKind::Str => {
                while self.peek().is_some_and(|t| t.kind == TokenKind::Str) {
                    self.pos += 1;
                }
                let value = tok.text.clone();
                Ok(self.node(AstKind::Literal { value }, &start, Vec::new()))
            }
            TokenKind::Ident => match tok.text.as_str() {
                "true" | "false" => Ok(self.node(
                    AstKind::Literal {
                        value: tok.text.clone(),
                    },
                    &start,
                    Vec::new(),
                )),
                "new" => {
                    self.pos -= 1;
                    Err(self.unsupported("contract creation with `new`"))
                }
                "assembly" => {
                    self.pos -= 1;
                    Err(self.unsupported("inline assembly"))
                }
                "unicode" | "hex" if self.peek().is_some_and(|t| t.kind == TokenKind::Str) => {
                    self.pos += 1;
                    let value = self.tokens[self.pos - 1].text.clone();
                    Ok(self.node(AstKind::Literal { value }, &start, Vec::new()))
                }
                _ => Ok(self.node(
                    AstKind::Identifier {
                        name: tok.text.clone(),
                    },
                    &start,
                    Vec::new(),
                )),
            },
            TokenKind::Punct if tok.text == "(" => {
                if self.at(")") {
                    return Err(self.error(&["expression"]));
                }
                let inner = self.expression()?;
                if self.at(",") {
                    return Err(self.unsupported("tuple expression"));
                }
                self.expect(")")?;
                Ok(inner)
            }
            TokenKind::Punct if tok.text == "[" => {
                self.pos -= 1;
                Err(self.unsupported("inline array"))
            }
            _ => {
                self.pos -= 1;
                Err(self.error(&["expression"]))
            }
        }
    }
}
