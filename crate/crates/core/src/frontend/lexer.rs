// SPDX-License-Identifier: Apache-2.0

//! Tokenizer for the supported Solidity subset.
//!
//! Comments and whitespace are dropped. Anything outside printable ASCII that
//! is not inside a comment is rejected.

use std::sync::Arc;

use serde::Serialize;

use super::span::SourceSpan;
use super::FrontendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TokenKind {
    Ident,
    Number,
    Str,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        self.kind != TokenKind::Str && self.text == text
    }
}

// Longest first so maximal munch works with a linear scan.
const PUNCT: &[&str] = &[
    ">>=", "<<=", "**", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "|=", "&=", "^=", "<<", ">>", "=>", "{", "}", "(", ")", "[", "]", ";", ",", ".", "=",
    "<", ">", "+", "-", "*", "/", "%", "!", "~", "&", "|", "^", "?", ":",
];

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    file: Arc<str>,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: usize, line: usize, col: usize) -> SourceSpan {
        SourceSpan::new(self.file.clone(), line, col, start, self.pos - start)
    }
}

/// Splits `source` into tokens. `file` is recorded in every span.
pub fn tokenize(source: &str, file: &str) -> Result<Vec<Token>, FrontendError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
        file: Arc::from(file),
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let (start, line, col) = (cur.pos, cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek_at(1) == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek_at(1) == Some('*') {
            cur.bump();
            cur.bump();
            loop {
                match cur.peek() {
                    None => {
                        return Err(FrontendError::Lex {
                            span: cur.span_from(start, line, col),
                            message: "unterminated block comment".into(),
                        })
                    }
                    Some('*') if cur.peek_at(1) == Some('/') => {
                        cur.bump();
                        cur.bump();
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            continue;
        }

        let kind = if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '$')
            {
                cur.bump();
            }
            TokenKind::Ident
        } else if c.is_ascii_digit() {
            lex_number(&mut cur);
            TokenKind::Number
        } else if c == '"' || c == '\'' {
            lex_string(&mut cur, c, start, line, col)?;
            TokenKind::Str
        } else if let Some(p) = PUNCT.iter().find(|p| source[start..].starts_with(**p)) {
            for _ in 0..p.len() {
                cur.bump();
            }
            TokenKind::Punct
        } else {
            cur.bump();
            return Err(FrontendError::Lex {
                span: cur.span_from(start, line, col),
                message: format!("unrecognized character {c:?}"),
            });
        };

        tokens.push(Token {
            kind,
            text: source[start..cur.pos].to_string(),
            span: cur.span_from(start, line, col),
        });
    }
    Ok(tokens)
}

fn lex_number(cur: &mut Cursor<'_>) {
    if cur.peek() == Some('0') && matches!(cur.peek_at(1), Some('x') | Some('X')) {
        cur.bump();
        cur.bump();
        while matches!(cur.peek(), Some(c) if c.is_ascii_hexdigit() || c == '_') {
            cur.bump();
        }
        return;
    }
    while matches!(cur.peek(), Some(c) if c.is_ascii_digit() || c == '_') {
        cur.bump();
    }
    if cur.peek() == Some('.') && matches!(cur.peek_at(1), Some(c) if c.is_ascii_digit()) {
        cur.bump();
        while matches!(cur.peek(), Some(c) if c.is_ascii_digit() || c == '_') {
            cur.bump();
        }
    }
    if matches!(cur.peek(), Some('e') | Some('E'))
        && matches!(cur.peek_at(1), Some(c) if c.is_ascii_digit() || c == '-')
    {
        cur.bump();
        if cur.peek() == Some('-') {
            cur.bump();
        }
        while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            cur.bump();
        }
    }
}

fn lex_string(
    cur: &mut Cursor<'_>,
    quote: char,
    start: usize,
    line: usize,
    col: usize,
) -> Result<(), FrontendError> {
    cur.bump();
    loop {
        match cur.peek() {
            None | Some('\n') => {
                return Err(FrontendError::Lex {
                    span: cur.span_from(start, line, col),
                    message: "unterminated string literal".into(),
                })
            }
            Some('\\') => {
                cur.bump();
                cur.bump();
            }
            Some(c) if c == quote => {
                cur.bump();
                return Ok(());
            }
            Some(c) if !c.is_ascii() => {
                let (s, l, k) = (cur.pos, cur.line, cur.col);
                cur.bump();
                return Err(FrontendError::Lex {
                    span: cur.span_from(s, l, k),
                    message: format!("non-ASCII character {c:?} in string literal"),
                });
            }
            Some(_) => {
                cur.bump();
            }
        }
    }
}
