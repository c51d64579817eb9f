// SPDX-License-Identifier: Apache-2.0

//! Span-annotated syntax tree for the supported Solidity subset.
//!
//! The tree is homogeneous: every node has a [`AstKind`] (which carries the
//! kind-specific attributes), an ordered list of children, a span and the
//! verbatim source text it covers. Child layouts per kind:
//!
//! | kind           | children                                              |
//! |----------------|-------------------------------------------------------|
//! | `SourceUnit`   | contracts                                             |
//! | `Contract`     | state vars, events, functions, modifiers              |
//! | `StateVar`     | initializer (0..1)                                    |
//! | `Function`     | body statements                                       |
//! | `Modifier`     | body statements                                       |
//! | `Block`        | statements                                            |
//! | `LocalVar`     | initializer (0..1)                                    |
//! | `Assign`       | target, value                                         |
//! | `If`           | condition, then-block, else-block (0..1)              |
//! | `Loop`         | init?, condition?, update?, body block (see flags)    |
//! | `Require`      | condition, message (0..1)                             |
//! | `Return`       | value (0..1)                                          |
//! | `Emit`         | arguments                                             |
//! | `Transfer`     | recipient, amount, extra call arguments               |
//! | `BinaryOp`     | lhs, rhs                                              |
//! | `UnaryOp`      | operand                                               |
//! | `Conditional`  | condition, then, else                                 |
//! | `Call`         | callee, arguments                                     |
//! | `MemberAccess` | base                                                  |
//! | `Index`        | base, index                                           |

use serde::{Deserialize, Serialize};

use super::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Visibility {
    Public,
    External,
    Internal,
    Private,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionKind {
    Function,
    Constructor,
    Receive,
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoopKind {
    For,
    While,
    DoWhile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransferMethod {
    Transfer,
    Send,
    CallValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AstKind {
    SourceUnit,
    Contract {
        name: String,
    },
    StateVar {
        name: String,
        type_name: String,
        constant: bool,
    },
    Event {
        name: String,
    },
    Function {
        name: String,
        function_kind: FunctionKind,
        visibility: Visibility,
        payable: bool,
        modifiers: Vec<String>,
        params: Vec<String>,
    },
    Modifier {
        name: String,
        params: Vec<String>,
    },
    Block,
    LocalVar {
        name: String,
        type_name: String,
    },
    Assign {
        op: String,
    },
    If,
    Loop {
        loop_kind: LoopKind,
        has_init: bool,
        has_cond: bool,
        has_update: bool,
    },
    Require {
        callee: String,
    },
    Return,
    Emit {
        event: String,
    },
    Placeholder,
    Transfer {
        method: TransferMethod,
    },
    BinaryOp {
        op: String,
    },
    UnaryOp {
        op: String,
        prefix: bool,
    },
    Conditional,
    Call {
        callee: String,
    },
    MemberAccess {
        member: String,
    },
    Index,
    Literal {
        value: String,
    },
    Identifier {
        name: String,
    },
}

impl AstKind {
    pub fn label(&self) -> &'static str {
        match self {
            AstKind::SourceUnit => "SourceUnit",
            AstKind::Contract { .. } => "Contract",
            AstKind::StateVar { .. } => "StateVar",
            AstKind::Event { .. } => "Event",
            AstKind::Function { .. } => "Function",
            AstKind::Modifier { .. } => "Modifier",
            AstKind::Block => "Block",
            AstKind::LocalVar { .. } => "LocalVar",
            AstKind::Assign { .. } => "Assign",
            AstKind::If => "If",
            AstKind::Loop { .. } => "Loop",
            AstKind::Require { .. } => "Require",
            AstKind::Return => "Return",
            AstKind::Emit { .. } => "Emit",
            AstKind::Placeholder => "Placeholder",
            AstKind::Transfer { .. } => "Transfer",
            AstKind::BinaryOp { .. } => "BinaryOp",
            AstKind::UnaryOp { .. } => "UnaryOp",
            AstKind::Conditional => "Conditional",
            AstKind::Call { .. } => "Call",
            AstKind::MemberAccess { .. } => "MemberAccess",
            AstKind::Index => "Index",
            AstKind::Literal { .. } => "Literal",
            AstKind::Identifier { .. } => "Identifier",
        }
    }

    /// Kinds that appear as entries of a statement list.
    pub fn is_statement(&self) -> bool {
        matches!(
            self,
            AstKind::Block
                | AstKind::LocalVar { .. }
                | AstKind::Assign { .. }
                | AstKind::If
                | AstKind::Loop { .. }
                | AstKind::Require { .. }
                | AstKind::Return
                | AstKind::Emit { .. }
                | AstKind::Placeholder
                | AstKind::Transfer { .. }
                | AstKind::UnaryOp { .. }
                | AstKind::Call { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AstNode {
    #[serde(flatten)]
    pub kind: AstKind,
    pub span: SourceSpan,
    pub text: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<AstNode>,
}

impl AstNode {
    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a AstNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn contracts(&self) -> impl Iterator<Item = &AstNode> {
        let own = matches!(self.kind, AstKind::Contract { .. }).then_some(self);
        let nested = self
            .children
            .iter()
            .filter(|c| matches!(c.kind, AstKind::Contract { .. }));
        own.into_iter().chain(nested)
    }

    pub fn name(&self) -> Option<&str> {
        match &self.kind {
            AstKind::Contract { name }
            | AstKind::StateVar { name, .. }
            | AstKind::Event { name }
            | AstKind::Function { name, .. }
            | AstKind::Modifier { name, .. }
            | AstKind::LocalVar { name, .. }
            | AstKind::Identifier { name } => Some(name),
            _ => None,
        }
    }

    /// Dotted rendering of identifier / member-access chains (`abi.encode`),
    /// `None` for anything else.
    pub fn path(&self) -> Option<String> {
        match &self.kind {
            AstKind::Identifier { name } => Some(name.clone()),
            AstKind::MemberAccess { member } => {
                let base = self.children.first()?.path()?;
                Some(format!("{base}.{member}"))
            }
            _ => None,
        }
    }
}
