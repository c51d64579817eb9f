// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Location of a lexeme or syntax node in a source file.
///
/// `line` and `column` are 1-based and counted in characters; `offset` is the
/// byte offset of the first character, used for containment checks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub line: usize,
    pub column: usize,
    pub length: usize,
    pub offset: usize,
}

impl SourceSpan {
    pub fn new(file: Arc<str>, line: usize, column: usize, offset: usize, length: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        Self {
            file,
            line,
            column,
            length,
            offset,
        }
    }

    /// Byte offset one past the last character.
    pub fn end(&self) -> usize {
        self.offset + self.length
    }

    /// Span starting at `self` and ending where `other` ends.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        let end = other.end().max(self.end());
        SourceSpan {
            file: self.file.clone(),
            line: self.line,
            column: self.column,
            offset: self.offset,
            length: end - self.offset,
        }
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.offset <= other.offset && other.end() <= self.end()
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}
