//! Method detection and decision-point counting for brace-delimited source.
//!
//! A method is detected heuristically: an identifier followed by a
//! parenthesized parameter list followed by `{`, outside any other method
//! body. Control keywords (`if`, `while`, ...) and `new`-expressions are
//! excluded, and any token other than identifiers or commas between `)` and
//! `{` rejects the candidate, which filters out prototypes, declarations,
//! and calls inside initializers.

use serde::{Deserialize, Serialize};

use super::lexer::{scan, Token, TokenKind};
use super::StructuralError;

/// One detected method body. Lines are 1-based and inclusive; the span starts
/// at the line of the method name and ends at the closing brace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSpan {
    pub name: String,
    pub start_line: u64,
    pub end_line: u64,
    pub decision_points: u64,
}

impl MethodSpan {
    pub fn length(&self) -> u64 {
        self.end_line - self.start_line + 1
    }
}

/// Cyclomatic complexity of a method: 1 plus its decision points. Decision
/// points are occurrences of `if`, `for`, `while`, `do`, `case`, `catch`,
/// the ternary `?`, `&&`, and `||` in the body, outside strings and
/// comments. A bare `else` is not counted, so `else if` contributes exactly
/// one; `default` labels are not counted; a do-while loop contributes two.
pub fn cyclomatic(method: &MethodSpan) -> u64 {
    1 + method.decision_points
}

const DECISION_KEYWORDS: &[&str] = &["if", "for", "while", "do", "case", "catch"];

// Keywords that can look like `name ( ... ) {` but never start a method.
const NON_METHOD_KEYWORDS: &[&str] = &[
    "if", "else", "for", "while", "do", "switch", "case", "catch", "try", "finally", "return",
    "throw", "new", "synchronized", "assert", "sizeof",
];

enum SigState {
    Idle,
    /// Saw a candidate method name.
    Name { name: String, line: usize },
    /// Inside the candidate's parameter parentheses.
    InParams { name: String, line: usize, depth: u32 },
    /// Between `)` and a possible `{`.
    AfterParams { name: String, line: usize },
}

/// Scans the source and returns one span per detected method body, in source
/// order. Spans never overlap: candidates inside a detected body are skipped.
///
/// Braces inside strings, character literals, and comments are ignored.
/// Unbalanced braces outside those contexts are reported with the offending
/// line: the line of the stray `}` or of the `{` left open at end of input.
pub fn extract_methods(source_text: &str) -> Result<Vec<MethodSpan>, StructuralError> {
    let tokens = scan(source_text).tokens;
    let mut methods = Vec::new();

    let mut depth: u32 = 0;
    let mut open_lines: Vec<usize> = Vec::new();
    // (name, start line, depth at which the body opened, decision points)
    let mut current: Option<(String, usize, u32, u64)> = None;
    let mut sig = SigState::Idle;
    let mut prev_was_new = false;

    for Token { kind, line } in &tokens {
        if let Some((_, _, body_depth, dp)) = current.as_mut() {
            match kind {
                TokenKind::Ident(name) if DECISION_KEYWORDS.contains(&name.as_str()) => *dp += 1,
                TokenKind::Question | TokenKind::AndAnd | TokenKind::OrOr => *dp += 1,
                TokenKind::OpenBrace => {
                    depth += 1;
                    open_lines.push(*line);
                }
                TokenKind::CloseBrace => {
                    if depth == 0 {
                        return Err(StructuralError::UnbalancedBraces { line: *line });
                    }
                    depth -= 1;
                    open_lines.pop();
                    if depth == *body_depth {
                        let (name, start, _, dp) = current.take().unwrap();
                        methods.push(MethodSpan {
                            name,
                            start_line: start as u64,
                            end_line: *line as u64,
                            decision_points: dp,
                        });
                    }
                }
                _ => {}
            }
            continue;
        }

        sig = match (std::mem::replace(&mut sig, SigState::Idle), kind) {
            (SigState::Name { name, line: sig_line }, TokenKind::OpenParen) => {
                SigState::InParams { name, line: sig_line, depth: 1 }
            }
            (SigState::InParams { name, line: sig_line, depth: d }, TokenKind::OpenParen) => {
                SigState::InParams { name, line: sig_line, depth: d + 1 }
            }
            (SigState::InParams { name, line: sig_line, depth: 1 }, TokenKind::CloseParen) => {
                SigState::AfterParams { name, line: sig_line }
            }
            (SigState::InParams { name, line: sig_line, depth: d }, TokenKind::CloseParen) => {
                SigState::InParams { name, line: sig_line, depth: d - 1 }
            }
            (inside @ SigState::InParams { .. }, _) => inside,
            (after @ SigState::AfterParams { .. }, TokenKind::Ident(_) | TokenKind::Comma) => after,
            (SigState::AfterParams { name, line: sig_line }, TokenKind::OpenBrace) => {
                current = Some((name, sig_line, depth, 0));
                SigState::Idle
            }
            (_, TokenKind::Ident(name)) => {
                if prev_was_new || NON_METHOD_KEYWORDS.contains(&name.as_str()) {
                    SigState::Idle
                } else {
                    SigState::Name { name: name.clone(), line: *line }
                }
            }
            _ => SigState::Idle,
        };
        prev_was_new = matches!(kind, TokenKind::Ident(n) if n == "new");

        match kind {
            TokenKind::OpenBrace => {
                depth += 1;
                open_lines.push(*line);
            }
            TokenKind::CloseBrace => {
                if depth == 0 {
                    return Err(StructuralError::UnbalancedBraces { line: *line });
                }
                depth -= 1;
                open_lines.pop();
            }
            _ => {}
        }
    }

    if depth > 0 {
        return Err(StructuralError::UnbalancedBraces { line: *open_lines.last().copied().unwrap_or(1) });
    }
    Ok(methods)
}
