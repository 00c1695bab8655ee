//! Minimal scanner for brace-delimited C/Java-like source.
//!
//! One pass produces both a token stream (identifiers, braces, parens, the
//! decision operators) and per-line content flags for line counting. String
//! and character literals and comments are consumed here, so later stages
//! never see braces or keywords that occur inside them.

/// Tokens the metric extractors care about. Anything else surfaces as
/// `Other` so signature detection can reject it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    OpenBrace,
    CloseBrace,
    OpenParen,
    CloseParen,
    Semicolon,
    Comma,
    Question,
    AndAnd,
    OrOr,
    /// A complete string or character literal.
    Literal,
    Other(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
}

/// Content classification per source line.
#[derive(Debug, Clone, Copy, Default)]
pub struct LineFlags {
    /// Line has non-whitespace content outside comments.
    pub code: bool,
    /// Line has non-whitespace content inside a comment (or the comment
    /// delimiters themselves).
    pub comment: bool,
}

#[derive(Debug)]
pub struct ScanOutput {
    pub tokens: Vec<Token>,
    pub lines: Vec<LineFlags>,
}

enum State {
    Normal,
    LineComment,
    BlockComment,
    Str(char),
    StrEscape(char),
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

pub fn scan(source: &str) -> ScanOutput {
    // Total lines: a trailing fragment without '\n' still counts as a line.
    let total_lines = if source.is_empty() {
        0
    } else {
        source.matches('\n').count() + usize::from(!source.ends_with('\n'))
    };
    let mut lines = vec![LineFlags::default(); total_lines];
    let mut tokens = Vec::new();

    let mut state = State::Normal;
    let mut line = 1usize;
    let mut ident = String::new();
    let mut ident_line = 0usize;

    let mut chars = source.chars().peekable();
    macro_rules! flush_ident {
        () => {
            if !ident.is_empty() {
                tokens.push(Token { kind: TokenKind::Ident(std::mem::take(&mut ident)), line: ident_line });
            }
        };
    }

    while let Some(c) = chars.next() {
        let mark_code = |lines: &mut Vec<LineFlags>| {
            if !c.is_whitespace() {
                lines[line - 1].code = true;
            }
        };
        match state {
            State::Normal => {
                if c == '/' && chars.peek() == Some(&'/') {
                    flush_ident!();
                    chars.next();
                    lines[line - 1].comment = true;
                    state = State::LineComment;
                } else if c == '/' && chars.peek() == Some(&'*') {
                    flush_ident!();
                    chars.next();
                    lines[line - 1].comment = true;
                    state = State::BlockComment;
                } else if c == '"' || c == '\'' {
                    flush_ident!();
                    lines[line - 1].code = true;
                    tokens.push(Token { kind: TokenKind::Literal, line });
                    state = State::Str(c);
                } else if is_ident_start(c) {
                    if ident.is_empty() {
                        ident_line = line;
                    }
                    ident.push(c);
                    lines[line - 1].code = true;
                } else if is_ident_continue(c) && !ident.is_empty() {
                    // digits continuing an identifier
                    ident.push(c);
                    lines[line - 1].code = true;
                } else {
                    flush_ident!();
                    mark_code(&mut lines);
                    let kind = match c {
                        '{' => Some(TokenKind::OpenBrace),
                        '}' => Some(TokenKind::CloseBrace),
                        '(' => Some(TokenKind::OpenParen),
                        ')' => Some(TokenKind::CloseParen),
                        ';' => Some(TokenKind::Semicolon),
                        ',' => Some(TokenKind::Comma),
                        '?' => Some(TokenKind::Question),
                        '&' if chars.peek() == Some(&'&') => {
                            chars.next();
                            Some(TokenKind::AndAnd)
                        }
                        '|' if chars.peek() == Some(&'|') => {
                            chars.next();
                            Some(TokenKind::OrOr)
                        }
                        c if c.is_whitespace() => None,
                        other => Some(TokenKind::Other(other)),
                    };
                    if let Some(kind) = kind {
                        tokens.push(Token { kind, line });
                    }
                }
            }
            State::LineComment => {
                if c != '\n' && !c.is_whitespace() {
                    lines[line - 1].comment = true;
                }
                if c == '\n' {
                    state = State::Normal;
                }
            }
            State::BlockComment => {
                if !c.is_whitespace() {
                    lines[line - 1].comment = true;
                }
                if c == '*' && chars.peek() == Some(&'/') {
                    chars.next();
                    state = State::Normal;
                }
            }
            State::Str(quote) => {
                if !c.is_whitespace() {
                    lines[line - 1].code = true;
                }
                if c == '\\' {
                    state = State::StrEscape(quote);
                } else if c == quote || c == '\n' {
                    // Unterminated literals end at the line break.
                    state = State::Normal;
                }
            }
            State::StrEscape(quote) => {
                if !c.is_whitespace() {
                    lines[line - 1].code = true;
                }
                state = State::Str(quote);
            }
        }
        if c == '\n' {
            line += 1;
        }
    }
    if let State::Normal = state {
        flush_ident!();
    }

    ScanOutput { tokens, lines }
}
