//! Lexers for the lossless targets. Both produce the shared FOL token kinds,
//! so the recursive-descent parser is reused unchanged.
//!
//! Target keywords are reserved: a predicate or constant that lowercases to a
//! keyword (`and`, `all`, ...) cannot be round-tripped and is out of scope for
//! the source dataset's naming conventions.

use crate::fol::{FolError, SourceToken, TokenKind};

/// Tokenizes MINIFOL: `all:x`/`some:x` quantifiers, `& | ^ :- <-> ~` operators.
pub fn tokenize_minifol(text: &str) -> Result<Vec<SourceToken>, FolError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let offset = i;
        let (kind, len) = match c {
            '(' => (TokenKind::LParen, 1),
            ')' => (TokenKind::RParen, 1),
            ',' => (TokenKind::Comma, 1),
            '=' => (TokenKind::Eq, 1),
            '~' => (TokenKind::Not, 1),
            '&' => (TokenKind::And, 1),
            '|' => (TokenKind::Or, 1),
            '^' => (TokenKind::Xor, 1),
            ':' if chars.get(i + 1) == Some(&'-') => (TokenKind::Implies, 2),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                (TokenKind::Iff, 3)
            }
            c if c.is_ascii_alphabetic() => {
                let (word, mut len) = scan_ident(&chars, i);
                let mut kind = TokenKind::Ident;
                if chars.get(i + len) == Some(&':') {
                    match word.as_str() {
                        "all" => {
                            kind = TokenKind::Forall;
                            len += 1;
                        }
                        "some" => {
                            kind = TokenKind::Exists;
                            len += 1;
                        }
                        _ => {}
                    }
                }
                (kind, len)
            }
            other => return Err(FolError::Lex { offset, ch: other }),
        };
        let lexeme: String = chars[i..i + len].iter().collect();
        tokens.push(SourceToken { kind, lexeme, offset });
        i += len;
    }
    Ok(tokens)
}

/// Tokenizes CLIF: keyword operators `forall exists not and or xor implies iff`.
pub fn tokenize_clif(text: &str) -> Result<Vec<SourceToken>, FolError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let offset = i;
        let (kind, len) = match c {
            '(' => (TokenKind::LParen, 1),
            ')' => (TokenKind::RParen, 1),
            ',' => (TokenKind::Comma, 1),
            '=' => (TokenKind::Eq, 1),
            c if c.is_ascii_alphabetic() => {
                let (word, len) = scan_ident(&chars, i);
                let kind = match word.as_str() {
                    "forall" => TokenKind::Forall,
                    "exists" => TokenKind::Exists,
                    "not" => TokenKind::Not,
                    "and" => TokenKind::And,
                    "or" => TokenKind::Or,
                    "xor" => TokenKind::Xor,
                    "implies" => TokenKind::Implies,
                    "iff" => TokenKind::Iff,
                    _ => TokenKind::Ident,
                };
                (kind, len)
            }
            other => return Err(FolError::Lex { offset, ch: other }),
        };
        let lexeme: String = chars[i..i + len].iter().collect();
        tokens.push(SourceToken { kind, lexeme, offset });
        i += len;
    }
    Ok(tokens)
}

fn scan_ident(chars: &[char], start: usize) -> (String, usize) {
    let mut j = start + 1;
    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
        j += 1;
    }
    (chars[start..j].iter().collect(), j - start)
}
