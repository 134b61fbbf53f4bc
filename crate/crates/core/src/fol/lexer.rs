//! Lexer for the FOL annotation dialect.

use super::{FolError, SourceToken, TokenKind};

/// Tokenizes FOL text. Recognizes `∀ ∃ ¬ ∧ ∨ ⊕ → ↔ ( ) , =` plus the ASCII
/// aliases `forall exists not and or xor -> <->` (case-insensitive).
/// Identifiers are `[A-Za-z][A-Za-z0-9_]*`; whitespace is skipped. Offsets are
/// character indices into the input.
pub fn tokenize_fol(text: &str) -> Result<Vec<SourceToken>, FolError> {
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
            '∀' => (TokenKind::Forall, 1),
            '∃' => (TokenKind::Exists, 1),
            '¬' => (TokenKind::Not, 1),
            '∧' => (TokenKind::And, 1),
            '∨' => (TokenKind::Or, 1),
            '⊕' => (TokenKind::Xor, 1),
            '→' => (TokenKind::Implies, 1),
            '↔' => (TokenKind::Iff, 1),
            '(' => (TokenKind::LParen, 1),
            ')' => (TokenKind::RParen, 1),
            ',' => (TokenKind::Comma, 1),
            '=' => (TokenKind::Eq, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (TokenKind::Implies, 2),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                (TokenKind::Iff, 3)
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let kind = match word.to_ascii_lowercase().as_str() {
                    "forall" => TokenKind::Forall,
                    "exists" => TokenKind::Exists,
                    "not" => TokenKind::Not,
                    "and" => TokenKind::And,
                    "or" => TokenKind::Or,
                    "xor" => TokenKind::Xor,
                    _ => TokenKind::Ident,
                };
                (kind, j - i)
            }
            other => return Err(FolError::Lex { offset, ch: other }),
        };
        let lexeme: String = chars[i..i + len].iter().collect();
        tokens.push(SourceToken { kind, lexeme, offset });
        i += len;
    }
    Ok(tokens)
}
