//! Tokenizer shared by the formula and term parsers.

use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    Iff,
    DiamondOp,
    Pipe,
    Amp,
    Tilde,
    Colon,
    Comma,
    Plus,
    Star,
    Bang,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::DiamondOp => "`<>`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Bang => "`!`".into(),
        }
    }
}

/// A token plus the 1-based column of its first character.
pub(super) struct Lexed {
    pub tokens: Vec<(Tok, usize)>,
    /// Column one past the end of input, for "unexpected end" errors.
    pub end: usize,
}

pub(super) fn lex(input: &str) -> Result<Lexed, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                tokens.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                tokens.push((Tok::RParen, col));
                i += 1;
            }
            '[' => {
                tokens.push((Tok::LBracket, col));
                i += 1;
            }
            ']' => {
                tokens.push((Tok::RBracket, col));
                i += 1;
            }
            '|' => {
                tokens.push((Tok::Pipe, col));
                i += 1;
            }
            '&' => {
                tokens.push((Tok::Amp, col));
                i += 1;
            }
            '~' => {
                tokens.push((Tok::Tilde, col));
                i += 1;
            }
            ':' => {
                tokens.push((Tok::Colon, col));
                i += 1;
            }
            ',' => {
                tokens.push((Tok::Comma, col));
                i += 1;
            }
            '+' => {
                tokens.push((Tok::Plus, col));
                i += 1;
            }
            '*' => {
                tokens.push((Tok::Star, col));
                i += 1;
            }
            '!' => {
                tokens.push((Tok::Bang, col));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push((Tok::Arrow, col));
                    i += 2;
                } else {
                    return Err(ParseError::new(col, "expected `->`"));
                }
            }
            '<' => match (chars.get(i + 1), chars.get(i + 2)) {
                (Some('>'), _) => {
                    tokens.push((Tok::DiamondOp, col));
                    i += 2;
                }
                (Some('-'), Some('>')) => {
                    tokens.push((Tok::Iff, col));
                    i += 3;
                }
                _ => return Err(ParseError::new(col, "expected `<>` or `<->`")),
            },
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect();
                tokens.push((Tok::Ident(ident), col));
            }
            other => {
                return Err(ParseError::new(col, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(Lexed { tokens, end: chars.len() + 1 })
}
