use std::fmt;

use super::ParseError;

/// Byte range `[start, end)` into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    True,
    Tau,
    E,
    A,
    X,
    /// `X_a`
    XSub(String),
    /// `X_{`
    XChi,
    Ax,
    /// `AX_a`
    AxSub(String),
    U,
    W,
    Bang,
    Amp,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::XSub(a) => write!(f, "`X_{a}`"),
            Tok::AxSub(a) => write!(f, "`AX_{a}`"),
            Tok::Eof => f.write_str("end of input"),
            other => {
                let s = match other {
                    Tok::True => "true",
                    Tok::Tau => "tau",
                    Tok::E => "E",
                    Tok::A => "A",
                    Tok::X => "X",
                    Tok::XChi => "X_{",
                    Tok::Ax => "AX",
                    Tok::U => "U",
                    Tok::W => "W",
                    Tok::Bang => "!",
                    Tok::Amp => "&",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    _ => unreachable!(),
                };
                write!(f, "`{s}`")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex_error(start: usize, end: usize, message: String) -> ParseError {
    ParseError { span: SourceSpan { start, end }, message, violations: Vec::new() }
}

/// Splits `text` into tokens, always ending with `Eof`.
pub(super) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '!' | '¬' => Some(Tok::Bang),
            '&' | '∧' => Some(Tok::Amp),
            '∃' => Some(Tok::E),
            '∀' => Some(Tok::A),
            'τ' => Some(Tok::Tau),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push(Token { tok, span: SourceSpan { start, end: start + c.len_utf8() } });
            continue;
        }
        if !is_word(c) {
            return Err(lex_error(start, start + c.len_utf8(), format!("unexpected character `{c}`")));
        }
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if !is_word(c) {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        let word = &text[start..end];
        let tok = match word {
            "true" => Tok::True,
            "tau" => Tok::Tau,
            "E" => Tok::E,
            "A" => Tok::A,
            "X" => Tok::X,
            "U" => Tok::U,
            "W" => Tok::W,
            "AX" => Tok::Ax,
            "X_" => {
                if chars.peek().map(|&(_, c)| c) == Some('{') {
                    chars.next();
                    end += 1;
                    Tok::XChi
                } else {
                    return Err(lex_error(start, end, "`X_` must be followed by an action or `{`".into()));
                }
            }
            "AX_" => return Err(lex_error(start, end, "`AX_` must be followed by an action".into())),
            w if w.starts_with("AX_") => Tok::AxSub(w[3..].to_string()),
            w if w.starts_with("X_") => Tok::XSub(w[2..].to_string()),
            w => Tok::Ident(w.to_string()),
        };
        out.push(Token { tok, span: SourceSpan { start, end } });
    }
    out.push(Token { tok: Tok::Eof, span: SourceSpan { start: text.len(), end: text.len() } });
    Ok(out)
}
