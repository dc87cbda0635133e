use super::ast::Span;
use super::LangError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Keyword(Keyword),
    Semi,
    Comma,
    Colon,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Domain,
    Actions,
    Fluents,
    Boolean,
    Inertial,
    Always,
    Has,
    Preconditions,
    Causes,
    If,
    Possibly,
    Changes,
    Initially,
    Conformant,
    True,
    False,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Keyword> {
        Some(match word {
            "DOMAIN" => Keyword::Domain,
            "ACTIONS" => Keyword::Actions,
            "FLUENTS" => Keyword::Fluents,
            "boolean" => Keyword::Boolean,
            "INERTIAL" => Keyword::Inertial,
            "ALWAYS" => Keyword::Always,
            "HAS" => Keyword::Has,
            "PRECONDITIONS" => Keyword::Preconditions,
            "CAUSES" => Keyword::Causes,
            "IF" => Keyword::If,
            "POSSIBLY" => Keyword::Possibly,
            "CHANGES" => Keyword::Changes,
            "INITIALLY" => Keyword::Initially,
            "CONFORMANT" => Keyword::Conformant,
            "TRUE" => Keyword::True,
            "FALSE" => Keyword::False,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Domain => "DOMAIN",
            Keyword::Actions => "ACTIONS",
            Keyword::Fluents => "FLUENTS",
            Keyword::Boolean => "boolean",
            Keyword::Inertial => "INERTIAL",
            Keyword::Always => "ALWAYS",
            Keyword::Has => "HAS",
            Keyword::Preconditions => "PRECONDITIONS",
            Keyword::Causes => "CAUSES",
            Keyword::If => "IF",
            Keyword::Possibly => "POSSIBLY",
            Keyword::Changes => "CHANGES",
            Keyword::Initially => "INITIALLY",
            Keyword::Conformant => "CONFORMANT",
            Keyword::True => "TRUE",
            Keyword::False => "FALSE",
        }
    }
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Keyword(k) => format!("`{}`", k.as_str()),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Bang => "`!`".into(),
            TokenKind::Amp => "`&`".into(),
            TokenKind::Pipe => "`|`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::DoubleArrow => "`<->`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

/// Splits `text` into tokens. `#` starts a comment running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LangError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1u32, 0usize);
    let span = |start: usize, end: usize, line: u32, line_start: usize| Span {
        line,
        column: (text[line_start..start].chars().count() + 1) as u32,
        start,
        end,
    };
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => {
                i += 1;
                line += 1;
                line_start = i;
                continue;
            }
            b' ' | b'\t' | b'\r' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let start = i;
        let kind = match c {
            b';' => TokenKind::Semi,
            b',' => TokenKind::Comma,
            b':' => TokenKind::Colon,
            b'!' => TokenKind::Bang,
            b'&' => TokenKind::Amp,
            b'|' => TokenKind::Pipe,
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                TokenKind::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                TokenKind::DoubleArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                let word = &text[start..=i];
                match Keyword::from_word(word) {
                    Some(k) => TokenKind::Keyword(k),
                    None => TokenKind::Ident(word.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                let end = start + ch.len_utf8();
                return Err(LangError::Lex {
                    found: ch,
                    span: span(start, end, line, line_start),
                });
            }
        };
        i += 1;
        tokens.push(Token {
            kind,
            span: span(start, i, line, line_start),
        });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: span(bytes.len(), bytes.len(), line, line_start),
    });
    Ok(tokens)
}
