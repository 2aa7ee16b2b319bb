//! Tokenizer shared by the sentence, structure and CSP-description formats.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(usize),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const PUNCT: &[&str] = &[
    "->", ":=", "{", "}", "(", ")", ",", ";", "=", "/", ".", "&", "|", "~",
];

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if c == '\n' {
            line += 1;
            column = 1;
            rest = &rest[1..];
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c == '#' {
            let end = rest.find('\n').unwrap_or(rest.len());
            rest = &rest[end..];
            continue;
        }
        let start = (line, column);
        if c.is_ascii_alphabetic() || c == '_' {
            let end = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            out.push(Token {
                tok: Tok::Ident(rest[..end].to_string()),
                line: start.0,
                column: start.1,
            });
            column += end;
            rest = &rest[end..];
            continue;
        }
        if c.is_ascii_digit() {
            let end = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            let value = rest[..end].parse::<usize>().map_err(|_| Error::Parse {
                line,
                column,
                message: format!("number `{}` is too large", &rest[..end]),
            })?;
            out.push(Token {
                tok: Tok::Nat(value),
                line: start.0,
                column: start.1,
            });
            column += end;
            rest = &rest[end..];
            continue;
        }
        match PUNCT.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                out.push(Token {
                    tok: Tok::Punct(p),
                    line: start.0,
                    column: start.1,
                });
                column += p.len();
                rest = &rest[p.len()..];
            }
            None => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// A cursor over a token stream with location-carrying errors.
pub(crate) struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Cursor {
            tokens: tokenize(text)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        Error::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    pub fn error_at(&self, token: &Token, message: impl Into<String>) -> Error {
        Error::Parse {
            line: token.line,
            column: token.column,
            message: message.into(),
        }
    }

    pub fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek().tok, Tok::Punct(q) if q == p)
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{p}`, found {}", describe(&self.peek().tok))))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{kw}`, found {}", describe(&self.peek().tok))))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Token)> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok((s, t))
            }
            other => Err(self.error_here(format!("expected identifier, found {}", describe(other)))),
        }
    }

    pub fn expect_nat(&mut self) -> Result<(usize, Token)> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Nat(n) => {
                self.bump();
                Ok((n, t))
            }
            ref other => Err(self.error_here(format!("expected number, found {}", describe(other)))),
        }
    }
}

pub(crate) fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Nat(n) => format!("`{n}`"),
        Tok::Punct(p) => format!("`{p}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_carry_positions() {
        let toks = tokenize("exists T/2.\n  # comment\n forall x -> y").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("exists".into()));
        assert_eq!(toks[2].tok, Tok::Punct("/"));
        let forall = toks.iter().find(|t| t.tok == Tok::Ident("forall".into())).unwrap();
        assert_eq!((forall.line, forall.column), (3, 2));
        assert!(toks.iter().any(|t| t.tok == Tok::Punct("->")));
    }

    #[test]
    fn bad_character() {
        let err = tokenize("a\n  $").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 3,
                message: "unexpected character `$`".into()
            }
        );
    }
}
