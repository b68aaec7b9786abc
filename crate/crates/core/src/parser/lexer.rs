//! Tokenizer for theory files and expressions.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Punct(char),
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

const PUNCT: &str = ";[](){},:=+-*/^";

/// Identifiers are `[A-Za-z_][A-Za-z0-9_]*` with an optional trailing `~`
/// (antifield names). `#` starts a comment running to the end of the line.
pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let ch = chars.next().unwrap();
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&ch| ch != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                s.push(bump(&mut chars));
            }
            let n = s.parse::<u64>().map_err(|_| Error::Syntax {
                line: l0,
                col: c0,
                msg: format!("integer literal `{s}` too large"),
            })?;
            out.push(Token { tok: Tok::Int(n), line: l0, col: c0 });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars.peek().is_some_and(|ch| ch.is_ascii_alphanumeric() || *ch == '_') {
                s.push(bump(&mut chars));
            }
            if chars.peek() == Some(&'~') {
                s.push(bump(&mut chars));
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
        } else if PUNCT.contains(c) {
            bump(&mut chars);
            out.push(Token { tok: Tok::Punct(c), line: l0, col: c0 });
        } else {
            return Err(Error::Syntax { line: l0, col: c0, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let t = tokenize("field a~[3] odd; # note\nL = 1/2;").unwrap();
        assert_eq!(t[1].tok, Tok::Ident("a~".into()));
        let l = t.iter().find(|t| t.tok == Tok::Ident("L".into())).unwrap();
        assert_eq!((l.line, l.col), (2, 1));
        assert!(matches!(tokenize("a $ b"), Err(Error::Syntax { line: 1, col: 3, .. })));
    }
}
