//! Word grammar:
//!
//! ```text
//! word    := term*
//! term    := atom ("^" (integer | "(" word ")"))*
//! atom    := vertex | "1" | "(" word ")" | "[" word "," word "]"
//! ```
//!
//! `t^(w)` is the conjugate `w⁻¹ t w`; `[x, y] = x⁻¹ y⁻¹ x y`. `1` denotes the identity unless the
//! graph has a vertex named `1`.

use super::{Element, Group, MAX_EXPONENT};
use crate::error::{input, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Caret,
    Minus,
    Open,
    Close,
    OpenSq,
    CloseSq,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '^' => Tok::Caret,
            '-' => Tok::Minus,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '[' => Tok::OpenSq,
            ']' => Tok::CloseSq,
            ',' => Tok::Comma,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Ident(s)));
                continue;
            }
            other => return input(format!("unexpected character {other:?} at offset {pos}")),
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    group: &'a Group,
    toks: Vec<(usize, Tok)>,
    at: usize,
    /// Byte length of the input; the offset reported past the last token.
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            match self.peek() {
                Some(found) => input(format!("expected {t:?}, found {found:?} at offset {}", self.offset())),
                None => input(format!("expected {t:?}, found end of word")),
            }
        }
    }

    fn word(&mut self) -> Result<Element> {
        let mut acc = self.group.identity();
        while matches!(self.peek(), Some(Tok::Ident(_) | Tok::Open | Tok::OpenSq)) {
            acc = acc.mul(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Element> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            match self.peek() {
                Some(Tok::Open) => {
                    self.at += 1;
                    let w = self.word()?;
                    self.expect(Tok::Close)?;
                    t = t.conj(&w);
                }
                _ => {
                    let k = self.integer()?;
                    t = t.power(k)?;
                }
            }
        }
        Ok(t)
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.peek() == Some(&Tok::Minus);
        if neg {
            self.at += 1;
        }
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s.bytes().all(|b| b.is_ascii_digit()) => {
                self.at += 1;
                let v: i64 = s.parse().ok().filter(|v: &i64| *v <= MAX_EXPONENT).map_or_else(
                    || input(format!("exponent {s} at offset {at} exceeds {MAX_EXPONENT}")),
                    Ok,
                )?;
                if v == 0 {
                    return input(format!("zero exponent at offset {at}"));
                }
                Ok(if neg { -v } else { v })
            }
            _ => input(format!("expected an integer exponent at offset {at}")),
        }
    }

    fn atom(&mut self) -> Result<Element> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match self.group.graph().index_of(&name) {
                    Some(v) => Ok(self.group.generator(v, 1)),
                    None if name == "1" => Ok(self.group.identity()),
                    None => input(format!("unknown vertex {name:?} at offset {at}")),
                }
            }
            Some(Tok::Open) => {
                self.at += 1;
                let w = self.word()?;
                self.expect(Tok::Close)?;
                Ok(w)
            }
            Some(Tok::OpenSq) => {
                self.at += 1;
                let x = self.word()?;
                self.expect(Tok::Comma)?;
                let y = self.word()?;
                self.expect(Tok::CloseSq)?;
                Ok(x.commutator(&y))
            }
            Some(t) => input(format!("unexpected {t:?} at offset {at}")),
            None => input("unexpected end of word"),
        }
    }
}

pub(super) fn parse(group: &Group, text: &str) -> Result<Element> {
    let mut p = Parser { group, toks: lex(text)?, at: 0, end: text.len() };
    let w = p.word()?;
    if p.at != p.toks.len() {
        return input(format!("unexpected {:?} at offset {}", p.toks[p.at].1, p.offset()));
    }
    Ok(w)
}
