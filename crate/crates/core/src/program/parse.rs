//! Prefix syntax: `symbol` or `symbol(arg, …)`, with decimal literals.
//!
//! ```text
//! term    := literal | ident | ident "(" term ("," term)* ")"
//! literal := ["+" | "-"] digits ["." digits] [("e" | "E") ["+" | "-"] digits]
//! ident   := (letter | "_") (letter | digit | "_")*
//! ```
//!
//! A bare identifier that is not an operation name is a variable. A
//! literal becomes a degenerate interval when its decimal value is a
//! float, and otherwise the one-ulp enclosure around the nearest float.

use thiserror::Error;

use super::signature::Signature;
use super::term::Term;
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol {name:?} at position {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("{name} at position {pos} takes {expected} argument(s), got {found}")]
    ArityMismatch { name: String, pos: usize, expected: usize, found: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownSymbol { pos, .. } | ParseError::ArityMismatch { pos, .. } => *pos,
        }
    }
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, sig };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn text(&self, start: usize) -> &str {
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice")
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' || c == b'-' || c == b'+' => self.literal(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.symbol(),
            Some(_) => Err(self.syntax("expected a literal or a symbol")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let mut n = self.digits();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += self.digits();
        }
        if n == 0 {
            return Err(ParseError::Syntax { pos: start, msg: "malformed number".into() });
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'-' | b'+')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                return Err(self.syntax("missing exponent digits"));
            }
        }
        let text = self.text(start).to_string();
        let value = literal_enclosure(&text).ok_or(ParseError::Syntax { pos: start, msg: "number out of range".into() })?;
        Ok(Term::Const { text, value })
    }

    fn symbol(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = self.text(start).to_string();
        let arity = self.sig.arity(&name);
        if !self.eat(b'(') {
            return match arity {
                Some(expected) if expected > 0 => Err(ParseError::ArityMismatch { name, pos: start, expected, found: 0 }),
                _ => Ok(Term::Var(name)),
            };
        }
        let Some(expected) = arity else {
            return Err(ParseError::UnknownSymbol { name, pos: start });
        };
        let mut args = vec![self.term()?];
        while self.eat(b',') {
            args.push(self.term()?);
        }
        if !self.eat(b')') {
            return Err(self.syntax("expected ',' or ')'"));
        }
        if args.len() != expected {
            return Err(ParseError::ArityMismatch { name, pos: start, expected, found: args.len() });
        }
        Ok(Term::App { op: name, args })
    }
}

/// Significant digits and decimal exponent of an unsigned decimal string,
/// so that equal values give equal keys.
fn decimal_key(s: &str) -> (String, i64) {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let mut digits = format!("{int}{frac}");
    let mut point = int.len() as i64 + exp;
    let lead = digits.len() - digits.trim_start_matches('0').len();
    digits.drain(..lead);
    point -= lead as i64;
    let kept = digits.trim_end_matches('0').len();
    digits.truncate(kept);
    if digits.is_empty() {
        point = 0;
    }
    (digits, point)
}

/// Enclosure of the real number written as `text`.
pub fn literal_enclosure(text: &str) -> Option<Interval> {
    let x: f64 = text.parse().ok()?;
    if !x.is_finite() {
        return None;
    }
    let unsigned = text.trim_start_matches(['+', '-']);
    let exact = format!("{:.1100}", x.abs());
    if decimal_key(unsigned) == decimal_key(&exact) {
        return Some(Interval::point(x));
    }
    Interval::new(x.next_down(), x.next_up()).ok()
}
