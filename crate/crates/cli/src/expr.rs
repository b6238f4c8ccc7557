//! Symbol expressions `2{(y1,0),(0,a+b)}@2 - {(0,c),(w,0)}` and the textual
//! forms of symbols and cycles used in reports.
//!
//! A slot is a tuple with one entry per curve followed by the abelian entry.
//! Entries are signed sums of names, optionally with integer multipliers
//! (`2*y - w`), or `0`. The level after `@` defaults to 1.

use std::fmt::Write as _;

use chowsym_core::cycles::{AExpr, ZeroCycle};
use chowsym_core::models::Setting;
use chowsym_core::symbols::{atoms_level, sym_normalize, Atom, Factor, SlotEntry, SymbolSum};
use chowsym_core::{Coeff, ExtLevel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    s: &'a Setting,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.pos + 1, message: message.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn int(&mut self) -> Result<Option<i64>, ParseError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse() {
            Ok(n) => Ok(Some(n)),
            Err(_) => {
                self.pos = start;
                self.err("integer out of range")
            }
        }
    }

    fn name(&mut self) -> Option<&'a str> {
        self.ws();
        let start = self.pos;
        let ok_first = |c: u8| c.is_ascii_alphabetic() || c == b'_';
        if self.pos < self.src.len() && ok_first(self.src[self.pos]) {
            self.pos += 1;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || matches!(self.src[self.pos], b'_' | b'\''))
            {
                self.pos += 1;
            }
            Some(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
        } else {
            None
        }
    }

    fn sign(&mut self) -> Option<Coeff> {
        if self.eat(b'+') {
            Some(1)
        } else if self.eat(b'-') {
            Some(-1)
        } else {
            None
        }
    }

    /// One entry of a slot; `pos` is 0..d for curves and d for the abelian part.
    fn entry(&mut self, pos: usize) -> Result<SlotEntry, ParseError> {
        let mut out = SlotEntry::zero();
        let mut sign = self.sign().unwrap_or(1);
        loop {
            let start = self.pos;
            let k = self.int()?;
            let name = if k.is_some() {
                if self.eat(b'*') {
                    match self.name() {
                        Some(n) => Some(n),
                        None => return self.err("expected a name after `*`"),
                    }
                } else {
                    self.name()
                }
            } else {
                match self.name() {
                    Some(n) => Some(n),
                    None => return self.err("expected a name or `0`"),
                }
            };
            match (k, name) {
                (Some(0), None) => {}
                (Some(_), None) => {
                    self.pos = start;
                    return self.err("a bare integer entry must be 0");
                }
                (k, Some(n)) => {
                    let atom = self.atom(pos, n, start)?;
                    out.add_term(atom, sign * k.unwrap_or(1));
                }
                (None, None) => unreachable!(),
            }
            match self.sign() {
                Some(s) => sign = s,
                None => return Ok(out),
            }
        }
    }

    fn atom(&mut self, pos: usize, name: &str, at: usize) -> Result<Atom, ParseError> {
        let fail = |m: String| Err(ParseError { column: at + 1, message: m });
        if pos < self.s.d() {
            match self.s.curves[pos].point_index(name) {
                Ok(p) => Ok(Atom::jac(pos, p)),
                Err(_) => fail(format!("curve `{}` has no point `{name}`", self.s.curves[pos].name)),
            }
        } else {
            match self.s.generator_index(name) {
                Ok(g) => Ok(Atom::ab(g)),
                Err(_) => fail(format!("unknown atom `{name}`")),
            }
        }
    }

    fn slot(&mut self) -> Result<SlotEntry, ParseError> {
        self.expect(b'(')?;
        let n = self.s.d() + 1;
        let mut out = SlotEntry::zero();
        for pos in 0..n {
            if pos > 0 {
                self.expect(b',')?;
            }
            out += &self.entry(pos)?;
        }
        self.expect(b')')?;
        Ok(out)
    }

    /// `[k[*]] { slot, ... } [@ level]`, returned unnormalized.
    fn term(&mut self) -> Result<(Coeff, Vec<SlotEntry>, ExtLevel), ParseError> {
        let k = self.int()?.unwrap_or(1);
        self.eat(b'*');
        self.expect(b'{')?;
        let mut slots = Vec::new();
        if !self.eat(b'}') {
            loop {
                slots.push(self.slot()?);
                if self.eat(b'}') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        let level = if self.eat(b'@') {
            let at = self.pos;
            match self.int()? {
                Some(n) => match ExtLevel::new(n as u64) {
                    Ok(l) => l,
                    Err(_) => {
                        self.pos = at;
                        return self.err("levels are positive integers");
                    }
                },
                None => return self.err("expected a level after `@`"),
            }
        } else {
            ExtLevel::GROUND
        };
        Ok((k, slots, level))
    }
}

/// Parses and normalizes a symbol expression over the ground level.
pub fn parse_symbol(s: &Setting, text: &str) -> Result<SymbolSum, ParseError> {
    let mut p = Parser { s, src: text.as_bytes(), pos: 0 };
    let mut out: Option<SymbolSum> = None;
    let mut sign = p.sign().unwrap_or(1);
    loop {
        let start = p.pos;
        let (k, slots, level) = p.term()?;
        let x = sym_normalize(s, ExtLevel::GROUND, level, &slots)
            .map_err(|e| ParseError { column: start + 1, message: e.to_string() })?;
        match &mut out {
            None => out = Some(x.scale(sign * k)),
            Some(acc) => {
                if acc.rank != x.rank {
                    return Err(ParseError { column: start + 1, message: "terms have different ranks".into() });
                }
                acc.add_scaled(&x, sign * k).unwrap();
            }
        }
        if p.peek().is_none() {
            return Ok(out.unwrap());
        }
        match p.sign() {
            Some(s) => sign = s,
            None => return p.err("expected `+`, `-` or end of input"),
        }
    }
}

fn push_coeff(out: &mut String, c: Coeff, first: bool) {
    match (c.signum(), first) {
        (-1, true) => out.push('-'),
        (-1, false) => out.push_str(" - "),
        (_, false) => out.push_str(" + "),
        _ => {}
    }
    if c.abs() != 1 {
        write!(out, "{}", c.abs()).unwrap();
    }
}

fn atom_name(s: &Setting, a: Atom) -> String {
    match a.factor {
        Factor::Jac(i) => s.curves[i as usize].point_name(a.gen).to_string(),
        Factor::Ab => s.generator(a.gen).name.clone(),
    }
}

/// The slot tuple holding a single atom, e.g. `(0,y1,0)`.
pub fn atom_slot(s: &Setting, a: Atom) -> String {
    let pos = match a.factor {
        Factor::Jac(i) => i as usize,
        Factor::Ab => s.d(),
    };
    let entries: Vec<String> =
        (0..=s.d()).map(|k| if k == pos { atom_name(s, a) } else { "0".to_string() }).collect();
    format!("({})", entries.join(","))
}

/// A symbol sum in the input grammar, each pure symbol at its own level.
pub fn format_symbol(s: &Setting, x: &SymbolSum) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (atoms, c)) in x.terms.iter().enumerate() {
        push_coeff(&mut out, c, i == 0);
        let slots: Vec<String> = atoms.iter().map(|a| atom_slot(s, *a)).collect();
        let level = atoms_level(s, atoms).compositum(x.base);
        write!(out, "{{{}}}@{}", slots.join(","), level).unwrap();
    }
    out
}

pub fn format_aexpr(s: &Setting, a: &AExpr) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (g, c)) in a.0.iter().enumerate() {
        push_coeff(&mut out, c, i == 0);
        if c.abs() != 1 {
            out.push('*');
        }
        out.push_str(&s.generator(*g).name);
    }
    out.replace(" ", "")
}

/// `c[(y1, ..., a)]` terms; a pure-A point prints as `[a]`.
pub fn format_cycle(s: &Setting, z: &ZeroCycle) -> String {
    if z.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (p, c)) in z.terms.iter().enumerate() {
        push_coeff(&mut out, c, i == 0);
        let mut parts: Vec<String> =
            p.curve_points.iter().enumerate().map(|(k, y)| s.curves[k].point_name(*y).to_string()).collect();
        parts.push(format_aexpr(s, &p.a));
        if parts.len() == 1 {
            write!(out, "[{}]", parts[0]).unwrap();
        } else {
            write!(out, "[({})]", parts.join(", ")).unwrap();
        }
    }
    if !z.base.is_ground() {
        write!(out, " over level {}", z.base).unwrap();
    }
    out
}
