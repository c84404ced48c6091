//! Parsers for Burnside expressions and set specifications.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | '[' label '/' label ']' | '(' expr ')' | '-' factor
//!         | ('res' | 'tr' | 'norm') '(' label ',' label ',' expr ')'
//!         | 'conj' '(' INT ',' expr ')'
//! ```
//!
//! `res(K,H,x)` restricts `x` from `H` to `K`; `tr(K,H,x)` and `norm(K,H,x)` go from `K` to `H`.
//! A set specification is an expression without operations, such as `2*[C2/e] + [C2/C2]`.

use std::sync::Arc;

use crate::burnside::{BurnsideElement, TambaraContext};
use crate::error::{Error, Result};
use crate::gset::GSet;
use crate::lattice::SubgroupLattice;

#[derive(Debug, Clone)]
enum Value {
    Int(i64),
    Elem(BurnsideElement),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    lattice: &'a Arc<SubgroupLattice>,
    ctx: Option<&'a TambaraContext>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if !(c.is_ascii_alphanumeric() || c == '#' || c == '_') {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    /// A subgroup label, either a name such as `C2#1` or an element list such as `[0,3]`.
    fn label(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let text = if self.peek_raw() == Some('[') {
            let end = self.src[start..]
                .find(']')
                .ok_or_else(|| self.err("unterminated element list"))?;
            self.pos = start + end + 1;
            &self.src[start..self.pos]
        } else {
            self.ident()
        };
        if text.is_empty() {
            return Err(self.err("expected a subgroup label"));
        }
        self.lattice
            .resolve(text)
            .map_err(|_| Error::parse(start, format!("unknown subgroup '{text}'")))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "expected an integer"))
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.combine(acc, rhs, false)?;
                }
                Some('-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    let rhs = self.negate(rhs)?;
                    acc = self.combine(acc, rhs, false)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = self.combine(acc, rhs, true)?;
        }
        Ok(acc)
    }

    fn negate(&self, v: Value) -> Result<Value> {
        Ok(match v {
            Value::Int(n) => Value::Int(n.checked_neg().ok_or_else(|| self.err("integer overflow"))?),
            Value::Elem(x) => Value::Elem(x.neg()?),
        })
    }

    fn combine(&self, a: Value, b: Value, mul: bool) -> Result<Value> {
        let at = |e: Error| match e {
            Error::Domain(msg) => self.err(msg),
            other => other,
        };
        Ok(match (a, b, mul) {
            (Value::Int(x), Value::Int(y), true) => Value::Int(x.checked_mul(y).ok_or_else(|| self.err("integer overflow"))?),
            (Value::Int(x), Value::Int(y), false) => Value::Int(x.checked_add(y).ok_or_else(|| self.err("integer overflow"))?),
            (Value::Int(k), Value::Elem(e), true) | (Value::Elem(e), Value::Int(k), true) => Value::Elem(e.scale(k)?),
            (Value::Elem(x), Value::Elem(y), true) => Value::Elem(x.mul(&y).map_err(at)?),
            (Value::Elem(x), Value::Elem(y), false) => Value::Elem(x.add(&y).map_err(at)?),
            _ => return Err(self.err("cannot add an integer to a set; write n*[H/H]")),
        })
    }

    fn elem(&mut self, start: usize) -> Result<BurnsideElement> {
        match self.expr()? {
            Value::Elem(x) => Ok(x),
            Value::Int(_) => Err(Error::parse(start, "expected a Burnside element, found an integer")),
        }
    }

    fn factor(&mut self) -> Result<Value> {
        let start = self.pos;
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                let v = self.factor()?;
                self.negate(v)
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('[') => {
                self.pos += 1;
                let h = self.label()?;
                self.expect('/')?;
                let l = self.label()?;
                self.expect(']')?;
                BurnsideElement::orbit(self.lattice.clone(), h, l)
                    .map(Value::Elem)
                    .map_err(|e| Error::parse(start, e.to_string()))
            }
            Some(c) if c.is_ascii_digit() => Ok(Value::Int(self.int()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let name_pos = self.pos;
                let name = self.ident();
                let ctx = match (name, self.ctx) {
                    ("res" | "tr" | "norm" | "conj", Some(ctx)) => ctx,
                    ("res" | "tr" | "norm" | "conj", None) => {
                        return Err(Error::parse(name_pos, format!("'{name}' is not available here")))
                    }
                    _ => return Err(Error::parse(name_pos, format!("unknown operation '{name}'"))),
                };
                self.expect('(')?;
                let result = if name == "conj" {
                    let g = self.int()?;
                    self.expect(',')?;
                    let x = self.elem(self.pos)?;
                    if g as usize >= self.lattice.group().order() || g < 0 {
                        return Err(Error::parse(name_pos, format!("no group element {g}")));
                    }
                    ctx.conj(g as usize, &x)?
                } else {
                    let k = self.label()?;
                    self.expect(',')?;
                    let h = self.label()?;
                    self.expect(',')?;
                    self.skip_ws();
                    let arg_pos = self.pos;
                    let x = self.elem(arg_pos)?;
                    let lb = |s: usize| self.lattice.label(s).to_string();
                    if !self.lattice.contains(h, k) {
                        return Err(Error::parse(name_pos, format!("{} is not a subgroup of {}", lb(k), lb(h))));
                    }
                    let want = if name == "res" { h } else { k };
                    if x.level() != want {
                        return Err(Error::parse(
                            arg_pos,
                            format!("argument lives at {}, expected {}", lb(x.level()), lb(want)),
                        ));
                    }
                    match name {
                        "res" => ctx.res(k, &x)?,
                        "tr" => ctx.tr(h, &x)?,
                        _ => ctx.norm(h, &x)?,
                    }
                };
                self.expect(')')?;
                Ok(Value::Elem(result))
            }
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn parse(lattice: &Arc<SubgroupLattice>, ctx: Option<&TambaraContext>, text: &str) -> Result<BurnsideElement> {
    let mut p = Parser {
        src: text,
        pos: 0,
        lattice,
        ctx,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    match v {
        Value::Elem(x) => Ok(x),
        Value::Int(_) => Err(Error::parse(0, "expression has no level; use classes such as [H/L]")),
    }
}

/// Evaluates an expression in the generating operations of the context.
pub fn eval(ctx: &TambaraContext, text: &str) -> Result<BurnsideElement> {
    parse(ctx.lattice(), Some(ctx), text)
}

/// Parses a combination of orbits such as `2*[C2/e] + [C2/C2]`.
pub fn parse_element(lattice: &Arc<SubgroupLattice>, text: &str) -> Result<BurnsideElement> {
    parse(lattice, None, text)
}

/// Parses a set specification into a set acted on by `level`.
pub fn parse_kset(lattice: &Arc<SubgroupLattice>, level: usize, text: &str) -> Result<GSet> {
    parse_kset_element(lattice, level, text)?.realize()
}

/// Parses a set specification without materializing it.
pub fn parse_kset_element(lattice: &Arc<SubgroupLattice>, level: usize, text: &str) -> Result<BurnsideElement> {
    let x = parse_element(lattice, text)?;
    if x.is_zero() {
        return Ok(BurnsideElement::zero(lattice.clone(), level));
    }
    if x.level() != level {
        return Err(Error::parse(
            0,
            format!("set is acted on by {}, expected {}", lattice.label(x.level()), lattice.label(level)),
        ));
    }
    if !x.is_effective() {
        return Err(Error::parse(0, "set specification has a negative multiplicity"));
    }
    Ok(x)
}
