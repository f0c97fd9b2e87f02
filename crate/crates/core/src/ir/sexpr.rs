//! Canonical S-expression printing and a parser for both the S-expression
//! form and a conventional call/infix syntax.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeric::{CInterval, Dyadic, RInterval, Rat};

use super::{ConstKind, Expr, IrError, Node, Session};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

pub fn rat_text(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn write_sexpr(e: &Expr, out: &mut String) {
    match e.node() {
        Node::Rat(r) => out.push_str(&rat_text(r)),
        Node::Const(ConstKind::Pi) => out.push_str("(const pi)"),
        Node::Const(ConstKind::E) => out.push_str("(const e)"),
        Node::PolyRoot { coeffs, selector } => {
            out.push_str("(root (");
            for (i, c) in coeffs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_sexpr(c, out);
            }
            let _ = write!(
                out,
                ") (box {} {} {} {}))",
                selector.re.lo(),
                selector.re.hi(),
                selector.im.lo(),
                selector.im.hi()
            );
        }
        Node::Log { base, arg, branch } => {
            out.push_str("(log ");
            write_sexpr(base, out);
            out.push(' ');
            write_sexpr(arg, out);
            let _ = write!(out, " {branch})");
        }
        node => {
            out.push('(');
            out.push_str(node.kind_name());
            for c in node.children() {
                out.push(' ');
                write_sexpr(c, out);
            }
            out.push(')');
        }
    }
}

/// Deterministic S-expression text of `e`.
pub fn to_sexpr(e: &Expr) -> String {
    let mut s = String::new();
    write_sexpr(e, &mut s);
    s
}

impl Expr {
    pub fn to_sexpr(&self) -> String {
        to_sexpr(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Num(String),
    Ident(String),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
    space_before: bool,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = vec![];
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let mut space = false;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            space = true;
            i += 1;
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        let tok = if let Some(t) = simple {
            i += 1;
            t
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            Tok::Num(chars[start..i].iter().map(|(_, c)| c).collect())
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().map(|(_, c)| c).collect())
        } else {
            return Err(ParseError { offset: off, message: format!("unexpected character '{c}'") });
        };
        out.push(Token { tok, offset: off, space_before: space });
        space = false;
    }
    Ok(out)
}

fn parse_number(text: &str, offset: usize) -> Result<Rat, ParseError> {
    let err = || ParseError { offset, message: format!("malformed number '{text}'") };
    match text.split_once('.') {
        None => Ok(Rat::from_integer(text.parse::<BigInt>().map_err(|_| err())?)),
        Some((int, frac)) => {
            if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
                return Err(err());
            }
            let digits = format!("{int}{frac}");
            let n = digits.parse::<BigInt>().map_err(|_| err())?;
            Ok(Rat::new(n, BigInt::from(10).pow(frac.len() as u32)))
        }
    }
}

const SEXPR_HEADS: &[&str] = &["add", "sub", "mul", "div", "sqrt", "root", "exp", "log", "sin_pi", "arcsin_pi", "const"];

struct Parser<'a> {
    session: &'a Session,
    toks: Vec<Token>,
    pos: usize,
    end: usize,
}

type PResult = Result<Expr, IrError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.offset).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> IrError {
        IrError::Parse(ParseError { offset: self.offset(), message: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), IrError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> PResult {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let r = self.term()?;
                    acc = self.session.add(&acc, &r)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let r = self.term()?;
                    acc = self.session.sub(&acc, &r)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let r = self.unary()?;
                    acc = self.session.mul(&acc, &r)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let r = self.unary()?;
                    acc = self.session.div(&acc, &r)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.session.neg(&v));
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let z = self.unary()?;
            return Ok(self.session.pow(&base, &z)?);
        }
        Ok(base)
    }

    fn args(&mut self) -> Result<Vec<Expr>, IrError> {
        self.expect(Tok::LParen, "'('")?;
        let mut out = vec![self.expr()?];
        while matches!(self.peek(), Some(Tok::Comma) | Some(Tok::Semi)) {
            self.pos += 1;
            out.push(self.expr()?);
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(out)
    }

    fn int_arg(&self, e: &Expr, what: &str) -> Result<i64, IrError> {
        e.as_rat()
            .filter(|r| r.is_integer())
            .and_then(|r| num_traits::ToPrimitive::to_i64(&r.to_integer()))
            .ok_or_else(|| self.err(format!("{what} must be an integer literal")))
    }

    fn call(&mut self, name: &str, start: usize) -> PResult {
        let s = self.session;
        let a = self.args()?;
        let arity = |lo: usize, hi: usize| -> Result<(), IrError> {
            if a.len() < lo || a.len() > hi {
                Err(IrError::Parse(ParseError {
                    offset: start,
                    message: format!("{name} takes {lo}..={hi} arguments, got {}", a.len()),
                }))
            } else {
                Ok(())
            }
        };
        match name {
            "sqrt" => {
                arity(1, 1)?;
                s.sqrt(&a[0])
            }
            "sin_pi" => {
                arity(1, 1)?;
                s.sin_pi(&a[0])
            }
            "cos_pi" => {
                arity(1, 1)?;
                s.cos_pi(&a[0])
            }
            "arcsin_over_pi" | "arcsin_pi" => {
                arity(1, 1)?;
                s.arcsin_over_pi(&a[0])
            }
            "pow" => {
                arity(2, 2)?;
                s.pow(&a[0], &a[1])
            }
            "exp" => {
                arity(1, 1)?;
                s.exp(&a[0])
            }
            "ln" => {
                arity(1, 2)?;
                let k = if a.len() == 2 { self.int_arg(&a[1], "branch")? } else { 0 };
                s.ln(&a[0], k)
            }
            "log" => {
                arity(1, 3)?;
                let k = if a.len() == 3 { self.int_arg(&a[2], "branch")? } else { 0 };
                // a literal 0 in the base slot selects the natural logarithm
                let natural = a.len() == 1 || a[1].as_rat().is_some_and(|r| r.is_zero());
                if natural {
                    s.ln(&a[0], k)
                } else {
                    s.log(&a[1], &a[0], k)
                }
            }
            "clavius" => {
                arity(1, 1)?;
                let n = self.int_arg(&a[0], "clavius index")?;
                if n < 1 {
                    return Err(self.err("clavius index must be at least 1"));
                }
                crate::geometry::clavius_point(s, n as u32).map(|p| p.x).map_err(|e| match e {
                    crate::geometry::GeomError::Ir(i) => i,
                    other => IrError::OutOfDomain(other.to_string()),
                })
            }
            _ => Err(IrError::Parse(ParseError { offset: start, message: format!("unknown function '{name}'") })),
        }
    }

    fn atom(&mut self) -> PResult {
        let start = self.offset();
        let Some(tok) = self.toks.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        match tok.tok {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(self.session.rat(parse_number(&n, start)?))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    return self.call(&name, start);
                }
                self.ident(&name, start)
            }
            Tok::LParen => {
                let sexpr_mode = match self.toks.get(self.pos + 1) {
                    Some(Token { tok: Tok::Ident(h), .. }) if SEXPR_HEADS.contains(&h.as_str()) => {
                        self.toks.get(self.pos + 2).is_some_and(|t| t.space_before)
                    }
                    _ => false,
                };
                if sexpr_mode {
                    return self.sx();
                }
                self.pos += 1;
                let v = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            _ => Err(self.err("expected a number, name or '('")),
        }
    }

    fn ident(&self, name: &str, start: usize) -> PResult {
        match name {
            "pi" => Ok(self.session.pi()),
            "e" => Ok(self.session.e()),
            "i" => Ok(self.session.i()),
            _ => Err(IrError::Parse(ParseError { offset: start, message: format!("unknown name '{name}'") })),
        }
    }

    /// Rational atom of the S-expression form: `[-]N[/M]`.
    fn sx_rat(&mut self) -> Result<Rat, IrError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.offset();
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(self.err("expected a rational"));
        };
        self.pos += 1;
        let mut r = parse_number(&n, start)?;
        if self.peek() == Some(&Tok::Slash) && !self.toks[self.pos].space_before {
            self.pos += 1;
            let dstart = self.offset();
            let Some(Tok::Num(d)) = self.peek().cloned() else {
                return Err(self.err("expected a denominator"));
            };
            self.pos += 1;
            let d = parse_number(&d, dstart)?;
            if d.is_zero() {
                return Err(IrError::DivisionByZero);
            }
            r /= d;
        }
        Ok(if neg { -r } else { r })
    }

    fn sx(&mut self) -> PResult {
        match self.peek() {
            Some(Tok::LParen) => {}
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                let start = self.offset();
                self.pos += 1;
                return self.ident(&name, start);
            }
            _ => return Ok(self.session.rat(self.sx_rat()?)),
        }
        self.pos += 1;
        let start = self.offset();
        let Some(Tok::Ident(head)) = self.peek().cloned() else {
            return Err(self.err("expected an operator name"));
        };
        self.pos += 1;
        let s = self.session;
        let out = match head.as_str() {
            "add" | "sub" | "mul" | "div" => {
                let a = self.sx()?;
                let b = self.sx()?;
                match head.as_str() {
                    "add" => s.add(&a, &b),
                    "sub" => s.sub(&a, &b),
                    "mul" => s.mul(&a, &b),
                    _ => s.div(&a, &b),
                }?
            }
            "sqrt" => s.sqrt(&self.sx()?)?,
            "sin_pi" => s.sin_pi(&self.sx()?)?,
            "arcsin_pi" => s.arcsin_over_pi(&self.sx()?)?,
            "exp" => {
                let b = self.sx()?;
                let z = self.sx()?;
                s.pow(&b, &z)?
            }
            "log" => {
                let b = self.sx()?;
                let w = self.sx()?;
                let k = self.sx_rat()?;
                if !k.is_integer() || k.abs() > Rat::from_integer(BigInt::from(i64::MAX)) {
                    return Err(self.err("branch index must be an integer"));
                }
                let k = num_traits::ToPrimitive::to_i64(&k.to_integer()).unwrap();
                s.log(&b, &w, k)?
            }
            "const" => {
                let Some(Tok::Ident(k)) = self.peek().cloned() else {
                    return Err(self.err("expected 'pi' or 'e'"));
                };
                self.pos += 1;
                match k.as_str() {
                    "pi" => s.pi(),
                    "e" => s.e(),
                    _ => return Err(self.err("expected 'pi' or 'e'")),
                }
            }
            "root" => {
                self.expect(Tok::LParen, "'(' opening the coefficient list")?;
                let mut coeffs = vec![];
                while self.peek() != Some(&Tok::RParen) {
                    coeffs.push(self.sx()?);
                }
                self.pos += 1;
                self.expect(Tok::LParen, "'(box ...)'")?;
                match self.peek() {
                    Some(Tok::Ident(b)) if b == "box" => self.pos += 1,
                    _ => return Err(self.err("expected 'box'")),
                }
                let mut ends = vec![];
                for _ in 0..4 {
                    let off = self.offset();
                    let r = self.sx_rat()?;
                    let d = Dyadic::try_from_rat(&r).ok_or_else(|| {
                        IrError::Parse(ParseError { offset: off, message: "box endpoints must be dyadic".into() })
                    })?;
                    ends.push(d);
                }
                self.expect(Tok::RParen, "')'")?;
                if ends[0] > ends[1] || ends[2] > ends[3] {
                    return Err(self.err("box endpoints out of order"));
                }
                let selector = CInterval::new(
                    RInterval::new(ends[0].clone(), ends[1].clone()),
                    RInterval::new(ends[2].clone(), ends[3].clone()),
                );
                s.poly_root(coeffs, selector)?
            }
            _ => {
                return Err(IrError::Parse(ParseError { offset: start, message: format!("unknown operator '{head}'") }))
            }
        };
        self.expect(Tok::RParen, "')'")?;
        Ok(out)
    }
}

impl Session {
    /// Parse an expression in S-expression or call/infix syntax.
    pub fn parse(&self, text: &str) -> Result<Expr, IrError> {
        let toks = lex(text)?;
        if toks.is_empty() {
            return Err(IrError::Parse(ParseError { offset: 0, message: "empty expression".into() }));
        }
        let mut p = Parser { session: self, toks, pos: 0, end: text.len() };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}
