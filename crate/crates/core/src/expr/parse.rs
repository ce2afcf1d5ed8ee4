//! Recursive-descent parser for the expression language.
//!
//! Precedence, loosest first:
//!
//! ```text
//! expr  := or
//! or    := xor ('|' xor)*
//! xor   := and (('^' | 'xor') and)*
//! and   := shift ('&' shift)*
//! shift := sum (('<<' | '>>') INT)*
//! sum   := prod (('+' | '-') prod)*
//! prod  := pow (('*' | '/') pow)*
//! pow   := unary (('**' | tight '^') unary)?
//! unary := ('~' | '-') unary | atom
//! atom  := INT | INT '/' ODDINT | IDENT | IDENT '(' args ')' | '(' expr ')'
//! ```
//!
//! A caret written with no whitespace on either side and followed by a
//! digit (`x^2`) is a power; any other caret (`x ^ 5`) is XOR.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::{Constant, TExpr};
use crate::error::{Error, Result};

/// Largest integer exponent expanded into a product.
const MAX_POWER: u128 = 256;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u128),
    Ident(String),
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    Amp,
    Pipe,
    Caret { tight: bool },
    Tilde,
    Shl,
    Shr,
    LParen,
    RParen,
    Comma,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &[u8]| bytes.get(i..i + 2) == Some(s);
        let tok = if c.is_ascii_digit() {
            let (v, len) = lex_int(&src[i..]).ok_or_else(|| Error::Parse {
                position: start,
                message: "integer literal out of range".into(),
            })?;
            i += len;
            Tok::Int(v)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if two(b"**") {
            i += 2;
            Tok::StarStar
        } else if two(b"<<") {
            i += 2;
            Tok::Shl
        } else if two(b">>") {
            i += 2;
            Tok::Shr
        } else {
            i += 1;
            match c {
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                b'~' => Tok::Tilde,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'^' => {
                    let before = start > 0 && !bytes[start - 1].is_ascii_whitespace();
                    let after = bytes.get(i).is_some_and(|b| b.is_ascii_digit());
                    Tok::Caret {
                        tight: before && after,
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        position: start,
                        message: format!("unexpected character {:?}", src[start..].chars().next()),
                    })
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

fn lex_int(s: &str) -> Option<(u128, usize)> {
    let b = s.as_bytes();
    if b.len() > 2 && b[0] == b'0' && (b[1] == b'x' || b[1] == b'X') {
        let len = b[2..].iter().take_while(|c| c.is_ascii_hexdigit()).count();
        if len == 0 {
            return None;
        }
        let v = u128::from_str_radix(&s[2..2 + len], 16).ok()?;
        (v <= u64::MAX as u128).then_some((v, 2 + len))
    } else {
        let len = b.iter().take_while(|c| c.is_ascii_digit()).count();
        let v: u128 = s[..len].parse().ok()?;
        (v <= u64::MAX as u128).then_some((v, len))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

/// Parses an expression in the published grammar.
pub fn parse(src: &str) -> Result<TExpr> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.or()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.error(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("integer {v}"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::End => "end of input".into(),
        other => format!("token {other:?}"),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> Error {
        Error::Parse {
            position: self.offset(),
            message,
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                describe(&want),
                describe(self.peek())
            )))
        }
    }

    fn or(&mut self) -> Result<TExpr> {
        let mut lhs = self.xor()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = TExpr::or(lhs, self.xor()?);
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<TExpr> {
        let mut lhs = self.and()?;
        loop {
            match self.peek() {
                Tok::Caret { tight: false } => {}
                Tok::Ident(s) if s == "xor" => {}
                _ => return Ok(lhs),
            }
            self.bump();
            lhs = TExpr::xor(lhs, self.and()?);
        }
    }

    fn and(&mut self) -> Result<TExpr> {
        let mut lhs = self.shift()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = TExpr::and(lhs, self.shift()?);
        }
        Ok(lhs)
    }

    fn shift(&mut self) -> Result<TExpr> {
        let mut lhs = self.sum()?;
        loop {
            let left = match self.peek() {
                Tok::Shl => true,
                Tok::Shr => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let k = self.small_int("shift amount")?;
            lhs = if left {
                TExpr::shl(lhs, k)
            } else {
                TExpr::shr(lhs, k)
            };
        }
    }

    fn sum(&mut self) -> Result<TExpr> {
        let mut lhs = self.prod()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = TExpr::add(lhs, self.prod()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = TExpr::sub(lhs, self.prod()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn prod(&mut self) -> Result<TExpr> {
        let mut lhs = self.pow()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = TExpr::mul(lhs, self.pow()?);
                }
                Tok::Slash => {
                    let at = self.offset();
                    self.bump();
                    let rhs = self.pow()?;
                    lhs = divide(lhs, rhs).map_err(|message| Error::Parse {
                        position: at,
                        message,
                    })?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn pow(&mut self) -> Result<TExpr> {
        let base = self.unary()?;
        match self.peek() {
            Tok::StarStar | Tok::Caret { tight: true } => {}
            _ => return Ok(base),
        }
        let at = self.offset();
        self.bump();
        let exponent = self.unary()?;
        power(base, exponent).map_err(|message| Error::Parse {
            position: at,
            message,
        })
    }

    fn unary(&mut self) -> Result<TExpr> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(TExpr::not(self.unary()?))
            }
            Tok::Minus => {
                self.bump();
                Ok(TExpr::neg(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<TExpr> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(v) => {
                let is_ratio = *self.peek() == Tok::Slash
                    && matches!(self.toks.get(self.pos + 1), Some((Tok::Int(_), _)));
                if !is_ratio {
                    return Ok(TExpr::int(v as i128));
                }
                self.bump();
                let den_at = self.offset();
                let Tok::Int(den) = self.bump() else {
                    unreachable!()
                };
                Constant::ratio(v as i128, den as i128)
                    .map(TExpr::Const)
                    .ok_or_else(|| Error::Parse {
                        position: den_at,
                        message: format!("rational constant {v}/{den} has an even denominator"),
                    })
            }
            Tok::Ident(name) => {
                if name == "xor" {
                    return Err(Error::Parse {
                        position: at,
                        message: "`xor` is an operator".into(),
                    });
                }
                if *self.peek() == Tok::LParen {
                    self.bump();
                    self.call(&name, at)
                } else {
                    Ok(TExpr::Var(name))
                }
            }
            Tok::LParen => {
                let e = self.or()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            t => Err(Error::Parse {
                position: at,
                message: format!("expected an operand, found {}", describe(&t)),
            }),
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(v) if v <= u32::MAX as u128 => Ok(v as u32),
            t => Err(Error::Parse {
                position: at,
                message: format!("{what} must be a non-negative integer literal, found {}", describe(&t)),
            }),
        }
    }

    fn call(&mut self, name: &str, at: usize) -> Result<TExpr> {
        let e = match name {
            "delta" => {
                let j = self.small_int("digit index")?;
                self.expect(Tok::Comma)?;
                TExpr::digit(j, self.or()?)
            }
            "trunc" => {
                let k = self.small_int("truncation width")?;
                self.expect(Tok::Comma)?;
                TExpr::trunc(k, self.or()?)
            }
            "inv" => TExpr::inv(self.or()?),
            "exp1p2" => {
                let u = self.or()?;
                self.expect(Tok::Comma)?;
                TExpr::exp1p2(u, self.or()?)
            }
            "shl" | "shr" => {
                let e = self.or()?;
                self.expect(Tok::Comma)?;
                let k = self.small_int("shift amount")?;
                if name == "shl" {
                    TExpr::shl(e, k)
                } else {
                    TExpr::shr(e, k)
                }
            }
            _ => {
                return Err(Error::Parse {
                    position: at,
                    message: format!("unknown function `{name}` (there are no user-defined functions)"),
                })
            }
        };
        self.expect(Tok::RParen)?;
        Ok(e)
    }
}

/// Constant value of `e` when it is a literal, possibly negated.
fn literal(e: &TExpr) -> Option<Constant> {
    match e {
        TExpr::Const(c) => Some(*c),
        TExpr::Neg(inner) => literal(inner).map(|c| Constant {
            num: -c.num,
            den: c.den,
        }),
        _ => None,
    }
}

fn is_even_multiple(e: &TExpr) -> bool {
    match e {
        TExpr::Mul(a, b) => [a, b]
            .iter()
            .any(|s| literal(s).is_some_and(|c| c.num & 1 == 0)),
        TExpr::Shl(_, k) => *k >= 1,
        _ => false,
    }
}

/// Denominators of the shape `odd + 2*e` are odd for every `e`.
fn is_odd_pattern(e: &TExpr) -> bool {
    match e {
        TExpr::Add(a, b) => {
            let odd = |s: &TExpr| literal(s).is_some_and(|c| c.num & 1 == 1);
            (odd(a) && is_even_multiple(b)) || (odd(b) && is_even_multiple(a))
        }
        _ => false,
    }
}

fn divide(num: TExpr, den: TExpr) -> core::result::Result<TExpr, String> {
    if let Some(c) = literal(&den) {
        if c.num & 1 == 0 {
            return Err(format!("division by the even constant {c}"));
        }
        let recip = Constant::ratio(c.den as i128, c.num).expect("odd numerator");
        return Ok(TExpr::mul(num, TExpr::Const(recip)));
    }
    if is_odd_pattern(&den) {
        return Ok(TExpr::mul(num, TExpr::inv(den)));
    }
    Err("a divisor must be an odd constant or have the form 1 + 2*e".into())
}

fn power(base: TExpr, exponent: TExpr) -> core::result::Result<TExpr, String> {
    if let Some(a) = literal(&base) {
        if a.num & 1 == 1 {
            // a = 1 + 2u with u = (a - 1) / 2 = ((num - den) / 2) / den.
            let u = Constant::ratio((a.num - a.den as i128) / 2, a.den as i128)
                .expect("odd denominator");
            return Ok(TExpr::exp1p2(TExpr::Const(u), exponent));
        }
    }
    match literal(&exponent) {
        Some(k) if k.is_integer() && k.num >= 0 && (k.num as u128) <= MAX_POWER => {
            Ok(TExpr::pow(base, k.num as u32))
        }
        Some(_) => Err(format!("exponent must be an integer in 0..={MAX_POWER}")),
        None => Err("a variable exponent needs a constant odd base".into()),
    }
}
