use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{allowed_exponent, Expr};
use crate::numerics::{square_free_part, QuadExt, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unsupported exponent {exponent} at position {pos} (denominator must be 1, 2, 3 or 6)")]
    UnsupportedExponent { pos: usize, exponent: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Rat(Rational),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Sqrt,
    Cbrt,
    SqrtN(u64),
    End,
}

struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::SyntaxError { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out: Vec<Token> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(syntax(i, "decimal literals are not allowed; write a fraction"));
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            // `p/q` with no whitespace is one rational literal, unless it
            // continues a division or sits in an exponent.
            let after_op = matches!(out.last().map(|t| &t.tok), Some(Tok::Slash) | Some(Tok::Caret));
            if !after_op
                && i + 1 < bytes.len()
                && bytes[i] == b'/'
                && bytes[i + 1].is_ascii_digit()
            {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let d: BigInt = src[i + 1..j].parse().expect("digits");
                if d.is_zero() {
                    return Err(syntax(i + 1, "zero denominator"));
                }
                out.push(Token { tok: Tok::Rat(Rational::new(n, d)), pos: start });
                i = j;
            } else {
                out.push(Token { tok: Tok::Int(n), pos: start });
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let tok = match &src[start..i] {
                "x" => Tok::X,
                "sqrt" => Tok::Sqrt,
                "cbrt" => Tok::Cbrt,
                "sqrt2" => Tok::SqrtN(2),
                "sqrt3" => Tok::SqrtN(3),
                "sqrt5" => Tok::SqrtN(5),
                other => return Err(syntax(start, format!("unknown identifier `{other}`"))),
            };
            out.push(Token { tok, pos: start });
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'.' => return Err(syntax(i, "decimal literals are not allowed; write a fraction")),
            _ => return Err(syntax(i, format!("unexpected character `{}`", c as char))),
        };
        out.push(Token { tok, pos: i });
        i += 1;
    }
    out.push(Token { tok: Tok::End, pos: src.len() });
    Ok(out)
}

/// Parses the expression grammar: `+ - * / ^`, parentheses, `sqrt(.)`,
/// `cbrt(.)`, rational literals and the constants `sqrt2`, `sqrt3`, `sqrt5`.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(syntax(p.pos(), "unexpected trailing input")),
    }
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

/// A parsed operand plus whether it came straight from a literal (so that
/// `3*sqrt(2)` may fold into one constant).
struct Operand {
    e: Expr,
    literal: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let j = (self.i + k).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = lhs + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let first = self.unary()?;
        let mut lhs = first.e;
        if first.literal {
            if let (Expr::Const(r), Tok::Star) = (&lhs, self.peek()) {
                if r.is_rational() {
                    if let Some((d, len)) = self.surd_at(1) {
                        if *self.peek_at(1 + len) != Tok::Caret {
                            let coeff = r.a().clone();
                            for _ in 0..=len {
                                self.bump();
                            }
                            lhs = Expr::Const(QuadExt::new(Rational::zero(), coeff, d));
                        }
                    }
                }
            }
        }
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = lhs * self.unary()?.e;
                }
                Tok::Slash => {
                    self.bump();
                    lhs = lhs / self.unary()?.e;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Operand, ParseError> {
        if *self.peek() == Tok::Minus {
            if let Some((v, len)) = self.literal_at(1) {
                if *self.peek_at(1 + len) != Tok::Caret {
                    for _ in 0..=len {
                        self.bump();
                    }
                    return Ok(Operand { e: Expr::Const(-v), literal: true });
                }
            }
            self.bump();
            let inner = self.unary()?;
            return Ok(Operand { e: -inner.e, literal: false });
        }
        self.power()
    }

    /// Positive rational or surd literal at offset `k`: value and token length.
    fn literal_at(&self, k: usize) -> Option<(QuadExt, usize)> {
        match self.peek_at(k) {
            Tok::Int(n) => Some((QuadExt::rational(Rational::from(n.clone())), 1)),
            Tok::Rat(r) => Some((QuadExt::rational(r.clone()), 1)),
            _ => self.surd_at(k).map(|(d, len)| (QuadExt::sqrt_int(d), len)),
        }
    }

    /// `sqrtN` or `sqrt(INT)` with a square-free INT >= 2 at offset `k`.
    fn surd_at(&self, k: usize) -> Option<(u64, usize)> {
        match self.peek_at(k) {
            Tok::SqrtN(d) => Some((*d, 1)),
            Tok::Sqrt => {
                let (Tok::LParen, Tok::Int(n), Tok::RParen) =
                    (self.peek_at(k + 1), self.peek_at(k + 2), self.peek_at(k + 3))
                else {
                    return None;
                };
                let d = n.to_u64()?;
                if d < 2 {
                    return None;
                }
                let (s, _, certain) = square_free_part(n);
                (certain && s.is_one()).then_some((d, 4))
            }
            _ => None,
        }
    }

    /// `( [-]lit (+|-) [lit *] surd )` as one quadratic constant.
    fn quad_literal(&self) -> Option<(QuadExt, usize)> {
        let mut k = 1;
        let neg_a = *self.peek_at(k) == Tok::Minus;
        if neg_a {
            k += 1;
        }
        let a = match self.peek_at(k) {
            Tok::Int(n) => Rational::from(n.clone()),
            Tok::Rat(r) => r.clone(),
            _ => return None,
        };
        k += 1;
        let sub = match self.peek_at(k) {
            Tok::Plus => false,
            Tok::Minus => true,
            _ => return None,
        };
        k += 1;
        let mut b = Rational::one();
        match self.peek_at(k) {
            Tok::Int(n) if *self.peek_at(k + 1) == Tok::Star => {
                b = Rational::from(n.clone());
                k += 2;
            }
            Tok::Rat(r) if *self.peek_at(k + 1) == Tok::Star => {
                b = r.clone();
                k += 2;
            }
            _ => {}
        }
        let (d, len) = self.surd_at(k)?;
        k += len;
        if *self.peek_at(k) != Tok::RParen {
            return None;
        }
        let a = if neg_a { -a } else { a };
        let b = if sub { -b } else { b };
        Some((QuadExt::new(a, b, d), k + 1))
    }

    fn power(&mut self) -> Result<Operand, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let exponent = self.exponent()?;
        if !allowed_exponent(&exponent) {
            return Err(ParseError::UnsupportedExponent { pos, exponent: exponent.to_string() });
        }
        Ok(Operand { e: Expr::Pow(Box::new(base.e), exponent), literal: false })
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        match self.bump() {
            Tok::Int(n) => Ok(Rational::from(n)),
            Tok::Minus => match self.bump() {
                Tok::Int(n) => Ok(-Rational::from(n)),
                _ => Err(syntax(self.pos(), "expected integer exponent")),
            },
            Tok::LParen => {
                let neg = if *self.peek() == Tok::Minus {
                    self.bump();
                    true
                } else {
                    false
                };
                let v = match self.bump() {
                    Tok::Rat(r) => r,
                    Tok::Int(n) => {
                        if *self.peek() == Tok::Slash {
                            self.bump();
                            match self.bump() {
                                Tok::Int(d) if !d.is_zero() => Rational::new(n, d),
                                _ => return Err(syntax(self.pos(), "expected denominator")),
                            }
                        } else {
                            Rational::from(n)
                        }
                    }
                    _ => return Err(syntax(self.pos(), "expected exponent")),
                };
                self.expect(Tok::RParen, "`)` after exponent")?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(syntax(self.toks[self.i.saturating_sub(1)].pos, "expected exponent")),
        }
    }

    fn atom(&mut self) -> Result<Operand, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Operand { e: Expr::rational(Rational::from(n)), literal: true })
            }
            Tok::Rat(r) => {
                self.bump();
                Ok(Operand { e: Expr::rational(r), literal: true })
            }
            Tok::X => {
                self.bump();
                Ok(Operand { e: Expr::Var, literal: false })
            }
            Tok::SqrtN(d) => {
                self.bump();
                Ok(Operand { e: Expr::Const(QuadExt::sqrt_int(d)), literal: true })
            }
            Tok::Sqrt | Tok::Cbrt => {
                if let Some((d, len)) = self.surd_at(0).filter(|_| *self.peek() == Tok::Sqrt) {
                    for _ in 0..len {
                        self.bump();
                    }
                    return Ok(Operand { e: Expr::Const(QuadExt::sqrt_int(d)), literal: true });
                }
                let q = if self.bump() == Tok::Sqrt { 2 } else { 3 };
                self.expect(Tok::LParen, "`(`")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Operand { e: Expr::Pow(Box::new(inner), Rational::new(1, q)), literal: false })
            }
            Tok::LParen => {
                if let Some((q, len)) = self.quad_literal() {
                    for _ in 0..len {
                        self.bump();
                    }
                    return Ok(Operand { e: Expr::Const(q), literal: false });
                }
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Operand { e: inner, literal: false })
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            other => Err(syntax(pos, format!("unexpected token {other:?}"))),
        }
    }
}
