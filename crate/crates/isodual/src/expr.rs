//! Small radical expressions: integers combined with `+ − × ÷`, `sqrt(…)`
//! and `root4(2)`.  Gram entries carry both the expression and its
//! evaluated float.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
    /// fourth root of 2 (the only quartic radical in the grammar)
    Root4Two,
}

impl Expr {
    pub fn eval(&self) -> f64 {
        match self {
            Expr::Int(v) => *v as f64,
            Expr::Add(a, b) => a.eval() + b.eval(),
            Expr::Sub(a, b) => a.eval() - b.eval(),
            Expr::Mul(a, b) => a.eval() * b.eval(),
            Expr::Div(a, b) => a.eval() / b.eval(),
            Expr::Neg(a) => -a.eval(),
            Expr::Sqrt(a) => a.eval().sqrt(),
            Expr::Root4Two => 2f64.sqrt().sqrt(),
        }
    }

    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = lex(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in expression {text:?}")));
        }
        Ok(e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Root4Two => write!(f, "root4(2)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Sqrt,
    Root4,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '×' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' | '÷' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let v: i64 = lit
                    .parse()
                    .map_err(|_| Error::Parse(format!("integer literal in {text:?}")))?;
                out.push(Tok::Int(v));
            }
            _ => {
                let rest: String = chars[i..].iter().collect();
                if rest.starts_with("sqrt") {
                    out.push(Tok::Sqrt);
                    i += 4;
                } else if rest.starts_with("root4") {
                    out.push(Tok::Root4);
                    i += 5;
                } else {
                    return Err(Error::Parse(format!("unexpected character {c:?} in {text:?}")));
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {t:?} at position {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::Sqrt) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Sqrt(Box::new(inner)))
            }
            Some(Tok::Root4) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                self.expect(Tok::Int(2))?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Root4Two)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-14, "{a} vs {b}");
    }

    #[test]
    fn parse_and_eval() {
        close(Expr::parse("(1+sqrt(2))/2").unwrap().eval(), (1.0 + 2f64.sqrt()) / 2.0);
        close(Expr::parse("root4(2)").unwrap().eval(), 2f64.powf(0.25));
        close(Expr::parse("-3*sqrt(5+2*sqrt(5))/5").unwrap().eval(), -3.0 * (5.0 + 2.0 * 5f64.sqrt()).sqrt() / 5.0);
        close(Expr::parse("2/sqrt(3)").unwrap().eval(), 2.0 / 3f64.sqrt());
        close(Expr::parse("1 - 1/sqrt(2)").unwrap().eval(), 1.0 - 1.0 / 2f64.sqrt());
    }

    #[test]
    fn precedence() {
        close(Expr::parse("1+2*3").unwrap().eval(), 7.0);
        close(Expr::parse("(1+2)*3").unwrap().eval(), 9.0);
        close(Expr::parse("8/2/2").unwrap().eval(), 2.0);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("sqrt(").is_err());
        assert!(Expr::parse("1 + x").is_err());
        assert!(Expr::parse("root4(3)").is_err());
    }

    #[test]
    fn display_roundtrip() {
        let e = Expr::parse("(1+sqrt(2))/2").unwrap();
        let text = e.to_string();
        let back = Expr::parse(&text).unwrap();
        close(back.eval(), e.eval());
    }
}
