//! Text syntax for polynomial tails.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*      // '/' only by a constant
//! factor := '-' factor | atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! variable := 'u' j | 'd' a 'u' j | 'd' k a 'u' j
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::Polynomial;
use super::var::VarRef;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Var(VarRef),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => (out.push(Token::Plus), i += 1).1,
            '-' => (out.push(Token::Minus), i += 1).1,
            '*' => (out.push(Token::Star), i += 1).1,
            '/' => (out.push(Token::Slash), i += 1).1,
            '^' => (out.push(Token::Caret), i += 1).1,
            '(' => (out.push(Token::LParen), i += 1).1,
            ')' => (out.push(Token::RParen), i += 1).1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Int(s.parse().unwrap()));
            }
            'u' | 'd' => {
                let mut deriv = Vec::new();
                if c == 'd' {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        deriv.push(chars[i].to_digit(10).unwrap() as u8);
                        i += 1;
                    }
                    if i >= chars.len() || chars[i] != 'u' {
                        return Err(format!("expected 'u' after derivative prefix at offset {i}"));
                    }
                }
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(format!("missing component index at offset {start}"));
                }
                let comp: usize = chars[start..i].iter().collect::<String>().parse().unwrap();
                out.push(Token::Var(VarRef::try_new(comp, &deriv)?));
            }
            other => return Err(format!("unexpected character {other:?} at offset {i}")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial, String> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, String> {
        let mut acc = self.factor()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Star => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Token::Slash => {
                    self.pos += 1;
                    let d = self.factor()?;
                    let c = constant_value(&d).ok_or("division is only allowed by a constant")?;
                    if c.is_zero() {
                        return Err("division by zero".into());
                    }
                    acc = acc.scaled(&(Rational::from_integer(1.into()) / c));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, String> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(self.factor()?.scaled(&Rational::from_integer((-1).into())));
        }
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Int(n)) => {
                    let n: u32 = n.try_into().map_err(|_| "exponent too large")?;
                    return Ok(base.pow(n));
                }
                _ => return Err("expected integer exponent".into()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, String> {
        match self.next() {
            Some(Token::Int(n)) => Ok(Polynomial::constant(Rational::from_integer(n))),
            Some(Token::Var(v)) => Ok(Polynomial::var(v)),
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err("unbalanced parenthesis".into()),
                }
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

fn constant_value(p: &Polynomial) -> Option<Rational> {
    if p.is_zero() {
        return Some(Rational::zero());
    }
    match p.terms().collect::<Vec<_>>().as_slice() {
        [(m, c)] if m.is_empty() => Some((*c).clone()),
        _ => None,
    }
}

pub fn parse_polynomial(src: &str) -> Result<Polynomial, String> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { tokens, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input after token {}", p.pos));
    }
    Ok(out)
}
