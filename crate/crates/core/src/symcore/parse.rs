//! Text syntax for polynomials, rational functions and differential operators.
//!
//! Variables are `z1..zn` (aliases `x, y, z` when `n <= 3`), partial
//! derivatives `d1..dn` (aliases `dx, dy, dz`). A product of operators is
//! their composition, so `x*dx` is `x d/dx` while `dx*x` is `x d/dx + 1`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::rational::Rational;
use super::{DifferentialOperator, Polynomial, RationalFunction, SymError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Partial(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
enum Expr {
    Num(BigInt),
    Var(usize),
    Partial(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn location(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn err_at(src: &str, offset: usize, msg: impl Into<String>) -> SymError {
    let (line, col) = location(src, offset);
    SymError::Parse { line, col, msg: msg.into() }
}

fn resolve_ident(name: &str, dim: usize) -> Option<Tok> {
    let alias = ["x", "y", "z"];
    if dim <= 3 {
        if let Some(i) = alias.iter().position(|a| *a == name) {
            return (i < dim).then_some(Tok::Var(i));
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Some(i) = alias.iter().position(|a| *a == rest) {
                return (i < dim).then_some(Tok::Partial(i));
            }
        }
    }
    let indexed = |prefix: char| -> Option<usize> {
        let digits = name.strip_prefix(prefix)?;
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0') {
            return None;
        }
        let k: usize = digits.parse().ok()?;
        (k >= 1 && k <= dim).then_some(k - 1)
    };
    if let Some(i) = indexed('z') {
        return Some(Tok::Var(i));
    }
    indexed('d').map(Tok::Partial)
}

fn tokenize(src: &str, dim: usize) -> Result<Vec<(Tok, usize)>, SymError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let name = &src[start..i];
                let tok = resolve_ident(name, dim)
                    .ok_or_else(|| err_at(src, start, format!("unknown symbol '{name}' in dimension {dim}")))?;
                out.push((tok, start));
                continue;
            }
            other => return Err(err_at(src, start, format!("unexpected character '{other}'"))),
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, dim: usize) -> Result<Self, SymError> {
        Ok(Parser { src, toks: tokenize(src, dim)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn parse_all(mut self) -> Result<Expr, SymError> {
        if self.toks.is_empty() {
            return Err(err_at(self.src, 0, "empty expression"));
        }
        let e = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(err_at(self.src, self.offset(), "unexpected token"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, SymError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SymError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SymError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, SymError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(k)) => {
                let k: u32 = k
                    .try_into()
                    .map_err(|_| err_at(self.src, at, "exponent too large"))?;
                Ok(Expr::Pow(Box::new(base), k))
            }
            _ => Err(err_at(self.src, at, "exponent must be a non-negative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Expr, SymError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Num(n)),
            Some(Tok::Var(i)) => Ok(Expr::Var(i)),
            Some(Tok::Partial(i)) => Ok(Expr::Partial(i)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let close = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(err_at(self.src, close, "expected ')'")),
                }
            }
            Some(_) => Err(err_at(self.src, at, "expected a number, variable or '('")),
            None => Err(err_at(self.src, at, "unexpected end of expression")),
        }
    }
}

fn eval_op(e: &Expr, dim: usize, src: &str) -> Result<DifferentialOperator, SymError> {
    Ok(match e {
        Expr::Num(n) => DifferentialOperator::multiplication(Polynomial::constant(dim, Rational::from_integer(n.clone()))),
        Expr::Var(i) => DifferentialOperator::multiplication(Polynomial::var(dim, *i)),
        Expr::Partial(i) => DifferentialOperator::partial(dim, *i),
        Expr::Neg(a) => -&eval_op(a, dim, src)?,
        Expr::Add(a, b) => &eval_op(a, dim, src)? + &eval_op(b, dim, src)?,
        Expr::Sub(a, b) => &eval_op(a, dim, src)? - &eval_op(b, dim, src)?,
        Expr::Mul(a, b) => eval_op(a, dim, src)?.compose(&eval_op(b, dim, src)?)?,
        Expr::Div(a, b, at) => {
            let denom = eval_op(b, dim, src)?;
            let c = constant_of(&denom)
                .ok_or_else(|| err_at(src, *at, "operators may only be divided by a nonzero constant"))?;
            eval_op(a, dim, src)?.scale(&c.recip())
        }
        Expr::Pow(a, k) => {
            let base = eval_op(a, dim, src)?;
            let mut acc = DifferentialOperator::identity(dim);
            for _ in 0..*k {
                acc = acc.compose(&base)?;
            }
            acc
        }
    })
}

fn constant_of(op: &DifferentialOperator) -> Option<Rational> {
    let mut terms = op.terms();
    let (nu, a) = terms.next()?;
    if terms.next().is_some() || !nu.is_zero() {
        return None;
    }
    a.as_constant().filter(|c| !c.is_zero())
}

fn eval_rf(e: &Expr, dim: usize, src: &str) -> Result<RationalFunction, SymError> {
    Ok(match e {
        Expr::Num(n) => RationalFunction::constant(dim, Rational::from_integer(n.clone())),
        Expr::Var(i) => RationalFunction::from_poly(Polynomial::var(dim, *i)),
        Expr::Partial(_) => return Err(err_at(src, 0, "derivative symbol in a function expression")),
        Expr::Neg(a) => -&eval_rf(a, dim, src)?,
        Expr::Add(a, b) => &eval_rf(a, dim, src)? + &eval_rf(b, dim, src)?,
        Expr::Sub(a, b) => &eval_rf(a, dim, src)? - &eval_rf(b, dim, src)?,
        Expr::Mul(a, b) => &eval_rf(a, dim, src)? * &eval_rf(b, dim, src)?,
        Expr::Div(a, b, at) => {
            let d = eval_rf(b, dim, src)?;
            if d.is_zero() {
                return Err(err_at(src, *at, "division by zero"));
            }
            (&eval_rf(a, dim, src)? / &d)?
        }
        Expr::Pow(a, k) => {
            let base = eval_rf(a, dim, src)?;
            let mut acc = RationalFunction::constant(dim, Rational::from_integer(1.into()));
            for _ in 0..*k {
                acc = &acc * &base;
            }
            acc
        }
    })
}

pub fn parse_operator(src: &str, dim: usize) -> Result<DifferentialOperator, SymError> {
    let e = Parser::new(src, dim)?.parse_all()?;
    eval_op(&e, dim, src)
}

pub fn parse_rational_function(src: &str, dim: usize) -> Result<RationalFunction, SymError> {
    let e = Parser::new(src, dim)?.parse_all()?;
    eval_rf(&e, dim, src)
}

pub fn parse_polynomial(src: &str, dim: usize) -> Result<Polynomial, SymError> {
    parse_rational_function(src, dim)?
        .as_polynomial()
        .ok_or_else(|| err_at(src, 0, "expression is not a polynomial"))
}
