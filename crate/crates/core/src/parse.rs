//! Polynomial expressions: a recursive-descent parser and the canonical text
//! form.
//!
//! ```text
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' ('+'|'-')? integer)?
//! base     := rational | variable | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! Whitespace is insignificant. Negative powers are accepted only on
//! monomials built from divisor variables.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Exponents, MonomialOrder, Polynomial, Rational, Ring, VarSet};

const MAX_POWER: u64 = 4096;

/// Variable names of the ambient ring, plus the divisor variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    names: Vec<String>,
    divisor: VarSet,
}

impl VarDecl {
    pub fn new<S: AsRef<str>, T: AsRef<str>>(names: &[S], divisor: &[T]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::InvalidInput(format!("invalid variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidInput(format!("variable `{n}` declared twice")));
            }
        }
        let mut set = VarSet::empty();
        for d in divisor {
            let d = d.as_ref().trim();
            let i = names
                .iter()
                .position(|n| n == d)
                .ok_or_else(|| Error::UndeclaredVariable(d.to_string()))?;
            set.insert(i);
        }
        Ring::new(names.len(), set)?;
        Ok(VarDecl { names, divisor: set })
    }

    /// Variables without a divisor.
    pub fn plain<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        VarDecl::new(names, &[] as &[&str])
    }

    /// Declares every identifier occurring in `text`, sorted.
    pub fn infer(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        for tok in Lexer::new(text).tokens()? {
            if let Tok::Ident(name) = tok.kind {
                if !names.contains(&name) {
                    names.push(name);
                }
            }
        }
        names.sort_by_key(|a| natural_key(a));
        VarDecl::plain(&names)
    }

    /// Same variables with the given divisor variables.
    pub fn with_divisor<S: AsRef<str>>(&self, divisor: &[S]) -> Result<Self> {
        VarDecl::new(&self.names, divisor)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn divisor(&self) -> VarSet {
        self.divisor
    }

    pub fn divisor_names(&self) -> Vec<String> {
        self.divisor.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn ring(&self) -> Ring {
        Ring::new(self.names.len(), self.divisor).expect("validated")
    }
}

/// `x10` sorts after `x9`.
fn natural_key(s: &str) -> (String, u64, String) {
    let stem: String = s.chars().take_while(|c| !c.is_ascii_digit()).collect();
    let digits: String = s[stem.len()..].chars().take_while(char::is_ascii_digit).collect();
    let rest = s[stem.len() + digits.len()..].to_string();
    (stem, digits.parse().unwrap_or(0), rest)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Number(Rational),
    Var { name: String, pos: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow { base: Box<Expr>, exp: i64, pos: usize },
}

/// Source text together with its syntax tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialExpression {
    pub source: String,
    pub ast: Expr,
}

impl PolynomialExpression {
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = Lexer::new(text).tokens()?;
        let mut p = Parser { tokens, at: 0, len: text.len() };
        if p.tokens.is_empty() {
            return Err(Error::Syntax { pos: 0, msg: "empty expression".into() });
        }
        let ast = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(Error::Syntax { pos: t.pos, msg: format!("unexpected {}", t.kind) });
        }
        Ok(PolynomialExpression { source: text.to_string(), ast })
    }

    pub fn evaluate(&self, decl: &VarDecl) -> Result<Polynomial> {
        eval(&self.ast, decl)
    }
}

pub fn parse_polynomial(text: &str, decl: &VarDecl) -> Result<Polynomial> {
    PolynomialExpression::parse(text)?.evaluate(decl)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokKind {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

use TokKind as Tok;

impl fmt::Display for TokKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(i) => write!(f, "number `{i}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokKind,
    pos: usize,
}

struct Lexer<'a> {
    text: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text }
    }

    fn tokens(&self) -> Result<Vec<Token>> {
        let bytes = self.text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = self.text[start..i].parse().expect("digits");
                out.push(Token { kind: Tok::Int(v), pos: start });
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token { kind: Tok::Ident(self.text[start..i].to_string()), pos: start });
            } else if "+-*/^()".contains(c) {
                out.push(Token { kind: Tok::Sym(c), pos: i });
                i += 1;
            } else {
                let ch = self.text[i..].chars().next().expect("in bounds");
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
            }
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.len, |t| t.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { kind: Tok::Sym(s), .. }) if *s == c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let epos = self.pos();
        let k = match self.peek() {
            Some(Token { kind: Tok::Int(v), .. }) => v.clone(),
            _ => return Err(Error::Syntax { pos: epos, msg: "expected an integer exponent".into() }),
        };
        self.at += 1;
        let k: u64 = k
            .try_into()
            .ok()
            .filter(|&k| k <= MAX_POWER)
            .ok_or_else(|| Error::Syntax { pos: epos, msg: format!("exponent exceeds {MAX_POWER}") })?;
        let exp = if negative { -(k as i64) } else { k as i64 };
        Ok(Expr::Pow { base: Box::new(base), exp, pos })
    }

    fn base(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(Error::Syntax { pos, msg: "unexpected end of input".into() });
        };
        self.at += 1;
        match tok.kind {
            Tok::Int(num) => {
                if self.eat('/') {
                    let dpos = self.pos();
                    match self.peek() {
                        Some(Token { kind: Tok::Int(d), .. }) if !d.is_zero() => {
                            let d = d.clone();
                            self.at += 1;
                            Ok(Expr::Number(Rational::new(num, d)))
                        }
                        _ => Err(Error::Syntax { pos: dpos, msg: "expected a positive integer denominator".into() }),
                    }
                } else {
                    Ok(Expr::Number(Rational::from_integer(num)))
                }
            }
            Tok::Ident(name) => Ok(Expr::Var { name, pos: tok.pos }),
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Syntax { pos: self.pos(), msg: "expected `)`".into() });
                }
                Ok(e)
            }
            other => Err(Error::Syntax { pos: tok.pos, msg: format!("unexpected {other}") }),
        }
    }
}

fn eval(e: &Expr, decl: &VarDecl) -> Result<Polynomial> {
    let ring = decl.ring();
    Ok(match e {
        Expr::Number(c) => ring.constant(c.clone()),
        Expr::Var { name, .. } => {
            let i = decl
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UndeclaredVariable(name.clone()))?;
            ring.var(i)
        }
        Expr::Neg(a) => -&eval(a, decl)?,
        Expr::Add(a, b) => &eval(a, decl)? + &eval(b, decl)?,
        Expr::Sub(a, b) => &eval(a, decl)? - &eval(b, decl)?,
        Expr::Mul(a, b) => &eval(a, decl)? * &eval(b, decl)?,
        Expr::Pow { base, exp, pos } => {
            let b = eval(base, decl)?;
            if *exp >= 0 {
                b.pow(*exp as u32)
            } else {
                invert_monomial(&b, base, decl, *pos)?.pow(exp.unsigned_abs() as u32)
            }
        }
    })
}

fn invert_monomial(b: &Polynomial, base: &Expr, decl: &VarDecl, pos: usize) -> Result<Polynomial> {
    if let Expr::Var { name, .. } = base {
        let i = decl.names.iter().position(|n| n == name).expect("evaluated");
        if !decl.divisor.contains(i) {
            return Err(Error::NegativePower(name.clone()));
        }
    }
    if b.len() != 1 {
        return Err(Error::Syntax { pos, msg: "negative power of a non-monomial".into() });
    }
    let (e, c) = b.terms().next().expect("one term");
    for (i, &a) in e.as_slice().iter().enumerate() {
        if a != 0 && !decl.divisor.contains(i) {
            return Err(Error::NegativePower(decl.names[i].clone()));
        }
    }
    let inv = Exponents::new(e.as_slice().iter().map(|a| -a).collect());
    b.ring().try_term(inv, c.recip())
}

/// Canonical text: terms sorted decreasingly under `order`, coefficients as
/// `num/den` (denominator omitted when 1), monomials as `x^2*y`.
pub fn render(p: &Polynomial, names: &[String], order: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (e, c)) in p.sorted_terms(order).into_iter().enumerate() {
        let negative = c.is_negative();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let a = c.abs();
        let mono = render_monomial(e, names);
        match (a.is_one(), mono.is_empty()) {
            (true, false) => out.push_str(&mono),
            (_, true) => out.push_str(&render_rational(&a)),
            (false, false) => {
                out.push_str(&render_rational(&a));
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

pub fn render_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn render_monomial(e: &Exponents, names: &[String]) -> String {
    let parts: Vec<String> = e
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| if a == 1 { names[i].clone() } else { format!("{}^{a}", names[i]) })
        .collect();
    parts.join("*")
}
