//! Tokenizer and recursive-descent parser shared by every literal grammar.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := '-'? INT | '(' rational (',' rational)* ')'
//! atom     := INT | IDENT | '(' expr ')'
//!           | 's' ('^' exponent)? '(' expr ')'      σ^k applied to expr
//!           | 'O' '(' expr ')'                      precision marker
//! ```

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(bytes[start..i].iter().collect()), start));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(bytes[start..i].iter().collect()), start));
                continue;
            }
            other => return Err(Error::parse(i, format!("unexpected character '{other}'"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, bytes.len()));
    Ok(out)
}

/// Exponent after `^`: an integer or a parenthesized rational vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Int(i64),
    /// Raw rational literals (`p`, `-p`, `p/q`), one per value group coordinate.
    Vector(Vec<String>),
}

impl Exponent {
    /// Integer value, accepting `(k)` as well as `k`.
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Exponent::Int(k) => Some(*k),
            Exponent::Vector(v) if v.len() == 1 => v[0].parse().ok(),
            Exponent::Vector(_) => None,
        }
    }

    /// Coordinates as rational literals.
    pub fn coords(&self) -> Vec<String> {
        match self {
            Exponent::Int(k) => vec![k.to_string()],
            Exponent::Vector(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(String),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    Sigma(i64, Box<Expr>),
    BigO(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: usize,
}

impl Expr {
    fn new(kind: ExprKind, pos: usize) -> Self {
        Expr { kind, pos }
    }

    /// Visits every variable name in the tree.
    pub fn variables(&self, out: &mut Vec<String>) {
        match &self.kind {
            ExprKind::Int(_) => {}
            ExprKind::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            ExprKind::Neg(a) | ExprKind::Pow(a, _) | ExprKind::Sigma(_, a) | ExprKind::BigO(a) => a.variables(out),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::new(ExprKind::Add(Box::new(lhs), Box::new(rhs)), pos);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::new(ExprKind::Sub(Box::new(lhs), Box::new(rhs)), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::new(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::new(ExprKind::Div(Box::new(lhs), Box::new(rhs)), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            let pos = self.pos();
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            let pos = self.pos();
            self.bump();
            let e = self.exponent()?;
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), e), pos));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<String> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Int(d) => Ok(if neg { format!("-{d}") } else { d }),
            _ => Err(Error::parse(self.pos(), "expected an integer")),
        }
    }

    fn exponent(&mut self) -> Result<Exponent> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let mut coords = Vec::new();
            loop {
                let mut lit = self.signed_int()?;
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Int(d) => {
                            lit.push('/');
                            lit.push_str(&d);
                        }
                        _ => return Err(Error::parse(self.pos(), "expected a denominator")),
                    }
                }
                coords.push(lit);
                match self.bump() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => return Err(Error::parse(self.pos(), "expected ',' or ')' in exponent")),
                }
            }
            return Ok(Exponent::Vector(coords));
        }
        let pos = self.pos();
        let lit = self.signed_int()?;
        lit.parse().map(Exponent::Int).map_err(|_| Error::parse(pos, "exponent out of range"))
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(d) => Ok(Expr::new(ExprKind::Int(d), pos)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "s" && matches!(self.peek(), Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::new(ExprKind::Sigma(1, Box::new(inner)), pos))
            }
            Tok::Ident(name) if name == "s" && matches!(self.peek(), Tok::Caret) => {
                // s^k(expr) is an application; s^k alone is a power of the symbol s
                let save = self.at;
                self.bump();
                let e = self.exponent()?;
                if *self.peek() == Tok::LParen {
                    let k = e.as_int().ok_or_else(|| Error::parse(pos, "σ power must be an integer"))?;
                    self.bump();
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::new(ExprKind::Sigma(k, Box::new(inner)), pos))
                } else {
                    self.at = save;
                    Ok(Expr::new(ExprKind::Var(name), pos))
                }
            }
            Tok::Ident(name) if name == "O" && matches!(self.peek(), Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::new(ExprKind::BigO(Box::new(inner)), pos))
            }
            Tok::Ident(name) => Ok(Expr::new(ExprKind::Var(name), pos)),
            _ => Err(Error::parse(pos, "expected a number, variable or '('")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(Error::parse(p.pos(), "trailing input"));
    }
    Ok(e)
}

/// Splits `[a, b, [c, d]]` into its top-level items (as source text).
pub fn split_list(src: &str) -> Result<Vec<String>> {
    let s = src.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::parse(0, "expected a bracketed list"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for (i, c) in inner.chars().enumerate() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::parse(i + 1, "unbalanced brackets"));
                }
            }
            ',' if depth == 0 => {
                items.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if depth != 0 {
        return Err(Error::parse(s.len(), "unbalanced brackets"));
    }
    items.push(cur.trim().to_string());
    Ok(items)
}

/// `[[a, b], [c, d]]` as rows of source text.
pub fn split_matrix(src: &str) -> Result<Vec<Vec<String>>> {
    split_list(src)?.iter().map(|row| split_list(row)).collect()
}
