//! A small expression language for field definitions in configuration files.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `exp ln log sqrt sin cos tan sinh cosh tanh atan abs`.
//! Constants: `pi`, `e`. Expressions evaluate over [`Jet3`], so every field
//! written in this language is differentiated exactly.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::{Jet3, JetError, Point2, Rect, ScalarField2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Atan,
    Abs,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "atan" => Func::Atan,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn apply(self, u: Jet3) -> std::result::Result<Jet3, JetError> {
        Ok(match self {
            Func::Exp => u.exp(),
            Func::Ln => u.ln()?,
            Func::Sqrt => u.sqrt()?,
            Func::Sin => u.sin(),
            Func::Cos => u.cos(),
            Func::Tan => u.sin().checked_div(&u.cos())?,
            Func::Sinh => u.sinh(),
            Func::Cosh => u.cosh(),
            Func::Tanh => u.tanh(),
            Func::Atan => u.atan(),
            Func::Abs => {
                if u.value() == 0.0 {
                    return Err(JetError::OutOfDomain { op: "abs", value: 0.0 });
                } else if u.value() < 0.0 {
                    -u
                } else {
                    u
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn constant(&self) -> Option<f64> {
        match self {
            Node::Num(v) => Some(*v),
            Node::Var(_) => None,
            Node::Neg(a) => a.constant().map(|v| -v),
            Node::Add(a, b) => Some(a.constant()? + b.constant()?),
            Node::Sub(a, b) => Some(a.constant()? - b.constant()?),
            Node::Mul(a, b) => Some(a.constant()? * b.constant()?),
            Node::Div(a, b) => Some(a.constant()? / b.constant()?),
            Node::Pow(a, b) => Some(a.constant()?.powf(b.constant()?)),
            Node::Call(f, a) => Some(f.apply(Jet3::constant(a.constant()?)).ok()?.value()),
        }
    }

    fn uses_var(&self, slot: usize) -> bool {
        match self {
            Node::Num(_) => false,
            Node::Var(i) => *i == slot,
            Node::Neg(a) | Node::Call(_, a) => a.uses_var(slot),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.uses_var(slot) || b.uses_var(slot)
            }
        }
    }

    fn eval(&self, vars: &[Jet3]) -> std::result::Result<Jet3, JetError> {
        Ok(match self {
            Node::Num(v) => Jet3::constant(*v),
            Node::Var(i) => vars[*i],
            Node::Neg(a) => -a.eval(vars)?,
            Node::Add(a, b) => a.eval(vars)? + b.eval(vars)?,
            Node::Sub(a, b) => a.eval(vars)? - b.eval(vars)?,
            Node::Mul(a, b) => a.eval(vars)? * b.eval(vars)?,
            Node::Div(a, b) => a.eval(vars)?.checked_div(&b.eval(vars)?)?,
            Node::Pow(a, b) => {
                let base = a.eval(vars)?;
                match b.constant() {
                    Some(k) => base.powf(k)?,
                    None => (b.eval(vars)? * base.ln()?).exp(),
                }
            }
            Node::Call(f, a) => f.apply(a.eval(vars)?)?,
        })
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some('/') => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.peek() == Some('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while let Some(c) = self.src[self.pos..].chars().next() {
                    if c.is_alphanumeric() || c == '_' {
                        self.pos += c.len_utf8();
                    } else {
                        break;
                    }
                }
                let name = &self.src[start..self.pos];
                if self.peek() == Some('(') {
                    let Some(f) = Func::lookup(name) else {
                        self.pos = start;
                        return self.err(format!("unknown function '{name}'"));
                    };
                    self.bump();
                    let arg = self.expr()?;
                    if self.peek() != Some(')') {
                        return self.err("expected ')' after function argument");
                    }
                    self.bump();
                    return Ok(Node::Call(f, Box::new(arg)));
                }
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Node::Var(i));
                }
                match name {
                    "pi" => Ok(Node::Num(std::f64::consts::PI)),
                    "e" => Ok(Node::Num(std::f64::consts::E)),
                    _ => {
                        self.pos = start;
                        self.err(format!(
                            "unknown identifier '{name}' (allowed: {})",
                            self.vars.join(", ")
                        ))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected character '{c}'")),
            None => self.err("unexpected end of expression"),
        }
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        self.pos = i;
        match self.src[start..i].parse::<f64>() {
            Ok(v) => Ok(Node::Num(v)),
            Err(_) => {
                self.pos = start;
                self.err(format!("malformed number '{}'", &self.src[start..i]))
            }
        }
    }
}

/// A parsed expression over a fixed list of variable names.
#[derive(Clone, PartialEq)]
pub struct Expr {
    source: String,
    vars: Vec<String>,
    root: Node,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?})", self.source)
    }
}

impl Expr {
    pub fn parse(src: &str, vars: &[&str]) -> Result<Self> {
        let mut p = Parser { src, pos: 0, vars };
        let root = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(Self {
            source: src.to_string(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Evaluates with one jet per declared variable.
    pub fn eval(&self, vars: &[Jet3]) -> std::result::Result<Jet3, JetError> {
        assert_eq!(vars.len(), self.vars.len(), "variable count mismatch");
        self.root.eval(vars)
    }

    /// The expression's value if it contains no variables.
    pub fn constant(&self) -> Option<f64> {
        self.root.constant()
    }

    pub fn uses(&self, name: &str) -> bool {
        self.vars.iter().position(|v| v == name).is_some_and(|i| self.root.uses_var(i))
    }
}

/// A scalar field given by an expression in the two chart coordinates.
///
/// The coordinates can be referred to by their family names (for example `t`
/// and `theta`) or generically as `x1`, `x2`.
#[derive(Debug, Clone)]
pub struct ExprField {
    expr: Arc<Expr>,
    domain: Option<Rect>,
}

impl ExprField {
    pub fn parse(src: &str, names: [&str; 2]) -> Result<Self> {
        let expr = Expr::parse(src, &[names[0], names[1], "x1", "x2"])?;
        Ok(Self { expr: Arc::new(expr), domain: None })
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }
}

impl ScalarField2 for ExprField {
    fn eval(&self, p: Point2) -> Result<Jet3> {
        let (x1, x2) = Jet3::coordinates(p);
        self.expr
            .eval(&[x1, x2, x1, x2])
            .map_err(|source| Error::Domain { point: p, source })
    }

    fn domain(&self) -> Option<Rect> {
        self.domain
    }
}
