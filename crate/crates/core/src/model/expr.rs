//! Small expression language for closed-form inhomogeneities:
//! numbers, `x`, `pi`, `+ - * / ^`, and the functions `exp`, `sech`,
//! `tanh` and `pow(a, b)`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Sech(Box<Expr>),
    Tanh(Box<Expr>),
}

/// Value and first derivative carried together (forward-mode AD).
#[derive(Clone, Copy, Debug)]
struct Dual(f64, f64);

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.dual(x).0
    }

    /// Value and exact derivative `(a(x), a'(x))`.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let Dual(v, d) = self.dual(x);
        (v, d)
    }

    fn dual(&self, x: f64) -> Dual {
        match self {
            Expr::Const(c) => Dual(*c, 0.0),
            Expr::X => Dual(x, 1.0),
            Expr::Neg(a) => {
                let Dual(v, d) = a.dual(x);
                Dual(-v, -d)
            }
            Expr::Add(a, b) => {
                let (a, b) = (a.dual(x), b.dual(x));
                Dual(a.0 + b.0, a.1 + b.1)
            }
            Expr::Sub(a, b) => {
                let (a, b) = (a.dual(x), b.dual(x));
                Dual(a.0 - b.0, a.1 - b.1)
            }
            Expr::Mul(a, b) => {
                let (a, b) = (a.dual(x), b.dual(x));
                Dual(a.0 * b.0, a.1 * b.0 + a.0 * b.1)
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.dual(x), b.dual(x));
                Dual(a.0 / b.0, (a.1 * b.0 - a.0 * b.1) / (b.0 * b.0))
            }
            Expr::Pow(a, b) => {
                let (a, b) = (a.dual(x), b.dual(x));
                let v = a.0.powf(b.0);
                let d = if b.1 == 0.0 {
                    if a.1 == 0.0 {
                        0.0
                    } else {
                        b.0 * a.0.powf(b.0 - 1.0) * a.1
                    }
                } else {
                    v * (b.1 * a.0.ln() + b.0 * a.1 / a.0)
                };
                Dual(v, d)
            }
            Expr::Exp(a) => {
                let a = a.dual(x);
                let v = a.0.exp();
                Dual(v, v * a.1)
            }
            Expr::Sech(a) => {
                let a = a.dual(x);
                let s = 1.0 / a.0.cosh();
                Dual(s, -s * a.0.tanh() * a.1)
            }
            Expr::Tanh(a) => {
                let a = a.dual(x);
                let t = a.0.tanh();
                Dual(t, (1.0 - t * t) * a.1)
            }
        }
    }
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::X => write!(f, "x"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "pow({a}, {b})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sech(a) => write!(f, "sech({a})"),
            Expr::Tanh(a) => write!(f, "tanh({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Expr {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    // unary minus binds looser than '^': -x^2 == -(x^2)
    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                match ident {
                    "x" => Ok(Expr::X),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "exp" | "sech" | "tanh" => {
                        self.expect(b'(')?;
                        let arg = Box::new(self.expr()?);
                        self.expect(b')')?;
                        Ok(match ident {
                            "exp" => Expr::Exp(arg),
                            "sech" => Expr::Sech(arg),
                            _ => Expr::Tanh(arg),
                        })
                    }
                    "pow" => {
                        self.expect(b'(')?;
                        let a = self.expr()?;
                        self.expect(b',')?;
                        let b = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Pow(Box::new(a), Box::new(b)))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error(&format!("unknown identifier '{ident}'")))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let s = self.src;
        while self.pos < s.len() && (s[self.pos].is_ascii_digit() || s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let mut look = self.pos + 1;
            if look < s.len() && (s[look] == b'+' || s[look] == b'-') {
                look += 1;
            }
            if look < s.len() && s[look].is_ascii_digit() {
                self.pos = look;
                while self.pos < s.len() && s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).unwrap_or_default();
        text.parse::<f64>().map(Expr::Const).map_err(|_| {
            self.pos = start;
            self.error("malformed number")
        })
    }
}
