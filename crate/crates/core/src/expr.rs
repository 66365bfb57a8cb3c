//! A small arithmetic expression language for component functions.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | atom
//! atom   := number | 'pi' | var | func '(' expr ')' | '(' expr ')'
//! var    := 'u' digits          (1-based)
//! func   := sin | cos | sinh | cosh | exp
//! ```
//!
//! Expressions evaluate over any [`Scalar`], so derivatives come for free.

use crate::error::{GeomError, Result};
use crate::scalar::Scalar;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Zero-based variable index.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn sin(self) -> Expr {
        Expr::Call(Func::Sin, Box::new(self))
    }
    pub fn cos(self) -> Expr {
        Expr::Call(Func::Cos, Box::new(self))
    }
    pub fn sinh(self) -> Expr {
        Expr::Call(Func::Sinh, Box::new(self))
    }
    pub fn cosh(self) -> Expr {
        Expr::Call(Func::Cosh, Box::new(self))
    }
    pub fn exp(self) -> Expr {
        Expr::Call(Func::Exp, Box::new(self))
    }

    pub fn eval<S: Scalar>(&self, vars: &[S]) -> S {
        match self {
            Expr::Const(v) => S::cst(*v),
            Expr::Var(i) => vars[*i],
            Expr::Neg(a) => -a.eval(vars),
            Expr::Add(a, b) => a.eval(vars) + b.eval(vars),
            Expr::Sub(a, b) => a.eval(vars) - b.eval(vars),
            Expr::Mul(a, b) => a.eval(vars) * b.eval(vars),
            Expr::Div(a, b) => a.eval(vars) / b.eval(vars),
            Expr::Call(f, a) => {
                let x = a.eval(vars);
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Exp => x.exp(),
                }
            }
        }
    }

    /// One past the largest variable index used (0 for constants).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) | Expr::Call(_, a) => a.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.arity().max(b.arity())
            }
        }
    }

    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

macro_rules! bin_op {
    ($tr:ident, $m:ident, $var:ident) => {
        impl std::ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::$var(Box::new(self), Box::new(o))
            }
        }
    };
}
bin_op!(Add, add, Add);
bin_op!(Sub, sub, Sub);
bin_op!(Mul, mul, Mul);
bin_op!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::Var(i) => write!(f, "u{}", i + 1),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> GeomError {
        GeomError::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    lhs = lhs + self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    lhs = lhs - self.term()?;
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    lhs = lhs * self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    lhs = lhs / self.unary()?;
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if word == "pi" {
                    return Ok(Expr::Const(std::f64::consts::PI));
                }
                if let Some(func) = Func::from_name(word) {
                    if self.peek() != Some(b'(') {
                        return Err(self.err("expected '(' after function name"));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    if self.peek() != Some(b')') {
                        return Err(self.err("expected ')'"));
                    }
                    self.pos += 1;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if let Some(idx) = word.strip_prefix('u') {
                    if let Ok(k) = idx.parse::<usize>() {
                        if k >= 1 {
                            return Ok(Expr::Var(k - 1));
                        }
                    }
                }
                self.pos = start;
                Err(self.err(&format!("unknown identifier '{word}'")))
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // exponent part
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if digits == self.pos {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| GeomError::Parse { pos: start, msg: format!("bad number '{text}'") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dual;

    #[test]
    fn precedence_and_unary_minus() {
        let e = Expr::parse("-u1 + 2*u2/4 - (u1 - 1)").unwrap();
        assert_eq!(e.eval(&[3.0, 2.0]), -3.0 + 1.0 - 2.0);
    }

    #[test]
    fn functions_and_pi() {
        let e = Expr::parse("sin(u1)*sinh(u2) + cos(pi) + exp(0)").unwrap();
        let v = e.eval(&[0.5, 0.25]);
        assert!((v - (0.5f64.sin() * 0.25f64.sinh())).abs() < 1e-15);
    }

    #[test]
    fn scientific_literal() {
        assert_eq!(Expr::parse("1.5e-2").unwrap().eval::<f64>(&[]), 0.015);
    }

    #[test]
    fn derivative_through_dual() {
        let e = Expr::parse("u1*cosh(u1)").unwrap();
        let d = e.eval(&[Dual::new(0.3, 1.0)]);
        assert!((d.eps - (0.3f64.cosh() + 0.3 * 0.3f64.sinh())).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_position() {
        match Expr::parse("u1 + foo(u2)") {
            Err(GeomError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Expr::parse("u0").is_err());
        assert!(Expr::parse("(u1").is_err());
        assert!(Expr::parse("u1 u2").is_err());
    }

    #[test]
    fn display_round_trips() {
        let e = Expr::parse("sin(u3)*sinh(u4) - u2/3").unwrap();
        let back = Expr::parse(&e.to_string()).unwrap();
        let x = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(e.eval(&x), back.eval(&x));
        assert_eq!(e.arity(), 4);
    }
}
