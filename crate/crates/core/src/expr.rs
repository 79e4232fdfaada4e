//! Tiny arithmetic expression language for target functions.
//!
//! Grammar (`^` is right-associative and binds tighter than unary minus):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | variable | '(' expr ')'
//! ```
//!
//! Variables are `y`/`x`/`u` (first coordinate, alias `y1`) and `y2`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let e = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input in {src:?} at token {}",
                parser.pos
            )));
        }
        Ok(e)
    }

    /// Number of coordinates referenced: 0, 1 or 2.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) => a.arity(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.arity().max(b.arity()),
        }
    }

    pub fn eval(&self, vars: [f64; 2]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => vars[*i],
            Expr::Neg(a) => -a.eval(vars),
            Expr::Add(a, b) => a.eval(vars) + b.eval(vars),
            Expr::Sub(a, b) => a.eval(vars) - b.eval(vars),
            Expr::Mul(a, b) => a.eval(vars) * b.eval(vars),
            Expr::Div(a, b) => a.eval(vars) / b.eval(vars),
            Expr::Pow(a, b) => {
                let base = a.eval(vars);
                match b.as_ref() {
                    Expr::Num(e) if e.fract() == 0.0 && e.abs() < 1024.0 => base.powi(*e as i32),
                    _ => base.powf(b.eval(vars)),
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(0) => write!(f, "y1"),
            Expr::Var(_) => write!(f, "y2"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Var(usize),
    Op(char),
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent suffix, e.g. 1e-3
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {text:?}")))?;
            out.push(Token::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let var = match name.as_str() {
                "y" | "x" | "u" | "y1" | "s" => 0,
                "y2" | "t" => 1,
                _ => return Err(Error::Parse(format!("unknown variable {name:?}"))),
            };
            out.push(Token::Var(var));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Token::Op(c),
                '(' => Token::Open,
                ')' => Token::Close,
                _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
            };
            out.push(tok);
            i += 1;
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty expression".into()));
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

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Token::Op(c)) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op) = self.eat_op(&['+', '-']) {
            let rhs = self.term()?;
            lhs = match op {
                '+' => Expr::Add(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Sub(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.eat_op(&['*', '/']) {
            let rhs = self.unary()?;
            lhs = match op {
                '*' => Expr::Mul(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Div(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op(&['-']).is_some() {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_op(&['+']).is_some() {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_op(&['^']).is_some() {
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Token::Num(v)) => Ok(Expr::Num(v)),
            Some(Token::Var(i)) => Ok(Expr::Var(i)),
            Some(Token::Open) => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Token::Close) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval1(src: &str, y: f64) -> f64 {
        Expr::parse(src).unwrap().eval([y, 0.0])
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval1("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval1("(1 + 2) * 3", 0.0), 9.0);
        assert_eq!(eval1("2 ^ 3 ^ 2", 0.0), 512.0);
        assert_eq!(eval1("-2 ^ 2", 0.0), -4.0);
        assert_eq!(eval1("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(eval1("10 - 4 - 3", 0.0), 3.0);
        assert_eq!(eval1("2 ^ -1", 0.0), 0.5);
        assert_eq!(eval1("1.5e1 + .5", 0.0), 15.5);
    }

    #[test]
    fn polynomial_in_y() {
        let f = |y: f64| y.powi(3) - 5.0 * y * y + 6.0 * y + 2.0;
        for y in [0.0, 0.3, 1.0, 1.7] {
            assert!((eval1("y^3 - 5*y^2 + 6*y + 2", y) - f(y)).abs() < 1e-14);
        }
    }

    #[test]
    fn bivariate_variables() {
        let e = Expr::parse("y1^3 * y2^2").unwrap();
        assert_eq!(e.arity(), 2);
        assert_eq!(e.eval([0.5, 2.0]), 0.5);
        assert_eq!(Expr::parse("3").unwrap().arity(), 0);
        assert_eq!(Expr::parse("y*y").unwrap().arity(), 1);
    }

    #[test]
    fn errors() {
        for bad in ["", "1 +", "(y", "y)", "z", "2 $ 3", "1..2"] {
            assert!(Expr::parse(bad).is_err(), "{bad:?} should fail");
        }
    }
}
