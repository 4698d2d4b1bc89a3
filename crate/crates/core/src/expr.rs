//! A small arithmetic grammar for exact parameter values such as
//! `(5-sqrt5)/8` or `(1/2)(1-sin(3pi/14))`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | 'pi' | 'π' | func atom | 'sqrt' number | '(' expr ')'
//! func    := 'sqrt' | '√' | 'sin' | 'cos'
//! ```
//!
//! Unicode minus `−` and middle dot `·` are accepted as `-` and `*`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // Scientific notation: 1e-3, 2.5E+4.
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
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect::<String>().to_lowercase()));
            }
            'π' => {
                out.push(Token::Ident("pi".into()));
                i += 1;
            }
            '√' => {
                out.push(Token::Ident("sqrt".into()));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Token::Op(c));
                i += 1;
            }
            '−' => {
                out.push(Token::Op('-'));
                i += 1;
            }
            '·' | '×' => {
                out.push(Token::Op('*'));
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
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

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if op == '+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Token::Num(_) | Token::Ident(_) | Token::LParen))
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    v *= self.unary()?;
                }
                Some(Token::Op('/')) => {
                    self.pos += 1;
                    v /= self.unary()?;
                }
                _ if self.starts_atom() => v *= self.power()?,
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> Result<f64> {
        if let Some(Token::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if let Some(Token::Op('+')) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<f64> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64> {
        match self.next() {
            Some(Token::Num(v)) => Ok(v),
            Some(Token::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(v),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "pi" => Ok(std::f64::consts::PI),
                "sqrt" | "sin" | "cos" => {
                    // `sqrt5` binds to the bare number only; `sqrt(…)` to the group.
                    let arg = self.power_free_atom()?;
                    Ok(match name.as_str() {
                        "sqrt" => arg.sqrt(),
                        "sin" => arg.sin(),
                        _ => arg.cos(),
                    })
                }
                other => Err(Error::Parse(format!("unknown identifier {other:?}"))),
            },
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }

    fn power_free_atom(&mut self) -> Result<f64> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-self.power_free_atom()?)
            }
            _ => self.atom(),
        }
    }
}

/// Evaluates an expression in double precision.
pub fn eval(src: &str) -> Result<f64> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input in {src:?}")));
    }
    if !v.is_finite() {
        return Err(Error::Parse(format!("{src:?} does not evaluate to a finite number")));
    }
    Ok(v)
}

/// An exact expression together with its double-precision value.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactValue {
    pub expr: String,
    pub value: f64,
}

impl ExactValue {
    pub fn parse(src: &str) -> Result<Self> {
        Ok(Self { expr: src.trim().to_string(), value: eval(src)? })
    }
}

impl FromStr for ExactValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(src: &str, want: f64) {
        let got = eval(src).unwrap();
        assert!((got - want).abs() < 1e-15, "{src}: {got} vs {want}");
    }

    #[test]
    fn plain_numbers_and_fractions() {
        close("2/3", 2.0 / 3.0);
        close("0.37", 0.37);
        close("1e-3", 1e-3);
        close("-1/2", -0.5);
        close("3", 3.0);
    }

    #[test]
    fn surds() {
        close("(5-sqrt5)/8", (5.0 - 5f64.sqrt()) / 8.0);
        close("(5−√5)/8", (5.0 - 5f64.sqrt()) / 8.0);
        close("(4-sqrt(10+2sqrt5))/4", (4.0 - (10.0 + 2.0 * 5f64.sqrt()).sqrt()) / 4.0);
        close(
            "(7-sqrt5-sqrt(6(5-sqrt5)))/12",
            (7.0 - 5f64.sqrt() - (6.0 * (5.0 - 5f64.sqrt())).sqrt()) / 12.0,
        );
        close("2 sqrt 3", 2.0 * 3f64.sqrt());
    }

    #[test]
    fn trigonometry_and_juxtaposition() {
        close("(2/3)(1-cos(2pi/7))", (2.0 / 3.0) * (1.0 - (2.0 * PI / 7.0).cos()));
        close("(1/2)(1-sin(3π/14))", 0.5 * (1.0 - (3.0 * PI / 14.0).sin()));
        close("1-cos(pi/14)", 1.0 - (PI / 14.0).cos());
        close("2^-1", 0.5);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "(1+2", "1+", "foo", "2/0", "1 2 )", "sqrt(-1)", "3#"] {
            assert!(eval(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn exact_value_keeps_source() {
        let v: ExactValue = " (5+sqrt5)/10 ".parse().unwrap();
        assert_eq!(v.expr, "(5+sqrt5)/10");
        assert!((v.value - (5.0 + 5f64.sqrt()) / 10.0).abs() < 1e-15);
    }
}
