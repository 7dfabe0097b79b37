//! Parsers for the command-line syntaxes: rational lists, sign lists and
//! polynomial expressions such as `x^2`, `2*x + 1/3` or `(x+y)^2`.

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Q};
use crate::poly::Poly;

fn split_list(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).collect()
}

pub fn parse_rational_list(text: &str) -> Result<Vec<Q>> {
    split_list(text).into_iter().map(parse_rational).collect()
}

/// `+,+,-` or `1,1,-1`.
pub fn parse_signs(text: &str) -> Result<Vec<i32>> {
    split_list(text)
        .into_iter()
        .map(|s| match s {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => other
                .parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad sign {other:?}"))),
        })
        .collect()
}

pub fn parse_poly_list(text: &str) -> Result<Vec<Poly>> {
    split_list(text).into_iter().map(parse_poly).collect()
}

/// `name=value` pairs separated by commas.
pub fn parse_assignments(text: &str) -> Result<Vec<(String, Q)>> {
    split_list(text)
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (k, v) = s.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got {s:?}")))?;
            Ok((k.trim().to_string(), parse_rational(v.trim())?))
        })
        .collect()
}

pub fn parse_poly(text: &str) -> Result<Poly> {
    let mut p = Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
    if p.chars.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!("unexpected {:?} in {text:?}", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                match d.constant_value() {
                    Some(c) if c != Q::from_integer(0.into()) => acc = acc.scale(&(Q::from_integer(1.into()) / c)),
                    _ => return Err(Error::Parse("division only by nonzero constants".into())),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if self.eat('^') {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = digits.parse().map_err(|_| Error::Parse("exponent must be a nonnegative integer".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    // -x^2 is -(x^2)
    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn primary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                Ok(Poly::constant(parse_rational(&lit)?))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                Ok(Poly::var(&name))
            }
            Some(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    #[test]
    fn polynomials() {
        let x = Poly::var("x");
        assert_eq!(parse_poly("x^2").unwrap(), x.pow(2));
        assert_eq!(parse_poly("2*x + 1/3").unwrap(), &x.scale(&qi(2)) + &Poly::constant(q(1, 3)));
        assert_eq!(parse_poly("(x+y)^2 - 2*x*y").unwrap(), &x.pow(2) + &Poly::var("y").pow(2));
        assert_eq!(parse_poly("0.5*x").unwrap(), x.scale(&q(1, 2)));
        assert_eq!(parse_poly("-x").unwrap(), -x.clone());
        assert_eq!(parse_poly("-x^4").unwrap(), -x.pow(4));
        assert_eq!(parse_poly("2*-x^2").unwrap(), -x.pow(2).scale(&qi(2)));
        assert!(parse_poly("x/y").is_err());
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("(x").is_err());
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_rational_list("1, 2/3, 0.25").unwrap(), vec![qi(1), q(2, 3), q(1, 4)]);
        assert_eq!(parse_signs("+,+,-").unwrap(), vec![1, 1, -1]);
        assert_eq!(parse_signs("1,-1").unwrap(), vec![1, -1]);
        assert_eq!(parse_assignments("y=2, z=1/2").unwrap(), vec![("y".into(), qi(2)), ("z".into(), q(1, 2))]);
        assert_eq!(parse_poly_list("x^2,x^2,1").unwrap().len(), 3);
    }
}
