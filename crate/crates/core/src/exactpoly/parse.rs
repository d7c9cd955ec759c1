//! Reader for the canonical ASCII form (and factored forms using parentheses).

use std::str::FromStr;

use num_bigint::BigInt;

use super::{MPoly, PolyError, Rat, Sym};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, PolyError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().expect("ascii digits")));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(PolyError::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                acc * rhs
            } else {
                let d = rhs
                    .as_constant()
                    .filter(|d| *d != Rat::from_integer(0.into()))
                    .ok_or_else(|| PolyError::Parse("division by a non-constant or zero".into()))?;
                acc.scale(&d.recip())
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MPoly, PolyError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| PolyError::Parse("exponent too large".into()))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => Err(PolyError::Parse("expected integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| PolyError::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(MPoly::constant(Rat::from_integer(n))),
            Tok::Ident(name) => Ok(MPoly::var(name.parse::<Sym>()?)),
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(PolyError::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Op(c) => Err(PolyError::Parse(format!("unexpected {c:?}"))),
        }
    }
}

impl FromStr for MPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { toks: lex(s)?, pos: 0 };
        let p = parser.expr()?;
        if parser.pos != parser.toks.len() {
            return Err(PolyError::Parse(format!("trailing input in {s:?}")));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_forms_expand() {
        let p: MPoly = "e^7*(mu^2+rho)^2*a1".parse().unwrap();
        assert_eq!(p.len(), 3);
        let q: MPoly = "-(a1 - 2)*(a1 + 2)".parse().unwrap();
        assert_eq!(q, "4 - a1^2".parse().unwrap());
    }

    #[test]
    fn errors() {
        assert!("a1 +".parse::<MPoly>().is_err());
        assert!("x + 1".parse::<MPoly>().is_err());
        assert!("a1/a2".parse::<MPoly>().is_err());
        assert!("(a1".parse::<MPoly>().is_err());
        assert!("a1 # 2".parse::<MPoly>().is_err());
    }
}
