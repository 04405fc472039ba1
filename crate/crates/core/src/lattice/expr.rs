//! Symbolic lattice expressions such as `U+U(2)+D4^2+A1plus`.
//!
//! Grammar (whitespace ignored, `⊕` accepted for `+`):
//!
//! ```text
//! sum  := term ('+' term)*
//! term := atom ('(' int ')')? ('^' int)?
//! atom := name | '(' sum ')'
//! ```

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::lattice::Lattice;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeExpr {
    Name(String),
    Sum(Vec<LatticeExpr>),
    Rescale(Box<LatticeExpr>, i64),
    Power(Box<LatticeExpr>, usize),
}

impl LatticeExpr {
    pub fn parse(src: &str) -> Result<LatticeExpr> {
        let toks: Vec<(usize, char)> = src.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut p = Parser { toks, i: 0, len: src.chars().count() };
        let e = p.sum()?;
        if let Some(&(pos, c)) = p.toks.get(p.i) {
            return Err(Error::Parse { pos, msg: format!("unexpected {c:?}") });
        }
        Ok(e)
    }

    pub fn name(s: &str) -> LatticeExpr {
        LatticeExpr::Name(s.to_string())
    }

    pub fn sum(parts: impl IntoIterator<Item = LatticeExpr>) -> LatticeExpr {
        LatticeExpr::Sum(parts.into_iter().collect())
    }

    pub fn rescale(self, k: i64) -> LatticeExpr {
        LatticeExpr::Rescale(Box::new(self), k)
    }

    pub fn pow(self, k: usize) -> LatticeExpr {
        LatticeExpr::Power(Box::new(self), k)
    }

    /// Builds the Gram matrix; the label is the canonical expression string.
    pub fn eval(&self) -> Result<Lattice> {
        let l = self.eval_raw()?;
        Ok(l.with_label(self.to_string()))
    }

    fn eval_raw(&self) -> Result<Lattice> {
        Ok(match self {
            LatticeExpr::Name(n) => Lattice::by_name(n)?,
            LatticeExpr::Sum(parts) => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| Error::InvalidLattice("empty sum".into()))?.eval_raw()?;
                it.try_fold(first, |acc, p| Ok::<_, Error>(acc.direct_sum(&p.eval_raw()?)))?
            }
            LatticeExpr::Rescale(e, k) => {
                if *k <= 0 {
                    return Err(Error::InvalidLattice(format!("rescaling factor {k} must be positive")));
                }
                e.eval_raw()?.rescale(*k)
            }
            LatticeExpr::Power(e, k) => {
                if *k == 0 {
                    return Err(Error::InvalidLattice("zero power".into()));
                }
                e.eval_raw()?.power(*k)
            }
        })
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Name(n) => f.write_str(n),
            LatticeExpr::Sum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            LatticeExpr::Rescale(e, k) => match **e {
                LatticeExpr::Sum(_) | LatticeExpr::Power(..) => write!(f, "({e})({k})"),
                _ => write!(f, "{e}({k})"),
            },
            LatticeExpr::Power(e, k) => match **e {
                LatticeExpr::Sum(_) => write!(f, "({e})^{k}"),
                _ => write!(f, "{e}^{k}"),
            },
        }
    }
}

impl core::str::FromStr for LatticeExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LatticeExpr::parse(s)
    }
}

struct Parser {
    toks: Vec<(usize, char)>,
    i: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.toks.get(self.i).map(|t| t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.len, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn sum(&mut self) -> Result<LatticeExpr> {
        let mut parts = Vec::from([self.term()?]);
        while matches!(self.peek(), Some('+' | '⊕')) {
            self.i += 1;
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { LatticeExpr::Sum(parts) })
    }

    fn term(&mut self) -> Result<LatticeExpr> {
        let mut e = self.atom()?;
        if self.peek() == Some('(') {
            self.i += 1;
            let k = self.int()?;
            self.expect(')')?;
            e = e.rescale(k);
        }
        if self.peek() == Some('^') {
            self.i += 1;
            let k = self.int()?;
            if k <= 0 {
                return self.err("exponent must be positive");
            }
            e = e.pow(k as usize);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<LatticeExpr> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos();
                let mut name = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '⁺') {
                    name.push(c);
                    self.i += 1;
                }
                let canonical = match name.as_str() {
                    "A1plus" | "A1⁺" => "A1plus".to_string(),
                    _ => name,
                };
                Lattice::by_name(&canonical).map_err(|_| Error::Parse { pos: start, msg: format!("unknown lattice name {canonical:?}") })?;
                Ok(LatticeExpr::Name(canonical))
            }
            Some(c) => self.err(format!("expected a lattice name, found {c:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.i;
        let mut v: i64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            v = v.checked_mul(10).and_then(|v| v.checked_add(i64::from(d))).ok_or(Error::Parse { pos: self.pos(), msg: "integer overflow".into() })?;
            self.i += 1;
        }
        if self.i == start {
            return self.err("expected an integer");
        }
        Ok(v)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let e = LatticeExpr::parse("U + U(2) ⊕ D4^2").unwrap();
        assert_eq!(e.to_string(), "U+U(2)+D4^2");
        let l = e.eval().unwrap();
        assert_eq!(l.rank(), 12);
        assert_eq!(l.invariants().unwrap().l, 6);
    }

    #[test]
    fn grouping() {
        let e = LatticeExpr::parse("(A1plus+A1)^2").unwrap();
        assert_eq!(e.eval().unwrap().rank(), 4);
        assert_eq!(LatticeExpr::parse(&e.to_string()).unwrap(), e);
        assert_eq!(LatticeExpr::parse("A1⁺").unwrap(), LatticeExpr::name("A1plus"));
    }

    #[test]
    fn error_positions() {
        match LatticeExpr::parse("U+X7") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        match LatticeExpr::parse("U+E8(2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(LatticeExpr::parse("U+").is_err());
    }
}
