use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::VarietyError;

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// Multivariate polynomial with integer coefficients in variables
/// `x0..x{n-1}`. Terms are kept in descending graded-lexicographic order
/// with no zero coefficients and no repeated monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(BigInt, Exponents)>,
}

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(nvars, vec![(c.into(), vec![0; nvars])])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, vec![(BigInt::one(), e)])
    }

    /// Collects like terms, drops zeros and sorts.
    pub fn from_terms(nvars: usize, terms: Vec<(BigInt, Exponents)>) -> Self {
        let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        let mut terms: Vec<(BigInt, Exponents)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (c, e))
            .collect();
        terms.sort_by(|a, b| grlex(&b.1, &a.1));
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(BigInt, Exponents)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(_, e)| e.iter().sum())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(_, e)| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.nvars, terms)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(c, e)| (-c, e.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                terms.push((a * b, e));
            }
        }
        Self::from_terms(self.nvars, terms)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[i] > 0)
            .map(|(c, e)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (c * BigInt::from(e[i]), e2)
            })
            .collect();
        Self::from_terms(self.nvars, terms)
    }

    /// Parse with variables `x0..x{nvars-1}`.
    pub fn parse(src: &str, nvars: usize) -> Result<Self, VarietyError> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            nvars,
            src,
        };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, e)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("x{i}") } else { format!("x{i}^{x}") })
                .collect();
            let abs = c.abs();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, VarietyError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(src[start..i].parse().unwrap()), start));
                continue;
            }
            b'x' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(VarietyError::Syntax {
                        pos: start,
                        msg: "expected variable index after 'x'".into(),
                    });
                }
                let idx = src[ds..i].parse().map_err(|_| VarietyError::Syntax {
                    pos: start,
                    msg: "variable index too large".into(),
                })?;
                out.push((Tok::Var(idx), start));
                continue;
            }
            _ => {
                return Err(VarietyError::Syntax {
                    pos: start,
                    msg: format!("unexpected character {:?}", c as char),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    nvars: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn error(&self, msg: &str) -> VarietyError {
        let pos = self
            .tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.src.len());
        VarietyError::Syntax {
            pos,
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, VarietyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, VarietyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, VarietyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.primary()?;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(n)) => {
                            self.pos += 1;
                            let e: u32 = n
                                .try_into()
                                .map_err(|_| self.error("exponent too large"))?;
                            Ok(base.pow(e))
                        }
                        _ => Err(self.error("expected a nonnegative integer exponent")),
                    }
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn primary(&mut self) -> Result<MultiPoly, VarietyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.nvars, n))
            }
            Some(Tok::Var(i)) => {
                if i >= self.nvars {
                    return Err(VarietyError::VariableOutOfRange {
                        index: i,
                        nvars: self.nvars,
                    });
                }
                self.pos += 1;
                Ok(MultiPoly::var(self.nvars, i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let f = MultiPoly::parse("x1^2*x2 - x0^3 - x0*x2^2 - x2^3", 3).unwrap();
        assert_eq!(f.to_string(), "-x0^3 - x0*x2^2 + x1^2*x2 - x2^3");
        assert!(f.is_homogeneous());
        let g = MultiPoly::parse("(x0 + 1)^2 - 2*x0", 1).unwrap();
        assert_eq!(g.to_string(), "x0^2 + 1");
        assert!(!g.is_homogeneous());
        assert_eq!(MultiPoly::parse("x0 - x0", 1).unwrap().to_string(), "0");
        assert_eq!(MultiPoly::parse("-3", 0).unwrap().to_string(), "-3");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            MultiPoly::parse("x2 + 1", 2),
            Err(VarietyError::VariableOutOfRange { index: 2, nvars: 2 })
        ));
        assert!(matches!(MultiPoly::parse("x0 +", 1), Err(VarietyError::Syntax { .. })));
        assert!(matches!(MultiPoly::parse("x0^x0", 1), Err(VarietyError::Syntax { .. })));
        assert!(matches!(MultiPoly::parse("y", 1), Err(VarietyError::Syntax { .. })));
        assert!(matches!(MultiPoly::parse("(x0", 1), Err(VarietyError::Syntax { .. })));
    }

    #[test]
    fn derivative() {
        let f = MultiPoly::parse("x0^3 + 2*x0*x1 + 5", 2).unwrap();
        assert_eq!(f.derivative(0).to_string(), "3*x0^2 + 2*x1");
        assert_eq!(f.derivative(1).to_string(), "2*x0");
    }
}
