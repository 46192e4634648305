//! Expression syntax shared by ring elements and Hodge values: integers,
//! named generators (`L`, `u`, `v`), quoted symbols, `+ - * / ^` and
//! parentheses. Division and negative powers are resolved by the evaluator,
//! which only allows inverting units.

use num_bigint::BigInt;

use super::GrothError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Expr {
    Int(BigInt),
    Gen(String),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Quoted(String),
    Op(char),
}

fn syntax(pos: usize, msg: impl Into<String>) -> GrothError {
    GrothError::Syntax { pos, msg: msg.into() }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, GrothError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek().filter(|(_, d)| d.is_ascii_digit()) {
                s.push(d);
                it.next();
            }
            out.push((i, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek().filter(|(_, d)| d.is_ascii_alphanumeric() || *d == '_') {
                s.push(d);
                it.next();
            }
            out.push((i, Tok::Ident(s)));
        } else if c == '"' || c == '\'' {
            it.next();
            let mut s = String::new();
            loop {
                match it.next() {
                    Some((_, d)) if d == c => break,
                    Some((_, d)) => s.push(d),
                    None => return Err(syntax(i, "unterminated symbol name")),
                }
            }
            if s.is_empty() {
                return Err(syntax(i, "empty symbol name"));
            }
            out.push((i, Tok::Quoted(s)));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            it.next();
        } else {
            return Err(syntax(i, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    gens: &'a [&'a str],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, GrothError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, GrothError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, GrothError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, GrothError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.here();
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let e: i64 = n.try_into().map_err(|_| syntax(at, "exponent too large"))?;
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
            }
            _ => Err(syntax(at, "expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, GrothError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                if !self.gens.contains(&name.as_str()) {
                    return Err(syntax(at, format!("unknown name {name}; quote symbols")));
                }
                self.pos += 1;
                Ok(Expr::Gen(name))
            }
            Some(Tok::Quoted(name)) => {
                self.pos += 1;
                Ok(Expr::Sym(name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                Ok(e)
            }
            _ => Err(syntax(at, "expected a term")),
        }
    }
}

/// Parses `src`, accepting the bare names in `gens` as generators.
pub(crate) fn parse_expr(src: &str, gens: &[&str]) -> Result<Expr, GrothError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        gens,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}
