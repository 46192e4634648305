//! The Grothendieck ring of varieties tensored with Q and localized at the
//! Lefschetz class `L`, its counting, Euler and Hodge specializations, and
//! the `chi_c` recursion for Galois covers with cyclic decomposition group.

mod cover;
mod expr;

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::algebra::Rat;
use expr::{parse_expr, Expr};

pub use cover::{chi_c_cover, euler_integrality_check, ChiCResult, CoverSpec, EulerReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrothError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("symbol \"{0}\" has no assigned value")]
    UnassignedSymbol(String),
    #[error("symbols are not allowed in {0}")]
    SymbolNotAllowed(String),
    #[error("invalid cover specification: {0}")]
    InvalidCover(String),
    #[error("missing class for divisor {0}")]
    MissingClass(u64),
    #[error("divisor {divisor} does not divide |C| = {c_order}")]
    UnexpectedClass { divisor: u64, c_order: u64 },
    #[error("Euler characteristic {0} is not an integer")]
    EulerNotIntegral(Rat),
    #[error("Euler characteristic {value} is nonzero although |C| = {c_order} > 1")]
    EulerNonzero { value: Rat, c_order: u64 },
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// Operations needed to evaluate an [`Expr`].
trait ExprRing: Sized + Clone {
    fn integer(n: BigInt) -> Self;
    fn generator(name: &str) -> Self;
    fn symbol(name: &str) -> Result<Self, GrothError>;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn describe(&self) -> String;

    fn pow_int(&self, e: i64) -> Result<Self, GrothError> {
        let base = if e < 0 {
            self.inverse().ok_or_else(|| GrothError::NotInvertible(self.describe()))?
        } else {
            self.clone()
        };
        let mut out = Self::integer(BigInt::one());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn eval(e: &Expr) -> Result<Self, GrothError> {
        Ok(match e {
            Expr::Int(n) => Self::integer(n.clone()),
            Expr::Gen(g) => Self::generator(g),
            Expr::Sym(s) => Self::symbol(s)?,
            Expr::Neg(x) => Self::eval(x)?.neg(),
            Expr::Add(x, y) => Self::eval(x)?.add(&Self::eval(y)?),
            Expr::Sub(x, y) => Self::eval(x)?.add(&Self::eval(y)?.neg()),
            Expr::Mul(x, y) => Self::eval(x)?.mul(&Self::eval(y)?),
            Expr::Div(x, y) => {
                let d = Self::eval(y)?;
                let inv = d.inverse().ok_or_else(|| GrothError::NotInvertible(d.describe()))?;
                Self::eval(x)?.mul(&inv)
            }
            Expr::Pow(x, k) => Self::eval(x)?.pow_int(*k)?,
        })
    }
}

/// Renders `sum c_i m_i` over a common denominator, e.g. `(L - 1)/3`.
/// Monomials are given already ordered; the empty string is the unit.
fn render(terms: &[(Rat, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let den = terms.iter().fold(BigInt::one(), |acc, (c, _)| acc.lcm(c.denom()));
    let mut out = String::new();
    for (i, (c, mono)) in terms.iter().enumerate() {
        let n = (c * Rat::from_integer(den.clone())).to_integer();
        if i == 0 {
            if n.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if n.is_negative() { " - " } else { " + " });
        }
        let a = n.abs();
        match (mono.is_empty(), a.is_one()) {
            (true, _) => out.push_str(&a.to_string()),
            (false, true) => out.push_str(mono),
            (false, false) => out.push_str(&format!("{a}*{mono}")),
        }
    }
    if den.is_one() {
        out
    } else if terms.len() == 1 {
        format!("{out}/{den}")
    } else {
        format!("({out})/{den}")
    }
}

fn power_str(base: &str, e: i64) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

/// Element of `K_0(Var) (x) Q` with `L` inverted: a finite Q-combination of
/// monomials `L^a * s_1 * ... * s_k` in `L` and formal symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct K0Elem {
    /// (exponent of `L`, sorted symbol multiset) to nonzero coefficient.
    terms: BTreeMap<(i64, Vec<String>), Rat>,
}

impl K0Elem {
    pub fn zero() -> Self {
        K0Elem::default()
    }

    /// The class of a point.
    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, Vec::new())
    }

    /// `L^a`
    pub fn lefschetz_pow(a: i64) -> Self {
        Self::monomial(Rat::one(), a, Vec::new())
    }

    pub fn symbol(name: &str) -> Self {
        Self::monomial(Rat::one(), 0, vec![name.to_string()])
    }

    pub fn monomial(c: Rat, a: i64, mut symbols: Vec<String>) -> Self {
        symbols.sort();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, symbols), c);
        }
        K0Elem { terms }
    }

    pub fn parse(src: &str) -> Result<Self, GrothError> {
        Self::eval(&parse_expr(src, &["L"])?)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `((a, symbols), coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&(i64, Vec<String>), &Rat)> {
        self.terms.iter()
    }

    pub fn symbols(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .terms
            .keys()
            .flat_map(|(_, s)| s.iter().map(String::as_str))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn insert(&mut self, key: (i64, Vec<String>), c: Rat) {
        let slot = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        K0Elem {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * r)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, s), c) in &self.terms {
            for ((b, t), d) in &other.terms {
                let mut syms = s.clone();
                syms.extend(t.iter().cloned());
                syms.sort();
                out.insert((a + b, syms), c * d);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Image under `s`; every symbol needs a value.
    pub fn specialize(&self, s: &SpecializationMap) -> Result<Specialized, GrothError> {
        match &s.kind {
            SpecKind::Counting(_) | SpecKind::Euler => {
                let l = match s.kind {
                    SpecKind::Counting(q) => Rat::from_integer(BigInt::from(q)),
                    _ => Rat::one(),
                };
                let mut total = Rat::zero();
                for ((a, syms), c) in &self.terms {
                    let mut t = c * Pow::pow(&l, *a as i32);
                    for name in syms {
                        match s.values.get(name) {
                            Some(SymbolValue::Number(v)) => t *= v,
                            _ => return Err(GrothError::UnassignedSymbol(name.clone())),
                        }
                    }
                    total += t;
                }
                Ok(Specialized::Number(total))
            }
            SpecKind::Hodge => {
                let mut total = HodgePoly::zero();
                for ((a, syms), c) in &self.terms {
                    let mut t = HodgePoly::monomial(c.clone(), *a, *a);
                    for name in syms {
                        match s.values.get(name) {
                            Some(SymbolValue::Hodge(v)) => t = t.mul(v),
                            _ => return Err(GrothError::UnassignedSymbol(name.clone())),
                        }
                    }
                    total = total.add(&t);
                }
                Ok(Specialized::Hodge(total))
            }
        }
    }
}

impl ExprRing for K0Elem {
    fn integer(n: BigInt) -> Self {
        Self::constant(Rat::from_integer(n))
    }
    fn generator(_: &str) -> Self {
        Self::lefschetz_pow(1)
    }
    fn symbol(name: &str) -> Result<Self, GrothError> {
        Ok(K0Elem::symbol(name))
    }
    fn add(&self, o: &Self) -> Self {
        K0Elem::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        K0Elem::mul(self, o)
    }
    fn neg(&self) -> Self {
        K0Elem::neg(self)
    }
    fn inverse(&self) -> Option<Self> {
        match self.terms.iter().collect::<Vec<_>>().as_slice() {
            [((a, s), c)] if s.is_empty() => Some(Self::monomial(c.recip(), -a, Vec::new())),
            _ => None,
        }
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for K0Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|((a, s), _)| (Reverse(*a), Reverse(s.len()), s.clone()));
        let terms: Vec<(Rat, String)> = keys
            .into_iter()
            .map(|((a, syms), c)| {
                let mut parts = Vec::new();
                if *a != 0 {
                    parts.push(power_str("L", *a));
                }
                let mut i = 0;
                while i < syms.len() {
                    let j = syms[i..].iter().take_while(|s| **s == syms[i]).count();
                    parts.push(power_str(&format!("\"{}\"", syms[i]), j as i64));
                    i += j;
                }
                (c.clone(), parts.join("*"))
            })
            .collect();
        f.write_str(&render(&terms))
    }
}

/// Laurent polynomial in `u, v` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HodgePoly {
    terms: BTreeMap<(i64, i64), Rat>,
}

impl HodgePoly {
    pub fn zero() -> Self {
        HodgePoly::default()
    }

    /// `c u^i v^j`
    pub fn monomial(c: Rat, i: i64, j: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        HodgePoly { terms }
    }

    pub fn parse(src: &str) -> Result<Self, GrothError> {
        Self::eval(&parse_expr(src, &["u", "v"])?)
    }

    pub fn coeff(&self, i: i64, j: i64) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            let slot = terms.entry(*k).or_insert_with(Rat::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(k);
            }
        }
        HodgePoly { terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for ((i, j), c) in &self.terms {
            for ((k, l), d) in &o.terms {
                out = out.add(&Self::monomial(c * d, i + k, j + l));
            }
        }
        out
    }
}

impl ExprRing for HodgePoly {
    fn integer(n: BigInt) -> Self {
        Self::monomial(Rat::from_integer(n), 0, 0)
    }
    fn generator(name: &str) -> Self {
        if name == "u" {
            Self::monomial(Rat::one(), 1, 0)
        } else {
            Self::monomial(Rat::one(), 0, 1)
        }
    }
    fn symbol(_: &str) -> Result<Self, GrothError> {
        Err(GrothError::SymbolNotAllowed("Hodge polynomials".into()))
    }
    fn add(&self, o: &Self) -> Self {
        HodgePoly::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        HodgePoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        self.mul(&Self::monomial(-Rat::one(), 0, 0))
    }
    fn inverse(&self) -> Option<Self> {
        match self.terms.iter().collect::<Vec<_>>().as_slice() {
            [((i, j), c)] => Some(Self::monomial(c.recip(), -i, -j)),
            _ => None,
        }
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for HodgePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|((i, j), _)| (Reverse(i + j), Reverse(*i)));
        let terms: Vec<(Rat, String)> = keys
            .into_iter()
            .map(|((i, j), c)| {
                let mut parts = Vec::new();
                if *i != 0 {
                    parts.push(power_str("u", *i));
                }
                if *j != 0 {
                    parts.push(power_str("v", *j));
                }
                (c.clone(), parts.join("*"))
            })
            .collect();
        f.write_str(&render(&terms))
    }
}

/// Rational numbers as an expression target: integers, `/` and `^` only.
impl ExprRing for Rat {
    fn integer(n: BigInt) -> Self {
        Rat::from_integer(n)
    }
    fn generator(_: &str) -> Self {
        unreachable!("no generators are accepted for numbers")
    }
    fn symbol(_: &str) -> Result<Self, GrothError> {
        Err(GrothError::SymbolNotAllowed("numeric values".into()))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

/// Parses a rational number such as `-3` or `7/2`.
pub fn parse_rational(src: &str) -> Result<Rat, GrothError> {
    Rat::eval(&parse_expr(src, &[])?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecKind {
    /// `L -> q`
    Counting(u64),
    /// `L -> 1`
    Euler,
    /// `L -> uv`
    Hodge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolValue {
    Number(Rat),
    Hodge(HodgePoly),
}

/// A ring homomorphism out of [`K0Elem`], fixed by the image of `L` and
/// explicit values for the formal symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationMap {
    pub kind: SpecKind,
    values: BTreeMap<String, SymbolValue>,
}

impl SpecializationMap {
    pub fn new(kind: SpecKind) -> Self {
        SpecializationMap {
            kind,
            values: BTreeMap::new(),
        }
    }

    pub fn counting(q: u64) -> Self {
        Self::new(SpecKind::Counting(q))
    }

    pub fn euler() -> Self {
        Self::new(SpecKind::Euler)
    }

    pub fn hodge() -> Self {
        Self::new(SpecKind::Hodge)
    }

    /// Parses `count:Q`, `euler` or `hodge`.
    pub fn parse_kind(src: &str) -> Result<Self, GrothError> {
        let bad = || GrothError::Syntax {
            pos: 0,
            msg: format!("expected count:Q, euler or hodge, got {src:?}"),
        };
        match src.split_once(':') {
            Some(("count", q)) => Ok(Self::counting(q.trim().parse().map_err(|_| bad())?)),
            None if src == "euler" => Ok(Self::euler()),
            None if src == "hodge" => Ok(Self::hodge()),
            _ => Err(bad()),
        }
    }

    /// Assigns a value to `symbol`; it must match the kind.
    pub fn with_value(mut self, symbol: &str, value: SymbolValue) -> Self {
        self.values.insert(symbol.to_string(), value);
        self
    }

    /// Assigns a value given as text: a rational number for counting and
    /// Euler maps, a polynomial in `u, v` for the Hodge map.
    pub fn assign(&mut self, symbol: &str, text: &str) -> Result<(), GrothError> {
        let value = match self.kind {
            SpecKind::Hodge => SymbolValue::Hodge(HodgePoly::parse(text)?),
            _ => SymbolValue::Number(parse_rational(text)?),
        };
        self.values.insert(symbol.to_string(), value);
        Ok(())
    }

    pub fn label(&self) -> String {
        match self.kind {
            SpecKind::Counting(q) => format!("count:{q}"),
            SpecKind::Euler => "euler".into(),
            SpecKind::Hodge => "hodge".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Specialized {
    Number(Rat),
    Hodge(HodgePoly),
}

impl fmt::Display for Specialized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Specialized::Number(r) => write!(f, "{r}"),
            Specialized::Hodge(h) => write!(f, "{h}"),
        }
    }
}
