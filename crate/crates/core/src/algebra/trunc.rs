use std::fmt;

use num_traits::{One, Zero};

use super::{AlgebraError, Rat};

/// Power series truncated at an explicit order `N`: coefficients of
/// `T^0..=T^N` are stored, nothing beyond is known.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<Rat>,
}

impl TruncSeries {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least T^0");
        TruncSeries { coeffs }
    }

    pub fn from_ints<I: Into<num_bigint::BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::new(coeffs.into_iter().map(|c| Rat::from_integer(c.into())).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Rat::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rat::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    fn check_order(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.order() != other.order() {
            return Err(AlgebraError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        Ok(Self::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![Rat::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self::new(out))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(AlgebraError::NotInvertible);
        }
        let inv0 = a0.recip();
        let mut out: Vec<Rat> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..self.coeffs.len() {
            let s: Rat = (1..=n).map(|k| &self.coeffs[k] * &out[n - k]).sum();
            out.push(-s * &inv0);
        }
        Ok(Self::new(out))
    }

    /// `exp(s)` for `s(0) = 0`, from `E' = s' E`:
    /// `n E_n = sum_{k=1..n} k s_k E_{n-k}`.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::ExpConstantTerm);
        }
        let mut out: Vec<Rat> = Vec::with_capacity(self.coeffs.len());
        out.push(Rat::one());
        for n in 1..self.coeffs.len() {
            let s: Rat = (1..=n)
                .map(|k| Rat::from_integer(k.into()) * &self.coeffs[k] * &out[n - k])
                .sum();
            out.push(s / Rat::from_integer(n.into()));
        }
        Ok(Self::new(out))
    }

    /// `log(s)` for `s(0) = 1`, from `s' = L' s`.
    pub fn log(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_one() {
            return Err(AlgebraError::LogConstantTerm);
        }
        let mut out: Vec<Rat> = vec![Rat::zero()];
        for n in 1..self.coeffs.len() {
            let s: Rat = (1..n)
                .map(|k| Rat::from_integer(k.into()) * &out[k] * &self.coeffs[n - k])
                .sum();
            out.push(&self.coeffs[n] - s / Rat::from_integer(n.into()));
        }
        Ok(Self::new(out))
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The `n<TAB>numerator/denominator` line format.
    pub fn to_lines(&self) -> String {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| format!("{n}\t{}/{}\n", c.numer(), c.denom()))
            .collect()
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = super::poly::format_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| {
                    let mono = match i {
                        0 => String::new(),
                        1 => "T".to_string(),
                        _ => format!("T^{i}"),
                    };
                    (c.clone(), mono)
                }),
        );
        write!(f, "{body} + O(T^{})", self.order() + 1)
    }
}
