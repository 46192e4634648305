use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use super::{AlgebraError, Poly, Rat, TruncSeries};

/// Rational function `numer / denom` in one variable `T`, reduced
/// (`gcd(numer, denom) = 1`) and normalized so that `denom(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    numer: Poly,
    denom: Poly,
}

impl RatFn {
    pub fn new(numer: Poly, denom: Poly) -> Result<Self, AlgebraError> {
        if denom.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if numer.is_zero() {
            return Ok(Self::zero());
        }
        let g = numer.gcd(&denom);
        let (numer, _) = numer.div_rem(&g);
        let (denom, _) = denom.div_rem(&g);
        let c0 = denom.coeff(0);
        if c0.is_zero() {
            return Err(AlgebraError::PoleAtZero);
        }
        let inv = c0.recip();
        Ok(RatFn {
            numer: numer.scale(&inv),
            denom: denom.scale(&inv),
        })
    }

    pub fn zero() -> Self {
        RatFn {
            numer: Poly::zero(),
            denom: Poly::one(),
        }
    }

    pub fn polynomial(p: Poly) -> Self {
        RatFn {
            numer: p,
            denom: Poly::one(),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom(&self) -> &Poly {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    /// Re-normalize; a no-op on values built through [`RatFn::new`].
    pub fn normalized(&self) -> Result<Self, AlgebraError> {
        Self::new(self.numer.clone(), self.denom.clone())
    }

    /// Power series expansion up to `T^order`.
    pub fn expand(&self, order: usize) -> TruncSeries {
        let pad = |p: &Poly| TruncSeries::new((0..=order).map(|i| p.coeff(i)).collect());
        let inv = pad(&self.denom)
            .invert()
            .expect("normalized denominator has constant term 1");
        pad(&self.numer).mul(&inv).expect("equal orders")
    }

    /// Integer-cleared numerator and denominator with coprime content,
    /// denominator constant term positive.
    pub fn cleared(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        if self.numer.is_zero() {
            return (Vec::new(), vec![BigInt::one()]);
        }
        let (a, sa) = self.numer.integer_cleared();
        let (b, sb) = self.denom.integer_cleared();
        let ratio = sa / sb;
        let a = a.into_iter().map(|c| c * ratio.numer()).collect();
        let b = b.into_iter().map(|c| c * ratio.denom()).collect();
        (a, b)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.cleared();
        let to_poly = |v: Vec<BigInt>| Poly::new(v.into_iter().map(Rat::from_integer).collect());
        write!(f, "({}) / ({})", to_poly(a), to_poly(b))
    }
}

/// Functional-equation residual
/// `q^(1-g) T^(2-2g) f(T) - f(1/(qT))`, multiplied by the least power of `T`
/// that removes a pole at `T = 0`. The result is zero exactly when
/// `f(1/(qT)) = q^(1-g) T^(2-2g) f(T)`.
pub fn ratfn_substitute_inverse(f: &RatFn, q: u64, genus: u32) -> RatFn {
    assert!(q >= 2, "q must be at least 2");
    let qr = Rat::from_integer(BigInt::from(q));
    let qinv = qr.recip();
    // p(1/(qT)) = T^(-deg p) * sum_j p_{d-j} q^{-(d-j)} T^j
    let inverted = |p: &Poly| -> (Poly, i64) {
        let d = p.degree().unwrap_or(0);
        let coeffs = (0..=d)
            .map(|j| p.coeff(d - j) * Pow::pow(&qinv, (d - j) as u32))
            .collect();
        (Poly::new(coeffs), d as i64)
    };
    let (num_inv, a) = inverted(f.numer());
    let (den_inv, b) = inverted(f.denom());

    // lhs = c * T^e1 * N/D,  rhs = T^e2 * N~/D~
    let c: Rat = if genus == 0 {
        qr.clone()
    } else {
        Pow::pow(&qinv, genus - 1)
    };
    let e1 = 2 - 2 * genus as i64;
    let e2 = b - a;
    let shift = (-e1.min(e2)).max(0);
    let lhs = (&f.numer().scale(&c) * &den_inv).shift((e1 + shift) as usize);
    let rhs = (&num_inv * f.denom()).shift((e2 + shift) as usize);
    let denom = f.denom() * &den_inv;
    RatFn::new(&lhs - &rhs, denom).expect("denominator nonzero at 0")
}
