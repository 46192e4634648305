use std::fmt;

use super::AlgebraError;

/// Residue class in `Z/p^k`, with `p^k` bounded by `u64::MAX`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZmodElem {
    p: u64,
    k: u32,
    modulus: u64,
    value: u64,
}

/// `p^k`, or `None` on overflow.
pub(crate) fn prime_power(p: u64, k: u32) -> Option<u64> {
    p.checked_pow(k)
}

impl ZmodElem {
    /// Reduces `value` (any integer) modulo `p^k`.
    pub fn new(p: u64, k: u32, value: i128) -> Result<Self, AlgebraError> {
        let modulus = prime_power(p, k).ok_or(AlgebraError::PrecisionTooLarge { p, k })?;
        let value = value.rem_euclid(modulus as i128) as u64;
        Ok(ZmodElem { p, k, modulus, value })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }

    fn with(&self, value: u64) -> Self {
        ZmodElem { value, ..*self }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.with(((self.value as u128 + other.value as u128) % self.modulus as u128) as u64))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.with(mul_mod(self.value, other.value, self.modulus)))
    }

    pub fn neg(&self) -> Self {
        self.with((self.modulus - self.value) % self.modulus)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.with(pow_mod(self.value, e as u64, self.modulus))
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Reduction to `Z/p^j` for `j <= k`.
    pub fn reduce(&self, j: u32) -> Self {
        let m = prime_power(self.p, j.min(self.k)).expect("smaller power fits");
        ZmodElem {
            p: self.p,
            k: j.min(self.k),
            modulus: m,
            value: self.value % m,
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

impl fmt::Display for ZmodElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = ZmodElem::new(5, 2, 3).unwrap();
        let b = ZmodElem::new(5, 2, -2).unwrap();
        assert_eq!(b.value(), 23);
        assert_eq!(a.mul(&a).unwrap().add(&b).unwrap().value(), 7);
        assert_eq!(a.neg().value(), 22);
        assert_eq!(a.pow(3).value(), 2);
        assert_eq!(a.reduce(1).value(), 3);
        let c = ZmodElem::new(5, 1, 1).unwrap();
        assert_eq!(a.add(&c), Err(AlgebraError::RingMismatch));
        assert!(ZmodElem::new(3, 50, 0).is_err());
    }
}
