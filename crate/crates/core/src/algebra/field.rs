use std::fmt;
use std::sync::{Arc, OnceLock};

use super::AlgebraError;

/// Largest field order for which log/antilog tables are built.
pub(crate) const TABLE_LIMIT: u64 = 1 << 22;

/// Description of `F_{p^m} = F_p[x]/(modulus)`.
pub struct FieldDesc {
    p: u64,
    m: u32,
    order: u64,
    /// Monic, lowest degree first, length `m + 1`.
    modulus: Vec<u64>,
    tables: OnceLock<Option<Arc<LogTables>>>,
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDesc")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldDesc {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `F_{p^m}` with the lexicographically smallest monic irreducible modulus of
/// degree `m`, comparing coefficients from the constant term upwards.
pub fn field_make(p: u64, m: u32) -> Result<FieldDesc, AlgebraError> {
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p));
    }
    if m == 0 {
        return Err(AlgebraError::ZeroDegree);
    }
    let order = p.checked_pow(m).ok_or(AlgebraError::FieldTooLarge { p, m })?;
    let m_us = m as usize;
    // Odometer over (c_0, ..., c_{m-1}) with c_0 most significant.
    let mut low = vec![0u64; m_us];
    loop {
        let mut f = low.clone();
        f.push(1);
        if fp::is_irreducible(&f, p) {
            return Ok(FieldDesc {
                p,
                m,
                order,
                modulus: f,
                tables: OnceLock::new(),
            });
        }
        let mut i = m_us;
        loop {
            // An irreducible polynomial of every degree exists, so the scan
            // terminates before the odometer wraps.
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
        }
    }
}

impl FieldDesc {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements `q = p^m`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Human-readable modulus, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }

    pub(crate) fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        fp::mul_mod(a, b, &self.modulus, self.p)
    }

    /// Log/antilog tables, built on first use; `None` above [`TABLE_LIMIT`].
    pub(crate) fn tables(&self) -> Option<Arc<LogTables>> {
        self.tables
            .get_or_init(|| (self.order <= TABLE_LIMIT).then(|| Arc::new(LogTables::build(self))))
            .clone()
    }

    /// Element code `sum c_i p^i` to coefficient vector.
    pub(crate) fn decode(&self, mut code: u64) -> Vec<u64> {
        (0..self.m)
            .map(|_| {
                let c = code % self.p;
                code /= self.p;
                c
            })
            .collect()
    }

    pub(crate) fn encode(&self, coeffs: &[u64]) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }
}

/// Element of `F_{p^m}` in the polynomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqElem {
    field: Arc<FieldDesc>,
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn new(field: &Arc<FieldDesc>, coeffs: &[u64]) -> Self {
        let m = field.m as usize;
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % field.p).collect();
        if c.len() > m {
            c = fp::rem(&c, &field.modulus, field.p);
        }
        c.resize(m, 0);
        FqElem {
            field: field.clone(),
            coeffs: c,
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(field: &Arc<FieldDesc>, n: i128) -> Self {
        let r = n.rem_euclid(field.p as i128) as u64;
        Self::new(field, &[r])
    }

    pub fn from_code(field: &Arc<FieldDesc>, code: u64) -> Self {
        FqElem {
            field: field.clone(),
            coeffs: field.decode(code),
        }
    }

    pub fn field(&self) -> &Arc<FieldDesc> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn code(&self) -> u64 {
        self.field.encode(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let p = self.field.p;
        Ok(FqElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        FqElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&a| (p - a) % p).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut c = self.field.mul_coeffs(&self.coeffs, &other.coeffs);
        c.resize(self.field.m as usize, 0);
        Ok(FqElem {
            field: self.field.clone(),
            coeffs: c,
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = FqElem::from_int(&self.field, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 if c == 1 => "a".to_string(),
                1 => format!("{c}*a"),
                _ if c == 1 => format!("a^{i}"),
                _ => format!("{c}*a^{i}"),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Sentinel in the Zech table for `1 + g^k = 0`.
const NO_LOG: u32 = u32::MAX;

/// Discrete-log representation of `F_q` for fast enumeration. A "log
/// element" is `0` for zero and `1 + log_g(x)` otherwise.
pub(crate) struct LogTables {
    q1: u64,
    /// `log[code]` (unused at code 0)
    log: Vec<u32>,
    /// `zech[k]` = `log(1 + g^k)` or [`NO_LOG`]
    zech: Vec<u32>,
    p: u64,
}

impl LogTables {
    fn build(field: &FieldDesc) -> Self {
        let q = field.order;
        let q1 = q - 1;
        let one = {
            let mut v = vec![0u64; field.m as usize];
            v[0] = 1;
            v
        };
        let factors = prime_factors(q1);
        let slow_pow = |base: &[u64], mut e: u64| -> Vec<u64> {
            let mut acc = one.clone();
            let mut b = base.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = padded(field.mul_coeffs(&acc, &b), field.m);
                }
                b = padded(field.mul_coeffs(&b, &b), field.m);
                e >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .map(|c| field.decode(c))
            .find(|g| factors.iter().all(|&r| slow_pow(g, q1 / r) != one))
            .expect("the multiplicative group is cyclic");

        // exp[k] = code of g^k
        let mut exp = Vec::with_capacity(q1 as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = one.clone();
        for k in 0..q1 {
            let code = field.encode(&cur);
            exp.push(code as u32);
            log[code as usize] = k as u32;
            cur = padded(field.mul_coeffs(&cur, &generator), field.m);
        }
        let p = field.p;
        let zech = exp
            .iter()
            .map(|&code| {
                // adding 1 changes only the constant digit
                let c0 = code as u64 % p;
                let sum = code as u64 - c0 + (c0 + 1) % p;
                if sum == 0 {
                    NO_LOG
                } else {
                    log[sum as usize]
                }
            })
            .collect();
        LogTables {
            q1,
            log,
            zech,
            p,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn from_code(&self, code: u64) -> u32 {
        if code == 0 {
            0
        } else {
            self.log[code as usize] + 1
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (a - 1) as u64 + (b - 1) as u64;
        (s % self.q1) as u32 + 1
    }

    #[inline]
    pub fn pow(&self, a: u32, e: u32) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        ((a - 1) as u64 * e as u64 % self.q1) as u32 + 1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let la = (a - 1) as u64;
        let lb = (b - 1) as u64;
        let d = (lb + self.q1 - la) % self.q1;
        let z = self.zech[d as usize];
        if z == NO_LOG {
            0
        } else {
            ((la + z as u64) % self.q1) as u32 + 1
        }
    }
}

fn padded(mut v: Vec<u64>, m: u32) -> Vec<u64> {
    v.resize(m as usize, 0);
    v
}

/// Dense polynomial arithmetic over `F_p`, lowest degree first.
pub(crate) mod fp {
    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn inv(a: u64, p: u64) -> u64 {
        crate::algebra::zmod::pow_mod(a, p - 2, p)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        let mut r = trim(a.iter().map(|&x| x % p).collect());
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            let shift = top - dm;
            for (i, &mc) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mc % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or test: monic `f` of degree `m` is irreducible iff
    /// `gcd(f, x^(p^i) - x) = 1` for `1 <= i <= m/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        let x = vec![0u64, 1];
        let mut xp = x.clone();
        for _ in 0..m / 2 {
            xp = pow_mod(&xp, p, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_examples() {
        assert_eq!(field_make(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(field_make(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(field_make(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(field_make(3, 2).unwrap().modulus_string(), "x^2 + 1");
        assert_eq!(field_make(4, 1).unwrap_err(), AlgebraError::NotPrime(4));
        assert_eq!(field_make(5, 0).unwrap_err(), AlgebraError::ZeroDegree);
    }

    /// Trial division by every monic polynomial of degree 1..=m/2.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        for d in 1..=m / 2 {
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut g: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
                g.push(1);
                if fp::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Every smaller monic candidate is reducible, checked independently.
    fn smallest_by_scan(p: u64, m: u32) -> Vec<u64> {
        let total = p.pow(m);
        // c_0 most significant
        for idx in 0..total {
            let mut f: Vec<u64> = (0..m)
                .map(|i| idx / p.pow(m - 1 - i) % p)
                .collect();
            f.push(1);
            if irreducible_by_trial_division(&f, p) {
                return f;
            }
        }
        unreachable!()
    }

    #[test]
    fn moduli_match_trial_division_scan() {
        for (p, max_m) in [(2u64, 11u32), (3, 7), (5, 5), (7, 4), (11, 3), (13, 3)] {
            for m in 1..=max_m {
                if p.pow(m) > 3125 {
                    continue;
                }
                let f = field_make(p, m).unwrap();
                assert!(irreducible_by_trial_division(f.modulus(), p), "p={p} m={m}");
                assert_eq!(f.modulus(), smallest_by_scan(p, m).as_slice(), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn table_arithmetic_matches_polynomial_arithmetic() {
        for (p, m) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let field = Arc::new(field_make(p, m).unwrap());
            let t = field.tables().unwrap();
            let q = field.order();
            for a in 0..q {
                for b in 0..q {
                    let x = FqElem::from_code(&field, a);
                    let y = FqElem::from_code(&field, b);
                    let (la, lb) = (t.from_code(a), t.from_code(b));
                    assert_eq!(t.add(la, lb), t.from_code(x.add(&y).unwrap().code()));
                    assert_eq!(t.mul(la, lb), t.from_code(x.mul(&y).unwrap().code()));
                }
                let x = FqElem::from_code(&field, a);
                assert_eq!(t.pow(t.from_code(a), 5), t.from_code(x.pow(5).code()));
            }
        }
    }

    #[test]
    fn elements() {
        let f = Arc::new(field_make(5, 1).unwrap());
        let two = FqElem::from_int(&f, 2);
        let v = two.pow(3).add(&two).unwrap().add(&FqElem::from_int(&f, 1)).unwrap();
        assert_eq!(v.code(), 1);
        assert_eq!(FqElem::from_int(&f, -1).code(), 4);
        let g = Arc::new(field_make(5, 2).unwrap());
        assert!(two.add(&FqElem::from_int(&g, 1)).is_err());
        // F_25 = F_5[a]/(a^2 + a + 1), so a^2 = 4a + 4
        assert_eq!(g.modulus(), &[1, 1, 1]);
        let a = FqElem::new(&g, &[0, 1]);
        assert_eq!(a.pow(2), FqElem::new(&g, &[4, 4]));
        assert_eq!(a.pow(24), FqElem::from_int(&g, 1));
    }
}
