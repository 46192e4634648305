//! Generating series assembled from count sequences: the Hasse-Weil zeta
//! function, the Igusa and Serre series, closed-point counts and the
//! point counts of symmetric products.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::{Rat, TruncSeries};
use crate::counting::{CountKind, CountSequence};

pub const DEFAULT_WEIL_ORDER: usize = 8;
pub const DEFAULT_PADIC_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("expected {expected} counts, got {got}")]
    WrongKind { expected: CountKind, got: CountKind },
    #[error("need counts up to n = {needed}, have {have:?}")]
    InsufficientCounts { needed: usize, have: Option<usize> },
    #[error("zeta coefficient {n} is {value}, not a nonnegative integer")]
    NotIntegral { n: usize, value: Rat },
    #[error("closed-point count M_{d} = {value} is not a nonnegative integer")]
    BadClosedPoints { d: usize, value: Rat },
    #[error("symmetric-product count b_{n} = {product} disagrees with zeta coefficient {zeta}")]
    SymmetricMismatch { n: usize, product: BigInt, zeta: Rat },
}

fn expect_kind(counts: &CountSequence, kind: CountKind) -> Result<(), SeriesError> {
    if counts.kind != kind {
        return Err(SeriesError::WrongKind {
            expected: kind,
            got: counts.kind,
        });
    }
    Ok(())
}

fn values_upto(counts: &CountSequence, last: usize) -> Result<Vec<BigInt>, SeriesError> {
    let first = counts.first_index();
    (first..=last)
        .map(|n| counts.get(n).map(BigInt::from))
        .collect::<Option<Vec<_>>>()
        .ok_or(SeriesError::InsufficientCounts {
            needed: last,
            have: counts.last_index(),
        })
}

/// `Z(T) = exp(sum_{n>=1} N_n T^n / n)` up to `T^order`. Every coefficient
/// must be a nonnegative integer.
pub fn hasse_weil(counts: &CountSequence, order: usize) -> Result<TruncSeries, SeriesError> {
    expect_kind(counts, CountKind::Weil)?;
    let n_vals = values_upto(counts, order)?;
    let mut log = vec![Rat::zero()];
    log.extend(
        n_vals
            .iter()
            .enumerate()
            .map(|(i, nn)| Rat::new(nn.clone(), BigInt::from(i + 1))),
    );
    let z = TruncSeries::new(log).exp().expect("constant term is zero");
    for (n, c) in z.coeffs().iter().enumerate() {
        if !c.is_integer() || c.is_negative() {
            return Err(SeriesError::NotIntegral { n, value: c.clone() });
        }
    }
    Ok(z)
}

fn direct_series(counts: &CountSequence, order: usize, kind: CountKind) -> Result<TruncSeries, SeriesError> {
    expect_kind(counts, kind)?;
    Ok(TruncSeries::new(
        values_upto(counts, order)?.into_iter().map(Rat::from_integer).collect(),
    ))
}

/// `Q(T) = sum_{n>=0} Ñ_n T^n` up to `T^order`.
pub fn igusa_series(counts: &CountSequence, order: usize) -> Result<TruncSeries, SeriesError> {
    direct_series(counts, order, CountKind::Igusa)
}

/// `P(T) = sum_{n>=0} N̄_n T^n` up to `T^order`. A sequence only holds
/// stabilized values, so an unstable count never reaches this point.
pub fn serre_series(counts: &CountSequence, order: usize) -> Result<TruncSeries, SeriesError> {
    direct_series(counts, order, CountKind::Serre)
}

/// Numbers `M_d` of closed points of degree `d`, for `d = 1..=D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPointTable {
    m: Vec<BigInt>,
}

impl ClosedPointTable {
    /// `M_d` for `1 <= d <= D`.
    pub fn get(&self, d: usize) -> &BigInt {
        &self.m[d - 1]
    }

    pub fn degree_bound(&self) -> usize {
        self.m.len()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.m
    }

    /// `N_n = sum_{d | n} d M_d` for `n = 1..=D`.
    pub fn point_counts(&self) -> Vec<BigInt> {
        (1..=self.m.len())
            .map(|n| {
                (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| BigInt::from(d) * self.get(d))
                    .sum()
            })
            .collect()
    }
}

/// Solves `N_n = sum_{d | n} d M_d` for `M_1..M_D` by induction on `n`.
pub fn closed_points(counts: &CountSequence, degree_bound: usize) -> Result<ClosedPointTable, SeriesError> {
    expect_kind(counts, CountKind::Weil)?;
    let n_vals = values_upto(counts, degree_bound)?;
    let mut m: Vec<BigInt> = Vec::with_capacity(degree_bound);
    for n in 1..=degree_bound {
        let lower: BigInt = (1..n)
            .filter(|d| n % d == 0)
            .map(|d| BigInt::from(d) * &m[d - 1])
            .sum();
        let rest = &n_vals[n - 1] - lower;
        let (q, r) = rest.div_rem(&BigInt::from(n));
        if !r.is_zero() || q.is_negative() {
            return Err(SeriesError::BadClosedPoints {
                d: n,
                value: Rat::new(rest, BigInt::from(n)),
            });
        }
        m.push(q);
    }
    Ok(ClosedPointTable { m })
}

/// `|X^(n)(F_q)|` for `n = 0..=order` as the coefficients of
/// `prod_d (1 - T^d)^(-M_d)`: an effective zero cycle of degree `n` is a
/// multiset of closed points with degrees summing to `n`. The result is
/// checked against the coefficients of `Z(T)`.
pub fn sym_product_counts(counts: &CountSequence, order: usize) -> Result<Vec<BigInt>, SeriesError> {
    let table = closed_points(counts, order)?;
    let b = euler_product(&table, order);
    let z = hasse_weil(counts, order)?;
    for (n, (bn, zn)) in b.iter().zip(z.coeffs()).enumerate() {
        if Rat::from_integer(bn.clone()) != *zn {
            return Err(SeriesError::SymmetricMismatch {
                n,
                product: bn.clone(),
                zeta: zn.clone(),
            });
        }
    }
    Ok(b)
}

/// Coefficients of `prod_{d=1..D} (1 - T^d)^(-M_d)` up to `T^order`.
pub fn euler_product(table: &ClosedPointTable, order: usize) -> Vec<BigInt> {
    let mut b = vec![BigInt::zero(); order + 1];
    b[0] = BigInt::from(1);
    for d in 1..=table.degree_bound().min(order) {
        // (1 - T^d)^(-M) = sum_k C(M + k - 1, k) T^(dk)
        let mult = table.get(d);
        if mult.is_zero() {
            continue;
        }
        let mut factor = vec![BigInt::zero(); order + 1];
        let mut binom = BigInt::from(1);
        let mut k = 0usize;
        while d * k <= order {
            factor[d * k] = binom.clone();
            binom = binom * (mult + BigInt::from(k)) / BigInt::from(k + 1);
            k += 1;
        }
        let mut next = vec![BigInt::zero(); order + 1];
        for (i, bi) in b.iter().enumerate() {
            if bi.is_zero() {
                continue;
            }
            for j in (0..=order - i).step_by(d) {
                next[i + j] += bi * &factor[j];
            }
        }
        b = next;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::Base;

    fn weil(values: &[u64]) -> CountSequence {
        CountSequence::from_values(CountKind::Weil, Base::Field { p: 2, m: 1 }, values.to_vec())
    }

    fn ints(v: &[i64]) -> TruncSeries {
        TruncSeries::from_ints(v.iter().copied())
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(hasse_weil(&weil(&[3, 5, 9]), 3).unwrap(), ints(&[1, 3, 7, 15]));
        assert_eq!(hasse_weil(&weil(&[0, 0, 0]), 3).unwrap(), ints(&[1, 0, 0, 0]));
        assert_eq!(hasse_weil(&weil(&[1; 5]), 5).unwrap(), ints(&[1; 6]));
        assert!(matches!(
            hasse_weil(&weil(&[3, 5]), 3),
            Err(SeriesError::InsufficientCounts { needed: 3, have: Some(2) })
        ));
        // N_1 = 0, N_2 = 1 gives 1/2 at T^2
        assert!(matches!(hasse_weil(&weil(&[0, 1]), 2), Err(SeriesError::NotIntegral { n: 2, .. })));
    }

    #[test]
    fn padic_series() {
        let q = CountSequence::from_values(CountKind::Igusa, Base::Prime(3), vec![1, 3, 3, 9, 9]);
        assert_eq!(igusa_series(&q, 4).unwrap(), ints(&[1, 3, 3, 9, 9]));
        assert!(matches!(serre_series(&q, 4), Err(SeriesError::WrongKind { .. })));
        let p = CountSequence::from_values(CountKind::Serre, Base::Prime(3), vec![0; 4]);
        assert_eq!(serre_series(&p, 3).unwrap(), ints(&[0; 4]));
    }

    #[test]
    fn closed_point_examples() {
        let t = closed_points(&weil(&[3, 5, 9, 17]), 4).unwrap();
        assert_eq!(t.values(), &[3.into(), 1.into(), 2.into(), 3.into()]);
        assert_eq!(t.point_counts(), vec![3.into(), 5.into(), 9.into(), 17.into()]);
        let one = closed_points(&weil(&[1; 6]), 6).unwrap();
        assert_eq!(one.get(1), &BigInt::from(1));
        assert!((2..=6).all(|d| one.get(d).is_zero()));
        assert!(closed_points(&weil(&[0; 4]), 4).unwrap().values().iter().all(Zero::is_zero));
        assert!(matches!(
            closed_points(&weil(&[3, 2]), 2),
            Err(SeriesError::BadClosedPoints { d: 2, .. })
        ));
    }

    #[test]
    fn symmetric_products() {
        let b = sym_product_counts(&weil(&[3, 5, 9, 17]), 4).unwrap();
        assert_eq!(b[0], BigInt::from(1));
        assert_eq!(b[2], BigInt::from(7));
        assert_eq!(sym_product_counts(&weil(&[1; 6]), 6).unwrap(), vec![BigInt::from(1); 7]);
        // two rational points: b_n = n + 1
        let two = sym_product_counts(&weil(&[2; 5]), 5).unwrap();
        assert_eq!(two, (1..=6).map(BigInt::from).collect::<Vec<_>>());
    }
}
