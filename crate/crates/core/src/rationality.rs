//! Rational reconstruction of truncated series and checks of the predicted
//! denominator shapes.
//!
//! A sequence `c_0, c_1, ...` is the expansion of `P/Q` with `Q(0) = 1`,
//! `deg Q <= r` and `deg P < s` exactly when
//! `c_n + Q_1 c_(n-1) + ... + Q_r c_(n-r) = 0` for all `n >= s` (with
//! `c_(-i) = 0`). Such a fit has `r + s` free parameters; the remaining
//! `len - r - s` coefficients are the guard, predicted rather than fitted.
//! The detector tries parameter counts in increasing order, so the first fit
//! with enough guard is the most economical one.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::algebra::{ratfn_substitute_inverse, AlgebraError, Poly, Rat, RatFn};

pub const DEFAULT_MIN_GUARD: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalityError {
    #[error("{have} coefficients cannot support order {max_order} with guard {min_guard}")]
    InsufficientCoefficients {
        have: usize,
        max_order: usize,
        min_guard: usize,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A rational function reproducing every input coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceResult {
    pub ratfn: RatFn,
    /// Degree of the reduced denominator.
    pub recurrence_order: usize,
    /// Onset `s`: the recurrence holds for every index `n >= s`.
    pub onset: usize,
    /// Coefficients beyond the `r + s` fitted parameters that the
    /// recurrence predicts correctly.
    pub guard: usize,
}

/// Solves `A x = b` over Q; `None` if inconsistent. Free variables are 0.
fn solve(mut rows: Vec<Vec<Rat>>, ncols: usize) -> Option<Vec<Rat>> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=ncols {
                    let sub = &f * &rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][ncols].clone();
    }
    Some(x)
}

/// Denominator `1 + Q_1 T + ... + Q_r T^r` of a fit with onset `s`, if one
/// exists.
fn fit(coeffs: &[Rat], r: usize, s: usize) -> Option<Poly> {
    let at = |i: isize| -> Rat {
        if i < 0 {
            Rat::zero()
        } else {
            coeffs[i as usize].clone()
        }
    };
    let rows: Vec<Vec<Rat>> = (s..coeffs.len())
        .map(|n| {
            let mut row: Vec<Rat> = (1..=r).map(|i| at(n as isize - i as isize)).collect();
            row.push(-coeffs[n].clone());
            row
        })
        .collect();
    let q = if rows.is_empty() {
        vec![Rat::zero(); r]
    } else {
        solve(rows, r)?
    };
    let mut d = vec![Rat::one()];
    d.extend(q);
    Some(Poly::new(d))
}

/// Finds the most economical rational function (fewest fitted parameters,
/// then smallest denominator degree bound) with denominator degree at most
/// `max_order` that reproduces all coefficients and leaves at least
/// `min_guard` of them unfitted. `Ok(None)` means no such function exists.
pub fn find_recurrence(
    coeffs: &[Rat],
    max_order: usize,
    min_guard: usize,
) -> Result<Option<RecurrenceResult>, RationalityError> {
    let len = coeffs.len();
    if len < 2 * max_order + min_guard {
        return Err(RationalityError::InsufficientCoefficients {
            have: len,
            max_order,
            min_guard,
        });
    }
    for params in 0..=len - min_guard {
        for r in 0..=params.min(max_order) {
            let s = params - r;
            let Some(denom) = fit(coeffs, r, s) else {
                continue;
            };
            let series: Vec<Rat> = (0..s).map(|i| coeffs[i].clone()).collect();
            let numer = &Poly::new(series) * &denom;
            let numer = Poly::new((0..s).map(|i| numer.coeff(i)).collect());
            let ratfn = RatFn::new(numer, denom)?;
            debug_assert_eq!(ratfn.expand(len - 1).coeffs(), coeffs);
            return Ok(Some(RecurrenceResult {
                recurrence_order: ratfn.denom().degree().unwrap_or(0),
                ratfn,
                onset: s,
                guard: len - params,
            }));
        }
    }
    Ok(None)
}

/// Factorization of a denominator as `prod (1 - q^a T^b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorShape {
    /// `(a, b)` pairs in the order found, `b >= 1`.
    pub pairs: Vec<(i64, u32)>,
}

fn q_power(q: u64, a: i64) -> Rat {
    let base = Rat::from_integer(BigInt::from(q));
    if a >= 0 {
        Pow::pow(&base, a as u32)
    } else {
        Pow::pow(&base.recip(), (-a) as u32)
    }
}

/// `1 - q^a T^b`
fn shape_factor(q: u64, a: i64, b: u32) -> Poly {
    &Poly::one() - &Poly::monomial(q_power(q, a), b as usize)
}

impl DenominatorShape {
    pub fn product(&self, q: u64) -> Poly {
        self.pairs
            .iter()
            .fold(Poly::one(), |acc, &(a, b)| &acc * &shape_factor(q, a, b))
    }
}

impl std::fmt::Display for DenominatorShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Writes `denom(f)` as a product of factors `1 - q^a T^b` with `a` and `b`
/// in the given ranges. Candidates are tried in `(b, a)` order and the first
/// complete factorization is returned; factors may repeat.
pub fn denominator_shape(
    f: &RatFn,
    q: u64,
    a_range: RangeInclusive<i64>,
    b_range: RangeInclusive<u32>,
) -> Option<DenominatorShape> {
    let candidates: Vec<(i64, u32, Poly)> = b_range
        .filter(|&b| b >= 1)
        .flat_map(|b| a_range.clone().map(move |a| (a, b)))
        .map(|(a, b)| (a, b, shape_factor(q, a, b)))
        .collect();
    let mut pairs = Vec::new();
    split(f.denom(), &candidates, 0, &mut pairs).then_some(DenominatorShape { pairs })
}

fn split(d: &Poly, candidates: &[(i64, u32, Poly)], start: usize, pairs: &mut Vec<(i64, u32)>) -> bool {
    let deg = d.degree().unwrap_or(0);
    if deg == 0 {
        return d.coeff(0).is_one();
    }
    for (idx, (a, b, factor)) in candidates.iter().enumerate().skip(start) {
        if *b as usize > deg {
            break;
        }
        let (quot, rem) = d.div_rem(factor);
        if rem.is_zero() {
            pairs.push((*a, *b));
            if split(&quot, candidates, idx, pairs) {
                return true;
            }
            pairs.pop();
        }
    }
    false
}

/// Why a series fails the curve-zeta shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeMismatch {
    /// Denominator differs from `(1 - T)(1 - qT)`.
    Denominator(Poly),
    /// Numerator has odd degree (or vanishes).
    Numerator(Poly),
}

impl std::fmt::Display for ShapeMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShapeMismatch::Denominator(d) => write!(f, "denominator {d} is not (1 - T)(1 - qT)"),
            ShapeMismatch::Numerator(n) => write!(f, "numerator {n} does not have even degree"),
        }
    }
}

/// Checks `f = P(T) / ((1 - T)(1 - qT))` with `deg P` even and returns the
/// genus `deg P / 2`.
pub fn curve_shape_check(f: &RatFn, q: u64) -> Result<u32, ShapeMismatch> {
    let expected = &shape_factor(q, 0, 1) * &shape_factor(q, 1, 1);
    if *f.denom() != expected {
        return Err(ShapeMismatch::Denominator(f.denom().clone()));
    }
    match f.numer().degree() {
        Some(d) if d % 2 == 0 => Ok((d / 2) as u32),
        _ => Err(ShapeMismatch::Numerator(f.numer().clone())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalEquation {
    Holds,
    Violation(RatFn),
}

/// `f(1/(qT)) = q^(1-g) T^(2-2g) f(T)`, decided exactly.
pub fn functional_equation_check(f: &RatFn, q: u64, genus: u32) -> FunctionalEquation {
    let residual = ratfn_substitute_inverse(f, q, genus);
    if residual.is_zero() {
        FunctionalEquation::Holds
    } else {
        FunctionalEquation::Violation(residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;
    use proptest::prelude::*;

    fn seq(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&c| rat_int(c)).collect()
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFn {
        RatFn::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn recurrence_examples() {
        let r = find_recurrence(&seq(&[1; 6]), 1, 3).unwrap().unwrap();
        assert_eq!(r.ratfn, rf(&[1], &[1, -1]));
        assert_eq!(r.recurrence_order, 1);

        let r = find_recurrence(&seq(&[1, 3, 3, 9, 9, 27, 27, 81]), 2, 3).unwrap().unwrap();
        assert_eq!(r.ratfn, rf(&[1, 3], &[1, 0, -3]));
        assert_eq!(r.recurrence_order, 2);
        assert_eq!(r.guard, 4);

        let r = find_recurrence(&seq(&[1, 3, 7, 15, 31, 63, 127, 255]), 2, 3).unwrap().unwrap();
        assert_eq!(r.ratfn, rf(&[1], &[1, -3, 2]));
        assert_eq!(r.guard, 5);
    }

    #[test]
    fn recurrence_edges() {
        assert!(matches!(
            find_recurrence(&seq(&[1, 2, 3]), 2, 3),
            Err(RationalityError::InsufficientCoefficients { .. })
        ));
        let zero = find_recurrence(&seq(&[0; 5]), 2, 1).unwrap().unwrap();
        assert!(zero.ratfn.is_zero());
        // 2^(n^2) is not rational at this length
        let wild: Vec<Rat> = (0..8u32).map(|n| rat_int(BigInt::from(2).pow(n * n))).collect();
        assert_eq!(find_recurrence(&wild, 2, 3).unwrap(), None);
        // numerator degree equal to denominator degree needs an onset past r
        let ell = rf(&[1, -2, 5], &[1, -6, 5]);
        let coeffs = ell.expand(7).coeffs().to_vec();
        let r = find_recurrence(&coeffs, 2, 3).unwrap().unwrap();
        assert_eq!(r.ratfn, ell);
        assert_eq!((r.recurrence_order, r.onset, r.guard), (2, 3, 3));
    }

    #[test]
    fn shape_examples() {
        assert_eq!(
            denominator_shape(&rf(&[1, 3], &[1, 0, -3]), 3, -2..=2, 1..=4).unwrap().pairs,
            vec![(1, 2)]
        );
        assert_eq!(
            denominator_shape(&rf(&[1], &[1, -3, 2]), 2, -2..=2, 1..=4).unwrap().pairs,
            vec![(0, 1), (1, 1)]
        );
        assert_eq!(denominator_shape(&rf(&[1], &[1, 0, 0, -5]), 2, -4..=4, 1..=4), None);
        // repeated factor
        assert_eq!(
            denominator_shape(&rf(&[1], &[1, -2, 1]), 7, -1..=1, 1..=2).unwrap().pairs,
            vec![(0, 1), (0, 1)]
        );
        // negative exponent: 1 - T/2
        let half = RatFn::new(Poly::one(), Poly::new(vec![rat_int(1), Rat::new((-1).into(), 2.into())])).unwrap();
        assert_eq!(denominator_shape(&half, 2, -2..=2, 1..=1).unwrap().pairs, vec![(-1, 1)]);
        // constant denominator
        assert_eq!(denominator_shape(&rf(&[1, 1], &[1]), 2, 0..=0, 1..=1).unwrap().pairs, vec![]);
    }

    #[test]
    fn curve_checks() {
        assert_eq!(curve_shape_check(&rf(&[1], &[1, -3, 2]), 2), Ok(0));
        assert_eq!(curve_shape_check(&rf(&[1, -2, 5], &[1, -6, 5]), 5), Ok(1));
        assert!(matches!(
            curve_shape_check(&rf(&[1], &[1, -1]), 2),
            Err(ShapeMismatch::Denominator(_))
        ));
        assert!(matches!(
            curve_shape_check(&rf(&[1, 1], &[1, -6, 5]), 5),
            Err(ShapeMismatch::Numerator(_))
        ));
        assert_eq!(functional_equation_check(&rf(&[1], &[1, -4, 3]), 3, 0), FunctionalEquation::Holds);
        assert_eq!(functional_equation_check(&rf(&[1, -2, 5], &[1, -6, 5]), 5, 1), FunctionalEquation::Holds);
        assert!(matches!(
            functional_equation_check(&rf(&[1], &[1, -1]), 2, 0),
            FunctionalEquation::Violation(_)
        ));
    }

    /// Whether the fit system for (r, s) is consistent, via ranks of the
    /// coefficient and augmented matrices (fraction-free over BigInt).
    fn consistent(coeffs: &[Rat], r: usize, s: usize) -> bool {
        let at = |i: isize| if i < 0 { Rat::zero() } else { coeffs[i as usize].clone() };
        let a: Vec<Vec<Rat>> = (s..coeffs.len())
            .map(|n| (1..=r).map(|i| at(n as isize - i as isize)).collect())
            .collect();
        let ab: Vec<Vec<Rat>> = (s..coeffs.len())
            .map(|n| {
                let mut row: Vec<Rat> = (1..=r).map(|i| at(n as isize - i as isize)).collect();
                row.push(coeffs[n].clone());
                row
            })
            .collect();
        rank(a) == rank(ab)
    }

    fn rank(mut m: Vec<Vec<Rat>>) -> usize {
        let cols = m.first().map_or(0, Vec::len);
        let mut rk = 0;
        for c in 0..cols {
            if let Some(p) = (rk..m.len()).find(|&i| !m[i][c].is_zero()) {
                m.swap(rk, p);
                for i in rk + 1..m.len() {
                    let f = &m[i][c] / &m[rk][c];
                    for j in c..cols {
                        let sub = &f * &m[rk][j];
                        m[i][j] -= sub;
                    }
                }
                rk += 1;
            }
        }
        rk
    }

    fn small_ratfn() -> impl Strategy<Value = RatFn> {
        (
            proptest::collection::vec(-4i64..=4, 1..4),
            proptest::collection::vec(-3i64..=3, 0..3),
        )
            .prop_map(|(n, d)| {
                let mut den = vec![1];
                den.extend(d);
                rf(&n, &den)
            })
    }

    proptest! {
        #[test]
        fn detection_is_sound_and_minimal(f in small_ratfn()) {
            let coeffs = f.expand(11).coeffs().to_vec();
            let r = find_recurrence(&coeffs, 4, 3).unwrap().unwrap();
            let again = r.ratfn.expand(11);
            prop_assert_eq!(again.coeffs(), coeffs.as_slice());
            let used = coeffs.len() - r.guard;
            for params in 0..used {
                for rr in 0..=params.min(4) {
                    prop_assert!(!consistent(&coeffs, rr, params - rr), "({}, {}) fits", rr, params - rr);
                }
            }
            // the generating function itself fits within the budget
            prop_assert_eq!(r.ratfn, f);
        }

        #[test]
        fn shape_product_matches(pairs in proptest::collection::vec((-2i64..=2, 1u32..=3), 0..3)) {
            let q = 3;
            let d = DenominatorShape { pairs }.product(q);
            let f = RatFn::new(Poly::one(), d.clone()).unwrap();
            let found = denominator_shape(&f, q, -2..=2, 1..=3).unwrap();
            prop_assert_eq!(found.product(q), d);
        }
    }
}
