use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{AlgebraError, FqElem, ZmodElem};

use super::{MultiPoly, VarietyError, VarietyPresentation};

/// A coordinate value: either in a finite field or in `Z/p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingElem {
    Fq(FqElem),
    Zmod(ZmodElem),
}

impl RingElem {
    fn same_ring(&self, other: &RingElem) -> bool {
        match (self, other) {
            (RingElem::Fq(a), RingElem::Fq(b)) => a.same_field(b),
            (RingElem::Zmod(a), RingElem::Zmod(b)) => a.same_ring(b),
            _ => false,
        }
    }

    fn from_integer(&self, c: &BigInt) -> RingElem {
        match self {
            RingElem::Fq(a) => {
                let p = BigInt::from(a.field().p());
                let r = ((c % &p) + &p) % &p;
                RingElem::Fq(FqElem::from_int(a.field(), r.to_i128().unwrap()))
            }
            RingElem::Zmod(a) => {
                let m = BigInt::from(a.modulus());
                let r = ((c % &m) + &m) % &m;
                RingElem::Zmod(
                    ZmodElem::new(a.p(), a.precision(), r.to_i128().unwrap()).expect("fits"),
                )
            }
        }
    }

    fn add(&self, other: &RingElem) -> Result<RingElem, AlgebraError> {
        match (self, other) {
            (RingElem::Fq(a), RingElem::Fq(b)) => a.add(b).map(RingElem::Fq),
            (RingElem::Zmod(a), RingElem::Zmod(b)) => a.add(b).map(RingElem::Zmod),
            _ => Err(AlgebraError::RingMismatch),
        }
    }

    fn mul(&self, other: &RingElem) -> Result<RingElem, AlgebraError> {
        match (self, other) {
            (RingElem::Fq(a), RingElem::Fq(b)) => a.mul(b).map(RingElem::Fq),
            (RingElem::Zmod(a), RingElem::Zmod(b)) => a.mul(b).map(RingElem::Zmod),
            _ => Err(AlgebraError::RingMismatch),
        }
    }

    fn pow(&self, e: u32) -> RingElem {
        match self {
            RingElem::Fq(a) => RingElem::Fq(a.pow(e as u64)),
            RingElem::Zmod(a) => RingElem::Zmod(a.pow(e)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElem::Fq(a) => a.is_zero(),
            RingElem::Zmod(a) => a.is_zero(),
        }
    }
}

/// Evaluates `f` at `point`, reducing integer coefficients into the ring of
/// the coordinates. A polynomial in zero variables needs a ring witness, so
/// `point` must be nonempty.
pub fn eval_poly(f: &MultiPoly, point: &[RingElem]) -> Result<RingElem, VarietyError> {
    if point.len() != f.nvars() || point.is_empty() {
        return Err(VarietyError::Arity {
            expected: f.nvars(),
            got: point.len(),
        });
    }
    let witness = &point[0];
    if point.iter().any(|x| !x.same_ring(witness)) {
        return Err(VarietyError::MixedRings);
    }
    let mut acc = witness.from_integer(&BigInt::from(0));
    for (c, e) in f.terms() {
        let mut t = witness.from_integer(c);
        for (x, &k) in point.iter().zip(e) {
            if k > 0 {
                t = t.mul(&x.pow(k))?;
            }
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// Rank over `F_p` of the Jacobian of the defining equations at a point
/// that solves them modulo `p`.
pub fn jacobian_rank_at(v: &VarietyPresentation, point: &[ZmodElem]) -> Result<usize, VarietyError> {
    if point.len() != v.nvars() {
        return Err(VarietyError::Arity {
            expected: v.nvars(),
            got: point.len(),
        });
    }
    let Some(first) = point.first() else {
        return Ok(0);
    };
    let p = first.p();
    if point.iter().any(|x| x.p() != p) {
        return Err(VarietyError::MixedRings);
    }
    let values: Vec<u64> = point.iter().map(|x| x.value() % p).collect();
    let eval = |f: &MultiPoly| eval_mod(f, &values, p);
    if v.polys.iter().any(|f| eval(f) != 0) {
        return Err(VarietyError::NotASolution);
    }
    let rows: Vec<Vec<u64>> = v
        .polys
        .iter()
        .map(|f| (0..v.nvars()).map(|j| eval(&f.derivative(j))).collect())
        .collect();
    Ok(rank_mod_p(rows, p))
}

/// Row rank of a matrix over `F_p` by Gaussian elimination.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = crate::algebra::zmod_pow(rows[rank][col], p - 2, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col] * inv % p;
                for c in col..ncols {
                    let sub = factor * rows[rank][c] % p;
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Evaluates `f` at integer residues modulo `m` (`m < 2^64`).
pub fn eval_mod(f: &MultiPoly, values: &[u64], m: u64) -> u64 {
    use crate::algebra::{zmod_mul, zmod_pow};
    let mut acc = 0u64;
    for (c, e) in f.terms() {
        let mut t = reduce_coeff(c, m);
        for (&x, &k) in values.iter().zip(e) {
            if k > 0 {
                t = zmod_mul(t, zmod_pow(x, k as u64, m), m);
            }
        }
        acc = ((acc as u128 + t as u128) % m as u128) as u64;
    }
    acc
}

/// Converts a small integer to `u64` residue modulo `m`.
pub(crate) fn reduce_coeff(c: &BigInt, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let r = ((c % &mb) + &mb) % &mb;
    r.to_u64().expect("residue below modulus")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field_make;
    use crate::varieties::Ambient;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn z(p: u64, k: u32, v: i128) -> RingElem {
        RingElem::Zmod(ZmodElem::new(p, k, v).unwrap())
    }

    #[test]
    fn examples() {
        let f = MultiPoly::parse("x0^2 - 2", 1).unwrap();
        assert_eq!(eval_poly(&f, &[z(5, 2, 3)]).unwrap(), z(5, 2, 7));

        let f2 = Arc::new(field_make(2, 1).unwrap());
        let g = MultiPoly::parse("x0*x1 + 1", 2).unwrap();
        let one = RingElem::Fq(FqElem::from_int(&f2, 1));
        assert!(eval_poly(&g, &[one.clone(), one.clone()]).unwrap().is_zero());

        let f5 = Arc::new(field_make(5, 1).unwrap());
        let h = MultiPoly::parse("x0^3 + x0 + 1", 1).unwrap();
        let v = eval_poly(&h, &[RingElem::Fq(FqElem::from_int(&f5, 2))]).unwrap();
        assert_eq!(v, RingElem::Fq(FqElem::from_int(&f5, 1)));

        assert!(matches!(eval_poly(&g, &[one.clone()]), Err(VarietyError::Arity { .. })));
        assert!(matches!(
            eval_poly(&g, &[one, z(2, 1, 1)]),
            Err(VarietyError::MixedRings)
        ));
    }

    #[test]
    fn jacobian_examples() {
        let zm = |p, v| ZmodElem::new(p, 1, v).unwrap();
        let fat = VarietyPresentation::from_strs("fat", Ambient::Affine(1), &["x0^2"], None).unwrap();
        assert_eq!(jacobian_rank_at(&fat, &[zm(3, 0)]).unwrap(), 0);
        let sq = VarietyPresentation::from_strs("sq", Ambient::Affine(1), &["x0^2 - 2"], None).unwrap();
        assert_eq!(jacobian_rank_at(&sq, &[zm(7, 4)]).unwrap(), 1);
        assert!(matches!(
            jacobian_rank_at(&sq, &[zm(7, 1)]),
            Err(VarietyError::NotASolution)
        ));
        let line = VarietyPresentation::from_strs("A1", Ambient::Affine(1), &[], None).unwrap();
        assert_eq!(jacobian_rank_at(&line, &[zm(5, 3)]).unwrap(), 0);
    }

    fn poly2() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((-6i64..=6, proptest::collection::vec(0u32..4, 2)), 0..5)
            .prop_map(|t| MultiPoly::from_terms(2, t.into_iter().map(|(c, e)| (c.into(), e)).collect()))
    }

    fn homogeneous3(deg: u32) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((-6i64..=6, 0..=deg, 0..=deg), 1..5).prop_map(move |t| {
            let terms = t
                .into_iter()
                .filter(|(_, a, b)| a + b <= deg)
                .map(|(c, a, b)| (c.into(), vec![a, b, deg - a - b]))
                .collect();
            MultiPoly::from_terms(3, terms)
        })
    }

    proptest! {
        #[test]
        fn evaluation_is_a_homomorphism(f in poly2(), g in poly2(), x in 0i128..125, y in 0i128..125) {
            let pt = [z(5, 3, x), z(5, 3, y)];
            let ef = eval_poly(&f, &pt).unwrap();
            let eg = eval_poly(&g, &pt).unwrap();
            prop_assert_eq!(eval_poly(&f.add(&g), &pt).unwrap(), ef.add(&eg).unwrap());
            prop_assert_eq!(eval_poly(&f.mul(&g), &pt).unwrap(), ef.mul(&eg).unwrap());
        }

        #[test]
        fn homogeneous_scaling(f in homogeneous3(3), lam in 1u64..9, a in 0u64..9, b in 0u64..9, c in 0u64..9) {
            let field = Arc::new(field_make(3, 2).unwrap());
            let e = |code| RingElem::Fq(FqElem::from_code(&field, code));
            let pt = [e(a), e(b), e(c)];
            let l = FqElem::from_code(&field, lam);
            let scaled: Vec<RingElem> = [a, b, c]
                .iter()
                .map(|&k| RingElem::Fq(FqElem::from_code(&field, k).mul(&l).unwrap()))
                .collect();
            let lhs = eval_poly(&f, &scaled).unwrap();
            let deg = f.degree().unwrap_or(0);
            let rhs = RingElem::Fq(l.pow(deg as u64)).mul(&eval_poly(&f, &pt).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
