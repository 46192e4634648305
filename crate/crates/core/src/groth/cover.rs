use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::Value;

use super::{GrothError, K0Elem, SpecializationMap, Specialized};
use crate::algebra::Rat;

/// Unramified Galois cover `Y -> X` with group `G` and cyclic decomposition
/// group `C`, described by the classes `[Y/A_d]` of the quotients by the
/// subgroups `A_d` of `C` (one per divisor `d` of `|C|`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    c_order: u64,
    normalizer_order: u64,
    group_order: u64,
    classes: BTreeMap<u64, K0Elem>,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

impl CoverSpec {
    pub fn new(
        c_order: u64,
        normalizer_order: u64,
        group_order: u64,
        classes: BTreeMap<u64, K0Elem>,
    ) -> Result<Self, GrothError> {
        if c_order == 0 || normalizer_order == 0 || group_order == 0 {
            return Err(GrothError::InvalidCover("group orders must be positive".into()));
        }
        if normalizer_order % c_order != 0 || group_order % normalizer_order != 0 {
            return Err(GrothError::InvalidCover(format!(
                "need |C| = {c_order} | |N_G(C)| = {normalizer_order} | |G| = {group_order}"
            )));
        }
        if let Some(&divisor) = classes.keys().find(|&&d| d == 0 || c_order % d != 0) {
            return Err(GrothError::UnexpectedClass { divisor, c_order });
        }
        if let Some(d) = divisors(c_order).into_iter().find(|d| !classes.contains_key(d)) {
            return Err(GrothError::MissingClass(d));
        }
        Ok(CoverSpec {
            c_order,
            normalizer_order,
            group_order,
            classes,
        })
    }

    /// Reads `{"c_order", "group_order", "normalizer_order", "classes"}`
    /// where `classes` maps each divisor (as a string key) to an element
    /// expression.
    pub fn from_json(text: &str) -> Result<Self, GrothError> {
        let v: Value = serde_json::from_str(text).map_err(|e| GrothError::Json(e.to_string()))?;
        let field = |name: &str| -> Result<u64, GrothError> {
            v.get(name)
                .and_then(|x| x.as_u64().or_else(|| x.as_str().and_then(|s| s.parse().ok())))
                .ok_or_else(|| GrothError::Json(format!("missing or invalid \"{name}\"")))
        };
        let obj = v
            .get("classes")
            .and_then(Value::as_object)
            .ok_or_else(|| GrothError::Json("missing \"classes\" object".into()))?;
        let mut classes = BTreeMap::new();
        for (key, expr) in obj {
            let d: u64 = key
                .parse()
                .map_err(|_| GrothError::Json(format!("class key {key:?} is not a divisor")))?;
            let elem = match expr {
                Value::String(s) => K0Elem::parse(s)?,
                Value::Number(n) if n.is_i64() => K0Elem::constant(Rat::from_integer(n.as_i64().unwrap_or(0).into())),
                _ => return Err(GrothError::Json(format!("class {key} must be an expression string"))),
            };
            classes.insert(d, elem);
        }
        Self::new(field("c_order")?, field("normalizer_order")?, field("group_order")?, classes)
    }

    pub fn c_order(&self) -> u64 {
        self.c_order
    }

    pub fn normalizer_order(&self) -> u64 {
        self.normalizer_order
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    /// `[Y/A_d]` for each divisor `d` of `|C|`.
    pub fn classes(&self) -> &BTreeMap<u64, K0Elem> {
        &self.classes
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiCResult {
    /// `chi_c(phi_{Y, Y/A_d, A_d})` per divisor `d`.
    pub table: BTreeMap<u64, K0Elem>,
    /// `chi_c(phi_{Y, X, C})`
    pub result: K0Elem,
}

fn int(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Solves `d [Y/A_d] = sum_{d' | d} d' t_{d'}` for the table by increasing
/// divisor, then scales `t_{|C|}` by `|C| / |N_G(C)|`.
pub fn chi_c_cover(spec: &CoverSpec) -> ChiCResult {
    let mut table: BTreeMap<u64, K0Elem> = BTreeMap::new();
    for d in divisors(spec.c_order) {
        let mut acc = spec.classes[&d].scale(&int(d));
        for (&e, t) in table.iter().filter(|(&e, _)| d % e == 0) {
            acc = acc.sub(&t.scale(&int(e)));
        }
        table.insert(d, acc.scale(&(int(1) / int(d))));
    }
    let result = table[&spec.c_order].scale(&(int(spec.c_order) / int(spec.normalizer_order)));
    ChiCResult { table, result }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    /// Euler characteristic of each table entry.
    pub table: BTreeMap<u64, Rat>,
    /// Euler characteristic of the result; an integer.
    pub result: Rat,
}

/// Euler characteristics of the `chi_c` table and result under `euler`,
/// which must assign every symbol. Fails if the result is not an integer,
/// or is nonzero for nontrivial `C`.
pub fn euler_integrality_check(spec: &CoverSpec, euler: &SpecializationMap) -> Result<EulerReport, GrothError> {
    let number = |x: &K0Elem| -> Result<Rat, GrothError> {
        match x.specialize(euler)? {
            Specialized::Number(r) => Ok(r),
            Specialized::Hodge(_) => Err(GrothError::InvalidCover("Euler map expected".into())),
        }
    };
    let chi = chi_c_cover(spec);
    let table = chi
        .table
        .iter()
        .map(|(&d, t)| Ok((d, number(t)?)))
        .collect::<Result<BTreeMap<_, _>, GrothError>>()?;
    let result = number(&chi.result)?;
    if !result.is_integer() {
        return Err(GrothError::EulerNotIntegral(result));
    }
    if spec.c_order > 1 && !result.is_zero() {
        return Err(GrothError::EulerNonzero {
            value: result,
            c_order: spec.c_order,
        });
    }
    Ok(EulerReport { table, result })
}
