//! Exact point counts: `N_n = |X(F_{q^n})|`, `Ñ_n = |X(Z/p^(n+1))|` and the
//! liftable counts `N̄_n`, the size of the image of `X(Z_p)` in
//! `X(Z/p^(n+1))`, obtained by projecting solutions modulo ever higher powers
//! of `p` until the image stops shrinking.

mod cache;
mod enumerate;

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{field_make, is_prime, AlgebraError, FieldDesc, ZmodElem};
use crate::varieties::{jacobian_rank_at, VarietyError, VarietyPresentation};

pub use cache::{CacheKey, CountCache};
pub use enumerate::{collect_solutions, enumerate_solutions, ChunkSpec, ProjectiveMethod, RingParams};
use enumerate::{enumerate_field, field_tuple_count, PadicWalk};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_WINDOW: u32 = 2;
/// Liftable counts look at most this many levels beyond the target.
pub const STABILIZATION_CEILING: u32 = 12;
const CHUNKS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("enumeration budget of {budget} tuples exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("liftable count did not stabilize by level {m_max} (last value {last_value})")]
    Unstable { m_max: u32, last_value: u64 },
    #[error("p-adic counting needs an affine presentation")]
    ProjectivePadic,
    #[error("modulus {p}^{k} is too large")]
    PrecisionTooLarge { p: u64, k: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("declared smooth, but the Jacobian has rank {rank} < {needed} at {point:?} mod {p}")]
    SmoothnessAudit {
        p: u64,
        point: Vec<u64>,
        rank: usize,
        needed: usize,
    },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountKind {
    Weil,
    Igusa,
    Serre,
}

impl CountKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CountKind::Weil => "weil",
            CountKind::Igusa => "igusa",
            CountKind::Serre => "serre",
        }
    }

    /// First index of the sequence: `n = 1` for Weil counts, else `n = 0`.
    pub fn first_index(&self) -> usize {
        match self {
            CountKind::Weil => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where counts are taken: `F_{p^m}` for Weil counts, `Z_p` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Field { p: u64, m: u32 },
    Prime(u64),
}

/// Exact counts `values[i]` for `n = first_index + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSequence {
    pub kind: CountKind,
    pub variety_hash: String,
    pub base: Base,
    pub values: Vec<u64>,
    /// Per-entry provenance (stabilization level for liftable counts).
    pub meta: Vec<String>,
}

impl CountSequence {
    pub fn first_index(&self) -> usize {
        self.kind.first_index()
    }

    /// Count at index `n`, if present.
    pub fn get(&self, n: usize) -> Option<u64> {
        n.checked_sub(self.first_index())
            .and_then(|i| self.values.get(i).copied())
    }

    /// Last index covered.
    pub fn last_index(&self) -> Option<usize> {
        (!self.values.is_empty()).then(|| self.first_index() + self.values.len() - 1)
    }

    /// Builds a sequence from raw values (for tests and externally supplied counts).
    pub fn from_values(kind: CountKind, base: Base, values: Vec<u64>) -> Self {
        let meta = vec!["-".to_string(); values.len()];
        CountSequence {
            kind,
            variety_hash: String::new(),
            base,
            values,
            meta,
        }
    }
}

/// Result of a liftable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Liftable {
    pub value: u64,
    /// Level `m` at which the image was seen to be stable, `None` when the
    /// smooth shortcut applied.
    pub stabilized_at: Option<u32>,
}

impl Liftable {
    pub fn meta(&self) -> String {
        match self.stabilized_at {
            Some(m) => format!("m={m}"),
            None => "smooth".to_string(),
        }
    }
}

/// Counting engine: worker pool, enumeration budget and optional cache.
pub struct Engine {
    pool: rayon::ThreadPool,
    workers: usize,
    budget: u64,
    chunks: usize,
    projective: ProjectiveMethod,
    cache: Option<CountCache>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("workers", &self.workers)
            .field("budget", &self.budget)
            .field("chunks", &self.chunks)
            .finish()
    }
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(1, DEFAULT_BUDGET)
    }
}

impl Engine {
    pub fn new(workers: usize, budget: u64) -> Self {
        let workers = workers.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        Engine {
            pool,
            workers,
            budget,
            chunks: CHUNKS,
            projective: ProjectiveMethod::default(),
            cache: None,
        }
    }

    pub fn with_cache(mut self, cache: CountCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_chunks(mut self, chunks: usize) -> Self {
        self.chunks = chunks.max(1);
        self
    }

    pub fn with_projective_method(mut self, method: ProjectiveMethod) -> Self {
        self.projective = method;
        self
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Number of points over the given field; projective presentations
    /// count lines.
    pub fn count_fq(&self, v: &VarietyPresentation, field: &Arc<FieldDesc>) -> Result<u64, CountError> {
        let q = field.order();
        let visits = field_tuple_count(v, q, self.projective).unwrap_or(u64::MAX);
        if visits > self.budget {
            return Err(CountError::BudgetExceeded { budget: self.budget });
        }
        let chunks = self.chunks;
        let method = self.projective;
        let raw: u64 = self.pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|i| {
                    let mut n = 0u64;
                    enumerate_field(v, field, method, ChunkSpec::new(i, chunks), &mut |_| n += 1);
                    n
                })
                .sum()
        });
        if v.ambient.is_projective() && method == ProjectiveMethod::Cone {
            // nonzero cone vectors come in orbits of size q - 1
            if raw % (q - 1) != 0 {
                return Err(CountError::Internal(format!(
                    "cone count {raw} not divisible by q - 1 = {}",
                    q - 1
                )));
            }
            return Ok(raw / (q - 1));
        }
        Ok(raw)
    }

    fn check_padic(&self, v: &VarietyPresentation, p: u64) -> Result<(), CountError> {
        if !is_prime(p) {
            return Err(CountError::NotPrime(p));
        }
        if v.ambient.is_projective() {
            return Err(CountError::ProjectivePadic);
        }
        Ok(())
    }

    /// Runs `per_chunk` over all chunks of the level-1 roots in parallel and
    /// sums the results, failing if the shared budget ran out.
    fn padic_sum(
        &self,
        v: &VarietyPresentation,
        p: u64,
        max_level: u32,
        per_root: &(dyn Fn(&PadicWalk, &[u64]) -> u64 + Sync),
    ) -> Result<u64, CountError> {
        let visited = AtomicU64::new(0);
        let exceeded = AtomicBool::new(false);
        let walk = PadicWalk::new(v, p, max_level, self.budget, &visited, &exceeded)?;
        let chunks = self.chunks;
        let total: u64 = self.pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|i| {
                    let mut n = 0u64;
                    walk.roots(ChunkSpec::new(i, chunks), &mut |xs| n += per_root(&walk, xs));
                    n
                })
                .sum()
        });
        if exceeded.load(Ordering::Relaxed) {
            return Err(CountError::BudgetExceeded { budget: self.budget });
        }
        Ok(total)
    }

    /// Number of solutions modulo `p^(n+1)`.
    pub fn count_padic(&self, v: &VarietyPresentation, p: u64, n: u32) -> Result<u64, CountError> {
        self.check_padic(v, p)?;
        let k = n + 1;
        self.padic_sum(v, p, k, &|walk, root| {
            let mut c = 0u64;
            walk.descendants(root, 1, k, &mut |_| c += 1);
            c
        })
    }

    /// Solutions modulo `p^(n+1)` that extend to solutions modulo `p^(m+1)`.
    pub fn count_projected(&self, v: &VarietyPresentation, p: u64, n: u32, m: u32) -> Result<u64, CountError> {
        self.check_padic(v, p)?;
        let (k, top) = (n + 1, m + 1);
        self.padic_sum(v, p, top.max(k), &|walk, root| {
            let mut c = 0u64;
            walk.descendants(root, 1, k, &mut |xs| {
                if walk.has_descendant(xs, k, top) {
                    c += 1;
                }
            });
            c
        })
    }

    /// Checks that the Jacobian has full rank (one per equation) at every
    /// solution modulo `p`.
    pub fn smoothness_audit(&self, v: &VarietyPresentation, p: u64) -> Result<(), CountError> {
        self.check_padic(v, p)?;
        let needed = v.polys.len();
        let roots = collect_solutions(v, &RingParams::Zmod { p, k: 1 }, ChunkSpec::WHOLE)?;
        for xs in roots {
            let point = xs
                .iter()
                .map(|&x| ZmodElem::new(p, 1, x as i128))
                .collect::<Result<Vec<_>, _>>()?;
            let rank = jacobian_rank_at(v, &point)?;
            if rank < needed {
                return Err(CountError::SmoothnessAudit {
                    p,
                    point: xs,
                    rank,
                    needed,
                });
            }
        }
        Ok(())
    }

    /// Liftable count `N̄_n`. Declared-smooth presentations that pass the
    /// Jacobian audit return `Ñ_n` directly; otherwise the image of the
    /// solutions modulo `p^(m+1)` is tracked for `m = n, n+1, ...` until it
    /// is unchanged for `window` consecutive steps.
    pub fn count_liftable(
        &self,
        v: &VarietyPresentation,
        p: u64,
        n: u32,
        window: u32,
    ) -> Result<Liftable, CountError> {
        if v.is_smooth_declared() {
            self.smoothness_audit(v, p)?;
            return Ok(Liftable {
                value: self.count_padic(v, p, n)?,
                stabilized_at: None,
            });
        }
        self.count_liftable_by_projection(v, p, n, window)
    }

    /// The stabilized projection, without the smooth shortcut.
    pub fn count_liftable_by_projection(
        &self,
        v: &VarietyPresentation,
        p: u64,
        n: u32,
        window: u32,
    ) -> Result<Liftable, CountError> {
        let window = window.max(1);
        let m_max = n + STABILIZATION_CEILING;
        let mut last = self.count_padic(v, p, n)?;
        let mut unchanged = 0;
        for m in n + 1..=m_max {
            let value = self.count_projected(v, p, n, m)?;
            if value > last {
                return Err(CountError::Internal(format!(
                    "image grew from {last} to {value} at level {m}"
                )));
            }
            if value == last {
                unchanged += 1;
            } else {
                unchanged = 0;
            }
            last = value;
            if unchanged >= window {
                return Ok(Liftable {
                    value,
                    stabilized_at: Some(m),
                });
            }
        }
        Err(CountError::Unstable {
            m_max,
            last_value: last,
        })
    }

    fn cached(
        &self,
        key: &CacheKey,
        n: usize,
        compute: impl FnOnce() -> Result<(u64, String), CountError>,
    ) -> Result<(u64, String), CountError> {
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.get(key, n)? {
                return Ok(hit);
            }
            let fresh = compute()?;
            cache.put(key, n, fresh.0, &fresh.1)?;
            return Ok(fresh);
        }
        compute()
    }

    /// One count with its provenance tag, read from or written to the cache.
    /// Weil counts need a field base and `n >= 1`; Igusa and Serre counts a
    /// prime base. `window` only affects Serre counts.
    pub fn count_at(
        &self,
        v: &VarietyPresentation,
        kind: CountKind,
        base: Base,
        n: usize,
        window: u32,
    ) -> Result<(u64, String), CountError> {
        match (kind, base) {
            (CountKind::Weil, Base::Field { p, m }) if n >= 1 => {
                let key = CacheKey::new(v, kind, format!("p{p}m{m}"));
                self.cached(&key, n, || {
                    let field = Arc::new(field_make(p, m * n as u32)?);
                    Ok((self.count_fq(v, &field)?, "-".to_string()))
                })
            }
            (CountKind::Igusa, Base::Prime(p)) => {
                let key = CacheKey::new(v, kind, format!("p{p}"));
                self.cached(&key, n, || Ok((self.count_padic(v, p, n as u32)?, "-".to_string())))
            }
            (CountKind::Serre, Base::Prime(p)) => {
                let key = CacheKey::new(v, kind, format!("p{p}w{window}"));
                self.cached(&key, n, || {
                    let l = self.count_liftable(v, p, n as u32, window)?;
                    Ok((l.value, l.meta()))
                })
            }
            _ => Err(CountError::Internal(format!("no {kind} count at index {n} over {base:?}"))),
        }
    }

    fn sequence(
        &self,
        v: &VarietyPresentation,
        kind: CountKind,
        base: Base,
        upto: usize,
        window: u32,
    ) -> Result<CountSequence, CountError> {
        let mut values = Vec::new();
        let mut meta = Vec::new();
        for n in kind.first_index()..=upto {
            let (value, tag) = self.count_at(v, kind, base, n, window)?;
            values.push(value);
            meta.push(tag);
        }
        Ok(CountSequence {
            kind,
            variety_hash: v.content_hash(),
            base,
            values,
            meta,
        })
    }

    /// `N_1..=N_upto` over `F_{p^m}`; `N_n` is counted in `F_{p^(mn)}`.
    pub fn weil_sequence(
        &self,
        v: &VarietyPresentation,
        p: u64,
        m: u32,
        upto: usize,
    ) -> Result<CountSequence, CountError> {
        self.sequence(v, CountKind::Weil, Base::Field { p, m }, upto, 0)
    }

    /// `Ñ_0..=Ñ_upto`.
    pub fn igusa_sequence(&self, v: &VarietyPresentation, p: u64, upto: usize) -> Result<CountSequence, CountError> {
        self.sequence(v, CountKind::Igusa, Base::Prime(p), upto, 0)
    }

    /// `N̄_0..=N̄_upto`; any unstable entry aborts the sequence.
    pub fn serre_sequence(
        &self,
        v: &VarietyPresentation,
        p: u64,
        upto: usize,
        window: u32,
    ) -> Result<CountSequence, CountError> {
        self.sequence(v, CountKind::Serre, Base::Prime(p), upto, window)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varieties::Ambient;

    fn var(amb: Ambient, polys: &[&str]) -> VarietyPresentation {
        VarietyPresentation::from_strs("t", amb, polys, None).unwrap()
    }

    fn field(p: u64, m: u32) -> Arc<FieldDesc> {
        Arc::new(field_make(p, m).unwrap())
    }

    /// Independent oracle: all tuples over F_p for prime p, plain integer arithmetic.
    fn brute_affine_prime(v: &VarietyPresentation, p: u64) -> u64 {
        let n = v.nvars();
        let total = p.pow(n as u32);
        (0..total)
            .filter(|&idx| {
                let xs: Vec<u64> = (0..n).map(|i| idx / p.pow(i as u32) % p).collect();
                v.polys.iter().all(|f| crate::varieties::eval_mod(f, &xs, p) == 0)
            })
            .count() as u64
    }

    #[test]
    fn weil_examples() {
        let e = Engine::default();
        let p1 = var(Ambient::Projective(1), &[]);
        assert_eq!(e.count_fq(&p1, &field(3, 1)).unwrap(), 4);
        let fat = var(Ambient::Affine(1), &["x0^2"]);
        assert_eq!(e.count_fq(&fat, &field(5, 1)).unwrap(), 1);
        let ell = var(Ambient::Affine(2), &["x1^2 - x0^3 - x0 - 1"]);
        assert_eq!(brute_affine_prime(&ell, 5), 8);
        assert_eq!(e.count_fq(&ell, &field(5, 1)).unwrap(), 8);
    }

    #[test]
    fn cone_and_cells_agree() {
        let cells = Engine::default();
        let cone = Engine::default().with_projective_method(ProjectiveMethod::Cone);
        let curves = [
            var(Ambient::Projective(2), &["x1^2*x2 - x0^3 - x0*x2^2 - x2^3"]),
            var(Ambient::Projective(2), &["x0^2 + x1^2 - x2^2"]),
            var(Ambient::Projective(3), &["x0*x3 - x1*x2"]),
            var(Ambient::Projective(2), &[]),
        ];
        for v in &curves {
            for (p, m) in [(2, 1), (2, 2), (3, 1), (5, 1), (3, 2)] {
                let f = field(p, m);
                assert_eq!(cells.count_fq(v, &f).unwrap(), cone.count_fq(v, &f).unwrap());
            }
        }
    }

    #[test]
    fn empty_system_counts() {
        let e = Engine::default();
        for m in 0..=2usize {
            let a = var(Ambient::Affine(m), &[]);
            for (p, deg) in [(2u64, 1u32), (2, 3), (3, 2)] {
                let q = p.pow(deg);
                assert_eq!(e.count_fq(&a, &field(p, deg)).unwrap(), q.pow(m as u32));
            }
            for (p, n) in [(2u64, 0u32), (3, 1), (2, 3)] {
                assert_eq!(e.count_padic(&a, p, n).unwrap(), p.pow((n + 1) * m as u32));
            }
        }
    }

    #[test]
    fn padic_examples() {
        let e = Engine::default();
        let line = var(Ambient::Affine(1), &[]);
        assert_eq!(e.count_padic(&line, 3, 2).unwrap(), 27);
        let fat = var(Ambient::Affine(1), &["x0^2"]);
        assert_eq!(e.count_padic(&fat, 3, 1).unwrap(), 3);
        assert_eq!(e.count_padic(&fat, 3, 3).unwrap(), 9);
        let p1 = var(Ambient::Projective(1), &[]);
        assert_eq!(e.count_padic(&p1, 3, 1), Err(CountError::ProjectivePadic));
        assert_eq!(e.count_padic(&fat, 4, 1), Err(CountError::NotPrime(4)));
    }

    /// Oracle: all residues modulo p^k, plain integer arithmetic.
    fn brute_padic(v: &VarietyPresentation, p: u64, k: u32) -> u64 {
        let m = p.pow(k);
        let n = v.nvars();
        (0..m.pow(n as u32))
            .filter(|&idx| {
                let xs: Vec<u64> = (0..n).map(|i| idx / m.pow(i as u32) % m).collect();
                v.polys.iter().all(|f| crate::varieties::eval_mod(f, &xs, m) == 0)
            })
            .count() as u64
    }

    #[test]
    fn tree_walk_matches_flat_enumeration() {
        let e = Engine::default();
        let cases = [
            var(Ambient::Affine(2), &["x1^2 - x0^3 + x0 + 1"]),
            var(Ambient::Affine(2), &["x0*x1"]),
            var(Ambient::Affine(2), &["x0^2 - x1^3"]),
            var(Ambient::Affine(1), &["x0^2 - 3"]),
            var(Ambient::Affine(2), &["x0^2 + x1^2 - 1", "x0 - x1"]),
        ];
        for v in &cases {
            for (p, kmax) in [(2u64, 5u32), (3, 3), (5, 2)] {
                for k in 1..=kmax {
                    assert_eq!(e.count_padic(v, p, k - 1).unwrap(), brute_padic(v, p, k), "{v:?} p={p} k={k}");
                }
            }
        }
        // known values for the smooth curve y^2 = x^3 - x - 1 at p = 5
        assert_eq!(e.count_padic(&cases[0], 5, 0).unwrap(), 7);
        assert_eq!(e.count_padic(&cases[0], 5, 1).unwrap(), 35);
        assert_eq!(e.count_padic(&cases[0], 5, 2).unwrap(), 175);
    }

    #[test]
    fn liftable_examples() {
        let e = Engine::default();
        let fat = var(Ambient::Affine(1), &["x0^2"]);
        let l = e.count_liftable(&fat, 3, 1, 2).unwrap();
        assert_eq!(l.value, 1);
        assert_eq!(l.stabilized_at, Some(4));

        let line = VarietyPresentation::from_strs("A1", Ambient::Affine(1), &[], Some(true)).unwrap();
        let l = e.count_liftable(&line, 5, 2, 2).unwrap();
        assert_eq!(l, Liftable { value: 125, stabilized_at: None });

        let obstructed = var(Ambient::Affine(1), &["x0^2 - 3"]);
        assert_eq!(e.count_padic(&obstructed, 3, 0).unwrap(), 1);
        assert_eq!(e.count_liftable(&obstructed, 3, 0, 2).unwrap().value, 0);
    }

    #[test]
    fn smoothness_audit_rejects_singular_declaration() {
        let e = Engine::default();
        let cusp = VarietyPresentation::from_strs("cusp", Ambient::Affine(2), &["x1^2 - x0^3"], Some(true)).unwrap();
        assert!(matches!(
            e.count_liftable(&cusp, 5, 1, 2),
            Err(CountError::SmoothnessAudit { rank: 0, needed: 1, .. })
        ));
    }

    #[test]
    fn unstable_is_reported() {
        // x^2 = 0 never stabilizes with a window longer than the ceiling
        let e = Engine::default();
        let fat = var(Ambient::Affine(1), &["x0^2"]);
        assert!(matches!(
            e.count_liftable(&fat, 2, 0, STABILIZATION_CEILING + 1),
            Err(CountError::Unstable { m_max: 12, last_value: 1 })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let e = Engine::new(1, 1000);
        let a2 = var(Ambient::Affine(2), &[]);
        assert_eq!(
            e.count_fq(&a2, &field(37, 1)),
            Err(CountError::BudgetExceeded { budget: 1000 })
        );
        assert_eq!(
            e.count_padic(&a2, 3, 4),
            Err(CountError::BudgetExceeded { budget: 1000 })
        );
    }

    #[test]
    fn chunk_invariance() {
        let vs = [
            var(Ambient::Affine(2), &["x1^2 - x0^3 - x0 - 1"]),
            var(Ambient::Projective(2), &["x0^2 + x1^2 - x2^2"]),
            var(Ambient::Affine(1), &["x0^2"]),
        ];
        for v in &vs {
            let f = field(3, 2);
            let mut reference = None;
            for chunks in [1usize, 2, 7] {
                let e = Engine::default().with_chunks(chunks);
                let w = e.count_fq(v, &f).unwrap();
                let padic = if v.ambient.is_projective() { 0 } else { e.count_padic(v, 3, 3).unwrap() };
                match reference {
                    None => reference = Some((w, padic)),
                    Some(r) => assert_eq!(r, (w, padic)),
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let fat = var(Ambient::Affine(1), &["x0^2"]);
        let sols = collect_solutions(&fat, &RingParams::Zmod { p: 3, k: 2 }, ChunkSpec::WHOLE).unwrap();
        assert_eq!(sols, vec![vec![0], vec![3], vec![6]]);

        let hyp = var(Ambient::Affine(2), &["x0*x1 - 1"]);
        let ring = RingParams::Field(field(3, 1), ProjectiveMethod::Cells);
        let mut all = Vec::new();
        for i in 0..3 {
            all.extend(collect_solutions(&hyp, &ring, ChunkSpec::new(i, 3)).unwrap());
        }
        assert_eq!(all, vec![vec![1, 1], vec![2, 2]]);

        let plane = var(Ambient::Affine(2), &[]);
        let ring = RingParams::Field(field(2, 1), ProjectiveMethod::Cells);
        assert_eq!(collect_solutions(&plane, &ring, ChunkSpec::WHOLE).unwrap().len(), 4);
    }

    #[test]
    fn chunks_partition_solutions() {
        let v = var(Ambient::Affine(2), &["x0^2 + x1^2 - 1"]);
        for ring in [
            RingParams::Field(field(5, 1), ProjectiveMethod::Cells),
            RingParams::Zmod { p: 5, k: 3 },
        ] {
            let whole = collect_solutions(&v, &ring, ChunkSpec::WHOLE).unwrap();
            for total in [2usize, 7] {
                let mut parts: Vec<Vec<u64>> = (0..total)
                    .flat_map(|i| collect_solutions(&v, &ring, ChunkSpec::new(i, total)).unwrap())
                    .collect();
                let mut w = whole.clone();
                parts.sort();
                w.sort();
                assert_eq!(parts, w);
                let mut dedup = parts.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), parts.len());
            }
        }
    }
}
