//! Exhaustive enumeration of solution tuples.
//!
//! Finite-field points are enumerated stratum by stratum: an affine space is
//! one stratum; projective space is either split into the standard cells
//! (first nonzero coordinate equal to 1) or enumerated as the punctured
//! affine cone. The residue space is cut into work items (one per value of
//! the first free coordinate) and a [`ChunkSpec`] selects a contiguous block
//! of items, so chunks are disjoint and cover everything.
//!
//! Solutions modulo `p^k` are enumerated as a tree: all tuples modulo `p` are
//! tested, and every solution modulo `p^j` is extended by the `p^dim` digit
//! vectors `x + p^j t`, keeping those that solve the system modulo `p^(j+1)`.
//! Every solution modulo `p^(j+1)` reduces to one modulo `p^j`, so the tree
//! visits each solution exactly once.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{prime_power, zmod_mul, zmod_pow, FieldDesc, FqElem, LogTables};
use crate::varieties::{reduce_coeff, MultiPoly, VarietyPresentation};

use super::CountError;

/// Selects chunk `index` out of `total` disjoint chunks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkSpec {
    pub index: usize,
    pub total: usize,
}

impl ChunkSpec {
    pub const WHOLE: ChunkSpec = ChunkSpec { index: 0, total: 1 };

    pub fn new(index: usize, total: usize) -> Self {
        assert!(total >= 1 && index < total, "chunk {index} of {total}");
        ChunkSpec { index, total }
    }

    /// Item range `[lo, hi)` of this chunk among `n` items.
    fn range(&self, n: u64) -> (u64, u64) {
        let t = self.total as u128;
        let lo = (n as u128 * self.index as u128 / t) as u64;
        let hi = (n as u128 * (self.index as u128 + 1) / t) as u64;
        (lo, hi)
    }
}

/// How projective points over a finite field are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ProjectiveMethod {
    /// One representative per line: cells with leading coordinate 1.
    #[default]
    Cells,
    /// All nonzero vectors of the affine cone; the count is divided by `q - 1`.
    Cone,
}

/// The ring a solution lives in.
#[derive(Clone, Debug)]
pub enum RingParams {
    /// Finite field; coordinates are element codes `sum c_i p^i`.
    Field(Arc<FieldDesc>, ProjectiveMethod),
    /// `Z/p^k`; coordinates are residues in `[0, p^k)`.
    Zmod { p: u64, k: u32 },
}

#[derive(Clone, Debug)]
struct Stratum {
    prefix: Vec<u64>,
    free: usize,
}

fn strata(v: &VarietyPresentation, method: ProjectiveMethod) -> Vec<Stratum> {
    let n = v.nvars();
    if !v.ambient.is_projective() || method == ProjectiveMethod::Cone {
        return vec![Stratum {
            prefix: Vec::new(),
            free: n,
        }];
    }
    (0..n)
        .map(|i| {
            let mut prefix = vec![0; i];
            prefix.push(1);
            Stratum {
                prefix,
                free: n - i - 1,
            }
        })
        .collect()
}

/// Number of tuples an enumeration over `F_q` visits.
pub(crate) fn field_tuple_count(v: &VarietyPresentation, q: u64, method: ProjectiveMethod) -> Option<u64> {
    strata(v, method).iter().try_fold(0u64, |acc, s| {
        q.checked_pow(s.free as u32).and_then(|t| acc.checked_add(t))
    })
}

/// Arithmetic on element encodings, either discrete logs or plain codes.
trait FieldArith: Sync {
    fn lift_code(&self, code: u64) -> u64;
    fn lift_int(&self, c: &BigInt) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn pow(&self, a: u64, e: u32) -> u64;
}

struct Tabled(Arc<LogTables>);

impl FieldArith for Tabled {
    #[inline]
    fn lift_code(&self, code: u64) -> u64 {
        self.0.from_code(code) as u64
    }
    fn lift_int(&self, c: &BigInt) -> u64 {
        self.0.from_code(reduce_coeff(c, self.0.p())) as u64
    }
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        self.0.add(a as u32, b as u32) as u64
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.0.mul(a as u32, b as u32) as u64
    }
    #[inline]
    fn pow(&self, a: u64, e: u32) -> u64 {
        self.0.pow(a as u32, e) as u64
    }
}

/// Fallback for fields too large for tables; elements are codes.
struct Plain(Arc<FieldDesc>);

impl FieldArith for Plain {
    fn lift_code(&self, code: u64) -> u64 {
        code
    }
    fn lift_int(&self, c: &BigInt) -> u64 {
        reduce_coeff(c, self.0.p())
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        let x = FqElem::from_code(&self.0, a);
        let y = FqElem::from_code(&self.0, b);
        x.add(&y).expect("same field").code()
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        let x = FqElem::from_code(&self.0, a);
        let y = FqElem::from_code(&self.0, b);
        x.mul(&y).expect("same field").code()
    }
    fn pow(&self, a: u64, e: u32) -> u64 {
        FqElem::from_code(&self.0, a).pow(e as u64).code()
    }
}

/// A polynomial with coefficients already mapped into the field encoding.
struct CompiledPoly {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    fn new<A: FieldArith>(f: &MultiPoly, arith: &A) -> Self {
        let terms = f
            .terms()
            .iter()
            .filter_map(|(c, e)| {
                let c = arith.lift_int(c);
                (c != 0).then(|| {
                    let vars = e
                        .iter()
                        .enumerate()
                        .filter(|(_, &k)| k > 0)
                        .map(|(i, &k)| (i, k))
                        .collect();
                    (c, vars)
                })
            })
            .collect();
        CompiledPoly { terms }
    }

    #[inline]
    fn eval<A: FieldArith>(&self, arith: &A, xs: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(i, k) in vars {
                t = arith.mul(t, arith.pow(xs[i], k));
                if t == 0 {
                    break;
                }
            }
            acc = arith.add(acc, t);
        }
        acc
    }
}

fn enumerate_field_with<A: FieldArith>(
    v: &VarietyPresentation,
    field: &FieldDesc,
    method: ProjectiveMethod,
    chunk: ChunkSpec,
    arith: &A,
    sink: &mut dyn FnMut(&[u64]),
) {
    let q = field.order();
    let n = v.nvars();
    let polys: Vec<CompiledPoly> = v.polys.iter().map(|f| CompiledPoly::new(f, arith)).collect();
    let skip_origin = v.ambient.is_projective() && method == ProjectiveMethod::Cone;

    // Items: (stratum, first free value) or (stratum, none) for free == 0.
    let strata = strata(v, method);
    let items_per: Vec<u64> = strata.iter().map(|s| if s.free == 0 { 1 } else { q }).collect();
    let total: u64 = items_per.iter().sum();
    let (lo, hi) = chunk.range(total);

    let mut codes = vec![0u64; n];
    let mut elems = vec![0u64; n];
    let mut base = 0u64;
    for (s, &count) in strata.iter().zip(&items_per) {
        let (s_lo, s_hi) = (lo.max(base), hi.min(base + count));
        base += count;
        if s_lo >= s_hi {
            continue;
        }
        let fixed = s.prefix.len();
        for (i, &c) in s.prefix.iter().enumerate() {
            codes[i] = c;
            elems[i] = arith.lift_code(c);
        }
        for item in s_lo..s_hi {
            let local = item - (base - count);
            if s.free > 0 {
                codes[fixed] = local;
                elems[fixed] = arith.lift_code(local);
                for i in fixed + 1..n {
                    codes[i] = 0;
                    elems[i] = arith.lift_code(0);
                }
            }
            // odometer over coordinates fixed+1..n
            loop {
                let origin = skip_origin && codes.iter().all(|&c| c == 0);
                if !origin && polys.iter().all(|f| f.eval(arith, &elems) == 0) {
                    sink(&codes);
                }
                let mut i = n;
                let mut carried = true;
                while i > fixed + 1 {
                    i -= 1;
                    codes[i] += 1;
                    if codes[i] < q {
                        elems[i] = arith.lift_code(codes[i]);
                        carried = false;
                        break;
                    }
                    codes[i] = 0;
                    elems[i] = arith.lift_code(0);
                }
                if carried {
                    break;
                }
            }
        }
    }
}

/// Streams every solution over a finite field in the given chunk. Tuples
/// hold element codes. Enumeration order is deterministic.
pub(crate) fn enumerate_field(
    v: &VarietyPresentation,
    field: &Arc<FieldDesc>,
    method: ProjectiveMethod,
    chunk: ChunkSpec,
    sink: &mut dyn FnMut(&[u64]),
) {
    match field.tables() {
        Some(t) => enumerate_field_with(v, field, method, chunk, &Tabled(t), sink),
        None => enumerate_field_with(v, field, method, chunk, &Plain(field.clone()), sink),
    }
}

/// Shared state of a p-adic tree walk.
pub(crate) struct PadicWalk<'a> {
    pub p: u64,
    /// Coefficients reduced modulo the deepest modulus in use.
    coeffs: Vec<Vec<(u64, Vec<(usize, u32)>)>>,
    nvars: usize,
    pub visited: &'a AtomicU64,
    pub budget: u64,
    pub exceeded: &'a AtomicBool,
}

impl<'a> PadicWalk<'a> {
    pub fn new(
        v: &VarietyPresentation,
        p: u64,
        max_level: u32,
        budget: u64,
        visited: &'a AtomicU64,
        exceeded: &'a AtomicBool,
    ) -> Result<Self, CountError> {
        let top = prime_power(p, max_level).ok_or(CountError::PrecisionTooLarge { p, k: max_level })?;
        // keep products of residues below 2^128
        if top > u64::MAX / 2 {
            return Err(CountError::PrecisionTooLarge { p, k: max_level });
        }
        let coeffs = v
            .polys
            .iter()
            .map(|f| {
                f.terms()
                    .iter()
                    .map(|(c, e)| {
                        let vars = e
                            .iter()
                            .enumerate()
                            .filter(|(_, &k)| k > 0)
                            .map(|(i, &k)| (i, k))
                            .collect();
                        (reduce_coeff(c, top), vars)
                    })
                    .collect()
            })
            .collect();
        Ok(PadicWalk {
            p,
            coeffs,
            nvars: v.nvars(),
            visited,
            budget,
            exceeded,
        })
    }

    fn solves(&self, xs: &[u64], modulus: u64) -> bool {
        self.coeffs.iter().all(|terms| {
            let mut acc = 0u64;
            for (c, vars) in terms {
                let mut t = c % modulus;
                for &(i, k) in vars {
                    if t == 0 {
                        break;
                    }
                    t = zmod_mul(t, zmod_pow(xs[i], k as u64, modulus), modulus);
                }
                acc = ((acc as u128 + t as u128) % modulus as u128) as u64;
            }
            acc == 0
        })
    }

    /// Charges `n` visited tuples; false once the budget is exhausted.
    fn charge(&self, n: u64) -> bool {
        if self.exceeded.load(Ordering::Relaxed) {
            return false;
        }
        let before = self.visited.fetch_add(n, Ordering::Relaxed);
        if before.saturating_add(n) > self.budget {
            self.exceeded.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Level-1 solutions (residues mod p) whose first coordinate lies in the
    /// chunk's item range.
    pub fn roots(&self, chunk: ChunkSpec, sink: &mut dyn FnMut(&[u64])) {
        let p = self.p;
        let n = self.nvars;
        let (lo, hi) = chunk.range(if n == 0 { 1 } else { p });
        if lo >= hi {
            return;
        }
        let inner = p.pow(n.saturating_sub(1) as u32);
        let mut xs = vec![0u64; n];
        for first in lo..hi {
            if !self.charge(inner) {
                return;
            }
            if n > 0 {
                xs[0] = first;
                xs[1..].iter_mut().for_each(|x| *x = 0);
            }
            loop {
                if self.solves(&xs, p) {
                    sink(&xs);
                }
                let mut i = n;
                let mut carried = true;
                while i > 1 {
                    i -= 1;
                    xs[i] += 1;
                    if xs[i] < p {
                        carried = false;
                        break;
                    }
                    xs[i] = 0;
                }
                if carried {
                    break;
                }
            }
        }
    }

    /// Calls `visit` on every lift of the level-`level` solution `xs` to a
    /// solution modulo `p^(level+1)`; stops early when `visit` returns false.
    /// Returns false if stopped early or out of budget.
    fn for_each_child(&self, xs: &[u64], level: u32, visit: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        let p = self.p;
        let n = self.nvars;
        let step = prime_power(p, level).expect("checked at construction");
        let modulus = step * p;
        if !self.charge(p.pow(n as u32)) {
            return false;
        }
        let mut digits = vec![0u64; n];
        let mut ys = xs.to_vec();
        loop {
            if self.solves(&ys, modulus) && !visit(&ys) {
                return false;
            }
            let mut i = n;
            let mut carried = true;
            while i > 0 {
                i -= 1;
                digits[i] += 1;
                if digits[i] < p {
                    ys[i] = xs[i] + digits[i] * step;
                    carried = false;
                    break;
                }
                digits[i] = 0;
                ys[i] = xs[i];
            }
            if carried {
                return true;
            }
        }
    }

    /// Emits all descendants of `xs` (a solution at `level`) at `target`.
    pub fn descendants(&self, xs: &[u64], level: u32, target: u32, sink: &mut dyn FnMut(&[u64])) {
        if level == target {
            sink(xs);
            return;
        }
        self.for_each_child(xs, level, &mut |ys| {
            self.descendants(ys, level + 1, target, sink);
            !self.exceeded.load(Ordering::Relaxed)
        });
    }

    /// Whether `xs` (a solution at `level`) has a descendant at `target`.
    pub fn has_descendant(&self, xs: &[u64], level: u32, target: u32) -> bool {
        if level >= target {
            return true;
        }
        let mut found = false;
        self.for_each_child(xs, level, &mut |ys| {
            if self.has_descendant(ys, level + 1, target) {
                found = true;
            }
            !found && !self.exceeded.load(Ordering::Relaxed)
        });
        found
    }
}

/// Streams every solution in `ring` within `chunk`, in deterministic order.
/// For `Z/p^k` the chunk partitions the residue of the first coordinate
/// modulo `p`. Enumeration is unbudgeted.
pub fn enumerate_solutions(
    v: &VarietyPresentation,
    ring: &RingParams,
    chunk: ChunkSpec,
    sink: &mut dyn FnMut(&[u64]),
) -> Result<(), CountError> {
    match ring {
        RingParams::Field(field, method) => {
            enumerate_field(v, field, *method, chunk, sink);
            Ok(())
        }
        RingParams::Zmod { p, k } => {
            if v.ambient.is_projective() {
                return Err(CountError::ProjectivePadic);
            }
            let visited = AtomicU64::new(0);
            let exceeded = AtomicBool::new(false);
            let walk = PadicWalk::new(v, *p, (*k).max(1), u64::MAX, &visited, &exceeded)?;
            if *k == 0 {
                // Z/p^0 is the zero ring: one point
                if chunk.index == 0 {
                    sink(&vec![0; v.nvars()]);
                }
                return Ok(());
            }
            walk.roots(chunk, &mut |xs| walk.descendants(xs, 1, *k, sink));
            Ok(())
        }
    }
}

/// Collects [`enumerate_solutions`] into a vector.
pub fn collect_solutions(
    v: &VarietyPresentation,
    ring: &RingParams,
    chunk: ChunkSpec,
) -> Result<Vec<Vec<u64>>, CountError> {
    let mut out = Vec::new();
    enumerate_solutions(v, ring, chunk, &mut |xs| out.push(xs.to_vec()))?;
    Ok(out)
}
