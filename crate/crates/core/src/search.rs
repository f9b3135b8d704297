//! Exhaustive search for perfect Hilbertian bases, and the α scan.
//!
//! The search only considers ordered tuples whose element orders are exactly
//! the q-integer factors of the Hilbert series; a tuple is pruned as soon as
//! its partial products repeat.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::Serialize;

use crate::basis::{select_alpha, validate_basis, Basis, BasisRecord};
use crate::error::{Error, Result};
use crate::group::{enumerate_group, ElementSet, GroupSpec, DEFAULT_CEILING};
use crate::par::Execution;
use crate::stats::{hilbert_polynomial, q_integer_factorization};

/// Stated in every outcome so the certificate's reach is explicit.
pub const SEARCH_SCOPE: &str = "ordered tuples whose element orders equal the q-integer factors \
of the Hilbert series, over every distinct ordering of those factors; no symmetry reduction";

/// Above this many `(element, candidate)` pairs, right multiplication is not tabulated.
const TABLE_LIMIT: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RequiredOrders {
    /// Ascending.
    pub multiset: Vec<u64>,
    /// Distinct orderings in lexicographic order.
    pub orderings: Vec<Vec<u64>>,
}

/// The orders a perfect Hilbertian basis of `spec` must have, up to reordering.
pub fn required_orders(spec: &GroupSpec) -> Result<RequiredOrders> {
    let hilb = hilbert_polynomial(spec);
    let multiset = q_integer_factorization(&hilb)
        .ok_or_else(|| Error::Inconsistent(format!("Hilbert series of {spec} is not a product of q-integers")))?;
    let k = multiset.len();
    let orderings = multiset.iter().copied().permutations(k).sorted().dedup().collect();
    Ok(RequiredOrders { multiset, orderings })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub time_limit: Option<Duration>,
    pub max_candidates: Option<u64>,
    /// Largest group that will be enumerated.
    pub ceiling: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { time_limit: None, max_candidates: None, ceiling: DEFAULT_CEILING }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub schema: u32,
    pub spec: GroupSpec,
    pub group_order: u64,
    pub orders: Vec<u64>,
    pub orderings: Vec<Vec<u64>>,
    pub orderings_tried: usize,
    pub candidates_examined: u64,
    /// The whole search space was traversed without finding a basis.
    pub exhausted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped_by: Option<String>,
    pub found: Option<BasisRecord>,
    pub scope: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub basis: Option<Basis>,
}

impl SearchOutcome {
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

/// Right multiplication `s ↦ s·a` on element indices.
struct RightMul<'a> {
    group: &'a ElementSet,
    columns: Vec<Option<Vec<u32>>>,
}

impl<'a> RightMul<'a> {
    fn new(group: &'a ElementSet, candidates: &[usize], exec: Execution) -> Self {
        let mut columns = vec![None; group.len()];
        if group.len().saturating_mul(candidates.len()) <= TABLE_LIMIT {
            let built = exec.map_range(candidates.len(), |c| {
                let a = group.get(candidates[c]);
                group
                    .iter()
                    .map(|s| group.index_of(&s.mul(a)).expect("group closed under products") as u32)
                    .collect::<Vec<u32>>()
            });
            for (&c, col) in candidates.iter().zip(built) {
                columns[c] = Some(col);
            }
        }
        RightMul { group, columns }
    }

    fn apply(&self, s: u32, a: usize) -> u32 {
        match &self.columns[a] {
            Some(col) => col[s as usize],
            None => {
                let g = self.group.get(s as usize).mul(self.group.get(a));
                self.group.index_of(&g).expect("group closed under products") as u32
            }
        }
    }
}

struct Control {
    deadline: Option<Instant>,
    max_candidates: Option<u64>,
    global: AtomicU64,
    stop: AtomicBool,
    stop_reason: std::sync::Mutex<Option<String>>,
    /// Index of the earliest first-level candidate known to succeed.
    best: AtomicUsize,
}

impl Control {
    fn halt(&self, reason: &str) {
        self.stop.store(true, Ordering::Relaxed);
        let mut r = self.stop_reason.lock().unwrap();
        if r.is_none() {
            *r = Some(reason.to_string());
        }
    }

    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let total = self.global.fetch_add(1, Ordering::Relaxed) + 1;
        if self.max_candidates.is_some_and(|m| total > m) {
            self.halt("candidate cap");
            return false;
        }
        if total.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.halt("time limit");
            return false;
        }
        true
    }
}

struct Subtree<'a> {
    mul: &'a RightMul<'a>,
    candidates: &'a [Vec<usize>],
    orders: &'a [u64],
    ctl: &'a Control,
    root: usize,
    examined: u64,
    seen: Vec<u64>,
    chosen: Vec<usize>,
}

enum Step {
    Found,
    Exhausted,
    Aborted,
}

impl Subtree<'_> {
    fn test(&self, x: u32) -> bool {
        self.seen[x as usize / 64] >> (x % 64) & 1 == 1
    }

    fn flip(&mut self, x: u32) {
        self.seen[x as usize / 64] ^= 1 << (x % 64);
    }

    /// Partial products after adding `a` with order `m`, or `None` on a repeat.
    fn extend(&mut self, level: &[u32], a: usize, m: u64) -> Option<Vec<u32>> {
        let mut out = level.to_vec();
        let mut cur = level.to_vec();
        for _ in 1..m {
            for x in cur.iter_mut() {
                *x = self.mul.apply(*x, a);
            }
            for &x in &cur {
                if self.test(x) {
                    for &y in &out[level.len()..] {
                        self.flip(y);
                    }
                    return None;
                }
                self.flip(x);
                out.push(x);
            }
        }
        Some(out)
    }

    fn place(&mut self, depth: usize, level: &[u32], a: usize) -> Step {
        if !self.ctl.tick() || self.ctl.best.load(Ordering::Relaxed) < self.root {
            return Step::Aborted;
        }
        self.examined += 1;
        let Some(next) = self.extend(level, a, self.orders[depth]) else {
            return Step::Exhausted;
        };
        self.chosen.push(a);
        let step = if depth + 1 == self.orders.len() {
            Step::Found
        } else {
            let mut step = Step::Exhausted;
            for &b in &self.candidates[depth + 1] {
                match self.place(depth + 1, &next, b) {
                    Step::Exhausted => {}
                    other => {
                        step = other;
                        break;
                    }
                }
            }
            step
        };
        if !matches!(step, Step::Found) {
            self.chosen.pop();
            for &y in &next[level.len()..] {
                self.flip(y);
            }
        }
        step
    }
}

struct OrderingResult {
    examined: u64,
    found: Option<Vec<usize>>,
    complete: bool,
}

fn search_ordering(
    group: &ElementSet,
    orders: &[u64],
    element_orders: &[u64],
    ctl: &Control,
    exec: Execution,
) -> OrderingResult {
    let candidates: Vec<Vec<usize>> =
        orders.iter().map(|&m| (0..group.len()).filter(|&i| element_orders[i] == m).collect()).collect();
    if candidates.iter().any(Vec::is_empty) {
        return OrderingResult { examined: 0, found: None, complete: true };
    }
    let mut tabulated: Vec<usize> = candidates.iter().flatten().copied().collect();
    tabulated.sort_unstable();
    tabulated.dedup();
    let mul = RightMul::new(group, &tabulated, exec);
    let identity = group.iter().position(|g| g.is_identity()).expect("group contains the identity") as u32;
    ctl.best.store(usize::MAX, Ordering::Relaxed);

    let roots = &candidates[0];
    let results = exec.map_range(roots.len(), |i| {
        let mut sub = Subtree {
            mul: &mul,
            candidates: &candidates,
            orders,
            ctl,
            root: i,
            examined: 0,
            seen: vec![0; group.len().div_ceil(64)],
            chosen: Vec::new(),
        };
        sub.flip(identity);
        let step = sub.place(0, &[identity], roots[i]);
        if matches!(step, Step::Found) {
            ctl.best.fetch_min(i, Ordering::Relaxed);
        }
        (step, sub.examined, sub.chosen)
    });

    // Everything before the first success is fully counted; later subtrees are ignored.
    let mut examined = 0;
    for (step, count, chosen) in results {
        examined += count;
        match step {
            Step::Found => return OrderingResult { examined, found: Some(chosen), complete: true },
            Step::Aborted => return OrderingResult { examined, found: None, complete: false },
            Step::Exhausted => {}
        }
    }
    OrderingResult { examined, found: None, complete: true }
}

/// Looks for a perfect Hilbertian basis of `spec`, trying each ordering of the
/// required orders in turn. The count of examined candidates does not depend
/// on `exec` unless a limit interrupts the search.
pub fn search_perfect_hilbertian(spec: &GroupSpec, limits: SearchLimits, exec: Execution) -> Result<SearchOutcome> {
    let started = Instant::now();
    spec.check_ceiling(limits.ceiling)?;
    let required = required_orders(spec)?;
    let group = enumerate_group(spec, limits.ceiling)?;
    let element_orders: Vec<u64> = exec.map_range(group.len(), |i| group.get(i).order());
    let ctl = Control {
        deadline: limits.time_limit.map(|t| started + t),
        max_candidates: limits.max_candidates,
        global: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        stop_reason: std::sync::Mutex::new(None),
        best: AtomicUsize::new(usize::MAX),
    };

    let mut examined = 0;
    let mut tried = 0;
    let mut found = None;
    let mut complete = true;
    for orders in &required.orderings {
        tried += 1;
        let res = search_ordering(&group, orders, &element_orders, &ctl, exec);
        examined += res.examined;
        if let Some(tuple) = res.found {
            let elements = tuple.iter().map(|&i| group.get(i).clone()).collect();
            let basis = Basis::new(spec.n, spec.r, elements, orders.clone(), format!("search-basis({spec})"))?;
            validate_basis(&basis, &group, exec)?;
            found = Some(basis);
            break;
        }
        if !res.complete {
            complete = false;
            break;
        }
    }
    let stopped_by = if complete { None } else { ctl.stop_reason.lock().unwrap().clone() };
    Ok(SearchOutcome {
        schema: 1,
        spec: *spec,
        group_order: group.len() as u64,
        orders: required.multiset,
        orderings: required.orderings,
        orderings_tried: tried,
        candidates_examined: examined,
        exhausted: complete && found.is_none(),
        stopped_by,
        found: found.as_ref().map(Basis::record),
        scope: SEARCH_SCOPE,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
        basis: found,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaCell {
    pub r: u32,
    pub p: u32,
    pub n: usize,
    pub gcd: u64,
    pub alpha: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaScan {
    pub r_max: u32,
    pub n_max: usize,
    pub cells: Vec<AlphaCell>,
    /// Cells with `gcd(n, p, r/p) = 1` and no admissible α.
    pub failures: Vec<AlphaCell>,
}

/// `select_alpha` over every `p | r`, `r <= r_max`, `n <= n_max`.
pub fn alpha_scan(r_max: u32, n_max: usize) -> Result<AlphaScan> {
    if r_max == 0 || n_max == 0 {
        return Err(Error::InvalidSpec("alpha scan bounds must be at least 1".into()));
    }
    let mut cells = Vec::new();
    for r in 1..=r_max {
        for p in (1..=r).filter(|p| r % p == 0) {
            for n in 1..=n_max {
                let spec = GroupSpec::new(r, p, n)?;
                cells.push(AlphaCell { r, p, n, gcd: spec.gcd_flag(), alpha: select_alpha(&spec) });
            }
        }
    }
    let failures = cells.iter().filter(|c| c.gcd == 1 && c.alpha.is_none()).copied().collect();
    Ok(AlphaScan { r_max, n_max, cells, failures })
}
