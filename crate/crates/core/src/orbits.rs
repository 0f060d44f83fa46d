//! Exhaustive enumeration of increasing tableaux and decomposition of the
//! promotion action into orbits.
//!
//! Enumeration is an odometer over the row-major entry vector: each cell
//! ranges between one more than the max of its left/upper neighbors and the
//! ceiling minus the steps still needed to reach the bottom-right corner.
//! Bumping a cell and min-filling everything after it always lands back in
//! the valid set, so the walk visits each tableau exactly once in ascending
//! row-major lexicographic order.
//!
//! Decomposition walks promotion orbits from unvisited seeds. Workers claim
//! first-row prefixes; an orbit is owned by whichever worker first inserts
//! its lexicographically smallest member into the shared visited set, so
//! duplicate walks are dropped and the final sorted output is identical for
//! any worker count.

use crate::correspondence::macmahon_count;
use crate::error::{Error, Result};
use crate::grid::{entries_are_increasing, IncreasingTableau, Shape};
use crate::promotion::{promote_in_place, Scratch};
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};
use std::hash::Hash;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Mutex, RwLock};

pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

#[derive(Clone)]
pub struct EngineOptions {
    pub workers: usize,
    pub budget: u64,
    pub keep_members: bool,
}

impl Default for EngineOptions {
    fn default() -> EngineOptions {
        EngineOptions {
            workers: 1,
            budget: DEFAULT_STATE_BUDGET,
            keep_members: false,
        }
    }
}

/// One promotion orbit: canonical representative (the row-major
/// lexicographically smallest member) and exact period. Members, when kept,
/// run in promotion order starting from the representative; they never
/// appear in the JSON form.
#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub size: u64,
    pub rep: IncreasingTableau,
    #[serde(skip)]
    pub members: Option<Vec<IncreasingTableau>>,
}

#[derive(Debug, Serialize)]
pub struct OrbitDecomposition {
    pub shape: [usize; 2],
    pub q: u8,
    pub total: u64,
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    /// Ascending `size,count` histogram lines with a header.
    pub fn csv_histogram(&self) -> String {
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        for o in &self.orbits {
            *hist.entry(o.size).or_insert(0) += 1;
        }
        let mut out = String::from("size,count\n");
        for (size, count) in hist {
            out.push_str(&format!("{size},{count}\n"));
        }
        out
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o.size).collect()
    }
}

/// Streams Inc^q(a×b) in ascending row-major lexicographic order. Empty
/// when q < a+b-1.
pub fn enumerate_tableaux(a: usize, b: usize, q: u8) -> Result<Tableaux> {
    let shape = Shape::new(a, b)?;
    Ok(Tableaux::new(shape, q, None))
}

pub struct Tableaux {
    shape: Shape,
    q: u8,
    entries: Vec<u8>,
    hi: Vec<u8>,
    /// first position the odometer may bump; earlier entries are a fixed prefix
    floor: usize,
    fresh: bool,
    done: bool,
}

impl Tableaux {
    /// `prefix` fixes the leading entries (a whole number of cells, already
    /// within bounds); pass None for the full enumeration.
    fn new(shape: Shape, q: u8, prefix: Option<&[u8]>) -> Tableaux {
        let (a, b) = (shape.rows(), shape.cols());
        let n = a * b;
        let hi: Vec<u8> = (0..n)
            .map(|p| {
                let (i, j) = (p / b, p % b);
                let need = (a - 1 - i) + (b - 1 - j);
                q.saturating_sub(need as u8)
            })
            .collect();
        let mut t = Tableaux {
            shape,
            q,
            entries: vec![0; n],
            hi,
            floor: prefix.map_or(0, |p| p.len()),
            fresh: true,
            done: (q as usize) < a + b - 1,
        };
        if !t.done {
            if let Some(p) = prefix {
                t.entries[..p.len()].copy_from_slice(p);
            }
            t.min_fill(t.floor);
        }
        t
    }

    /// Fills positions from `start` on with the smallest legal values. Always
    /// succeeds: the minimum grows by at most one per step right or down
    /// while the cap grows by exactly one.
    fn min_fill(&mut self, start: usize) {
        let b = self.shape.cols();
        for p in start..self.entries.len() {
            let (i, j) = (p / b, p % b);
            let left = if j > 0 { self.entries[p - 1] } else { 0 };
            let up = if i > 0 { self.entries[p - b] } else { 0 };
            let v = left.max(up) + 1;
            debug_assert!(v <= self.hi[p]);
            self.entries[p] = v;
        }
    }

    fn step(&mut self) -> bool {
        let mut p = self.entries.len();
        while p > self.floor {
            p -= 1;
            if self.entries[p] < self.hi[p] {
                self.entries[p] += 1;
                self.min_fill(p + 1);
                return true;
            }
        }
        false
    }

    fn advance(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
        } else if !self.step() {
            self.done = true;
            return None;
        }
        Some(&self.entries)
    }
}

impl Iterator for Tableaux {
    type Item = IncreasingTableau;

    fn next(&mut self) -> Option<IncreasingTableau> {
        let shape = self.shape;
        let q = self.q;
        self.advance()
            .map(|e| IncreasingTableau::from_entries_unchecked(shape, q, e.to_vec()))
    }
}

fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Walks the promotion orbit of `t`, returning its exact period and the
/// canonical representative. The walk re-validates every step, so a
/// promotion defect surfaces as an error instead of a bogus orbit.
pub fn orbit_of(t: &IncreasingTableau) -> Result<Orbit> {
    let shape = t.shape();
    let q = t.ceiling();
    let mut scratch = Scratch::new();
    let mut cur = t.entries().to_vec();
    let mut min = cur.clone();
    let mut size = 1u64;
    loop {
        promote_in_place(shape, q, &mut cur, &mut scratch)?;
        if !entries_are_increasing(&cur, shape, q) {
            return Err(Error::InvariantViolation(format!(
                "promotion step left the valid set at {:?}",
                cur
            )));
        }
        if cur == t.entries() {
            break;
        }
        size += 1;
        if cur < min {
            min = cur.clone();
        }
    }
    let rep = IncreasingTableau::from_entries_unchecked(shape, q, min);
    check_gcd(shape, q, size, &rep)?;
    Ok(Orbit {
        size,
        rep,
        members: None,
    })
}

/// Orbit sizes always share a factor with the ceiling once the ceiling
/// exceeds the forced minimum. A violation would be a counterexample to the
/// theory this engine exists to check, so it is an error, never silent.
fn check_gcd(shape: Shape, q: u8, size: u64, rep: &IncreasingTableau) -> Result<()> {
    if (q as usize) > shape.rows() + shape.cols() - 1 && gcd(size, q as u64) == 1 {
        return Err(Error::GcdAssertion {
            q,
            size,
            rep: rep.rows(),
        });
    }
    Ok(())
}

trait StateKey: Eq + Hash + Ord + Clone + Send + Sync {
    fn pack(entries: &[u8]) -> Self;
}

/// Up to 16 cells packed big-endian, so numeric order is row-major
/// lexicographic order on entries.
#[derive(PartialEq, Eq, PartialOrd, Ord, Hash, Clone, Copy)]
struct WideKey(u128);

impl StateKey for WideKey {
    fn pack(entries: &[u8]) -> WideKey {
        WideKey(entries.iter().fold(0u128, |k, &e| k << 8 | e as u128))
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Hash, Clone)]
struct VecKey(Box<[u8]>);

impl StateKey for VecKey {
    fn pack(entries: &[u8]) -> VecKey {
        VecKey(entries.into())
    }
}

/// Complete orbit decomposition of Inc^q(a×b), sorted by (size,
/// representative). The state count is checked against the box-counting
/// product before anything runs; exceeding `budget` is an error with no
/// partial output.
pub fn decompose(a: usize, b: usize, q: u8, opts: &EngineOptions) -> Result<OrbitDecomposition> {
    let shape = Shape::new(a, b)?;
    let expected: u128 = if (q as usize) < a + b - 1 {
        0
    } else {
        macmahon_count(a as u64, b as u64, q as u64 - (a + b - 1) as u64)?
    };
    if expected > opts.budget as u128 {
        return Err(Error::BudgetExceeded {
            states: expected,
            budget: opts.budget as u128,
        });
    }
    let mut dec = if a * b <= 16 {
        run_decompose::<WideKey>(shape, q, expected as u64, opts)
    } else {
        run_decompose::<VecKey>(shape, q, expected as u64, opts)
    }?;
    dec.orbits
        .sort_by(|x, y| (x.size, x.rep.entries()).cmp(&(y.size, y.rep.entries())));
    Ok(dec)
}

struct WalkOutcome<K> {
    keys: Vec<K>,
    rep_entries: Vec<u8>,
    rep_at: usize,
    members: Option<Vec<Vec<u8>>>,
}

fn walk_orbit<K: StateKey>(
    shape: Shape,
    q: u8,
    seed: &[u8],
    keep: bool,
    scratch: &mut Scratch,
) -> Result<WalkOutcome<K>> {
    let mut cur = seed.to_vec();
    let mut keys = vec![K::pack(&cur)];
    let mut members = keep.then(|| vec![cur.clone()]);
    let mut rep_entries = cur.clone();
    let mut rep_at = 0usize;
    loop {
        promote_in_place(shape, q, &mut cur, scratch)?;
        debug_assert!(entries_are_increasing(&cur, shape, q));
        if cur == seed {
            break;
        }
        keys.push(K::pack(&cur));
        if cur < rep_entries {
            rep_entries = cur.clone();
            rep_at = keys.len() - 1;
        }
        if let Some(m) = members.as_mut() {
            m.push(cur.clone());
        }
    }
    if let Some(m) = members.as_mut() {
        m.rotate_left(rep_at);
    }
    Ok(WalkOutcome {
        keys,
        rep_entries,
        rep_at,
        members,
    })
}

fn run_decompose<K: StateKey>(
    shape: Shape,
    q: u8,
    expected: u64,
    opts: &EngineOptions,
) -> Result<OrbitDecomposition> {
    let (a, b) = (shape.rows(), shape.cols());

    // seeds are grouped by first row; each group is one unit of work
    let first_rows: Vec<Vec<u8>> = if (q as usize) < a + b - 1 {
        Vec::new()
    } else {
        let row_shape = Shape::new(1, b)?;
        Tableaux::new(row_shape, q.saturating_sub((a - 1) as u8), None)
            .map(|t| t.entries().to_vec())
            .collect()
    };

    let visited: RwLock<HashSet<K>> = RwLock::new(HashSet::with_capacity(expected as usize));
    let sink: Mutex<Vec<Orbit>> = Mutex::new(Vec::new());
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let failed = AtomicBool::new(false);
    let cursor = AtomicUsize::new(0);

    let worker = || {
        let mut scratch = Scratch::new();
        loop {
            if failed.load(Ordering::Relaxed) {
                return;
            }
            let i = cursor.fetch_add(1, Ordering::Relaxed);
            if i >= first_rows.len() {
                return;
            }
            let mut seeds = Tableaux::new(shape, q, Some(&first_rows[i]));
            while let Some(seed) = seeds.advance() {
                if failed.load(Ordering::Relaxed) {
                    return;
                }
                {
                    let seen = visited.read().unwrap();
                    if seen.contains(&K::pack(seed)) {
                        continue;
                    }
                }
                let seed = seed.to_vec();
                match walk_and_claim::<K>(
                    shape,
                    q,
                    &seed,
                    opts.keep_members,
                    &mut scratch,
                    &visited,
                    &sink,
                ) {
                    Ok(()) => {}
                    Err(e) => {
                        *failure.lock().unwrap() = Some(e);
                        failed.store(true, Ordering::Relaxed);
                        return;
                    }
                }
            }
        }
    };

    if opts.workers <= 1 {
        worker();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..opts.workers {
                scope.spawn(worker);
            }
        });
    }

    if let Some(e) = failure.lock().unwrap().take() {
        return Err(e);
    }

    let orbits = sink.into_inner().unwrap();
    let total: u64 = orbits.iter().map(|o| o.size).sum();
    if total != expected {
        return Err(Error::InvariantViolation(format!(
            "orbit sizes sum to {total}, enumeration expects {expected}"
        )));
    }
    Ok(OrbitDecomposition {
        shape: [a, b],
        q,
        total,
        orbits,
    })
}

fn walk_and_claim<K: StateKey>(
    shape: Shape,
    q: u8,
    seed: &[u8],
    keep: bool,
    scratch: &mut Scratch,
    visited: &RwLock<HashSet<K>>,
    sink: &Mutex<Vec<Orbit>>,
) -> Result<()> {
    let out = walk_orbit::<K>(shape, q, seed, keep, scratch)?;
    let size = out.keys.len() as u64;
    let rep = IncreasingTableau::from_entries_unchecked(shape, q, out.rep_entries);
    check_gcd(shape, q, size, &rep)?;

    let rep_key = out.keys[out.rep_at].clone();
    {
        let mut seen = visited.write().unwrap();
        if seen.contains(&rep_key) {
            return Ok(()); // another worker already owns this orbit
        }
        for k in out.keys {
            seen.insert(k);
        }
    }
    let members = out.members.map(|ms| {
        ms.into_iter()
            .map(|e| IncreasingTableau::from_entries_unchecked(shape, q, e))
            .collect()
    });
    sink.lock().unwrap().push(Orbit { size, rep, members });
    Ok(())
}
