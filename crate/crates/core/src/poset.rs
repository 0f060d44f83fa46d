//! Finite posets, order ideals, rowmotion, and the a×b×c box poset with its
//! plane-partition encoding.
//!
//! Elements are indices 0..n-1. A poset is built from its cover relations
//! and precomputes per-element down-sets and up-sets as packed bit vectors,
//! so rowmotion is a handful of word operations.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashSet;
use std::fmt;

/// Packed boolean vector. Trailing bits above `len` stay zero, so equality
/// and hashing can use the raw words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub(crate) fn new(len: usize) -> Bits {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn or_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub(crate) fn complement(&self) -> Bits {
        let mut out = Bits {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.trim();
        out
    }

    fn trim(&mut self) {
        if !self.len.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (self.len % 64)) - 1;
            }
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

/// A down-closed subset of a poset's elements.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrderIdeal {
    bits: Bits,
}

impl OrderIdeal {
    pub fn contains(&self, element: usize) -> bool {
        self.bits.get(element)
    }

    pub fn count(&self) -> usize {
        self.bits.count()
    }

    pub fn members(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }
}

/// Explicit finite poset given by cover relations on elements 0..n-1.
/// Construction validates acyclicity and that the cover list is a transitive
/// reduction (no declared cover is implied by a chain of two).
pub struct FinitePoset {
    n: usize,
    covers: Vec<(u32, u32)>,
    lower: Vec<Vec<u32>>,
    upper: Vec<Vec<u32>>,
    down: Vec<Bits>, // down[x] includes x
    up: Vec<Bits>,   // up[x] includes x
    topo: Vec<u32>,  // a linear extension
    box_dims: Option<(usize, usize, usize)>,
}

impl FinitePoset {
    pub fn new(n: usize, covers: Vec<(u32, u32)>) -> Result<FinitePoset> {
        let mut seen = HashSet::new();
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(l, u) in &covers {
            if l as usize >= n || u as usize >= n {
                return Err(Error::InvalidPoset(format!(
                    "cover ({l},{u}) references an element outside 0..{n}"
                )));
            }
            if l == u {
                return Err(Error::InvalidPoset(format!("self-cover at {l}")));
            }
            if !seen.insert((l, u)) {
                return Err(Error::InvalidPoset(format!("duplicate cover ({l},{u})")));
            }
            lower[u as usize].push(l);
            upper[l as usize].push(u);
        }

        // Kahn's algorithm; leftover elements mean a cycle
        let mut indeg: Vec<usize> = lower.iter().map(|v| v.len()).collect();
        let mut topo = Vec::with_capacity(n);
        let mut queue: Vec<u32> = (0..n as u32).filter(|&x| indeg[x as usize] == 0).collect();
        while let Some(x) = queue.pop() {
            topo.push(x);
            for &y in &upper[x as usize] {
                indeg[y as usize] -= 1;
                if indeg[y as usize] == 0 {
                    queue.push(y);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::InvalidPoset("cover relation has a cycle".into()));
        }

        let mut down = vec![Bits::new(n); n];
        for &x in &topo {
            let mut d = Bits::new(n);
            d.set(x as usize);
            for &l in &lower[x as usize] {
                d.or_assign(&down[l as usize]);
            }
            down[x as usize] = d;
        }
        let mut up = vec![Bits::new(n); n];
        for &x in topo.iter().rev() {
            let mut u = Bits::new(n);
            u.set(x as usize);
            for &h in &upper[x as usize] {
                u.or_assign(&up[h as usize]);
            }
            up[x as usize] = u;
        }

        // a cover (l,u) must not be implied via some intermediate z
        for &(l, u) in &covers {
            for &z in &lower[u as usize] {
                if z != l && down[z as usize].get(l as usize) {
                    return Err(Error::InvalidPoset(format!(
                        "cover ({l},{u}) is implied through {z}; not a transitive reduction"
                    )));
                }
            }
        }

        Ok(FinitePoset {
            n,
            covers,
            lower,
            upper,
            down,
            up,
            topo,
            box_dims: None,
        })
    }

    /// Parses one `lower upper` pair per line; blank lines are skipped.
    /// The element count is one past the largest index mentioned.
    pub fn from_cover_list(text: &str) -> Result<FinitePoset> {
        let mut covers = Vec::new();
        let mut max = 0u32;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<u32> {
                tok.and_then(|t| t.parse().ok()).ok_or_else(|| {
                    Error::InvalidPoset(format!(
                        "line {}: expected two non-negative integers, got {line:?}",
                        lineno + 1
                    ))
                })
            };
            let l = parse(parts.next())?;
            let u = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::InvalidPoset(format!(
                    "line {}: trailing tokens in {line:?}",
                    lineno + 1
                )));
            }
            max = max.max(l).max(u);
            covers.push((l, u));
        }
        let n = if covers.is_empty() {
            0
        } else {
            max as usize + 1
        };
        FinitePoset::new(n, covers)
    }

    pub fn elements(&self) -> usize {
        self.n
    }

    pub fn covers(&self) -> &[(u32, u32)] {
        &self.covers
    }

    pub fn box_dims(&self) -> Option<(usize, usize, usize)> {
        self.box_dims
    }

    pub fn empty_ideal(&self) -> OrderIdeal {
        OrderIdeal {
            bits: Bits::new(self.n),
        }
    }

    pub fn full_ideal(&self) -> OrderIdeal {
        let mut bits = Bits::new(self.n);
        for i in 0..self.n {
            bits.set(i);
        }
        OrderIdeal { bits }
    }

    /// Down-closure of an arbitrary element set (the ideal it generates).
    pub fn down_closure(&self, elements: &[usize]) -> Result<OrderIdeal> {
        let mut bits = Bits::new(self.n);
        for &x in elements {
            if x >= self.n {
                return Err(Error::InvalidPoset(format!(
                    "element {x} outside 0..{}",
                    self.n
                )));
            }
            bits.or_assign(&self.down[x]);
        }
        Ok(OrderIdeal { bits })
    }

    pub fn ideal_from_members(&self, members: &[usize]) -> Result<OrderIdeal> {
        let mut bits = Bits::new(self.n);
        for &x in members {
            if x >= self.n {
                return Err(Error::InvalidPoset(format!(
                    "element {x} outside 0..{}",
                    self.n
                )));
            }
            bits.set(x);
        }
        let ideal = OrderIdeal { bits };
        self.check_ideal(&ideal)?;
        Ok(ideal)
    }

    fn check_ideal(&self, ideal: &OrderIdeal) -> Result<()> {
        for x in ideal.bits.ones() {
            for &l in &self.lower[x] {
                if !ideal.bits.get(l as usize) {
                    return Err(Error::NotAnIdeal {
                        element: x,
                        missing: l as usize,
                    });
                }
            }
        }
        Ok(())
    }

    /// One rowmotion step: the ideal generated by the minimal elements of
    /// the complement.
    pub fn rowmotion(&self, ideal: &OrderIdeal) -> Result<OrderIdeal> {
        self.check_ideal(ideal)?;
        let mut bits = Bits::new(self.n);
        for x in 0..self.n {
            if ideal.bits.get(x) {
                continue;
            }
            if self.lower[x].iter().all(|&l| ideal.bits.get(l as usize)) {
                bits.or_assign(&self.down[x]);
            }
        }
        Ok(OrderIdeal { bits })
    }

    /// The unique preimage under rowmotion: complement of the up-closure of
    /// the ideal's maximal elements.
    pub fn inverse_rowmotion(&self, ideal: &OrderIdeal) -> Result<OrderIdeal> {
        self.check_ideal(ideal)?;
        let mut filt = Bits::new(self.n);
        for x in ideal.bits.ones() {
            if self.upper[x].iter().all(|&u| !ideal.bits.get(u as usize)) {
                filt.or_assign(&self.up[x]);
            }
        }
        Ok(OrderIdeal {
            bits: filt.complement(),
        })
    }

    /// Streams every order ideal exactly once. Box posets walk their
    /// plane partitions in ascending height order; other posets run a
    /// backtracking counter over a linear extension.
    pub fn enumerate_ideals(&self) -> IdealIter<'_> {
        if let Some((a, b, c)) = self.box_dims {
            IdealIter::Box {
                poset: self,
                inner: enumerate_plane_partitions(a, b, c),
            }
        } else {
            IdealIter::Generic {
                poset: self,
                member: vec![false; self.n],
                fresh: true,
            }
        }
    }
}

pub enum IdealIter<'p> {
    Box {
        poset: &'p FinitePoset,
        inner: PlanePartitions,
    },
    Generic {
        poset: &'p FinitePoset,
        member: Vec<bool>, // indexed by element id
        fresh: bool,
    },
}

impl<'p> Iterator for IdealIter<'p> {
    type Item = OrderIdeal;

    fn next(&mut self) -> Option<OrderIdeal> {
        match self {
            IdealIter::Box { poset, inner } => {
                let pp = inner.next()?;
                Some(plane_partition_to_ideal(poset, &pp).expect("enumerated heights are valid"))
            }
            IdealIter::Generic {
                poset,
                member,
                fresh,
            } => {
                if *fresh {
                    *fresh = false;
                } else {
                    // counter step: raise the last liftable element, clearing
                    // everything after it in the linear extension
                    let mut pos = poset.topo.len();
                    loop {
                        if pos == 0 {
                            return None;
                        }
                        pos -= 1;
                        let x = poset.topo[pos] as usize;
                        if !member[x] && poset.lower[x].iter().all(|&l| member[l as usize]) {
                            member[x] = true;
                            for &y in &poset.topo[pos + 1..] {
                                member[y as usize] = false;
                            }
                            break;
                        }
                    }
                }
                let mut bits = Bits::new(poset.n);
                for (x, &m) in member.iter().enumerate() {
                    if m {
                        bits.set(x);
                    }
                }
                Some(OrderIdeal { bits })
            }
        }
    }
}

/// The product of three chains [1,a]×[1,b]×[1,c] under componentwise order.
/// Element (i,j,k), all 1-based, gets index ((i-1)·b + (j-1))·c + (k-1);
/// covers are unit steps in one coordinate.
pub fn box_poset(a: usize, b: usize, c: usize) -> Result<FinitePoset> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::InvalidPoset(format!(
            "box {a}x{b}x{c}: all dimensions must be positive"
        )));
    }
    let n = a * b * c;
    if n > u32::MAX as usize {
        return Err(Error::InvalidPoset(format!("box {a}x{b}x{c} too large")));
    }
    let mut covers = Vec::with_capacity((a - 1) * b * c + a * (b - 1) * c + a * b * (c - 1));
    for i in 0..a {
        for j in 0..b {
            for k in 0..c {
                let id = ((i * b + j) * c + k) as u32;
                if i + 1 < a {
                    covers.push((id, id + (b * c) as u32));
                }
                if j + 1 < b {
                    covers.push((id, id + c as u32));
                }
                if k + 1 < c {
                    covers.push((id, id + 1));
                }
            }
        }
    }
    let mut poset = FinitePoset::new(n, covers)?;
    poset.box_dims = Some((a, b, c));
    Ok(poset)
}

pub fn box_element_index(dims: (usize, usize, usize), i: usize, j: usize, k: usize) -> usize {
    let (_, b, c) = dims;
    ((i - 1) * b + (j - 1)) * c + (k - 1)
}

/// An a×b grid of heights in 0..=c, weakly decreasing along rows and
/// columns. Encodes an order ideal of the a×b×c box; c = 0 is allowed and
/// leaves exactly one (all-zero) grid.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlanePartition {
    a: usize,
    b: usize,
    c: usize,
    heights: Vec<u8>, // row-major
}

impl PlanePartition {
    pub fn new(dims: (usize, usize, usize), heights: &[Vec<i64>]) -> Result<PlanePartition> {
        let (a, b, c) = dims;
        if a == 0 || b == 0 {
            return Err(Error::InvalidPlanePartition(format!(
                "box {a}x{b}x{c}: grid dimensions must be positive"
            )));
        }
        if c > 255 {
            return Err(Error::InvalidPlanePartition(format!(
                "box {a}x{b}x{c}: height bound exceeds byte range"
            )));
        }
        if heights.len() != a || heights.iter().any(|r| r.len() != b) {
            return Err(Error::InvalidPlanePartition(format!(
                "heights grid is not {a}x{b}"
            )));
        }
        for i in 0..a {
            for j in 0..b {
                let h = heights[i][j];
                if h < 0 || h > c as i64 {
                    return Err(Error::InvalidPlanePartition(format!(
                        "height {h} at ({},{}) outside 0..={c}",
                        i + 1,
                        j + 1
                    )));
                }
                if j > 0 && heights[i][j - 1] < h {
                    return Err(Error::InvalidPlanePartition(format!(
                        "heights increase along row at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                if i > 0 && heights[i - 1][j] < h {
                    return Err(Error::InvalidPlanePartition(format!(
                        "heights increase down column at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(PlanePartition {
            a,
            b,
            c,
            heights: heights
                .iter()
                .flat_map(|r| r.iter().map(|&h| h as u8))
                .collect(),
        })
    }

    fn from_heights_unchecked(dims: (usize, usize, usize), heights: Vec<u8>) -> PlanePartition {
        let (a, b, c) = dims;
        debug_assert_eq!(heights.len(), a * b);
        debug_assert!(heights.iter().all(|&h| h as usize <= c));
        PlanePartition { a, b, c, heights }
    }

    pub fn zero(dims: (usize, usize, usize)) -> Result<PlanePartition> {
        let (a, b, c) = dims;
        if a == 0 || b == 0 || c > 255 {
            return Err(Error::InvalidPlanePartition(format!("bad box {a}x{b}x{c}")));
        }
        Ok(PlanePartition {
            a,
            b,
            c,
            heights: vec![0; a * b],
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a, self.b, self.c)
    }

    /// Height at 1-based grid position.
    pub fn height(&self, i: usize, j: usize) -> u8 {
        self.heights[(i - 1) * self.b + (j - 1)]
    }

    pub fn heights(&self) -> &[u8] {
        &self.heights
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.heights.chunks(self.b).map(|r| r.to_vec()).collect()
    }
}

impl fmt::Display for PlanePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for chunk in self.heights.chunks(self.b) {
            for (j, h) in chunk.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{h:3}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PpWire {
    #[serde(rename = "box")]
    dims: [usize; 3],
    heights: Vec<Vec<i64>>,
}

impl Serialize for PlanePartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PpWire {
            dims: [self.a, self.b, self.c],
            heights: self
                .heights
                .chunks(self.b)
                .map(|r| r.iter().map(|&h| h as i64).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlanePartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<PlanePartition, D::Error> {
        let wire = PpWire::deserialize(d)?;
        PlanePartition::new((wire.dims[0], wire.dims[1], wire.dims[2]), &wire.heights)
            .map_err(D::Error::custom)
    }
}

/// Streams every plane partition in the box, ascending in row-major
/// lexicographic order on the heights grid, starting from all zeros.
pub fn enumerate_plane_partitions(a: usize, b: usize, c: usize) -> PlanePartitions {
    PlanePartitions {
        a,
        b,
        c,
        heights: vec![0; a * b],
        state: if a == 0 || b == 0 || c > 255 {
            IterState::Done
        } else {
            IterState::Fresh
        },
    }
}

#[derive(PartialEq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

pub struct PlanePartitions {
    a: usize,
    b: usize,
    c: usize,
    heights: Vec<u8>,
    state: IterState,
}

impl Iterator for PlanePartitions {
    type Item = PlanePartition;

    fn next(&mut self) -> Option<PlanePartition> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Running;
            }
            IterState::Running => {
                // odometer: bump the last cell that can still grow, zero the rest
                let (b, c) = (self.b, self.c);
                let mut p = self.heights.len();
                loop {
                    if p == 0 {
                        self.state = IterState::Done;
                        return None;
                    }
                    p -= 1;
                    let (i, j) = (p / b, p % b);
                    let mut cap = c as u8;
                    if j > 0 {
                        cap = cap.min(self.heights[p - 1]);
                    }
                    if i > 0 {
                        cap = cap.min(self.heights[p - b]);
                    }
                    if self.heights[p] < cap {
                        self.heights[p] += 1;
                        for h in &mut self.heights[p + 1..] {
                            *h = 0;
                        }
                        break;
                    }
                }
            }
        }
        Some(PlanePartition::from_heights_unchecked(
            (self.a, self.b, self.c),
            self.heights.clone(),
        ))
    }
}

/// Reads the ideal's k-fiber sizes into a heights grid. The poset must be a
/// box poset.
pub fn ideal_to_plane_partition(p: &FinitePoset, ideal: &OrderIdeal) -> Result<PlanePartition> {
    let (a, b, c) = p
        .box_dims
        .ok_or_else(|| Error::InvalidPoset("not a box poset".into()))?;
    p.check_ideal(ideal)?;
    let mut heights = vec![0u8; a * b];
    for (cell, h) in heights.iter_mut().enumerate() {
        // down-closure makes each fiber a prefix in k
        *h = (0..c).take_while(|&k| ideal.bits.get(cell * c + k)).count() as u8;
    }
    Ok(PlanePartition::from_heights_unchecked((a, b, c), heights))
}

pub fn plane_partition_to_ideal(p: &FinitePoset, pp: &PlanePartition) -> Result<OrderIdeal> {
    let dims = p
        .box_dims
        .ok_or_else(|| Error::InvalidPoset("not a box poset".into()))?;
    if pp.dims() != dims {
        return Err(Error::InvalidPlanePartition(format!(
            "partition box {:?} does not match poset box {:?}",
            pp.dims(),
            dims
        )));
    }
    let c = dims.2;
    let mut bits = Bits::new(p.n);
    for (cell, &h) in pp.heights.iter().enumerate() {
        for k in 0..h as usize {
            bits.set(cell * c + k);
        }
    }
    Ok(OrderIdeal { bits })
}

/// One rowmotion orbit on the ideal side, in plane-partition form. Members
/// run in rowmotion order starting from the representative, which is the
/// lexicographically smallest heights grid in the orbit.
pub struct IdealOrbit {
    pub rep: PlanePartition,
    pub size: u64,
    pub members: Vec<PlanePartition>,
}

/// Full rowmotion orbit decomposition over all ideals of the a×b×c box,
/// sorted by (size, representative). c = 0 degenerates to the single empty
/// ideal, fixed by rowmotion.
pub fn decompose_box_ideals(a: usize, b: usize, c: usize) -> Result<Vec<IdealOrbit>> {
    if c == 0 {
        let zero = PlanePartition::zero((a, b, 0))?;
        return Ok(vec![IdealOrbit {
            rep: zero.clone(),
            size: 1,
            members: vec![zero],
        }]);
    }
    let poset = box_poset(a, b, c)?;
    let mut visited: HashSet<Vec<u8>> = HashSet::new();
    let mut orbits = Vec::new();
    for pp in enumerate_plane_partitions(a, b, c) {
        if visited.contains(pp.heights()) {
            continue;
        }
        let mut members = vec![pp.clone()];
        let mut ideal = plane_partition_to_ideal(&poset, &pp)?;
        loop {
            ideal = poset.rowmotion(&ideal)?;
            let next = ideal_to_plane_partition(&poset, &ideal)?;
            if next == pp {
                break;
            }
            members.push(next);
        }
        let rep_at = members
            .iter()
            .enumerate()
            .min_by_key(|(_, m)| m.heights())
            .map(|(i, _)| i)
            .unwrap();
        members.rotate_left(rep_at);
        for m in &members {
            visited.insert(m.heights().to_vec());
        }
        orbits.push(IdealOrbit {
            rep: members[0].clone(),
            size: members.len() as u64,
            members,
        });
    }
    orbits.sort_by(|x, y| (x.size, x.rep.heights()).cmp(&(y.size, y.rep.heights())));
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(dims: (usize, usize, usize), rows: &[&[i64]]) -> PlanePartition {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        PlanePartition::new(dims, &rows).unwrap()
    }

    #[test]
    fn box_poset_counts() {
        let p = box_poset(1, 1, 1).unwrap();
        assert_eq!((p.elements(), p.covers().len()), (1, 0));
        let p = box_poset(2, 2, 1).unwrap();
        assert_eq!((p.elements(), p.covers().len()), (4, 4));
        let p = box_poset(2, 3, 2).unwrap();
        assert_eq!((p.elements(), p.covers().len()), (12, 20));
        assert!(box_poset(0, 2, 2).is_err());
        assert!(box_poset(2, 2, 0).is_err());
    }

    #[test]
    fn poset_construction_rejects_bad_input() {
        assert!(FinitePoset::new(2, vec![(0, 1), (1, 0)]).is_err()); // cycle
        assert!(FinitePoset::new(3, vec![(0, 1), (1, 2), (0, 2)]).is_err()); // implied cover
        assert!(FinitePoset::new(2, vec![(0, 2)]).is_err()); // out of range
        assert!(FinitePoset::new(2, vec![(0, 1), (0, 1)]).is_err()); // duplicate
        assert!(FinitePoset::new(1, vec![(0, 0)]).is_err()); // self-cover
    }

    #[test]
    fn cover_list_parsing() {
        let p = FinitePoset::from_cover_list("0 1\n1 2\n\n2 3\n").unwrap();
        assert_eq!(p.elements(), 4);
        assert_eq!(p.enumerate_ideals().count(), 5); // chain: prefixes
        assert!(FinitePoset::from_cover_list("0 one").is_err());
        assert!(FinitePoset::from_cover_list("0 1 2").is_err());
        assert!(FinitePoset::from_cover_list("0").is_err());
    }

    #[test]
    fn ideal_counts() {
        assert_eq!(box_poset(2, 2, 1).unwrap().enumerate_ideals().count(), 6);
        assert_eq!(box_poset(2, 2, 2).unwrap().enumerate_ideals().count(), 20);
        // same 2x2 grid poset built generically, exercising the other path
        let grid = FinitePoset::from_cover_list("0 1\n0 2\n1 3\n2 3").unwrap();
        assert_eq!(grid.enumerate_ideals().count(), 6);
        for n in 1..=5 {
            let text: String = (0..n - 1).map(|i| format!("{i} {}\n", i + 1)).collect();
            let chain = if n == 1 {
                FinitePoset::new(1, vec![]).unwrap()
            } else {
                FinitePoset::from_cover_list(&text).unwrap()
            };
            assert_eq!(chain.enumerate_ideals().count(), n + 1, "chain of {n}");
        }
    }

    #[test]
    fn ideals_are_distinct_and_closed() {
        let p = box_poset(2, 2, 2).unwrap();
        let all: Vec<OrderIdeal> = p.enumerate_ideals().collect();
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for i in &all {
            p.check_ideal(i).unwrap();
        }
    }

    #[test]
    fn rowmotion_on_grid_example() {
        let p = box_poset(2, 2, 1).unwrap();
        // {(1,1)} in the 2x2 grid: element (1,1,1) has index 0
        let i = p.ideal_from_members(&[0]).unwrap();
        let next = p.rowmotion(&i).unwrap();
        assert_eq!(next.members(), vec![0, 1, 2]);
    }

    #[test]
    fn rowmotion_extremes() {
        let p = box_poset(2, 3, 2).unwrap();
        let empty = p.empty_ideal();
        let full = p.full_ideal();
        // complement of the empty ideal is everything; its minimal elements
        // generate the ideal of minimal poset elements
        let step = p.rowmotion(&empty).unwrap();
        assert_eq!(step.members(), vec![0]);
        assert_eq!(p.rowmotion(&full).unwrap(), empty);
        assert_eq!(p.inverse_rowmotion(&empty).unwrap(), full);
    }

    #[test]
    fn rowmotion_rejects_non_ideal() {
        let p = box_poset(2, 2, 1).unwrap();
        let bad = OrderIdeal {
            bits: {
                let mut b = Bits::new(4);
                b.set(3); // top element without its lower covers
                b
            },
        };
        match p.rowmotion(&bad) {
            Err(Error::NotAnIdeal { element: 3, .. }) => {}
            other => panic!("expected NotAnIdeal, got {other:?}"),
        }
    }

    #[test]
    fn inverse_roundtrip_exhaustive() {
        for dims in [(2, 2, 1), (2, 2, 2), (2, 3, 2)] {
            let p = box_poset(dims.0, dims.1, dims.2).unwrap();
            for i in p.enumerate_ideals() {
                assert_eq!(p.inverse_rowmotion(&p.rowmotion(&i).unwrap()).unwrap(), i);
                assert_eq!(p.rowmotion(&p.inverse_rowmotion(&i).unwrap()).unwrap(), i);
            }
        }
        let grid = FinitePoset::from_cover_list("0 1\n0 2\n1 3\n2 3").unwrap();
        for i in grid.enumerate_ideals() {
            assert_eq!(
                grid.inverse_rowmotion(&grid.rowmotion(&i).unwrap())
                    .unwrap(),
                i
            );
        }
    }

    #[test]
    fn heights_encoding_roundtrip() {
        let p = box_poset(2, 2, 2).unwrap();
        for i in p.enumerate_ideals() {
            let part = ideal_to_plane_partition(&p, &i).unwrap();
            assert_eq!(plane_partition_to_ideal(&p, &part).unwrap(), i);
        }
        assert_eq!(
            ideal_to_plane_partition(&p, &p.empty_ideal())
                .unwrap()
                .rows(),
            vec![vec![0, 0], vec![0, 0]]
        );
        assert_eq!(
            ideal_to_plane_partition(&p, &p.full_ideal())
                .unwrap()
                .rows(),
            vec![vec![2, 2], vec![2, 2]]
        );
        // closure of {(1,1,2),(2,1,1)}
        let gen = p
            .down_closure(&[
                box_element_index((2, 2, 2), 1, 1, 2),
                box_element_index((2, 2, 2), 2, 1, 1),
            ])
            .unwrap();
        assert_eq!(
            ideal_to_plane_partition(&p, &gen).unwrap().rows(),
            vec![vec![2, 0], vec![1, 0]]
        );
    }

    #[test]
    fn partition_validation() {
        assert!(PlanePartition::new((2, 2, 2), &[vec![0, 1], vec![0, 0]]).is_err());
        assert!(PlanePartition::new((2, 2, 2), &[vec![1, 0], vec![2, 0]]).is_err());
        assert!(PlanePartition::new((2, 2, 2), &[vec![3, 0], vec![0, 0]]).is_err());
        assert!(PlanePartition::new((2, 2, 2), &[vec![-1, 0], vec![0, 0]]).is_err());
        assert!(PlanePartition::new((2, 2, 2), &[vec![0, 0]]).is_err());
        assert!(PlanePartition::new((2, 2, 2), &[vec![2, 1], vec![1, 1]]).is_ok());
    }

    #[test]
    fn partition_wire_format() {
        let part = pp((2, 2, 2), &[&[1, 0], &[0, 0]]);
        assert_eq!(
            serde_json::to_string(&part).unwrap(),
            r#"{"box":[2,2,2],"heights":[[1,0],[0,0]]}"#
        );
        let back: PlanePartition =
            serde_json::from_str(r#"{"box":[2,2,2],"heights":[[1,0],[0,0]]}"#).unwrap();
        assert_eq!(back, part);
        assert!(serde_json::from_str::<PlanePartition>(
            r#"{"box":[2,2,2],"heights":[[0,1],[0,0]]}"#
        )
        .is_err());
    }

    #[test]
    fn enumeration_order_is_heights_lex() {
        let first: Vec<Vec<Vec<u8>>> = enumerate_plane_partitions(2, 2, 2)
            .take(5)
            .map(|p| p.rows())
            .collect();
        assert_eq!(
            first,
            vec![
                vec![vec![0, 0], vec![0, 0]],
                vec![vec![1, 0], vec![0, 0]],
                vec![vec![1, 0], vec![1, 0]],
                vec![vec![1, 1], vec![0, 0]],
                vec![vec![1, 1], vec![1, 0]],
            ]
        );
        assert_eq!(enumerate_plane_partitions(2, 2, 0).count(), 1);
        assert_eq!(enumerate_plane_partitions(3, 3, 2).count(), 175);
    }

    #[test]
    fn ideal_orbits_of_small_boxes() {
        let orbits = decompose_box_ideals(2, 2, 2).unwrap();
        let sizes: Vec<u64> = orbits.iter().map(|o| o.size).collect();
        assert_eq!(sizes, vec![5, 5, 5, 5]);
        assert_eq!(orbits.iter().map(|o| o.size).sum::<u64>(), 20);
        // the orbit through the empty ideal, in rowmotion order
        let empty_orbit = &orbits[0];
        assert_eq!(empty_orbit.rep.rows(), vec![vec![0, 0], vec![0, 0]]);
        let chain: Vec<Vec<Vec<u8>>> = empty_orbit.members.iter().map(|m| m.rows()).collect();
        assert_eq!(
            chain,
            vec![
                vec![vec![0, 0], vec![0, 0]],
                vec![vec![1, 0], vec![0, 0]],
                vec![vec![2, 1], vec![1, 0]],
                vec![vec![2, 2], vec![2, 1]],
                vec![vec![2, 2], vec![2, 2]],
            ]
        );

        let sizes: Vec<u64> = decompose_box_ideals(2, 2, 1)
            .unwrap()
            .iter()
            .map(|o| o.size)
            .collect();
        assert_eq!(sizes, vec![2, 4]);

        let sizes: Vec<u64> = decompose_box_ideals(1, 1, 1)
            .unwrap()
            .iter()
            .map(|o| o.size)
            .collect();
        assert_eq!(sizes, vec![2]);

        let degenerate = decompose_box_ideals(3, 2, 0).unwrap();
        assert_eq!(degenerate.len(), 1);
        assert_eq!(degenerate[0].size, 1);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn closure_always_yields_ideal(seeds in proptest::collection::vec(0usize..8, 0..4)) {
                let p = box_poset(2, 2, 2).unwrap();
                let i = p.down_closure(&seeds).unwrap();
                p.check_ideal(&i).unwrap();
                let back = p.inverse_rowmotion(&p.rowmotion(&i).unwrap()).unwrap();
                prop_assert_eq!(back, i);
            }
        }
    }
}
