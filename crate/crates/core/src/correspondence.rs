//! The step-commuting bijection between order ideals of the a×b×c box and
//! increasing tableaux with ceiling a+b+c-1, plus an independent counting
//! oracle for both sides.
//!
//! The map is built by transport: decompose the rowmotion action on ideals
//! and the promotion action on tableaux into orbits, sort both orbit lists
//! by (size, lexicographically smallest member), and carry the i-th ideal
//! orbit onto the i-th tableau orbit step for step, starting at the two
//! representatives. When the two size profiles agree, and they are checked
//! on every build, the result is a bijection that commutes with one dynamic
//! step by construction. The profiles disagreeing would falsify the theory
//! this crate checks, and the build fails loudly rather than guessing a
//! pairing.

use crate::error::{Error, Result};
use crate::grid::{IncreasingTableau, Shape};
use crate::orbits::{decompose, EngineOptions, DEFAULT_STATE_BUDGET};
use crate::poset::{
    box_poset, decompose_box_ideals, enumerate_plane_partitions, ideal_to_plane_partition,
    plane_partition_to_ideal, PlanePartition,
};
use crate::promotion::promote;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Count of plane partitions in an a×b×c box (equivalently, of increasing
/// a×b tableaux with ceiling a+b+c-1), as the classical triple product
/// of (i+j+k-1)/(i+j+k-2), evaluated exactly. Any dimension may be zero.
pub fn macmahon_count(a: u64, b: u64, c: u64) -> Result<u128> {
    let mut num: u128 = 1;
    let mut pending: Vec<u128> = Vec::new();
    for i in 1..=a {
        for j in 1..=b {
            for k in 1..=c {
                let top = (i + j + k - 1) as u128;
                let bot = (i + j + k - 2) as u128;
                num = num.checked_mul(top).ok_or(Error::CountOverflow)?;
                if bot > 1 {
                    pending.push(bot);
                }
                pending.retain(|&d| {
                    if num.is_multiple_of(d) {
                        num /= d;
                        false
                    } else {
                        true
                    }
                });
            }
        }
    }
    // the full quotient is an integer, so by now every pending factor divides
    for d in pending {
        if num.is_multiple_of(d) {
            num /= d;
        } else {
            return Err(Error::InvariantViolation(format!(
                "box count denominator {d} failed to divide"
            )));
        }
    }
    Ok(num)
}

struct Correspondence {
    shape: Shape,
    q: u8,
    forward: HashMap<Vec<u8>, Vec<u8>>,  // heights -> entries
    backward: HashMap<Vec<u8>, Vec<u8>>, // entries -> heights
}

type BuiltTables = Mutex<HashMap<(usize, usize, usize), Arc<Correspondence>>>;

fn cache() -> &'static BuiltTables {
    static CACHE: OnceLock<BuiltTables> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn correspondence_for(dims: (usize, usize, usize), budget: u64) -> Result<Arc<Correspondence>> {
    if let Some(c) = cache().lock().unwrap().get(&dims) {
        return Ok(c.clone());
    }
    let built = Arc::new(build_correspondence(dims, budget)?);
    let mut map = cache().lock().unwrap();
    Ok(map.entry(dims).or_insert(built).clone())
}

fn build_correspondence(dims: (usize, usize, usize), budget: u64) -> Result<Correspondence> {
    let (a, b, c) = dims;
    let shape = Shape::new(a, b)?;
    let q_full = a + b + c - 1;
    if q_full > 255 {
        return Err(Error::InvalidCeiling(q_full as i64));
    }
    let q = q_full as u8;

    let tab_side = decompose(
        a,
        b,
        q,
        &EngineOptions {
            workers: 1,
            budget,
            keep_members: true,
        },
    )?;
    let ideal_side = decompose_box_ideals(a, b, c)?;

    if ideal_side.len() != tab_side.orbits.len() {
        return Err(Error::InvariantViolation(format!(
            "orbit counts disagree: {} ideal orbits vs {} tableau orbits",
            ideal_side.len(),
            tab_side.orbits.len()
        )));
    }
    let mut forward = HashMap::with_capacity(tab_side.total as usize);
    let mut backward = HashMap::with_capacity(tab_side.total as usize);
    for (io, to) in ideal_side.iter().zip(&tab_side.orbits) {
        if io.size != to.size {
            return Err(Error::InvariantViolation(format!(
                "orbit size profiles disagree: ideal orbit of {} vs tableau orbit of {}",
                io.size, to.size
            )));
        }
        let members = to.members.as_ref().expect("built with keep_members");
        for (pp, t) in io.members.iter().zip(members) {
            forward.insert(pp.heights().to_vec(), t.entries().to_vec());
            backward.insert(t.entries().to_vec(), pp.heights().to_vec());
        }
    }
    Ok(Correspondence {
        shape,
        q,
        forward,
        backward,
    })
}

/// Maps a plane partition to its partner tableau. The first call for a box
/// builds the full transport table for that box (all states on both sides);
/// later calls are lookups.
pub fn pp_to_tableau(pp: &PlanePartition) -> Result<IncreasingTableau> {
    let corr = correspondence_for(pp.dims(), DEFAULT_STATE_BUDGET)?;
    let entries = corr.forward.get(pp.heights()).ok_or_else(|| {
        Error::InvariantViolation("plane partition missing from transport table".into())
    })?;
    Ok(IncreasingTableau::from_entries_unchecked(
        corr.shape,
        corr.q,
        entries.clone(),
    ))
}

/// Exact inverse of `pp_to_tableau`. The declared height `c` must match the
/// tableau's ceiling: q = a+b+c-1.
pub fn tableau_to_pp(t: &IncreasingTableau, c: usize) -> Result<PlanePartition> {
    let (a, b) = (t.shape().rows(), t.shape().cols());
    if a + b + c - 1 != t.ceiling() as usize {
        return Err(Error::InvalidPlanePartition(format!(
            "box height {c} needs ceiling {}, tableau has {}",
            a + b + c - 1,
            t.ceiling()
        )));
    }
    let corr = correspondence_for((a, b, c), DEFAULT_STATE_BUDGET)?;
    let heights = corr
        .backward
        .get(t.entries())
        .ok_or_else(|| Error::InvariantViolation("tableau missing from transport table".into()))?;
    let rows: Vec<Vec<i64>> = heights
        .chunks(b)
        .map(|r| r.iter().map(|&h| h as i64).collect())
        .collect();
    PlanePartition::new((a, b, c), &rows)
}

#[derive(Serialize)]
pub struct EquivarianceReport {
    #[serde(rename = "box")]
    pub dims: [usize; 3],
    pub states: u64,
    pub pass: bool,
    pub counterexample: Option<serde_json::Value>,
}

/// Checks, over every ideal of the box, that mapping then stepping equals
/// stepping then mapping: pp_to_tableau(rowmotion(P)) = promote(pp_to_tableau(P)).
pub fn check_equivariance(a: usize, b: usize, c: usize, budget: u64) -> Result<EquivarianceReport> {
    let states128 = macmahon_count(a as u64, b as u64, c as u64)?;
    if states128 > budget as u128 {
        return Err(Error::BudgetExceeded {
            states: states128,
            budget: budget as u128,
        });
    }
    correspondence_for((a, b, c), budget)?;

    if c == 0 {
        // one state on each side; the only dynamic step is the identity
        let pp = PlanePartition::zero((a, b, 0))?;
        let t = pp_to_tableau(&pp)?;
        let pass = promote(&t)? == t;
        return Ok(EquivarianceReport {
            dims: [a, b, c],
            states: 1,
            pass,
            counterexample: None,
        });
    }

    let poset = box_poset(a, b, c)?;
    let mut states = 0u64;
    for pp in enumerate_plane_partitions(a, b, c) {
        states += 1;
        let stepped = ideal_to_plane_partition(
            &poset,
            &poset.rowmotion(&plane_partition_to_ideal(&poset, &pp)?)?,
        )?;
        let got = pp_to_tableau(&stepped)?;
        let expected = promote(&pp_to_tableau(&pp)?)?;
        if got != expected {
            return Ok(EquivarianceReport {
                dims: [a, b, c],
                states,
                pass: false,
                counterexample: Some(serde_json::json!({
                    "partition": pp,
                    "expected": expected,
                    "got": got,
                })),
            });
        }
    }
    Ok(EquivarianceReport {
        dims: [a, b, c],
        states,
        pass: true,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::minimal_tableau;
    use crate::orbits::enumerate_tableaux;

    fn pp(dims: (usize, usize, usize), rows: &[&[i64]]) -> PlanePartition {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        PlanePartition::new(dims, &rows).unwrap()
    }

    #[test]
    fn counting_oracle_values() {
        for ((a, b, c), want) in [
            ((2, 2, 0), 1),
            ((5, 7, 0), 1),
            ((1, 1, 1), 2),
            ((2, 2, 1), 6),
            ((2, 2, 2), 20),
            ((2, 3, 2), 50),
            ((3, 3, 2), 175),
            ((3, 3, 3), 980),
            ((4, 4, 3), 24696),
            ((2, 2, 8), 825),
            ((6, 5, 1), 462),
            ((2, 2, 31), 98736),
            ((0, 3, 3), 1),
        ] {
            assert_eq!(macmahon_count(a, b, c).unwrap(), want, "({a},{b},{c})");
        }
    }

    #[test]
    fn counting_oracle_is_symmetric() {
        let perms = [
            (2, 3, 4),
            (2, 4, 3),
            (3, 2, 4),
            (3, 4, 2),
            (4, 2, 3),
            (4, 3, 2),
        ];
        let vals: Vec<u128> = perms
            .iter()
            .map(|&(a, b, c)| macmahon_count(a, b, c).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn counting_oracle_overflow() {
        assert!(matches!(
            macmahon_count(50, 50, 50),
            Err(Error::CountOverflow)
        ));
    }

    #[test]
    fn single_cell_box() {
        let empty = pp((1, 1, 1), &[&[0]]);
        let full = pp((1, 1, 1), &[&[1]]);
        assert_eq!(pp_to_tableau(&empty).unwrap().rows(), vec![vec![1]]);
        assert_eq!(pp_to_tableau(&full).unwrap().rows(), vec![vec![2]]);
        assert_eq!(
            tableau_to_pp(&pp_to_tableau(&full).unwrap(), 1).unwrap(),
            full
        );
    }

    #[test]
    fn degenerate_height_zero_maps_to_minimal() {
        for (a, b) in [(1, 1), (2, 2), (3, 2), (2, 4)] {
            let zero = PlanePartition::zero((a, b, 0)).unwrap();
            let m = minimal_tableau(Shape::new(a, b).unwrap());
            assert_eq!(pp_to_tableau(&zero).unwrap(), m);
            assert_eq!(tableau_to_pp(&m, 0).unwrap(), zero);
        }
    }

    #[test]
    #[allow(clippy::type_complexity)]
    fn two_cube_table() {
        let pairs: [(&[&[i64]], &[&[i64]]); 8] = [
            (&[&[0, 0], &[0, 0]], &[&[1, 2], &[2, 3]]),
            (&[&[1, 0], &[0, 0]], &[&[1, 2], &[2, 5]]),
            (&[&[1, 0], &[1, 0]], &[&[1, 2], &[2, 4]]),
            (&[&[1, 1], &[0, 0]], &[&[1, 2], &[3, 4]]),
            (&[&[1, 1], &[1, 0]], &[&[1, 2], &[3, 5]]),
            (&[&[1, 1], &[1, 1]], &[&[2, 4], &[3, 5]]),
            (&[&[2, 1], &[1, 0]], &[&[1, 4], &[4, 5]]),
            (&[&[2, 2], &[2, 2]], &[&[2, 3], &[3, 4]]),
        ];
        for (heights, rows) in pairs {
            let p = pp((2, 2, 2), heights);
            let t = pp_to_tableau(&p).unwrap();
            let want: Vec<Vec<u8>> = rows
                .iter()
                .map(|r| r.iter().map(|&v| v as u8).collect())
                .collect();
            assert_eq!(t.rows(), want, "heights {heights:?}");
            assert_eq!(tableau_to_pp(&t, 2).unwrap(), p);
        }
    }

    #[test]
    fn bijective_onto_tableaux() {
        for (a, b, c) in [(2, 2, 2), (2, 3, 2)] {
            let q = (a + b + c - 1) as u8;
            let mut images: Vec<Vec<u8>> = enumerate_plane_partitions(a, b, c)
                .map(|p| pp_to_tableau(&p).unwrap().entries().to_vec())
                .collect();
            images.sort();
            images.dedup();
            let all: Vec<Vec<u8>> = enumerate_tableaux(a, b, q)
                .unwrap()
                .map(|t| t.entries().to_vec())
                .collect();
            assert_eq!(images, all);
        }
    }

    #[test]
    fn mismatched_height_rejected() {
        let m = minimal_tableau(Shape::new(2, 2).unwrap());
        assert!(tableau_to_pp(&m, 1).is_err());
    }

    #[test]
    fn equivariance_small_boxes() {
        for (a, b, c) in [(1, 1, 1), (2, 2, 1), (2, 2, 2), (2, 3, 2)] {
            let r = check_equivariance(a, b, c, DEFAULT_STATE_BUDGET).unwrap();
            assert!(r.pass, "({a},{b},{c})");
            assert_eq!(
                r.states as u128,
                macmahon_count(a as u64, b as u64, c as u64).unwrap()
            );
        }
        let r = check_equivariance(1, 1, 1, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"box":[1,1,1],"states":2,"pass":true,"counterexample":null}"#
        );
    }

    #[test]
    fn equivariance_budget_guardrail() {
        assert!(matches!(
            check_equivariance(3, 3, 3, 100),
            Err(Error::BudgetExceeded {
                states: 980,
                budget: 100
            })
        ));
    }
}
