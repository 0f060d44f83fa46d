//! Staged promotion on increasing tableaux and its inverse.
//!
//! One promotion step runs stages v = 2..=q over the entry grid. Stage v
//! swaps the labels 1 and v inside every edge-connected component of
//! {1,v}-labeled cells that has at least two cells; single cells are left
//! alone. After the last stage every label decrements, with 1 wrapping to q.
//! Each stage is an involution, so the inverse increments first (q wraps
//! to 1) and replays the stages in reverse order.

use crate::error::{Error, Result};
use crate::grid::{Cell, IncreasingTableau, Ribbon, Shape};
use serde::Serialize;
use std::collections::BTreeSet;

/// Nontrivial ribbons touched by one stage. Stages with no swap still appear
/// in a trace, with an empty ribbon list.
#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub value: u8,
    pub ribbons: Vec<Ribbon>,
}

/// Everything one promotion step did: the adjacent pairs that co-occurred in
/// a nontrivial ribbon (flow path), the cells any nontrivial ribbon covered
/// (stream bed), and the per-stage ribbons. Cell lists are sorted row-major;
/// pairs are unordered, stored smaller cell first.
#[derive(Clone, Debug, Serialize)]
pub struct PromotionTrace {
    pub flow_path: Vec<(Cell, Cell)>,
    pub stream_bed: Vec<Cell>,
    pub stages: Vec<Stage>,
}

/// Reusable buffers for the stage walk. One instance per thread; the orbit
/// walker calls promotion millions of times and per-call allocation shows up.
pub(crate) struct Scratch {
    seen: Vec<u64>,
    epoch: u64,
    stack: Vec<u16>,
    comp: Vec<u16>,
}

impl Scratch {
    pub(crate) fn new() -> Scratch {
        Scratch {
            seen: Vec::new(),
            epoch: 0,
            stack: Vec::new(),
            comp: Vec::new(),
        }
    }
}

pub fn promote(t: &IncreasingTableau) -> Result<IncreasingTableau> {
    let mut entries = t.entries().to_vec();
    let mut scratch = Scratch::new();
    promote_in_place(t.shape(), t.ceiling(), &mut entries, &mut scratch)?;
    Ok(IncreasingTableau::from_entries_unchecked(
        t.shape(),
        t.ceiling(),
        entries,
    ))
}

pub fn demote(t: &IncreasingTableau) -> Result<IncreasingTableau> {
    let shape = t.shape();
    let q = t.ceiling();
    let mut entries = t.entries().to_vec();
    for e in entries.iter_mut() {
        *e = if *e == q { 1 } else { *e + 1 };
    }
    let mut scratch = Scratch::new();
    for v in (2..=q).rev() {
        stage_swap(shape, &mut entries, v, &mut scratch, None)?;
    }
    Ok(IncreasingTableau::from_entries_unchecked(shape, q, entries))
}

pub fn promote_with_trace(t: &IncreasingTableau) -> Result<(IncreasingTableau, PromotionTrace)> {
    let shape = t.shape();
    let q = t.ceiling();
    let mut entries = t.entries().to_vec();
    let mut scratch = Scratch::new();
    let mut stages = Vec::with_capacity(q.saturating_sub(1) as usize);
    for v in 2..=q {
        let mut recorded: Vec<Vec<u16>> = Vec::new();
        stage_swap(shape, &mut entries, v, &mut scratch, Some(&mut recorded))?;
        let ribbons = recorded
            .into_iter()
            .map(|mut idxs| {
                idxs.sort_unstable();
                Ribbon::from_sorted_cells(idxs.iter().map(|&i| shape.cell_at(i as usize)).collect())
            })
            .collect();
        stages.push(Stage { value: v, ribbons });
    }
    for e in entries.iter_mut() {
        *e = if *e == 1 { q } else { *e - 1 };
    }

    let mut bed = BTreeSet::new();
    let mut path = BTreeSet::new();
    for stage in &stages {
        for ribbon in &stage.ribbons {
            let cells = ribbon.cells();
            bed.extend(cells.iter().copied());
            for (i, &c) in cells.iter().enumerate() {
                for &d in &cells[i + 1..] {
                    if c.row.abs_diff(d.row) + c.col.abs_diff(d.col) == 1 {
                        path.insert((c.min(d), c.max(d)));
                    }
                }
            }
        }
    }

    let trace = PromotionTrace {
        flow_path: path.into_iter().collect(),
        stream_bed: bed.into_iter().collect(),
        stages,
    };
    Ok((
        IncreasingTableau::from_entries_unchecked(shape, q, entries),
        trace,
    ))
}

/// Applies the promotion step `m` times. If the walk returns to the start
/// before `m` steps, the remaining count is reduced modulo the orbit size,
/// so huge exponents cost at most two trips around the orbit.
pub fn promote_power(t: &IncreasingTableau, m: u64) -> Result<IncreasingTableau> {
    let shape = t.shape();
    let q = t.ceiling();
    let mut entries = t.entries().to_vec();
    let mut scratch = Scratch::new();
    let mut applied = 0u64;
    while applied < m {
        promote_in_place(shape, q, &mut entries, &mut scratch)?;
        applied += 1;
        if entries == t.entries() {
            // orbit size is `applied`; finish with the reduced remainder
            for _ in 0..(m % applied) {
                promote_in_place(shape, q, &mut entries, &mut scratch)?;
            }
            break;
        }
    }
    Ok(IncreasingTableau::from_entries_unchecked(shape, q, entries))
}

/// Cells covered by some nontrivial ribbon during one promotion step.
pub fn stream_bed(t: &IncreasingTableau) -> Result<Vec<Cell>> {
    Ok(promote_with_trace(t)?.1.stream_bed)
}

/// Adjacent cell pairs that share a nontrivial ribbon during one step.
pub fn flow_path(t: &IncreasingTableau) -> Result<Vec<(Cell, Cell)>> {
    Ok(promote_with_trace(t)?.1.flow_path)
}

/// Hot path for orbit walks: promotes `entries` without building a tableau.
pub(crate) fn promote_in_place(
    shape: Shape,
    q: u8,
    entries: &mut [u8],
    scratch: &mut Scratch,
) -> Result<()> {
    for v in 2..=q {
        stage_swap(shape, entries, v, scratch, None)?;
    }
    for e in entries.iter_mut() {
        *e = if *e == 1 { q } else { *e - 1 };
    }
    Ok(())
}

/// One stage: swap 1 <-> v inside every nontrivial {1,v} component.
/// `record` collects the nontrivial components as cell indices.
fn stage_swap(
    shape: Shape,
    entries: &mut [u8],
    v: u8,
    scratch: &mut Scratch,
    mut record: Option<&mut Vec<Vec<u16>>>,
) -> Result<()> {
    let (a, b) = (shape.rows(), shape.cols());
    let n = entries.len();
    if scratch.seen.len() < n {
        scratch.seen.resize(n, 0);
    }
    scratch.epoch += 1;
    let epoch = scratch.epoch;

    for start in 0..n {
        let e = entries[start];
        if (e != 1 && e != v) || scratch.seen[start] == epoch {
            continue;
        }
        scratch.comp.clear();
        scratch.stack.clear();
        scratch.stack.push(start as u16);
        scratch.seen[start] = epoch;
        while let Some(idx) = scratch.stack.pop() {
            scratch.comp.push(idx);
            let idx = idx as usize;
            let (i, j) = (idx / b, idx % b);
            let visit = |n_idx: usize, scr_seen: &mut [u64], stack: &mut Vec<u16>| {
                let e = entries[n_idx];
                if (e == 1 || e == v) && scr_seen[n_idx] != epoch {
                    scr_seen[n_idx] = epoch;
                    stack.push(n_idx as u16);
                }
            };
            if i > 0 {
                visit(idx - b, &mut scratch.seen, &mut scratch.stack);
            }
            if i + 1 < a {
                visit(idx + b, &mut scratch.seen, &mut scratch.stack);
            }
            if j > 0 {
                visit(idx - 1, &mut scratch.seen, &mut scratch.stack);
            }
            if j + 1 < b {
                visit(idx + 1, &mut scratch.seen, &mut scratch.stack);
            }
        }

        // at most two component cells may share a row or a column
        for (k, &x) in scratch.comp.iter().enumerate() {
            let (xi, xj) = (x as usize / b, x as usize % b);
            let mut row_mates = 0;
            let mut col_mates = 0;
            for (l, &y) in scratch.comp.iter().enumerate() {
                if k == l {
                    continue;
                }
                let (yi, yj) = (y as usize / b, y as usize % b);
                row_mates += (xi == yi) as usize;
                col_mates += (xj == yj) as usize;
            }
            if row_mates >= 2 || col_mates >= 2 {
                return Err(Error::MalformedRibbon {
                    cells: scratch
                        .comp
                        .iter()
                        .map(|&i| {
                            let c = shape.cell_at(i as usize);
                            (c.row, c.col)
                        })
                        .collect(),
                    reason: format!(
                        "more than two cells in one {} during stage {v}",
                        if row_mates >= 2 { "row" } else { "column" }
                    ),
                });
            }
        }

        if scratch.comp.len() >= 2 {
            for &idx in &scratch.comp {
                let e = &mut entries[idx as usize];
                *e = if *e == 1 { v } else { 1 };
            }
            if let Some(rec) = record.as_deref_mut() {
                rec.push(scratch.comp.clone());
            }
        }
    }
    Ok(())
}
