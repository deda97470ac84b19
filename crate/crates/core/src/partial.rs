//! Roman domination through partial red-blue domination.
//!
//! In a minimum Roman dominating function `V2` dominates exactly
//! `n - |V1|` vertices and no edge joins `V1` and `V2`. Counting the red
//! subsets of every size `j` that dominate exactly `l` blue vertices in the
//! incidence graph of `{N[v]}` therefore counts the functions with
//! `|V2| = j` and `|V1| = n - l`.

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::Zero;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::bits::Mask;
use crate::count::{binomial_rows, Count};
use crate::graph::Graph;
use crate::parallel;
use crate::roman::{empty_graph_result, Algorithm, RomanResult};
use crate::setcover::{IncidenceGraph, LabeledSet, SetLabel};
use crate::EngineOptions;

/// `p[j][l]`: red subsets of size `j` dominating exactly `l` blue vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCountMatrix {
    reds: usize,
    blues: usize,
    entries: Vec<BigUint>,
}

impl PartialCountMatrix {
    pub fn reds(&self) -> usize {
        self.reds
    }

    pub fn blues(&self) -> usize {
        self.blues
    }

    pub fn get(&self, j: usize, l: usize) -> &BigUint {
        &self.entries[j * (self.blues + 1) + l]
    }

    pub fn row(&self, j: usize) -> &[BigUint] {
        let w = self.blues + 1;
        &self.entries[j * w..(j + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigUint]> {
        self.entries.chunks(self.blues + 1)
    }
}

/// `a[j][k]`: functions with `|V2| = j`, `|V1| = k` and no `V1`–`V2` edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdfClassMatrix {
    n: usize,
    entries: Vec<BigUint>,
}

impl RdfClassMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> &BigUint {
        &self.entries[j * (self.n + 1) + k]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("matrix has {actual} blue columns, expected {expected}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub actual: usize,
}

/// How [`cpsc_count`] treats repeated subproblems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Plain recursion; memory stays polynomial.
    Polyspace,
    /// Caches the matrices of small subproblems, keyed by their remaining
    /// red and blue sets.
    Memo,
}

/// Reds are the closed neighborhoods `N[v]` (labeled by `v`, weight 1),
/// blues the vertices.
pub fn build_domination_instance(g: &Graph) -> IncidenceGraph {
    let sets = (0..g.n())
        .map(|v| {
            let mut members = g.neighbors(v).to_vec();
            members.push(v);
            LabeledSet {
                label: SetLabel::neighborhood(v),
                members,
                weight: 1,
            }
        })
        .collect();
    IncidenceGraph::new((0..g.n()).collect(), sets).expect("neighborhoods of a simple graph")
}

/// Counts red subsets by size and number of dominated blues.
///
/// Reductions at every node: blues no remaining red reaches are dropped
/// (they are never counted); reds reaching no remaining blue are dropped and
/// their free in/out choice is folded in as a `(1 + y)` factor. When every
/// red reaches at most one blue the blues are independent and the node is
/// closed in product form. Otherwise the red reaching the most blues
/// (smallest label on ties) is branched on: taking it adds one to `j` and
/// its reach to `l`, discarding it adds nothing. Both modes return the same
/// matrix.
pub fn cpsc_count(ig: &IncidenceGraph, mode: Mode) -> PartialCountMatrix {
    cpsc_count_with(ig, mode, &EngineOptions::default())
}

pub fn cpsc_count_with(
    ig: &IncidenceGraph,
    mode: Mode,
    opts: &EngineOptions,
) -> PartialCountMatrix {
    let width = ig.elements().len().max(ig.sets().len());
    // Row j sums to C(|R|, j) < 2^|R|.
    let sets = ig.sets().len();
    if sets < 64 && u64::fits(width) {
        return run_partial::<u64, u64>(ig, mode, opts);
    }
    let small = sets < 128;
    match (width, small) {
        (w, true) if u64::fits(w) => run_partial::<u64, u128>(ig, mode, opts),
        (w, true) if u128::fits(w) => run_partial::<u128, u128>(ig, mode, opts),
        (_, true) => run_partial::<FixedBitSet, u128>(ig, mode, opts),
        (w, false) if u64::fits(w) => run_partial::<u64, BigUint>(ig, mode, opts),
        (w, false) if u128::fits(w) => run_partial::<u128, BigUint>(ig, mode, opts),
        _ => run_partial::<FixedBitSet, BigUint>(ig, mode, opts),
    }
}

fn run_partial<M: Mask, C: Count>(
    ig: &IncidenceGraph,
    mode: Mode,
    opts: &EngineOptions,
) -> PartialCountMatrix {
    let engine = PartialEngine::<M, C>::new(ig, parallel::split_depth(opts.threads));
    let grid = parallel::run(opts.threads, || match mode {
        Mode::Polyspace => engine.count_polyspace(),
        Mode::Memo => engine.count_memo(),
    });
    PartialCountMatrix {
        reds: grid.rows - 1,
        blues: grid.cols - 1,
        entries: grid.data.into_iter().map(Count::into_big).collect(),
    }
}

/// Dense row-major matrix; rows index `j`, columns index `l`.
#[derive(Debug, Clone)]
struct Grid<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Count> Grid<C> {
    fn zeros(rows: usize, cols: usize) -> Self {
        Grid {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    fn at(&mut self, j: usize, l: usize) -> &mut C {
        &mut self.data[j * self.cols + l]
    }

    fn add_grid(&mut self, other: &Grid<C>) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            a.add_from(b);
        }
    }

    fn add_shifted(
        &mut self,
        src: &[C],
        src_cols: usize,
        dj: usize,
        dl: usize,
        free: usize,
        binom: &[Vec<C>],
    ) {
        add_shifted(
            &mut self.data,
            self.cols,
            src,
            src_cols,
            (dj, dl, free),
            binom,
        );
    }
}

/// `dst[j + dj + t][l + dl] += C(free, t) · src[j][l]` for all `t`, on
/// row-major slices.
fn add_shifted<C: Count>(
    dst: &mut [C],
    dst_cols: usize,
    src: &[C],
    src_cols: usize,
    (dj, dl, free): (usize, usize, usize),
    binom: &[Vec<C>],
) {
    for (j, row) in src.chunks(src_cols).enumerate() {
        for (t, c) in binom[free].iter().enumerate() {
            let start = (j + dj + t) * dst_cols + dl;
            let out = &mut dst[start..start + src_cols];
            if c.is_one() {
                for (d, v) in out.iter_mut().zip(row) {
                    d.add_from(v);
                }
            } else {
                for (d, v) in out.iter_mut().zip(row) {
                    d.add_from(&v.mul_by(c));
                }
            }
        }
    }
}

/// Finished state matrices, stored back to back in one arena.
struct MemoTable<M, C> {
    index: FxHashMap<(M, M), usize>,
    arena: Vec<C>,
}

impl<M: Mask, C: Count> Default for MemoTable<M, C> {
    fn default() -> Self {
        MemoTable {
            index: FxHashMap::default(),
            arena: Vec::new(),
        }
    }
}

/// States with at most this many reds plus blues go through the memo table.
/// Larger states almost never recur under max-reach branching.
const MEMO_THRESHOLD: usize = 8;

struct PartialEngine<M, C> {
    /// Per red, in label order: mask of blues it reaches.
    reach: Vec<M>,
    /// Per blue: mask of reds reaching it.
    reached_by: Vec<M>,
    blue_count: usize,
    binom: Vec<Vec<C>>,
    split_depth: usize,
}

impl<M: Mask, C: Count> PartialEngine<M, C> {
    fn new(ig: &IncidenceGraph, split_depth: usize) -> Self {
        let mut order: Vec<usize> = (0..ig.sets().len()).collect();
        order.sort_by_key(|&s| ig.sets()[s].label);
        let nb = ig.elements().len();
        let nr = order.len();
        let mut reach = Vec::with_capacity(nr);
        let mut reached_by = vec![M::empty(nr); nb];
        for (rank, &s) in order.iter().enumerate() {
            let mut m = M::empty(nb);
            for &b in &ig.sets()[s].members {
                m.insert(b);
                reached_by[b].insert(rank);
            }
            reach.push(m);
        }
        PartialEngine {
            reach,
            reached_by,
            blue_count: nb,
            binom: binomial_rows(nr),
            split_depth,
        }
    }

    /// Drops unreachable blues and idle reds; returns how many reds were
    /// idle.
    fn normalize(&self, reds: &mut M, blues: &mut M) -> usize {
        let mut reachable = M::empty(self.blue_count);
        for r in reds.ones() {
            reachable.union_with(&self.reach[r]);
        }
        blues.intersect_with(&reachable);
        let mut idle = M::empty(self.reach.len());
        for r in reds.ones() {
            if self.reach[r].intersection_count(blues) == 0 {
                idle.insert(r);
            }
        }
        reds.difference_with(&idle);
        idle.count()
    }

    /// Red of maximum reach (lowest label first) and that reach.
    fn pivot(&self, reds: &M, blues: &M) -> (usize, usize) {
        let mut best = (usize::MAX, 0);
        for r in reds.ones() {
            let d = self.reach[r].intersection_count(blues);
            if d > best.1 {
                best = (r, d);
            }
        }
        best
    }

    /// Every red reaches at most one blue: `Π_b (1 + ((1 + y)^{k_b} - 1) z)`
    /// where `k_b` counts the reds reaching `b`.
    fn independent(&self, reds: &M, blues: &M) -> Grid<C> {
        let mut grid = Grid::zeros(reds.count() + 1, blues.count() + 1);
        *grid.at(0, 0) = C::one();
        let mut used_rows = 1;
        for (done, b) in blues.ones().enumerate() {
            let k = self.reached_by[b].intersection_count(reds);
            // Walk backwards so each blue is applied once.
            for j in (0..used_rows).rev() {
                for l in (0..=done).rev() {
                    let v = grid.data[j * grid.cols + l].clone();
                    if v.is_zero() {
                        continue;
                    }
                    for t in 1..=k {
                        grid.at(j + t, l + 1).add_from(&v.mul_by(&self.binom[k][t]));
                    }
                }
            }
            used_rows += k;
        }
        grid
    }

    fn count_polyspace(&self) -> Grid<C> {
        let mut acc = Grid::zeros(self.reach.len() + 1, self.blue_count + 1);
        self.walk(
            M::full(self.reach.len()),
            M::full(self.blue_count),
            (0, 0, 0),
            0,
            None,
            &mut acc,
        );
        acc
    }

    fn count_memo(&self) -> Grid<C> {
        let mut memo = MemoTable::default();
        let mut acc = Grid::zeros(self.reach.len() + 1, self.blue_count + 1);
        self.walk(
            M::full(self.reach.len()),
            M::full(self.blue_count),
            (0, 0, 0),
            0,
            Some(&mut memo),
            &mut acc,
        );
        acc
    }

    /// Accumulating branch walk. `at = (j, l, idle)`: reds taken so far,
    /// blues dominated so far, and reds left with nothing to dominate.
    /// With a memo table, states small enough are handed to [`Self::memo`];
    /// a forked subtree gets a table of its own.
    fn walk(
        &self,
        mut reds: M,
        mut blues: M,
        at: (usize, usize, usize),
        depth: usize,
        mut memo: Option<&mut MemoTable<M, C>>,
        acc: &mut Grid<C>,
    ) {
        let (j, l, mut idle) = at;
        loop {
            idle += self.normalize(&mut reds, &mut blues);
            if reds.is_clear() {
                for (t, c) in self.binom[idle].iter().enumerate() {
                    acc.at(j + t, l).add_from(c);
                }
                return;
            }
            let (r, d) = self.pivot(&reds, &blues);
            if d <= 1 {
                let part = self.independent(&reds, &blues);
                acc.add_shifted(&part.data, part.cols, j, l, idle, &self.binom);
                return;
            }
            if let Some(table) = memo.as_deref_mut() {
                let (rows, cols) = (reds.count() + 1, blues.count() + 1);
                if rows + cols - 2 <= MEMO_THRESHOLD {
                    let start = self.memo(reds, blues, (r, d), table);
                    let part = &table.arena[start..start + rows * cols];
                    acc.add_shifted(part, cols, j, l, idle, &self.binom);
                    return;
                }
            }
            reds.remove(r);
            let mut taken_blues = blues.clone();
            taken_blues.difference_with(&self.reach[r]);
            if depth < self.split_depth {
                let mut side = Grid::zeros(acc.rows, acc.cols);
                let mut side_memo = memo.as_ref().map(|_| MemoTable::default());
                let taken_reds = reds.clone();
                rayon::join(
                    || {
                        self.walk(
                            taken_reds,
                            taken_blues,
                            (j + 1, l + d, idle),
                            depth + 1,
                            side_memo.as_mut(),
                            &mut side,
                        )
                    },
                    || self.walk(reds, blues, (j, l, idle), depth + 1, memo, acc),
                );
                acc.add_grid(&side);
                return;
            }
            self.walk(
                reds.clone(),
                taken_blues,
                (j + 1, l + d, idle),
                depth + 1,
                memo.as_deref_mut(),
                acc,
            );
        }
    }

    /// Arena offset of the matrix of a normalized state whose pivot `r`
    /// reaches `d > 1` blues. The matrix has `|reds| + 1` rows and
    /// `|blues| + 1` columns; a miss builds it in place at the end of the
    /// arena, children landing after it.
    fn memo(
        &self,
        reds: M,
        blues: M,
        (r, d): (usize, usize),
        table: &mut MemoTable<M, C>,
    ) -> usize {
        let key = (reds, blues);
        if let Some(&start) = table.index.get(&key) {
            return start;
        }
        let (reds, blues) = key;
        let cols = blues.count() + 1;
        let start = table.arena.len();
        table
            .arena
            .resize(start + (reds.count() + 1) * cols, C::zero());
        let mut rest = reds.clone();
        rest.remove(r);
        let mut taken_blues = blues.clone();
        taken_blues.difference_with(&self.reach[r]);
        let children = [
            (rest.clone(), taken_blues, 1, d),
            (rest, blues.clone(), 0, 0),
        ];
        for (mut child_reds, mut child_blues, dj, dl) in children {
            let idle = self.normalize(&mut child_reds, &mut child_blues);
            let shift = (dj, dl, idle);
            if child_reds.is_clear() {
                for (t, c) in self.binom[idle].iter().enumerate() {
                    table.arena[start + (dj + t) * cols + dl].add_from(c);
                }
                continue;
            }
            let pivot = self.pivot(&child_reds, &child_blues);
            let (rows_c, cols_c) = (child_reds.count() + 1, child_blues.count() + 1);
            let len = rows_c * cols_c;
            if pivot.1 <= 1 {
                let part = self.independent(&child_reds, &child_blues);
                add_shifted(
                    &mut table.arena[start..],
                    cols,
                    &part.data,
                    cols_c,
                    shift,
                    &self.binom,
                );
                continue;
            }
            let at = self.memo(child_reds, child_blues, pivot, table);
            // A cached child sits before this matrix, a fresh one after it.
            if at < start {
                let (head, tail) = table.arena.split_at_mut(start);
                add_shifted(tail, cols, &head[at..at + len], cols_c, shift, &self.binom);
            } else {
                let (head, tail) = table.arena.split_at_mut(at);
                add_shifted(
                    &mut head[start..],
                    cols,
                    &tail[..len],
                    cols_c,
                    shift,
                    &self.binom,
                );
            }
        }
        table.index.insert((reds, blues), start);
        start
    }
}

/// `a[j][k] = p[j][n - k]`.
pub fn rdf_class_matrix(
    p: &PartialCountMatrix,
    n: usize,
) -> Result<RdfClassMatrix, DimensionMismatch> {
    if p.blues != n || p.reds != n {
        return Err(DimensionMismatch {
            expected: n,
            actual: if p.blues != n { p.blues } else { p.reds },
        });
    }
    let mut entries = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for k in 0..=n {
            entries.push(p.get(j, n - k).clone());
        }
    }
    Ok(RdfClassMatrix { n, entries })
}

/// `γ_R = min {2j + k : a[j][k] > 0}` and the sum of `a[j][k]` over the
/// classes attaining it.
pub fn gamma_and_count(a: &RdfClassMatrix) -> RomanResult {
    let n = a.n;
    let mut best: Option<(usize, BigUint)> = None;
    for j in 0..=n {
        for k in 0..=n {
            let v = a.get(j, k);
            if v.is_zero() {
                continue;
            }
            let w = 2 * j + k;
            match &mut best {
                Some((bw, total)) if *bw == w => *total += v,
                Some((bw, _)) if *bw < w => {}
                _ => best = Some((w, v.clone())),
            }
        }
    }
    let (gamma_r, count) = best.expect("a[0][n] = 1 for every graph");
    RomanResult {
        gamma_r,
        count,
        algorithm: Algorithm::Partial,
    }
}

pub fn roman_count_via_partial(g: &Graph, mode: Mode) -> RomanResult {
    roman_count_via_partial_with(g, mode, &EngineOptions::default())
}

pub fn roman_count_via_partial_with(g: &Graph, mode: Mode, opts: &EngineOptions) -> RomanResult {
    let algorithm = match mode {
        Mode::Polyspace => Algorithm::Partial,
        Mode::Memo => Algorithm::PartialMemo,
    };
    if g.n() == 0 {
        return empty_graph_result(algorithm);
    }
    let p = cpsc_count_with(&build_domination_instance(g), mode, opts);
    let a = rdf_class_matrix(&p, g.n()).expect("domination instance is n × n");
    RomanResult {
        algorithm,
        ..gamma_and_count(&a)
    }
}
