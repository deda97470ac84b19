//! Weighted set-cover modelling of Roman domination.
//!
//! Every vertex `v` contributes the singleton `{v}` at weight 1 and its
//! closed neighborhood `N[v]` at weight 2. Minimum-weight covers of that
//! instance are exactly the minimum Roman dominating functions (`V1` is the
//! set of chosen singletons, `V2` the set of chosen neighborhoods), so the
//! number of covers of each weight yields both `γ_R` and the count.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::bits::Mask;
use crate::count::Count;
use crate::graph::Graph;
use crate::parallel;
use crate::roman::{empty_graph_result, Algorithm, RomanResult};
use crate::EngineOptions;

/// Kind of a labeled set. Singletons order before neighborhoods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetKind {
    Singleton,
    Neighborhood,
}

/// Identity of a set: the vertex it came from and how it was formed.
///
/// Ordered by origin vertex, then kind; this order breaks branching ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetLabel {
    pub origin: usize,
    pub kind: SetKind,
}

impl SetLabel {
    pub fn singleton(origin: usize) -> Self {
        SetLabel {
            origin,
            kind: SetKind::Singleton,
        }
    }

    pub fn neighborhood(origin: usize) -> Self {
        SetLabel {
            origin,
            kind: SetKind::Neighborhood,
        }
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SetKind::Singleton => write!(f, "{{{}}}", self.origin),
            SetKind::Neighborhood => write!(f, "N[{}]", self.origin),
        }
    }
}

/// A weighted set with a label. Two sets may share members as long as their
/// labels differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSet {
    pub label: SetLabel,
    /// Sorted element ids.
    pub members: Vec<usize>,
    pub weight: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("element {0} is listed twice in the universe")]
    DuplicateElement(usize),
    #[error("element {0} belongs to no set")]
    UncoveredElement(usize),
    #[error("set {label} contains {member}, which is not in the universe")]
    UnknownMember { label: SetLabel, member: usize },
    #[error("set {0} has weight 0")]
    ZeroWeight(SetLabel),
    #[error("label {0} is used by more than one set")]
    DuplicateLabel(SetLabel),
}

/// A universe together with labeled weighted sets whose union is the
/// universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    universe: Vec<usize>,
    sets: Vec<LabeledSet>,
}

impl CoverInstance {
    pub fn new(universe: Vec<usize>, mut sets: Vec<LabeledSet>) -> Result<Self, CoverError> {
        let mut elements = HashSet::with_capacity(universe.len());
        for &e in &universe {
            if !elements.insert(e) {
                return Err(CoverError::DuplicateElement(e));
            }
        }
        let mut labels = HashSet::with_capacity(sets.len());
        let mut covered = HashSet::with_capacity(universe.len());
        for set in &mut sets {
            if set.weight == 0 {
                return Err(CoverError::ZeroWeight(set.label));
            }
            if !labels.insert(set.label) {
                return Err(CoverError::DuplicateLabel(set.label));
            }
            set.members.sort_unstable();
            set.members.dedup();
            for &m in &set.members {
                if !elements.contains(&m) {
                    return Err(CoverError::UnknownMember {
                        label: set.label,
                        member: m,
                    });
                }
                covered.insert(m);
            }
        }
        if let Some(&e) = universe.iter().find(|e| !covered.contains(e)) {
            return Err(CoverError::UncoveredElement(e));
        }
        Ok(CoverInstance { universe, sets })
    }

    pub fn universe(&self) -> &[usize] {
        &self.universe
    }

    pub fn sets(&self) -> &[LabeledSet] {
        &self.sets
    }

    pub fn total_weight(&self) -> usize {
        self.sets.iter().map(|s| s.weight as usize).sum()
    }
}

/// `U = V`, with `({v}, 1)` and `(N[v], 2)` for every vertex: `2n` sets.
pub fn build_roman_cover_instance(g: &Graph) -> CoverInstance {
    let mut sets = Vec::with_capacity(2 * g.n());
    for v in 0..g.n() {
        sets.push(LabeledSet {
            label: SetLabel::singleton(v),
            members: vec![v],
            weight: 1,
        });
        let mut members: Vec<usize> = g.neighbors(v).to_vec();
        members.push(v);
        members.sort_unstable();
        sets.push(LabeledSet {
            label: SetLabel::neighborhood(v),
            members,
            weight: 2,
        });
    }
    CoverInstance::new((0..g.n()).collect(), sets).expect("every vertex lies in its own singleton")
}

/// One set (red vertex) of an [`IncidenceGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSet {
    pub label: SetLabel,
    pub weight: u32,
    /// Positions into [`IncidenceGraph::elements`], sorted.
    pub members: Vec<usize>,
}

/// Bipartite element–set incidence graph: element `e` is adjacent to set
/// `S` iff `e ∈ S`.
///
/// Unlike [`CoverInstance`] it may contain elements that no set covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceGraph {
    elements: Vec<usize>,
    sets: Vec<IncidenceSet>,
    containing: Vec<Vec<usize>>,
}

impl IncidenceGraph {
    /// Builds the incidence graph of `sets` over `elements`; set members
    /// are element ids.
    pub fn new(elements: Vec<usize>, sets: Vec<LabeledSet>) -> Result<Self, CoverError> {
        let mut position = std::collections::HashMap::with_capacity(elements.len());
        for (i, &e) in elements.iter().enumerate() {
            if position.insert(e, i).is_some() {
                return Err(CoverError::DuplicateElement(e));
            }
        }
        let mut labels = HashSet::with_capacity(sets.len());
        let mut containing = vec![Vec::new(); elements.len()];
        let mut out = Vec::with_capacity(sets.len());
        for (idx, set) in sets.into_iter().enumerate() {
            if set.weight == 0 {
                return Err(CoverError::ZeroWeight(set.label));
            }
            if !labels.insert(set.label) {
                return Err(CoverError::DuplicateLabel(set.label));
            }
            let mut members = Vec::with_capacity(set.members.len());
            for m in set.members {
                let &p = position.get(&m).ok_or(CoverError::UnknownMember {
                    label: set.label,
                    member: m,
                })?;
                members.push(p);
            }
            members.sort_unstable();
            members.dedup();
            for &p in &members {
                containing[p].push(idx);
            }
            out.push(IncidenceSet {
                label: set.label,
                weight: set.weight,
                members,
            });
        }
        Ok(IncidenceGraph {
            elements,
            sets: out,
            containing,
        })
    }

    /// Element ids, in position order.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn sets(&self) -> &[IncidenceSet] {
        &self.sets
    }

    pub fn element_degree(&self, position: usize) -> usize {
        self.containing[position].len()
    }

    pub fn set_degree(&self, index: usize) -> usize {
        self.sets[index].members.len()
    }

    /// Indices of the sets containing the element at `position`.
    pub fn sets_containing(&self, position: usize) -> &[usize] {
        &self.containing[position]
    }

    /// Position of element id `e`.
    pub fn element_position(&self, e: usize) -> Option<usize> {
        self.elements.iter().position(|&x| x == e)
    }

    /// Index of the set carrying `label`.
    pub fn set_index(&self, label: SetLabel) -> Option<usize> {
        self.sets.iter().position(|s| s.label == label)
    }

    /// `(element position, set index)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(s, set)| set.members.iter().map(move |&e| (e, s)))
    }

    pub fn total_weight(&self) -> usize {
        self.sets.iter().map(|s| s.weight as usize).sum()
    }
}

pub fn build_incidence_graph(inst: &CoverInstance) -> IncidenceGraph {
    IncidenceGraph::new(inst.universe.clone(), inst.sets.clone())
        .expect("cover instances are validated on construction")
}

/// `counts[κ]` = number of sub-collections that cover the universe and
/// weigh exactly `κ`, for `κ` in `0..=W_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCountVector {
    pub counts: Vec<BigUint>,
}

impl WeightCountVector {
    /// Least weight with a nonzero count.
    pub fn min_weight(&self) -> Option<usize> {
        self.counts.iter().position(|c| !c.is_zero())
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn max_weight(&self) -> usize {
        self.counts.len() - 1
    }
}

/// Counts covers of every weight with branch-and-reduce.
///
/// Rules, applied in order at every node:
/// 1. universe empty: every remaining set is optional, contributing
///    `Π (1 + x^w)`;
/// 2. an element in no remaining set: no covers below this node;
/// 3. an element in exactly one remaining set: that set is taken;
/// 4. every remaining set meets at most one remaining element: elements are
///    independent, contributing `Π_e (Π_{S ∋ e} (1 + x^w) - 1)` times the
///    factors of the sets that meet none;
/// 5. otherwise branch on the set meeting the most remaining elements
///    (smallest label on ties): take it or discard it.
pub fn cwsc_count(ig: &IncidenceGraph) -> WeightCountVector {
    cwsc_count_with(ig, &EngineOptions::default())
}

pub fn cwsc_count_with(ig: &IncidenceGraph, opts: &EngineOptions) -> WeightCountVector {
    let width = ig.elements.len().max(ig.sets.len());
    // Every entry is at most 2^|S|.
    if ig.sets.len() < 64 && u64::fits(width) {
        return run_cover::<u64, u64>(ig, opts);
    }
    let small = ig.sets.len() < 128;
    match (width, small) {
        (w, true) if u64::fits(w) => run_cover::<u64, u128>(ig, opts),
        (w, true) if u128::fits(w) => run_cover::<u128, u128>(ig, opts),
        (_, true) => run_cover::<FixedBitSet, u128>(ig, opts),
        (w, false) if u64::fits(w) => run_cover::<u64, BigUint>(ig, opts),
        (w, false) if u128::fits(w) => run_cover::<u128, BigUint>(ig, opts),
        _ => run_cover::<FixedBitSet, BigUint>(ig, opts),
    }
}

fn run_cover<M: Mask, C: Count>(ig: &IncidenceGraph, opts: &EngineOptions) -> WeightCountVector {
    let engine = CoverEngine::<M>::new(ig, parallel::split_depth(opts.threads));
    let counts: Vec<C> = parallel::run(opts.threads, || engine.count_all());
    WeightCountVector {
        counts: counts.into_iter().map(Count::into_big).collect(),
    }
}

struct CoverEngine<M> {
    /// Per set, in label order: element mask.
    members: Vec<M>,
    /// Per element: mask of sets (label-order indices) containing it.
    containing: Vec<M>,
    weights: Vec<usize>,
    element_count: usize,
    w_max: usize,
    split_depth: usize,
}

impl<M: Mask> CoverEngine<M> {
    fn new(ig: &IncidenceGraph, split_depth: usize) -> Self {
        let mut order: Vec<usize> = (0..ig.sets.len()).collect();
        order.sort_by_key(|&s| ig.sets[s].label);
        let ne = ig.elements.len();
        let ns = ig.sets.len();
        let mut members = Vec::with_capacity(ns);
        let mut containing = vec![M::empty(ns); ne];
        let mut weights = Vec::with_capacity(ns);
        for (rank, &s) in order.iter().enumerate() {
            let mut m = M::empty(ne);
            for &e in &ig.sets[s].members {
                m.insert(e);
                containing[e].insert(rank);
            }
            members.push(m);
            weights.push(ig.sets[s].weight as usize);
        }
        CoverEngine {
            members,
            containing,
            w_max: weights.iter().sum(),
            weights,
            element_count: ne,
            split_depth,
        }
    }

    fn count_all<C: Count>(&self) -> Vec<C> {
        let mut acc = vec![C::zero(); self.w_max + 1];
        self.count(
            M::full(self.element_count),
            M::full(self.members.len()),
            0,
            0,
            &mut acc,
        );
        acc
    }

    fn count<C: Count>(
        &self,
        mut elements: M,
        mut sets: M,
        mut offset: usize,
        depth: usize,
        acc: &mut [C],
    ) {
        loop {
            if elements.is_clear() {
                let mut poly = vec![C::one()];
                for s in sets.ones() {
                    multiply_optional(&mut poly, self.weights[s]);
                }
                add_shifted(acc, &poly, offset);
                return;
            }

            let mut forced = None;
            for e in elements.ones() {
                match self.containing[e].intersection_count(&sets) {
                    0 => return,
                    1 if forced.is_none() => forced = Some(e),
                    _ => {}
                }
            }
            if let Some(e) = forced {
                let mut only = self.containing[e].clone();
                only.intersect_with(&sets);
                let s = only.ones().next().expect("degree one");
                offset += self.weights[s];
                elements.difference_with(&self.members[s]);
                sets.remove(s);
                continue;
            }

            let mut best = None;
            let mut best_degree = 0;
            for s in sets.ones() {
                let d = self.members[s].intersection_count(&elements);
                if d > best_degree {
                    best_degree = d;
                    best = Some(s);
                }
            }
            if best_degree <= 1 {
                self.count_independent(&elements, &sets, offset, acc);
                return;
            }
            let s = best.expect("a set of degree > 1");
            let mut taken_elements = elements.clone();
            taken_elements.difference_with(&self.members[s]);
            sets.remove(s);
            let taken_offset = offset + self.weights[s];
            if depth < self.split_depth {
                let mut side = vec![C::zero(); acc.len()];
                let (taken_sets, rest_sets) = (sets.clone(), sets);
                let rest_elements = elements;
                rayon::join(
                    || {
                        self.count(
                            taken_elements,
                            taken_sets,
                            taken_offset,
                            depth + 1,
                            &mut side,
                        )
                    },
                    || self.count(rest_elements, rest_sets, offset, depth + 1, acc),
                );
                for (a, b) in acc.iter_mut().zip(&side) {
                    a.add_from(b);
                }
                return;
            }
            self.count(taken_elements, sets.clone(), taken_offset, depth + 1, acc);
        }
    }

    /// Rule 4: each remaining set meets at most one remaining element.
    fn count_independent<C: Count>(&self, elements: &M, sets: &M, offset: usize, acc: &mut [C]) {
        let mut poly = vec![C::one()];
        let mut idle = sets.clone();
        for e in elements.ones() {
            let mut factor = vec![C::one()];
            let mut mine = self.containing[e].clone();
            mine.intersect_with(sets);
            for s in mine.ones() {
                multiply_optional(&mut factor, self.weights[s]);
                idle.remove(s);
            }
            // Drop the empty choice: some set must cover e.
            factor[0] = C::zero();
            poly = multiply(&poly, &factor);
        }
        for s in idle.ones() {
            multiply_optional(&mut poly, self.weights[s]);
        }
        add_shifted(acc, &poly, offset);
    }
}

/// `poly *= (1 + x^w)`.
fn multiply_optional<C: Count>(poly: &mut Vec<C>, w: usize) {
    let old = poly.len();
    poly.resize(old + w, C::zero());
    for i in (0..old).rev() {
        let v = poly[i].clone();
        poly[i + w].add_from(&v);
    }
}

fn multiply<C: Count>(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j].add_from(&x.mul_by(y));
            }
        }
    }
    out
}

fn add_shifted<C: Count>(acc: &mut [C], poly: &[C], offset: usize) {
    for (i, c) in poly.iter().enumerate() {
        if !c.is_zero() {
            acc[offset + i].add_from(c);
        }
    }
}

/// Degree weights `v(i)` for elements and `w(i)` for sets, indexed by degree
/// `0..=6`, with index 7 standing for every degree above 6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureWeights {
    pub element: [f64; 8],
    pub set: [f64; 8],
}

impl MeasureWeights {
    /// The measure-and-conquer weights of the polynomial-space cover
    /// counter.
    pub const TABLE: MeasureWeights = MeasureWeights {
        element: [
            0.0, 0.0, 0.640171, 0.888601, 0.969491, 0.998628, 1.000000, 1.000000,
        ],
        set: [
            0.0, 0.0, 0.815190, 1.218997, 1.362801, 1.402265, 1.402265, 1.402265,
        ],
    };

    /// Base of the per-unit running-time bound `O(1.205693^k)`.
    pub const BASE: f64 = 1.205693;

    pub fn element_weight(&self, degree: usize) -> f64 {
        self.element[degree.min(7)]
    }

    pub fn set_weight(&self, degree: usize) -> f64 {
        self.set[degree.min(7)]
    }
}

impl Default for MeasureWeights {
    fn default() -> Self {
        Self::TABLE
    }
}

/// `k = Σ_e v(deg e) + Σ_S w(deg S)` over the whole incidence graph.
pub fn measure(ig: &IncidenceGraph, mw: &MeasureWeights) -> f64 {
    let elements: f64 = (0..ig.elements.len())
        .map(|e| mw.element_weight(ig.element_degree(e)))
        .sum();
    let sets: f64 = (0..ig.sets.len())
        .map(|s| mw.set_weight(ig.set_degree(s)))
        .sum();
    elements + sets
}

/// `γ_R` and the number of minimum Roman dominating functions, read off the
/// least nonzero weight of the Roman cover instance.
pub fn roman_count_via_cover(g: &Graph) -> RomanResult {
    roman_count_via_cover_with(g, &EngineOptions::default())
}

pub fn roman_count_via_cover_with(g: &Graph, opts: &EngineOptions) -> RomanResult {
    if g.n() == 0 {
        return empty_graph_result(Algorithm::Cover);
    }
    let ig = build_incidence_graph(&build_roman_cover_instance(g));
    let mut vector = cwsc_count_with(&ig, opts);
    let gamma_r = vector
        .min_weight()
        .expect("the full collection always covers V");
    RomanResult {
        gamma_r,
        count: std::mem::take(&mut vector.counts[gamma_r]),
        algorithm: Algorithm::Cover,
    }
}
