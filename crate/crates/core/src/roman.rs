//! Roman dominating functions and the exhaustive `3^n` oracle.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::parallel;

/// Default vertex limit for [`brute_force_roman`].
pub const DEFAULT_BRUTE_LIMIT: usize = 16;

/// Vertex masks in the oracle are single words.
const BRUTE_HARD_LIMIT: usize = 64;

/// A labeling `f: V -> {0, 1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RdfAssignment {
    labels: Vec<u8>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("label {label} at vertex {vertex} is not in {{0, 1, 2}}")]
pub struct InvalidLabel {
    pub vertex: usize,
    pub label: u8,
}

impl RdfAssignment {
    pub fn new(labels: Vec<u8>) -> Result<Self, InvalidLabel> {
        if let Some((vertex, &label)) = labels.iter().enumerate().find(|(_, &l)| l > 2) {
            return Err(InvalidLabel { vertex, label });
        }
        Ok(RdfAssignment { labels })
    }

    /// Every vertex labeled `value`.
    pub fn constant(n: usize, value: u8) -> Result<Self, InvalidLabel> {
        Self::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> u8 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// `(V0, V1, V2)`.
    pub fn partition(&self) -> [VertexSet; 3] {
        let n = self.labels.len();
        let mut parts = [
            VertexSet::empty(n),
            VertexSet::empty(n),
            VertexSet::empty(n),
        ];
        for (v, &l) in self.labels.iter().enumerate() {
            parts[l as usize].insert(v);
        }
        parts
    }
}

/// True iff every vertex labeled 0 has a neighbor labeled 2.
///
/// An assignment whose length differs from `g.n()` is never an RDF of `g`.
pub fn is_rdf(g: &Graph, f: &RdfAssignment) -> bool {
    f.len() == g.n()
        && (0..g.n())
            .filter(|&v| f.label(v) == 0)
            .all(|v| g.neighbors(v).iter().any(|&u| f.label(u) == 2))
}

/// `|V1| + 2|V2|`.
pub fn rdf_weight(f: &RdfAssignment) -> usize {
    f.labels.iter().map(|&l| l as usize).sum()
}

/// Which pipeline produced a [`RomanResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Brute,
    Cover,
    Partial,
    PartialMemo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Brute,
        Algorithm::Cover,
        Algorithm::Partial,
        Algorithm::PartialMemo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::Cover => "cover",
            Algorithm::Partial => "partial",
            Algorithm::PartialMemo => "partial-memo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// The Roman domination number and the number of functions attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RomanResult {
    pub gamma_r: usize,
    pub count: BigUint,
    pub algorithm: Algorithm,
}

impl RomanResult {
    /// `(gamma_r, count)`, dropping the provenance tag for comparisons.
    pub fn value(&self) -> (usize, &BigUint) {
        (self.gamma_r, &self.count)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RomanError {
    #[error("instance too large for brute force: n = {n} exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Clone)]
pub struct BruteForceOptions {
    pub limit: usize,
    pub threads: usize,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions {
            limit: DEFAULT_BRUTE_LIMIT,
            threads: 1,
        }
    }
}

/// Oracle output plus the audit of every minimum function it saw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub result: RomanResult,
    /// Minimum functions with a V1–V2 edge or with `V1 != V \ N[V2]`.
    pub structure_violations: u64,
}

/// Enumerates all `3^n` labelings and counts the minimum-weight RDFs.
pub fn brute_force_roman(g: &Graph) -> Result<RomanResult, RomanError> {
    brute_force_roman_with(g, &BruteForceOptions::default()).map(|r| r.result)
}

/// [`brute_force_roman`] with an explicit size limit and worker count.
///
/// Labelings are visited as a mixed-radix counter with vertex 0 as the least
/// significant digit. With several workers the most significant digits are
/// fixed per task and the per-task tallies are merged.
pub fn brute_force_roman_with(
    g: &Graph,
    opts: &BruteForceOptions,
) -> Result<OracleReport, RomanError> {
    let n = g.n();
    let limit = opts.limit.min(BRUTE_HARD_LIMIT);
    if n > limit {
        return Err(RomanError::TooLarge { n, limit });
    }
    let closed = g.closed_masks();
    let open: Vec<u64> = closed
        .iter()
        .enumerate()
        .map(|(v, m)| m & !(1 << v))
        .collect();

    // Number of high digits fixed per task.
    let mut fixed = 0;
    if opts.threads > 1 {
        while fixed < n && 3usize.pow(fixed as u32) < 8 * opts.threads {
            fixed += 1;
        }
    }
    let tally = if fixed == 0 {
        enumerate(&open, n, 0)
    } else {
        let prefixes = 3usize.pow(fixed as u32);
        parallel::map_reduce(
            opts.threads,
            prefixes,
            |prefix| enumerate(&open, n - fixed, prefix),
            Tally::merge,
        )
    };
    Ok(OracleReport {
        result: RomanResult {
            gamma_r: tally.best,
            count: BigUint::from(tally.count),
            algorithm: Algorithm::Brute,
        },
        structure_violations: tally.violations,
    })
}

#[derive(Debug, Clone, Copy)]
struct Tally {
    best: usize,
    count: u64,
    violations: u64,
}

impl Tally {
    fn merge(a: Tally, b: Tally) -> Tally {
        match a.best.cmp(&b.best) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => Tally {
                best: a.best,
                count: a.count + b.count,
                violations: a.violations + b.violations,
            },
        }
    }
}

/// Runs the counter over the `free` low digits; the remaining high digits
/// are the base-3 expansion of `prefix`.
fn enumerate(open: &[u64], free: usize, prefix: usize) -> Tally {
    let n = open.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut digits = vec![0u8; n];
    let mut v1 = 0u64;
    let mut v2 = 0u64;
    let mut weight = 0usize;
    // Per-vertex number of neighbors labeled 2.
    let mut twos = vec![0u32; n];
    let mut dominated = 0u64;

    let set_two = |v: usize, on: bool, twos: &mut [u32], dominated: &mut u64| {
        let mut rest = open[v];
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if on {
                twos[u] += 1;
                *dominated |= 1 << u;
            } else {
                twos[u] -= 1;
                if twos[u] == 0 {
                    *dominated &= !(1 << u);
                }
            }
        }
    };

    let mut p = prefix;
    for (v, digit) in digits.iter_mut().enumerate().take(n).skip(free) {
        let d = (p % 3) as u8;
        p /= 3;
        *digit = d;
        weight += d as usize;
        match d {
            1 => v1 |= 1 << v,
            2 => {
                v2 |= 1 << v;
                set_two(v, true, &mut twos, &mut dominated);
            }
            _ => {}
        }
    }

    let mut tally = Tally {
        best: usize::MAX,
        count: 0,
        violations: 0,
    };
    loop {
        let v0 = all & !(v1 | v2);
        if v0 & !dominated == 0 && weight <= tally.best {
            // Minimum functions put no V1 vertex next to V2 and leave exactly
            // V \ N[V2] for V1.
            let bad = u64::from(v1 & dominated != 0 || v1 != all & !(v2 | dominated));
            if weight < tally.best {
                tally = Tally {
                    best: weight,
                    count: 1,
                    violations: bad,
                };
            } else {
                tally.count += 1;
                tally.violations += bad;
            }
        }

        let mut i = 0;
        loop {
            if i == free {
                return tally;
            }
            match digits[i] {
                0 => {
                    digits[i] = 1;
                    v1 |= 1 << i;
                    weight += 1;
                    break;
                }
                1 => {
                    digits[i] = 2;
                    v1 &= !(1 << i);
                    v2 |= 1 << i;
                    weight += 1;
                    set_two(i, true, &mut twos, &mut dominated);
                    break;
                }
                _ => {
                    digits[i] = 0;
                    v2 &= !(1 << i);
                    weight -= 2;
                    set_two(i, false, &mut twos, &mut dominated);
                    i += 1;
                }
            }
        }
    }
}

/// The empty graph's unique (empty) function.
pub(crate) fn empty_graph_result(algorithm: Algorithm) -> RomanResult {
    RomanResult {
        gamma_r: 0,
        count: BigUint::one(),
        algorithm,
    }
}

/// Domination number `γ(G)` by exhaustive search over vertex subsets.
pub fn brute_force_domination_number(g: &Graph, limit: usize) -> Result<usize, RomanError> {
    let n = g.n();
    let limit = limit.min(BRUTE_HARD_LIMIT - 1);
    if n > limit {
        return Err(RomanError::TooLarge { n, limit });
    }
    let closed = g.closed_masks();
    let all = (1u64 << n) - 1;
    let mut best = n;
    for subset in 0u64..(1u64 << n) {
        let size = subset.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut covered = 0u64;
        let mut rest = subset;
        while rest != 0 {
            covered |= closed[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        if covered == all {
            best = size;
        }
    }
    Ok(best)
}
