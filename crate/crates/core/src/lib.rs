//! Exact counting of minimum Roman dominating functions.
//!
//! Two independent pipelines compute the Roman domination number `γ_R(G)`
//! and the number of functions attaining it:
//!
//! * [`setcover`] counts the covers of every weight in a weighted set-cover
//!   instance built from the graph;
//! * [`partial`] counts partial red-blue dominating sets by size and number
//!   of dominated vertices, in a polynomial-space and a memoized mode.
//!
//! [`roman::brute_force_roman`] enumerates all `3^n` labelings and serves
//! as the oracle for both.

mod bits;
mod count;
mod parallel;

pub mod graph;
pub mod partial;
pub mod roman;
pub mod setcover;

pub use count::binomial;
pub use graph::{generate, parse_graph, render_graph, Family, Format, Graph, VertexSet};
pub use partial::{roman_count_via_partial, Mode};
pub use roman::{brute_force_roman, Algorithm, RomanResult};
pub use setcover::roman_count_via_cover;

/// Execution settings shared by the counting engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineOptions {
    /// Worker threads; 1 runs everything on the calling thread.
    pub threads: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { threads: 1 }
    }
}

/// Runs `algorithm` on `g`.
///
/// Only [`Algorithm::Brute`] can fail, when `g` exceeds `brute_limit`.
pub fn count_roman(
    g: &Graph,
    algorithm: Algorithm,
    opts: &EngineOptions,
    brute_limit: usize,
) -> Result<RomanResult, roman::RomanError> {
    Ok(match algorithm {
        Algorithm::Brute => {
            let brute = roman::BruteForceOptions {
                limit: brute_limit,
                threads: opts.threads,
            };
            roman::brute_force_roman_with(g, &brute)?.result
        }
        Algorithm::Cover => setcover::roman_count_via_cover_with(g, opts),
        Algorithm::Partial => partial::roman_count_via_partial_with(g, Mode::Polyspace, opts),
        Algorithm::PartialMemo => partial::roman_count_via_partial_with(g, Mode::Memo, opts),
    })
}
