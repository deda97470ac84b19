//! Commands behind the `roman-count` binary.
//!
//! Every command is a plain function returning a serializable report so the
//! binary only parses flags and prints.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use roman_count::graph::{GenerateError, ParseError, SplitMix64};
use roman_count::roman::RomanError;
use roman_count::{
    count_roman, generate, parse_graph, render_graph, Algorithm, EngineOptions, Family, Format,
    Graph, RomanResult,
};
use serde::Serialize;
use thiserror::Error;

/// Default `n` limit for the brute-force oracle.
pub const DEFAULT_BRUTE_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot create {path}: {source}")]
    Create {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    TooLarge(#[from] RomanError),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] csv::Error),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 when the instance is too large for brute force,
    /// 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::TooLarge(_) => 2,
            _ => 1,
        }
    }
}

/// Result of one `count` run. `count` is a decimal string so that values
/// beyond 2^53 survive JSON readers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub gamma_r: usize,
    pub count: String,
    pub elapsed_ms: f64,
    pub threads: usize,
    pub memo: bool,
}

pub fn read_graph(path: &Path, format: Format) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    parse_graph(&text, format).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn count(
    g: &Graph,
    algorithm: Algorithm,
    opts: &EngineOptions,
    brute_limit: usize,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let result = count_roman(g, algorithm, opts, brute_limit)?;
    Ok(RunReport {
        n: g.n(),
        m: g.m(),
        algorithm: algorithm.as_str().to_owned(),
        gamma_r: result.gamma_r,
        count: result.count.to_string(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        threads: opts.threads,
        memo: algorithm == Algorithm::PartialMemo,
    })
}

#[derive(Debug, Clone)]
pub struct CrosscheckConfig {
    pub max_n: usize,
    pub trials: usize,
    pub probabilities: Vec<f64>,
    pub seed: u64,
    pub brute_limit: usize,
    pub threads: usize,
}

/// A named corpus graph.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
}

/// Paths and complete graphs for `1 ≤ n ≤ max_n`, cycles from `n = 3`, and
/// `trials` random graphs per `(n, p)`. Random seeds are successive outputs
/// of a [`SplitMix64`] stream started at `seed`.
pub fn crosscheck_corpus(cfg: &CrosscheckConfig) -> Result<Vec<Instance>, CliError> {
    let mut seeds = SplitMix64::new(cfg.seed);
    let mut out = Vec::new();
    for n in 1..=cfg.max_n {
        for family in [Family::Path, Family::Cycle, Family::Complete] {
            if family == Family::Cycle && n < 3 {
                continue;
            }
            out.push(Instance {
                name: format!("{}({n})", family.as_str()),
                graph: generate(family, n, 0.0, None)?,
            });
        }
        for &p in &cfg.probabilities {
            for trial in 0..cfg.trials {
                let seed = seeds.next_u64();
                out.push(Instance {
                    name: format!("gnp(n={n}, p={p}, trial={trial}, seed={seed})"),
                    graph: generate(Family::Gnp, n, p, Some(seed))?,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmResult {
    pub algorithm: String,
    pub gamma_r: usize,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub instance: String,
    /// The offending graph in edge-list format.
    pub witness: String,
    pub results: Vec<AlgorithmResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub instances: usize,
    pub mismatch: Option<Mismatch>,
}

impl CrosscheckReport {
    pub fn agrees(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Runs every algorithm on the corpus through `solve` and stops at the first
/// disagreement.
pub fn crosscheck_with(
    cfg: &CrosscheckConfig,
    solve: impl Fn(&Graph, Algorithm) -> Result<RomanResult, RomanError>,
) -> Result<CrosscheckReport, CliError> {
    if cfg.max_n > cfg.brute_limit {
        return Err(RomanError::TooLarge {
            n: cfg.max_n,
            limit: cfg.brute_limit,
        }
        .into());
    }
    let corpus = crosscheck_corpus(cfg)?;
    for (checked, inst) in corpus.iter().enumerate() {
        let results = Algorithm::ALL
            .iter()
            .map(|&alg| solve(&inst.graph, alg))
            .collect::<Result<Vec<_>, _>>()?;
        if results.iter().any(|r| r.value() != results[0].value()) {
            return Ok(CrosscheckReport {
                instances: checked + 1,
                mismatch: Some(Mismatch {
                    instance: inst.name.clone(),
                    witness: render_graph(&inst.graph, Format::EdgeList),
                    results: results
                        .iter()
                        .map(|r| AlgorithmResult {
                            algorithm: r.algorithm.as_str().to_owned(),
                            gamma_r: r.gamma_r,
                            count: r.count.to_string(),
                        })
                        .collect(),
                }),
            });
        }
    }
    Ok(CrosscheckReport {
        instances: corpus.len(),
        mismatch: None,
    })
}

pub fn crosscheck(
    cfg: &CrosscheckConfig,
    inject_fault: bool,
) -> Result<CrosscheckReport, CliError> {
    let opts = EngineOptions {
        threads: cfg.threads,
    };
    crosscheck_with(cfg, |g, alg| {
        let mut r = count_roman(g, alg, &opts, cfg.brute_limit)?;
        if inject_fault && alg == Algorithm::Cover && g.m() > 0 {
            r.count += 1u8;
        }
        Ok(r)
    })
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub family: Family,
    /// First `n`; an empty range (`from > to`) writes only the header.
    pub from: usize,
    pub to: usize,
    pub step: usize,
    pub p: f64,
    pub seed: u64,
    pub repetitions: usize,
    pub algorithms: Vec<Algorithm>,
    pub brute_limit: usize,
    pub threads: usize,
}

#[derive(Debug, Serialize)]
struct BenchRow {
    n: usize,
    algorithm: &'static str,
    repetition: usize,
    elapsed_ms: f64,
}

/// Writes one CSV row per `(n, algorithm, repetition)`, flushing after each
/// row so an interrupted run keeps what it measured. The graph for each `n`
/// depends only on `(family, n, p, seed)`. Returns the number of rows.
pub fn bench<W: Write>(cfg: &BenchConfig, out: W) -> Result<usize, CliError> {
    if cfg.step == 0 {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    let sizes: Vec<usize> = (cfg.from..=cfg.to).step_by(cfg.step).collect();
    if cfg.algorithms.contains(&Algorithm::Brute) {
        if let Some(&n) = sizes.last().filter(|&&n| n > cfg.brute_limit) {
            return Err(RomanError::TooLarge {
                n,
                limit: cfg.brute_limit,
            }
            .into());
        }
    }
    let mut csv = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    csv.write_record(["n", "algorithm", "repetition", "elapsed_ms"])?;
    csv.flush()?;
    let opts = EngineOptions {
        threads: cfg.threads,
    };
    let mut rows = 0;
    for n in sizes {
        let g = generate(cfg.family, n, cfg.p, Some(cfg.seed))?;
        for &alg in &cfg.algorithms {
            for repetition in 0..cfg.repetitions {
                let report = count(&g, alg, &opts, cfg.brute_limit)?;
                csv.serialize(BenchRow {
                    n,
                    algorithm: alg.as_str(),
                    repetition,
                    elapsed_ms: report.elapsed_ms,
                })?;
                csv.flush()?;
                rows += 1;
            }
        }
    }
    Ok(rows)
}

/// Renders one generated graph.
pub fn generate_graph(
    family: Family,
    n: usize,
    p: f64,
    seed: Option<u64>,
    format: Format,
) -> Result<String, CliError> {
    Ok(render_graph(&generate(family, n, p, seed)?, format))
}
