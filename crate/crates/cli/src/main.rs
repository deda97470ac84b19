use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use roman_count::{Algorithm, EngineOptions, Family, Format};
use roman_count_cli::{
    bench, count, crosscheck, generate_graph, read_graph, BenchConfig, CliError, CrosscheckConfig,
    DEFAULT_BRUTE_LIMIT,
};

/// Exact counting of minimum Roman dominating functions.
#[derive(Parser)]
#[command(name = "roman-count", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Engine {
    /// Worker threads for the counting engines.
    #[arg(long, env = "ROMAN_COUNT_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    /// Largest n the brute-force oracle accepts.
    #[arg(long, default_value_t = DEFAULT_BRUTE_LIMIT)]
    brute_limit: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute γ_R and the number of minimum Roman dominating functions.
    Count {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "edgelist")]
        format: Format,
        /// brute, cover, partial or partial-memo.
        #[arg(long, default_value = "cover")]
        algorithm: Algorithm,
        /// Indent the JSON report.
        #[arg(long)]
        pretty: bool,
        #[command(flatten)]
        engine: Engine,
    },
    /// Run every algorithm on a generated corpus and compare.
    Crosscheck {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Random graphs per (n, p).
        #[arg(long, default_value_t = 25)]
        trials: usize,
        /// Edge probabilities for the random graphs.
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,0.8")]
        p: Vec<f64>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Print the summary as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        engine: Engine,
    },
    /// Time the algorithms over a range of sizes and write CSV.
    Bench {
        #[arg(long, default_value = "gnp")]
        family: Family,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[arg(long, default_value_t = 0.25)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "cover,partial,partial-memo"
        )]
        algorithms: Vec<Algorithm>,
        /// CSV destination; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        engine: Engine,
    },
    /// Print a generated graph.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "edgelist")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    let mut stdout = io::stdout().lock();
    match command {
        Command::Count {
            input,
            format,
            algorithm,
            pretty,
            engine,
        } => {
            let g = read_graph(&input, format)?;
            let opts = EngineOptions {
                threads: engine.threads.into(),
            };
            let report = count(&g, algorithm, &opts, engine.brute_limit)?;
            let json = if pretty {
                serde_json::to_string_pretty(&report)
            } else {
                serde_json::to_string(&report)
            }
            .expect("report serializes");
            writeln!(stdout, "{json}")?;
        }
        Command::Crosscheck {
            max_n,
            trials,
            p,
            seed,
            json,
            inject_fault,
            engine,
        } => {
            let cfg = CrosscheckConfig {
                max_n,
                trials,
                probabilities: p,
                seed,
                brute_limit: engine.brute_limit,
                threads: engine.threads.into(),
            };
            let report = crosscheck(&cfg, inject_fault)?;
            if json {
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string(&report).expect("report serializes")
                )?;
            } else if let Some(m) = &report.mismatch {
                writeln!(
                    stdout,
                    "mismatch on {} after {} instances",
                    m.instance, report.instances
                )?;
                for r in &m.results {
                    writeln!(
                        stdout,
                        "  {:<12} gamma_r={} count={}",
                        r.algorithm, r.gamma_r, r.count
                    )?;
                }
                write!(stdout, "witness (edge list):\n{}", m.witness)?;
            } else {
                writeln!(stdout, "all agree: {} instances checked", report.instances)?;
            }
            if !report.agrees() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Bench {
            family,
            from,
            to,
            step,
            p,
            seed,
            reps,
            algorithms,
            out,
            engine,
        } => {
            let cfg = BenchConfig {
                family,
                from,
                to,
                step,
                p,
                seed,
                repetitions: reps,
                algorithms,
                brute_limit: engine.brute_limit,
                threads: engine.threads.into(),
            };
            match out {
                Some(path) => {
                    let file =
                        File::create(&path).map_err(|source| CliError::Create { path, source })?;
                    bench(&cfg, BufWriter::new(file))?;
                }
                None => {
                    bench(&cfg, &mut stdout)?;
                }
            }
        }
        Command::Generate {
            family,
            n,
            p,
            seed,
            format,
        } => {
            write!(stdout, "{}", generate_graph(family, n, p, seed, format)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
