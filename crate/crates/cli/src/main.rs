mod cache;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cache::Cache;
use crate::report::{render, Format};

/// Hilbert functions, inverse systems and Lefschetz properties of artinian algebras.
#[derive(Parser)]
#[command(name = "lefschetz", version, about)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct RunArgs {
    /// Seed for primes and random coefficients.
    #[arg(long, global = true, env = "LEFSCHETZ_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Independent trials (prime and coefficient draws) per computation.
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,
    /// Bit size of the random primes (20 to 62).
    #[arg(long, global = true, default_value_t = 31)]
    pub prime_bits: u32,
    /// General coefficients are drawn from [-bound, bound].
    #[arg(long, global = true, default_value_t = 10_000)]
    pub coeff_bound: i64,
    /// Recompute dimensions of fixed ideals by exact integer elimination.
    #[arg(long, global = true)]
    pub certify: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub output: Format,
    /// Directory for cached reports; caching is off when unset.
    #[arg(long, global = true, env = "LEFSCHETZ_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// (x_1^2, ..., x_r^2)
    SquaresCi,
    /// r + 1 general squares
    GeneralSquares,
    /// (x_1^2, ..., x_r^2, (x_1 + ... + x_r)^2)
    Linked,
    /// four cubes of the variables and a general cube (r = 4)
    CubesExample,
}

#[derive(Args, Clone)]
pub struct IdealArgs {
    /// Ideal spec: a file path, `-` for stdin, or inline JSON.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub spec: Option<String>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Number of variables for presets.
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(Subcommand, Clone)]
pub enum Command {
    /// Check the WLP verdict for r + 1 general squares over a range of r.
    VerifyHss {
        /// Run a single r (overrides the range).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 2)]
        r_min: usize,
        #[arg(long, default_value_t = 13)]
        r_max: usize,
        /// Largest r accepted.
        #[arg(long, default_value_t = lefschetz::lefschetz::DESK_SCALE_MAX_R)]
        max_r: usize,
    },
    /// Print the Hilbert function of a quotient.
    Hilbert(IdealArgs),
    /// Weak Lefschetz test (exit 0 holds, 2 fails).
    Wlp(IdealArgs),
    /// Strong Lefschetz test (exit 0 holds, 2 fails).
    Slp(IdealArgs),
    /// Inverse-system report for the squarefree sum of degree r - 2.
    Apolar {
        #[arg(long)]
        r: usize,
    },
    /// Print a closed-form table; run without a valid name to list them.
    Oracle {
        name: String,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 3)]
        r_min: usize,
        #[arg(long, default_value_t = 9)]
        r_max: usize,
        #[arg(long)]
        q_min: Option<u32>,
        #[arg(long)]
        q_max: Option<u32>,
        #[arg(long, default_value_t = 64)]
        n_max: u32,
    },
    /// WLP test for powers of general linear forms, one per exponent.
    Probe {
        #[arg(long)]
        r: usize,
        /// Comma-separated exponents, e.g. 3,3,3,3,3.
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<usize>,
    },
    /// Inspect or empty the report cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Clone, Copy)]
pub enum CacheAction {
    Stats,
    Clear,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors share exit code 1 with other errors; 2 means "property fails".
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Command::Cache { action } = cli.command {
        return cache_command(&cli.run, action);
    }
    let cache = cli.run.cache_dir.clone().map(Cache::new);
    let outcome = commands::cache_key(&cli.command, &cli.run).and_then(|key| {
        if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
            return Ok(hit);
        }
        let report = commands::run(&cli.command, &cli.run)?;
        if let Some(c) = &cache {
            if let Err(e) = c.put(&key, &report) {
                eprintln!("warning: could not write cache entry: {e}");
            }
        }
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            print!("{}", render(&report, cli.run.output));
            let code = report.exit_code();
            if code == 1 {
                eprintln!("error: verdict {}: see the records above", report.verdict);
            }
            ExitCode::from(code as u8)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn cache_command(run: &RunArgs, action: CacheAction) -> ExitCode {
    let Some(dir) = &run.cache_dir else {
        eprintln!("error: no cache directory (use --cache-dir or LEFSCHETZ_CACHE_DIR)");
        return ExitCode::from(1);
    };
    let cache = Cache::new(dir);
    let result = match action {
        CacheAction::Stats => cache
            .stats()
            .map(|s| format!("{}: {} entries, {} bytes", cache.dir().display(), s.entries, s.bytes)),
        CacheAction::Clear => cache.clear().map(|n| format!("removed {n} entries")),
    };
    match result {
        Ok(line) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
