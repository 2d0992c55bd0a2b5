mod commands;
mod output;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Destination, Format};

/// b-symbol weights of irreducible cyclic codes over odd-characteristic fields.
#[derive(Parser)]
#[command(name = "bsym", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `table22` defaults to csv, everything else to json.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for reports when `--out` is absent.
    #[arg(long, env = "BSYM_OUT_DIR", global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// b-symbol weight enumerator, brute force next to the closed form.
    Enumerate {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        b: BSelect,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// The square count μ(b) of the representative set P(b).
    Mu {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        b: BSelect,
        /// Distribution of μ(b) over primitive elements instead of the fixed η.
        #[arg(long)]
        scan: bool,
        /// Scan only this many primitive elements.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
    },
    /// Reproduce the reference table of μ(b) values.
    Table22,
    /// Run every check on one parameter set.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        /// Elements sampled when q^r exceeds the exhaustive threshold.
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
        /// Largest q^r checked over every nonzero element.
        #[arg(long, default_value_t = 10_000)]
        exhaustive_threshold: u64,
        /// Include per-check wall-clock times (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Singleton-type bound check; defaults to b = r.
    Mds {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        b: BSelect,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
}

#[derive(Args, Clone, Debug)]
struct CodeArgs {
    /// Characteristic.
    #[arg(long)]
    p: u32,
    /// q = p^e.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Extension degree over F_q (even).
    #[arg(long)]
    r: u32,
    /// Divisor N of q^r - 1.
    #[arg(long = "N", default_value_t = 2)]
    n_div: u64,
    /// Monic irreducible modulus of degree er over F_p, comma-separated coefficients, constant first.
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Args, Clone, Debug)]
struct BSelect {
    /// Symbol size.
    #[arg(long, conflicts_with = "b_range")]
    b: Option<usize>,
    /// Inclusive range LO:HI.
    #[arg(long, value_parser = parse_range)]
    b_range: Option<RangeInclusive<usize>>,
}

impl BSelect {
    fn values(&self) -> Option<Vec<usize>> {
        match (&self.b, &self.b_range) {
            (Some(b), _) => Some(vec![*b]),
            (None, Some(r)) => Some(r.clone().collect()),
            (None, None) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Full enumeration for small fields, one element per coset otherwise.
    Auto,
    Full,
    Coset,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok(lo..=hi)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = cli.format.unwrap_or(match cli.command {
        Command::Table22 => Format::Csv,
        _ => Format::Json,
    });
    let dest = Destination::new(cli.out, cli.out_dir);
    let result = match cli.command {
        Command::Enumerate { code, b, mode } => commands::enumerate(&code, &b, mode, format),
        Command::Mu {
            code,
            b,
            scan,
            samples,
            seed,
        } => commands::mu(&code, &b, scan, samples, seed, format),
        Command::Table22 => commands::table22(format),
        Command::Verify {
            code,
            samples,
            seed,
            exhaustive_threshold,
            timings,
        } => commands::verify(&code, samples, seed, exhaustive_threshold, timings, format),
        Command::Mds { code, b, mode } => commands::mds(&code, &b, mode, format),
    };
    let report = match result {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = dest.write(&report, format) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
