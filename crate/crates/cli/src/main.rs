mod cache;
mod plan;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcong::checks::{chain_steps, Section, Verifier};
use qcong::cyclotomic;
use qcong::qseries::MonomialParam;

use plan::{NRange, Params, Task};
use report::{Format, Reporter};

#[derive(Parser, Debug)]
#[command(
    name = "qcong",
    version,
    about = "Exact verification of q-series identities and q-supercongruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run named checks for every odd n in a range.
    Verify(VerifyArgs),
    /// Replay every step of a proof for one n.
    ProofChain(ChainArgs),
    /// Print the n-th cyclotomic polynomial.
    Cyclotomic {
        #[arg(long)]
        n: u64,
    },
    /// Check the two-parameter transformation for monomial a and b.
    Carlitz(CarlitzArgs),
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; defaults to the number of available cores.
    #[arg(long)]
    parallelism: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report every elapsed time as zero so reports are reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Registry names such as a1, anew4, wang-yu, carlitz, proof-chain-s2, sun.
    #[arg(required = true)]
    checks: Vec<String>,
    /// Inclusive range `a..=b`, half-open `a..b`, or a single value.
    #[arg(long)]
    n: NRange,
    /// Modulus power; defaults to each check's native power.
    #[arg(long)]
    power: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[arg(long)]
    k: Option<u64>,
    /// A single prime for the integer checks; otherwise primes are taken from `--n`.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    base_power: Option<u64>,
    /// Stop at the first failing check.
    #[arg(long)]
    fail_fast: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SectionArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Both,
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = SectionArg::Both)]
    section: SectionArg,
    #[arg(long)]
    fail_fast: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CarlitzArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, default_value_t = 1)]
    base_power: u64,
    #[command(flatten)]
    output: Output,
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn parse_monomial(label: &str, s: &str) -> Result<MonomialParam, UsageError> {
    s.parse().map_err(|e| UsageError(format!("--{label}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::ProofChain(args) => proof_chain(args),
        Command::Cyclotomic { n } => {
            if n == 0 {
                return Err(UsageError("n must be at least 1".into()));
            }
            println!("{}", cyclotomic(n));
            Ok(true)
        }
        Command::Carlitz(args) => {
            let a = parse_monomial("a", &args.a)?;
            let b = parse_monomial("b", &args.b)?;
            if a.is_one() {
                return Err(UsageError("a = 1 is not allowed".into()));
            }
            if args.base_power == 0 {
                return Err(UsageError("--base-power must be positive".into()));
            }
            let task = Task::Carlitz {
                n: args.n,
                a,
                b,
                s: args.base_power,
            };
            execute(vec![task], &[], &args.output, false)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<bool, UsageError> {
    if let Some(m) = args.power {
        if m != 1 && m != 2 {
            return Err(UsageError(format!("--power must be 1 or 2, got {m}")));
        }
    }
    let params = Params {
        power: args.power,
        d: args.d,
        s: args.s,
        k: args.k,
        p: args.p,
        r: args.r,
        a: args
            .a
            .as_deref()
            .map(|s| parse_monomial("a", s))
            .transpose()?,
        b: args
            .b
            .as_deref()
            .map(|s| parse_monomial("b", s))
            .transpose()?,
        base_power: args.base_power,
    };
    let tasks = plan::plan(&args.checks, args.n, &params).map_err(UsageError)?;
    let ns = plan::cyclotomic_indices(&tasks);
    execute(tasks, &ns, &args.output, args.fail_fast)
}

fn proof_chain(args: ChainArgs) -> Result<bool, UsageError> {
    if args.n.is_multiple_of(2) || args.n < 3 {
        return Err(UsageError(format!(
            "n must be odd and at least 3, got {}",
            args.n
        )));
    }
    let section = match args.section {
        SectionArg::Two => Section::Two,
        SectionArg::Three => Section::Three,
        SectionArg::Both => Section::Both,
    };
    let tasks: Vec<Task> = chain_steps(args.n, section)
        .into_iter()
        .map(|id| Task::Step {
            id,
            n: args.n,
            k: None,
        })
        .collect();
    execute(tasks, &[args.n], &args.output, args.fail_fast)
}

fn execute(
    tasks: Vec<Task>,
    ns: &[u64],
    output: &Output,
    fail_fast: bool,
) -> Result<bool, UsageError> {
    let threads = match output.parallelism {
        Some(0) => return Err(UsageError("--parallelism must be positive".into())),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let verifier = Verifier::new(cache::prepare(ns));
    let outcome = plan::run_all(&verifier, &tasks, threads, fail_fast)?;
    let sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut reporter = Reporter::new(sink, output.format, output.no_timing);
    for r in &outcome.results {
        reporter.record(r)?;
    }
    reporter.finish()?;
    if let Some(err) = outcome.error {
        return Err(UsageError(err));
    }
    Ok(outcome.results.iter().all(|r| r.holds))
}
