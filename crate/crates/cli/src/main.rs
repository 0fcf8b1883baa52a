use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclopadic::harness::{run_sweep, Selection, SweepSpec, DEFAULT_DEGREE_CAP, DEFAULT_SEED, DEFAULT_TRIALS};
use cyclopadic::targets::{ExactTargets, Mutated, Mutation, Targets};
use cyclopadic::{CongruenceReport, CycleType};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "cyclopadic", version, about = "Cycle indicators, Meixner polynomials and their p-adic congruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a cycle indicator, class size, or Meixner polynomial.
    Compute {
        #[command(subcommand)]
        object: Object,
        #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
        format: Format,
    },
    /// Run a checker over a parameter grid and report violations.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum Object {
    /// The cycle indicator C_n.
    CycleIndex { n: usize },
    /// The class size c_n(m_1, ..., m_n).
    Coeff {
        n: u64,
        /// Comma-separated multiplicities m_1,m_2,...
        cycle_type: String,
    },
    /// The Meixner polynomial Q_n.
    MeixnerQ { n: usize },
    /// The auxiliary polynomial Q*_n.
    MeixnerQstar { n: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct VerifyArgs {
    /// Checker name, or `all`.
    checker: String,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    n_max: u64,
    /// Inclusive range of r, as A-B.
    #[arg(long, value_parser = parse_range)]
    r_range: Option<(u64, u64)>,
    /// Upper bound on r + np for polynomial checkers.
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, env = "CYCLOPADIC_THREADS")]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write reports here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Permit p = 2. Its reports are recorded but never fail the run.
    #[arg(long)]
    allow_p2: bool,
    /// Fill `elapsed_ms` in reports.
    #[arg(long)]
    timing: bool,
    /// Corrupt one target value, e.g. `coeff:3:1,1,0:1`.
    #[arg(long, hide = true)]
    mutate: Option<Mutation>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once('-').ok_or("expected A-B")?;
    let a = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Compute { object, format } => compute(object, format),
        Command::Verify(args) => verify(args),
    };
    ExitCode::from(code)
}

fn usage(msg: impl std::fmt::Display) -> u8 {
    eprintln!("cyclopadic: {msg}");
    EXIT_USAGE
}

fn compute(object: Object, format: Format) -> u8 {
    let text = match object {
        Object::CycleIndex { n } => {
            let c = cyclopadic::cycle_indicator(n);
            match format {
                Format::Json => serde_json::to_string(&c).expect("polynomial serializes"),
                Format::Text => c.to_string(),
            }
        }
        Object::Coeff { n, cycle_type } => {
            let parsed: Result<Vec<u64>, _> = cycle_type.split(',').map(|x| x.trim().parse::<u64>()).collect();
            let Ok(m) = parsed else {
                return usage(format!("malformed cycle type {cycle_type:?}"));
            };
            match CycleType::new(n, m).and_then(|ct| cyclopadic::coefficient(&ct)) {
                Ok(c) => c.to_string(),
                Err(e) => return usage(e),
            }
        }
        Object::MeixnerQ { n } => match cyclopadic::meixner_q(n) {
            Ok(q) => match format {
                Format::Json => serde_json::to_string(&q).expect("polynomial serializes"),
                Format::Text => q.to_string(),
            },
            Err(e) => return usage(e),
        },
        Object::MeixnerQstar { n } => {
            let q = cyclopadic::meixner_qstar(n);
            match format {
                Format::Json => serde_json::to_string(&q).expect("polynomial serializes"),
                Format::Text => q.to_string(),
            }
        }
    };
    println!("{text}");
    EXIT_OK
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn verify(args: VerifyArgs) -> u8 {
    let selection: Selection = match args.checker.parse() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let spec = SweepSpec {
        selection,
        primes: args.primes,
        n_max: args.n_max,
        r_range: args.r_range,
        degree_cap: args.degree_cap,
        seed: args.seed,
        trials: args.trials,
        allow_p2: args.allow_p2,
        timing: args.timing,
    };
    if let Err(e) = spec.validate() {
        return usage(e);
    }
    let threads = args.threads.unwrap_or_else(default_threads);
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => return usage(format!("{}: {e}", path.display())),
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let format = args.format;
    let emit = |w: &mut dyn Write, r: &CongruenceReport| -> io::Result<()> {
        match format {
            Format::Json => writeln!(w, "{}", serde_json::to_string(r).expect("report serializes"))?,
            Format::Text => writeln!(w, "{r}")?,
        }
        w.flush()
    };

    let exact = ExactTargets::new();
    let mutated;
    let targets: &dyn Targets = match args.mutate {
        Some(m) => {
            mutated = Mutated::new(exact, m);
            &mutated
        }
        None => &exact,
    };
    let result = run_sweep(&spec, targets, threads, |r| emit(&mut *out, r));
    drop(out);
    match result {
        Ok(summary) => {
            eprintln!(
                "cyclopadic: {} reports, {} instances, {} violations{}",
                summary.reports,
                summary.instances,
                summary.violations,
                if summary.advisory_violations > 0 {
                    format!(", {} advisory", summary.advisory_violations)
                } else {
                    String::new()
                }
            );
            if summary.exit_code() == 0 {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            }
        }
        Err(e) => usage(e),
    }
}
