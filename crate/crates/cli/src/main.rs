//! `divcheck`: run a claim checker over a range and write the records.
//!
//! Exit status: 0 when every record passes, 1 when any fails, 2 when some are
//! inconclusive and none fail, 3 on usage or runtime errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use divcheck::claims::{run_claim, ClaimId};
use divcheck::rational::parse_rational;
use divcheck::report::{
    emit, emit_to_path, Format, RangeSpec, Report, SampleMode, DEFAULT_MAX_DENOMINATOR, DEFAULT_SEED,
};
use divcheck::{ball::DEFAULT_BITS, PrecisionPolicy};

const EXIT_ERROR: u8 = 3;
/// Integers sampled exhaustively by the `standard` mode.
const STANDARD_INTEGER_CAP: u64 = 10_000;

#[derive(Parser)]
#[command(
    name = "divcheck",
    version,
    about = "Certified checks of explicit divisor-problem estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one claim over a range of x.
    Verify(VerifyArgs),
    /// Print the claim identifiers.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    AllIntegers,
    Geometric,
    RandomRational,
    /// Integers up to 10^4, a geometric grid and random rationals.
    Standard,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Parser)]
struct VerifyArgs {
    claim: String,
    /// Lower end; integer, fraction `p/q` or decimal.
    #[arg(long, default_value = "1")]
    x_min: String,
    #[arg(long)]
    x_max: String,
    #[arg(long, value_enum, default_value = "all-integers")]
    mode: Mode,
    /// Sample count for the geometric and random modes.
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_DENOMINATOR)]
    max_denominator: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BITS)]
    precision_bits: u32,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
}

fn range_of(args: &VerifyArgs) -> divcheck::Result<RangeSpec> {
    let x_min = parse_rational(&args.x_min)?;
    let x_max = parse_rational(&args.x_max)?;
    let mode = match args.mode {
        Mode::AllIntegers => SampleMode::AllIntegers,
        Mode::Geometric => SampleMode::Geometric { count: args.count },
        Mode::RandomRational => SampleMode::RandomRational {
            count: args.count,
            max_denominator: args.max_denominator,
            seed: args.seed,
        },
        Mode::Standard => SampleMode::Standard {
            integer_cap: STANDARD_INTEGER_CAP,
            geometric_count: args.count,
            random_count: args.count,
            max_denominator: args.max_denominator,
            seed: args.seed,
        },
    };
    RangeSpec::new(x_min, x_max, mode)
}

fn verify(args: &VerifyArgs) -> divcheck::Result<Report> {
    let claim: ClaimId = args.claim.parse()?;
    let range = range_of(args)?;
    let policy = PrecisionPolicy::new(args.precision_bits, PrecisionPolicy::default().max_retries)?;
    let report = run_claim(claim, &range, policy)?;
    let format = match args.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    match &args.out {
        Some(path) => emit_to_path(&report, format, path)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit(&report, format, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match cli.command {
        Command::List => {
            for c in ClaimId::all() {
                println!("{c}");
            }
            ExitCode::SUCCESS
        }
        Command::Verify(args) => match verify(&args) {
            Ok(report) => {
                for note in &report.notes {
                    eprintln!("note: {note}");
                }
                let s = report.summary();
                eprintln!(
                    "{}: {} pass, {} fail, {} inconclusive",
                    report.claim_id, s.pass, s.fail, s.inconclusive
                );
                ExitCode::from(report.exit_code() as u8)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_ERROR)
            }
        },
    }
}
