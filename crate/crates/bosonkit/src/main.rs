use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bosonkit::commands::{self, CliResult};
use bosonkit::{Format, OutputRecord, Precision};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Normal ordering, generalized Stirling and Bell numbers, and their series,
/// generating functions and moment measures.
#[derive(Debug, Parser)]
#[command(name = "bosonkit", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PrecisionArgs {
    /// Working precision in bits for series sums.
    #[arg(long, env = "BOSONKIT_BITS", default_value_t = 256)]
    bits: u32,
    /// Target absolute error (series) or relative tolerance (moments).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl PrecisionArgs {
    fn precision(&self) -> Precision {
        Precision { bits: self.bits, tol: self.tol }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Row S_{r,s}(n, k) for k = s..ns.
    Stirling {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: u32,
    },
    /// B_{r,s}(0..=max).
    Bell {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        max: u32,
    },
    /// Certified series value of B_{r,s}(n).
    Series {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Run a verification suite; exits 3 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Dobinski,
    Egf,
    Norm,
    Moments,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, default_value_t = 5)]
    max: u32,
    #[arg(long, default_value_t = 5)]
    order: u32,
    /// Use the +1/(r-1) exponent in the egf and norm suites.
    #[arg(long)]
    printed_sign: bool,
    /// Use the general Dobiński series without the 1/k! factor.
    #[arg(long)]
    printed_b5: bool,
    #[command(flatten)]
    precision: PrecisionArgs,
}

fn require_r(args: &VerifyArgs) -> CliResult<u32> {
    args.r.ok_or_else(|| commands::CliError::Usage("--r is required for this suite".into()))
}

fn run(command: &Command) -> CliResult<OutputRecord> {
    match command {
        Command::Stirling { r, s, n } => commands::stirling(*r, *s, *n),
        Command::Bell { r, s, max } => commands::bell(*r, *s, *max),
        Command::Series { r, s, n, precision } => commands::series(*r, *s, *n, &precision.precision()),
        Command::Verify(args) => {
            let precision = args.precision.precision();
            match args.suite {
                Suite::Dobinski => {
                    commands::verify_dobinski(require_r(args)?, args.s, args.max, &precision, args.printed_b5)
                }
                Suite::Egf => commands::verify_egf(require_r(args)?, args.order, args.printed_sign),
                Suite::Norm => commands::verify_norm(require_r(args)?, args.order, args.printed_sign),
                Suite::Moments => commands::verify_moments(require_r(args)?, args.s, args.max, precision.tol),
                Suite::All => commands::verify_all(&precision),
            }
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = run(&cli.command).and_then(|record| {
        emit(&record.render(cli.format), cli.out.as_ref())?;
        Ok(record.passed())
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("bosonkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
