use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use apolar::commands::{
    cmd_gen, cmd_info, cmd_reduce, cmd_solve, cmd_verify, exit, Caps, GenArgs, GenKind, OutputFormat, RouteChoice,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "apolar", version, about = "Linear code equivalence through inverse systems of point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Largest |GL_k(F_q)| an exhaustive search may enumerate
    #[arg(long = "caps-gl", default_value_t = Caps::default().gl)]
    gl: u64,
    /// Largest number of monomial maps n!(q-1)^n a search may enumerate
    #[arg(long = "caps-words", default_value_t = Caps::default().words)]
    words: u64,
    /// Wall-clock budget for searches in milliseconds
    #[arg(long = "time-budget-ms")]
    time_ms: Option<u64>,
}

impl From<CapArgs> for Caps {
    fn from(c: CapArgs) -> Caps {
        Caps { gl: c.gl, words: c.words, time_ms: c.time_ms }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKindArg {
    Code,
    Pair,
    Selfdual,
    SelfdualPair,
    Blocking,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Doubling,
    Cubic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a code, an equivalent pair or a self-dual instance
    Gen {
        kind: GenKindArg,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        /// Number of distinct projective columns
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Extra columns proportional to existing ones
        #[arg(long, default_value_t = 0)]
        dup: usize,
        /// Extra zero columns
        #[arg(long, default_value_t = 0)]
        zero: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Store the planted witness in the pair file rather than a sidecar
        #[arg(long)]
        embed_witness: bool,
        /// Self-dual codes without projectivity or indecomposability
        #[arg(long)]
        any: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report Hilbert function, regularity and Gorenstein data of a code or point set
    Info {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Reduce a code pair to a pair of dual forms
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteArg,
        /// Largest number of coefficients of an inverse polynomial
        #[arg(long)]
        max_coeffs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide a code pair or a PI instance by exhaustive search
    Solve {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against its instance files
    Verify {
        certificate: PathBuf,
        /// One pair or polynomial file, or two code files
        #[arg(required = true, num_args = 1..=2)]
        instances: Vec<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
}

fn run(cli: Cli) -> Result<apolar::commands::Report, apolar::commands::CliError> {
    match cli.command {
        Command::Gen { kind, q, k, n, dup, zero, seed, embed_witness, any, out } => {
            let kind = match kind {
                GenKindArg::Code => GenKind::Code,
                GenKindArg::Pair => GenKind::Pair,
                GenKindArg::Selfdual => GenKind::SelfDual,
                GenKindArg::SelfdualPair => GenKind::SelfDualPair,
                GenKindArg::Blocking => GenKind::Blocking,
            };
            cmd_gen(&GenArgs { kind, q, n, k, dup, zero, seed, embed_witness, any, out })
        }
        Command::Info { file, format } => {
            let fmt = match format {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Text => OutputFormat::Text,
            };
            cmd_info(&file, fmt)
        }
        Command::Reduce { file, route, max_coeffs, out } => {
            let route = match route {
                RouteArg::Auto => RouteChoice::Auto,
                RouteArg::Doubling => RouteChoice::Doubling,
                RouteArg::Cubic => RouteChoice::Cubic,
            };
            cmd_reduce(&file, route, max_coeffs, out.as_deref())
        }
        Command::Solve { file, caps, out } => cmd_solve(&file, &caps.into(), out.as_deref()),
        Command::Verify { certificate, instances, caps } => cmd_verify(&certificate, &instances, &caps.into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(report) => {
            let _ = std::io::stdout().write_all(report.text.as_bytes());
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("apolar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
