use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use bentcode::commands::{self, CommandError};
use bentcode::jobspec::{parse_terms, Coeff, FamilyTag, FunctionSpec};
use bentcode::report::Report;
use bentcode_core::codes::SetKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Weakly regular bent functions and the trace codes built from them.
#[derive(Parser)]
#[command(name = "bentcode", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Also write the report as JSON lines to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct FnArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: u32,
    #[arg(long, value_enum)]
    family: FamilyTag,
    /// Comma-separated `i:c` terms; `c` is `0`, `gK` or a residue.
    #[arg(long, num_args = 0..=1, default_value = "", default_missing_value = "")]
    coeffs: String,
    /// Exponent `d` for `mono`.
    #[arg(long)]
    exp: Option<u64>,
    /// Divisor `e` of `p^k + 1` for `dillon`.
    #[arg(long)]
    e: Option<u64>,
    /// Short-trace coefficient for `dillon`.
    #[arg(long)]
    delta: Option<String>,
    /// Exponent parameter `i` for `cm`.
    #[arg(long)]
    i: Option<u32>,
}

impl FnArgs {
    fn spec(&self) -> Result<FunctionSpec, CommandError> {
        let mut spec = FunctionSpec::new(self.p, self.m, self.family).with_terms(parse_terms(&self.coeffs)?);
        spec.exponent = self.exp;
        spec.e = self.e;
        spec.delta = self.delta.as_deref().map(str::parse::<Coeff>).transpose()?;
        spec.i = self.i;
        Ok(spec)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    Zero,
    Sq,
    Nsq,
}

impl From<SetArg> for SetKind {
    fn from(s: SetArg) -> SetKind {
        match s {
            SetArg::Zero => SetKind::Zero,
            SetArg::Sq => SetKind::Sq,
            SetArg::Nsq => SetKind::Nsq,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Walsh spectrum, sign, dual and RF membership.
    Analyze(FnArgs),
    /// Build one code and compare it with its closed form.
    Code {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, value_enum)]
        set: SetArg,
        #[arg(long)]
        punctured: bool,
    },
    /// Check the counting and character-sum identities by enumeration.
    Lemmas(FnArgs),
    /// Replay the worked examples.
    VerifyPaper {
        #[arg(long)]
        id: Option<String>,
    },
    /// Sweep a grid of (p, m, family) with default parameters.
    Scan {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u32>,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        family: Vec<FamilyTag>,
    },
}

fn run(cli: &Cli) -> Result<Report, CommandError> {
    let pool = bentcode::parallel::pool(cli.workers).map_err(|e| CommandError::Invalid(e.to_string()))?;
    match &cli.cmd {
        Cmd::Analyze(f) => commands::analyze(&pool, &f.spec()?),
        Cmd::Code { f, set, punctured } => commands::code(&pool, &f.spec()?, (*set).into(), *punctured),
        Cmd::Lemmas(f) => commands::lemmas(&pool, &f.spec()?),
        Cmd::VerifyPaper { id } => commands::verify_paper(&pool, id.as_deref()),
        Cmd::Scan { p, m, family } => commands::scan(&pool, p, m, family),
    }
}

/// Runs a parsed command line, writing the text report to `out` and
/// diagnostics to `err`; returns the exit code.
fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let start = Instant::now();
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code() as u8;
        }
    };
    let _ = write!(out, "{}", report.to_text());
    if let Some(path) = &cli.json {
        let written = std::fs::write(path, report.to_json_lines())
            .with_context(|| format!("writing {}", path.display()));
        if let Err(e) = written {
            let _ = writeln!(err, "error: {e:#}");
            return 2;
        }
    }
    let _ = writeln!(err, "elapsed {:.3}s", start.elapsed().as_secs_f64());
    report.exit_code() as u8
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(execute(&cli, &mut std::io::stdout(), &mut std::io::stderr()))
}
