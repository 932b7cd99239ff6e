use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lierin_cli::problem::read;
use lierin_cli::{parse_field, render, run, Command, Format, RunOptions};

/// Exact cohomology of Lie-Rinehart algebras.
#[derive(Parser)]
#[command(name = "lierin", version)]
struct Args {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,
    /// Problem file (JSON).
    file: PathBuf,
    /// Override the field of the file: `Q` or `F_p`.
    #[arg(long)]
    field: Option<String>,
    /// PBW degree cutoff for `env` (default 3).
    #[arg(long)]
    degree: Option<usize>,
    /// Last spectral-sequence page to report for `hs`.
    #[arg(long)]
    max_page: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = (|| {
        let field = args.field.as_deref().map(parse_field).transpose()?;
        let (text, _) = read(&args.file)?;
        let opts = RunOptions { field, degree: args.degree, max_page: args.max_page };
        run(args.command, &text, &opts)
    })();
    match outcome {
        Ok(report) => {
            print!("{}", render(&report, args.format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
