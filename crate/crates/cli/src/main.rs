use std::path::PathBuf;
use std::process::ExitCode;

use certeig::error::Error;
use certeig::numerics::{parse_decimal, DEFAULT_BITS, MIN_BITS};
use certeig_cli::report::OutputFormat;
use certeig_cli::{render_text, run, write_svg, Mode, RunConfig};
use clap::Parser;

/// Certified isolating intervals for the real eigenvalues of a square matrix.
#[derive(Parser, Debug)]
#[command(name = "certeig", version)]
struct Args {
    /// Matrix file: JSON {"matrix": [[...]]} or CSV.
    input: PathBuf,

    /// Arithmetic backend.
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,

    /// Float significand bits (float mode only).
    #[arg(long, default_value_t = DEFAULT_BITS, value_parser = clap::value_parser!(u32).range(MIN_BITS as i64..))]
    bits: u32,

    /// Target width of the final intervals, as a decimal literal.
    #[arg(long, default_value = "1e-7")]
    epsilon: String,

    /// Also write an SVG picture of disks and intervals here.
    #[arg(long)]
    svg: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Worker threads for disk and interval certification.
    #[arg(long)]
    jobs: Option<usize>,

    /// Certify column disks too and keep only intervals inside both unions.
    #[arg(long)]
    column_disks: bool,
}

fn execute(args: Args) -> Result<(), Error> {
    let epsilon = parse_decimal(&args.epsilon)?;
    let config = RunConfig {
        input: args.input,
        mode: args.mode,
        bits: args.bits,
        epsilon,
        format: args.format,
        svg: args.svg,
        jobs: args.jobs,
        column_disks: args.column_disks,
    };
    if let Some(jobs) = config.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Error::Input(format!("cannot start {jobs} worker threads: {e}")))?;
    }
    let report = run(&config)?;
    match config.format {
        OutputFormat::Json => {
            let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Internal(e.to_string()))?;
            println!("{text}");
        }
        OutputFormat::Text => print!("{}", render_text(&report)),
    }
    if let Some(path) = &config.svg {
        write_svg(&report, path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
