use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spzeta::{run, Axis, BoundsKind, CliError, Command, JobSpec, OutputFormat, DEFAULT_BITS};

/// Evaluation, zero analysis and Weyl-period derivation for the Sp(4) zeta function.
#[derive(Parser)]
#[command(name = "spzeta", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Evaluate a function at one point.
    Eval(Flags),
    /// Scan the critical line and refine sign changes.
    Zeros(Flags),
    /// Compare rectangle and critical-line zero counts up to a height.
    Census(Flags),
    /// Argument-principle zero count in a rectangle.
    RectCount(Flags),
    /// Symbolic period, normalization and functional equation.
    Derive(Flags),
    /// Numerical search for the reflection constant.
    FeSearch(Flags),
    /// Grid checks of the region inequalities and remainder bounds.
    VerifyBounds(Flags),
    /// Sample a function along an axis or over a grid.
    PlotData(Flags),
    /// Run a saved job file.
    Replay { job: PathBuf },
}

#[derive(Args)]
struct Flags {
    #[arg(long = "fn")]
    function: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// re_min,re_max,im_min,im_max (census: re_min,re_max)
    #[arg(long, allow_hyphen_values = true)]
    rect: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    #[arg(long)]
    step: Option<String>,
    #[arg(long)]
    height: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    axis: Option<Axis>,
    #[arg(long, value_enum)]
    kind: Option<BoundsKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_BITS)]
    bits: u32,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the job description here before running it.
    #[arg(long)]
    save_job: Option<PathBuf>,
}

impl Flags {
    fn into_job(self, command: Command) -> (JobSpec, Option<PathBuf>) {
        let job = JobSpec {
            function: self.function,
            s: self.s,
            rect: self.rect,
            range: self.range,
            sigma: self.sigma,
            step: self.step,
            height: self.height,
            samples: self.samples,
            axis: self.axis,
            kind: self.kind,
            n: self.n,
            seed: self.seed,
            bits: self.bits,
            output: if self.csv {
                OutputFormat::Csv
            } else {
                OutputFormat::Json
            },
            out_path: self.out,
            ..JobSpec::new(command)
        };
        (job, self.save_job)
    }
}

fn job_from(sub: Sub) -> Result<(JobSpec, Option<PathBuf>), CliError> {
    let (command, flags) = match sub {
        Sub::Replay { job } => {
            let text = std::fs::read_to_string(&job)?;
            let spec = JobSpec::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", job.display())))?;
            return Ok((spec, None));
        }
        Sub::Eval(f) => (Command::Eval, f),
        Sub::Zeros(f) => (Command::Zeros, f),
        Sub::Census(f) => (Command::Census, f),
        Sub::RectCount(f) => (Command::RectCount, f),
        Sub::Derive(f) => (Command::Derive, f),
        Sub::FeSearch(f) => (Command::FeSearch, f),
        Sub::VerifyBounds(f) => (Command::VerifyBounds, f),
        Sub::PlotData(f) => (Command::PlotData, f),
    };
    Ok(flags.into_job(command))
}

fn execute(sub: Sub) -> Result<i32, CliError> {
    let (job, save) = job_from(sub)?;
    if let Some(path) = save {
        std::fs::write(path, job.to_json() + "\n")?;
    }
    let report = run(&job)?;
    match &job.out_path {
        Some(path) => std::fs::write(path, &report.body)?,
        None => print!("{}", report.body),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
