use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use tyclass_cli::{run, CliError, Config, ErrorObject, JobSpec, ModelKind, OutputFormat, Settings, Task};

/// Exact motivic Hirzebruch and CSM classes of degeneracy loci and orbit closures.
#[derive(Parser, Debug)]
#[command(name = "tyclass", version)]
struct Args {
    /// JSON job file (`-` for stdin); flags override its fields.
    #[arg(long)]
    job: Option<PathBuf>,
    #[arg(long, value_enum)]
    task: Option<Task>,
    /// B or C
    #[arg(long)]
    family: Option<String>,
    /// lg, og or flag
    #[arg(long)]
    space: Option<String>,
    /// O or Sp
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    p: Option<i64>,
    /// Comma-separated, e.g. `3,1,-2`.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    /// One-line notation of the involution, e.g. `3,4,1,2`.
    #[arg(long)]
    z: Option<String>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long)]
    truncation: Option<u32>,
    /// Evaluate at this value of y (`-1`, `1/2`, ...).
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// TOML config file; defaults to $TYCLASS_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for cached Q-function expansions; defaults to $TYCLASS_CACHE_DIR.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    /// Report wall-clock timings (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    let s = s.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("bad entry {x:?} in --{what}"))))
        .collect()
}

fn read_job(path: &PathBuf) -> Result<JobSpec, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("job file: {e}")))
}

fn prepare(args: &Args) -> Result<(JobSpec, Settings), CliError> {
    let cfg = Config::load(args.config.as_deref(), |k| std::env::var(k).ok())?;
    let mut job = JobSpec { truncation: cfg.truncation, output: cfg.output, ..Default::default() };
    if let Some(path) = &args.job {
        job.merge(read_job(path)?);
    }
    job.merge(JobSpec {
        task: args.task,
        family: args.family.clone(),
        space: args.space.clone(),
        group: args.group.clone(),
        n: args.n,
        p: args.p,
        q: args.q.as_deref().map(|s| list(s, "q")).transpose()?,
        lambda: args.lambda.as_deref().map(|s| list(s, "lambda")).transpose()?,
        z: args.z.as_deref().map(|s| list(s, "z")).transpose()?,
        model: args.model,
        truncation: args.truncation,
        y_eval: args.y.clone(),
        output: args.output,
    });
    let cache_dir = if args.no_cache || cfg.no_cache { None } else { args.cache_dir.clone().or(cfg.cache_dir) };
    Ok((job.normalize()?, Settings { cache_dir, timings: args.timings }))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let wants_json = args.output == Some(OutputFormat::Json);
    let result = prepare(&args).and_then(|(job, settings)| {
        let format = job.output.unwrap_or_default();
        run(job, &settings).map(|doc| (doc, format))
    });
    match result {
        Ok((doc, OutputFormat::Json)) => emit(&doc.to_json()),
        Ok((doc, OutputFormat::Text)) => emit(&doc.to_text()),
        Err(e) => {
            if wants_json {
                let obj = serde_json::json!({ "error": ErrorObject::from(&e) });
                emit(&(serde_json::to_string_pretty(&obj).expect("error objects serialize") + "\n"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> ExitCode {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
        _ => ExitCode::SUCCESS,
    }
}
