//! `sglv`: command-line front end for the sgl-core verification engine.

use clap::{Parser, Subcommand, ValueEnum};
use sgl_core::catalog::{EntryParams, Mapping, DEFAULT_ALPHA, DEFAULT_LAMBDA};
use sgl_core::report::{to_json, to_text, ResidualReport, Tolerances};
use sgl_core::suite::{exit_status, parse_suites, run_suite, RunConfig, Source};
use sgl_core::GeomError;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 2;
const EXIT_STRUCTURAL: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "sglv", version, about = "Verify identities on indefinite Sasakian statistical manifolds and their SGL submanifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run check suites on a catalogue entry or a custom immersion.
    Run(RunArgs),
    /// List catalogue entries.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MappingArg {
    #[value(name = "basis_order")]
    BasisOrder,
    Interleaved,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Catalogue entry name.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    entry: Option<String>,
    /// Custom immersion config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated suites: axioms, frames, sgl, integrability, parallelism, geodesic, lemma, all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Tolerance for mixed pipelines and iff agreement.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Tolerance for pure-AD identities.
    #[arg(long, default_value_t = 1e-8)]
    tol_ad: f64,
    /// Per-check tolerance, `check_id=value`. Repeatable.
    #[arg(long = "tol-override", value_parser = parse_override)]
    tol_override: Vec<(String, f64)>,
    /// Statistical deformation λ in K = λ η⊗η⊗ν.
    #[arg(long, default_value_t = DEFAULT_LAMBDA, allow_negative_numbers = true)]
    lambda: f64,
    /// Parameter α of the 13-dimensional example.
    #[arg(long, default_value_t = DEFAULT_ALPHA, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "interleaved")]
    mapping: MappingArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (id, v) = s.split_once('=').ok_or("expected check_id=value")?;
    let v: f64 = v.trim().parse().map_err(|_| format!("not a number: {v}"))?;
    Ok((id.trim().to_string(), v))
}

enum Failure {
    Geom(GeomError),
    Io(String),
}

impl Failure {
    fn report(&self) -> ExitCode {
        match self {
            Failure::Geom(e) => {
                eprintln!("sglv: {e}");
                match e {
                    GeomError::Usage(_) | GeomError::Parse { .. } | GeomError::Dimension(_) => {
                        ExitCode::from(EXIT_USAGE)
                    }
                    _ => ExitCode::from(EXIT_STRUCTURAL),
                }
            }
            Failure::Io(msg) => {
                eprintln!("sglv: {msg}");
                ExitCode::from(EXIT_IO)
            }
        }
    }
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::Geom(e)
    }
}

fn config(args: &RunArgs) -> Result<RunConfig, Failure> {
    let source = match (&args.entry, &args.config) {
        (Some(name), _) => Source::Entry(name.clone()),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
            let name = path.file_stem().map_or("config".into(), |s| s.to_string_lossy().into_owned());
            Source::Config { name, text }
        }
        (None, None) => unreachable!("clap requires --entry or --config"),
    };
    let mut tols = Tolerances { mixed: args.tol, ad: args.tol_ad, ..Tolerances::default() };
    tols.overrides.extend(args.tol_override.iter().cloned());
    let mapping = match args.mapping {
        MappingArg::BasisOrder => Mapping::BasisOrder,
        MappingArg::Interleaved => Mapping::Interleaved,
    };
    Ok(RunConfig {
        source,
        suites: parse_suites(&args.suite)?,
        samples: args.samples,
        seed: args.seed,
        tols,
        params: EntryParams { lambda: args.lambda, alpha: args.alpha, mapping },
    })
}

fn emit(reports: &[ResidualReport], format: Format, path: Option<&Path>) -> Result<(), Failure> {
    let mut body = match format {
        Format::Json => to_json(reports),
        Format::Text => to_text(reports),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(args: RunArgs) -> Result<ExitCode, Failure> {
    let cfg = config(&args)?;
    let reports = if args.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build()
            .map_err(|e| GeomError::Usage(format!("thread pool: {e}")))?;
        pool.install(|| run_suite(&cfg))?
    } else {
        run_suite(&cfg)?
    };
    emit(&reports, args.format, args.output.as_deref())?;
    Ok(ExitCode::from(exit_status(&reports) as u8))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match cli.cmd {
        Cmd::Run(args) => run(args).unwrap_or_else(|f| f.report()),
        Cmd::List => {
            for name in sgl_core::catalog::ENTRY_NAMES {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
    }
}
