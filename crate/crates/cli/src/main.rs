use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sk1lab::jobs::{default_cache_dir, render, run, run_cached, Command, Format, JobSpec, Outcome};
use sk1lab::{Error, Result};

/// Exact SK₁ of p-adic group rings, with verification suites.
#[derive(Parser)]
#[command(name = "sk1lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Cache directory (default: $SK1LAB_CACHE_DIR, $XDG_CACHE_HOME/sk1lab or ~/.cache/sk1lab).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Bypass the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_parser = parse_format, default_value = "json")]
    format: Format,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    match s {
        "json" => Ok(Format::Json),
        "text" => Ok(Format::Text),
        _ => Err(format!("unknown format `{s}` (json or text)")),
    }
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Group name (e.g. Q8, D8, C4xC2, S3) or inline JSON descriptor.
    #[arg(long)]
    group: Option<String>,
    /// Ring model: Zp, Witt, PowerSeries, Laurent, InverseVar, or JSON.
    #[arg(long)]
    ring: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    /// Precision N (coefficients modulo pᴺ).
    #[arg(long = "N")]
    n: Option<u32>,
    /// Degree window D of series models.
    #[arg(long = "D")]
    d: Option<usize>,
    /// Residue degree f of the Witt base.
    #[arg(long)]
    f: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// SK₁(R[G]) from the orbit formula.
    Sk1(Common),
    /// H₂(G, ℤ), its commuting-pair part and the quotient.
    H2(Common),
    /// Ψ-orbits of p-regular classes.
    Orbits(Common),
    /// Randomized group-ring lab checks.
    Logcheck {
        #[command(flatten)]
        common: Common,
        /// all, exp-log, trace, integrality, refine, xi, xi-log.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Frobenius coinvariants R/(1−F)R.
    Coinv(Common),
    /// Covariants of H̄₂(G, R[G_r]) against the orbit formula.
    Covariants(Common),
    /// SK₁ comparison for a pair of ring models.
    CompareRings {
        #[command(flatten)]
        common: Common,
        /// W-PowerSeries, Winf-Laurent or PowerSeries-Laurent.
        #[arg(long)]
        pair: String,
    },
    /// Triviality certificates, checked against the engine when --p is given.
    Certify(Common),
    /// Sweep the group library over an order range.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        min_order: usize,
        #[arg(long, default_value_t = 16)]
        max_order: usize,
        #[arg(long)]
        p_groups_only: bool,
    },
    /// Run a JSON array of job specs.
    Batch { file: PathBuf },
}

fn job(command: Command, c: Common) -> JobSpec {
    let mut j = JobSpec::new(command);
    j.group = c.group;
    j.ring = c.ring;
    j.p = c.p;
    j.n = c.n;
    j.d = c.d;
    j.f = c.f;
    j.seed = c.seed;
    j.trials = c.trials;
    j
}

fn jobs_of(cmd: Cmd) -> Result<Vec<JobSpec>> {
    Ok(vec![match cmd {
        Cmd::Sk1(c) => job(Command::Sk1, c),
        Cmd::H2(c) => job(Command::H2, c),
        Cmd::Orbits(c) => job(Command::Orbits, c),
        Cmd::Coinv(c) => job(Command::Coinv, c),
        Cmd::Covariants(c) => job(Command::Covariants, c),
        Cmd::Certify(c) => job(Command::Certify, c),
        Cmd::Logcheck { common, suite } => {
            let mut j = job(Command::Logcheck, common);
            j.suite = Some(suite);
            j
        }
        Cmd::CompareRings { common, pair } => {
            let mut j = job(Command::CompareRings, common);
            j.pair = Some(pair);
            j
        }
        Cmd::Scan { common, min_order, max_order, p_groups_only } => {
            let mut j = job(Command::Scan, common);
            j.min_order = Some(min_order);
            j.max_order = Some(max_order);
            j.p_groups_only = p_groups_only;
            j
        }
        Cmd::Batch { file } => {
            let text = std::fs::read_to_string(&file)?;
            return serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", file.display())));
        }
    }])
}

fn execute(cli: Cli) -> Result<(Vec<Outcome>, Vec<Format>)> {
    let cache = if cli.no_cache { None } else { cli.cache_dir.clone().or_else(default_cache_dir) };
    let batch = matches!(cli.command, Cmd::Batch { .. });
    let mut jobs = jobs_of(cli.command)?;
    if !batch {
        jobs[0].format = cli.format;
    }
    let mut outs = Vec::with_capacity(jobs.len());
    let mut formats = Vec::with_capacity(jobs.len());
    for j in &jobs {
        let out = match &cache {
            Some(dir) => run_cached(j, dir).map(|(o, _)| o)?,
            None => run(j)?,
        };
        outs.push(out);
        formats.push(j.format);
    }
    Ok((outs, formats))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let batch = matches!(cli.command, Cmd::Batch { .. });
    match execute(cli) {
        Ok((outs, formats)) => {
            if batch {
                let docs: Vec<_> = outs.iter().map(|o| o.report.clone()).collect();
                emit(&serde_json::to_string_pretty(&docs).expect("serializable"));
            } else {
                emit(&render(&outs[0], formats[0]));
            }
            if outs.iter().all(|o| o.verified) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_verification() { 2 } else { 1 })
        }
    }
}
