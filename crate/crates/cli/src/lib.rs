//! Command-line front end: `validate`, `metrics`, `trace`, `experiment` and
//! `logic-table`.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid or unreadable spec,
//! 3 runtime failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use exo_core::dsl::{self, ParseDiagnostic, SpecDocument};
use exo_core::harness::{self, ExperimentConfig, HarnessError};
use exo_core::logic::render_situation_table;
use exo_core::metrics::{stability_report, ObjectiveSets};
use exo_core::{Exact, ExactStabilityReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "exo", version, about = "Simulate and measure exobehavior universes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a spec file and print its diagnostics.
    Validate { file: PathBuf },
    /// Stability report of an agent's goal-directed table.
    Metrics {
        file: PathBuf,
        #[arg(long)]
        agent: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Candidate table of a learning agent.
        #[arg(long, default_value_t = 0)]
        candidate: usize,
    },
    /// Per-step records of one run.
    Trace {
        file: PathBuf,
        #[arg(long)]
        agent: String,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Batch persistence experiment over every agent in the file.
    Experiment {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
        #[arg(long)]
        max_steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Truth values of the persistence postulate in the eight situations.
    LogicTable,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn runtime(message: impl Into<String>) -> Self {
        Failure { code: EXIT_RUNTIME, message: message.into() }
    }
}

fn diagnostics(path: &Path, diags: &[ParseDiagnostic]) -> String {
    diags.iter().map(|d| format!("{}:{d}\n", path.display())).collect()
}

fn load(path: &Path) -> Result<SpecDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_SPEC, message: format!("{}: {e}\n", path.display()) })?;
    dsl::parse(&text).map_err(|d| Failure { code: EXIT_SPEC, message: diagnostics(path, &d) })
}

fn validate(path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_SPEC, message: format!("{}: {e}\n", path.display()) })?;
    let diags = dsl::check(&text);
    let _ = write!(out, "{}", diagnostics(path, &diags));
    if diags.iter().any(ParseDiagnostic::is_error) {
        return Ok(EXIT_SPEC);
    }
    let doc = dsl::parse(&text).map_err(|d| Failure { code: EXIT_SPEC, message: diagnostics(path, &d) })?;
    let _ = writeln!(out, "ok: {} universes, {} agents", doc.universes.len(), doc.agents.len());
    Ok(EXIT_OK)
}

fn metrics(path: &Path, agent: &str, candidate: usize) -> Result<ExactStabilityReport, Failure> {
    let doc = load(path)?;
    let a = doc.agent(agent).ok_or_else(|| Failure::runtime(format!("no agent named `{agent}`\n")))?;
    let u = doc.universe_of(a).ok_or_else(|| Failure::runtime(format!("agent `{agent}` has no universe\n")))?;
    let tables = a.alpha_beta_tables().map_err(|e| Failure::runtime(format!("{e}\n")))?;
    let (_, table) = tables
        .get(candidate)
        .ok_or_else(|| Failure::runtime(format!("agent `{agent}` has no candidate {candidate}\n")))?;
    let objectives = ObjectiveSets::from_table(table, &a.representation, u);
    Ok(stability_report::<Exact>(table, &a.representation, &objectives, u))
}

fn trace(path: &Path, agent: &str, steps: u64, seed: u64, out: &mut dyn Write) -> Result<(), Failure> {
    let doc = load(path)?;
    let a = doc.agent(agent).ok_or_else(|| Failure::runtime(format!("no agent named `{agent}`\n")))?;
    let u = doc.universe_of(a).ok_or_else(|| Failure::runtime(format!("agent `{agent}` has no universe\n")))?;
    let (traj, records) = harness::trace(u, a, steps, seed).map_err(|e| Failure::runtime(format!("{e}\n")))?;
    let _ = writeln!(out, "t\tstate\tformula\tgenerated\tact\tnext\tenergy");
    for r in &records {
        let formula = r.formula.as_ref().map_or("-", |f| f.as_str());
        let generated = r
            .generated
            .as_ref()
            .map_or_else(|| "-".to_owned(), |g| g.iter().map(|a| a.token.as_str()).collect::<Vec<_>>().join(" "));
        let _ = writeln!(
            out,
            "{}\t{}\t{formula}\t{generated}\t{}\t{}\t{}",
            r.t,
            u.state_name(r.state),
            u.act_name(r.act),
            u.state_name(r.next),
            r.energy
        );
    }
    let _ = writeln!(out, "# persistence {} {}", traj.persistence(), traj.terminal_reason.as_str());
    Ok(())
}

fn experiment(cfg: ExperimentConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let path = cfg.spec_path.clone();
    let result = harness::run_experiment(&cfg).map_err(|e| match e {
        HarnessError::SpecInvalid(d) => Failure { code: EXIT_SPEC, message: diagnostics(&path, &d) },
        HarnessError::Io { path: p, source } if p == path => {
            Failure { code: EXIT_SPEC, message: format!("{}: {source}\n", p.display()) }
        }
        other => Failure::runtime(format!("{other}\n")),
    })?;
    let _ = write!(out, "{}", result.summary_text());
    Ok(())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Validate { file } => validate(&file, out),
        Command::Metrics { file, agent, format, candidate } => metrics(&file, &agent, candidate).map(|report| {
            match format {
                Format::Text => {
                    let _ = write!(out, "{}", report.to_text());
                }
                Format::Json => {
                    let _ = writeln!(out, "{:#}", report.to_json());
                }
            }
            EXIT_OK
        }),
        Command::Trace { file, agent, steps, seed } => trace(&file, &agent, steps, seed, out).map(|_| EXIT_OK),
        Command::Experiment { file, runs, max_steps, seed, out: csv } => {
            let cfg = ExperimentConfig {
                spec_path: file,
                runs_per_agent: runs,
                max_steps,
                master_seed: seed,
                output: Some(csv),
            };
            experiment(cfg, out).map(|_| EXIT_OK)
        }
        Command::LogicTable => {
            let _ = write!(out, "{}", render_situation_table());
            Ok(EXIT_OK)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = write!(err, "{}", f.message);
            f.code
        }
    }
}

/// [`run`] against the process's standard streams.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}
