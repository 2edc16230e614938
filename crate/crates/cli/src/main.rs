use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use socdiv::kclip::RemovalMode;
use socdiv::stats::DEFAULT_RESAMPLES;
use socdiv_cli::dataset::ReputationSource;
use socdiv_cli::io::write_err;
use socdiv_cli::generate::{cmd_generate, GenerateArgs};
use socdiv_cli::matching::{cmd_match, summary_text, MatchArgs};
use socdiv_cli::metrics::{cmd_metrics, MetricsArgs};
use socdiv_cli::regress::{cmd_regress, RegressArgs};
use socdiv_cli::reputation::{cmd_reputation, ReputationArgs};
use socdiv_cli::{Format, Result};

/// Structural diversity of follower neighborhoods and its relation to popularity.
#[derive(Debug, Parser)]
#[command(name = "socdiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-ego indegree, weak, strong, k-clip and bridged k-clip diversity.
    Metrics(MetricsCmd),
    /// Social reputation index from popularity counts.
    Reputation(ReputationCmd),
    /// OLS of a reputation measure on diversity metrics (JSON output).
    Regress(RegressCmd),
    /// Propensity-matched max-diversity experiment (JSON output).
    Match(MatchCmd),
    /// Write a synthetic dataset from a JSON spec.
    Generate(GenerateCmd),
}

#[derive(Debug, Args)]
struct MetricsCmd {
    /// Tab-separated edge list, one `follower followee` pair per line.
    #[arg(long)]
    edges: PathBuf,
    /// Ego ids, one per line; defaults to every node in the graph.
    #[arg(long)]
    egos: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Additional k values, comma separated.
    #[arg(long, value_delimiter = ',')]
    k_sweep: Vec<usize>,
    #[arg(long, default_value = "single")]
    mode: RemovalMode,
    /// Linked-node count above which adaptive mode removes in bulk.
    #[arg(long, default_value_t = 1000)]
    multi_removal_threshold: usize,
    #[arg(long, default_value_t = 0.2)]
    jaccard_threshold: f64,
    /// Egos with more followers get no bridged value.
    #[arg(long, default_value_t = 10_000)]
    max_followers: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReputationCmd {
    #[arg(long)]
    popularity: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Output of `socdiv metrics` (CSV).
    #[arg(long)]
    metrics: PathBuf,
    /// Output of `socdiv reputation` (CSV).
    #[arg(long, conflicts_with = "popularity")]
    reputation: Option<PathBuf>,
    /// Popularity counts; the reputation index is computed from them.
    #[arg(long)]
    popularity: Option<PathBuf>,
    /// Per-user covariates CSV.
    #[arg(long)]
    covariates: Option<PathBuf>,
}

impl Inputs {
    fn source(&self) -> Result<ReputationSource> {
        ReputationSource::from_flags(self.reputation.as_deref(), self.popularity.as_deref())
    }
}

#[derive(Debug, Args)]
struct RegressCmd {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, default_value = "reputation_index")]
    response: String,
    /// Predictor columns, comma separated; defaults to `kclip_<k>`.
    #[arg(long, value_delimiter = ',')]
    predictors: Vec<String>,
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Variables to log10(x+1) in addition to count columns.
    #[arg(long, value_delimiter = ',')]
    log_vars: Vec<String>,
    /// Variables to keep on their raw scale.
    #[arg(long, value_delimiter = ',')]
    raw_vars: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatchCmd {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Covariate columns, comma separated; defaults to all covariate-file columns.
    #[arg(long = "covariate", value_delimiter = ',')]
    covariate_names: Option<Vec<String>>,
    /// Covariates to log10(x+1) before the propensity fit.
    #[arg(long, value_delimiter = ',', default_value = "answers")]
    log_vars: Vec<String>,
    #[arg(long, default_value_t = 2)]
    min_indegree: usize,
    /// Maximum propensity distance for a pair.
    #[arg(long)]
    caliper: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    resamples: usize,
    /// Seed for the bootstrap; derived from the configuration when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateCmd {
    /// JSON spec with `kind` = ego | population | scale.
    #[arg(long)]
    spec: PathBuf,
    /// Directory for the generated files.
    #[arg(long)]
    out: PathBuf,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Metrics(c) => {
            cmd_metrics(&MetricsArgs {
                edges: c.edges,
                egos: c.egos,
                k: c.k,
                k_sweep: c.k_sweep,
                mode: c.mode,
                adaptive_threshold: c.multi_removal_threshold,
                jaccard_threshold: c.jaccard_threshold,
                max_followers: c.max_followers,
                format: c.format,
                jobs: c.jobs,
                out: c.out,
            })?;
        }
        Command::Reputation(c) => {
            cmd_reputation(&ReputationArgs {
                popularity: c.popularity,
                format: c.format,
                out: c.out,
            })?;
        }
        Command::Regress(c) => {
            let predictors = if c.predictors.is_empty() { vec![format!("kclip_{}", c.k)] } else { c.predictors };
            cmd_regress(&RegressArgs {
                metrics: c.inputs.metrics.clone(),
                reputation: c.inputs.source()?,
                covariates: c.inputs.covariates,
                response: c.response,
                predictors,
                log_vars: c.log_vars,
                raw_vars: c.raw_vars,
                out: c.out,
            })?;
        }
        Command::Match(c) => {
            let report = cmd_match(&MatchArgs {
                metrics: c.inputs.metrics.clone(),
                reputation: c.inputs.source()?,
                covariates: c.inputs.covariates,
                k: c.k,
                covariate_names: c.covariate_names,
                log_vars: c.log_vars,
                min_indegree: c.min_indegree,
                caliper: c.caliper,
                resamples: c.resamples,
                seed: c.seed,
                out: c.out,
            })?;
            eprint!("{}", summary_text(&report));
        }
        Command::Generate(c) => {
            let manifest = cmd_generate(&GenerateArgs {
                spec: c.spec,
                out_dir: c.out,
            })?;
            let text = serde_json::to_string_pretty(&manifest).expect("plain data");
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(write_err(None))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("socdiv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
