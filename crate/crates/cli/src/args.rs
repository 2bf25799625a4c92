use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "stlrob", version, about = "Quantitative STL robustness: evaluate, monitor and score traces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula and print its canonical form, horizon and signals.
    Parse {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Offline robustness of a trace at one anchor or at every valid anchor.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sem: SemanticsArgs,
        #[command(flatten)]
        input: TraceArgs,
        /// Anchor step.
        #[arg(long = "t", default_value_t = 0, conflicts_with = "all")]
        t: usize,
        /// Evaluate at every anchor t with t + horizon < trace length.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        output: OutputFormat,
    },
    /// Stream the trace through an online monitor, printing `t,rho` per row.
    Monitor {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sem: SemanticsArgs,
        #[command(flatten)]
        input: TraceArgs,
    },
    /// Episode metrics: control cost, distance covered, margin of satisfaction, safety.
    Metrics {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        input: TraceArgs,
        /// Safety formula used for SAT; defaults to the main formula.
        #[arg(long)]
        safety: Option<String>,
        /// State signal holding the distance travelled.
        #[arg(long)]
        distance_signal: String,
        /// Comma-separated control signal columns.
        #[arg(long, value_delimiter = ',', required = true)]
        controls: Vec<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        output: OutputFormat,
    },
    /// Compare semantics on one trace: robustness at anchor 0, mean robustness, SAT.
    Compare {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        input: TraceArgs,
        /// Comma-separated semantics names.
        #[arg(long, value_delimiter = ',', default_value = "classical,lse,sss")]
        semantics: Vec<String>,
        #[arg(long, default_value_t = stlrob::semantics::DEFAULT_MU)]
        mu: f64,
        #[arg(long, default_value_t = stlrob::semantics::DEFAULT_ETA)]
        eta: f64,
        #[arg(long, default_value = "semantic")]
        temporal_agg: String,
        #[arg(long, requires = "domains")]
        normalize: bool,
        #[arg(long)]
        domains: Option<PathBuf>,
        /// Safety formula used for SAT; defaults to the main formula.
        #[arg(long)]
        safety: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        output: OutputFormat,
    },
    /// Line-delimited JSON reward service on stdin/stdout.
    Serve,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SpecArgs {
    /// Formula text.
    #[arg(short = 'f', long)]
    pub formula: Option<String>,
    /// File containing the formula text.
    #[arg(long)]
    pub spec_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SemanticsArgs {
    /// classical, lse or sss.
    #[arg(long, default_value = "classical")]
    pub semantics: String,
    #[arg(long, default_value_t = stlrob::semantics::DEFAULT_MU)]
    pub mu: f64,
    #[arg(long, default_value_t = stlrob::semantics::DEFAULT_ETA)]
    pub eta: f64,
    /// semantic or pointwise.
    #[arg(long, default_value = "semantic")]
    pub temporal_agg: String,
    /// Divide atomic robustness by the declared domain width of each signal.
    #[arg(long, requires = "domains")]
    pub normalize: bool,
    /// CSV with header `signal,lo,hi`.
    #[arg(long)]
    pub domains: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Trace CSV: header of signal names, optional leading `time` column.
    #[arg(long)]
    pub trace: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Table,
}
