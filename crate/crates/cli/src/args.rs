use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "bellsim",
    version,
    about = "Finite-data Bell identities and delayed-choice simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the three- or four-stream identity on a stream file or on
    /// freshly generated matched streams.
    VerifyIdentity(VerifyArgs),
    /// Run a three-term or CHSH experiment with matched or unmatched acquisition.
    Experiment(ExperimentArgs),
    /// Scan a correlation function for consistency or search for violating settings.
    Scan(ScanArgs),
    /// Generate delayed-choice streams and write them as a stream file.
    Streams(StreamsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AcquisitionArg {
    Matched,
    Unmatched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Locality {
    Local,
    Nonlocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Three-point consistency over all grid triples.
    Wss,
    /// Maximise the three-term violation over (a, b, b').
    Three,
    /// Maximise the CHSH excess over (a, a', b, b').
    Chsh,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output path; with `--format both` its extension is replaced by
    /// `.json` and `.csv`. Standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Hidden-variable model: bell-linear or nonlocal-toy (singlet for
    /// unmatched experiments).
    #[arg(long, default_value = "bell-linear")]
    pub model: String,
    /// Settings in degrees: `a,b,b'` or `a,a',b,b'`.
    #[arg(long, allow_hyphen_values = true, default_value = "0,-45,45")]
    pub angles: String,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    /// Random seed; drawn and announced on stderr when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Locality::Local)]
    pub locality: Locality,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Stream file to check; streams are generated when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub generate: GenerateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub generate: GenerateArgs,
    #[arg(long, value_enum, default_value_t = AcquisitionArg::Matched)]
    pub acquisition: AcquisitionArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Correlation function: cosine, neg-cosine, bell-linear,
    /// exponential:<length> or tabulated:<file>.
    #[arg(long)]
    pub model: String,
    #[arg(long, value_enum, default_value_t = Objective::Wss)]
    pub objective: Objective,
    /// `lo:hi:steps`, degrees for angular functions.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// `rounds:shrink` for the searches.
    #[arg(long, default_value = "4:0.25")]
    pub refine: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StreamsArgs {
    #[command(flatten)]
    pub generate: GenerateArgs,
    /// Stream file to write; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
