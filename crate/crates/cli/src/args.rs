use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sct", version, about = "Chirplet transform and synchrosqueezed chirplet transform toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chirplet transform of a signal into a TFC1 tensor.
    Transform(TransformArgs),
    /// Synchrosqueezed chirplet transform, with a per-frame mass check.
    Sct(SctArgs),
    /// Ridge curves from a (squeezed) tensor.
    Ridge(RidgeArgs),
    /// Ridges plus mode reconstruction, scored against truth when given.
    Reconstruct(ReconstructArgs),
    /// Write a synthetic test scene as CSV.
    Synth(SynthArgs),
    /// Monte-Carlo comparison of SCT, CT and SST2 on the random scene.
    Compare(CompareArgs),
    /// Describe a tensor or signal file.
    Info(InfoArgs),
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    /// Signal file: .csv (columns re[, im, t_s]), .wav (mono PCM16) or raw
    /// little-endian complex128.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Sample rate in Hz (raw input; overrides a CSV time column).
    #[arg(long)]
    pub fs: Option<f64>,
    /// Keep every k-th sample.
    #[arg(long, value_name = "K")]
    pub downsample: Option<usize>,
    /// Low-pass filter before --downsample.
    #[arg(long, requires = "downsample")]
    pub lowpass: bool,
}

#[derive(Debug, Args, Clone)]
pub struct SliceArgs {
    /// Write the frequency x chirp-rate magnitude slice at this time (s).
    #[arg(long, value_name = "SECONDS", requires = "slice_out")]
    pub slice: Option<f64>,
    #[arg(long, value_name = "CSV", requires = "slice")]
    pub slice_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum DtypeArg {
    C64,
    #[default]
    C128,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output tensor (TFC1).
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub dtype: DtypeArg,
    /// Also write the chirp-integrated time-frequency magnitude as CSV.
    #[arg(long, value_name = "CSV")]
    pub tf_out: Option<PathBuf>,
    #[command(flatten)]
    pub slice: SliceArgs,
}

#[derive(Debug, Args)]
pub struct SctArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output squeezed tensor (TFC1).
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub dtype: DtypeArg,
    /// Per-frame conservation summary CSV.
    #[arg(long, value_name = "CSV")]
    pub summary: Option<PathBuf>,
    /// Also write the unsqueezed transform.
    #[arg(long, value_name = "TFC1")]
    pub ct_out: Option<PathBuf>,
    #[command(flatten)]
    pub slice: SliceArgs,
}

#[derive(Debug, Args)]
pub struct RidgeArgs {
    /// Squeezed tensor (TFC1).
    #[arg(long)]
    pub tensor: PathBuf,
    /// The analysed signal; enables fixed-point refinement.
    #[command(flatten)]
    pub input: OptionalInputArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of components (overrides ridge.k).
    #[arg(short, long)]
    pub k: Option<usize>,
    /// k-means seed (overrides ridge.seed).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Ridge CSV.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct OptionalInputArgs {
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub fs: Option<f64>,
    #[arg(long, value_name = "K")]
    pub downsample: Option<usize>,
    #[arg(long, requires = "downsample")]
    pub lowpass: bool,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Squeezed tensor (TFC1).
    #[arg(long)]
    pub tensor: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(short, long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reconstructed modes CSV.
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_name = "CSV")]
    pub ridges_out: Option<PathBuf>,
    /// Scene CSV written by `synth`, holding the true components.
    #[arg(long, requires = "report")]
    pub truth: Option<PathBuf>,
    /// Error report CSV.
    #[arg(long, requires = "truth")]
    pub report: Option<PathBuf>,
    /// Also report errors inside LO,HI (s) and outside it.
    #[arg(long, value_name = "LO,HI", value_delimiter = ',')]
    pub interval: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SceneName {
    /// Two linear chirps crossing at (3 s, 24 Hz).
    Crossing,
    /// Two random smoothed-Brownian components plus Student-t noise.
    Random,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(value_enum)]
    pub scene: SceneName,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample rate of the crossing scene (Hz).
    #[arg(long, default_value_t = 100.0)]
    pub fs: f64,
    /// Span of the crossing scene (s).
    #[arg(long, default_value_t = 1.0)]
    pub start: f64,
    #[arg(long, default_value_t = 5.0)]
    pub end: f64,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Sct,
    Ct,
    Sst2,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Sst2, MethodArg::Ct, MethodArg::Sct])]
    pub methods: Vec<MethodArg>,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of consecutive seeds.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Per-seed scores CSV.
    #[arg(long, value_name = "CSV")]
    pub per_seed: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    pub path: PathBuf,
    /// Sample rate for raw signal files.
    #[arg(long)]
    pub fs: Option<f64>,
}
