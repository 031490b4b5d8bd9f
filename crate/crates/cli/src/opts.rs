//! Flag definitions and small parsers.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qwlct_core::qlct::LctParams;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "qwlct", version, about = "Two-sided quaternion windowed linear canonical transform lab")]
pub struct Cli {
    /// Seed for every random choice; echoed into all output files.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Cap worker parallelism. Output content is independent of this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for output files.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a transform over a signal and write the result file.
    Transform(TransformArgs),
    /// Export |G|^2 slices of a stored field as CSV.
    Spectrogram(SpectrogramArgs),
    /// Run the inequality verification suite over the seeded corpus.
    Verify(VerifyArgs),
    /// Reproduce the worked Gaussian example and its reference values.
    PaperExample(PaperExampleArgs),
    /// Bandlimit, erase, corrupt and reconstruct a modified signal.
    Recover(RecoverArgs),
    /// Fast oracle-equivalence checks (fast vs direct-sum transforms).
    Selftest,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Qft,
    Qlct,
    Qwlct,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Unit-mass impulse at the origin.
    Impulse,
    /// The worked example's Gaussian signal.
    ExampleGaussian,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowKind {
    /// The worked example's Gaussian window (beta-parameterized).
    Example,
    /// Isotropic Gaussian `e^{-|x|^2/(2 sigma^2)}`.
    Gauss,
    /// Centered box.
    Box,
    /// Raised cosine bump.
    RaisedCosine,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub kind: TransformKind,

    /// Input signal file (.qsig binary or .csv), mutually exclusive with --gen.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "gen")]
    pub input: Option<PathBuf>,

    /// Generate the input instead of reading a file.
    #[arg(long, value_enum)]
    pub gen: Option<GenKind>,

    /// Samples per axis for generated inputs.
    #[arg(long, default_value_t = 64)]
    pub n: usize,

    /// Grid half-extent for generated inputs.
    #[arg(long, default_value_t = 1.0)]
    pub half: f64,

    /// Gaussian width for generated inputs and the example window.
    #[arg(long, default_value_t = 0.0625)]
    pub beta: f64,

    /// Matrix parameters "a,b,c,d" or "a,b,c,d;a,b,c,d" (default: worked example).
    #[arg(long)]
    pub matrix: Option<String>,

    /// Window for --kind qwlct.
    #[arg(long, value_enum, default_value_t = WindowKind::Example)]
    pub window: WindowKind,

    /// Window scale parameter (sigma or half-width) for gauss/box/raised-cosine.
    #[arg(long, default_value_t = 0.5)]
    pub window_scale: f64,

    /// Shift lattice spacing in signal cells for --kind qwlct.
    #[arg(long, default_value_t = 8)]
    pub shift_stride: usize,

    /// Shift lattice points per axis for --kind qwlct.
    #[arg(long, default_value_t = 32)]
    pub shift_count: usize,

    /// Zero-pad non-power-of-two inputs for --kind qft.
    #[arg(long, default_value_t = false)]
    pub pad: bool,

    /// Also write the result as CSV next to the binary output.
    #[arg(long, default_value_t = false)]
    pub csv: bool,
}

#[derive(Args, Debug)]
pub struct SpectrogramArgs {
    /// Field file (.qwf4).
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,

    /// Fixed shift index "i,j": export |G|^2 over the frequency plane.
    #[arg(long, conflicts_with = "w_index")]
    pub u_index: Option<String>,

    /// Fixed frequency index "i,j": export |G|^2 over the shift plane.
    #[arg(long)]
    pub w_index: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run every check (default when no --check is given).
    #[arg(long, default_value_t = false)]
    pub all: bool,

    /// Restrict to named checks (repeatable): parseval, boundedness, lieb,
    /// log, entropic, lieb-up, donoho-stark, heisenberg, pitt, covariance,
    /// parity.
    #[arg(long = "check")]
    pub checks: Vec<String>,

    /// Optional JSON config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Corpus grid size per axis.
    #[arg(long)]
    pub n: Option<usize>,

    /// Number of seeded random corpus members.
    #[arg(long)]
    pub random: Option<usize>,

    /// Lieb exponents.
    #[arg(long = "s", value_delimiter = ',')]
    pub s_values: Vec<f64>,

    /// Concentration levels for the support bound.
    #[arg(long = "eps", value_delimiter = ',')]
    pub eps_values: Vec<f64>,

    /// Pitt weights.
    #[arg(long = "alpha", value_delimiter = ',')]
    pub alpha_values: Vec<f64>,

    /// Extra matrix set "a,b,c,d[;a,b,c,d]" replacing the default three.
    #[arg(long)]
    pub matrix: Option<String>,
}

#[derive(Args, Debug)]
pub struct PaperExampleArgs {
    #[arg(long, default_value_t = 0.0625)]
    pub beta: f64,

    #[arg(long, default_value_t = 64)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    /// JSON file holding a full recovery configuration; flags override.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Noise level ||n|| / ||truth||.
    #[arg(long)]
    pub noise: Option<f64>,

    /// Half-width of the centered erased block.
    #[arg(long)]
    pub erase_half: Option<f64>,

    /// Density of a random erased cell set (overrides --erase-half).
    #[arg(long)]
    pub erase_density: Option<f64>,

    /// Half-width of the frequency band block.
    #[arg(long)]
    pub band_half: Option<f64>,

    /// Matrix parameters "a,b,c,d[;a,b,c,d]".
    #[arg(long)]
    pub matrix: Option<String>,

    #[arg(long)]
    pub max_iter: Option<usize>,

    #[arg(long)]
    pub tol: Option<f64>,

    /// Also dump truth/observed/estimate as QSIG files.
    #[arg(long, default_value_t = false)]
    pub dump_signals: bool,
}

/// Parse "a,b,c,d" or "a,b,c,d;a,b,c,d" into per-axis matrices.
pub fn parse_matrices(spec: &str) -> Result<(LctParams, LctParams), String> {
    let halves: Vec<&str> = spec.split(';').collect();
    if halves.is_empty() || halves.len() > 2 {
        return Err("matrix spec must be a,b,c,d or a,b,c,d;a,b,c,d".into());
    }
    let parse_one = |s: &str| -> Result<LctParams, String> {
        let vals: Vec<f64> = s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("matrix entry {v:?}: {e}")))
            .collect::<Result<_, _>>()?;
        if vals.len() != 4 {
            return Err(format!("matrix needs 4 entries, got {}", vals.len()));
        }
        LctParams::new(vals[0], vals[1], vals[2], vals[3]).map_err(|e| e.to_string())
    };
    let first = parse_one(halves[0])?;
    let second = if halves.len() == 2 { parse_one(halves[1])? } else { first };
    Ok((first, second))
}

/// Parse an "i,j" index pair.
pub fn parse_index_pair(spec: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("index pair must be i,j, got {spec:?}"));
    }
    let i = parts[0].trim().parse().map_err(|e| format!("index {:?}: {e}", parts[0]))?;
    let j = parts[1].trim().parse().map_err(|e| format!("index {:?}: {e}", parts[1]))?;
    Ok((i, j))
}
