//! `morphmap` command-line front end.

mod commands;
mod fail;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morphmap::interp::InterpKind;
use morphmap::simulator::{InterpSpace, REFERENCE_SEED};

#[derive(Parser, Debug)]
#[command(
    name = "morphmap",
    version,
    about = "Morphing attack potential evaluation"
)]
pub struct Cli {
    /// Seed of the simulated world.
    #[arg(long, global = true, default_value_t = REFERENCE_SEED)]
    pub seed: u64,
    /// Directory for files written without an explicit path.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Format of the table printed to stdout.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Accept morphs with differing probe counts per subject.
    #[arg(long, global = true)]
    pub ragged: bool,
    /// Let the two subjects be verified by different FRSs.
    #[arg(long, global = true)]
    pub pooled_frs: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Md,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum KindArg {
    Lerp,
    Slerp,
}

impl From<KindArg> for InterpKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lerp => InterpKind::Lerp,
            KindArg::Slerp => InterpKind::Slerp,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SpaceArg {
    Id,
    Latent,
}

impl From<SpaceArg> for InterpSpace {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Id => InterpSpace::IdentityLevel,
            SpaceArg::Latent => InterpSpace::LatentLevel,
        }
    }
}

/// Shape of the simulated world; defaults are the reference configuration.
#[derive(Args, Debug, Clone)]
pub struct WorldArgs {
    #[arg(long, default_value_t = 60)]
    pub identities: usize,
    /// Probes per identity.
    #[arg(long, default_value_t = 10)]
    pub probes: usize,
    #[arg(long, default_value_t = 3)]
    pub frs: usize,
    #[arg(long, default_value_t = 40)]
    pub pairs: usize,
    /// Per-component probe noise.
    #[arg(long, default_value_t = 0.08)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 512)]
    pub dim: usize,
    /// Output dimension of each FRS projection.
    #[arg(long, default_value_t = 128)]
    pub proj_dim: usize,
    /// FAR used when calibrating inside the simulation.
    #[arg(long, default_value_t = 0.001)]
    pub far: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Choose per-FRS thresholds at a target FAR.
    Calibrate {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long, default_value_t = 0.001)]
        far: f64,
        /// Threshold JSON (default: <out-dir>/thresholds.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the MAP matrix, curves and summary of a score file.
    Map {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        thresholds: PathBuf,
        /// Algorithm label (default: scores file stem).
        #[arg(long)]
        label: Option<String>,
    },
    /// Draw robustness and generality curves of one or more summaries.
    Curves {
        #[arg(required = true)]
        summaries: Vec<PathBuf>,
        /// SVG path (default: <out-dir>/map_curves.svg).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate several summaries side by side.
    Compare {
        #[arg(required = true)]
        summaries: Vec<PathBuf>,
    },
    /// Generate a synthetic score and calibration dataset.
    Simulate {
        #[command(flatten)]
        world: WorldArgs,
        #[arg(long, value_enum, default_value = "slerp")]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "id")]
        space: SpaceArg,
        /// Replace morphs with unrelated third identities.
        #[arg(long)]
        baseline: bool,
        /// Default: <out-dir>/scores.csv.
        #[arg(long)]
        out_scores: Option<PathBuf>,
        /// Default: <out-dir>/calibration.csv.
        #[arg(long)]
        out_cal: Option<PathBuf>,
    },
    /// MAP_Avg for every interpolation space and kind in one world.
    Ablate {
        #[command(flatten)]
        world: WorldArgs,
        /// Default: <out-dir>/ablation.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interpolate consecutive pairs of vectors from a file.
    Interp {
        /// Whitespace-separated vectors, one per line.
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "slerp")]
        kind: KindArg,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
