use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ghzsim", version, about = "Hybrid qubit/cat-state GHZ simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run the generation sequence and summarise the state (JSON).
    Generate(GenerateArgs),
    /// Conditional two-mode or qubit-projected single-mode Wigner grid (CSV).
    Wigner(WignerArgs),
    /// Bell-operator sweeps, per-term tables and shot sampling (CSV).
    Bell(BellArgs),
    /// Detection visibility of the configured readout chain (JSON).
    Visibility(VisibilityArgs),
    /// Optimise the Bell value over alpha and tau (JSON, optional trace CSV).
    Optimize(OptimizeArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Generate(a) => &a.common,
            Command::Wigner(a) => &a.common,
            Command::Bell(a) => &a.common,
            Command::Visibility(a) => &a.common,
            Command::Optimize(a) => &a.common,
        }
    }
}

#[derive(Args, Clone)]
pub struct Common {
    /// Device config: a JSON path, or `paper_device` / `perfect_detection`.
    #[arg(long)]
    pub config: String,
    /// Fock truncation per cavity.
    #[arg(long, default_value_t = 31)]
    pub dim: usize,
    /// Worker threads.
    #[arg(long, env = "GHZSIM_THREADS")]
    pub threads: Option<usize>,
    /// Result file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Manifest file; stderr when absent.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct SequenceArgs {
    /// Include self- and cross-Kerr terms during evolution.
    #[arg(long, conflicts_with = "ideal")]
    pub kerr: bool,
    /// Dispersive terms only (default).
    #[arg(long)]
    pub ideal: bool,
    /// Real first displacement amplitude of both cavities.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Conditional S2 phase (rad); sets tau.
    #[arg(long, conflicts_with = "tau_ns")]
    pub phi2: Option<f64>,
    /// Conditional-phase wait in ns.
    #[arg(long)]
    pub tau_ns: Option<f64>,
    /// Axis offset of the Q1 flip (rad).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub seq: SequenceArgs,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CutArg {
    Rere,
    Imim,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ConditionArg {
    #[value(name = "+1")]
    Plus,
    #[value(name = "-1")]
    Minus,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CavityArg {
    S1,
    S2,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum LevelArg {
    G,
    E,
}

#[derive(Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["cut", "single"])))]
pub struct WignerArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// Two-mode cut through both real or both imaginary axes.
    #[arg(long, value_enum)]
    pub cut: Option<CutArg>,
    /// Product of the three qubit X readouts to condition on.
    #[arg(long, value_enum, default_value = "all", requires = "cut", allow_hyphen_values = true)]
    pub condition: ConditionArg,
    /// Single-cavity Wigner map.
    #[arg(long, value_enum, requires = "project_q3")]
    pub single: Option<CavityArg>,
    /// Q3 level to project on before the single-cavity map.
    #[arg(long, value_enum)]
    pub project_q3: Option<LevelArg>,
    #[arg(long, default_value_t = 51)]
    pub points: usize,
    #[arg(long, default_value_t = 2.5)]
    pub half_width: f64,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum YFormArg {
    Perpendicular,
    Literal,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["theta_sweep", "amplitude_sweep", "terms", "shots"])))]
pub struct BellArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// `theta_rad,bell` over [0, 2 pi].
    #[arg(long)]
    pub theta_sweep: bool,
    /// `beta,bell_ideal,sigma_y` for the ideal state with equal real amplitudes.
    #[arg(long)]
    pub amplitude_sweep: bool,
    /// `term,letters,sign,value` for all 16 terms.
    #[arg(long)]
    pub terms: bool,
    /// Shots per term for sampled correlations.
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Apply the configured readout and parity errors to sampled shots.
    #[arg(long, requires = "shots")]
    pub with_detection: bool,
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub beta_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub beta_step: f64,
    #[arg(long, value_enum, default_value = "perpendicular")]
    pub y_form: YFormArg,
}

#[derive(Args)]
pub struct VisibilityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ideal Bell value to scale by the visibility.
    #[arg(long)]
    pub ideal_bell: Option<f64>,
    /// Measured Bell value to compare against `--ideal-bell`.
    #[arg(long, requires = "ideal_bell")]
    pub measured_bell: Option<f64>,
}

#[derive(Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Optimise without Kerr terms.
    #[arg(long)]
    pub ideal: bool,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub tau_min_ns: f64,
    #[arg(long, default_value_t = 1000.0, allow_negative_numbers = true)]
    pub tau_max_ns: f64,
    /// Points per axis of the coarse scan.
    #[arg(long, default_value_t = 11)]
    pub grid: usize,
    /// Starting amplitude (defaults to the bundled operating point).
    #[arg(long)]
    pub init_alpha: Option<f64>,
    #[arg(long)]
    pub init_tau_ns: Option<f64>,
    /// Search trace CSV `stage,alpha,tau_s,bell,theta_rad`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "perpendicular")]
    pub y_form: YFormArg,
}
