use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "porc", version, about = "Bead on a spinning vertical hoop: classical and quantum tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample V(theta) and report its extrema.
    Potential {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = FieldArg::Gravity)]
        field: FieldArg,
        /// Number of samples on [0, 2 pi].
        #[arg(long, default_value_t = 73)]
        samples: usize,
    },
    /// Classify the dynamical regime.
    Regime {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = FieldArg::Gravity)]
        field: FieldArg,
    },
    /// Closed-form trajectory next to a direct integration of the equation of motion.
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        field: Option<FieldArg>,
        /// Energy above the potential minimum.
        #[arg(long, conflicts_with = "special")]
        energy: Option<f64>,
        /// Fixed-energy special solution instead of an energy window.
        #[arg(long, value_enum)]
        special: Option<SpecialArg>,
        /// Reference time of the closed form.
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        /// Span start; defaults to t0 (bounded motion) or t0 - 2 (separatrix motion).
        #[arg(long)]
        t_start: Option<f64>,
        /// Span end; defaults to one period after the start, or t0 + 2.
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Largest integrator step.
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Euclidean instanton: profile, actions and tunnelling exponent.
    Instanton {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = FieldArg::Gravity)]
        field: FieldArg,
        /// Gravity: zero, pi or single-well (default from the regime).
        #[arg(long, value_enum)]
        barrier: Option<BarrierArg>,
        #[command(flatten)]
        profile: ProfileOpts,
    },
    /// Magnetic bounce from the false vacuum.
    Bounce {
        #[command(flatten)]
        common: Common,
        /// first or second.
        #[arg(long, value_enum, default_value_t = BarrierArg::First)]
        barrier: BarrierArg,
        #[command(flatten)]
        profile: ProfileOpts,
    },
    /// Fluctuation operator about an instanton or bounce.
    Stability {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = FieldArg::Gravity)]
        field: FieldArg,
        /// zero, pi, single-well (gravity); first, second, instanton (magnetic).
        #[arg(long, value_enum)]
        barrier: Option<BarrierArg>,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Grid half-width in units of the inverse profile rate.
        #[arg(long, default_value_t = 12.0)]
        half_width: f64,
        /// Grid points per inverse profile rate.
        #[arg(long, default_value_t = 200.0)]
        steps_per_unit: f64,
        /// Emit every stride-th grid point.
        #[arg(long, default_value_t = 100)]
        stride: usize,
    },
    /// Quasi-exactly solvable levels of the magnetic loop.
    SpectrumMag {
        #[command(flatten)]
        common: Common,
        /// Points used for the operator residual.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Period-pi Whittaker-Hill levels of the gravitational loop.
    SpectrumGrav {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, value_enum, default_value_t = ParityArg::Both)]
        parity: ParityArg,
    },
}

/// Physical inputs and output options shared by every command.
///
/// Raw style: `--m --r --omega --g --q --b --hbar`. Dimensionless style:
/// `--a` (a_grav or a_mag), `--xi`, `--n` with `m = r = hbar = 1`; `--omega`
/// may accompany `--a` or `--n` to set the frequency unit.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Bead mass.
    #[arg(long)]
    pub m: Option<f64>,
    /// Hoop radius.
    #[arg(long)]
    pub r: Option<f64>,
    /// Spin rate of the hoop.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Gravitational acceleration.
    #[arg(long)]
    pub g: Option<f64>,
    /// Bead charge.
    #[arg(long)]
    pub q: Option<f64>,
    /// Magnetic field strength.
    #[arg(long)]
    pub b: Option<f64>,
    /// Reduced Planck constant.
    #[arg(long)]
    pub hbar: Option<f64>,
    /// omega0^2/omega^2 (gravity) or omega_c/omega (magnetic).
    #[arg(long)]
    pub a: Option<f64>,
    /// 4 m r^2 omega / hbar.
    #[arg(long)]
    pub xi: Option<f64>,
    /// m r^2 omega_c / hbar - 1.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the payload here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print a provenance line on stderr.
    #[arg(long)]
    pub meta: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileOpts {
    /// Sampled tau range is [-span, span] in units of the inverse profile rate.
    #[arg(long, default_value_t = 8.0)]
    pub span: f64,
    #[arg(long, default_value_t = 81)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Gravity,
    Magnetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecialArg {
    GravitySticking,
    MagneticSinh,
    MagneticTan,
    MagneticSin,
    MagneticTanh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BarrierArg {
    Zero,
    Pi,
    SingleWell,
    First,
    Second,
    Instanton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Both,
}
