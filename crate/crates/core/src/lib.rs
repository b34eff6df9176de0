//! Classical and quantum mechanics of a bead on a spinning vertical hoop.
//!
//! The hoop turns about its vertical diameter at a fixed rate while the bead
//! feels either uniform gravity or a uniform magnetic field. The crate covers
//! the effective potential and its extrema, exact elliptic-function
//! trajectories, Euclidean instantons and bounces with their actions,
//! fluctuation spectra around them, and two quantum spectral solvers.

pub mod classical;
pub mod elliptic;
pub mod error;
pub mod euclidean;
pub mod params;
pub mod potential;
pub mod spectral;
pub mod stability;

pub use error::{PorcError, Result};
pub use params::{classify_regime, FieldKind, LoopParams, Regime};
pub use potential::{effective_potential, find_extrema, EffectivePotential, ExtremumReport, PotentialSpec};
