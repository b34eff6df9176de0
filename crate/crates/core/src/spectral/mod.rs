//! Quantum spectra.
//!
//! Magnetic loop: for `m r^2 omega_c / hbar = n + 1` the substitution
//! `Psi = exp(-(xi/4) cos 2x) Phi` leaves a three-term recurrence on the
//! Fourier coefficients of `Phi` that closes after `n + 1` terms, so `n + 1`
//! levels are exact. Gravitational loop: the half-angle equation is a
//! Whittaker-Hill equation whose period-`pi` characteristic values come from
//! a continued fraction, checked against a truncated Fourier matrix.

mod qes;
mod whittaker_hill;

pub use qes::{
    printed_qes_energies, qes_levels, qes_levels_scaled, qes_residual, Parity, Periodicity, PhiTerm,
    PrintedLevel, QesLevel, QesParams, Trig,
};
pub use whittaker_hill::{
    wh_characteristic, wh_eigenvalues, wh_matrix_oracle, wh_oracle_etas, wh_roots, wh_spectrum, WhLevel, WhParams,
    WhParity, WhSpectrum,
};
