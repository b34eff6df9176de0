//! Physical constants of the rotating loop and regime classification.

use serde::Serialize;

use crate::error::{PorcError, Result};

/// Relative tolerance used to decide that a frequency sits on a critical value.
pub const TOL_CRITICAL: f64 = 1e-12;

/// Which uniform field acts on the bead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Gravity,
    Magnetic,
}

/// Mass, radius, spin rate and field strengths of the loop.
///
/// `omega0 = sqrt(g / r)` and `omega_c = q B / m` are derived on demand so the
/// stored fields are the single source of truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopParams {
    m: f64,
    r: f64,
    omega: f64,
    g: f64,
    q: f64,
    b: f64,
}

impl LoopParams {
    pub fn new(m: f64, r: f64, omega: f64, g: f64, q: f64, b: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("r", r), ("omega", omega), ("g", g), ("q", q), ("B", b)] {
            if !v.is_finite() {
                return Err(PorcError::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite",
                });
            }
        }
        if m <= 0.0 || r <= 0.0 {
            return Err(PorcError::NonPositiveMassOrRadius { m, r });
        }
        if omega < 0.0 {
            return Err(PorcError::InvalidParameter {
                name: "omega",
                value: omega,
                reason: "spin rate must be non-negative",
            });
        }
        if g < 0.0 {
            return Err(PorcError::InvalidParameter {
                name: "g",
                value: g,
                reason: "gravity must be non-negative",
            });
        }
        Ok(Self { m, r, omega, g, q, b })
    }

    /// Unit-mass, unit-radius loop in a pure gravitational field.
    pub fn gravity(omega: f64, g: f64) -> Result<Self> {
        Self::new(1.0, 1.0, omega, g, 0.0, 0.0)
    }

    /// Unit-mass, unit-radius loop with `q B = omega_c`.
    pub fn magnetic(omega: f64, omega_c: f64) -> Result<Self> {
        Self::new(1.0, 1.0, omega, 0.0, omega_c, 1.0)
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Moment of inertia `m r^2`.
    pub fn inertia(&self) -> f64 {
        self.m * self.r * self.r
    }

    /// Pendulum frequency `sqrt(g / r)`.
    pub fn omega0(&self) -> f64 {
        (self.g / self.r).sqrt()
    }

    /// Cyclotron frequency `q B / m`.
    pub fn omega_c(&self) -> f64 {
        self.q * self.b / self.m
    }

    /// `omega0^2 / omega^2`.
    pub fn a_grav(&self) -> Result<f64> {
        if self.omega == 0.0 {
            return Err(PorcError::RatioUndefined("a_grav"));
        }
        Ok(self.g / (self.r * self.omega * self.omega))
    }

    /// `omega_c / omega`.
    pub fn a_mag(&self) -> Result<f64> {
        if self.omega == 0.0 {
            return Err(PorcError::RatioUndefined("a_mag"));
        }
        Ok(self.omega_c() / self.omega)
    }

    /// Natural energy scale `m r^2 omega^2` (falls back to `m g r` or
    /// `m r^2 omega_c^2` when the loop does not spin).
    pub fn energy_scale(&self) -> f64 {
        let i = self.inertia();
        let s = i * self.omega * self.omega;
        if s > 0.0 {
            s
        } else {
            (self.m * self.g * self.r).max(i * self.omega_c() * self.omega_c()).max(f64::MIN_POSITIVE)
        }
    }
}

/// Dynamical regime of the loop for a given field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `omega > omega0`: degenerate double well.
    #[serde(rename = "grav-high")]
    GravHigh,
    /// `omega < omega0`: single well at the bottom.
    #[serde(rename = "grav-low")]
    GravLow,
    #[serde(rename = "grav-critical")]
    GravCritical,
    /// `omega > omega_c / 2`: false vacuum at `pi/2`, true vacuum at `3 pi/2`.
    #[serde(rename = "mag-high")]
    MagHigh,
    /// `omega < omega_c / 2`: a single minimum.
    #[serde(rename = "mag-low")]
    MagLow,
    #[serde(rename = "mag-critical")]
    MagCritical,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::GravHigh => "grav-high",
            Regime::GravLow => "grav-low",
            Regime::GravCritical => "grav-critical",
            Regime::MagHigh => "mag-high",
            Regime::MagLow => "mag-low",
            Regime::MagCritical => "mag-critical",
        }
    }

    pub fn is_critical(&self) -> bool {
        matches!(self, Regime::GravCritical | Regime::MagCritical)
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compare the spin rate with the field's critical frequency.
pub fn classify_regime(params: &LoopParams, kind: FieldKind) -> Result<Regime> {
    let omega = params.omega();
    if omega <= 0.0 {
        return Err(PorcError::RatioUndefined("regime"));
    }
    let critical = match kind {
        FieldKind::Gravity => params.omega0(),
        FieldKind::Magnetic => 0.5 * params.omega_c().abs(),
    };
    let on_edge = (omega - critical).abs() <= TOL_CRITICAL * omega.max(critical);
    Ok(match (kind, on_edge, omega > critical) {
        (FieldKind::Gravity, true, _) => Regime::GravCritical,
        (FieldKind::Gravity, false, true) => Regime::GravHigh,
        (FieldKind::Gravity, false, false) => Regime::GravLow,
        (FieldKind::Magnetic, true, _) => Regime::MagCritical,
        (FieldKind::Magnetic, false, true) => Regime::MagHigh,
        (FieldKind::Magnetic, false, false) => Regime::MagLow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_frequencies() {
        let p = LoopParams::new(1.0, 1.0, 2.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.omega0(), 1.0);
        assert_eq!(p.a_grav().unwrap(), 0.25);

        let p = LoopParams::new(1.0, 1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(p.omega_c(), 1.0);
        assert_eq!(p.a_mag().unwrap(), 1.0);
    }

    #[test]
    fn ratios_undefined_without_spin() {
        let p = LoopParams::new(1.0, 1.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.a_grav(), Err(PorcError::RatioUndefined("a_grav")));
        assert_eq!(p.a_mag(), Err(PorcError::RatioUndefined("a_mag")));
    }

    #[test]
    fn rejects_bad_mass_or_radius() {
        assert!(matches!(
            LoopParams::new(0.0, 1.0, 1.0, 1.0, 0.0, 0.0),
            Err(PorcError::NonPositiveMassOrRadius { .. })
        ));
        assert!(matches!(
            LoopParams::new(1.0, -2.0, 1.0, 1.0, 0.0, 0.0),
            Err(PorcError::NonPositiveMassOrRadius { .. })
        ));
        assert!(LoopParams::new(1.0, 1.0, -1.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn invariant_relations() {
        let p = LoopParams::new(2.0, 0.5, 3.0, 9.81, 0.3, 1.7).unwrap();
        assert!((p.omega0().powi(2) * p.r() - p.g()).abs() < 1e-14);
        assert!((p.omega_c() * p.m() - p.q() * p.b()).abs() < 1e-14);
    }

    #[test]
    fn regimes() {
        let p = LoopParams::gravity(2.0, 1.0).unwrap();
        assert_eq!(classify_regime(&p, FieldKind::Gravity).unwrap(), Regime::GravHigh);
        let p = LoopParams::gravity(0.5, 1.0).unwrap();
        assert_eq!(classify_regime(&p, FieldKind::Gravity).unwrap(), Regime::GravLow);
        let p = LoopParams::gravity(1.0, 1.0).unwrap();
        assert_eq!(classify_regime(&p, FieldKind::Gravity).unwrap(), Regime::GravCritical);
        let p = LoopParams::magnetic(0.4, 1.0).unwrap();
        assert_eq!(classify_regime(&p, FieldKind::Magnetic).unwrap(), Regime::MagLow);
        let p = LoopParams::magnetic(1.0, 1.0).unwrap();
        assert_eq!(classify_regime(&p, FieldKind::Magnetic).unwrap(), Regime::MagHigh);
        let p = LoopParams::magnetic(0.5, 1.0).unwrap();
        assert_eq!(classify_regime(&p, FieldKind::Magnetic).unwrap(), Regime::MagCritical);
    }
}
