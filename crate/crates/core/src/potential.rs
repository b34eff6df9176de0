//! Effective one-dimensional potentials and their extrema.
//!
//! Both fields are stored in the generic form
//! `V(phi) = A cos(phi) + B cos(2 phi) + offset`. The gravitational potential
//! is already in this form with `phi = theta`. The magnetic potential
//! `(1/2) m r^2 omega (omega_c sin(theta) - omega sin^2(theta))` becomes
//! `A = m r^2 omega omega_c / 2`, `B = -m r^2 omega^2 / 4` after the shift
//! `phi = theta - pi/2`; the shift is carried so callers can work in the
//! original angle.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{PorcError, Result};
use crate::params::{FieldKind, LoopParams};

/// Root tolerance for extrema, relative to the potential's energy scale.
pub const TOL_ROOT: f64 = 1e-12;
/// Curvature below which an extremum is treated as degenerate.
pub const TOL_FLAT: f64 = 1e-8;

const SAMPLES: usize = 4096;

/// Where a potential came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Gravity,
    Magnetic,
    Generic,
}

/// Which potential to build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    Gravity,
    Magnetic,
    Generic { coeff_a: f64, coeff_b: f64 },
}

impl From<FieldKind> for PotentialSpec {
    fn from(kind: FieldKind) -> Self {
        match kind {
            FieldKind::Gravity => PotentialSpec::Gravity,
            FieldKind::Magnetic => PotentialSpec::Magnetic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectivePotential {
    pub coeff_a: f64,
    pub coeff_b: f64,
    pub offset: f64,
    pub provenance: Provenance,
    /// `theta_original = phi + shift`.
    pub shift: f64,
}

impl EffectivePotential {
    pub fn generic(coeff_a: f64, coeff_b: f64, offset: f64) -> Self {
        Self {
            coeff_a,
            coeff_b,
            offset,
            provenance: Provenance::Generic,
            shift: 0.0,
        }
    }

    /// `A cos(phi) + B cos(2 phi) + offset`.
    pub fn value(&self, phi: f64) -> f64 {
        self.coeff_a * phi.cos() + self.coeff_b * (2.0 * phi).cos() + self.offset
    }

    pub fn first_derivative(&self, phi: f64) -> f64 {
        -self.coeff_a * phi.sin() - 2.0 * self.coeff_b * (2.0 * phi).sin()
    }

    pub fn second_derivative(&self, phi: f64) -> f64 {
        -self.coeff_a * phi.cos() - 4.0 * self.coeff_b * (2.0 * phi).cos()
    }

    pub fn to_internal(&self, theta: f64) -> f64 {
        theta - self.shift
    }

    pub fn to_original(&self, phi: f64) -> f64 {
        phi + self.shift
    }

    /// Potential in the original angle.
    pub fn value_at(&self, theta: f64) -> f64 {
        self.value(self.to_internal(theta))
    }

    /// `dV/dtheta` in the original angle.
    pub fn force_at(&self, theta: f64) -> f64 {
        self.first_derivative(self.to_internal(theta))
    }

    /// `d^2V/dtheta^2` in the original angle.
    pub fn curvature_at(&self, theta: f64) -> f64 {
        self.second_derivative(self.to_internal(theta))
    }

    /// Largest coefficient magnitude; the natural scale for tolerances.
    pub fn scale(&self) -> f64 {
        self.coeff_a.abs().max(self.coeff_b.abs()).max(f64::MIN_POSITIVE)
    }

    /// The reflected model `(-A, B)`, which satisfies
    /// `reflected.value(phi) == self.value(pi - phi)`.
    pub fn reflected(&self) -> Self {
        Self {
            coeff_a: -self.coeff_a,
            ..*self
        }
    }
}

/// Build the effective potential for a field (or a generic pair of coefficients).
pub fn effective_potential(spec: PotentialSpec, params: &LoopParams) -> EffectivePotential {
    let i = params.inertia();
    let w = params.omega();
    match spec {
        PotentialSpec::Gravity => EffectivePotential {
            coeff_a: params.m() * params.g() * params.r(),
            coeff_b: 0.25 * i * w * w,
            offset: -0.25 * i * w * w,
            provenance: Provenance::Gravity,
            shift: 0.0,
        },
        PotentialSpec::Magnetic => EffectivePotential {
            coeff_a: 0.5 * i * w * params.omega_c(),
            coeff_b: -0.25 * i * w * w,
            offset: -0.25 * i * w * w,
            provenance: Provenance::Magnetic,
            shift: 0.5 * PI,
        },
        PotentialSpec::Generic { coeff_a, coeff_b } => EffectivePotential::generic(coeff_a, coeff_b, 0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    /// Location in the original angle, in `[0, 2 pi)`.
    pub theta: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Degeneracy {
    DegenerateMinima,
    FalseVacuum,
    SingleWell,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumReport {
    pub extrema: Vec<Extremum>,
    pub degeneracy: Degeneracy,
}

impl ExtremumReport {
    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Min)
    }

    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Max)
    }

    pub fn global_min(&self) -> f64 {
        self.minima().map(|e| e.value).fold(f64::INFINITY, f64::min)
    }

    pub fn global_max(&self) -> f64 {
        self.maxima().map(|e| e.value).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU - 1e-15 {
        0.0
    } else {
        t
    }
}

fn refine_root(v: &EffectivePotential, lo: f64, hi: f64) -> f64 {
    let mut conv = roots::SimpleConvergency { eps: 1e-15, max_iter: 200 };
    let x = roots::find_root_brent(lo, hi, |x| v.first_derivative(x), &mut conv).unwrap_or(0.5 * (lo + hi));
    // Newton polish; Brent stops at the bracket resolution.
    let mut x = x;
    for _ in 0..3 {
        let d2 = v.second_derivative(x);
        if d2 == 0.0 {
            break;
        }
        let step = v.first_derivative(x) / d2;
        if step.abs() > (hi - lo) {
            break;
        }
        x -= step;
    }
    x
}

/// Locate and classify all extrema of `v` on the circle.
///
/// Roots of `V'` are bracketed on a dense grid and refined with Brent's method.
/// For the gravity and magnetic potentials the result is cross-checked against
/// the closed-form locations.
pub fn find_extrema(v: &EffectivePotential, params: &LoopParams) -> Result<ExtremumReport> {
    let scale = v.scale();
    let h = TAU / SAMPLES as f64;
    // Offset keeps the symmetric roots (0, pi/2, pi) strictly inside intervals.
    let start = 0.381_966_011_250_105_1 * h;
    let grid: Vec<f64> = (0..=SAMPLES).map(|i| start + i as f64 * h).collect();
    let dv: Vec<f64> = grid.iter().map(|&x| v.first_derivative(x)).collect();

    if dv.iter().all(|d| d.abs() < TOL_ROOT * scale) {
        return Err(PorcError::DegenerateExtremum {
            theta: 0.0,
            curvature: 0.0,
        });
    }

    let mut found: Vec<Extremum> = Vec::new();
    for i in 0..SAMPLES {
        let (a, b) = (grid[i], grid[i + 1]);
        let (fa, fb) = (dv[i], dv[i + 1]);
        if fa == 0.0 || fa * fb < 0.0 {
            let phi = if fa == 0.0 { a } else { refine_root(v, a, b) };
            let curv = v.second_derivative(phi);
            if curv.abs() < TOL_FLAT * scale {
                return Err(PorcError::DegenerateExtremum {
                    theta: wrap(v.to_original(phi)),
                    curvature: curv.abs(),
                });
            }
            found.push(Extremum {
                theta: wrap(v.to_original(phi)),
                value: v.value(phi),
                kind: if curv > 0.0 { ExtremumKind::Min } else { ExtremumKind::Max },
            });
        }
    }
    found.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    found.dedup_by(|x, y| (x.theta - y.theta).abs() < 1e-9);

    let minima: Vec<&Extremum> = found.iter().filter(|e| e.kind == ExtremumKind::Min).collect();
    let degeneracy = match minima.as_slice() {
        [_] => Degeneracy::SingleWell,
        [x, y] if (x.value - y.value).abs() <= TOL_ROOT * scale => Degeneracy::DegenerateMinima,
        [_, _] => Degeneracy::FalseVacuum,
        _ => Degeneracy::SingleWell,
    };
    let report = ExtremumReport {
        extrema: found,
        degeneracy,
    };
    cross_check(&report, v, params)?;
    Ok(report)
}

/// Global minimum of `V`. Falls back to a fine sampled search when the finder
/// rejects a degenerate extremum (at the critical frequencies).
pub fn minimum_value(v: &EffectivePotential, params: &LoopParams) -> f64 {
    match find_extrema(v, params) {
        Ok(rep) => rep.global_min(),
        Err(_) => {
            let n = 1 << 16;
            (0..n).map(|i| v.value(TAU * i as f64 / n as f64)).fold(f64::INFINITY, f64::min)
        }
    }
}

/// Closed-form extremum locations `(theta, kind)` for the two physical fields.
pub fn closed_form_extrema(provenance: Provenance, params: &LoopParams) -> Option<Vec<(f64, ExtremumKind)>> {
    use ExtremumKind::*;
    let w = params.omega();
    let mut list = match provenance {
        Provenance::Gravity => {
            let w0 = params.omega0();
            if w > w0 {
                let a = params.a_grav().ok()?;
                let t = (-a).acos();
                vec![(0.0, Max), (t, Min), (PI, Max), (TAU - t, Min)]
            } else if w < w0 {
                vec![(0.0, Max), (PI, Min)]
            } else {
                return None;
            }
        }
        Provenance::Magnetic => {
            let wc = params.omega_c();
            if wc < 0.0 || w == 0.0 {
                return None;
            }
            if w > 0.5 * wc {
                let s = (wc / (2.0 * w)).asin();
                vec![(s, Max), (0.5 * PI, Min), (PI - s, Max), (1.5 * PI, Min)]
            } else if w < 0.5 * wc {
                vec![(0.5 * PI, Max), (1.5 * PI, Min)]
            } else {
                return None;
            }
        }
        Provenance::Generic => return None,
    };
    list.sort_by(|x, y| x.0.total_cmp(&y.0));
    Some(list)
}

fn cross_check(report: &ExtremumReport, v: &EffectivePotential, params: &LoopParams) -> Result<()> {
    let Some(expected) = closed_form_extrema(v.provenance, params) else {
        return Ok(());
    };
    if expected.len() != report.extrema.len() {
        return Err(PorcError::InternalConsistency(format!(
            "expected {} extrema, found {}",
            expected.len(),
            report.extrema.len()
        )));
    }
    for ((theta, kind), got) in expected.iter().zip(&report.extrema) {
        let d = (theta - got.theta).abs();
        let d = d.min(TAU - d);
        if d > 1e-10 || *kind != got.kind {
            return Err(PorcError::InternalConsistency(format!(
                "closed form {theta} ({kind:?}) vs numeric {} ({:?})",
                got.theta, got.kind
            )));
        }
    }
    Ok(())
}
