use std::f64::consts::PI;

use serde::Serialize;

use super::closed_form::{context, ClosedFormTrajectory, EvalRule, Relations, SpecialFn, Window};
use crate::elliptic::EllipticModulus;
use crate::error::{PorcError, Result};
use crate::params::{FieldKind, LoopParams, Regime};

/// Closed-form solutions in elementary functions at particular energies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialCase {
    /// Gravity, either regime: `tan(theta/2) = (1/a) cosech(sqrt(w0^2 + w^2) (t - t0))`
    /// at the energy of the upper barrier top.
    GravitySticking,
    /// Magnetic, `omega < omega_c / 2`, `E = m r^2 omega omega_c`: sinh form
    /// reaching the maximum at `pi/2` as `t -> +-inf`.
    MagneticSinh,
    /// Magnetic, `omega < omega_c / 2`, `E = (m r^2 / 8)(omega_c + 2 omega)^2`: tan form.
    MagneticTan,
    /// Magnetic, `omega > omega_c / 2`, `E = m r^2 omega omega_c`: sin form about `3 pi/2`.
    MagneticSin,
    /// Magnetic, `omega > omega_c / 2`, `E = V_max`: tanh form from the true vacuum
    /// to a barrier top.
    MagneticTanh,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 5] = [
        SpecialCase::GravitySticking,
        SpecialCase::MagneticSinh,
        SpecialCase::MagneticTan,
        SpecialCase::MagneticSin,
        SpecialCase::MagneticTanh,
    ];

    pub fn field(&self) -> FieldKind {
        match self {
            SpecialCase::GravitySticking => FieldKind::Gravity,
            _ => FieldKind::Magnetic,
        }
    }
}

/// Build a special solution centred on `t = t0`.
pub fn special_solution(params: &LoopParams, case: SpecialCase, t0: f64) -> Result<ClosedFormTrajectory> {
    let field = case.field();
    let ctx = context(params, field).map_err(|e| match e {
        PorcError::CriticalRegime | PorcError::RatioUndefined(_) | PorcError::InvalidParameter { .. } => {
            PorcError::CaseUnavailable("parameters outside the domain of this special solution")
        }
        other => other,
    })?;
    let i = params.inertia();
    let w = params.omega();
    let (energy, base, amp, rate, func) = match case {
        SpecialCase::GravitySticking => {
            let w0 = params.omega0();
            let energy = if ctx.regime == Regime::GravLow {
                2.0 * params.m() * params.g() * params.r()
            } else {
                (i / (2.0 * w * w)) * (w0 * w0 + w * w).powi(2)
            };
            let amp = (1.0 + w * w / (w0 * w0)).sqrt();
            (energy, 0.0, amp, (w0 * w0 + w * w).sqrt(), SpecialFn::Cosech)
        }
        SpecialCase::MagneticSinh | SpecialCase::MagneticTan => {
            if ctx.regime != Regime::MagLow {
                return Err(PorcError::CaseUnavailable("requires omega < omega_c / 2"));
            }
            let wc = params.omega_c();
            if case == SpecialCase::MagneticSinh {
                let q = 1.0 - 2.0 * w / wc;
                let s = (w * wc / 2.0).sqrt();
                (i * w * wc, 1.5 * PI, 1.0 / q.sqrt(), q.sqrt() * s, SpecialFn::Sinh)
            } else {
                let amp = ((wc + 2.0 * w) / (wc - 2.0 * w)).sqrt();
                let rate = 0.25 * wc * (1.0 - 4.0 * w * w / (wc * wc)).sqrt();
                ((i / 8.0) * (wc + 2.0 * w).powi(2), 1.5 * PI, amp, rate, SpecialFn::Tan)
            }
        }
        SpecialCase::MagneticSin | SpecialCase::MagneticTanh => {
            if ctx.regime != Regime::MagHigh {
                return Err(PorcError::CaseUnavailable("requires omega > omega_c / 2"));
            }
            let wc = params.omega_c();
            if case == SpecialCase::MagneticSin {
                let amp = (wc / (2.0 * w - wc)).sqrt();
                let rate = w * (1.0 - wc / (2.0 * w)).sqrt();
                (i * w * wc, 1.5 * PI, amp, rate, SpecialFn::Sin)
            } else {
                let amp = ((2.0 * w + wc) / (2.0 * w - wc)).sqrt();
                let rate = 0.25 * (4.0 * w * w - wc * wc).sqrt();
                ((i / 8.0) * (wc + 2.0 * w).powi(2), 1.5 * PI, amp, rate, SpecialFn::Tanh)
            }
        }
    };
    Ok(ClosedFormTrajectory {
        field,
        regime: ctx.regime,
        window: Window::Special,
        a: 1.0 / amp,
        b: 0.0,
        modulus: EllipticModulus::new(if func == SpecialFn::Tan || func == SpecialFn::Sin { 0.0 } else { 1.0 })?,
        lambda: rate,
        t0,
        energy,
        rule: EvalRule::Special { base, amp, func },
        relations: Relations::None,
        warnings: ctx.warnings,
        potential: ctx.potential,
        v_min: ctx.v_min,
        inertia: i,
    })
}
