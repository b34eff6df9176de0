use serde::Serialize;

use crate::error::{PorcError, Result};
use crate::params::{FieldKind, LoopParams};
use crate::potential::{effective_potential, minimum_value, EffectivePotential};

/// Relative energy drift above which the step is declared too coarse.
const MAX_DRIFT: f64 = 1e-6;

/// Fixed-step RK4 solution of `m r^2 theta'' = -V'(theta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeTrajectory {
    pub step: f64,
    pub times: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_dot: Vec<f64>,
    /// `max |E(t) - E(0)| / max(|E(0)|, m r^2 omega^2)`.
    pub max_drift: f64,
}

impl OdeTrajectory {
    /// Linear interpolation of `theta` at `t` inside the span.
    pub fn theta_at(&self, t: f64) -> f64 {
        let x = (t - self.times[0]) / self.step;
        let i = (x.floor().max(0.0) as usize).min(self.times.len() - 2);
        let f = x - i as f64;
        self.theta[i] * (1.0 - f) + self.theta[i + 1] * f
    }
}

/// Shifted energy `(1/2) m r^2 theta_dot^2 + V(theta) - V_min`.
pub fn energy_of(params: &LoopParams, field: FieldKind, theta: f64, theta_dot: f64) -> f64 {
    let v = effective_potential(field.into(), params);
    0.5 * params.inertia() * theta_dot * theta_dot + v.value_at(theta) - minimum_value(&v, params)
}

fn rk4_step(v: &EffectivePotential, inertia: f64, th: f64, om: f64, h: f64) -> (f64, f64) {
    let acc = |x: f64| -v.force_at(x) / inertia;
    let (k1x, k1v) = (om, acc(th));
    let (k2x, k2v) = (om + 0.5 * h * k1v, acc(th + 0.5 * h * k1x));
    let (k3x, k3v) = (om + 0.5 * h * k2v, acc(th + 0.5 * h * k2x));
    let (k4x, k4v) = (om + h * k3v, acc(th + h * k3x));
    (
        th + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        om + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Integrate from `t_span.0` to `t_span.1` with step `h` (the last step is
/// shortened to land on the end point).
pub fn ode_trajectory(
    params: &LoopParams,
    field: FieldKind,
    theta0: f64,
    theta_dot0: f64,
    t_span: (f64, f64),
    h: f64,
) -> Result<OdeTrajectory> {
    let (t_start, t_end) = t_span;
    if !(h > 0.0 && h.is_finite()) || !(t_start.is_finite() && t_end.is_finite() && t_end >= t_start) {
        return Err(PorcError::InvalidParameter {
            name: "h",
            value: h,
            reason: "step must be positive and the span finite",
        });
    }
    let v = effective_potential(field.into(), params);
    let inertia = params.inertia();
    let energy = |th: f64, om: f64| 0.5 * inertia * om * om + v.value_at(th);
    let n = ((t_end - t_start) / h).ceil() as usize;
    let step = if n == 0 { h } else { (t_end - t_start) / n as f64 };

    let mut times = Vec::with_capacity(n + 1);
    let mut theta = Vec::with_capacity(n + 1);
    let mut theta_dot = Vec::with_capacity(n + 1);
    let (mut th, mut om) = (theta0, theta_dot0);
    let e0 = energy(th, om);
    let scale = (e0 - minimum_value(&v, params)).abs().max(params.energy_scale());
    let mut max_drift: f64 = 0.0;
    times.push(t_start);
    theta.push(th);
    theta_dot.push(om);
    for i in 1..=n {
        (th, om) = rk4_step(&v, inertia, th, om, step);
        max_drift = max_drift.max((energy(th, om) - e0).abs() / scale);
        times.push(t_start + i as f64 * step);
        theta.push(th);
        theta_dot.push(om);
    }
    if max_drift > MAX_DRIFT {
        return Err(PorcError::StepTooLarge(max_drift));
    }
    Ok(OdeTrajectory {
        step,
        times,
        theta,
        theta_dot,
        max_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn equilibrium_stays_put() {
        let p = LoopParams::gravity(0.5, 1.0).unwrap();
        let tr = ode_trajectory(&p, FieldKind::Gravity, PI, 0.0, (0.0, 50.0), 1e-3).unwrap();
        assert!(tr.theta.iter().all(|t| (t - PI).abs() < 1e-12));
    }

    #[test]
    fn small_oscillation_frequency() {
        let p = LoopParams::gravity(0.5, 1.0).unwrap();
        let v = effective_potential(FieldKind::Gravity.into(), &p);
        let expected = v.curvature_at(PI) / p.inertia();
        let tr = ode_trajectory(&p, FieldKind::Gravity, PI + 1e-3, 0.0, (0.0, 40.0), 1e-3).unwrap();
        // Successive upward zero crossings of theta - pi.
        let mut crossings = Vec::new();
        for i in 1..tr.theta.len() {
            let (a, b) = (tr.theta[i - 1] - PI, tr.theta[i] - PI);
            if a < 0.0 && b >= 0.0 {
                crossings.push(tr.times[i - 1] + tr.step * a / (a - b));
            }
        }
        let period = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
        let omega2 = (2.0 * PI / period).powi(2);
        assert!((omega2 - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn drift_is_tiny_at_fine_steps() {
        let p = LoopParams::magnetic(1.0, 1.0).unwrap();
        let tr = ode_trajectory(&p, FieldKind::Magnetic, 4.0, 0.3, (0.0, 100.0), 1e-3).unwrap();
        assert!(tr.max_drift < 1e-9);
    }

    #[test]
    fn coarse_steps_are_rejected() {
        let p = LoopParams::gravity(3.0, 1.0).unwrap();
        assert!(matches!(
            ode_trajectory(&p, FieldKind::Gravity, 0.1, 5.0, (0.0, 50.0), 0.5),
            Err(PorcError::StepTooLarge(_))
        ));
    }

    #[test]
    fn energy_reference_points() {
        let p = LoopParams::gravity(0.5, 1.0).unwrap();
        assert!((energy_of(&p, FieldKind::Gravity, 0.0, 0.0) - 2.0).abs() < 1e-14);
        assert!(energy_of(&p, FieldKind::Gravity, PI, 0.0).abs() < 1e-14);
    }
}
