//! Real-time motion of the bead: closed-form elliptic trajectories, the
//! special separatrix solutions and an RK4 integrator used as an oracle.

mod closed_form;
mod ode;
mod special;

pub use closed_form::{quadrature_solve, ClosedFormTrajectory, EvalRule, Period, Relations, SpecialFn, Window};
pub use ode::{energy_of, ode_trajectory, OdeTrajectory};
pub use special::{special_solution, SpecialCase};

/// Continuous branch of `atan(c tan(psi))`, agreeing with it on `|psi| < pi/2`
/// and advancing by `pi` whenever `psi` does.
pub(crate) fn lift(c: f64, psi: f64) -> f64 {
    let (s, co) = psi.sin_cos();
    psi + ((c - 1.0) * s * co).atan2(co * co + c * s * s)
}

/// `d lift(c, psi) / d psi`.
pub(crate) fn lift_slope(c: f64, psi: f64) -> f64 {
    let (s, co) = psi.sin_cos();
    c / (co * co + c * c * s * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_matches_arctangent_on_principal_branch() {
        for i in -15..=15 {
            let psi = i as f64 * 0.1;
            assert!((lift(2.5, psi) - (2.5 * psi.tan()).atan()).abs() < 1e-14);
        }
        assert!((lift(0.3, std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn lift_slope_matches_finite_difference() {
        for i in -40..40 {
            let psi = i as f64 * 0.17;
            let h = 1e-6;
            let fd = (lift(3.0, psi + h) - lift(3.0, psi - h)) / (2.0 * h);
            assert!((fd - lift_slope(3.0, psi)).abs() < 1e-7);
        }
    }
}
