//! Closed-form trajectories against direct integration of the equation of motion.

use porc_core::classical::{ode_trajectory, quadrature_solve, special_solution, Period, SpecialCase};
use porc_core::{FieldKind, LoopParams};

fn compare(p: &LoopParams, field: FieldKind, energy: f64) -> f64 {
    let tr = quadrature_solve(p, field, energy, 0.37).unwrap();
    let Period::Finite(period) = tr.period() else { panic!("bounded window") };
    let h = 1e-3 / p.omega().max(1.0);
    let ode = ode_trajectory(p, field, tr.evaluate(0.0), tr.velocity(0.0), (0.0, period), h).unwrap();
    ode.times
        .iter()
        .zip(&ode.theta)
        .map(|(&t, &th)| (th - tr.evaluate(t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn closed_forms_track_the_integrator_in_every_window() {
    let grav = |w| LoopParams::gravity(w, 1.0).unwrap();
    let mag = |w| LoopParams::magnetic(w, 1.0).unwrap();
    let cases = [
        (grav(0.5), FieldKind::Gravity, 0.5),
        (grav(0.5), FieldKind::Gravity, 1.2),
        (grav(0.5), FieldKind::Gravity, 3.0),
        (grav(2.0), FieldKind::Gravity, 0.3),
        (grav(2.0), FieldKind::Gravity, 3.0),
        (grav(2.0), FieldKind::Gravity, 7.0),
        (mag(0.3), FieldKind::Magnetic, 0.15),
        (mag(0.3), FieldKind::Magnetic, 0.28),
        (mag(0.3), FieldKind::Magnetic, 0.31),
        (mag(0.3), FieldKind::Magnetic, 1.0),
        (mag(1.0), FieldKind::Magnetic, 0.5),
        (mag(1.0), FieldKind::Magnetic, 1.05),
        (mag(1.0), FieldKind::Magnetic, 1.3),
        (mag(1.0), FieldKind::Magnetic, 2.0),
        (LoopParams::new(0.8, 1.7, 2.2, 9.81, 0.0, 0.0).unwrap(), FieldKind::Gravity, 12.0),
        (LoopParams::new(2.5, 0.6, 1.1, 0.0, 3.0, 1.2).unwrap(), FieldKind::Magnetic, 0.2),
    ];
    for (p, field, e) in cases {
        let err = compare(&p, field, e);
        assert!(err < 1e-6, "{field:?} omega={} E={e}: {err:e}", p.omega());
    }
}

#[test]
fn special_solutions_track_the_integrator() {
    let cases = [
        (LoopParams::gravity(0.5, 1.0).unwrap(), SpecialCase::GravitySticking),
        (LoopParams::magnetic(0.3, 1.0).unwrap(), SpecialCase::MagneticSinh),
        (LoopParams::magnetic(0.3, 1.0).unwrap(), SpecialCase::MagneticTan),
        (LoopParams::magnetic(1.0, 1.0).unwrap(), SpecialCase::MagneticSin),
        (LoopParams::magnetic(1.0, 1.0).unwrap(), SpecialCase::MagneticTanh),
    ];
    for (p, case) in cases {
        let tr = special_solution(&p, case, 0.0).unwrap();
        // Separatrix motion is unstable, so only a few time units are compared.
        let ode = ode_trajectory(&p, case.field(), tr.evaluate(-2.0), tr.velocity(-2.0), (-2.0, 2.0), 1e-3).unwrap();
        for (&t, &th) in ode.times.iter().zip(&ode.theta) {
            assert!((th - tr.evaluate(t)).abs() < 1e-8, "{case:?} at t={t}");
        }
    }
}

#[test]
fn small_amplitude_period_matches_harmonic_limit() {
    let p = LoopParams::gravity(0.5, 1.0).unwrap();
    let barrier = 2.0;
    let tr = quadrature_solve(&p, FieldKind::Gravity, 1e-4 * barrier, 0.0).unwrap();
    let Period::Finite(period) = tr.period() else { panic!() };
    // V''(pi) / (m r^2) = omega0^2 - omega^2.
    let harmonic = 2.0 * std::f64::consts::PI / (1.0f64 - 0.25).sqrt();
    assert!((period - harmonic).abs() / harmonic < 5e-3);
}
