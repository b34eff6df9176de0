//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with its measured figure of merit and wall time.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use porc_core::classical::{ode_trajectory, quadrature_solve, special_solution, Period, SpecialCase};
use porc_core::elliptic::{complete_k, jacobi};
use porc_core::euclidean::{
    action_quadrature, bounce_mag, instanton_grav, instanton_mag, BounceBarrier, EuclideanSolution, GravityBarrier,
};
use porc_core::spectral::{printed_qes_energies, qes_levels, qes_residual, wh_oracle_etas, wh_roots, WhParity};
use porc_core::stability::{fluctuation_potential, fluctuation_spectrum, zero_mode, GridSpec};
use porc_core::{effective_potential, FieldKind, LoopParams};
use rand::{rngs::StdRng, Rng, SeedableRng};

/// Runs `body`, prints the criterion line on the real stdout (not the
/// captured test output) and fails the test on a miss or a timeout.
fn criterion(id: u32, name: &str, limit_s: u64, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    let (ok, detail) = match outcome {
        Ok(Ok(d)) if elapsed <= limit => (true, d),
        Ok(Ok(d)) => (false, format!("{d}; over the time limit")),
        Ok(Err(e)) => (false, e),
        Err(_) => (false, "panicked".to_owned()),
    };
    let line = format!(
        "acceptance {id} {} {name}: {detail} [{:.2} s / {limit_s} s]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
    assert!(ok, "{line}");
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[test]
fn criterion_1_elliptic_identities() {
    criterion(1, "elliptic identities", 1, || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let u: f64 = rng.gen_range(-50.0..50.0);
            let k: f64 = rng.gen_range(0.0..1.0);
            let j = jacobi(u, k);
            let a = (j.sn * j.sn + j.cn * j.cn - 1.0).abs();
            let b = (j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs();
            worst = worst.max(a).max(b);
        }
        let k0 = (complete_k(0.0).map_err(|e| e.to_string())? - FRAC_PI_2).abs();
        check(worst < 1e-12, || format!("identity residual {worst:e}"))?;
        check(k0 <= 1e-15, || format!("|K(0) - pi/2| = {k0:e}"))?;
        Ok(format!("max identity residual {worst:.1e}, |K(0) - pi/2| = {k0:.1e}"))
    });
}

#[test]
fn criterion_2_classical_oracle() {
    criterion(2, "classical closed forms vs integrator", 30, || {
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
        ];
        let (mut worst_theta, mut worst_energy): (f64, f64) = (0.0, 0.0);
        let mut windows = BTreeSet::new();
        for (p, field, e) in cases {
            let tr = quadrature_solve(&p, field, e, 0.37).map_err(|err| format!("{field:?} E={e}: {err}"))?;
            windows.insert(format!("{}/{:?}", tr.regime, tr.window));
            let Period::Finite(period) = tr.period() else {
                return Err(format!("{field:?} E={e}: unbounded period"));
            };
            let h = 1e-3 / p.omega().max(1.0);
            let ode = ode_trajectory(&p, field, tr.evaluate(0.0), tr.velocity(0.0), (0.0, period), h)
                .map_err(|err| err.to_string())?;
            let scale = e.max(p.energy_scale());
            for (&t, &th) in ode.times.iter().zip(&ode.theta) {
                worst_theta = worst_theta.max((th - tr.evaluate(t)).abs());
                worst_energy = worst_energy.max(tr.energy_residual(t).abs() / scale);
            }
        }
        check(windows.len() >= 8, || format!("only {} regime/window pairs covered", windows.len()))?;
        check(worst_theta < 1e-6, || format!("max |theta_closed - theta_ode| = {worst_theta:e}"))?;
        check(worst_energy < 1e-9, || format!("energy residual {worst_energy:e}"))?;
        Ok(format!(
            "{} points over {} regime/window pairs, max |dtheta| {worst_theta:.1e}, energy residual {worst_energy:.1e}",
            cases.len(),
            windows.len()
        ))
    });
}

/// Distance between two angles modulo 2 pi.
fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

#[test]
fn criterion_3_special_solutions() {
    criterion(3, "special solutions", 5, || {
        let grav_low = LoopParams::gravity(0.5, 1.0).unwrap();
        let grav_high = LoopParams::gravity(2.0, 1.0).unwrap();
        let mag_low = LoopParams::magnetic(0.3, 1.0).unwrap();
        let mag_high = LoopParams::magnetic(1.0, 1.0).unwrap();
        let top_hi = (0.5f64).asin();
        // (params, case, endpoints at t -> -inf and +inf, where the motion sticks).
        type Case = (LoopParams, SpecialCase, Option<(f64, f64)>);
        let cases: [Case; 6] = [
            (grav_low, SpecialCase::GravitySticking, Some((0.0, 0.0))),
            (grav_high, SpecialCase::GravitySticking, Some((0.0, 0.0))),
            (mag_low, SpecialCase::MagneticSinh, Some((FRAC_PI_2, FRAC_PI_2))),
            (mag_low, SpecialCase::MagneticTan, None),
            (mag_high, SpecialCase::MagneticSin, None),
            (mag_high, SpecialCase::MagneticTanh, Some((PI - top_hi, top_hi))),
        ];
        let (mut worst_eom, mut worst_fold, mut worst_period): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for (p, case, ends) in cases {
            let tr = special_solution(&p, case, 0.0).map_err(|e| format!("{case:?}: {e}"))?;
            let v = effective_potential(case.field().into(), &p);
            let i = p.inertia();
            let h = 1e-3;
            for n in 0..=400 {
                let t = n as f64 * 0.05 - 10.0;
                let acc = (-tr.velocity(t + 2.0 * h) + 8.0 * tr.velocity(t + h) - 8.0 * tr.velocity(t - h)
                    + tr.velocity(t - 2.0 * h))
                    / (12.0 * h);
                let res = (i * acc + v.force_at(tr.evaluate(t))).abs() / p.energy_scale();
                worst_eom = worst_eom.max(res);
            }
            match ends {
                Some((minus, plus)) => {
                    for (sign, end) in [(-1.0, minus), (1.0, plus)] {
                        let kappa = (v.curvature_at(end).abs() / i).sqrt();
                        let d = |n: f64| angle_gap(tr.evaluate(sign * n / kappa), end);
                        let (d8, d12) = (d(8.0), d(12.0));
                        let fold = ((d12 / d8) / (-4.0f64).exp() - 1.0).abs();
                        worst_fold = worst_fold.max(fold);
                        check(d12 < 1e-3 && fold < 0.05, || {
                            format!("{case:?} at {sign:+} inf: gap {d12:e}, e-fold mismatch {fold:e}")
                        })?;
                    }
                }
                None => {
                    let Period::Finite(period) = tr.period() else {
                        return Err(format!("{case:?}: expected periodic motion"));
                    };
                    for n in 0..50 {
                        let t = n as f64 * 0.1;
                        worst_period = worst_period.max(angle_gap(tr.evaluate(t + period), tr.evaluate(t)));
                    }
                }
            }
        }
        check(worst_eom < 1e-9, || format!("EOM residual {worst_eom:e}"))?;
        check(worst_period < 1e-9, || format!("periodic forms off by {worst_period:e}"))?;
        Ok(format!(
            "5 forms (6 cases), EOM residual {worst_eom:.1e}, endpoint e-folding mismatch {worst_fold:.1e}, period closure {worst_period:.1e}"
        ))
    });
}

fn eom_max(sol: &EuclideanSolution, scale: f64) -> f64 {
    (0..=200)
        .map(|i| {
            let tau = (i as f64 - 100.0) / 10.0 / sol.rate;
            sol.eom_residual(tau).abs() / scale
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_4_euclidean_actions() {
    criterion(4, "Euclidean actions and equations of motion", 10, || {
        let mut sols: Vec<(String, EuclideanSolution, f64)> = Vec::new();
        for a in [0.1, 0.5, 0.9] {
            let p = LoopParams::gravity(1.0, a).unwrap();
            for b in [GravityBarrier::Zero, GravityBarrier::Pi] {
                sols.push((format!("{b:?} a={a}"), instanton_grav(&p, b).map_err(|e| e.to_string())?, p.energy_scale()));
            }
        }
        for a in [1.5, 2.0, 5.0] {
            let p = LoopParams::gravity(1.0, a).unwrap();
            let s = instanton_grav(&p, GravityBarrier::SingleWell).map_err(|e| e.to_string())?;
            sols.push((format!("SingleWell a={a}"), s, p.energy_scale()));
        }
        for a in [0.5, 1.0, 1.5] {
            let p = LoopParams::magnetic(1.0, a).unwrap();
            for b in [BounceBarrier::First, BounceBarrier::Second] {
                sols.push((format!("bounce {b:?} a={a}"), bounce_mag(&p, b).map_err(|e| e.to_string())?, p.energy_scale()));
            }
        }
        let mut worst_s: f64 = 0.0;
        for (label, s, _) in &sols {
            let num = action_quadrature(s).map_err(|e| e.to_string())?;
            let rel = (num - s.s_closed).abs() / num;
            worst_s = worst_s.max(rel);
            check(rel < 1e-8, || format!("{label}: S_num {num} vs S_closed {}", s.s_closed))?;
        }
        let p = LoopParams::magnetic(1.0, 1.0).unwrap();
        let inst = instanton_mag(&p).map_err(|e| e.to_string())?;
        let inst_gap = (inst.s_printed - inst.s_numeric).abs() / inst.s_numeric;
        sols.push(("magnetic instanton".into(), inst, p.energy_scale()));
        let worst_eom = sols.iter().map(|(_, s, sc)| eom_max(s, *sc)).fold(0.0, f64::max);
        check(worst_eom < 1e-8, || format!("EOM residual {worst_eom:e}"))?;
        Ok(format!(
            "{} actions, max |S_num - S_closed|/S_num {worst_s:.1e}; EOM residual {worst_eom:.1e} over 5 families; \
             magnetic-instanton printed action differs from quadrature by {:.1}% (reported only)",
            sols.len() - 1,
            100.0 * inst_gap
        ))
    });
}

#[test]
fn criterion_5_stability() {
    criterion(5, "fluctuation spectra", 20, || {
        let grid = GridSpec::default();
        let instantons = [
            ("gravity-zero", instanton_grav(&LoopParams::gravity(1.0, 0.5).unwrap(), GravityBarrier::Zero)),
            ("gravity-pi", instanton_grav(&LoopParams::gravity(1.0, 0.5).unwrap(), GravityBarrier::Pi)),
            (
                "gravity-single-well",
                instanton_grav(&LoopParams::gravity(1.0, 2.0).unwrap(), GravityBarrier::SingleWell),
            ),
            ("magnetic-instanton", instanton_mag(&LoopParams::magnetic(1.0, 1.0).unwrap())),
        ];
        let mut worst: f64 = 0.0;
        for (label, sol) in instantons {
            let sol = sol.map_err(|e| format!("{label}: {e}"))?;
            let problem = fluctuation_potential(&sol, grid).map_err(|e| format!("{label}: {e}"))?;
            let spec = fluctuation_spectrum(&problem, 2).map_err(|e| format!("{label}: {e}"))?;
            // Every loop here spins at omega = 1.
            let gap = spec.eigenvalues[0].abs();
            worst = worst.max(gap);
            check(gap < 1e-4, || format!("{label}: lambda_0 = {:e}", spec.eigenvalues[0]))?;
            check(spec.nodes[0] == 0, || format!("{label}: ground mode has {} nodes", spec.nodes[0]))?;
            check(zero_mode(&problem).nodes == 0, || format!("{label}: zero mode has nodes"))?;
        }
        let bounce = bounce_mag(&LoopParams::magnetic(1.0, 1.0).unwrap(), BounceBarrier::First).map_err(|e| e.to_string())?;
        let problem = fluctuation_potential(&bounce, grid).map_err(|e| e.to_string())?;
        let spec = fluctuation_spectrum(&problem, 2).map_err(|e| e.to_string())?;
        let zm = zero_mode(&problem);
        check(spec.eigenvalues[0] < 0.0, || format!("bounce lambda_0 = {}", spec.eigenvalues[0]))?;
        check(zm.nodes == 1, || format!("bounce zero mode has {} nodes", zm.nodes))?;
        check(spec.eigenvalues[1].abs() < 1e-4 && spec.nodes[1] == 1, || {
            format!("bounce second level {} with {} nodes", spec.eigenvalues[1], spec.nodes[1])
        })?;
        Ok(format!(
            "4 instantons: max |lambda_0| {worst:.1e} omega^2, nodeless; bounce lambda_0 = {:.6}, zero mode with 1 node",
            spec.eigenvalues[0]
        ))
    });
}

#[test]
fn criterion_6_qes_spectrum() {
    criterion(6, "quasi-exactly solvable spectrum", 5, || {
        let (mut worst_res, mut worst_e02, mut worst_e13): (f64, f64, f64) = (0.0, 0.0, 0.0);
        let mut flags = 0;
        for n in 0..=3usize {
            for w in [0.25, 1.0, 2.5] {
                let p = LoopParams::magnetic(w, (n + 1) as f64).unwrap();
                let levels = qes_levels(&p, 1.0).map_err(|e| e.to_string())?;
                check(levels.len() == n + 1, || format!("n={n}: {} levels", levels.len()))?;
                let mut printed: Vec<f64> = printed_qes_energies(n, w, p.omega_c(), 1.0)
                    .unwrap()
                    .iter()
                    .map(|l| l.energy)
                    .collect();
                printed.sort_by(f64::total_cmp);
                for (l, e) in levels.iter().zip(&printed) {
                    worst_res = worst_res.max(qes_residual(l, 1000));
                    let d = (l.energy - e).abs() / e.abs().max(1.0);
                    if n % 2 == 0 {
                        worst_e02 = worst_e02.max(d);
                    } else {
                        worst_e13 = worst_e13.max(d);
                    }
                    check(l.admissible == (n % 2 == 0), || format!("n={n}: admissible = {}", l.admissible))?;
                    flags += 1;
                }
            }
        }
        check(worst_res < 1e-10, || format!("operator residual {worst_res:e}"))?;
        check(worst_e02 < 1e-12, || format!("n = 0, 2 energies off by {worst_e02:e}"))?;
        Ok(format!(
            "residual {worst_res:.1e}, n=0,2 energy gap {worst_e02:.1e}, n=1,3 (regrouped) gap {worst_e13:.1e}, \
             {flags} admissibility flags false exactly for odd n"
        ))
    });
}

#[test]
fn criterion_7_whittaker_hill() {
    criterion(7, "Whittaker-Hill fraction vs Fourier matrix", 30, || {
        let mut worst: f64 = 0.0;
        for beta in [0.5, 2.0, 4.0] {
            for rho in [0.0, 1.0, 2.0] {
                for parity in [WhParity::EvenGc, WhParity::OddGs] {
                    let (roots, _) = wh_roots(parity, beta, rho, 4).map_err(|e| e.to_string())?;
                    let oracle = wh_oracle_etas(parity, beta, rho, 64).map_err(|e| e.to_string())?;
                    for (r, o) in roots.iter().zip(&oracle) {
                        let rel = (r - o).abs() / o.abs().max(1.0);
                        worst = worst.max(rel);
                        check(rel < 1e-8, || format!("beta={beta} rho={rho} {parity:?}: {r} vs {o}"))?;
                    }
                }
            }
        }
        let mut worst_free: f64 = 0.0;
        for rho in [0.0, 1.0, 2.0] {
            for (parity, k0) in [(WhParity::EvenGc, 0), (WhParity::OddGs, 1)] {
                let (roots, _) = wh_roots(parity, 1e-7, rho, 4).map_err(|e| e.to_string())?;
                for (i, eta) in roots.iter().enumerate() {
                    let k = (i + k0) as f64;
                    worst_free = worst_free.max((eta - 4.0 * k * k).abs());
                }
            }
        }
        check(worst_free < 1e-10, || format!("free-rotor limit off by {worst_free:e}"))?;
        Ok(format!(
            "72 levels, max relative gap {worst:.1e}; beta -> 0 gives eta = 4 r^2 within {worst_free:.1e}"
        ))
    });
}

#[test]
fn criterion_8_cli_golden_files() {
    criterion(8, "CLI golden files", 10, || {
        let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
        let cases: [(&str, &[&str]); 8] = [
            (
                "potential.json",
                &["potential", "--field", "magnetic", "--m", "1", "--r", "1", "--omega", "1", "--q", "1", "--b", "1", "--samples", "13"],
            ),
            ("regime.json", &["regime", "--m", "1", "--r", "1", "--omega", "2", "--g", "1"]),
            (
                "trajectory.csv",
                &["trajectory", "--energy", "1.2", "--omega", "0.5", "--g", "1", "--samples", "11", "--format", "csv"],
            ),
            ("instanton.json", &["instanton", "--field", "gravity", "--barrier", "pi", "--a", "0.5", "--samples", "9"]),
            ("bounce.json", &["bounce", "--a", "1", "--samples", "9"]),
            (
                "stability.json",
                &["stability", "--field", "magnetic", "--barrier", "first", "--a", "1", "--levels", "3", "--stride", "400"],
            ),
            ("spectrum-mag.json", &["spectrum-mag", "--n", "2", "--omega", "1"]),
            (
                "spectrum-grav.csv",
                &["spectrum-grav", "--omega", "1", "--g", "1", "--count", "3", "--format", "csv"],
            ),
        ];
        for (file, args) in cases {
            let out = Command::new(env!("CARGO_BIN_EXE_porc"))
                .args(args)
                .output()
                .map_err(|e| e.to_string())?;
            check(out.status.success(), || format!("{file}: exit {:?}", out.status.code()))?;
            let want = std::fs::read(golden.join(file)).map_err(|e| format!("{file}: {e}"))?;
            check(out.stdout == want, || format!("{file}: output differs from the golden file"))?;
        }
        Ok("8 commands byte-identical to their golden files".to_owned())
    });
}
