use std::f64::consts::PI;

use log::{debug, info};
use porc_core::classical::{ode_trajectory, quadrature_solve, special_solution, Period, SpecialCase, Window};
use porc_core::euclidean::{
    bounce_mag, instanton_grav, instanton_mag, tunneling_exponent, BounceBarrier, EuclideanSolution, Family,
    GravityBarrier, SolutionKind,
};
use porc_core::potential::{Degeneracy, Extremum};
use porc_core::spectral::{
    printed_qes_energies, qes_levels, qes_residual, wh_eigenvalues, Parity, Periodicity, PhiTerm, PrintedLevel,
    QesParams, WhLevel, WhParity,
};
use porc_core::stability::{fluctuation_potential, fluctuation_spectrum, operator_residual, zero_mode, GridSpec};
use porc_core::{classify_regime, effective_potential, find_extrema, FieldKind, LoopParams, Regime};
use serde::Serialize;

use crate::args::{BarrierArg, Common, FieldArg, ParityArg, SpecialArg};
use crate::error::CliError;
use crate::output::{Cell, Payload, Table};

type Out = Result<Payload, CliError>;

impl From<FieldArg> for FieldKind {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Gravity => FieldKind::Gravity,
            FieldArg::Magnetic => FieldKind::Magnetic,
        }
    }
}

/// Loop parameters and `hbar` from either input style.
pub fn resolve(c: &Common, field: FieldKind) -> Result<(LoopParams, f64), CliError> {
    let raw = [c.m, c.r, c.g, c.q, c.b, c.hbar].iter().any(Option::is_some);
    let scaled = c.a.is_some() || c.xi.is_some() || c.n.is_some();
    if raw && scaled {
        return Err(CliError::usage(
            "raw inputs (--m --r --g --q --b --hbar) cannot be mixed with dimensionless groups (--a --xi --n)",
        ));
    }
    if !scaled {
        let p = LoopParams::new(
            c.m.unwrap_or(1.0),
            c.r.unwrap_or(1.0),
            c.omega.unwrap_or(1.0),
            c.g.unwrap_or(1.0),
            c.q.unwrap_or(1.0),
            c.b.unwrap_or(1.0),
        )?;
        return Ok((p, c.hbar.unwrap_or(1.0)));
    }
    if c.xi.is_some() && c.omega.is_some() {
        return Err(CliError::usage("--xi and --omega both fix the spin rate"));
    }
    let omega = c.xi.map(|x| x / 4.0).or(c.omega).unwrap_or(1.0);
    let p = match field {
        FieldKind::Gravity => {
            if c.n.is_some() {
                return Err(CliError::usage("--n applies to the magnetic field"));
            }
            LoopParams::new(1.0, 1.0, omega, c.a.map_or(1.0, |a| a * omega * omega), 0.0, 0.0)?
        }
        FieldKind::Magnetic => {
            let omega_c = match (c.a, c.n) {
                (Some(_), Some(_)) => return Err(CliError::usage("--a and --n both fix omega_c")),
                (Some(a), None) => a * omega,
                (None, Some(n)) => f64::from(n) + 1.0,
                (None, None) => 1.0,
            };
            LoopParams::new(1.0, 1.0, omega, 0.0, omega_c, 1.0)?
        }
    };
    Ok((p, 1.0))
}

#[derive(Serialize)]
struct Coefficients {
    a: f64,
    b: f64,
    offset: f64,
    shift: f64,
}

#[derive(Serialize)]
struct PotentialSample {
    theta: f64,
    v: f64,
    dv: f64,
    d2v: f64,
}

#[derive(Serialize)]
struct PotentialOut {
    field: FieldKind,
    coefficients: Coefficients,
    extrema: Vec<Extremum>,
    degeneracy: Degeneracy,
    samples: Vec<PotentialSample>,
}

pub fn potential(c: &Common, field: FieldArg, samples: usize) -> Out {
    if samples < 2 {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    let field = FieldKind::from(field);
    let (p, _) = resolve(c, field)?;
    let v = effective_potential(field.into(), &p);
    let report = find_extrema(&v, &p)?;
    info!("potential: {} extrema, {:?}", report.extrema.len(), report.degeneracy);
    let samples: Vec<PotentialSample> = (0..samples)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / (samples - 1) as f64;
            PotentialSample {
                theta,
                v: v.value_at(theta),
                dv: v.force_at(theta),
                d2v: v.curvature_at(theta),
            }
        })
        .collect();
    let table = Table {
        header: &["theta", "v", "dv", "d2v"],
        rows: samples
            .iter()
            .map(|s| vec![s.theta.into(), s.v.into(), s.dv.into(), s.d2v.into()])
            .collect(),
    };
    Payload::new(
        &PotentialOut {
            field,
            coefficients: Coefficients {
                a: v.coeff_a,
                b: v.coeff_b,
                offset: v.offset,
                shift: v.shift,
            },
            extrema: report.extrema,
            degeneracy: report.degeneracy,
            samples,
        },
        table,
    )
}

#[derive(Serialize)]
struct RegimeOut {
    regime: Regime,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_grav: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_mag: Option<f64>,
}

pub fn regime(c: &Common, field: FieldArg) -> Out {
    let field = FieldKind::from(field);
    let (p, _) = resolve(c, field)?;
    let regime = classify_regime(&p, field)?;
    let (out, name, ratio) = match field {
        FieldKind::Gravity => {
            let a = p.a_grav()?;
            (RegimeOut { regime, a_grav: Some(a), a_mag: None }, "a_grav", a)
        }
        FieldKind::Magnetic => {
            let a = p.a_mag()?;
            (RegimeOut { regime, a_grav: None, a_mag: Some(a) }, "a_mag", a)
        }
    };
    let header: &'static [&'static str] = if name == "a_grav" { &["regime", "a_grav"] } else { &["regime", "a_mag"] };
    let table = Table {
        header,
        rows: vec![vec![regime.as_str().into(), ratio.into()]],
    };
    Payload::new(&out, table)
}

#[derive(Serialize)]
struct TrajectorySample {
    t: f64,
    theta_closed: f64,
    theta_ode: f64,
    theta_dot_closed: f64,
    energy_residual: f64,
}

#[derive(Serialize)]
struct TrajectoryOut {
    field: FieldKind,
    regime: Regime,
    window: Window,
    energy: f64,
    k: f64,
    lambda: f64,
    t0: f64,
    period: Option<f64>,
    warnings: Vec<String>,
    ode_step: f64,
    ode_max_drift: f64,
    /// `max |theta_closed - theta_ode|` over the samples.
    max_abs_diff: f64,
    /// `max |energy residual| / max(E, m r^2 omega^2)`.
    max_energy_residual: f64,
    samples: Vec<TrajectorySample>,
}

fn special_case(s: SpecialArg) -> SpecialCase {
    match s {
        SpecialArg::GravitySticking => SpecialCase::GravitySticking,
        SpecialArg::MagneticSinh => SpecialCase::MagneticSinh,
        SpecialArg::MagneticTan => SpecialCase::MagneticTan,
        SpecialArg::MagneticSin => SpecialCase::MagneticSin,
        SpecialArg::MagneticTanh => SpecialCase::MagneticTanh,
    }
}

pub struct TrajectoryOpts {
    pub field: Option<FieldArg>,
    pub energy: Option<f64>,
    pub special: Option<SpecialArg>,
    pub t0: f64,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub samples: usize,
    pub h: f64,
}

pub fn trajectory(c: &Common, o: &TrajectoryOpts) -> Out {
    if o.samples < 2 {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    let (tr, field, p) = match (o.special, o.energy) {
        (Some(s), _) => {
            let case = special_case(s);
            if o.field.is_some_and(|f| FieldKind::from(f) != case.field()) {
                return Err(CliError::usage("--field disagrees with the special solution"));
            }
            let (p, _) = resolve(c, case.field())?;
            (special_solution(&p, case, o.t0)?, case.field(), p)
        }
        (None, Some(e)) => {
            let field = o.field.map_or(FieldKind::Gravity, FieldKind::from);
            let (p, _) = resolve(c, field)?;
            (quadrature_solve(&p, field, e, o.t0)?, field, p)
        }
        (None, None) => return Err(CliError::usage("trajectory needs --energy or --special")),
    };
    let period = match tr.period() {
        Period::Finite(t) => Some(t),
        Period::Unbounded => None,
    };
    let start = o.t_start.unwrap_or(if period.is_some() { o.t0 } else { o.t0 - 2.0 });
    let end = o.t_end.unwrap_or(match period {
        Some(t) => start + t,
        None => o.t0 + 2.0,
    });
    if end.partial_cmp(&start) != Some(std::cmp::Ordering::Greater) {
        return Err(CliError::usage("the time span must have t_end > t_start"));
    }
    // Integrator steps that land on every output time.
    let interval = (end - start) / (o.samples - 1) as f64;
    let per_sample = (interval / o.h).ceil().max(1.0);
    let step = interval / per_sample;
    debug!("trajectory: {} integrator steps per sample", per_sample);
    let ode = ode_trajectory(&p, field, tr.evaluate(start), tr.velocity(start), (start, end), step)?;
    let scale = tr.energy.max(p.energy_scale());
    let samples: Vec<TrajectorySample> = (0..o.samples)
        .map(|j| {
            let t = if j + 1 == o.samples { end } else { start + j as f64 * interval };
            TrajectorySample {
                t,
                theta_closed: tr.evaluate(t),
                theta_ode: ode.theta_at(t),
                theta_dot_closed: tr.velocity(t),
                energy_residual: tr.energy_residual(t),
            }
        })
        .collect();
    let max_abs_diff = samples.iter().map(|s| (s.theta_closed - s.theta_ode).abs()).fold(0.0, f64::max);
    let max_energy_residual = samples.iter().map(|s| s.energy_residual.abs()).fold(0.0, f64::max) / scale;
    info!("trajectory: window {:?}, max |closed - ode| = {max_abs_diff:e}", tr.window);
    let table = Table {
        header: &["t", "theta_closed", "theta_ode", "theta_dot_closed", "energy_residual"],
        rows: samples
            .iter()
            .map(|s| {
                vec![
                    s.t.into(),
                    s.theta_closed.into(),
                    s.theta_ode.into(),
                    s.theta_dot_closed.into(),
                    s.energy_residual.into(),
                ]
            })
            .collect(),
    };
    Payload::new(
        &TrajectoryOut {
            field,
            regime: tr.regime,
            window: tr.window,
            energy: tr.energy,
            k: tr.k(),
            lambda: tr.lambda,
            t0: tr.t0,
            period,
            warnings: tr.warnings.clone(),
            ode_step: ode.step,
            ode_max_drift: ode.max_drift,
            max_abs_diff,
            max_energy_residual,
            samples,
        },
        table,
    )
}

#[derive(Serialize)]
struct ProfileSample {
    tau: f64,
    theta: f64,
    theta_prime: f64,
}

#[derive(Serialize)]
struct EuclideanOut {
    family: Family,
    kind: SolutionKind,
    field: FieldKind,
    ratio: f64,
    rate: f64,
    barrier_theta: f64,
    vacuum_minus: f64,
    vacuum_plus: f64,
    turning_point: Option<f64>,
    s_closed: f64,
    s_printed: f64,
    s_numeric: f64,
    /// `|s_numeric - s_closed| / s_numeric`.
    s_rel_diff: f64,
    hbar: f64,
    tunneling_exponent: f64,
    /// `max |m r^2 theta'' - V'(theta)| / (m r^2 omega^2)` over the samples.
    max_eom_residual: f64,
    samples: Vec<ProfileSample>,
}

fn gravity_barrier(b: Option<BarrierArg>, p: &LoopParams) -> Result<GravityBarrier, CliError> {
    Ok(match b {
        Some(BarrierArg::Zero) => GravityBarrier::Zero,
        Some(BarrierArg::Pi) => GravityBarrier::Pi,
        Some(BarrierArg::SingleWell) => GravityBarrier::SingleWell,
        Some(other) => return Err(CliError::usage(format!("--barrier {other:?} does not apply to gravity"))),
        None => match classify_regime(p, FieldKind::Gravity)? {
            Regime::GravLow => GravityBarrier::SingleWell,
            _ => GravityBarrier::Zero,
        },
    })
}

fn bounce_barrier(b: BarrierArg) -> Result<BounceBarrier, CliError> {
    match b {
        BarrierArg::First => Ok(BounceBarrier::First),
        BarrierArg::Second => Ok(BounceBarrier::Second),
        other => Err(CliError::usage(format!("--barrier {other:?} does not apply to a bounce"))),
    }
}

fn euclidean_payload(sol: &EuclideanSolution, p: &LoopParams, hbar: f64, span: f64, samples: usize) -> Out {
    if samples < 2 || span.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(CliError::usage("--samples must be at least 2 and --span positive"));
    }
    let half = span / sol.rate;
    let samples: Vec<ProfileSample> = (0..samples)
        .map(|i| {
            let tau = -half + 2.0 * half * i as f64 / (samples - 1) as f64;
            ProfileSample {
                tau,
                theta: sol.theta(tau),
                theta_prime: sol.theta_prime(tau),
            }
        })
        .collect();
    let scale = p.energy_scale();
    let max_eom_residual = samples.iter().map(|s| sol.eom_residual(s.tau).abs()).fold(0.0, f64::max) / scale;
    info!("{:?}: S_closed = {}, S_numeric = {}", sol.family, sol.s_closed, sol.s_numeric);
    let table = Table {
        header: &["tau", "theta", "theta_prime"],
        rows: samples
            .iter()
            .map(|s| vec![s.tau.into(), s.theta.into(), s.theta_prime.into()])
            .collect(),
    };
    Payload::new(
        &EuclideanOut {
            family: sol.family,
            kind: sol.kind,
            field: sol.field,
            ratio: sol.ratio,
            rate: sol.rate,
            barrier_theta: sol.barrier_theta,
            vacuum_minus: sol.vacuum_minus,
            vacuum_plus: sol.vacuum_plus,
            turning_point: sol.turning_point,
            s_closed: sol.s_closed,
            s_printed: sol.s_printed,
            s_numeric: sol.s_numeric,
            s_rel_diff: (sol.s_numeric - sol.s_closed).abs() / sol.s_numeric.abs(),
            hbar,
            tunneling_exponent: tunneling_exponent(sol, hbar)?,
            max_eom_residual,
            samples,
        },
        table,
    )
}

pub fn instanton(c: &Common, field: FieldArg, barrier: Option<BarrierArg>, span: f64, samples: usize) -> Out {
    let field = FieldKind::from(field);
    let (p, hbar) = resolve(c, field)?;
    let sol = match field {
        FieldKind::Gravity => instanton_grav(&p, gravity_barrier(barrier, &p)?)?,
        FieldKind::Magnetic => match barrier {
            None | Some(BarrierArg::Instanton) => instanton_mag(&p)?,
            Some(other) => {
                return Err(CliError::usage(format!(
                    "--barrier {other:?} does not apply to the magnetic instanton"
                )))
            }
        },
    };
    euclidean_payload(&sol, &p, hbar, span, samples)
}

pub fn bounce(c: &Common, barrier: BarrierArg, span: f64, samples: usize) -> Out {
    let (p, hbar) = resolve(c, FieldKind::Magnetic)?;
    let sol = bounce_mag(&p, bounce_barrier(barrier)?)?;
    euclidean_payload(&sol, &p, hbar, span, samples)
}

#[derive(Serialize)]
struct StabilitySample {
    tau: f64,
    w: f64,
    zero_mode: f64,
}

#[derive(Serialize)]
struct StabilityOut {
    family: Family,
    w_inf: f64,
    step: f64,
    grid_points: usize,
    printed_deviation: Option<f64>,
    zero_mode_nodes: usize,
    /// `max |(-D2 + W) chi_0|` for the normalised zero mode.
    zero_mode_residual: f64,
    eigenvalues: Vec<f64>,
    coarse: Vec<f64>,
    fine: Vec<f64>,
    nodes: Vec<usize>,
    samples: Vec<StabilitySample>,
}

pub struct StabilityOpts {
    pub field: FieldArg,
    pub barrier: Option<BarrierArg>,
    pub levels: usize,
    pub half_width: f64,
    pub steps_per_unit: f64,
    pub stride: usize,
}

pub fn stability(c: &Common, o: &StabilityOpts) -> Out {
    if o.stride == 0 {
        return Err(CliError::usage("--stride must be positive"));
    }
    let field = FieldKind::from(o.field);
    let (p, _) = resolve(c, field)?;
    let sol = match field {
        FieldKind::Gravity => instanton_grav(&p, gravity_barrier(o.barrier, &p)?)?,
        FieldKind::Magnetic => match o.barrier {
            Some(BarrierArg::Instanton) => instanton_mag(&p)?,
            Some(b) => bounce_mag(&p, bounce_barrier(b)?)?,
            None => match classify_regime(&p, field)? {
                Regime::MagHigh => bounce_mag(&p, BounceBarrier::First)?,
                _ => instanton_mag(&p)?,
            },
        },
    };
    let grid = GridSpec {
        half_width: o.half_width,
        steps_per_unit: o.steps_per_unit,
    };
    let problem = fluctuation_potential(&sol, grid)?;
    let zm = zero_mode(&problem);
    let spectrum = fluctuation_spectrum(&problem, o.levels)?;
    info!("stability {:?}: lambda_0 = {}", sol.family, spectrum.eigenvalues[0]);
    let n = problem.tau.len();
    let samples: Vec<StabilitySample> = (0..n)
        .filter(|i| i % o.stride == 0 || *i == n - 1)
        .map(|i| StabilitySample {
            tau: problem.tau[i],
            w: problem.w[i],
            zero_mode: zm.normalized[i],
        })
        .collect();
    let table = Table {
        header: &["tau", "w", "zero_mode"],
        rows: samples
            .iter()
            .map(|s| vec![s.tau.into(), s.w.into(), s.zero_mode.into()])
            .collect(),
    };
    Payload::new(
        &StabilityOut {
            family: problem.family,
            w_inf: problem.w_inf,
            step: problem.step,
            grid_points: n,
            printed_deviation: problem.printed_deviation,
            zero_mode_nodes: zm.nodes,
            zero_mode_residual: operator_residual(&problem, &zm.normalized),
            eigenvalues: spectrum.eigenvalues,
            coarse: spectrum.coarse,
            fine: spectrum.fine,
            nodes: spectrum.nodes,
            samples,
        },
        table,
    )
}

#[derive(Serialize)]
struct QesLevelOut {
    index: usize,
    energy: f64,
    epsilon: f64,
    parity: Parity,
    periodicity: Periodicity,
    admissible: bool,
    residual: f64,
    phi: Vec<PhiTerm>,
}

#[derive(Serialize)]
struct SpectrumMagOut {
    n: usize,
    xi: f64,
    hbar: f64,
    levels: Vec<QesLevelOut>,
    printed: Option<Vec<PrintedLevel>>,
}

fn parity_str(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn periodicity_str(p: Periodicity) -> &'static str {
    match p {
        Periodicity::Pi => "pi",
        Periodicity::TwoPiOnly => "two-pi-only",
    }
}

pub fn spectrum_mag(c: &Common, grid: usize) -> Out {
    if grid == 0 {
        return Err(CliError::usage("--grid must be positive"));
    }
    let (p, hbar) = resolve(c, FieldKind::Magnetic)?;
    let qp = QesParams::from_loop(&p, hbar)?;
    let levels: Vec<QesLevelOut> = qes_levels(&p, hbar)?
        .into_iter()
        .enumerate()
        .map(|(index, l)| QesLevelOut {
            index,
            energy: l.energy,
            epsilon: l.epsilon,
            parity: l.parity,
            periodicity: l.periodicity,
            admissible: l.admissible,
            residual: qes_residual(&l, grid),
            phi: l.phi,
        })
        .collect();
    info!("spectrum-mag: n = {}, {} levels", qp.n, levels.len());
    let table = Table {
        header: &["index", "energy", "epsilon", "parity", "periodicity", "admissible", "residual"],
        rows: levels
            .iter()
            .map(|l| {
                vec![
                    l.index.into(),
                    l.energy.into(),
                    l.epsilon.into(),
                    parity_str(l.parity).into(),
                    periodicity_str(l.periodicity).into(),
                    Cell::B(l.admissible),
                    l.residual.into(),
                ]
            })
            .collect(),
    };
    Payload::new(
        &SpectrumMagOut {
            n: qp.n,
            xi: qp.xi,
            hbar,
            levels,
            printed: printed_qes_energies(qp.n, p.omega(), p.omega_c(), hbar),
        },
        table,
    )
}

#[derive(Serialize)]
struct Branch {
    parity: WhParity,
    depth: usize,
    basis: usize,
    levels: Vec<WhLevel>,
}

#[derive(Serialize)]
struct SpectrumGravOut {
    beta: f64,
    rho: f64,
    hbar: f64,
    branches: Vec<Branch>,
}

pub fn spectrum_grav(c: &Common, count: usize, parity: ParityArg) -> Out {
    if count == 0 {
        return Err(CliError::usage("--count must be positive"));
    }
    let (p, hbar) = resolve(c, FieldKind::Gravity)?;
    let parities: &[WhParity] = match parity {
        ParityArg::Even => &[WhParity::EvenGc],
        ParityArg::Odd => &[WhParity::OddGs],
        ParityArg::Both => &[WhParity::EvenGc, WhParity::OddGs],
    };
    let mut branches = Vec::new();
    let mut beta_rho = (0.0, 0.0);
    for &par in parities {
        let s = wh_eigenvalues(&p, hbar, count, par)?;
        info!("spectrum-grav {}: depth {}, basis {}", par.as_str(), s.depth, s.basis);
        beta_rho = (s.params.beta, s.params.rho);
        branches.push(Branch {
            parity: par,
            depth: s.depth,
            basis: s.basis,
            levels: s.levels,
        });
    }
    let table = Table {
        header: &["parity", "index", "eta", "energy", "eta_oracle", "energy_oracle", "gap", "verified"],
        rows: branches
            .iter()
            .flat_map(|b| {
                b.levels.iter().map(move |l| {
                    vec![
                        b.parity.as_str().into(),
                        l.index.into(),
                        l.eta.into(),
                        l.energy.into(),
                        l.eta_oracle.into(),
                        l.energy_oracle.into(),
                        l.gap.into(),
                        Cell::B(l.verified),
                    ]
                })
            })
            .collect(),
    };
    Payload::new(
        &SpectrumGravOut {
            beta: beta_rho.0,
            rho: beta_rho.1,
            hbar,
            branches,
        },
        table,
    )
}
