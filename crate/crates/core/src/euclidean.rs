//! Instantons and bounces: solutions of the Euclidean equation of motion
//! `m r^2 theta'' = V'(theta)` and their actions.
//!
//! Every solution has the shape
//! `theta(tau) = offset + sign * 2 atan(amp * f(rate * tau))` with
//! `f` one of `tanh`, `sinh`, `sech`. Anti-instantons reverse `tau`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{PorcError, Result};
use crate::params::{classify_regime, FieldKind, LoopParams, Regime};
use crate::potential::{effective_potential, EffectivePotential};

/// Tail contributions below this fraction of the action are neglected.
const TAIL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionKind {
    Instanton,
    AntiInstanton,
    Bounce,
}

/// Which barrier a gravitational instanton crosses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GravityBarrier {
    /// Double well, across the top at `theta = 0 (2 pi)`.
    Zero,
    /// Double well, across the top at `theta = pi`.
    Pi,
    /// Single well, from one copy of the minimum at `pi` to the next across `0`.
    SingleWell,
}

/// Which of the two barrier tops a magnetic bounce crosses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BounceBarrier {
    /// Moves up from `pi/2`, across the top at `pi - asin(omega_c / 2 omega)`.
    First,
    /// Moves down from `5 pi/2`, across the top at `2 pi + asin(omega_c / 2 omega)`.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Tanh,
    Sinh,
    Sech,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    GravityZero,
    GravityPi,
    GravitySingleWell,
    MagneticBounce,
    MagneticInstanton,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EuclideanSolution {
    pub kind: SolutionKind,
    pub family: Family,
    pub field: FieldKind,
    /// Location of the barrier top crossed (original angle, unwrapped).
    pub barrier_theta: f64,
    pub offset: f64,
    pub sign: f64,
    pub amp: f64,
    pub rate: f64,
    pub profile: Profile,
    /// `+1` for the solution as built, `-1` after `tau -> -tau`.
    pub orientation: f64,
    /// The dimensionless ratio the closed forms are written in
    /// (`omega0^2/omega^2` for gravity, `omega_c/omega` for magnetic).
    pub ratio: f64,
    /// Closed-form action, derived from `S = int m r^2 theta'^2 dtau`.
    pub s_closed: f64,
    /// Value of the closed-form expression as it is usually quoted.
    pub s_printed: f64,
    /// Action by quadrature.
    pub s_numeric: f64,
    /// The constant subtracted from `V` so that the reference vacuum sits at zero.
    pub v_reference: f64,
    pub vacuum_minus: f64,
    pub vacuum_plus: f64,
    pub turning_point: Option<f64>,
    #[serde(skip)]
    potential: EffectivePotential,
    #[serde(skip)]
    inertia: f64,
}

impl EuclideanSolution {
    /// `(g, g', g'')` for `g = amp f(rate tau)`, derivatives in `tau`.
    fn profile_terms(&self, tau: f64) -> (f64, f64, f64) {
        let x = self.rate * self.orientation * tau;
        let (r, o, a) = (self.rate, self.orientation, self.amp);
        match self.profile {
            Profile::Tanh => {
                let t = x.tanh();
                let s2 = 1.0 - t * t;
                (a * t, a * r * o * s2, -2.0 * a * r * r * s2 * t)
            }
            Profile::Sinh => {
                if x.abs() > 300.0 {
                    return (a * x.signum() * f64::INFINITY, 0.0, 0.0);
                }
                let (s, c) = (x.sinh(), x.cosh());
                (a * s, a * r * o * c, a * r * r * s)
            }
            Profile::Sech => {
                let sech = 1.0 / x.cosh();
                let t = x.tanh();
                (a * sech, -a * r * o * sech * t, a * r * r * sech * (1.0 - 2.0 * sech * sech))
            }
        }
    }

    pub fn theta(&self, tau: f64) -> f64 {
        let (g, _, _) = self.profile_terms(tau);
        self.offset + self.sign * 2.0 * g.atan()
    }

    /// `theta'(tau)`; this is also the zero mode of the fluctuation operator.
    pub fn theta_prime(&self, tau: f64) -> f64 {
        let (g, g1, _) = self.profile_terms(tau);
        if !g.is_finite() {
            return 0.0;
        }
        self.sign * 2.0 * g1 / (1.0 + g * g)
    }

    pub fn theta_second(&self, tau: f64) -> f64 {
        let (g, g1, g2) = self.profile_terms(tau);
        if !g.is_finite() {
            return 0.0;
        }
        let d = 1.0 + g * g;
        self.sign * 2.0 * (g2 * d - 2.0 * g * g1 * g1) / (d * d)
    }

    /// `m r^2 theta'' - V'(theta)`.
    pub fn eom_residual(&self, tau: f64) -> f64 {
        self.inertia * self.theta_second(tau) - self.potential.force_at(self.theta(tau))
    }

    /// `(1/2) m r^2 theta'^2 - (V(theta) - V_reference)`.
    pub fn first_integral_residual(&self, tau: f64) -> f64 {
        let tp = self.theta_prime(tau);
        0.5 * self.inertia * tp * tp - (self.potential.value_at(self.theta(tau)) - self.v_reference)
    }

    /// Exponential decay rate of `theta'` at large `|tau|`; equals
    /// `sqrt(V''(vacuum) / m r^2)`.
    pub fn decay_rate(&self) -> f64 {
        match self.profile {
            Profile::Tanh => 2.0 * self.rate,
            Profile::Sinh | Profile::Sech => self.rate,
        }
    }

    pub fn potential(&self) -> &EffectivePotential {
        &self.potential
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    /// The same path traversed in reversed Euclidean time.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.orientation = -self.orientation;
        out.kind = match self.kind {
            SolutionKind::Instanton => SolutionKind::AntiInstanton,
            SolutionKind::AntiInstanton => SolutionKind::Instanton,
            SolutionKind::Bounce => SolutionKind::Bounce,
        };
        std::mem::swap(&mut out.vacuum_minus, &mut out.vacuum_plus);
        out
    }

    fn endpoints(&mut self) {
        let lim = |s: f64| -> f64 {
            let g = match self.profile {
                Profile::Tanh => self.amp * s,
                Profile::Sinh => s * f64::INFINITY,
                Profile::Sech => 0.0,
            };
            self.offset + self.sign * 2.0 * g.atan()
        };
        self.vacuum_minus = lim(-self.orientation);
        self.vacuum_plus = lim(self.orientation);
    }
}

fn gravity_closed_actions(family: Family, i: f64, w: f64, w0: f64, a: f64) -> (f64, f64) {
    match family {
        Family::GravityZero | Family::GravityPi => {
            let root = (1.0 - a * a).sqrt();
            let c = ((1.0 + a) / (1.0 - a)).sqrt();
            let quoted = |sgn: f64| 4.0 * i * w0 * (((1.0 - a * a) / a).sqrt() + sgn * 2.0 * a.sqrt() * c.atan());
            if family == Family::GravityZero {
                (2.0 * i * w * (root + a * (-a).acos()), quoted(1.0))
            } else {
                (2.0 * i * w * (root - a * a.acos()), quoted(-1.0))
            }
        }
        _ => {
            let s = 4.0 * i * w0 * (a.sqrt() * (1.0 / (a - 1.0).sqrt()).atan() + ((a - 1.0) / a).sqrt());
            (s, s)
        }
    }
}

/// Gravitational instanton across the chosen barrier.
pub fn instanton_grav(params: &LoopParams, barrier: GravityBarrier) -> Result<EuclideanSolution> {
    let regime = classify_regime(params, FieldKind::Gravity)?;
    if regime == Regime::GravCritical {
        return Err(PorcError::CriticalRegime);
    }
    let (i, w, w0) = (params.inertia(), params.omega(), params.omega0());
    let a = params.a_grav()?;
    let potential = effective_potential(FieldKind::Gravity.into(), params);
    let (family, offset, sign, amp, rate, profile, top, v_reference) = match barrier {
        GravityBarrier::Zero | GravityBarrier::Pi => {
            if regime != Regime::GravHigh {
                return Err(PorcError::RegimeMismatch("double-well instantons need omega > omega0"));
            }
            let c = ((1.0 + a) / (1.0 - a)).sqrt();
            let nu = 0.5 * w * (1.0 - a * a).sqrt();
            let v_min = -0.5 * i * w * w * (1.0 + a * a);
            if barrier == GravityBarrier::Zero {
                (Family::GravityZero, 0.0, 1.0, c, nu, Profile::Tanh, 0.0, v_min)
            } else {
                // Continuous form of 2 atan(c coth(nu tau)).
                (Family::GravityPi, PI, -1.0, 1.0 / c, nu, Profile::Tanh, PI, v_min)
            }
        }
        GravityBarrier::SingleWell => {
            if regime != Regime::GravLow {
                return Err(PorcError::RegimeMismatch("single-well instanton needs omega < omega0"));
            }
            let p = (a / (a - 1.0)).sqrt();
            let v_min = potential.value(PI);
            (Family::GravitySingleWell, 0.0, 1.0, p, w0 / p, Profile::Sinh, 0.0, v_min)
        }
    };
    let (s_closed, s_printed) = gravity_closed_actions(family, i, w, w0, a);
    finish(EuclideanSolution {
        kind: SolutionKind::Instanton,
        family,
        field: FieldKind::Gravity,
        barrier_theta: top,
        offset,
        sign,
        amp,
        rate,
        profile,
        orientation: 1.0,
        ratio: a,
        s_closed,
        s_printed,
        s_numeric: 0.0,
        v_reference,
        vacuum_minus: 0.0,
        vacuum_plus: 0.0,
        turning_point: None,
        potential,
        inertia: i,
    })
}

/// Bounce from the false vacuum at `pi/2` (magnetic field, `omega > omega_c/2`).
pub fn bounce_mag(params: &LoopParams, barrier: BounceBarrier) -> Result<EuclideanSolution> {
    let (i, w, wc) = (params.inertia(), params.omega(), params.omega_c());
    if w <= 0.0 || wc <= 0.0 {
        return Err(PorcError::NoFalseVacuum);
    }
    let a = wc / w;
    if (a - 2.0).abs() <= crate::params::TOL_CRITICAL * 2.0 {
        return Err(PorcError::MeaninglessCase);
    }
    if a > 2.0 {
        return Err(PorcError::NoFalseVacuum);
    }
    let potential = effective_potential(FieldKind::Magnetic.into(), params);
    let inv_alpha = ((2.0 - a) / a).sqrt();
    let rate = (w * (w - 0.5 * wc)).sqrt();
    let top = (0.5 * a).asin();
    let (offset, sign, barrier_theta) = match barrier {
        BounceBarrier::First => (FRAC_PI_2, 1.0, PI - top),
        BounceBarrier::Second => (2.5 * PI, -1.0, 2.0 * PI + top),
    };
    let s_closed = 2.0 * i * w * ((2.0 * (2.0 - a)).sqrt() - a * ((2.0 - a) / a).sqrt().asinh());
    let h = ((2.0 - a) / 2.0).sqrt();
    let s_printed = 2.0 * i * wc * (1.0 - 0.5 * a).sqrt() * ((2.0 + a) / a - h * h.asinh());
    let mut sol = finish(EuclideanSolution {
        kind: SolutionKind::Bounce,
        family: Family::MagneticBounce,
        field: FieldKind::Magnetic,
        barrier_theta,
        offset,
        sign,
        amp: inv_alpha,
        rate,
        profile: Profile::Sech,
        orientation: 1.0,
        ratio: a,
        s_closed,
        s_printed,
        s_numeric: 0.0,
        v_reference: potential.value_at(FRAC_PI_2),
        vacuum_minus: 0.0,
        vacuum_plus: 0.0,
        turning_point: None,
        potential,
        inertia: i,
    })?;
    sol.turning_point = Some(sol.theta(0.0));
    Ok(sol)
}

/// Magnetic instanton from `-pi/2` through the false vacuum at `pi/2` to `3 pi/2`.
pub fn instanton_mag(params: &LoopParams) -> Result<EuclideanSolution> {
    let (i, w, wc) = (params.inertia(), params.omega(), params.omega_c());
    if w <= 0.0 {
        return Err(PorcError::RatioUndefined("a_mag"));
    }
    if wc <= 0.0 {
        return Err(PorcError::InvalidParameter {
            name: "omega_c",
            value: wc,
            reason: "the instanton is built for q B > 0",
        });
    }
    let potential = effective_potential(FieldKind::Magnetic.into(), params);
    let a = wc / w;
    let big_a = (1.0 + 2.0 * w / wc).sqrt();
    let rate = 0.5 * ((wc + 2.0 * w) * 2.0 * w).sqrt();
    let s_closed = 2.0 * i * w * ((2.0 * (2.0 + a)).sqrt() + a * (2.0 / a).sqrt().asinh());
    let root = (big_a * big_a - 1.0).sqrt();
    let s_printed = -1.0 / (2.0 * big_a * big_a)
        + (4.0 * big_a * big_a - 1.0) / (4.0 * big_a.powi(3) * root) * ((big_a + root) / (big_a - root)).ln();
    finish(EuclideanSolution {
        kind: SolutionKind::Instanton,
        family: Family::MagneticInstanton,
        field: FieldKind::Magnetic,
        barrier_theta: FRAC_PI_2,
        offset: FRAC_PI_2,
        sign: 1.0,
        amp: 1.0 / big_a,
        rate,
        profile: Profile::Sinh,
        orientation: 1.0,
        ratio: a,
        s_closed,
        s_printed,
        s_numeric: 0.0,
        v_reference: potential.value_at(1.5 * PI),
        vacuum_minus: 0.0,
        vacuum_plus: 0.0,
        turning_point: None,
        potential,
        inertia: i,
    })
}

fn finish(mut sol: EuclideanSolution) -> Result<EuclideanSolution> {
    sol.endpoints();
    sol.s_numeric = action_quadrature(&sol)?;
    Ok(sol)
}

/// `S = int m r^2 theta'^2 dtau`, with `theta'^2` taken from the first
/// integral `(1/2) m r^2 theta'^2 = V(theta) - V_reference`.
///
/// Integrates outwards in panels of width `1/rate` until the analytic
/// exponential tail beyond the last panel is below `1e-10` of the total.
pub fn action_quadrature(sol: &EuclideanSolution) -> Result<f64> {
    let density = |tau: f64| 2.0 * (sol.potential.value_at(sol.theta(tau)) - sol.v_reference);
    let width = 1.0 / sol.rate;
    let mu = sol.decay_rate();
    let max_panels = 400;
    let mut total = 0.0;
    for n in 0..max_panels {
        let (lo, hi) = (n as f64 * width, (n + 1) as f64 * width);
        let right = quadrature::double_exponential::integrate(density, lo, hi, 1e-15).integral;
        let left = quadrature::double_exponential::integrate(density, -hi, -lo, 1e-15).integral;
        total += right + left;
        // The density decays like exp(-2 mu tau); its tail beyond hi is density(hi) / (2 mu).
        let tail = (density(hi).abs() + density(-hi).abs()) / (2.0 * mu);
        if n >= 4 && tail < TAIL_TOL * total.abs() {
            return Ok(total + (density(hi) + density(-hi)) / (2.0 * mu));
        }
    }
    Err(PorcError::TailNotConverged(max_panels as f64 * width))
}

/// Leading-order tunnelling exponent `S / hbar`.
pub fn tunneling_exponent(sol: &EuclideanSolution, hbar: f64) -> Result<f64> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(PorcError::InvalidParameter {
            name: "hbar",
            value: hbar,
            reason: "must be positive",
        });
    }
    Ok(sol.s_numeric / hbar)
}
