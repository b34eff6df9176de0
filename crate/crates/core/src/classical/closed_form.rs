use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::{lift, lift_slope};
use crate::elliptic::{complete_k, jacobi, EllipticModulus};
use crate::error::{PorcError, Result};
use crate::params::{classify_regime, FieldKind, LoopParams, Regime};
use crate::potential::{effective_potential, find_extrema, EffectivePotential};

/// Relative distance from a singular energy below which construction is refused.
const TOL_BOUNDARY: f64 = 1e-10;

const THREE_HALVES_PI: f64 = 1.5 * PI;

/// Energy window of a closed-form solution, named after the case labels used
/// in the quadrature analysis: `(a)` below the barrier top, `(b)` above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Window {
    #[serde(rename = "a-i")]
    AI,
    #[serde(rename = "a-ii")]
    AII,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "b-i")]
    BI,
    #[serde(rename = "b-ii")]
    BII,
    /// Fixed-energy special solution.
    #[serde(rename = "special")]
    Special,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecialFn {
    /// `tan = amp / sinh(X)`.
    Cosech,
    Sinh,
    Tan,
    Sin,
    Tanh,
}

/// How `theta` is recovered from the Jacobi functions at `X = lambda (t - t0)`.
/// Every rule has the shape `theta = base + 2 * (half-angle)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum EvalRule {
    /// `tan((theta - base)/2) = c dn / sn`; oscillation across the lower barrier.
    DnOverSn { base: f64, c: f64 },
    /// `tan((theta - base)/2) = sn / (c dn)`.
    SnOverDn { base: f64, c: f64 },
    /// `tan((theta - base)/2) = 1 / (c dn)`; oscillation inside one well.
    InverseDn { base: f64, c: f64 },
    /// `tan((theta - base)/2) = sn / c`.
    ScaledSn { base: f64, c: f64 },
    /// `(theta - base)/2 = lift(c, phase + sign * fraction * am(X))`; circulation.
    Winding {
        base: f64,
        c: f64,
        phase: f64,
        sign: f64,
        fraction: f64,
    },
    /// `tan((theta - base)/2) = amp f(X)` with an elementary `f`.
    Special { base: f64, amp: f64, func: SpecialFn },
}

/// The printed algebraic pair fixing `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum Relations {
    /// `a^2 - b^2 = difference`, `a^2 b^2 = product`.
    Difference { difference: f64, product: f64 },
    /// `a^2 + b^2 = sum`, `a^2 b^2 = product`.
    Sum { sum: f64, product: f64 },
    /// Complex-conjugate root pair `u^2 = a^2 exp(+-2 i gamma)`, `b = cos(2 gamma)`.
    Conjugate { modulus_sq: f64, real_part: f64 },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Period {
    Finite(f64),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormTrajectory {
    pub field: FieldKind,
    pub regime: Regime,
    pub window: Window,
    pub a: f64,
    pub b: f64,
    pub modulus: EllipticModulus,
    /// `X = lambda (t - t0)`.
    pub lambda: f64,
    pub t0: f64,
    /// Shifted energy `E = T + V - V_min`.
    pub energy: f64,
    pub rule: EvalRule,
    pub relations: Relations,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub(crate) potential: EffectivePotential,
    #[serde(skip)]
    pub(crate) v_min: f64,
    #[serde(skip)]
    pub(crate) inertia: f64,
}

impl ClosedFormTrajectory {
    pub fn k(&self) -> f64 {
        self.modulus.k()
    }

    pub fn kprime(&self) -> f64 {
        self.modulus.kprime()
    }

    fn phase(&self, t: f64) -> f64 {
        self.lambda * (t - self.t0)
    }

    /// Angle at time `t` (original variable, unwrapped).
    pub fn evaluate(&self, t: f64) -> f64 {
        let x = self.phase(t);
        let k = self.k();
        match self.rule {
            EvalRule::DnOverSn { base, c } => {
                let j = jacobi(x, k);
                base + 2.0 * (c * j.dn).atan2(j.sn)
            }
            EvalRule::SnOverDn { base, c } => {
                let j = jacobi(x, k);
                base + 2.0 * j.sn.atan2(c * j.dn)
            }
            EvalRule::InverseDn { base, c } => base + 2.0 * 1f64.atan2(c * jacobi(x, k).dn),
            EvalRule::ScaledSn { base, c } => base + 2.0 * jacobi(x, k).sn.atan2(c),
            EvalRule::Winding {
                base,
                c,
                phase,
                sign,
                fraction,
            } => base + 2.0 * lift(c, phase + sign * fraction * jacobi(x, k).am),
            EvalRule::Special { base, amp, func } => {
                base + 2.0
                    * match func {
                        SpecialFn::Cosech => amp.atan2(x.sinh()),
                        SpecialFn::Sinh => (amp * x.sinh()).atan(),
                        SpecialFn::Tan => lift(amp, x),
                        SpecialFn::Sin => (amp * x.sin()).atan(),
                        SpecialFn::Tanh => (amp * x.tanh()).atan(),
                    }
            }
        }
    }

    /// `d theta / dt` by analytic differentiation.
    pub fn velocity(&self, t: f64) -> f64 {
        let x = self.phase(t);
        let k = self.k();
        let d = match self.rule {
            EvalRule::DnOverSn { c, .. } => {
                let j = jacobi(x, k);
                -2.0 * c * j.cn / (j.sn * j.sn + c * c * j.dn * j.dn)
            }
            EvalRule::SnOverDn { c, .. } => {
                let j = jacobi(x, k);
                2.0 * c * j.cn / (j.sn * j.sn + c * c * j.dn * j.dn)
            }
            EvalRule::InverseDn { c, .. } => {
                let j = jacobi(x, k);
                2.0 * c * k * k * j.sn * j.cn / (c * c * j.dn * j.dn + 1.0)
            }
            EvalRule::ScaledSn { c, .. } => {
                let j = jacobi(x, k);
                2.0 * c * j.cn * j.dn / (c * c + j.sn * j.sn)
            }
            EvalRule::Winding {
                c,
                phase,
                sign,
                fraction,
                ..
            } => {
                let j = jacobi(x, k);
                2.0 * lift_slope(c, phase + sign * fraction * j.am) * sign * fraction * j.dn
            }
            EvalRule::Special { amp, func, .. } => match func {
                SpecialFn::Cosech => {
                    if x.abs() > 350.0 {
                        0.0
                    } else {
                        let sh = x.sinh();
                        -2.0 * amp * x.cosh() / (sh * sh + amp * amp)
                    }
                }
                SpecialFn::Sinh => {
                    if x.abs() > 350.0 {
                        0.0
                    } else {
                        let sh = x.sinh();
                        2.0 * amp * x.cosh() / (1.0 + amp * amp * sh * sh)
                    }
                }
                SpecialFn::Tan => 2.0 * lift_slope(amp, x),
                SpecialFn::Sin => 2.0 * amp * x.cos() / (1.0 + amp * amp * x.sin().powi(2)),
                SpecialFn::Tanh => {
                    let th = x.tanh();
                    2.0 * amp * (1.0 - th * th) / (1.0 + amp * amp * th * th)
                }
            },
        };
        self.lambda * d
    }

    /// `(1/2) m r^2 theta_dot^2 + V(theta) - V_min - E` at time `t`.
    pub fn energy_residual(&self, t: f64) -> f64 {
        let v = self.velocity(t);
        0.5 * self.inertia * v * v + self.potential.value_at(self.evaluate(t)) - self.v_min - self.energy
    }

    /// Largest violation of the defining algebraic pair for `a`, `b`.
    pub fn relation_residual(&self) -> f64 {
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        match self.relations {
            Relations::Difference { difference, product } => {
                (a2 - b2 - difference).abs().max((a2 * b2 - product).abs())
            }
            Relations::Sum { sum, product } => (a2 + b2 - sum).abs().max((a2 * b2 - product).abs()),
            Relations::Conjugate { modulus_sq, real_part } => {
                (a2 * a2 - modulus_sq).abs().max((self.b - real_part).abs())
            }
            Relations::None => 0.0,
        }
    }

    /// Oscillation period, winding period for circulating motion, or
    /// `Unbounded` for separatrix solutions.
    pub fn period(&self) -> Period {
        let quarter = || complete_k(self.k()).unwrap_or(f64::INFINITY);
        let t = match self.rule {
            EvalRule::DnOverSn { .. } | EvalRule::SnOverDn { .. } | EvalRule::ScaledSn { .. } => {
                4.0 * quarter() / self.lambda
            }
            EvalRule::InverseDn { .. } => 2.0 * quarter() / self.lambda,
            EvalRule::Winding { fraction, .. } => 2.0 * quarter() / (fraction * self.lambda),
            EvalRule::Special { func, .. } => match func {
                SpecialFn::Cosech | SpecialFn::Sinh | SpecialFn::Tanh => return Period::Unbounded,
                SpecialFn::Tan => PI / self.lambda,
                SpecialFn::Sin => 2.0 * PI / self.lambda,
            },
        };
        Period::Finite(t)
    }
}

/// Larger and smaller roots of `z^2 - sum z + product = 0`.
fn split_sum(sum: f64, product: f64) -> (f64, f64) {
    let d = (sum * sum - 4.0 * product).max(0.0).sqrt();
    let big = 0.5 * (sum + d);
    (big, if big != 0.0 { product / big } else { 0.0 })
}

/// Positive `(a^2, b^2)` with `a^2 - b^2 = diff` and `a^2 b^2 = product > 0`.
fn split_difference(diff: f64, product: f64) -> (f64, f64) {
    let a2 = 0.5 * (diff + (diff * diff + 4.0 * product).sqrt());
    (a2, product / a2)
}

pub(crate) struct Context {
    pub params: LoopParams,
    pub regime: Regime,
    pub potential: EffectivePotential,
    pub v_min: f64,
    pub warnings: Vec<String>,
}

pub(crate) fn context(params: &LoopParams, field: FieldKind) -> Result<Context> {
    let regime = classify_regime(params, field)?;
    if regime.is_critical() {
        return Err(PorcError::CriticalRegime);
    }
    if field == FieldKind::Magnetic && params.omega_c() <= 0.0 {
        return Err(PorcError::InvalidParameter {
            name: "omega_c",
            value: params.omega_c(),
            reason: "closed forms take q B > 0; reverse the field by theta -> pi - theta",
        });
    }
    let potential = effective_potential(field.into(), params);
    let report = find_extrema(&potential, params)?;
    let v_min = report.global_min();
    let mut warnings = Vec::new();
    // Cross-check the numeric extrema against the closed-form expressions.
    let i = params.inertia();
    let w = params.omega();
    let scale = potential.scale();
    let mut compare = |label: &str, printed: f64, numeric: f64| {
        if (printed - numeric).abs() > 1e-10 * scale {
            warnings.push(format!(
                "{label}: printed expression gives {printed:.12e}, extremum finder gives {numeric:.12e}; using the numeric value"
            ));
        }
    };
    match regime {
        Regime::GravHigh => {
            let w0 = params.omega0();
            compare("V_min", -(i / (2.0 * w0 * w0)) * (w0.powi(4) + w.powi(4)), v_min);
            compare(
                "V_max",
                (i / (2.0 * w * w)) * (w0 * w0 + w * w).powi(2),
                report.global_max() - v_min,
            );
        }
        Regime::GravLow => compare("V_max", 2.0 * i * params.omega0().powi(2), report.global_max() - v_min),
        Regime::MagHigh | Regime::MagLow => {
            let wc = params.omega_c();
            compare("V_min", -0.5 * i * w * w * (1.0 + wc / w), v_min);
            let printed_max = if regime == Regime::MagLow {
                i * w * wc
            } else {
                (i / 8.0) * (wc + 2.0 * w).powi(2)
            };
            compare("V_max", printed_max, report.global_max() - v_min);
        }
        _ => {}
    }
    Ok(Context {
        params: *params,
        regime,
        potential,
        v_min,
        warnings,
    })
}

fn guard(energy: f64, boundaries: &[f64], scale: f64) -> Result<()> {
    for &b in boundaries {
        if (energy - b).abs() < TOL_BOUNDARY * scale.max(b.abs()) {
            return Err(PorcError::SeparatrixEnergy { energy, boundary: b });
        }
    }
    Ok(())
}

struct Shape {
    window: Window,
    a: f64,
    b: f64,
    k: f64,
    lambda: f64,
    rule: EvalRule,
    relations: Relations,
}

/// Closed-form trajectory with shifted energy `energy` passing its reference
/// point at `t = t0`.
///
/// Windows bounded by a barrier top (or, in the magnetic high-spin regime, by
/// the false-vacuum level) are singular and rejected with `SeparatrixEnergy`;
/// use [`super::special_solution`] there.
pub fn quadrature_solve(params: &LoopParams, field: FieldKind, energy: f64, t0: f64) -> Result<ClosedFormTrajectory> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(PorcError::InvalidParameter {
            name: "energy",
            value: energy,
            reason: "shifted energy must be positive",
        });
    }
    let ctx = context(params, field)?;
    let shape = match field {
        FieldKind::Gravity => gravity_shape(&ctx, energy)?,
        FieldKind::Magnetic => magnetic_shape(&ctx, energy)?,
    };
    Ok(ClosedFormTrajectory {
        field,
        regime: ctx.regime,
        window: shape.window,
        a: shape.a,
        b: shape.b,
        modulus: EllipticModulus::new(shape.k.clamp(0.0, 1.0))?,
        lambda: shape.lambda,
        t0,
        energy,
        rule: shape.rule,
        relations: shape.relations,
        warnings: ctx.warnings,
        potential: ctx.potential,
        v_min: ctx.v_min,
        inertia: params.inertia(),
    })
}

fn gravity_shape(ctx: &Context, e: f64) -> Result<Shape> {
    let p = &ctx.params;
    let i = p.inertia();
    let (w, w0) = (p.omega(), p.omega0());
    let mgr = p.m() * p.g() * p.r();
    let s = (e / (2.0 * i)).sqrt();

    if ctx.regime == Regime::GravLow {
        let top = 2.0 * mgr;
        guard(e, &[top], top)?;
        let alpha = i * w0 * w0 / e;
        let beta = i * w * w / e;
        if e < top {
            // Roots y^2 = -a^2 and y^2 = b^2 of y^4 + 2(1 - alpha + beta) y^2 + (1 - 2 alpha).
            let diff = 2.0 * (1.0 - alpha + beta);
            let product = 2.0 * alpha - 1.0;
            let (a2, b2) = split_difference(diff, product);
            let c = (a2 + b2).sqrt();
            let window = if e < i * (w0 * w0 - w * w) { Window::AI } else { Window::AII };
            return Ok(Shape {
                window,
                a: a2.sqrt(),
                b: b2.sqrt(),
                k: a2.sqrt() / c,
                lambda: c * s,
                rule: EvalRule::DnOverSn { base: 0.0, c },
                relations: Relations::Difference { difference: diff, product },
            });
        }
        let sum = 2.0 * (1.0 - alpha + beta);
        let product = 1.0 - 2.0 * alpha;
        let (a2, b2) = split_sum(sum, product);
        let a = a2.sqrt();
        return Ok(Shape {
            window: Window::B,
            a,
            b: b2.sqrt(),
            k: (a2 - b2).max(0.0).sqrt() / a,
            lambda: a * s,
            rule: winding_down(a),
            relations: Relations::Sum { sum, product },
        });
    }

    // Spin above the pendulum frequency: double well.
    let v_max = (i / (2.0 * w * w)) * (w0 * w0 + w * w).powi(2);
    let e_pi = (i / (2.0 * w * w)) * (w * w - w0 * w0).powi(2);
    guard(e, &[e_pi, v_max], v_max)?;
    let c4 = e - v_max + 2.0 * mgr;
    let c2 = e - v_max + mgr + i * w * w;
    let c0 = e - v_max;
    if e < e_pi {
        let d = v_max - e;
        let sum = 2.0 * c2 / d;
        let product = -c4 / d;
        let (a2, b2) = split_sum(sum, product);
        let a = a2.sqrt();
        Ok(Shape {
            window: Window::AI,
            a,
            b: b2.sqrt(),
            k: (a2 - b2).max(0.0).sqrt() / a,
            lambda: a * (d / (2.0 * i)).sqrt(),
            rule: EvalRule::InverseDn { base: 0.0, c: a },
            relations: Relations::Sum { sum, product },
        })
    } else if e < v_max {
        let diff = 2.0 * c2 / c4;
        let product = -c0 / c4;
        let (a2, b2) = split_difference(diff, product);
        let c = (a2 + b2).sqrt();
        Ok(Shape {
            window: Window::AII,
            a: a2.sqrt(),
            b: b2.sqrt(),
            k: a2.sqrt() / c,
            lambda: c * (c4 / (2.0 * i)).sqrt(),
            rule: EvalRule::DnOverSn { base: 0.0, c },
            relations: Relations::Difference { difference: diff, product },
        })
    } else {
        let sum = 2.0 * c2 / c4;
        let product = c0 / c4;
        let (a2, b2) = split_sum(sum, product);
        let a = a2.sqrt();
        Ok(Shape {
            window: Window::B,
            a,
            b: b2.sqrt(),
            k: (a2 - b2).max(0.0).sqrt() / a,
            lambda: a * (c4 / (2.0 * i)).sqrt(),
            rule: winding_down(a),
            relations: Relations::Sum { sum, product },
        })
    }
}

/// `tan(theta/2) = a cn / sn`, i.e. `theta/2 = lift(a, pi/2 - am)`.
fn winding_down(a: f64) -> EvalRule {
    EvalRule::Winding {
        base: 0.0,
        c: a,
        phase: FRAC_PI_2,
        sign: -1.0,
        fraction: 1.0,
    }
}

fn magnetic_shape(ctx: &Context, e: f64) -> Result<Shape> {
    let p = &ctx.params;
    let i = p.inertia();
    let (w, wc) = (p.omega(), p.omega_c());
    let s = (e / (2.0 * i)).sqrt();
    let alpha = i * w * wc / e;
    let beta = 2.0 * i * w * w / e;
    // Quartic u^4 + pp u^2 + (1 - alpha) in u = 1 / tan(theta/2 + pi/4).
    let pp = 2.0 - alpha - beta;
    let disc = pp * pp - 4.0 * (1.0 - alpha);
    let e_false = i * w * wc;
    let e_split = 0.5 * i * w * (wc + 2.0 * w);
    let low = ctx.regime == Regime::MagLow;
    let v_max = if low { e_false } else { (i / 8.0) * (wc + 2.0 * w).powi(2) };
    guard(e, &[e_false, v_max], v_max)?;

    if alpha > 1.0 {
        // Bound motion in the well of the true vacuum at 3 pi / 2.
        let diff = pp;
        let product = alpha - 1.0;
        let (a2, b2) = split_difference(diff, product);
        let c = (a2 + b2).sqrt();
        let window = if !low || e > e_split { Window::AI } else { Window::AII };
        return Ok(Shape {
            window,
            a: a2.sqrt(),
            b: b2.sqrt(),
            k: a2.sqrt() / c,
            lambda: c * s,
            rule: EvalRule::SnOverDn { base: THREE_HALVES_PI, c },
            relations: Relations::Difference { difference: diff, product },
        });
    }
    if disc >= 0.0 && pp < 0.0 {
        // Between the false-vacuum level and the barrier tops, in the true well.
        let sum = -pp;
        let product = 1.0 - alpha;
        let (a2, b2) = split_sum(sum, product);
        let a = a2.sqrt();
        return Ok(Shape {
            window: Window::AII,
            a,
            b: b2.sqrt(),
            k: b2.sqrt() / a,
            lambda: a * s,
            rule: EvalRule::ScaledSn { base: THREE_HALVES_PI, c: a },
            relations: Relations::Sum { sum, product },
        });
    }
    if disc >= 0.0 {
        // Circulation with real roots (low spin, just above the barrier).
        let sum = pp;
        let product = 1.0 - alpha;
        let (a2, b2) = split_sum(sum, product);
        let a = a2.sqrt();
        return Ok(Shape {
            window: Window::BI,
            a,
            b: b2.sqrt(),
            k: (a2 - b2).max(0.0).sqrt() / a,
            lambda: a * s,
            rule: EvalRule::Winding {
                base: THREE_HALVES_PI,
                c: 1.0 / a,
                phase: 0.0,
                sign: 1.0,
                fraction: 1.0,
            },
            relations: Relations::Sum { sum, product },
        });
    }
    // Complex-conjugate roots u^2 = rho exp(+-2 i gamma), rho = 1 / sqrt(1 - alpha).
    let one_minus = 1.0 - alpha;
    let root_mod = one_minus.powf(-0.25);
    let cos2g = (pp / (2.0 * one_minus.sqrt())).clamp(-1.0, 1.0);
    let k = (0.5 * (1.0 - cos2g)).sqrt();
    let window = if !low && e < e_split { Window::BI } else { Window::BII };
    Ok(Shape {
        window,
        a: root_mod,
        b: cos2g,
        k,
        lambda: 2.0 * s * one_minus.powf(0.25),
        rule: EvalRule::Winding {
            base: THREE_HALVES_PI,
            c: root_mod,
            phase: 0.0,
            sign: 1.0,
            fraction: 0.5,
        },
        relations: Relations::Conjugate {
            modulus_sq: 1.0 / one_minus,
            real_part: pp / (2.0 * one_minus.sqrt()),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grav(omega: f64) -> LoopParams {
        LoopParams::gravity(omega, 1.0).unwrap()
    }

    fn max_energy_residual(tr: &ClosedFormTrajectory) -> f64 {
        (0..1000).map(|n| tr.energy_residual(n as f64 * 0.02 - 7.0).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn printed_relations_hold_in_low_gravity_well() {
        let tr = quadrature_solve(&grav(0.5), FieldKind::Gravity, 0.5, 0.0).unwrap();
        assert_eq!(tr.window, Window::AI);
        assert!((tr.a * tr.a * tr.b * tr.b - 3.0).abs() < 1e-12);
        assert!((tr.b * tr.b - tr.a * tr.a - 1.0).abs() < 1e-12);
        assert!(tr.relation_residual() < 1e-12);
    }

    #[test]
    fn circulation_above_the_top_is_monotone() {
        let tr = quadrature_solve(&grav(0.5), FieldKind::Gravity, 3.0, 0.0).unwrap();
        assert_eq!(tr.window, Window::B);
        let mut prev = tr.evaluate(0.0);
        for n in 1..2000 {
            let th = tr.evaluate(n as f64 * 0.01);
            assert!(th < prev);
            prev = th;
        }
    }

    #[test]
    fn separatrix_energies_are_rejected() {
        let p = LoopParams::magnetic(1.0, 1.0).unwrap();
        for e in [1.0, 1.125] {
            assert!(matches!(
                quadrature_solve(&p, FieldKind::Magnetic, e, 0.0),
                Err(PorcError::SeparatrixEnergy { .. })
            ));
        }
        assert!(matches!(
            quadrature_solve(&grav(0.5), FieldKind::Gravity, 2.0, 0.0),
            Err(PorcError::SeparatrixEnergy { .. })
        ));
        assert_eq!(
            quadrature_solve(&grav(1.0), FieldKind::Gravity, 0.3, 0.0),
            Err(PorcError::CriticalRegime)
        );
    }

    #[test]
    fn energy_is_conserved_in_every_window() {
        let cases: Vec<(LoopParams, FieldKind, f64)> = vec![
            (grav(0.5), FieldKind::Gravity, 0.5),
            (grav(0.5), FieldKind::Gravity, 1.2),
            (grav(0.5), FieldKind::Gravity, 3.0),
            (grav(2.0), FieldKind::Gravity, 0.3),
            (grav(2.0), FieldKind::Gravity, 3.0),
            (grav(2.0), FieldKind::Gravity, 7.0),
            (LoopParams::magnetic(0.3, 1.0).unwrap(), FieldKind::Magnetic, 0.15),
            (LoopParams::magnetic(0.3, 1.0).unwrap(), FieldKind::Magnetic, 0.28),
            (LoopParams::magnetic(0.3, 1.0).unwrap(), FieldKind::Magnetic, 0.31),
            (LoopParams::magnetic(0.3, 1.0).unwrap(), FieldKind::Magnetic, 1.0),
            (LoopParams::magnetic(1.0, 1.0).unwrap(), FieldKind::Magnetic, 0.5),
            (LoopParams::magnetic(1.0, 1.0).unwrap(), FieldKind::Magnetic, 1.05),
            (LoopParams::magnetic(1.0, 1.0).unwrap(), FieldKind::Magnetic, 1.3),
            (LoopParams::magnetic(1.0, 1.0).unwrap(), FieldKind::Magnetic, 2.0),
            (LoopParams::new(2.0, 0.7, 1.3, 9.81, 0.0, 0.0).unwrap(), FieldKind::Gravity, 4.0),
        ];
        for (p, f, e) in cases {
            let tr = quadrature_solve(&p, f, e, 0.3).unwrap();
            let res = max_energy_residual(&tr);
            assert!(res < 1e-9 * e.max(1.0), "{:?} {:?} E={e}: {res:e}", tr.regime, tr.window);
            assert!(tr.relation_residual() < 1e-12 * e.max(1.0).powi(2));
        }
    }

    #[test]
    fn high_spin_minimum_expression_is_flagged() {
        let tr = quadrature_solve(&grav(2.0), FieldKind::Gravity, 0.3, 0.0).unwrap();
        assert_eq!(tr.warnings.len(), 1);
        assert!(tr.warnings[0].starts_with("V_min"));
    }
}
