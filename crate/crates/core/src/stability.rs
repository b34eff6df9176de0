//! Small fluctuations about instantons and bounces:
//! `(-d^2/dtau^2 + W(tau)) chi = lambda chi` with `W = V''(theta(tau)) / m r^2`.

use serde::Serialize;

use crate::error::{PorcError, Result};
use crate::euclidean::{EuclideanSolution, Family};

/// Allowed mismatch between `W` at the grid ends and its vacuum value.
const PLATEAU_TOL: f64 = 1e-8;
/// Relative agreement required between the `h` and `h/2` ground eigenvalues.
const RICHARDSON_TOL: f64 = 1e-4;

/// Half-width and step of the uniform `tau` grid, in units of `1/rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub steps_per_unit: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            steps_per_unit: 200.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationProblem {
    pub family: Family,
    pub step: f64,
    pub tau: Vec<f64>,
    /// `V''(theta(tau)) / m r^2` by composition.
    pub w: Vec<f64>,
    /// `V''(vacuum) / m r^2`.
    pub w_inf: f64,
    /// The closed-form expression for `W` as usually quoted, where one exists.
    pub w_printed: Option<Vec<f64>>,
    /// `max |w - w_printed|`.
    pub printed_deviation: Option<f64>,
    #[serde(skip)]
    source: EuclideanSolution,
}

/// Closed-form `W(tau)` expressions as quoted for each family.
fn printed_w(sol: &EuclideanSolution, tau: f64) -> Option<f64> {
    let a = sol.ratio;
    match sol.family {
        Family::GravityZero | Family::GravityPi => {
            // omega^2 = (2 nu)^2 / (1 - a^2).
            let om2 = 4.0 * sol.rate * sol.rate / (1.0 - a * a);
            let t = (sol.rate * tau).tanh();
            let val = if sol.family == Family::GravityZero {
                let (t2, t4) = (t * t, t.powi(4));
                ((1.0 - a) + (1.0 + a) * t4 - 6.0 * t2) / ((1.0 - a) + (1.0 + a) * t2).powi(2)
            } else {
                // coth form multiplied through by tanh^4 so tau = 0 is regular.
                let (t2, t4) = (t * t, t.powi(4));
                ((1.0 - a) * t4 + (1.0 + a) - 6.0 * t2) / ((1.0 - a) * t2 + (1.0 + a)).powi(2)
            };
            Some(-om2 * (1.0 - a * a) * val)
        }
        Family::GravitySingleWell => {
            let p = sol.amp;
            let om2 = sol.rate * sol.rate * p * p / a;
            let s2 = (sol.rate * tau).sinh().powi(2);
            Some(om2 * ((a - 1.0) * p.powi(4) * s2 * s2 + 6.0 * p * p * s2 - (a + 1.0)) / (1.0 + p * p * s2))
        }
        Family::MagneticBounce => {
            // rate^2 = omega^2 (1 - a/2)
            let om2 = sol.rate * sol.rate / (1.0 - 0.5 * a);
            let alpha2 = a / (2.0 - a);
            let c2 = (sol.rate * tau).cosh().powi(2);
            Some(
                om2 / (2.0 - a) * (-a * a * c2 * c2 + 8.0 * a * c2 - (4.0 - a * a))
                    / (1.0 + alpha2 * c2).powi(2),
            )
        }
        Family::MagneticInstanton => {
            // Quoted with A = 2 omega / omega_c, i.e. A = 2 / ratio.
            let big_a = 2.0 / a;
            let om2 = 4.0 * sol.rate * sol.rate / (2.0 * (2.0 + a));
            let c2 = (sol.rate * tau).cosh().powi(2);
            Some(
                om2 * (big_a + 1.0) / big_a * (big_a * (6.0 + big_a) - 2.0 * (1.0 + 3.0 * big_a) * c2 + c2 * c2)
                    / (big_a + c2).powi(2),
            )
        }
    }
}

/// Sample `W(tau)` on a symmetric grid around the solution's centre.
pub fn fluctuation_potential(sol: &EuclideanSolution, grid: GridSpec) -> Result<FluctuationProblem> {
    if grid.half_width < 10.0 || grid.steps_per_unit <= 0.0 {
        return Err(PorcError::InvalidParameter {
            name: "half_width",
            value: grid.half_width,
            reason: "grid must extend at least 10 / rate with a positive step",
        });
    }
    let t_max = grid.half_width / sol.rate;
    let n = (2.0 * grid.half_width * grid.steps_per_unit).round() as usize;
    let n = n + n % 2;
    let step = 2.0 * t_max / n as f64;
    let tau: Vec<f64> = (0..=n).map(|i| -t_max + i as f64 * step).collect();
    let pot = sol.potential();
    let inertia = sol.inertia();
    let w: Vec<f64> = tau.iter().map(|&t| pot.curvature_at(sol.theta(t)) / inertia).collect();
    let w_inf = pot.curvature_at(sol.vacuum_plus) / inertia;
    let scale = w_inf.abs().max(sol.rate * sol.rate);
    let edge = (w[0] - w_inf).abs().max((w[n] - w_inf).abs());
    if edge > PLATEAU_TOL * scale {
        return Err(PorcError::GridTooShort(edge / scale));
    }
    let printed: Option<Vec<f64>> = tau.iter().map(|&t| printed_w(sol, t * sol.orientation)).collect();
    let printed_deviation = printed
        .as_ref()
        .map(|p| p.iter().zip(&w).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    Ok(FluctuationProblem {
        family: sol.family,
        step,
        tau,
        w,
        w_inf,
        w_printed: printed,
        printed_deviation,
        source: sol.clone(),
    })
}

/// Count sign changes, ignoring samples below `1e-8` of the peak.
pub fn count_nodes(samples: &[f64]) -> usize {
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-8 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in samples {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            nodes += 1;
        }
        last = v.signum();
    }
    nodes
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroMode {
    pub tau: Vec<f64>,
    /// `theta'(tau)`.
    pub chi: Vec<f64>,
    /// `chi` scaled to unit L2 norm (trapezoid rule).
    pub normalized: Vec<f64>,
    pub nodes: usize,
}

/// The translation mode `chi_0 = theta'(tau)` sampled on the problem grid.
pub fn zero_mode(problem: &FluctuationProblem) -> ZeroMode {
    let chi: Vec<f64> = problem.tau.iter().map(|&t| problem.source.theta_prime(t)).collect();
    let norm2: f64 = chi.iter().map(|c| c * c).sum::<f64>() * problem.step
        - 0.5 * problem.step * (chi[0].powi(2) + chi[chi.len() - 1].powi(2));
    let norm = norm2.sqrt();
    ZeroMode {
        tau: problem.tau.clone(),
        normalized: chi.iter().map(|c| c / norm).collect(),
        nodes: count_nodes(&chi),
        chi,
    }
}

/// `max |(-D2 + W) chi|` over interior points, `D2` the three-point Laplacian.
pub fn operator_residual(problem: &FluctuationProblem, chi: &[f64]) -> f64 {
    let h2 = problem.step * problem.step;
    (1..chi.len() - 1)
        .map(|i| (-(chi[i + 1] - 2.0 * chi[i] + chi[i - 1]) / h2 + problem.w[i] * chi[i]).abs())
        .fold(0.0, f64::max)
}

/// Symmetric tridiagonal matrix with constant off-diagonal `off`.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0f64;
        let off2 = self.off * self.off;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - off2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs()).max(1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |m, &d| m.min(d - r));
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d + r));
        (lo, hi)
    }

    /// The `j`-th eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an eigenvalue estimate by inverse iteration.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = lambda + 1e-10 * lambda.abs().max(1.0);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..4 {
            // Thomas algorithm for (T - shift) y = x.
            let mut c = vec![0.0; n];
            let mut d = vec![0.0; n];
            let mut denom = self.diag[0] - shift;
            c[0] = self.off / denom;
            d[0] = x[0] / denom;
            for i in 1..n {
                denom = self.diag[i] - shift - self.off * c[i - 1];
                if denom == 0.0 {
                    denom = f64::EPSILON;
                }
                c[i] = self.off / denom;
                d[i] = (x[i] - self.off * d[i - 1]) / denom;
            }
            let mut y = vec![0.0; n];
            y[n - 1] = d[n - 1];
            for i in (0..n - 1).rev() {
                y[i] = d[i] - c[i] * y[i + 1];
            }
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            x = y.into_iter().map(|v| v / norm).collect();
        }
        x
    }
}

fn operator(problem: &FluctuationProblem, refine: bool) -> (Tridiagonal, f64) {
    if !refine {
        let h = problem.step;
        let n = problem.w.len();
        let diag = problem.w[1..n - 1].iter().map(|w| 2.0 / (h * h) + w).collect();
        return (Tridiagonal { diag, off: -1.0 / (h * h) }, h);
    }
    let h = 0.5 * problem.step;
    let n = 2 * (problem.w.len() - 1);
    let sol = &problem.source;
    let pot = sol.potential();
    let t0 = problem.tau[0];
    let diag = (1..n)
        .map(|i| 2.0 / (h * h) + pot.curvature_at(sol.theta(t0 + i as f64 * h)) / sol.inertia())
        .collect();
    (Tridiagonal { diag, off: -1.0 / (h * h) }, h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationSpectrum {
    /// Richardson-extrapolated eigenvalues `(4 lambda(h/2) - lambda(h)) / 3`.
    pub eigenvalues: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// Sign changes of each discrete eigenvector.
    pub nodes: Vec<usize>,
}

/// Lowest `n_levels` eigenvalues of the Dirichlet finite-difference operator.
pub fn fluctuation_spectrum(problem: &FluctuationProblem, n_levels: usize) -> Result<FluctuationSpectrum> {
    if n_levels == 0 {
        return Err(PorcError::InvalidParameter {
            name: "n_levels",
            value: 0.0,
            reason: "at least one level is required",
        });
    }
    let (coarse_op, _) = operator(problem, false);
    let (fine_op, _) = operator(problem, true);
    let coarse: Vec<f64> = (0..n_levels).map(|j| coarse_op.eigenvalue(j)).collect();
    let fine: Vec<f64> = (0..n_levels).map(|j| fine_op.eigenvalue(j)).collect();
    let scale = problem.w_inf.abs().max(problem.source.rate.powi(2));
    let gap = (coarse[0] - fine[0]).abs();
    if gap > RICHARDSON_TOL * coarse[0].abs().max(scale) {
        return Err(PorcError::NotConverged(format!(
            "ground eigenvalue changes by {gap:e} when the step is halved"
        )));
    }
    let eigenvalues = coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
    let nodes = fine.iter().map(|&l| count_nodes(&fine_op.eigenvector(l))).collect();
    Ok(FluctuationSpectrum {
        eigenvalues,
        coarse,
        fine,
        nodes,
    })
}
