use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{PorcError, Result};
use crate::params::LoopParams;

/// Allowed distance of `m r^2 omega_c / hbar` from an integer.
const TOL_INTEGER: f64 = 1e-12;
/// Points used for the `Psi(x + pi) = Psi(x)` test.
const PERIODICITY_POINTS: usize = 1000;

/// `n + 1 = m r^2 omega_c / hbar`, `xi = 4 m r^2 omega / hbar`, and the energy
/// carried by one unit of `epsilon = 8 m r^2 E / hbar^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QesParams {
    pub n: usize,
    pub xi: f64,
    pub energy_unit: f64,
}

impl QesParams {
    /// Scaled units, `hbar = m = r = 1`.
    pub fn new(n: usize, xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(PorcError::InvalidParameter {
                name: "xi",
                value: xi,
                reason: "must be positive",
            });
        }
        Ok(Self { n, xi, energy_unit: 0.125 })
    }

    pub fn from_loop(params: &LoopParams, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(PorcError::InvalidParameter {
                name: "hbar",
                value: hbar,
                reason: "must be positive",
            });
        }
        if params.omega() <= 0.0 {
            return Err(PorcError::InvalidParameter {
                name: "omega",
                value: params.omega(),
                reason: "the quasi-exact levels need a spinning loop",
            });
        }
        let i = params.inertia();
        let v = i * params.omega_c() / hbar;
        let n1 = v.round();
        if n1 < 1.0 || (v - n1).abs() > TOL_INTEGER * v.abs().max(1.0) {
            return Err(PorcError::NonIntegerQesParameter(v));
        }
        Ok(Self {
            n: n1 as usize - 1,
            xi: 4.0 * i * params.omega() / hbar,
            energy_unit: hbar * hbar / (8.0 * i),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiTerm {
    pub harmonic: usize,
    pub trig: Trig,
    pub coeff: f64,
}

/// Parity of `Phi` (and of `Psi`) under `x -> -x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Periodicity {
    /// Even `n`: every harmonic is even.
    Pi,
    /// Odd `n`: only odd harmonics, `Psi(x + pi) = -Psi(x)`.
    TwoPiOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QesLevel {
    pub n: usize,
    pub xi: f64,
    pub epsilon: f64,
    pub energy: f64,
    /// Largest coefficient normalised to one, lowest harmonic non-negative.
    pub phi: Vec<PhiTerm>,
    pub parity: Parity,
    pub periodicity: Periodicity,
    /// `Psi(x + pi) = Psi(x)` on a dense grid.
    pub admissible: bool,
}

impl QesLevel {
    /// `(Phi, Phi', Phi'')` at `x`.
    pub fn phi_at(&self, x: f64) -> (f64, f64, f64) {
        let mut out = (0.0, 0.0, 0.0);
        for t in &self.phi {
            let k = t.harmonic as f64;
            let (s, c) = (k * x).sin_cos();
            let (f, d) = match t.trig {
                Trig::Cos => (c, -k * s),
                Trig::Sin => (s, k * c),
            };
            out.0 += t.coeff * f;
            out.1 += t.coeff * d;
            out.2 -= t.coeff * k * k * f;
        }
        out
    }

    /// `Psi = exp(-(xi/4) cos 2x) Phi`.
    pub fn psi_at(&self, x: f64) -> f64 {
        (-0.25 * self.xi * (2.0 * x).cos()).exp() * self.phi_at(x).0
    }
}

/// Cos or sin block of the recurrence: harmonics, diagonal, and the two
/// off-diagonals `M[i+1][i]`, `M[i][i+1]`.
struct Block {
    ks: Vec<usize>,
    diag: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

// L f = f'' + xi sin2x f' - n xi cos2x f sends cos kx to
// -k^2 cos kx + (xi/2)(k - n) cos(k+2)x - (xi/2)(k + n) cos(k-2)x, and the same for sin,
// with cos(-x) = cos x, sin(-x) = -sin x folding the low end.
fn block(n: usize, xi: f64, trig: Trig) -> Block {
    let start = match (trig, n % 2) {
        (Trig::Cos, 0) => 0,
        (Trig::Sin, 0) => 2,
        _ => 1,
    };
    let ks: Vec<usize> = (start..=n).step_by(2).collect();
    let nf = n as f64;
    let diag = ks
        .iter()
        .map(|&k| {
            let kf = k as f64;
            let fold = if k == 1 {
                let c = 0.5 * xi * (1.0 + nf);
                if trig == Trig::Cos { -c } else { c }
            } else {
                0.0
            };
            -kf * kf + fold
        })
        .collect();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for w in ks.windows(2) {
        let (k, k2) = (w[0] as f64, w[1] as f64);
        lower.push(if w[0] == 0 { -nf * xi } else { 0.5 * xi * (k - nf) });
        upper.push(-0.5 * xi * (k2 + nf));
    }
    Block { ks, diag, lower, upper }
}

fn solve_block(p: &QesParams, trig: Trig) -> Vec<QesLevel> {
    let b = block(p.n, p.xi, trig);
    let size = b.ks.len();
    if size == 0 {
        return Vec::new();
    }
    // Diagonal similarity D^-1 M D makes the block symmetric.
    let mut scale = vec![1.0; size];
    let mut sym = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(b.diag.clone()));
    for i in 0..size - 1 {
        let (l, u) = (b.lower[i], b.upper[i]);
        scale[i + 1] = scale[i] * (l / u).sqrt();
        let off = u.signum() * (l * u).sqrt();
        sym[(i, i + 1)] = off;
        sym[(i + 1, i)] = off;
    }
    let eig = SymmetricEigen::new(sym);
    let parity = if trig == Trig::Cos { Parity::Even } else { Parity::Odd };
    let periodicity = if p.n.is_multiple_of(2) { Periodicity::Pi } else { Periodicity::TwoPiOnly };
    (0..size)
        .map(|j| {
            let mu = eig.eigenvalues[j];
            let mut c: Vec<f64> = (0..size).map(|i| scale[i] * eig.eigenvectors[(i, j)]).collect();
            let big = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let sign = if c[0] < 0.0 { -1.0 } else { 1.0 };
            c.iter_mut().for_each(|v| *v *= sign / big);
            let epsilon = -mu - 0.25 * p.xi * p.xi;
            let mut level = QesLevel {
                n: p.n,
                xi: p.xi,
                epsilon,
                energy: p.energy_unit * epsilon,
                phi: b
                    .ks
                    .iter()
                    .zip(&c)
                    .map(|(&harmonic, &coeff)| PhiTerm { harmonic, trig, coeff })
                    .collect(),
                parity,
                periodicity,
                admissible: false,
            };
            level.admissible = pi_periodic(&level);
            level
        })
        .collect()
}

fn pi_periodic(level: &QesLevel) -> bool {
    let xs = (0..PERIODICITY_POINTS).map(|i| 2.0 * PI * i as f64 / PERIODICITY_POINTS as f64);
    let pairs: Vec<(f64, f64)> = xs.map(|x| (level.psi_at(x), level.psi_at(x + PI))).collect();
    let big = pairs.iter().fold(0.0f64, |m, p| m.max(p.0.abs()));
    pairs.iter().all(|(a, b)| (a - b).abs() <= 1e-12 * big)
}

/// The `n + 1` exact levels in scaled form, sorted by energy.
pub fn qes_levels_scaled(p: &QesParams) -> Vec<QesLevel> {
    let mut levels = solve_block(p, Trig::Cos);
    levels.extend(solve_block(p, Trig::Sin));
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    levels
}

pub fn qes_levels(params: &LoopParams, hbar: f64) -> Result<Vec<QesLevel>> {
    Ok(qes_levels_scaled(&QesParams::from_loop(params, hbar)?))
}

/// Scaled max-norm of `Psi'' + [eps_bar - (n+1) xi cos2x + (xi^2/8) cos4x] Psi`
/// over `grid` points of one period, divided by `max |Psi|` times the size of
/// the bracket.
pub fn qes_residual(level: &QesLevel, grid: usize) -> f64 {
    let xi = level.xi;
    let n1 = (level.n + 1) as f64;
    let eps_bar = level.epsilon + xi * xi / 8.0;
    let size = eps_bar.abs() + n1 * xi + xi * xi / 8.0 + (level.n * level.n) as f64 + 1.0;
    let (mut worst, mut big) = (0.0f64, 0.0f64);
    for i in 0..grid.max(1) {
        let x = 2.0 * PI * i as f64 / grid.max(1) as f64;
        let (s2, c2) = (2.0 * x).sin_cos();
        let f = (-0.25 * xi * c2).exp();
        let (fp, fpp) = (0.5 * xi * s2, xi * c2);
        let (phi, dphi, d2phi) = level.phi_at(x);
        let psi = f * phi;
        let psi2 = f * ((fpp + fp * fp) * phi + 2.0 * fp * dphi + d2phi);
        let bracket = eps_bar - n1 * xi * c2 + xi * xi / 8.0 * (4.0 * x).cos();
        worst = worst.max((psi2 + bracket * psi).abs());
        big = big.max(psi.abs());
    }
    worst / (big * size)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrintedLevel {
    pub label: &'static str,
    pub energy: f64,
}

/// Closed-form energies for `n <= 3` in physical units. The `sin x` level at
/// `n = 1` uses the grouping `(1/16) hbar omega_c - (1/2) hbar omega (1 + 2 omega / omega_c)`.
pub fn printed_qes_energies(n: usize, omega: f64, omega_c: f64, hbar: f64) -> Option<Vec<PrintedLevel>> {
    let (w, wc, h) = (omega, omega_c, hbar);
    let level = |label, energy| PrintedLevel { label, energy };
    let out = match n {
        0 => vec![level("1", -0.5 * h * w * w / wc)],
        1 => vec![
            level("sin x", h * wc / 16.0 - 0.5 * h * w * (1.0 + 2.0 * w / wc)),
            level("cos x", h * wc / 16.0 + 0.5 * h * w * (1.0 - 2.0 * w / wc)),
        ],
        2 => {
            let base = h * wc / 12.0 - 1.5 * h * w * w / wc;
            let root = h * wc / 12.0 * (1.0 + 144.0 * w * w / (wc * wc)).sqrt();
            vec![
                level("2 xi + a_- cos 2x", base - root),
                level("2 xi + a_+ cos 2x", base + root),
                level("sin 2x", h * wc / 6.0 - 1.5 * h * w * w / wc),
            ]
        }
        3 => {
            let xi = 16.0 * w / wc;
            let e = |s1: f64, s2: f64| {
                h * wc / 32.0 * (-0.25 * xi * xi + 5.0 + s1 * xi + s2 * 2.0 * (xi * xi + 4.0 - 2.0 * s1 * xi).sqrt())
            };
            vec![
                level("cos x, cos 3x (-)", e(1.0, -1.0)),
                level("cos x, cos 3x (+)", e(1.0, 1.0)),
                level("sin x, sin 3x (-)", e(-1.0, -1.0)),
                level("sin x, sin 3x (+)", e(-1.0, 1.0)),
            ]
        }
        _ => return None,
    };
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_for(n: usize, omega: f64) -> LoopParams {
        LoopParams::magnetic(omega, (n + 1) as f64).unwrap()
    }

    #[test]
    fn ground_state_at_n0() {
        let levels = qes_levels(&loop_for(0, 0.5), 1.0).unwrap();
        assert_eq!(levels.len(), 1);
        assert!((levels[0].energy + 0.125).abs() < 1e-15);
        assert_eq!(levels[0].phi.len(), 1);
        assert!(levels[0].admissible);
    }

    #[test]
    fn sin2x_level_is_zero_at_n2() {
        let levels = qes_levels(&loop_for(2, 1.0), 1.0).unwrap();
        assert_eq!(levels.len(), 3);
        let s = levels.iter().find(|l| l.parity == Parity::Odd).unwrap();
        assert!(s.energy.abs() < 1e-14);
        assert_eq!(s.phi[0].harmonic, 2);
    }

    #[test]
    fn printed_energies_match_tridiagonal() {
        for n in 0..=3 {
            for &w in &[0.1, 0.5, 1.0, 2.7] {
                let p = loop_for(n, w);
                let mut solved: Vec<f64> = qes_levels(&p, 1.0).unwrap().iter().map(|l| l.energy).collect();
                let mut printed: Vec<f64> = printed_qes_energies(n, w, p.omega_c(), 1.0)
                    .unwrap()
                    .iter()
                    .map(|l| l.energy)
                    .collect();
                solved.sort_by(f64::total_cmp);
                printed.sort_by(f64::total_cmp);
                for (a, b) in solved.iter().zip(&printed) {
                    assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "n={n} w={w}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn n2_ground_state_has_a_minus_shape() {
        let w = 0.7;
        let levels = qes_levels(&loop_for(2, w), 1.0).unwrap();
        let xi: f64 = 12.0 * w / 3.0;
        let a_minus = 2.0 - 2.0 * (1.0 + xi * xi).sqrt();
        let g = &levels[0];
        let ratio = g.phi[1].coeff / g.phi[0].coeff;
        assert!((ratio - a_minus / (2.0 * xi)).abs() < 1e-12);
    }

    #[test]
    fn residuals_are_tiny_and_sensitive() {
        for n in 0..=6 {
            let p = QesParams::new(n, 1.3).unwrap();
            for level in qes_levels_scaled(&p) {
                assert!(qes_residual(&level, 2000) < 1e-10, "n={n}");
                let mut bad = level.clone();
                bad.epsilon += 8.0e-3;
                assert!(qes_residual(&bad, 2000) > 1e-5);
            }
        }
    }

    #[test]
    fn admissibility_follows_parity_of_n() {
        for n in 0..=7 {
            let levels = qes_levels_scaled(&QesParams::new(n, 0.9).unwrap());
            assert_eq!(levels.len(), n + 1);
            for l in &levels {
                assert_eq!(l.admissible, n % 2 == 0);
                assert_eq!(l.periodicity == Periodicity::Pi, l.admissible);
            }
            assert!(levels.windows(2).all(|w| w[0].energy < w[1].energy));
        }
    }

    #[test]
    fn non_integer_parameter_is_rejected() {
        let p = LoopParams::magnetic(1.0, 2.5).unwrap();
        assert!(matches!(qes_levels(&p, 1.0), Err(PorcError::NonIntegerQesParameter(_))));
    }

    #[test]
    fn small_xi_limit() {
        // Free modes 1, cos 2x, sin 2x.
        let levels = qes_levels_scaled(&QesParams::new(2, 1e-9).unwrap());
        let eps: Vec<f64> = levels.iter().map(|l| l.epsilon).collect();
        assert!(eps[0].abs() < 1e-8);
        assert!((eps[1] - 4.0).abs() < 1e-8 && (eps[2] - 4.0).abs() < 1e-8);
    }
}
