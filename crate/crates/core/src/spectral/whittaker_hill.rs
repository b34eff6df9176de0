use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{PorcError, Result};
use crate::params::LoopParams;

/// A continued-fraction denominator closer to zero than this is a pole.
const POLE_TOL: f64 = 1e-14;
/// Agreement between successive depths, relative to `max(1, |value|)`.
const DEPTH_TOL: f64 = 1e-13;
const MAX_DEPTH: usize = 1 << 16;
/// Target accuracy of a root in `eta`, relative to `max(1, |eta|)`.
const ROOT_TOL: f64 = 1e-12;
/// Fraction vs matrix: agreement at which a level counts as verified.
const ORACLE_TOL: f64 = 1e-8;
/// Fraction vs matrix: disagreement that aborts.
const MISMATCH_TOL: f64 = 1e-6;
/// Matrix eigenvalues must move less than this when the basis doubles.
const BASIS_TOL: f64 = 1e-10;
const MAX_BASIS: usize = 4096;

/// Period-`pi` branches in the half angle: even `gc` (cosine series) and odd
/// `gs` (sine series).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WhParity {
    #[serde(rename = "even-gc")]
    EvenGc,
    #[serde(rename = "odd-gs")]
    OddGs,
}

impl WhParity {
    pub fn as_str(&self) -> &'static str {
        match self {
            WhParity::EvenGc => "even-gc",
            WhParity::OddGs => "odd-gs",
        }
    }
}

/// `psi'' + (A0 + A1 cos 2 alpha + A2 cos 4 alpha) psi = 0` with
/// `A0 = eta + beta^2/8`, `A1 = -rho beta`, `A2 = -beta^2/8`, where
/// `eta = 8 m r^2 E / hbar^2`, `beta = 4 m r^2 omega / hbar`, `rho = 2 m g r / (hbar omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WhParams {
    pub beta: f64,
    pub rho: f64,
    /// Energy per unit of `eta`, `hbar^2 / (8 m r^2)`.
    pub energy_unit: f64,
}

impl WhParams {
    /// Scaled units, `hbar = m = r = 1`.
    pub fn new(beta: f64, rho: f64) -> Self {
        Self { beta, rho, energy_unit: 0.125 }
    }

    pub fn from_loop(params: &LoopParams, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(PorcError::InvalidParameter {
                name: "hbar",
                value: hbar,
                reason: "must be positive",
            });
        }
        let w = params.omega();
        if w <= 0.0 {
            return Err(PorcError::InvalidParameter {
                name: "omega",
                value: w,
                reason: "rho = 2 m g r / (hbar omega) needs a spinning loop",
            });
        }
        let i = params.inertia();
        Ok(Self {
            beta: 4.0 * i * w / hbar,
            rho: 2.0 * params.m() * params.g() * params.r() / (hbar * w),
            energy_unit: hbar * hbar / (8.0 * i),
        })
    }

    pub fn a0(&self, eta: f64) -> f64 {
        eta + self.beta * self.beta / 8.0
    }
    pub fn a1(&self) -> f64 {
        -self.rho * self.beta
    }
    pub fn a2(&self) -> f64 {
        -self.beta * self.beta / 8.0
    }
    pub fn energy_of(&self, eta: f64) -> f64 {
        self.energy_unit * eta
    }
    pub fn eta_of(&self, energy: f64) -> f64 {
        energy / self.energy_unit
    }
}

// Ince tridiagonal in the series index s: diagonal 4 s^2 and the products of
// opposite off-diagonals, (beta^2/2)(rho^2 + 1) between s = 0 and 1, and
// (beta^2/4)(rho^2 + (2s+1)^2) between s and s + 1 otherwise.
fn coupling(beta: f64, rho: f64, s: usize) -> f64 {
    let t = (2 * s + 1) as f64;
    if s == 0 {
        0.5 * beta * beta * (rho * rho + 1.0)
    } else {
        0.25 * beta * beta * (rho * rho + t * t)
    }
}

fn first_index(parity: WhParity) -> usize {
    match parity {
        WhParity::EvenGc => 0,
        WhParity::OddGs => 1,
    }
}

/// LHS - RHS of the characteristic equation at a fixed depth, tail set to zero.
fn fraction(parity: WhParity, eta: f64, beta: f64, rho: f64, depth: usize) -> Result<f64> {
    let lowest = first_index(parity) + 1;
    // F_s = 4 s^2 - eta - q_s / F_{s+1}, evaluated upward from s = depth.
    let mut f = f64::INFINITY;
    for s in (lowest..=depth).rev() {
        let tail = if f.is_infinite() { 0.0 } else { coupling(beta, rho, s) / f };
        f = (4 * s * s) as f64 - eta - tail;
        if f.abs() < POLE_TOL {
            return Err(PorcError::PoleHit(eta));
        }
    }
    let rho2 = rho * rho;
    Ok(match parity {
        WhParity::EvenGc => -2.0 * eta / (beta * (rho2 + 1.0)) - beta / f,
        WhParity::OddGs => (4.0 - eta) / (0.5 * beta * (rho2 + 9.0)) - 0.5 * beta / f,
    })
}

/// Residual of the period-`pi` characteristic equation (`-2 eta / beta(rho^2+1) = beta / (4 - eta - ...)`
/// for even, `(4 - eta) / (beta (rho^2+9) / 2) = (beta/2) / (16 - eta - ...)` for odd),
/// starting at `depth` and doubling until two depths agree.
pub fn wh_characteristic(parity: WhParity, eta: f64, beta: f64, rho: f64, depth: usize) -> Result<f64> {
    if beta == 0.0 {
        return Err(PorcError::FreeRotorLimit);
    }
    if depth < 8 {
        return Err(PorcError::InvalidParameter {
            name: "depth",
            value: depth as f64,
            reason: "continued fraction depth must be at least 8",
        });
    }
    let mut d = depth;
    let mut prev = fraction(parity, eta, beta, rho, d)?;
    while d < MAX_DEPTH {
        d *= 2;
        let next = fraction(parity, eta, beta, rho, d)?;
        if (next - prev).abs() <= DEPTH_TOL * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(PorcError::NotConverged(format!("continued fraction at eta = {eta} after depth {d}")))
}

/// Eigenvalues of the truncated Ince tridiagonal below `x` (negative pivots of
/// `T - x`, which are the top-down convergents of the same fraction).
fn count_below(parity: WhParity, beta: f64, rho: f64, depth: usize, x: f64) -> usize {
    let lo = first_index(parity);
    let mut count = 0;
    let mut u = 0.0;
    for s in lo..=depth {
        let d = (4 * s * s) as f64 - x;
        u = if s == lo { d } else { d - coupling(beta, rho, s - 1) / u };
        if u == 0.0 {
            u = -f64::MIN_POSITIVE.sqrt();
        }
        if u < 0.0 {
            count += 1;
        }
    }
    count
}

fn bracket(parity: WhParity, beta: f64, rho: f64, depth: usize) -> (f64, f64) {
    let lo = first_index(parity);
    let (mut a, mut b) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in lo..=depth {
        let left = if s > lo { coupling(beta, rho, s - 1).sqrt() } else { 0.0 };
        let right = if s < depth { coupling(beta, rho, s).sqrt() } else { 0.0 };
        let d = (4 * s * s) as f64;
        a = a.min(d - left - right);
        b = b.max(d + left + right);
    }
    (a - 1.0, b + 1.0)
}

fn kth_root(parity: WhParity, beta: f64, rho: f64, depth: usize, k: usize) -> Result<f64> {
    let (mut lo, mut hi) = bracket(parity, beta, rho, depth);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(parity, beta, rho, depth, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    // Secant polish on the bottom-up fraction; kept only if it stays in the
    // bisection bracket and lowers the residual.
    let h = ROOT_TOL * x.abs().max(1.0);
    let (x0, x1) = (x - h, x + h);
    let (f0, f1, fx) = match (
        fraction(parity, x0, beta, rho, depth),
        fraction(parity, x1, beta, rho, depth),
        fraction(parity, x, beta, rho, depth),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        _ => return Ok(x),
    };
    if f1 != f0 {
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if x2 > x0 && x2 < x1 {
            if let Ok(f2) = fraction(parity, x2, beta, rho, depth) {
                if f2.abs() < fx.abs() {
                    return Ok(x2);
                }
            }
        }
    }
    Ok(x)
}

/// Lowest `count` characteristic values `eta` of one branch, and the
/// fraction depth at which they settled.
pub fn wh_roots(parity: WhParity, beta: f64, rho: f64, count: usize) -> Result<(Vec<f64>, usize)> {
    if beta == 0.0 {
        return Err(PorcError::FreeRotorLimit);
    }
    if !(beta.is_finite() && rho.is_finite()) || count == 0 {
        return Err(PorcError::InvalidParameter {
            name: "count",
            value: count as f64,
            reason: "need finite beta, rho and at least one level",
        });
    }
    let roots_at = |depth| -> Result<Vec<f64>> {
        (0..count).map(|k| kth_root(parity, beta, rho, depth, k)).collect()
    };
    let mut depth = (count + 16).max(8);
    let mut prev = roots_at(depth)?;
    while depth < MAX_DEPTH {
        depth *= 2;
        let next = roots_at(depth)?;
        let settled = next
            .iter()
            .zip(&prev)
            .all(|(a, b)| (a - b).abs() <= DEPTH_TOL * a.abs().max(1.0));
        if settled {
            return Ok((next, depth));
        }
        prev = next;
    }
    Err(PorcError::NotConverged(format!("characteristic roots still moving at depth {depth}")))
}

// Half-angle Hamiltonian -d^2 + rho beta cos 2a + (beta^2/8) cos 4a in the
// orthonormal basis {1/sqrt2, cos 2a, cos 4a, ...} or {sin 2a, sin 4a, ...};
// eigenvalues are eta + beta^2/8.
fn fourier_matrix(parity: WhParity, beta: f64, rho: f64, n: usize) -> DMatrix<f64> {
    let c1 = 0.5 * rho * beta;
    let c2 = beta * beta / 16.0;
    let mut h = DMatrix::zeros(n, n);
    let k0 = first_index(parity);
    for i in 0..n {
        let k = i + k0;
        h[(i, i)] = (4 * k * k) as f64;
        let (s1, s2) = if k == 0 { (SQRT_2, SQRT_2) } else { (1.0, 1.0) };
        if i + 1 < n {
            h[(i, i + 1)] = c1 * s1;
            h[(i + 1, i)] = c1 * s1;
        }
        if i + 2 < n {
            h[(i, i + 2)] = c2 * s2;
            h[(i + 2, i)] = c2 * s2;
        }
    }
    // cos 4a folds cos 2a onto itself with a plus sign, sin 2a with a minus.
    let fold = match parity {
        WhParity::EvenGc => (1, c2),
        WhParity::OddGs => (0, -c2),
    };
    if fold.0 < n {
        h[(fold.0, fold.0)] += fold.1;
    }
    h
}

fn sorted_etas(parity: WhParity, beta: f64, rho: f64, n: usize) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(fourier_matrix(parity, beta, rho, n))
        .eigenvalues
        .iter()
        .map(|l| l - beta * beta / 8.0)
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Lowest `n / 4` values of `eta` from a Fourier basis of `n` functions,
/// confirmed against a basis of `2n`.
pub fn wh_oracle_etas(parity: WhParity, beta: f64, rho: f64, n: usize) -> Result<Vec<f64>> {
    if n < 16 {
        return Err(PorcError::InvalidParameter {
            name: "N",
            value: n as f64,
            reason: "the Fourier basis needs at least 16 functions",
        });
    }
    let keep = n / 4;
    let coarse = sorted_etas(parity, beta, rho, n);
    let fine = sorted_etas(parity, beta, rho, 2 * n);
    for (a, b) in coarse.iter().zip(&fine).take(keep) {
        if (a - b).abs() > BASIS_TOL * b.abs().max(1.0) {
            return Err(PorcError::NotConverged(format!(
                "Fourier basis of {n} functions: eta moved from {a} to {b}"
            )));
        }
    }
    Ok(fine.into_iter().take(keep).collect())
}

/// Energies from the Fourier matrix oracle.
pub fn wh_matrix_oracle(params: &LoopParams, hbar: f64, parity: WhParity, n: usize) -> Result<Vec<f64>> {
    let p = WhParams::from_loop(params, hbar)?;
    Ok(wh_oracle_etas(parity, p.beta, p.rho, n)?
        .into_iter()
        .map(|eta| p.energy_of(eta))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhLevel {
    pub index: usize,
    pub eta: f64,
    pub energy: f64,
    pub eta_oracle: f64,
    pub energy_oracle: f64,
    /// `|eta - eta_oracle| / max(1, |eta_oracle|)`.
    pub gap: f64,
    /// `gap` within 1e-8.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhSpectrum {
    pub parity: WhParity,
    pub params: WhParams,
    pub depth: usize,
    pub basis: usize,
    pub levels: Vec<WhLevel>,
}

/// Smallest basis (from 16, doubling) for which the lowest `count` oracle
/// levels have settled.
fn oracle_for(parity: WhParity, beta: f64, rho: f64, count: usize) -> Result<(Vec<f64>, usize)> {
    let mut n = 16;
    while n < 4 * count {
        n *= 2;
    }
    loop {
        match wh_oracle_etas(parity, beta, rho, n) {
            Ok(v) => return Ok((v, n)),
            Err(PorcError::NotConverged(_)) if n < MAX_BASIS => n *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Dimensionless core of [`wh_eigenvalues`].
pub fn wh_spectrum(p: WhParams, count: usize, parity: WhParity) -> Result<WhSpectrum> {
    let (etas, depth) = wh_roots(parity, p.beta, p.rho, count)?;
    let (oracle, basis) = oracle_for(parity, p.beta, p.rho, count)?;
    let mut levels = Vec::with_capacity(count);
    for (index, (&eta, &eta_oracle)) in etas.iter().zip(&oracle).enumerate() {
        let gap = (eta - eta_oracle).abs() / eta_oracle.abs().max(1.0);
        if gap > MISMATCH_TOL {
            return Err(PorcError::OracleMismatch {
                cf: p.energy_of(eta),
                matrix: p.energy_of(eta_oracle),
            });
        }
        levels.push(WhLevel {
            index,
            eta,
            energy: p.energy_of(eta),
            eta_oracle,
            energy_oracle: p.energy_of(eta_oracle),
            gap,
            verified: gap <= ORACLE_TOL,
        });
    }
    Ok(WhSpectrum {
        parity,
        params: p,
        depth,
        basis,
        levels,
    })
}

/// Lowest `count` period-`pi` levels of one branch, from the continued
/// fraction and cross-checked against the Fourier matrix.
pub fn wh_eigenvalues(params: &LoopParams, hbar: f64, count: usize, parity: WhParity) -> Result<WhSpectrum> {
    wh_spectrum(WhParams::from_loop(params, hbar)?, count, parity)
}
