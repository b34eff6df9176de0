//! Complete elliptic integral of the first kind and Jacobi elliptic functions.
//!
//! Everything is parameterised by the modulus `k` (not `m = k^2`). The Jacobi
//! functions use the descending AGM scheme of Abramowitz & Stegun 16.4 after
//! reducing the argument into `[-K, K]`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{PorcError, Result};

const AGM_TOL: f64 = 1e-16;
const AGM_MAX: usize = 64;

/// Elliptic modulus with its complement derived on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticModulus {
    k: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(PorcError::ModulusOutOfRange(k));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `k' = sqrt(1 - k^2)`.
    pub fn kprime(&self) -> f64 {
        ((1.0 - self.k) * (1.0 + self.k)).sqrt()
    }

    pub fn quarter_period(&self) -> Result<f64> {
        complete_k(self.k)
    }
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= AGM_TOL * an {
            return 0.5 * (an + bn);
        }
        a = an;
        b = bn;
    }
    a
}

/// Complete elliptic integral `K(k)` for `0 <= k < 1`.
pub fn complete_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(PorcError::ModulusOutOfRange(k));
    }
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(FRAC_PI_2 / agm(1.0, kp))
}

/// Descending AGM for `|u| <= K`: returns the amplitude `phi_0`.
fn landen(u: f64, k: f64) -> f64 {
    let mut a = [0.0f64; AGM_MAX + 1];
    let mut c = [0.0f64; AGM_MAX + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    let mut n = 0;
    while n < AGM_MAX && c[n].abs() > AGM_TOL {
        let an = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
        a[n] = an;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    phi
}

/// Jacobi `(sn, cn, dn)` together with the unwrapped amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    pub am: f64,
}

/// Jacobi elliptic functions of real argument and modulus `0 <= k <= 1`.
pub fn jacobi(u: f64, k: f64) -> Jacobi {
    if k <= 0.0 {
        return Jacobi {
            sn: u.sin(),
            cn: u.cos(),
            dn: 1.0,
            am: u,
        };
    }
    if k >= 1.0 {
        let sech = 1.0 / u.cosh();
        return Jacobi {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
            am: u.sinh().atan(),
        };
    }
    // am(u + 2K) = am(u) + pi, sn and cn flip sign, dn is unchanged.
    let big_k = complete_k(k).expect("modulus checked above");
    let n = (u / (2.0 * big_k)).round();
    let ur = u - n * 2.0 * big_k;
    let phi0 = landen(ur, k);
    let flip = if (n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    // dn > 0 for real u and k < 1. The Landen ratio cos(phi0) / cos(phi1 - phi0)
    // loses about three digits near k = 1, so dn comes from sn instead.
    let s = phi0.sin();
    let dn = ((1.0 - k * s) * (1.0 + k * s)).sqrt();
    Jacobi {
        sn: flip * s,
        cn: flip * phi0.cos(),
        dn,
        am: phi0 + n * std::f64::consts::PI,
    }
}

/// Jacobi amplitude `am(u, k)`, continuous in `u`.
pub fn amplitude(u: f64, k: f64) -> f64 {
    jacobi(u, k).am
}
