//! Closed-form expectation values on squeezed coherent states `|z, k, m>`.
//!
//! A point of the disk is carried in the global coordinates
//! `xi = |1+z|^2 / (1-|z|^2)`, `eta = |1-z|^2 / (1-|z|^2)`,
//! `sigma = 2 Im z / (1-|z|^2)`, which satisfy `sigma^2 = xi eta - 1`.

use num_complex::Complex64;

use crate::algebra::{BargmannIndex, SqueezeParameter};
use crate::error::{Error, Result};

/// Relative tolerance on `sigma^2 - xi eta + 1` accepted at construction.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;

/// Global disk coordinates `(xi, eta, sigma)` of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEtaState {
    xi: f64,
    eta: f64,
    sigma: f64,
}

impl XiEtaState {
    /// Validated constructor: `xi, eta > 0` and `sigma^2 = xi eta - 1`.
    pub fn new(xi: f64, eta: f64, sigma: f64) -> Result<Self> {
        let s = Self { xi, eta, sigma };
        if !(xi > 0.0 && eta > 0.0) || !s.is_finite() {
            return Err(Error::InvalidState(format!(
                "xi and eta must be positive and finite, got ({xi}, {eta}, {sigma})"
            )));
        }
        let res = s.residual();
        if res.abs() > CONSTRAINT_TOLERANCE * (1.0 + xi * eta) {
            return Err(Error::InvalidState(format!(
                "sigma^2 - xi*eta + 1 = {res:.3e} at ({xi}, {eta}, {sigma})"
            )));
        }
        Ok(s)
    }

    /// Point on the `sigma` branch `epsilon * sqrt(xi eta - 1)`.
    pub fn from_xi_eta(xi: f64, eta: f64, branch: SignBranch) -> Result<Self> {
        let prod = xi * eta - 1.0;
        if prod < -CONSTRAINT_TOLERANCE * (1.0 + xi * eta) {
            return Err(Error::InvalidState(format!(
                "xi*eta = {} < 1 lies outside the disk image",
                xi * eta
            )));
        }
        Self::new(xi, eta, branch.sign() * prod.max(0.0).sqrt())
    }

    /// Unvalidated triple, e.g. an integrator sample that may have drifted.
    pub fn from_raw(xi: f64, eta: f64, sigma: f64) -> Self {
        Self { xi, eta, sigma }
    }

    /// The image of `z = 0`.
    pub fn origin() -> Self {
        Self {
            xi: 1.0,
            eta: 1.0,
            sigma: 0.0,
        }
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `sigma^2 - xi eta + 1`, zero on the constraint surface.
    pub fn residual(&self) -> f64 {
        self.sigma * self.sigma - self.xi * self.eta + 1.0
    }

    fn is_finite(&self) -> bool {
        self.xi.is_finite() && self.eta.is_finite() && self.sigma.is_finite()
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.xi, self.eta, self.sigma]
    }
}

/// Sign of `Im z` when a disk point is rebuilt from `(xi, eta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignBranch {
    Plus,
    Minus,
}

impl SignBranch {
    pub fn sign(self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }

    /// Branch carried by a stored `sigma`; `+` when `|sigma| < 1e-14`.
    pub fn of(sigma: f64) -> Self {
        if sigma < 0.0 && sigma.abs() >= 1e-14 {
            SignBranch::Minus
        } else {
            SignBranch::Plus
        }
    }
}

/// Oscillator labels `(k, m)` of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeLabels {
    pub k: BargmannIndex,
    pub m: u32,
}

impl ModeLabels {
    pub fn new(k: BargmannIndex, m: u32) -> Self {
        Self { k, m }
    }

    /// `k + m`, the `K0` eigenvalue of `|k, m>`.
    pub fn weight(&self) -> f64 {
        self.k.value() + self.m as f64
    }
}

pub fn disk_to_xieta(z: SqueezeParameter) -> XiEtaState {
    let zv = z.value();
    let denom = 1.0 - zv.norm_sqr();
    XiEtaState {
        xi: (1.0 + zv).norm_sqr() / denom,
        eta: (1.0 - zv).norm_sqr() / denom,
        sigma: 2.0 * zv.im / denom,
    }
}

/// Inverse of [`disk_to_xieta`]: `Re z = (xi - eta)/(xi + eta + 2)` and
/// `Im z = epsilon * 2 sqrt(xi eta - 1)/(xi + eta + 2)`.
pub fn xieta_to_disk(s: &XiEtaState, branch: SignBranch) -> Result<SqueezeParameter> {
    let checked = XiEtaState::new(s.xi, s.eta, s.sigma)?;
    let total = checked.xi + checked.eta + 2.0;
    let re = (checked.xi - checked.eta) / total;
    let im = branch.sign() * 2.0 * (checked.xi * checked.eta - 1.0).max(0.0).sqrt() / total;
    SqueezeParameter::new(Complex64::new(re, im))
}

/// `Q_n(k, m) = <k,m| E^n |k,m>` for `n = 1, 2, 3`.
///
/// The third moment is the exact one obtained from the ladder matrix
/// elements; see [`quoted_q3`] for the commonly quoted variant.
pub fn husimi_q(n: u32, labels: &ModeLabels) -> Result<f64> {
    let k = labels.k.value();
    let m = labels.m as f64;
    match n {
        1 => Ok(2.0 * (k + m)),
        2 => Ok(2.0 * k * (2.0 * k + 1.0) + 12.0 * k * m + 6.0 * m * m),
        3 => Ok(4.0 * k * (k + 1.0) * (2.0 * k + 1.0)
            + 4.0 * m * (12.0 * k * k + 3.0 * k + 1.0)
            + 60.0 * k * m * m
            + 20.0 * m.powi(3)),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

/// `4k(k+1)(2k+1) + 4mk(5+12k) + 4m^2(15k+1) + 20m^3`.
///
/// Agrees with the true third moment only on the vacuum `m = 0`; for
/// `m >= 1` it overshoots by `4m(2k + m - 1)`.
pub fn quoted_q3(labels: &ModeLabels) -> f64 {
    let k = labels.k.value();
    let m = labels.m as f64;
    4.0 * k * (k + 1.0) * (2.0 * k + 1.0)
        + 4.0 * m * k * (5.0 + 12.0 * k)
        + 4.0 * m * m * (15.0 * k + 1.0)
        + 20.0 * m.powi(3)
}

/// `S_n = xi^n Q_n(k, m)`, the squeezed moment `<z,k,m| Omega^n |z,k,m>`.
pub fn s_value(n: u32, z: SqueezeParameter, labels: &ModeLabels) -> Result<f64> {
    s_from_xi(n, disk_to_xieta(z).xi(), labels)
}

pub fn s_from_xi(n: u32, xi: f64, labels: &ModeLabels) -> Result<f64> {
    Ok(xi.powi(n as i32) * husimi_q(n, labels)?)
}

/// `<K0 - K1> = (k+m) eta`.
pub fn kinetic_expectation(z: SqueezeParameter, labels: &ModeLabels) -> f64 {
    labels.weight() * disk_to_xieta(z).eta()
}

/// Squeezed expectations of the generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorMoments {
    pub k0: f64,
    pub kplus: Complex64,
    pub kminus: Complex64,
}

/// `<K+> = 2(k+m) z*/(1-|z|^2)`, `<K-> = 2(k+m) z/(1-|z|^2)`,
/// `<K0> = (k+m)(1+|z|^2)/(1-|z|^2)`.
pub fn generator_expectations(z: SqueezeParameter, labels: &ModeLabels) -> GeneratorMoments {
    let zv = z.value();
    let w = labels.weight();
    let denom = 1.0 - zv.norm_sqr();
    GeneratorMoments {
        k0: w * (1.0 + zv.norm_sqr()) / denom,
        kplus: zv.conj() * (2.0 * w / denom),
        kminus: zv * (2.0 * w / denom),
    }
}

/// `<H4> = 8 S2a - 24 S1r S1a + 3 S2r`.
pub fn h4_average(s1a: f64, s2a: f64, s1r: f64, s2r: f64) -> f64 {
    8.0 * s2a - 24.0 * s1r * s1a + 3.0 * s2r
}

/// `<H6> = 16 S3a - 120 S2a S1r + 90 S1a S2r - 5 S3r`.
pub fn h6_average(s1a: f64, s2a: f64, s3a: f64, s1r: f64, s2r: f64, s3r: f64) -> f64 {
    16.0 * s3a - 120.0 * s2a * s1r + 90.0 * s1a * s2r - 5.0 * s3r
}
