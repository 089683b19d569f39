//! Trap and particle configuration, the drive `A(t)`, elastic constants and
//! the axisymmetric harmonic polynomials `H_2k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet;

/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// One of the two symplectic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Axial,
    Radial,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Axial => "axial",
            Mode::Radial => "radial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Particle {
    /// Charge in coulomb.
    pub charge: f64,
    /// Mass in kilogram.
    pub mass: f64,
}

impl Particle {
    pub fn new(charge: f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass must be positive, got {mass}")));
        }
        if charge == 0.0 || !charge.is_finite() {
            return Err(Error::InvalidArgument("charge must be nonzero".into()));
        }
        Ok(Self { charge, mass })
    }
}

/// `A(t) = U0 + V0 cos(Omega t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveParams {
    pub u0: f64,
    pub v0: f64,
    pub omega: f64,
}

impl DriveParams {
    pub fn new(u0: f64, v0: f64, omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "drive frequency must be positive, got {omega}"
            )));
        }
        Ok(Self { u0, v0, omega })
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        drive_amplitude(self, t)
    }

    /// Drive period `2 pi / Omega`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    pub fn is_static(&self) -> bool {
        self.v0 == 0.0
    }
}

pub fn drive_amplitude(d: &DriveParams, t: f64) -> f64 {
    if d.v0 == 0.0 {
        d.u0
    } else {
        d.u0 + d.v0 * (d.omega * t).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrapKind {
    /// RF quadrupole plus axial magnetic field, octupole term `Q A(t) D <H4>`.
    Combined,
    /// Pseudopotential description, `Q C4 <H4> + Q C6 <H6>`, no magnetic field.
    IdealPaul,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapGeometry {
    /// Quadrupole coefficient (1/m^2).
    pub c2: f64,
    /// Octupole coefficient of the combined trap (1/m^4).
    #[serde(default)]
    pub d: f64,
    /// Effective quartic coefficient (V/m^4).
    #[serde(default)]
    pub c4: f64,
    /// Effective sextic coefficient (V/m^6).
    #[serde(default)]
    pub c6: f64,
    /// Axial magnetic field (T).
    #[serde(default)]
    pub b0: f64,
    pub kind: TrapKind,
}

impl TrapGeometry {
    pub fn quadrupole(c2: f64, b0: f64, kind: TrapKind) -> Self {
        Self {
            c2,
            d: 0.0,
            c4: 0.0,
            c6: 0.0,
            b0,
            kind,
        }
    }

    /// Magnetic field felt by the ion; an ideal Paul trap has none.
    pub fn effective_field(&self) -> f64 {
        match self.kind {
            TrapKind::Combined => self.b0,
            TrapKind::IdealPaul => 0.0,
        }
    }
}

/// `c2 = -1/(r0^2 + 2 z0^2)`.
pub fn c2_from_semiaxes(r0: f64, z0: f64) -> Result<f64> {
    if !(r0 > 0.0 && z0 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "semiaxes must be positive, got r0 = {r0}, z0 = {z0}"
        )));
    }
    Ok(-1.0 / (r0 * r0 + 2.0 * z0 * z0))
}

pub fn cyclotron_frequency(p: &Particle, g: &TrapGeometry) -> f64 {
    p.charge * g.effective_field() / p.mass
}

/// Spring constants of the radial and axial harmonic parts (N/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticConstants {
    pub radial: f64,
    pub axial: f64,
}

/// `K_r = M w_c^2 / 4 - 2 Q c2 A(t)`, `K_a = 4 Q c2 A(t)`.
pub fn elastic_constants(
    p: &Particle,
    g: &TrapGeometry,
    d: &DriveParams,
    t: f64,
) -> ElasticConstants {
    let wc = cyclotron_frequency(p, g);
    let qca = p.charge * g.c2 * d.amplitude(t);
    ElasticConstants {
        radial: p.mass * wc * wc / 4.0 - 2.0 * qca,
        axial: 4.0 * qca,
    }
}

/// Reference frequencies and length scales of the two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFrequencies {
    pub omega_a: f64,
    pub omega_r: f64,
    pub omega_c: f64,
    pub hbar: f64,
    /// `2 hbar / (M omega_a)`.
    pub lambda_a: f64,
    /// `2 hbar / (M omega_r)`.
    pub lambda_r: f64,
}

impl ModeFrequencies {
    pub fn new(
        p: &Particle,
        g: &TrapGeometry,
        omega_a: f64,
        omega_r: f64,
        hbar: f64,
    ) -> Result<Self> {
        for (name, w) in [("omega_a", omega_a), ("omega_r", omega_r)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {w}"
                )));
            }
        }
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self {
            omega_a,
            omega_r,
            omega_c: cyclotron_frequency(p, g),
            hbar,
            lambda_a: 2.0 * hbar / (p.mass * omega_a),
            lambda_r: 2.0 * hbar / (p.mass * omega_r),
        })
    }

    /// Default reference frequencies.
    ///
    /// With an RF drive the secular rule `omega = beta Omega / 2`,
    /// `beta = sqrt(a + q^2/2)` is used per mode. For a static drive each
    /// mode is matched at `t = 0`: `omega_a = sqrt(K_a/M)`, `omega_r = sqrt(2 K_r/M)`.
    pub fn derive(p: &Particle, g: &TrapGeometry, d: &DriveParams, hbar: f64) -> Result<Self> {
        let (omega_a, omega_r) = if d.is_static() {
            let k = elastic_constants(p, g, d, 0.0);
            if k.axial <= 0.0 || k.radial <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "static trap is not confining (K_a = {}, K_r = {}); give omega_a/omega_r explicitly",
                    k.axial, k.radial
                )));
            }
            ((k.axial / p.mass).sqrt(), (2.0 * k.radial / p.mass).sqrt())
        } else {
            let (ma, mr) = floquet::mathieu_pair(p, g, d);
            let secular = |mp: floquet::MathieuParams, name: &str| -> Result<f64> {
                let b2 = mp.a + mp.q * mp.q / 2.0;
                if b2 <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "{name} secular estimate a + q^2/2 = {b2} is not positive; give the frequency explicitly"
                    )));
                }
                Ok(b2.sqrt() * d.omega / 2.0)
            };
            (secular(ma, "axial")?, secular(mr, "radial")?)
        };
        Self::new(p, g, omega_a, omega_r, hbar)
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Coefficients `c_j` of `rho^(2j) z^(2(k-j))` in `H_2k`, `j = 0..=k`.
pub fn harmonic_coefficients(k: u32) -> Result<Vec<f64>> {
    if k < 1 {
        return Err(Error::InvalidArgument("harmonic polynomial degree must be >= 1".into()));
    }
    let top = factorial(2 * k);
    Ok((0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let fj = factorial(j);
            sign * top / (4f64.powi(j as i32) * factorial(2 * k - 2 * j) * fj * fj)
        })
        .collect())
}

/// `H_2k(rho, z) = sum_j (-1)^j (2k)! rho^(2j) z^(2(k-j)) / (4^j (2k-2j)! (j!)^2)`.
pub fn harmonic_polynomial(k: u32, rho: f64, z: f64) -> Result<f64> {
    let coeffs = harmonic_coefficients(k)?;
    let (r2, z2) = (rho * rho, z * z);
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c * r2.powi(j as i32) * z2.powi((k as usize - j) as i32))
        .sum())
}

/// Largest `|d2H/drho2 + (1/rho) dH/drho + d2H/dz2|` over the points, from
/// fourth-order central differences with step `1e-2`. Points need `rho > 0`.
pub fn laplacian_residual(k: u32, points: &[(f64, f64)]) -> Result<f64> {
    harmonic_coefficients(k)?;
    let h = 1e-2;
    let f = |r: f64, z: f64| harmonic_polynomial(k, r, z).expect("degree checked");
    let d1 = |g: &dyn Fn(f64) -> f64, x: f64| {
        (-g(x + 2.0 * h) + 8.0 * g(x + h) - 8.0 * g(x - h) + g(x - 2.0 * h)) / (12.0 * h)
    };
    let d2 = |g: &dyn Fn(f64) -> f64, x: f64| {
        (-g(x + 2.0 * h) + 16.0 * g(x + h) - 30.0 * g(x) + 16.0 * g(x - h) - g(x - 2.0 * h))
            / (12.0 * h * h)
    };
    let mut worst = 0.0f64;
    for &(rho, z) in points {
        let along_rho = |r: f64| f(r, z);
        let along_z = |zz: f64| f(rho, zz);
        let lap = d2(&along_rho, rho) + d1(&along_rho, rho) / rho + d2(&along_z, z);
        worst = worst.max(lap.abs());
    }
    Ok(worst)
}

/// `n x n` grid over `[lo, hi]^2`.
pub fn square_grid(lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (lo + i as f64 * step, lo + j as f64 * step)))
        .collect()
}
