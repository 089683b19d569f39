//! Hill/Mathieu stability of the quadrupole motion, Floquet exponents, the
//! quasienergy spectrum and the Riccati evolution of the squeeze parameters.
//!
//! In the scaled time `tau = Omega t / 2` the Newtonian motion
//! `M u'' + K(t) u = 0` of either mode becomes `u'' + (a - 2q cos 2tau) u = 0`.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::SqueezeParameter;
use crate::coherent::ModeLabels;
use crate::dynamics::{fmt_f64, HamiltonianParams};
use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions};
use crate::trap::{cyclotron_frequency, DriveParams, Mode, Particle, TrapGeometry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathieuParams {
    pub a: f64,
    pub q: f64,
}

impl MathieuParams {
    pub fn new(a: f64, q: f64) -> Self {
        Self { a, q }
    }
}

/// `(axial, radial)` Mathieu parameters of a configuration.
pub fn mathieu_pair(p: &Particle, g: &TrapGeometry, d: &DriveParams) -> (MathieuParams, MathieuParams) {
    let scale = p.charge * g.c2 / (p.mass * d.omega * d.omega);
    let wc = cyclotron_frequency(p, g) / d.omega;
    (
        MathieuParams::new(16.0 * scale * d.u0, -8.0 * scale * d.v0),
        MathieuParams::new(wc * wc - 8.0 * scale * d.u0, 4.0 * scale * d.v0),
    )
}

pub fn mathieu_params(p: &HamiltonianParams, mode: Mode) -> MathieuParams {
    let (a, r) = mathieu_pair(&p.particle, &p.geometry, &p.drive);
    match mode {
        Mode::Axial => a,
        Mode::Radial => r,
    }
}

/// One-period propagation of the Hill equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetResult {
    pub params: MathieuParams,
    /// Rows `[u1, u2]` and `[u1', u2']` at `tau = pi`.
    pub monodromy: [[f64; 2]; 2],
    pub stable: bool,
    /// Characteristic exponent in `[0, 1]`; `None` when unstable.
    pub beta: Option<f64>,
}

impl FloquetResult {
    pub fn trace(&self) -> f64 {
        self.monodromy[0][0] + self.monodromy[1][1]
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.monodromy;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Floquet frequency `beta Omega / 2` for drive frequency `omega`.
    pub fn mu(&self, omega: f64) -> Option<f64> {
        self.beta.map(|b| b * omega / 2.0)
    }
}

pub const MONODROMY_TOL: f64 = 1e-13;

/// Integrates the fundamental system over `tau in [0, pi]`.
pub fn monodromy(mp: MathieuParams) -> Result<FloquetResult> {
    if !(mp.a.is_finite() && mp.q.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite Mathieu parameters {mp:?}")));
    }
    let mut end = [0.0; 4];
    // columns (u1, u1', u2, u2')
    let opts = OdeOptions::with_tol(MONODROMY_TOL).max_step(PI / 16.0);
    ode::integrate(
        |tau, y: &[f64; 4]| {
            let w = mp.a - 2.0 * mp.q * (2.0 * tau).cos();
            Ok([y[1], -w * y[0], y[3], -w * y[2]])
        },
        0.0,
        [1.0, 0.0, 0.0, 1.0],
        PI,
        &opts,
        |_, y| {
            end = *y;
            Ok(())
        },
    )
    .map_err(|f| Error::Numerical(format!("monodromy integration failed at tau = {}: {}", f.t, f.reason)))?;
    let m = [[end[0], end[2]], [end[1], end[3]]];
    let half = (m[0][0] + m[1][1]) / 2.0;
    let stable = half.abs() <= 1.0;
    let beta = stable.then(|| {
        // sin^2(pi beta) from the off-diagonal entries keeps accuracy near |trace| = 2
        let s2 = (-m[0][1] * m[1][0] - 0.25 * (m[0][0] - m[1][1]).powi(2)).max(0.0);
        s2.sqrt().atan2(half) / PI
    });
    Ok(FloquetResult {
        params: mp,
        monodromy: m,
        stable,
        beta,
    })
}

/// `E = 2 hbar [mu_a (k_a+m_a) + mu_r (k_r+m_r) - omega_c l / 4]`.
pub fn quasienergy(
    mu_a: f64,
    mu_r: f64,
    labels_a: &ModeLabels,
    labels_r: &ModeLabels,
    l: u32,
    omega_c: f64,
    hbar: f64,
) -> f64 {
    2.0 * hbar * (mu_a * labels_a.weight() + mu_r * labels_r.weight() - omega_c * l as f64 / 4.0)
}

/// Floquet frequencies of both modes, or the first unstable one as an error.
pub fn floquet_frequencies(p: &HamiltonianParams) -> Result<(f64, f64)> {
    let mut out = [0.0; 2];
    for (i, mode) in [Mode::Axial, Mode::Radial].into_iter().enumerate() {
        let mp = mathieu_params(p, mode);
        let res = monodromy(mp)?;
        out[i] = res.mu(p.drive.omega).ok_or(Error::UnstableMode {
            mode: mode.name(),
            a: mp.a,
            q: mp.q,
        })?;
    }
    Ok((out[0], out[1]))
}

/// Quasienergy of the configuration's own labels.
pub fn quasienergy_for(p: &HamiltonianParams) -> Result<f64> {
    let (mu_a, mu_r) = floquet_frequencies(p)?;
    Ok(quasienergy(
        mu_a,
        mu_r,
        &p.labels_a,
        &p.labels_r,
        p.l,
        p.frequencies.omega_c,
        p.frequencies.hbar,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLine {
    pub k_a: f64,
    pub m_a: u32,
    pub k_r: f64,
    pub m_r: u32,
    pub l: u32,
    pub energy: f64,
}

/// Quasienergies over `m_a, m_r < max_m` and `l < max_l`, with the configuration's `k_a`.
pub fn spectrum(p: &HamiltonianParams, max_m: u32, max_l: u32) -> Result<Vec<SpectrumLine>> {
    let (mu_a, mu_r) = floquet_frequencies(p)?;
    let mut lines = Vec::new();
    for l in 0..max_l {
        for m_a in 0..max_m {
            for m_r in 0..max_m {
                let la = ModeLabels::new(p.labels_a.k, m_a);
                let lr = ModeLabels::new(crate::algebra::BargmannIndex::radial(l), m_r);
                lines.push(SpectrumLine {
                    k_a: la.k.value(),
                    m_a,
                    k_r: lr.k.value(),
                    m_r,
                    l,
                    energy: quasienergy(mu_a, mu_r, &la, &lr, l, p.frequencies.omega_c, p.frequencies.hbar),
                });
            }
        }
    }
    Ok(lines)
}

pub const SPECTRUM_HEADER: &str = "k_a,m_a,k_r,m_r,l,E";

pub fn write_spectrum_csv<W: Write>(lines: &[SpectrumLine], mut out: W) -> io::Result<()> {
    writeln!(out, "{SPECTRUM_HEADER}")?;
    for s in lines {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(s.k_a),
            s.m_a,
            fmt_f64(s.k_r),
            s.m_r,
            s.l,
            fmt_f64(s.energy)
        )?;
    }
    Ok(())
}

/// Rectangular `(a, q)` grid, row-major in `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityGrid {
    pub a_min: f64,
    pub a_max: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub n_a: usize,
    pub n_q: usize,
}

impl StabilityGrid {
    pub fn points(&self) -> Vec<MathieuParams> {
        let lin = |lo: f64, hi: f64, n: usize, i: usize| {
            if n > 1 {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            } else {
                lo
            }
        };
        (0..self.n_a)
            .flat_map(|i| {
                (0..self.n_q).map(move |j| {
                    MathieuParams::new(
                        lin(self.a_min, self.a_max, self.n_a, i),
                        lin(self.q_min, self.q_max, self.n_q, j),
                    )
                })
            })
            .collect()
    }
}

/// Monodromy at every grid point, in grid order; runs on the current rayon pool.
pub fn stability_map(grid: &StabilityGrid) -> Result<Vec<FloquetResult>> {
    grid.points().into_par_iter().map(monodromy).collect()
}

pub const STABILITY_HEADER: &str = "a,q,stable,beta";

pub fn write_stability_csv<W: Write>(map: &[FloquetResult], mut out: W) -> io::Result<()> {
    writeln!(out, "{STABILITY_HEADER}")?;
    for r in map {
        let beta = r.beta.map(fmt_f64).unwrap_or_else(|| "nan".into());
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(r.params.a),
            fmt_f64(r.params.q),
            u8::from(r.stable),
            beta
        )?;
    }
    Ok(())
}

/// Harmonic coefficients of one mode, `A` constant and `B(t) = b0 + b1 cos(omega t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiCoefficients {
    pub a: f64,
    pub b0: f64,
    pub b1: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl RiccatiCoefficients {
    /// `A_a = 2 hbar omega_a`, `B_a = 2 hbar K_a(t)/(M omega_a)`,
    /// `A_r = hbar omega_r`, `B_r = 2 hbar K_r(t)/(M omega_r)`.
    pub fn for_mode(p: &HamiltonianParams, mode: Mode) -> Self {
        let (a, b_at_zero) = p.harmonic_coefficients(mode, 0.0);
        let b1 = if p.drive.is_static() {
            0.0
        } else {
            // B is affine in A(t) = U0 + V0 cos(Omega t)
            let (_, b_at_half) = p.harmonic_coefficients(mode, p.drive.period() / 2.0);
            (b_at_zero - b_at_half) / 2.0
        };
        Self {
            a,
            b0: b_at_zero - b1,
            b1,
            omega: p.drive.omega,
            hbar: p.frequencies.hbar,
        }
    }

    /// Coefficients whose flow is the SU(1,1) image of `u'' + (a - 2q cos 2tau) u = 0`
    /// in the time variable `tau` (`hbar = 1`).
    pub fn from_mathieu(mp: MathieuParams) -> Self {
        Self {
            a: 1.0,
            b0: mp.a,
            b1: -2.0 * mp.q,
            omega: 2.0,
            hbar: 1.0,
        }
    }

    pub fn constant(a: f64, b: f64, hbar: f64) -> Self {
        Self {
            a,
            b0: b,
            b1: 0.0,
            omega: 1.0,
            hbar,
        }
    }

    pub fn at(&self, t: f64) -> (f64, f64) {
        (self.a, self.b0 + self.b1 * (self.omega * t).cos())
    }

    /// Drive period `2 pi / omega`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }
}

/// Which right-hand side [`riccati_evolve`] integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RiccatiForm {
    /// `i hbar z' = (A+B) z + ((B-A)/2)(z^2+1)`, `hbar phi' = (A+B) + ((B-A)/2)(z+z*)`.
    #[default]
    Bracket,
    /// `i z' = alpha + (beta/2)(z^2+1)`, `phi' = alpha + (beta/2)(z+z*)` with
    /// `alpha = (A+B)/hbar`, `beta = (B-A)/hbar`; lacks the linear term.
    NoLinearTerm,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RiccatiPath {
    pub samples: Vec<(f64, Complex64, f64)>,
}

impl RiccatiPath {
    /// Smallest `1 - |z|^2` along the path.
    pub fn min_gap(&self) -> f64 {
        self.samples
            .iter()
            .map(|(_, z, _)| 1.0 - z.norm_sqr())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn last(&self) -> Option<&(f64, Complex64, f64)> {
        self.samples.last()
    }
}

/// `1 - |z|^2` below which the path is declared divergent.
pub const RICCATI_EDGE: f64 = 1e-10;

fn riccati_rhs(c: &RiccatiCoefficients, form: RiccatiForm, t: f64, z: Complex64) -> (Complex64, f64) {
    let (a, b) = c.at(t);
    let i = Complex64::i();
    let (sum, half_diff) = ((a + b) / c.hbar, (b - a) / (2.0 * c.hbar));
    match form {
        RiccatiForm::Bracket => (
            -i * (sum * z + half_diff * (z * z + 1.0)),
            sum + half_diff * 2.0 * z.re,
        ),
        RiccatiForm::NoLinearTerm => (
            -i * (sum + half_diff * (z * z + 1.0)),
            sum + half_diff * 2.0 * z.re,
        ),
    }
}

/// Adaptive integration of the squeeze parameter `z` and phase `phi` of one mode.
pub fn riccati_evolve(
    z0: SqueezeParameter,
    phi0: f64,
    coeffs: &RiccatiCoefficients,
    form: RiccatiForm,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<RiccatiPath> {
    let mut path = RiccatiPath::default();
    let opts = OdeOptions::with_tol(tol).max_step(coeffs.period() / 16.0);
    let z = z0.value();
    ode::integrate(
        |t, y: &[f64; 3]| {
            let (dz, dphi) = riccati_rhs(coeffs, form, t, Complex64::new(y[0], y[1]));
            Ok([dz.re, dz.im, dphi])
        },
        t0,
        [z.re, z.im, phi0],
        t1,
        &opts,
        |t, y| {
            let z = Complex64::new(y[0], y[1]);
            let gap = 1.0 - z.norm_sqr();
            if gap < RICCATI_EDGE {
                return Err(format!("|z| reached the unit circle (1 - |z|^2 = {gap:.3e})"));
            }
            path.samples.push((t, z, y[2]));
            Ok(())
        },
    )
    .map_err(|f| Error::Divergence { t: f.t, reason: f.reason })?;
    Ok(path)
}
