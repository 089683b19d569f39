//! Dequantized classical Hamiltonian, its gradient, and the TDVP equations
//! of motion in `(xi, eta, sigma)` and disk coordinates.
//!
//! Per mode the Hamiltonian is `w (A eta + B xi)` with `w = k + m`, plus the
//! constant `-(omega_c/2) hbar l` and the anharmonic average. Rates are
//! obtained from `H / hbar`, so time is physical time.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::algebra::{BargmannIndex, SqueezeParameter};
use crate::coherent::{self, h4_average, h6_average, husimi_q, ModeLabels, XiEtaState};
use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions, OdeStats};
use crate::trap::{elastic_constants, DriveParams, Mode, ModeFrequencies, Particle, TrapGeometry, TrapKind};

/// `xi + eta` beyond which a trajectory is treated as having reached the disk boundary.
pub const DIVERGENCE_BOUND: f64 = 1e10;

/// Full parameter set of the classical Hamilton function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianParams {
    pub labels_a: ModeLabels,
    pub labels_r: ModeLabels,
    /// Orbital quantum number.
    pub l: u32,
    pub frequencies: ModeFrequencies,
    pub particle: Particle,
    pub geometry: TrapGeometry,
    pub drive: DriveParams,
    /// Multiply each power of `xi` in the anharmonic moments by `2 hbar/(M omega)`.
    pub physical_scales: bool,
}

impl HamiltonianParams {
    /// Checks `k_a in {1/4, 3/4}` and sets `k_r = (l+1)/2`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k_a: f64,
        m_a: u32,
        l: u32,
        m_r: u32,
        frequencies: ModeFrequencies,
        particle: Particle,
        geometry: TrapGeometry,
        drive: DriveParams,
    ) -> Result<Self> {
        if k_a != 0.25 && k_a != 0.75 {
            return Err(Error::InvalidArgument(format!(
                "axial Bargmann index must be 1/4 or 3/4, got {k_a}"
            )));
        }
        Ok(Self {
            labels_a: ModeLabels::new(BargmannIndex::new(k_a)?, m_a),
            labels_r: ModeLabels::new(BargmannIndex::radial(l), m_r),
            l,
            frequencies,
            particle,
            geometry,
            drive,
            physical_scales: true,
        })
    }

    pub fn with_physical_scales(mut self, on: bool) -> Self {
        self.physical_scales = on;
        self
    }

    pub fn labels(&self, mode: Mode) -> &ModeLabels {
        match mode {
            Mode::Axial => &self.labels_a,
            Mode::Radial => &self.labels_r,
        }
    }

    /// Per-`(k+m)` coefficients `(A, B)` of `eta` and `xi` at time `t`.
    pub fn harmonic_coefficients(&self, mode: Mode, t: f64) -> (f64, f64) {
        let f = &self.frequencies;
        let k = elastic_constants(&self.particle, &self.geometry, &self.drive, t);
        let m = self.particle.mass;
        match mode {
            Mode::Axial => (
                2.0 * f.hbar * f.omega_a,
                2.0 * f.hbar * k.axial / (m * f.omega_a),
            ),
            Mode::Radial => (
                f.hbar * f.omega_r,
                2.0 * f.hbar * k.radial / (m * f.omega_r),
            ),
        }
    }

    /// Length-scale factor applied per power of `xi` in `S_n`.
    pub fn moment_scale(&self, mode: Mode) -> f64 {
        if !self.physical_scales {
            return 1.0;
        }
        match mode {
            Mode::Axial => self.frequencies.lambda_a,
            Mode::Radial => self.frequencies.lambda_r,
        }
    }

    /// Effective coefficients multiplying `<H4>` and `<H6>` at time `t`.
    pub fn anharmonic_coefficients(&self, t: f64) -> (f64, f64) {
        let q = self.particle.charge;
        let g = &self.geometry;
        match g.kind {
            TrapKind::Combined => (q * self.drive.amplitude(t) * g.d, 0.0),
            TrapKind::IdealPaul => (q * g.c4, q * g.c6),
        }
    }

    /// `-(omega_c / 2) hbar l`.
    pub fn rotation_term(&self) -> f64 {
        -0.5 * self.frequencies.omega_c * self.frequencies.hbar * self.l as f64
    }
}

/// Disk coordinates of both modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub axial: XiEtaState,
    pub radial: XiEtaState,
}

impl PhaseState {
    pub fn new(axial: XiEtaState, radial: XiEtaState) -> Self {
        Self { axial, radial }
    }

    pub fn origin() -> Self {
        Self::new(XiEtaState::origin(), XiEtaState::origin())
    }

    pub fn from_disk(z_a: SqueezeParameter, z_r: SqueezeParameter) -> Self {
        Self::new(coherent::disk_to_xieta(z_a), coherent::disk_to_xieta(z_r))
    }

    pub fn mode(&self, mode: Mode) -> &XiEtaState {
        match mode {
            Mode::Axial => &self.axial,
            Mode::Radial => &self.radial,
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        let a = self.axial.to_array();
        let r = self.radial.to_array();
        [a[0], a[1], a[2], r[0], r[1], r[2]]
    }

    pub fn from_array(y: &[f64; 6]) -> Self {
        Self::new(
            XiEtaState::from_raw(y[0], y[1], y[2]),
            XiEtaState::from_raw(y[3], y[4], y[5]),
        )
    }

    fn validate(&self) -> Result<()> {
        XiEtaState::new(self.axial.xi(), self.axial.eta(), self.axial.sigma())?;
        XiEtaState::new(self.radial.xi(), self.radial.eta(), self.radial.sigma())?;
        Ok(())
    }
}

/// `S_n` for `n = 1..3` and their `xi` derivatives for one mode.
#[derive(Debug, Clone, Copy)]
struct Moments {
    s: [f64; 3],
    ds: [f64; 3],
}

impl Moments {
    fn new(xi: f64, labels: &ModeLabels, scale: f64) -> Self {
        let q = [1, 2, 3].map(|n| husimi_q(n, labels).expect("orders 1..3"));
        let x = scale * xi;
        Self {
            s: [x * q[0], x * x * q[1], x * x * x * q[2]],
            ds: [scale * q[0], 2.0 * scale * x * q[1], 3.0 * scale * x * x * q[2]],
        }
    }
}

fn moments(s: &PhaseState, p: &HamiltonianParams) -> (Moments, Moments) {
    (
        Moments::new(s.axial.xi(), &p.labels_a, p.moment_scale(Mode::Axial)),
        Moments::new(s.radial.xi(), &p.labels_r, p.moment_scale(Mode::Radial)),
    )
}

/// Anharmonic part of the Hamiltonian.
pub fn anharmonic_energy(s: &PhaseState, t: f64, p: &HamiltonianParams) -> f64 {
    let (c4, c6) = p.anharmonic_coefficients(t);
    if c4 == 0.0 && c6 == 0.0 {
        return 0.0;
    }
    let (a, r) = moments(s, p);
    let h4 = h4_average(a.s[0], a.s[1], r.s[0], r.s[1]);
    let h6 = h6_average(a.s[0], a.s[1], a.s[2], r.s[0], r.s[1], r.s[2]);
    c4 * h4 + c6 * h6
}

/// Energy without validating the constraint (integrator samples).
pub fn energy_unchecked(s: &PhaseState, t: f64, p: &HamiltonianParams) -> f64 {
    let mut h = p.rotation_term() + anharmonic_energy(s, t, p);
    for mode in [Mode::Axial, Mode::Radial] {
        let (a, b) = p.harmonic_coefficients(mode, t);
        let st = s.mode(mode);
        h += p.labels(mode).weight() * (a * st.eta() + b * st.xi());
    }
    h
}

/// Classical Hamilton function on a validated state.
pub fn classical_hamiltonian(s: &PhaseState, t: f64, p: &HamiltonianParams) -> Result<f64> {
    s.validate()?;
    Ok(energy_unchecked(s, t, p))
}

/// Partial derivatives of the Hamiltonian in the four independent coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradient {
    pub d_xi_a: f64,
    pub d_eta_a: f64,
    pub d_xi_r: f64,
    pub d_eta_r: f64,
}

impl Gradient {
    pub fn mode(&self, mode: Mode) -> (f64, f64) {
        match mode {
            Mode::Axial => (self.d_xi_a, self.d_eta_a),
            Mode::Radial => (self.d_xi_r, self.d_eta_r),
        }
    }
}

pub fn gradient(s: &PhaseState, t: f64, p: &HamiltonianParams) -> Gradient {
    let (aa, ba) = p.harmonic_coefficients(Mode::Axial, t);
    let (ar, br) = p.harmonic_coefficients(Mode::Radial, t);
    let wa = p.labels_a.weight();
    let wr = p.labels_r.weight();
    let mut g = Gradient {
        d_xi_a: wa * ba,
        d_eta_a: wa * aa,
        d_xi_r: wr * br,
        d_eta_r: wr * ar,
    };
    let (c4, c6) = p.anharmonic_coefficients(t);
    if c4 != 0.0 || c6 != 0.0 {
        let (a, r) = moments(s, p);
        let h4_a = 8.0 * a.ds[1] - 24.0 * r.s[0] * a.ds[0];
        let h4_r = -24.0 * a.s[0] * r.ds[0] + 3.0 * r.ds[1];
        let h6_a = 16.0 * a.ds[2] - 120.0 * a.ds[1] * r.s[0] + 90.0 * a.ds[0] * r.s[1];
        let h6_r = -120.0 * a.s[1] * r.ds[0] + 90.0 * a.s[0] * r.ds[1] - 5.0 * r.ds[2];
        g.d_xi_a += c4 * h4_a + c6 * h6_a;
        g.d_xi_r += c4 * h4_r + c6 * h6_r;
    }
    g
}

/// `(xi', eta', sigma')` for both modes, flattened as in [`PhaseState::to_array`].
pub fn eom_rhs(s: &PhaseState, t: f64, p: &HamiltonianParams) -> [f64; 6] {
    let g = gradient(s, t, p);
    let hbar = p.frequencies.hbar;
    let mut out = [0.0; 6];
    for (i, mode) in [Mode::Axial, Mode::Radial].into_iter().enumerate() {
        let st = s.mode(mode);
        let (h_xi, h_eta) = g.mode(mode);
        let w = hbar * p.labels(mode).weight();
        out[3 * i] = 2.0 * st.sigma() * h_eta / w;
        out[3 * i + 1] = -2.0 * st.sigma() * h_xi / w;
        out[3 * i + 2] = (st.eta() * h_eta - st.xi() * h_xi) / w;
    }
    out
}

/// Squeeze parameters of both modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskState {
    pub z_a: Complex64,
    pub z_r: Complex64,
}

impl DiskState {
    pub fn new(z_a: SqueezeParameter, z_r: SqueezeParameter) -> Self {
        Self {
            z_a: z_a.value(),
            z_r: z_r.value(),
        }
    }

    pub fn mode(&self, mode: Mode) -> Complex64 {
        match mode {
            Mode::Axial => self.z_a,
            Mode::Radial => self.z_r,
        }
    }

    pub fn to_phase_state(&self) -> Result<PhaseState> {
        Ok(PhaseState::from_disk(
            SqueezeParameter::new(self.z_a)?,
            SqueezeParameter::new(self.z_r)?,
        ))
    }

    fn to_array(self) -> [f64; 4] {
        [self.z_a.re, self.z_a.im, self.z_r.re, self.z_r.im]
    }

    fn from_array(y: &[f64; 4]) -> Self {
        Self {
            z_a: Complex64::new(y[0], y[1]),
            z_r: Complex64::new(y[2], y[3]),
        }
    }
}

/// `dz/dt = (1 - |z|^2)^2 / (2 i hbar (k+m)) dH/dz*` for one mode, with
/// `dH/dz* = H_xi ((1+z)/(1-|z|^2))^2 - H_eta ((z-1)/(1-|z|^2))^2`.
pub fn disk_eom_rhs(z: &DiskState, t: f64, mode: Mode, p: &HamiltonianParams) -> Result<Complex64> {
    let s = z.to_phase_state()?;
    let g = gradient(&s, t, p);
    Ok(disk_velocity(z.mode(mode), g.mode(mode), p.frequencies.hbar * p.labels(mode).weight()))
}

fn disk_velocity(z: Complex64, (h_xi, h_eta): (f64, f64), w: f64) -> Complex64 {
    let denom = 1.0 - z.norm_sqr();
    let plus = (1.0 + z) / denom;
    let minus = (z - 1.0) / denom;
    let dh_dzbar = plus * plus * h_xi - minus * minus * h_eta;
    dh_dzbar * (denom * denom) / Complex64::new(0.0, 2.0 * w)
}

fn disk_rhs_all(z: &DiskState, t: f64, p: &HamiltonianParams) -> Result<(Complex64, Complex64)> {
    let s = z.to_phase_state()?;
    let g = gradient(&s, t, p);
    let hbar = p.frequencies.hbar;
    Ok((
        disk_velocity(z.z_a, g.mode(Mode::Axial), hbar * p.labels_a.weight()),
        disk_velocity(z.z_r, g.mode(Mode::Radial), hbar * p.labels_r.weight()),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: PhaseState,
    pub energy: f64,
    pub residual_a: f64,
    pub residual_r: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub stats: OdeStats,
}

pub const TRAJECTORY_HEADER: &str = "t,xi_a,eta_a,sigma_a,xi_r,eta_r,sigma_r,H,res_a,res_r";

/// Decimal with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Trajectory {
    pub fn first(&self) -> Option<&TrajectorySample> {
        self.samples.first()
    }

    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    /// Largest `|sigma^2 - xi eta + 1|` over all samples and both modes.
    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.residual_a.abs().max(s.residual_r.abs()))
            .fold(0.0, f64::max)
    }

    /// `max |H(t) - H(t0)| / |H(t0)|`.
    pub fn max_relative_energy_drift(&self) -> f64 {
        let Some(h0) = self.first().map(|s| s.energy) else {
            return 0.0;
        };
        self.samples
            .iter()
            .map(|s| (s.energy - h0).abs() / h0.abs())
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{TRAJECTORY_HEADER}")?;
        for s in &self.samples {
            let y = s.state.to_array();
            let row: Vec<String> = std::iter::once(s.t)
                .chain(y)
                .chain([s.energy, s.residual_a, s.residual_r])
                .map(fmt_f64)
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// An integration that stopped before `t1`; the samples up to that point are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergedRun {
    pub t: f64,
    pub reason: String,
    pub partial: Trajectory,
}

impl From<DivergedRun> for Error {
    fn from(d: DivergedRun) -> Self {
        Error::Divergence {
            t: d.t,
            reason: d.reason,
        }
    }
}

fn step_options(p: &HamiltonianParams, tol: f64) -> OdeOptions {
    let opts = OdeOptions::with_tol(tol);
    if p.drive.is_static() {
        opts
    } else {
        opts.max_step(p.drive.period() / 8.0)
    }
}

/// Step bound of the collocation integrator: `tol^(-1/6)`-scaled fraction of
/// the shortest of the drive period and the fastest Möbius rotation period,
/// the latter estimated from `|A| + |B| + |dH_anh/dxi| / (k+m)` at `t0` and
/// half a drive period later.
pub fn collocation_step(s: &PhaseState, t0: f64, p: &HamiltonianParams, tol: f64) -> f64 {
    let mut rate = 0.0f64;
    let times = [t0, t0 + p.drive.period() / 2.0];
    for t in times {
        let g = gradient(s, t, p);
        for mode in [Mode::Axial, Mode::Radial] {
            let (a, b) = p.harmonic_coefficients(mode, t);
            let w = p.labels(mode).weight();
            let anh = (g.mode(mode).0 - w * b).abs() / w;
            rate = rate.max((a.abs() + b.abs() + anh) / p.frequencies.hbar);
        }
    }
    let mut period = std::f64::consts::TAU / rate;
    if !p.drive.is_static() {
        period = period.min(p.drive.period());
    }
    let per_period = (2.0 * tol.powf(-1.0 / 6.0)).ceil().max(16.0);
    period / per_period
}

fn check_interval(t0: f64, t1: f64, tol: f64) -> Result<()> {
    if !(t1 >= t0) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need t1 >= t0 and tol > 0 (t0 = {t0}, t1 = {t1}, tol = {tol})"
        )));
    }
    Ok(())
}

fn boundary_check(xi_plus_eta: f64) -> std::result::Result<(), String> {
    if xi_plus_eta.is_finite() && xi_plus_eta < DIVERGENCE_BOUND {
        Ok(())
    } else {
        Err(format!("approached the disk boundary (xi + eta = {xi_plus_eta:.3e})"))
    }
}

/// Gauss–Legendre integration of [`eom_rhs`], recording energy and constraint
/// residuals at every step. The constraint `sigma^2 = xi eta - 1` is a
/// quadratic first integral and is carried to rounding accuracy.
pub fn integrate(
    initial: &PhaseState,
    t0: f64,
    t1: f64,
    p: &HamiltonianParams,
    tol: f64,
) -> std::result::Result<Trajectory, DivergedRun> {
    check_interval(t0, t1, tol).map_err(|e| DivergedRun {
        t: t0,
        reason: e.to_string(),
        partial: Trajectory::default(),
    })?;
    let mut traj = Trajectory::default();
    let result = ode::integrate_gauss(
        |t, y: &[f64; 6]| Ok(eom_rhs(&PhaseState::from_array(y), t, p)),
        t0,
        initial.to_array(),
        t1,
        collocation_step(initial, t0, p, tol),
        |t, y| {
            let state = PhaseState::from_array(y);
            boundary_check((y[0] + y[1]).max(y[3] + y[4]))?;
            traj.samples.push(TrajectorySample {
                t,
                state,
                energy: energy_unchecked(&state, t, p),
                residual_a: state.axial.residual(),
                residual_r: state.radial.residual(),
            });
            Ok(())
        },
    );
    match result {
        Ok(stats) => {
            traj.stats = stats;
            Ok(traj)
        }
        Err(f) => {
            traj.stats = f.stats;
            Err(DivergedRun {
                t: f.t,
                reason: f.reason,
                partial: traj,
            })
        }
    }
}

/// Samples of a disk-coordinate integration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiskTrajectory {
    pub samples: Vec<(f64, DiskState)>,
    pub stats: OdeStats,
}

/// Integrates the disk-coordinate equations of both modes.
pub fn integrate_disk(
    initial: &DiskState,
    t0: f64,
    t1: f64,
    p: &HamiltonianParams,
    tol: f64,
) -> Result<DiskTrajectory> {
    check_interval(t0, t1, tol)?;
    initial.to_phase_state()?;
    let mut traj = DiskTrajectory::default();
    let stats = ode::integrate(
        |t, y: &[f64; 4]| {
            let z = DiskState::from_array(y);
            let (va, vr) = disk_rhs_all(&z, t, p).map_err(|e| e.to_string())?;
            Ok([va.re, va.im, vr.re, vr.im])
        },
        t0,
        initial.to_array(),
        t1,
        &step_options(p, tol),
        |t, y| {
            let z = DiskState::from_array(y);
            let edge = z.z_a.norm().max(z.z_r.norm());
            boundary_check(4.0 / (1.0 - edge * edge).max(0.0))?;
            traj.samples.push((t, z));
            Ok(())
        },
    )
    .map_err(|f| Error::Divergence {
        t: f.t,
        reason: f.reason,
    })?;
    traj.stats = stats;
    Ok(traj)
}
