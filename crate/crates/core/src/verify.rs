//! Self-checks of the library against independent oracles.
//!
//! Each check reports a measured quantity and the bound it must stay under.
//! Sampled checks draw from a fixed-seed generator, so reports are reproducible.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{build_rep, BargmannIndex, Op, OperatorWord, SqueezeParameter, DEFAULT_TRUNCATION};
use crate::coherent::{disk_to_xieta, husimi_q, ModeLabels};
use crate::dynamics::{self, energy_unchecked, gradient, HamiltonianParams, PhaseState};
use crate::floquet::{monodromy, MathieuParams};
use crate::trap::{DriveParams, ModeFrequencies, Particle, TrapGeometry, TrapKind};

pub const CHECK_GROUPS: [&str; 6] = [
    "commutator",
    "casimir",
    "s-oracle",
    "gradient",
    "invariant-drift",
    "mathieu-limit",
];

/// Third Husimi coefficient used by the `s-oracle` group.
pub type Q3Fn = fn(&ModeLabels) -> f64;

fn library_q3(l: &ModeLabels) -> f64 {
    husimi_q(3, l).expect("order 3")
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions<'a> {
    /// Runs only groups whose name contains this string.
    pub filter: Option<&'a str>,
    pub q3: Q3Fn,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions<'_> {
    fn default() -> Self {
        Self {
            filter: None,
            q3: library_q3,
            samples: 200,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub group: &'static str,
    pub name: String,
    pub measured: f64,
    pub bound: f64,
}

impl CheckReport {
    fn new(group: &'static str, name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            group,
            name: name.into(),
            measured,
            bound,
        }
    }

    pub fn passed(&self) -> bool {
        self.measured < self.bound
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{}: {:.3e} (< {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.group,
            self.name,
            self.measured,
            self.bound
        )
    }
}

pub fn run_checks(opts: &VerifyOptions) -> Vec<CheckReport> {
    let selected = |g: &str| opts.filter.map_or(true, |f| g.contains(f));
    let mut out = Vec::new();
    if selected("commutator") {
        out.extend(commutator_checks());
    }
    if selected("casimir") {
        out.extend(casimir_checks());
    }
    if selected("s-oracle") {
        out.extend(s_oracle_checks(opts));
    }
    if selected("gradient") {
        out.push(gradient_check(opts));
    }
    if selected("invariant-drift") {
        out.extend(drift_checks(opts));
    }
    if selected("mathieu-limit") {
        out.extend(mathieu_checks());
    }
    out
}

pub const TEST_INDICES: [f64; 5] = [0.25, 0.75, 0.5, 1.0, 1.5];

fn commutator_checks() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for k in TEST_INDICES {
        for dim in [16, DEFAULT_TRUNCATION] {
            let rep = build_rep(BargmannIndex::new(k).expect("valid"), dim).expect("valid");
            let r = rep.commutator_residuals().max();
            out.push(CheckReport::new("commutator", format!("k={k},N={dim}"), r, 1e-10));
        }
    }
    out
}

fn casimir_checks() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for k in TEST_INDICES {
        let rep = build_rep(BargmannIndex::new(k).expect("valid"), DEFAULT_TRUNCATION).expect("valid");
        out.push(CheckReport::new("casimir", format!("k={k}"), rep.casimir_deviation(), 1e-10));
    }
    let axial = BargmannIndex::axial_even().casimir_eigenvalue();
    let axial_odd = BargmannIndex::axial_odd().casimir_eigenvalue();
    out.push(CheckReport::new(
        "casimir",
        "axial=-3/16",
        (axial + 3.0 / 16.0).abs().max((axial_odd + 3.0 / 16.0).abs()),
        1e-15,
    ));
    let radial = (0..6)
        .map(|l| {
            let want = (f64::from(l * l) - 1.0) / 4.0;
            (BargmannIndex::radial(l).casimir_eigenvalue() - want).abs()
        })
        .fold(0.0, f64::max);
    out.push(CheckReport::new("casimir", "radial=(l^2-1)/4", radial, 1e-15));
    out
}

/// Squeeze parameter uniform in the disk of radius `r_max`.
pub fn random_disk_point<R: Rng>(rng: &mut R, r_max: f64) -> SqueezeParameter {
    let r = r_max * rng.gen::<f64>().sqrt();
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    SqueezeParameter::new(Complex64::from_polar(r, th)).expect("inside the disk")
}

fn s_oracle_checks(opts: &VerifyOptions) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let reps: Vec<_> = TEST_INDICES
        .iter()
        .map(|&k| build_rep(BargmannIndex::new(k).expect("valid"), DEFAULT_TRUNCATION).expect("valid"))
        .collect();
    let mut worst = [0.0f64; 3];
    for _ in 0..opts.samples {
        let rep = &reps[rng.gen_range(0..reps.len())];
        let m = rng.gen_range(0..=4u32);
        let z = random_disk_point(&mut rng, 0.5);
        let labels = ModeLabels::new(rep.k(), m);
        let xi = disk_to_xieta(z).xi();
        for n in 1..=3u32 {
            let q = if n == 3 { (opts.q3)(&labels) } else { husimi_q(n, &labels).expect("order") };
            let s = xi.powi(n as i32) * q;
            let oracle = match rep.oracle_expectation(z, m as usize, &OperatorWord::power(Op::Omega, n as usize)) {
                Ok(v) => v.re,
                Err(_) => f64::INFINITY,
            };
            let rel = (s - oracle).abs() / oracle.abs();
            worst[n as usize - 1] = worst[n as usize - 1].max(rel);
        }
    }
    (0..3)
        .map(|i| CheckReport::new("s-oracle", format!("S{}", i + 1), worst[i], 1e-8))
        .collect()
}

/// Unit-scale combined or ideal-Paul configuration with a small anharmonic part
/// and random quantum numbers (`hbar = M = Q = Omega = 1`).
///
/// The ranges keep both harmonic modes inside the first stability region of
/// the squeeze-parameter flow, whose Hill equations are `u'' + (4K_a/M) u = 0`
/// and `u'' + (2K_r/M) u = 0`.
pub fn random_params<R: Rng>(rng: &mut R, kind: TrapKind, rf: bool) -> HamiltonianParams {
    let particle = Particle::new(1.0, 1.0).expect("valid");
    let mut geometry = TrapGeometry::quadrupole(-1.0, 0.0, kind);
    match kind {
        TrapKind::Combined => {
            geometry.b0 = rng.gen_range(0.3..0.6);
            geometry.d = rng.gen_range(-2e-4..2e-4);
        }
        TrapKind::IdealPaul => {
            geometry.c4 = rng.gen_range(-2e-9..2e-9);
            geometry.c6 = rng.gen_range(-1e-12..1e-12);
        }
    }
    let (u0, v0) = match (rf, kind) {
        (true, TrapKind::Combined) => (rng.gen_range(-3e-3..0.0), rng.gen_range(5e-3..1e-2)),
        (true, TrapKind::IdealPaul) => {
            let v0: f64 = rng.gen_range(5e-3..1e-2);
            (rng.gen_range(0.0..4.0 * v0 * v0), v0)
        }
        (false, _) => (rng.gen_range(-1e-2..-2e-3), 0.0),
    };
    let drive = DriveParams::new(u0, v0, 1.0).expect("valid");
    let freq = ModeFrequencies::new(
        &particle,
        &geometry,
        rng.gen_range(0.2..0.6),
        rng.gen_range(0.2..0.6),
        1.0,
    )
    .expect("valid");
    let k_a = if rng.gen_bool(0.5) { 0.25 } else { 0.75 };
    HamiltonianParams::new(
        k_a,
        rng.gen_range(0..3),
        rng.gen_range(0..3),
        rng.gen_range(0..3),
        freq,
        particle,
        geometry,
        drive,
    )
    .expect("valid")
    .with_physical_scales(false)
}

pub fn random_state<R: Rng>(rng: &mut R, r_max: f64) -> PhaseState {
    PhaseState::from_disk(random_disk_point(rng, r_max), random_disk_point(rng, r_max))
}

/// Largest relative difference between the analytic gradient and central differences.
pub fn gradient_error(s: &PhaseState, t: f64, p: &HamiltonianParams) -> f64 {
    let g = gradient(s, t, p);
    let base = s.to_array();
    let analytic = [(0, g.d_xi_a), (1, g.d_eta_a), (3, g.d_xi_r), (4, g.d_eta_r)];
    let scale = analytic.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for (idx, want) in analytic {
        let h = 1e-5 * base[idx].abs().max(1.0);
        let at = |d: f64| {
            let mut y = base;
            y[idx] += d;
            energy_unchecked(&PhaseState::from_array(&y), t, p)
        };
        // fourth-order central difference
        let fd = (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
        worst = worst.max((fd - want).abs() / want.abs().max(1e-3 * scale));
    }
    worst
}

fn gradient_check(opts: &VerifyOptions) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37);
    let mut worst = 0.0f64;
    for i in 0..opts.samples {
        let kind = if i % 2 == 0 { TrapKind::Combined } else { TrapKind::IdealPaul };
        let mut p = random_params(&mut rng, kind, true);
        // larger anharmonic terms so that they dominate the check
        p.geometry.d *= 1e4;
        p.geometry.c4 *= 1e4;
        p.geometry.c6 *= 1e4;
        let s = random_state(&mut rng, 0.7);
        let t = rng.gen_range(0.0..10.0);
        worst = worst.max(gradient_error(&s, t, &p));
    }
    CheckReport::new("gradient", "analytic-vs-fd", worst, 1e-6)
}

fn drift_checks(opts: &VerifyOptions) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xd1f7);
    let mut residual = 0.0f64;
    let mut energy = 0.0f64;
    for i in 0..3 {
        let kind = if i % 2 == 0 { TrapKind::Combined } else { TrapKind::IdealPaul };
        let p = random_params(&mut rng, kind, true);
        let s = random_state(&mut rng, 0.3);
        let t1 = 10.0 * p.drive.period();
        residual = match dynamics::integrate(&s, 0.0, t1, &p, 1e-10) {
            Ok(tr) => residual.max(tr.max_residual()),
            Err(_) => f64::INFINITY,
        };
        let q = random_params(&mut rng, TrapKind::Combined, false);
        let s = random_state(&mut rng, 0.3);
        energy = match dynamics::integrate(&s, 0.0, 10.0 * q.drive.period(), &q, 1e-10) {
            Ok(tr) => energy.max(tr.max_relative_energy_drift()),
            Err(_) => f64::INFINITY,
        };
    }
    vec![
        CheckReport::new("invariant-drift", "constraint", residual, 1e-8),
        CheckReport::new("invariant-drift", "static-energy", energy, 1e-8),
    ]
}

fn mathieu_checks() -> Vec<CheckReport> {
    let mut beta_err = 0.0f64;
    let mut det_err = 0.0f64;
    for a in [0.01, 0.1, 0.25, 0.5, 0.81] {
        let r = monodromy(MathieuParams::new(a, 0.0)).expect("finite");
        beta_err = beta_err.max(r.beta.map_or(f64::INFINITY, |b| (b - a.sqrt()).abs()));
        det_err = det_err.max((r.determinant() - 1.0).abs());
    }
    let small_q = monodromy(MathieuParams::new(0.0, 0.2)).expect("finite");
    let want = 0.2 / 2f64.sqrt();
    let rel = small_q.beta.map_or(f64::INFINITY, |b| (b - want).abs() / want);
    vec![
        CheckReport::new("mathieu-limit", "beta(a,0)=sqrt(a)", beta_err, 1e-8),
        CheckReport::new("mathieu-limit", "det=1", det_err, 1e-10),
        CheckReport::new("mathieu-limit", "beta(0,0.2)", rel, 0.05),
    ]
}
