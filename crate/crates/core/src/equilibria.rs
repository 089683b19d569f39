//! Stationary points of the classical Hamilton function in `(xi_a, xi_r)`.
//!
//! Both the combined-trap and the pseudopotential systems are quadratic in
//! the two unknowns; the combined trap has no quadratic part.

use std::io::{self, Write};

use nalgebra::{Matrix2, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::coherent::husimi_q;
use crate::dynamics::{fmt_f64, HamiltonianParams};
use crate::trap::Mode;

/// Coefficients of `[1, x, y, x^2, xy, y^2]` for two equations in `(x, y) = (xi_a, xi_r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSystem {
    pub eq: [[f64; 6]; 2],
}

impl QuadraticSystem {
    pub fn new(eq: [[f64; 6]; 2]) -> Self {
        Self { eq }
    }

    pub fn residual(&self, x: f64, y: f64) -> (f64, f64) {
        let basis = [1.0, x, y, x * x, x * y, y * y];
        let eval = |c: &[f64; 6]| c.iter().zip(basis).map(|(c, b)| c * b).sum::<f64>();
        (eval(&self.eq[0]), eval(&self.eq[1]))
    }

    pub fn jacobian(&self, x: f64, y: f64) -> Matrix2<f64> {
        let row = |c: &[f64; 6]| (c[1] + 2.0 * c[3] * x + c[4] * y, c[2] + c[4] * x + 2.0 * c[5] * y);
        let (a, b) = row(&self.eq[0]);
        let (c, d) = row(&self.eq[1]);
        Matrix2::new(a, b, c, d)
    }

    pub fn is_linear(&self) -> bool {
        self.eq.iter().all(|c| c[3] == 0.0 && c[4] == 0.0 && c[5] == 0.0)
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.eq.iter().flatten().fold(0.0, |m: f64, c| m.max(c.abs()))
    }

    pub fn max_residual(&self, x: f64, y: f64) -> f64 {
        let (r1, r2) = self.residual(x, y);
        r1.abs().max(r2.abs())
    }

    /// Multiplies every coefficient by `f`.
    pub fn scaled(&self, f: f64) -> Self {
        let mut out = *self;
        out.eq.iter_mut().flatten().for_each(|c| *c *= f);
        out
    }
}

/// Second-derivative character of a stationary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Minimum,
    Saddle,
    Maximum,
    Degenerate,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Self::Minimum => "minimum",
            Self::Saddle => "saddle",
            Self::Maximum => "maximum",
            Self::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryPoint {
    pub xi_a: f64,
    pub xi_r: f64,
    pub residual: f64,
    pub admissible: bool,
}

impl StationaryPoint {
    fn at(sys: &QuadraticSystem, x: f64, y: f64) -> Self {
        Self {
            xi_a: x,
            xi_r: y,
            residual: sys.max_residual(x, y),
            admissible: x > 0.0 && y > 0.0,
        }
    }
}

/// Relative eigenvalue size below which the Hessian counts as singular.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Signs of the eigenvalues of the symmetrised Jacobian at the point.
pub fn classify(sys: &QuadraticSystem, point: &StationaryPoint) -> Classification {
    let j = sys.jacobian(point.xi_a, point.xi_r);
    let h = (j + j.transpose()) * 0.5;
    let norm = h.norm();
    let ev = SymmetricEigen::new(h).eigenvalues;
    if norm == 0.0 || ev.iter().any(|l| l.abs() < DEGENERACY_TOL * norm) {
        return Classification::Degenerate;
    }
    match (ev[0] > 0.0, ev[1] > 0.0) {
        (true, true) => Classification::Minimum,
        (false, false) => Classification::Maximum,
        _ => Classification::Saddle,
    }
}

/// Coefficients `c4`, `c6` of `<H4>`, `<H6>` and the `xi` coefficients `B_j (k_j + m_j)`.
fn stationarity_system(p: &HamiltonianParams, kb: (f64, f64), c4: f64, c6: f64) -> QuadraticSystem {
    let q = |n, mode| husimi_q(n, p.labels(mode)).expect("orders 1..=3");
    let (la, lr) = (p.moment_scale(Mode::Axial), p.moment_scale(Mode::Radial));
    let (q1a, q2a, q3a) = (q(1, Mode::Axial), q(2, Mode::Axial), q(3, Mode::Axial));
    let (q1r, q2r, q3r) = (q(1, Mode::Radial), q(2, Mode::Radial), q(3, Mode::Radial));
    let cross = -24.0 * c4 * la * lr * q1a * q1r;
    QuadraticSystem::new([
        [
            kb.0,
            16.0 * c4 * la * la * q2a,
            cross,
            48.0 * c6 * la.powi(3) * q3a,
            -240.0 * c6 * la * la * lr * q2a * q1r,
            90.0 * c6 * la * lr * lr * q1a * q2r,
        ],
        [
            kb.1,
            cross,
            6.0 * c4 * lr * lr * q2r,
            -120.0 * c6 * la * la * lr * q2a * q1r,
            180.0 * c6 * la * lr * lr * q1a * q2r,
            -15.0 * c6 * lr.powi(3) * q3r,
        ],
    ])
}

fn xi_coefficients(p: &HamiltonianParams, t: f64) -> (f64, f64) {
    let ba = p.harmonic_coefficients(Mode::Axial, t).1 * p.labels_a.weight();
    let br = p.harmonic_coefficients(Mode::Radial, t).1 * p.labels_r.weight();
    (ba, br)
}

/// Combined-trap system at time `t`: `B_j(t)(k_j+m_j)` plus `Q A(t) D` times the `<H4>` gradient.
pub fn combined_system(t: f64, p: &HamiltonianParams) -> QuadraticSystem {
    let c4 = p.particle.charge * p.drive.amplitude(t) * p.geometry.d;
    stationarity_system(p, xi_coefficients(p, t), c4, 0.0)
}

/// Pseudopotential system: cycle-averaged elastic constants with `Q C4` and `Q C6`.
pub fn pseudopotential_system(p: &HamiltonianParams) -> QuadraticSystem {
    let (b0, b1) = if p.drive.is_static() {
        (xi_coefficients(p, 0.0), (0.0, 0.0))
    } else {
        (xi_coefficients(p, 0.0), xi_coefficients(p, p.drive.period() / 2.0))
    };
    let avg = if p.drive.is_static() { b0 } else { ((b0.0 + b1.0) / 2.0, (b0.1 + b1.1) / 2.0) };
    let q = p.particle.charge;
    stationarity_system(p, avg, q * p.geometry.c4, q * p.geometry.c6)
}

pub fn combined_residual(xi_a: f64, xi_r: f64, t: f64, p: &HamiltonianParams) -> (f64, f64) {
    combined_system(t, p).residual(xi_a, xi_r)
}

pub fn pseudopotential_residual(xi_a: f64, xi_r: f64, p: &HamiltonianParams) -> (f64, f64) {
    pseudopotential_system(p).residual(xi_a, xi_r)
}

/// Direct elimination of a system without quadratic part; empty when singular.
pub fn solve_linear(sys: &QuadraticSystem) -> Vec<StationaryPoint> {
    let [e1, e2] = sys.eq;
    let (a, b, c, d) = (e1[1], e1[2], e2[1], e2[2]);
    let det = a * d - b * c;
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if scale == 0.0 || det.abs() <= 1e-14 * scale * scale {
        return Vec::new();
    }
    let x = (-e1[0] * d + b * e2[0]) / det;
    let y = (-a * e2[0] + c * e1[0]) / det;
    vec![StationaryPoint::at(sys, x, y)]
}

pub fn solve_combined(t: f64, p: &HamiltonianParams) -> Vec<StationaryPoint> {
    solve_linear(&combined_system(t, p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultistartOptions {
    pub lo: f64,
    pub hi: f64,
    /// Starts per axis.
    pub per_axis: usize,
    pub max_iter: usize,
    /// Distance below which two roots are merged.
    pub dedup: f64,
    /// Acceptance bound on the absolute residual.
    pub tolerance: f64,
}

impl Default for MultistartOptions {
    fn default() -> Self {
        Self {
            lo: 0.1,
            hi: 10.0,
            per_axis: 4,
            max_iter: 100,
            dedup: 1e-8,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSearch {
    pub points: Vec<StationaryPoint>,
    pub starts: usize,
    pub converged: usize,
}

fn newton(sys: &QuadraticSystem, mut x: f64, mut y: f64, opts: &MultistartOptions) -> Option<(f64, f64)> {
    let floor = 4.0 * f64::EPSILON * sys.scale();
    for _ in 0..opts.max_iter {
        let (r1, r2) = sys.residual(x, y);
        let j = sys.jacobian(x, y);
        let det = j.determinant();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (j[(1, 1)] * r1 - j[(0, 1)] * r2) / det;
        let dy = (-j[(1, 0)] * r1 + j[(0, 0)] * r2) / det;
        x -= dx;
        y -= dy;
        if !(x.is_finite() && y.is_finite()) {
            return None;
        }
        let step = dx.abs().max(dy.abs());
        if step <= 1e-15 * (1.0 + x.abs().max(y.abs())) || sys.max_residual(x, y) <= floor {
            // one polishing step after convergence
            let (r1, r2) = sys.residual(x, y);
            let j = sys.jacobian(x, y);
            let det = j.determinant();
            if det != 0.0 {
                x -= (j[(1, 1)] * r1 - j[(0, 1)] * r2) / det;
                y -= (-j[(1, 0)] * r1 + j[(0, 0)] * r2) / det;
            }
            return (sys.max_residual(x, y) < opts.tolerance).then_some((x, y));
        }
    }
    None
}

/// Newton iteration from a square grid of starts; roots sorted by `(xi_a, xi_r)`.
pub fn solve_multistart(sys: &QuadraticSystem, opts: &MultistartOptions) -> RootSearch {
    let n = opts.per_axis.max(1);
    let node = |i: usize| {
        if n == 1 {
            opts.lo
        } else {
            opts.lo + (opts.hi - opts.lo) * i as f64 / (n - 1) as f64
        }
    };
    let starts: Vec<(f64, f64)> = (0..n).flat_map(|i| (0..n).map(move |j| (node(i), node(j)))).collect();
    let found: Vec<(f64, f64)> = starts
        .par_iter()
        .filter_map(|&(x, y)| newton(sys, x, y, opts))
        .collect();
    let mut points: Vec<StationaryPoint> = Vec::new();
    for &(x, y) in &found {
        if points.iter().all(|p| (p.xi_a - x).hypot(p.xi_r - y) > opts.dedup) {
            points.push(StationaryPoint::at(sys, x, y));
        }
    }
    points.sort_by(|a, b| a.xi_a.total_cmp(&b.xi_a).then(a.xi_r.total_cmp(&b.xi_r)));
    RootSearch {
        points,
        starts: starts.len(),
        converged: found.len(),
    }
}

pub fn solve_pseudopotential(p: &HamiltonianParams, opts: &MultistartOptions) -> RootSearch {
    solve_multistart(&pseudopotential_system(p), opts)
}

/// One exported root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootRecord {
    pub xi_a: f64,
    pub xi_r: f64,
    pub residual: f64,
    pub admissible: bool,
    pub classification: Classification,
}

pub fn records(sys: &QuadraticSystem, points: &[StationaryPoint]) -> Vec<RootRecord> {
    points
        .iter()
        .map(|p| RootRecord {
            xi_a: p.xi_a,
            xi_r: p.xi_r,
            residual: p.residual,
            admissible: p.admissible,
            classification: classify(sys, p),
        })
        .collect()
}

pub const ROOTS_HEADER: &str = "xi_a,xi_r,residual,admissible,classification";

pub fn write_roots_csv<W: Write>(roots: &[RootRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{ROOTS_HEADER}")?;
    for r in roots {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.xi_a),
            fmt_f64(r.xi_r),
            fmt_f64(r.residual),
            r.admissible,
            r.classification.name()
        )?;
    }
    Ok(())
}
