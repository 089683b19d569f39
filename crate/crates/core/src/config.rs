//! JSON run configuration.
//!
//! Loading is two-staged: serde parses the document into plain records, then
//! [`RunConfig::from_document`] checks every invariant and reports all
//! violations at once, each prefixed with its field path.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::SqueezeParameter;
use crate::coherent::{disk_to_xieta, XiEtaState, CONSTRAINT_TOLERANCE};
use crate::dynamics::{HamiltonianParams, PhaseState};
use crate::equilibria::MultistartOptions;
use crate::error::{Error, Result};
use crate::floquet::StabilityGrid;
use crate::trap::{DriveParams, ModeFrequencies, Particle, TrapGeometry, TrapKind, HBAR_SI};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub trap: TrapGeometry,
    pub drive: DriveParams,
    pub particle: Particle,
    pub modes: ModesSection,
    #[serde(default)]
    pub frequencies: FrequencySection,
    #[serde(default)]
    pub initial_state: InitialStateSection,
    #[serde(default)]
    pub integration: IntegrationSection,
    #[serde(default)]
    pub scales: ScalesSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub equilibria: EquilibriaSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub stability: StabilitySection,
}

/// Quantum numbers; integers are read as numbers so that bad values are
/// reported by validation instead of failing the parse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesSection {
    pub k_a: f64,
    #[serde(default)]
    pub m_a: f64,
    #[serde(default)]
    pub l: f64,
    #[serde(default)]
    pub m_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencySection {
    pub omega_a: Option<f64>,
    pub omega_r: Option<f64>,
}

/// Either a squeeze parameter `[re, im]` or explicit `(xi, eta, sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ModeState {
    Disk { z: [f64; 2] },
    XiEta { xi: f64, eta: f64, sigma: f64 },
}

impl Default for ModeState {
    fn default() -> Self {
        ModeState::Disk { z: [0.0, 0.0] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateSection {
    #[serde(default)]
    pub axial: ModeState,
    #[serde(default)]
    pub radial: ModeState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationSection {
    #[serde(default)]
    pub t0: f64,
    /// Defaults to ten drive periods after `t0`.
    pub t1: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-10
}

impl Default for IntegrationSection {
    fn default() -> Self {
        Self {
            t0: 0.0,
            t1: None,
            tol: default_tol(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalesSection {
    /// Work in units with `hbar = 1`; all other inputs are taken as given.
    #[serde(default)]
    pub dimensionless: bool,
    #[serde(default = "yes")]
    pub physical_scales: bool,
}

fn yes() -> bool {
    true
}

impl Default for ScalesSection {
    fn default() -> Self {
        Self {
            dimensionless: false,
            physical_scales: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Output file; standard output when absent.
    pub path: Option<PathBuf>,
    /// Format of the root export (trajectories, spectra and maps are always CSV).
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumSystem {
    /// Linear system for the combined trap, pseudopotential system for the ideal Paul trap.
    #[default]
    Auto,
    Combined,
    Pseudopotential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriaSection {
    #[serde(default)]
    pub system: EquilibriumSystem,
    /// Evaluation time of the combined-trap system.
    #[serde(default)]
    pub t: f64,
    #[serde(default = "default_lo")]
    pub lo: f64,
    #[serde(default = "default_hi")]
    pub hi: f64,
    #[serde(default = "default_per_axis")]
    pub per_axis: usize,
}

fn default_lo() -> f64 {
    0.1
}

fn default_hi() -> f64 {
    10.0
}

fn default_per_axis() -> usize {
    4
}

impl Default for EquilibriaSection {
    fn default() -> Self {
        Self {
            system: EquilibriumSystem::Auto,
            t: 0.0,
            lo: default_lo(),
            hi: default_hi(),
            per_axis: default_per_axis(),
        }
    }
}

impl EquilibriaSection {
    pub fn multistart(&self) -> MultistartOptions {
        MultistartOptions {
            lo: self.lo,
            hi: self.hi,
            per_axis: self.per_axis,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub max_m: u32,
    pub max_l: u32,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self { max_m: 4, max_l: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySection {
    pub a_min: f64,
    pub a_max: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub n_a: usize,
    pub n_q: usize,
}

impl Default for StabilitySection {
    fn default() -> Self {
        Self {
            a_min: -0.5,
            a_max: 1.0,
            q_min: 0.0,
            q_max: 1.0,
            n_a: 50,
            n_q: 50,
        }
    }
}

impl StabilitySection {
    pub fn grid(&self) -> StabilityGrid {
        StabilityGrid {
            a_min: self.a_min,
            a_max: self.a_max,
            q_min: self.q_min,
            q_max: self.q_max,
            n_a: self.n_a,
            n_q: self.n_q,
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub document: ConfigDocument,
    pub params: HamiltonianParams,
    pub initial: PhaseState,
    pub t0: f64,
    pub t1: f64,
    pub tol: f64,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ConfigDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn from_document(doc: ConfigDocument) -> Result<Self> {
        let mut v = Violations::default();
        check_document(&doc, &mut v);
        if !v.0.is_empty() {
            return Err(Error::Config(v.0));
        }
        // every constructor below has been pre-checked
        let hbar = if doc.scales.dimensionless { 1.0 } else { HBAR_SI };
        let particle = Particle::new(doc.particle.charge, doc.particle.mass)?;
        let drive = DriveParams::new(doc.drive.u0, doc.drive.v0, doc.drive.omega)?;
        let frequencies = match (doc.frequencies.omega_a, doc.frequencies.omega_r) {
            (Some(a), Some(r)) => ModeFrequencies::new(&particle, &doc.trap, a, r, hbar)?,
            (a, r) => {
                let derived = ModeFrequencies::derive(&particle, &doc.trap, &drive, hbar)
                    .map_err(|e| Error::Config(vec![format!("frequencies: {e}")]))?;
                ModeFrequencies::new(
                    &particle,
                    &doc.trap,
                    a.unwrap_or(derived.omega_a),
                    r.unwrap_or(derived.omega_r),
                    hbar,
                )?
            }
        };
        let m = doc.modes;
        let params = HamiltonianParams::new(
            m.k_a,
            m.m_a as u32,
            m.l as u32,
            m.m_r as u32,
            frequencies,
            particle,
            doc.trap,
            drive,
        )?
        .with_physical_scales(doc.scales.physical_scales);
        let initial = PhaseState::new(
            mode_state(&doc.initial_state.axial)?,
            mode_state(&doc.initial_state.radial)?,
        );
        let t0 = doc.integration.t0;
        let t1 = doc.integration.t1.unwrap_or(t0 + 10.0 * drive.period());
        Ok(Self {
            params,
            initial,
            t0,
            t1,
            tol: doc.integration.tol,
            document: doc,
        })
    }

    pub fn output_path(&self) -> Option<&Path> {
        self.document.output.path.as_deref()
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    RunConfig::parse(&text)
}

fn mode_state(s: &ModeState) -> Result<XiEtaState> {
    match *s {
        ModeState::Disk { z } => Ok(disk_to_xieta(SqueezeParameter::from_parts(z[0], z[1])?)),
        ModeState::XiEta { xi, eta, sigma } => XiEtaState::new(xi, eta, sigma),
    }
}

#[derive(Default)]
struct Violations(Vec<String>);

impl Violations {
    fn push(&mut self, path: &str, msg: impl std::fmt::Display) {
        self.0.push(format!("{path}: {msg}"));
    }

    fn finite(&mut self, path: &str, x: f64) -> bool {
        if !x.is_finite() {
            self.push(path, format!("must be finite, got {x}"));
        }
        x.is_finite()
    }

    fn positive(&mut self, path: &str, x: f64) {
        if self.finite(path, x) && x <= 0.0 {
            self.push(path, format!("must be positive, got {x}"));
        }
    }

    fn count(&mut self, path: &str, x: f64) {
        if !(x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64) {
            self.push(path, format!("must be a non-negative integer, got {x}"));
        }
    }
}

fn check_document(doc: &ConfigDocument, v: &mut Violations) {
    let t = &doc.trap;
    for (name, x) in [("trap.c2", t.c2), ("trap.d", t.d), ("trap.c4", t.c4), ("trap.c6", t.c6), ("trap.b0", t.b0)] {
        v.finite(name, x);
    }
    if t.kind == TrapKind::IdealPaul && t.b0 != 0.0 {
        v.push("trap.b0", "an ideal Paul trap carries no magnetic field; use kind \"combined\"");
    }
    if t.kind == TrapKind::IdealPaul && t.d != 0.0 {
        v.push("trap.d", "the octupole coefficient belongs to the combined trap; use c4/c6 for an ideal Paul trap");
    }
    v.finite("drive.u0", doc.drive.u0);
    v.finite("drive.v0", doc.drive.v0);
    v.positive("drive.omega", doc.drive.omega);
    v.positive("particle.mass", doc.particle.mass);
    if v.finite("particle.charge", doc.particle.charge) && doc.particle.charge == 0.0 {
        v.push("particle.charge", "must be nonzero");
    }

    let m = &doc.modes;
    if m.k_a != 0.25 && m.k_a != 0.75 {
        v.push("modes.k_a", format!("must be one of {{0.25, 0.75}}, got {}", m.k_a));
    }
    v.count("modes.m_a", m.m_a);
    v.count("modes.l", m.l);
    v.count("modes.m_r", m.m_r);

    if let Some(w) = doc.frequencies.omega_a {
        v.positive("frequencies.omega_a", w);
    }
    if let Some(w) = doc.frequencies.omega_r {
        v.positive("frequencies.omega_r", w);
    }

    for (name, s) in [("initial_state.axial", &doc.initial_state.axial), ("initial_state.radial", &doc.initial_state.radial)] {
        match *s {
            ModeState::Disk { z } => {
                let r = z[0].hypot(z[1]);
                if !(r < 1.0) {
                    v.push(&format!("{name}.z"), format!("must lie in the open unit disk |z| < 1, got |z| = {r}"));
                }
            }
            ModeState::XiEta { xi, eta, sigma } => {
                if !(xi > 0.0 && eta > 0.0) {
                    v.push(name, format!("xi and eta must be positive, got ({xi}, {eta})"));
                }
                let res = (sigma * sigma - xi * eta + 1.0).abs();
                if !(res <= CONSTRAINT_TOLERANCE * (1.0 + xi * eta)) {
                    v.push(name, format!("violates sigma^2 = xi eta - 1 (residual {res:.3e})"));
                }
            }
        }
    }

    let it = &doc.integration;
    v.finite("integration.t0", it.t0);
    if let Some(t1) = it.t1 {
        if v.finite("integration.t1", t1) && t1 < it.t0 {
            v.push("integration.t1", format!("must not precede t0 = {}", it.t0));
        }
    }
    v.positive("integration.tol", it.tol);

    let e = &doc.equilibria;
    v.finite("equilibria.t", e.t);
    if !(e.lo.is_finite() && e.hi.is_finite() && e.lo < e.hi) {
        v.push("equilibria", format!("need finite lo < hi, got [{}, {}]", e.lo, e.hi));
    }
    if e.per_axis == 0 {
        v.push("equilibria.per_axis", "must be at least 1");
    }

    let s = &doc.stability;
    for (name, x) in [("stability.a_min", s.a_min), ("stability.a_max", s.a_max), ("stability.q_min", s.q_min), ("stability.q_max", s.q_max)] {
        v.finite(name, x);
    }
    if s.a_min > s.a_max {
        v.push("stability.a_max", "must not be below a_min");
    }
    if s.q_min > s.q_max {
        v.push("stability.q_max", "must not be below q_min");
    }
    if s.n_a == 0 || s.n_q == 0 {
        v.push("stability", "grid needs at least one point per axis");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "trap": {"c2": -1.0, "b0": 2.0, "kind": "combined"},
        "drive": {"u0": -0.1, "v0": 0.0, "omega": 1.0},
        "particle": {"charge": 1.0, "mass": 1.0},
        "modes": {"k_a": 0.25},
        "scales": {"dimensionless": true}
    }"#;

    fn violations(text: &str) -> Vec<String> {
        match RunConfig::parse(text) {
            Err(Error::Config(v)) => v,
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        let g = c.params.geometry;
        assert_eq!((g.d, g.c4, g.c6), (0.0, 0.0, 0.0));
        assert_eq!(c.params.frequencies.hbar, 1.0);
        assert_eq!(c.initial, PhaseState::origin());
        assert_eq!(c.t1, 10.0 * std::f64::consts::TAU);
        assert_eq!(c.tol, 1e-10);
        assert!(c.params.physical_scales);
    }

    #[test]
    fn rejects_axial_index_with_path() {
        let text = MINIMAL.replace("\"k_a\": 0.25", "\"k_a\": 0.5");
        let v = violations(&text);
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("modes.k_a:") && v[0].contains("{0.25, 0.75}"));
    }

    #[test]
    fn reports_every_violation() {
        let text = MINIMAL
            .replace("\"k_a\": 0.25", "\"k_a\": 0.5, \"l\": -1")
            .replace("\"mass\": 1.0", "\"mass\": 0.0")
            .replace(
                "\"scales\"",
                "\"initial_state\": {\"radial\": {\"z\": [0.8, 0.6]}}, \"scales\"",
            );
        let v = violations(&text);
        let joined = v.join("\n");
        for path in ["modes.k_a", "modes.l", "particle.mass", "initial_state.radial.z"] {
            assert!(joined.contains(path), "{path} missing from {joined}");
        }
        assert!(joined.contains("unit disk"));
    }

    #[test]
    fn accepts_xi_eta_initial_state() {
        let text = MINIMAL.replace(
            "\"scales\"",
            "\"initial_state\": {\"axial\": {\"xi\": 2.0, \"eta\": 1.0, \"sigma\": 1.0}}, \"scales\"",
        );
        let c = RunConfig::parse(&text).unwrap();
        assert_eq!(c.initial.axial.xi(), 2.0);
        let bad = text.replace("\"sigma\": 1.0", "\"sigma\": 0.5");
        assert!(violations(&bad)[0].contains("sigma^2"));
    }

    #[test]
    fn unknown_field_is_a_parse_error() {
        let text = MINIMAL.replace("\"modes\"", "\"mode\": {}, \"modes\"");
        assert!(matches!(RunConfig::parse(&text), Err(Error::Parse(_))));
    }
}
