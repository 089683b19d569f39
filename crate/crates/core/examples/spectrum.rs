//! Quasienergy levels of an RF-driven combined trap.

use squeezetrap::dynamics::HamiltonianParams;
use squeezetrap::floquet::{floquet_frequencies, spectrum};
use squeezetrap::trap::{DriveParams, ModeFrequencies, Particle, TrapGeometry, TrapKind};

fn main() -> squeezetrap::Result<()> {
    let particle = Particle::new(1.0, 1.0)?;
    let trap = TrapGeometry::quadrupole(-1.0, 2.0, TrapKind::Combined);
    let drive = DriveParams::new(-0.02, 0.02, 1.0)?;
    let freq = ModeFrequencies::derive(&particle, &trap, &drive, 1.0)?;
    let p = HamiltonianParams::new(0.25, 0, 0, 0, freq, particle, trap, drive)?;

    let (mu_a, mu_r) = floquet_frequencies(&p)?;
    println!("mu_a = {mu_a:.10}  mu_r = {mu_r:.10}");
    let mut lines = spectrum(&p, 3, 2)?;
    lines.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    for s in lines {
        println!("m_a = {} m_r = {} l = {}  E = {:.10}", s.m_a, s.m_r, s.l, s.energy);
    }
    Ok(())
}
