//! Integrate the classical squeezed-state equations of motion in a combined
//! trap and write the trajectory as CSV to standard output.

use std::io;

use squeezetrap::algebra::SqueezeParameter;
use squeezetrap::dynamics::{integrate, HamiltonianParams, PhaseState};
use squeezetrap::trap::{DriveParams, ModeFrequencies, Particle, TrapGeometry, TrapKind};

fn main() -> squeezetrap::Result<()> {
    let particle = Particle::new(1.0, 1.0)?;
    let mut trap = TrapGeometry::quadrupole(-1.0, 2.0, TrapKind::Combined);
    trap.d = -0.01;
    let drive = DriveParams::new(-0.1, 0.05, 1.0)?;
    let freq = ModeFrequencies::derive(&particle, &trap, &drive, 1.0)?;
    let p = HamiltonianParams::new(0.25, 0, 1, 0, freq, particle, trap, drive)?;

    let start = PhaseState::from_disk(
        SqueezeParameter::from_parts(0.3, 0.0)?,
        SqueezeParameter::from_parts(0.0, 0.2)?,
    );
    let traj = integrate(&start, 0.0, 5.0 * drive.period(), &p, 1e-10)?;
    traj.write_csv(io::stdout().lock())?;
    eprintln!(
        "{} samples, max constraint residual {:.2e}",
        traj.samples.len(),
        traj.max_residual()
    );
    Ok(())
}
