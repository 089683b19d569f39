//! The same motion integrated directly in the disk coordinate `z`, compared
//! against the `(xi, eta, sigma)` integration.

use squeezetrap::algebra::SqueezeParameter;
use squeezetrap::coherent::disk_to_xieta;
use squeezetrap::dynamics::{integrate, integrate_disk, DiskState, HamiltonianParams, PhaseState};
use squeezetrap::trap::{DriveParams, Mode, ModeFrequencies, Particle, TrapGeometry, TrapKind};

fn main() -> squeezetrap::Result<()> {
    let particle = Particle::new(1.0, 1.0)?;
    let trap = TrapGeometry::quadrupole(-1.0, 2.0, TrapKind::Combined);
    let drive = DriveParams::new(-0.1, 0.0, 1.0)?;
    let freq = ModeFrequencies::new(&particle, &trap, 0.5, 0.8, 1.0)?;
    let p = HamiltonianParams::new(0.75, 1, 0, 2, freq, particle, trap, drive)?;

    let (za, zr) = (SqueezeParameter::from_parts(0.1, 0.2)?, SqueezeParameter::from_parts(-0.3, 0.0)?);
    let t1 = 20.0;
    let disk = integrate_disk(&DiskState::new(za, zr), 0.0, t1, &p, 1e-12)?;
    let flow = integrate(&PhaseState::from_disk(za, zr), 0.0, t1, &p, 1e-12)?;

    let end = disk.samples.last().unwrap().1;
    let last = flow.last().unwrap().state;
    for mode in [Mode::Axial, Mode::Radial] {
        let z = SqueezeParameter::new(end.mode(mode))?;
        let s = disk_to_xieta(z);
        let f = last.mode(mode);
        println!(
            "{:>6}: z = {:.6}  xi {:.10} vs {:.10}  eta {:.10} vs {:.10}",
            mode.name(),
            z.value(),
            s.xi(),
            f.xi(),
            s.eta(),
            f.eta()
        );
    }
    Ok(())
}
