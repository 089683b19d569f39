//! Stationary squeezing of the combined trap (linear system) and of the ideal
//! Paul trap pseudopotential (multistart Newton).

use squeezetrap::dynamics::HamiltonianParams;
use squeezetrap::equilibria::{
    combined_system, pseudopotential_system, records, solve_linear, solve_multistart, MultistartOptions,
};
use squeezetrap::trap::{DriveParams, ModeFrequencies, Particle, TrapGeometry, TrapKind};

fn main() -> squeezetrap::Result<()> {
    let particle = Particle::new(1.0, 1.0)?;

    let mut trap = TrapGeometry::quadrupole(-1.0, 2.0, TrapKind::Combined);
    trap.d = 0.01;
    let drive = DriveParams::new(-0.1, 0.0, 1.0)?;
    let freq = ModeFrequencies::derive(&particle, &trap, &drive, 1.0)?;
    let p = HamiltonianParams::new(0.25, 1, 1, 2, freq, particle, trap, drive)?;
    let sys = combined_system(0.0, &p);
    for r in records(&sys, &solve_linear(&sys)) {
        println!("combined: xi_a = {:.8} xi_r = {:.8} ({})", r.xi_a, r.xi_r, r.classification.name());
    }

    let mut trap = TrapGeometry::quadrupole(-1.0, 0.0, TrapKind::IdealPaul);
    trap.c4 = -0.01;
    trap.c6 = 1e-4;
    let drive = DriveParams::new(-0.05, 0.2, 1.0)?;
    let freq = ModeFrequencies::new(&particle, &trap, 0.4, 0.3, 1.0)?;
    let p = HamiltonianParams::new(0.75, 1, 1, 2, freq, particle, trap, drive)?.with_physical_scales(false);
    let sys = pseudopotential_system(&p);
    let opts = MultistartOptions { lo: -20.0, hi: 20.0, per_axis: 6, ..Default::default() };
    let found = solve_multistart(&sys, &opts);
    println!("pseudopotential: {} of {} starts converged", found.converged, found.starts);
    for r in records(&sys, &found.points) {
        println!(
            "  xi_a = {:.8} xi_r = {:.8} residual {:.1e} admissible {} ({})",
            r.xi_a,
            r.xi_r,
            r.residual,
            r.admissible,
            r.classification.name()
        );
    }
    Ok(())
}
