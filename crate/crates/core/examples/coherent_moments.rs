//! Coordinates `(xi, eta, sigma)` of a squeezed state and the generator
//! expectation values it carries.

use squeezetrap::algebra::{BargmannIndex, SqueezeParameter};
use squeezetrap::coherent::{disk_to_xieta, generator_expectations, husimi_q, xieta_to_disk, ModeLabels, SignBranch};

fn main() -> squeezetrap::Result<()> {
    let labels = ModeLabels::new(BargmannIndex::radial(1), 2);
    for r in [0.0, 0.2, 0.5, 0.8] {
        let z = SqueezeParameter::from_parts(r, 0.1)?;
        let s = disk_to_xieta(z);
        let g = generator_expectations(z, &labels);
        let back = xieta_to_disk(&s, SignBranch::of(s.sigma()))?;
        println!(
            "z = {:.2}  xi = {:.6}  eta = {:.6}  sigma = {:+.6}  <K0> = {:.6}  round trip {:.1e}",
            z.value(),
            s.xi(),
            s.eta(),
            s.sigma(),
            g.k0,
            (back.value() - z.value()).norm()
        );
    }
    for n in 1..=3 {
        println!("Q{n} = {}", husimi_q(n, &labels)?);
    }
    Ok(())
}
