//! Single-mode Riccati flow of `z` under a Mathieu drive: bounded inside a
//! stability band, escaping to the disk edge outside.

use squeezetrap::algebra::SqueezeParameter;
use squeezetrap::floquet::{monodromy, riccati_evolve, MathieuParams, RiccatiCoefficients, RiccatiForm};
use squeezetrap::Error;

fn main() -> squeezetrap::Result<()> {
    let z0 = SqueezeParameter::from_parts(0.1, 0.05)?;
    for (a, q) in [(0.3, 0.4), (0.1, 0.1), (1.0, 0.1), (-0.2, 0.1)] {
        let mp = MathieuParams::new(a, q);
        let f = monodromy(mp)?;
        let c = RiccatiCoefficients::from_mathieu(mp);
        let outcome = match riccati_evolve(z0, 0.0, &c, RiccatiForm::Bracket, 0.0, 50.0 * c.period(), 1e-10) {
            Ok(path) => format!("min 1 - |z| = {:.3e}", path.min_gap()),
            Err(Error::Divergence { t, .. }) => format!("reached the edge at t = {t:.2}"),
            Err(e) => return Err(e),
        };
        println!("a = {a:+.2} q = {q:.2}  trace {:+.4}  stable {:<5}  {outcome}", f.trace(), f.stable);
    }
    Ok(())
}
