//! Compare the closed-form moments `S_n` with brute-force Fock-space
//! expectation values of `Omega^n`.

use squeezetrap::algebra::{build_rep, BargmannIndex, Op, OperatorWord, SqueezeParameter};
use squeezetrap::coherent::{s_value, ModeLabels};

fn main() -> squeezetrap::Result<()> {
    let z = SqueezeParameter::from_parts(0.3, -0.2)?;
    for k in [BargmannIndex::axial_even(), BargmannIndex::axial_odd(), BargmannIndex::radial(2)] {
        let rep = build_rep(k, 128)?;
        println!("k = {}  casimir deviation {:.2e}", k.value(), rep.casimir_deviation());
        for m in 0..3u32 {
            let labels = ModeLabels::new(k, m);
            for n in 1..=3 {
                let brute = rep.oracle_expectation(z, m as usize, &OperatorWord::power(Op::Omega, n as usize))?;
                let exact = s_value(n, z, &labels)?;
                println!("  m = {m} n = {n}: {exact:>14.8}  |diff| = {:.2e}", (brute.re - exact).abs());
            }
        }
    }
    Ok(())
}
