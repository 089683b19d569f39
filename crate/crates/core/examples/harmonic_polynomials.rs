//! Axially symmetric harmonic polynomials `H_2k(rho, z)` and their Laplacian.

use squeezetrap::trap::{harmonic_coefficients, harmonic_polynomial, laplacian_residual, square_grid};

fn main() -> squeezetrap::Result<()> {
    let grid = square_grid(0.1, 1.0, 9);
    for k in 1..=4 {
        let c = harmonic_coefficients(k)?;
        println!(
            "H{}: coefficients {:?}  H(0.5, 0.3) = {:.6}  max |laplacian| = {:.1e}",
            2 * k,
            c,
            harmonic_polynomial(k, 0.5, 0.3)?,
            laplacian_residual(k, &grid)?
        );
    }
    Ok(())
}
