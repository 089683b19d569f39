//! Dense complex matrix helpers used by the truncated-Fock oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Maximum absolute column sum.
pub fn norm1(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Copy of the leading `n x n` block.
pub fn leading_block(a: &CMatrix, n: usize) -> CMatrix {
    a.view((0, 0), (n, n)).into_owned()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

// Padé coefficients b_0..b_13 and the theta_m thresholds for m = 3, 5, 7, 9, 13
// (Higham, "The scaling and squaring method for the matrix exponential revisited").
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA13: f64 = 5.371920351148152;

fn scaled(a: &CMatrix, c: f64) -> CMatrix {
    a.map(|x| x * c)
}

fn pade_low(a: &CMatrix, coeffs: &[f64]) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;
    let mut pow = ident.clone();
    let mut u = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    // even powers A^(2j) carry b_(2j) (V) and b_(2j+1) (U before the final A)
    for j in 0..coeffs.len() / 2 {
        v += scaled(&pow, coeffs[2 * j]);
        u += scaled(&pow, coeffs[2 * j + 1]);
        pow = &pow * &a2;
    }
    (a * u, v)
}

fn pade13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let b = &PADE13;
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let u = a * (&a6 * inner_u
        + scaled(&a6, b[7])
        + scaled(&a4, b[5])
        + scaled(&a2, b[3])
        + scaled(&ident, b[1]));
    let inner_v = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v = &a6 * inner_v
        + scaled(&a6, b[6])
        + scaled(&a4, b[4])
        + scaled(&a2, b[2])
        + scaled(&ident, b[0]);
    (u, v)
}

/// Matrix exponential by scaling and squaring with a diagonal Padé approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let norm = norm1(a);
    let (coeffs, squarings): (Option<&[f64]>, u32) = match THETA.iter().find(|(_, t)| norm <= *t) {
        Some((3, _)) => (Some(&PADE3), 0),
        Some((5, _)) => (Some(&PADE5), 0),
        Some((7, _)) => (Some(&PADE7), 0),
        Some(_) => (Some(&PADE9), 0),
        None => {
            let s = (norm / THETA13).log2().ceil().max(0.0) as u32;
            (None, s)
        }
    };
    let a_scaled = if squarings > 0 {
        scaled(a, 0.5f64.powi(squarings as i32))
    } else {
        a.clone()
    };
    let (u, v) = match coeffs {
        Some(c) => pade_low(&a_scaled, c),
        None => pade13(&a_scaled),
    };
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for theta-bounded norms");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}
