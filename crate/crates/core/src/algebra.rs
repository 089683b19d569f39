//! Truncated-Fock realization of the positive discrete series of SU(1,1).
//!
//! Everything here is computed by brute-force matrix arithmetic and serves as
//! the reference against which the closed-form coherent-state expressions in
//! [`crate::coherent`] are checked.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub const DEFAULT_TRUNCATION: usize = 128;
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;

/// Bargmann index `k` of a positive discrete-series representation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BargmannIndex(f64);

impl BargmannIndex {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && k > 0.0 {
            Ok(Self(k))
        } else {
            Err(Error::InvalidArgument(format!(
                "Bargmann index must be positive, got {k}"
            )))
        }
    }

    /// Axial index 1/4 (even axial states).
    pub fn axial_even() -> Self {
        Self(0.25)
    }

    /// Axial index 3/4 (odd axial states).
    pub fn axial_odd() -> Self {
        Self(0.75)
    }

    /// Radial index `(l + 1) / 2` for orbital quantum number `l`.
    pub fn radial(l: u32) -> Self {
        Self((l as f64 + 1.0) / 2.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Casimir eigenvalue `k(k - 1)`.
    pub fn casimir_eigenvalue(self) -> f64 {
        self.0 * (self.0 - 1.0)
    }
}

/// Point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParameter(Complex64);

impl SqueezeParameter {
    pub fn new(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if r < 1.0 && r.is_finite() {
            Ok(Self(z))
        } else {
            Err(Error::Domain(r))
        }
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn zero() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    /// `ln(1 - |z|^2)`, the exponent of the diagonal factor of `U(z)`.
    pub fn lambda(self) -> f64 {
        (-self.0.norm_sqr()).ln_1p()
    }
}

/// Single factor of an operator word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Identity,
    K0,
    KPlus,
    KMinus,
    /// `(K+ + K-) / 2`
    K1,
    /// `(K+ - K-) / 2i`
    K2,
    /// `2K0 + K+ + K-`, whose squeezed expectation is `xi * 2(k+m)`.
    Omega,
    /// `K0 - K1`, the kinetic part.
    Kinetic,
    /// `2K0 + e^{-i phi} K- + e^{i phi} K+`.
    E { phi: f64 },
}

/// Product of generators, applied right to left.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorWord(Vec<Op>);

impl OperatorWord {
    pub fn new(ops: Vec<Op>) -> Self {
        Self(ops)
    }

    pub fn single(op: Op) -> Self {
        Self(vec![op])
    }

    pub fn power(op: Op, n: usize) -> Self {
        Self(vec![op; n])
    }

    pub fn ops(&self) -> &[Op] {
        &self.0
    }
}

impl From<Op> for OperatorWord {
    fn from(op: Op) -> Self {
        Self::single(op)
    }
}

/// Generators `K0`, `K+`, `K-` on the first `dim` weight states `|k, m>`.
#[derive(Debug, Clone)]
pub struct Su11Rep {
    k: BargmannIndex,
    dim: usize,
    k0: CMatrix,
    kplus: CMatrix,
    kminus: CMatrix,
}

/// Interior-block residuals of the defining commutation relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResiduals {
    pub k0_kplus: f64,
    pub k0_kminus: f64,
    pub kminus_kplus: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.k0_kplus.max(self.k0_kminus).max(self.kminus_kplus)
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Builds the truncated representation.
///
/// `K0|m> = (k+m)|m>`, `K+|m> = sqrt((m+1)(2k+m))|m+1>`,
/// `K-|m> = sqrt(m(2k+m-1))|m-1>`.
pub fn build_rep(k: BargmannIndex, dim: usize) -> Result<Su11Rep> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "truncation dimension must be at least 2, got {dim}"
        )));
    }
    let kv = k.value();
    let k0 = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            re(kv + i as f64)
        } else {
            re(0.0)
        }
    });
    let kplus = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j + 1 {
            let m = j as f64;
            re(((m + 1.0) * (2.0 * kv + m)).sqrt())
        } else {
            re(0.0)
        }
    });
    let kminus = kplus.adjoint();
    Ok(Su11Rep {
        k,
        dim,
        k0,
        kplus,
        kminus,
    })
}

impl Su11Rep {
    pub fn k(&self) -> BargmannIndex {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k0(&self) -> &CMatrix {
        &self.k0
    }

    pub fn kplus(&self) -> &CMatrix {
        &self.kplus
    }

    pub fn kminus(&self) -> &CMatrix {
        &self.kminus
    }

    pub fn k1(&self) -> CMatrix {
        (&self.kplus + &self.kminus).map(|x| x * 0.5)
    }

    pub fn k2(&self) -> CMatrix {
        (&self.kplus - &self.kminus).map(|x| x / Complex64::new(0.0, 2.0))
    }

    /// Dense matrix of a single operator factor.
    pub fn matrix(&self, op: Op) -> CMatrix {
        let n = self.dim;
        match op {
            Op::Identity => CMatrix::identity(n, n),
            Op::K0 => self.k0.clone(),
            Op::KPlus => self.kplus.clone(),
            Op::KMinus => self.kminus.clone(),
            Op::K1 => self.k1(),
            Op::K2 => self.k2(),
            Op::Omega => self.k0.map(|x| x * 2.0) + &self.kplus + &self.kminus,
            Op::Kinetic => &self.k0 - self.k1(),
            Op::E { phi } => {
                let ph = Complex64::from_polar(1.0, phi);
                self.k0.map(|x| x * 2.0) + self.kminus.map(|x| x * ph.conj())
                    + self.kplus.map(|x| x * ph)
            }
        }
    }

    /// `K0^2 - (K+K- + K-K+)/2`.
    pub fn casimir(&self) -> CMatrix {
        let k0sq = &self.k0 * &self.k0;
        let anti = &self.kplus * &self.kminus + &self.kminus * &self.kplus;
        k0sq - anti.map(|x| x * 0.5)
    }

    /// Largest deviation of the Casimir from `k(k-1) I` on the interior block.
    pub fn casimir_deviation(&self) -> f64 {
        let inner = self.dim - 1;
        let c = linalg::leading_block(&self.casimir(), inner);
        let target = CMatrix::identity(inner, inner).map(|x| x * self.k.casimir_eigenvalue());
        linalg::max_abs(&(c - target))
    }

    /// Residuals of `[K0, K±] = ±K±` and `[K-, K+] = 2K0`, excluding the top state.
    pub fn commutator_residuals(&self) -> CommutatorResiduals {
        let inner = self.dim - 1;
        let block = |m: CMatrix| linalg::max_abs(&linalg::leading_block(&m, inner));
        CommutatorResiduals {
            k0_kplus: block(linalg::commutator(&self.k0, &self.kplus) - &self.kplus),
            k0_kminus: block(linalg::commutator(&self.k0, &self.kminus) + &self.kminus),
            kminus_kplus: block(
                linalg::commutator(&self.kminus, &self.kplus) - self.k0.map(|x| x * 2.0),
            ),
        }
    }

    /// `U(z) = exp(z K+) exp(lambda K0) exp(-z* K-)` as a dense matrix.
    pub fn squeeze_operator(&self, z: SqueezeParameter) -> CMatrix {
        let zv = z.value();
        let lam = z.lambda();
        let up = linalg::expm(&self.kplus.map(|x| x * zv));
        let diag = linalg::expm(&self.k0.map(|x| x * lam));
        let down = linalg::expm(&self.kminus.map(|x| -x * zv.conj()));
        up * diag * down
    }

    fn basis(&self, m: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim);
        v[m] = re(1.0);
        v
    }

    fn check_label(&self, m: usize) -> Result<()> {
        if m < self.dim {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "Fock label {m} outside truncation {}",
                self.dim
            )))
        }
    }

    /// `U(z)|k, m>` via the terminating series of the nilpotent truncated `K±`.
    ///
    /// Fails with [`Error::Truncation`] when the state carries more than
    /// `tail_tolerance` of its weight in the top quarter of the basis.
    pub fn squeezed_state(
        &self,
        z: SqueezeParameter,
        m: usize,
        tail_tolerance: f64,
    ) -> Result<DVector<Complex64>> {
        self.check_label(m)?;
        let zv = z.value();
        let lam = z.lambda();

        let mut acc = self.basis(m);
        let mut term = acc.clone();
        for n in 1..=m {
            term = (&self.kminus * term).map(|x| x * (-zv.conj() / n as f64));
            acc += &term;
        }
        let kv = self.k.value();
        for (j, x) in acc.iter_mut().enumerate() {
            *x *= (lam * (kv + j as f64)).exp();
        }

        let mut state = acc.clone();
        let mut term = acc;
        for n in 1..self.dim {
            term = (&self.kplus * term).map(|x| x * (zv / n as f64));
            let tn = term.norm();
            state += &term;
            if tn == 0.0 || tn < 1e-20 * state.norm() {
                break;
            }
        }

        let tail = self.tail_mass(&state);
        if tail > tail_tolerance {
            return Err(Error::Truncation {
                tail,
                tolerance: tail_tolerance,
                dim: self.dim,
            });
        }
        Ok(state)
    }

    /// Weight in the top quarter of the basis, or the norm defect if larger.
    pub fn tail_mass(&self, state: &DVector<Complex64>) -> f64 {
        let start = self.dim - (self.dim / 4).max(1);
        let top: f64 = state.iter().skip(start).map(|x| x.norm_sqr()).sum();
        let defect = (1.0 - state.norm_squared()).abs();
        top.max(defect)
    }

    /// Applies the word to a vector, rightmost factor first.
    pub fn apply(&self, word: &OperatorWord, v: &DVector<Complex64>) -> DVector<Complex64> {
        word.ops()
            .iter()
            .rev()
            .fold(v.clone(), |acc, op| self.matrix(*op) * acc)
    }

    /// `<z,k,m| X |z,k,m>` by brute-force matrix products.
    pub fn oracle_expectation(
        &self,
        z: SqueezeParameter,
        m: usize,
        word: &OperatorWord,
    ) -> Result<Complex64> {
        let psi = self.squeezed_state(z, m, DEFAULT_TAIL_TOLERANCE)?;
        let x_psi = self.apply(word, &psi);
        Ok(psi.dotc(&x_psi))
    }

    /// Same matrix element, but built from the dense Padé `U(z)` as
    /// `<k,m| U^dagger X U |k,m>`.
    pub fn oracle_expectation_dense(
        &self,
        z: SqueezeParameter,
        m: usize,
        word: &OperatorWord,
    ) -> Result<Complex64> {
        self.check_label(m)?;
        let u = self.squeeze_operator(z);
        let psi = u.column(m).into_owned();
        let tail = self.tail_mass(&psi);
        if tail > DEFAULT_TAIL_TOLERANCE {
            return Err(Error::Truncation {
                tail,
                tolerance: DEFAULT_TAIL_TOLERANCE,
                dim: self.dim,
            });
        }
        Ok(psi.dotc(&self.apply(word, &psi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(k: f64, n: usize) -> Su11Rep {
        build_rep(BargmannIndex::new(k).unwrap(), n).unwrap()
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(BargmannIndex::new(0.0).is_err());
        assert!(BargmannIndex::new(-0.5).is_err());
        assert!(build_rep(BargmannIndex::axial_even(), 1).is_err());
        assert!(matches!(
            SqueezeParameter::from_parts(0.6, 0.8),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn k0_diagonal() {
        let r = rep(0.25, 4);
        let d: Vec<f64> = (0..4).map(|i| r.k0()[(i, i)].re).collect();
        assert_eq!(d, vec![0.25, 1.25, 2.25, 3.25]);
    }

    #[test]
    fn raising_element_k1() {
        let r = rep(1.0, 2);
        assert!((r.kplus()[(1, 0)].re - 2f64.sqrt()).abs() < 1e-15);
        assert!(r.commutator_residuals().max() < 1e-12);
    }

    #[test]
    fn commutators_vanish_on_interior() {
        for k in [0.25, 0.75, 0.5, 1.0, 1.5] {
            for n in [32, 128] {
                let res = rep(k, n).commutator_residuals();
                assert!(res.max() < 1e-10, "k={k} n={n} {res:?}");
            }
        }
    }

    #[test]
    fn casimir_values() {
        for (k, want) in [(0.25, -3.0 / 16.0), (1.0, 0.0), (1.5, 0.75)] {
            let r = rep(k, 16);
            let c = r.casimir();
            assert!((c[(3, 3)].re - want).abs() < 1e-12);
            assert!(r.casimir_deviation() < 1e-10);
        }
    }

    #[test]
    fn squeeze_at_origin_is_identity() {
        let r = rep(0.25, 8);
        let u = r.squeeze_operator(SqueezeParameter::zero());
        assert!(linalg::max_abs(&(u - CMatrix::identity(8, 8))) < 1e-15);
    }

    #[test]
    fn lambda_value() {
        let z = SqueezeParameter::from_parts(0.5, 0.0).unwrap();
        assert!((z.lambda() - 0.75f64.ln()).abs() < 1e-15);
        assert!((z.lambda() + 0.2876821).abs() < 1e-7);
    }

    #[test]
    fn squeeze_is_isometric_on_low_block() {
        let r = rep(0.75, 128);
        let u = r.squeeze_operator(SqueezeParameter::from_parts(0.3, 0.2).unwrap());
        let g = u.adjoint() * &u;
        let low = linalg::leading_block(&(g - CMatrix::identity(128, 128)), 17);
        assert!(linalg::max_abs(&low) < 1e-8);
    }

    #[test]
    fn series_and_pade_routes_agree() {
        let r = rep(0.75, 64);
        let z = SqueezeParameter::from_parts(-0.2, 0.35).unwrap();
        let u = r.squeeze_operator(z);
        for m in 0..4 {
            let psi = r.squeezed_state(z, m, 1e-10).unwrap();
            let diff = (&psi - u.column(m)).norm();
            assert!(diff < 1e-11, "m={m} diff={diff}");
        }
    }

    #[test]
    fn oracle_simple_values() {
        let r = rep(0.25, 128);
        let k0 = OperatorWord::single(Op::K0);
        let v = r.oracle_expectation(SqueezeParameter::zero(), 0, &k0).unwrap();
        assert!((v.re - 0.25).abs() < 1e-15);

        let z = SqueezeParameter::from_parts(0.5, 0.0).unwrap();
        let om = r.oracle_expectation(z, 0, &Op::Omega.into()).unwrap();
        assert!((om.re - 1.5).abs() < 1e-12);
        let k0z = r.oracle_expectation(z, 0, &k0).unwrap();
        assert!((k0z.re - 0.25 * 1.25 / 0.75).abs() < 1e-12);
    }

    #[test]
    fn vacuum_e_moments() {
        // <k,m|E^n|k,m> reproduces the Q_n polynomials for any phase
        for k in [0.25, 0.75, 1.5] {
            let r = rep(k, 64);
            for m in 0..4usize {
                let mf = m as f64;
                let q2 = 2.0 * k * (2.0 * k + 1.0) + 12.0 * k * mf + 6.0 * mf * mf;
                // third moment from the K± matrix elements summed by hand
                let c = k + mf;
                let up = (mf + 1.0) * (2.0 * k + mf);
                let down = mf * (2.0 * k + mf - 1.0);
                let q3 = 8.0 * c.powi(3)
                    + 2.0 * up * (3.0 * c + 1.0)
                    + 2.0 * down * (3.0 * c - 1.0);
                for phi in [0.0, 0.7] {
                    let e = Op::E { phi };
                    let z0 = SqueezeParameter::zero();
                    let e2 = r.oracle_expectation(z0, m, &OperatorWord::power(e, 2)).unwrap();
                    let e3 = r.oracle_expectation(z0, m, &OperatorWord::power(e, 3)).unwrap();
                    assert!((e2.re - q2).abs() < 1e-11 && e2.im.abs() < 1e-12);
                    assert!((e3.re - q3).abs() < 1e-10 && e3.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn truncation_error_when_state_leaks() {
        let r = rep(0.25, 8);
        let z = SqueezeParameter::from_parts(0.9, 0.0).unwrap();
        assert!(matches!(
            r.oracle_expectation(z, 0, &Op::K0.into()),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn doubling_truncation_is_stable() {
        let z = SqueezeParameter::from_parts(0.35, -0.3).unwrap();
        let word = OperatorWord::power(Op::Omega, 3);
        let a = rep(0.75, 64).oracle_expectation(z, 2, &word).unwrap();
        let b = rep(0.75, 128).oracle_expectation(z, 2, &word).unwrap();
        assert!((a - b).norm() < 1e-9);
    }
}
