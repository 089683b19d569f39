use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use squeezetrap::algebra::{build_rep, BargmannIndex, Op, SqueezeParameter};
use squeezetrap::coherent::{generator_expectations, ModeLabels};
use squeezetrap::dynamics::{integrate_disk, DiskState};
use squeezetrap::floquet::{monodromy, riccati_evolve, MathieuParams, RiccatiCoefficients, RiccatiForm};
use squeezetrap::linalg::expm;
use squeezetrap::trap::{Mode, TrapKind};
use squeezetrap::verify::{random_disk_point, random_params};
use squeezetrap::Error;

#[test]
fn riccati_matches_disk_equations_for_harmonic_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..6 {
        let kind = if i % 2 == 0 { TrapKind::Combined } else { TrapKind::IdealPaul };
        let mut p = random_params(&mut rng, kind, true);
        p.geometry.d = 0.0;
        p.geometry.c4 = 0.0;
        p.geometry.c6 = 0.0;
        let (za, zr) = (random_disk_point(&mut rng, 0.4), random_disk_point(&mut rng, 0.4));
        let t1 = 3.0 * p.drive.period();
        let disk = integrate_disk(&DiskState::new(za, zr), 0.0, t1, &p, 1e-12).unwrap();
        let end = disk.samples.last().unwrap().1;
        for (mode, z0) in [(Mode::Axial, za), (Mode::Radial, zr)] {
            let c = RiccatiCoefficients::for_mode(&p, mode);
            let path = riccati_evolve(z0, 0.0, &c, RiccatiForm::Bracket, 0.0, t1, 1e-12).unwrap();
            let z = path.last().unwrap().1;
            assert!((z - end.mode(mode)).norm() < 1e-9, "{mode:?}: {z} vs {}", end.mode(mode));
        }
    }
}

#[test]
fn no_linear_term_form_differs_from_bracket() {
    let c = RiccatiCoefficients::constant(0.9, 0.3, 1.0);
    let z0 = SqueezeParameter::from_parts(0.2, 0.1).unwrap();
    let a = riccati_evolve(z0, 0.0, &c, RiccatiForm::Bracket, 0.0, 1.0, 1e-12).unwrap();
    let b = riccati_evolve(z0, 0.0, &c, RiccatiForm::NoLinearTerm, 0.0, 1.0, 1e-12).unwrap();
    assert!((a.last().unwrap().1 - b.last().unwrap().1).norm() > 1e-2);
}

#[test]
fn riccati_boundedness_matches_monodromy() {
    let z0 = SqueezeParameter::from_parts(0.1, 0.05).unwrap();
    let mut compared = 0;
    for i in 0..20 {
        for j in 0..20 {
            let mp = MathieuParams::new(-0.5 + 3.5 * i as f64 / 19.0, 2.0 * j as f64 / 19.0);
            let f = monodromy(mp).unwrap();
            if (f.trace().abs() - 2.0).abs() < 0.05 {
                continue;
            }
            let c = RiccatiCoefficients::from_mathieu(mp);
            let escaped = match riccati_evolve(z0, 0.0, &c, RiccatiForm::Bracket, 0.0, 50.0 * c.period(), 1e-10) {
                Ok(path) => path.min_gap() < 1e-6,
                Err(Error::Divergence { .. }) => true,
                Err(e) => panic!("{e}"),
            };
            assert_eq!(escaped, !f.stable, "a = {}, q = {}", mp.a, mp.q);
            compared += 1;
        }
    }
    assert!(compared > 300);
}

#[test]
fn stable_drive_keeps_z_off_the_boundary() {
    let mp = MathieuParams::new(0.3, 0.4);
    assert!(monodromy(mp).unwrap().stable);
    let c = RiccatiCoefficients::from_mathieu(mp);
    let z0 = SqueezeParameter::from_parts(0.2, 0.0).unwrap();
    let path = riccati_evolve(z0, 0.0, &c, RiccatiForm::Bracket, 0.0, 50.0 * c.period(), 1e-10).unwrap();
    assert!(path.min_gap() > 0.1, "{}", path.min_gap());
}

#[test]
fn riccati_flow_is_the_schroedinger_flow() {
    // H = A (K0 - K1) + B (K0 + K1) acting on a squeezed state stays squeezed
    let (a, b) = (0.8, 0.5);
    let rep = build_rep(BargmannIndex::axial_even(), 128).unwrap();
    let h = rep.matrix(Op::Kinetic) * Complex64::from(a) + (rep.matrix(Op::K0) + rep.matrix(Op::K1)) * Complex64::from(b);
    let z0 = SqueezeParameter::from_parts(0.15, -0.1).unwrap();
    let psi0 = rep.squeezed_state(z0, 0, 1e-12).unwrap();
    let c = RiccatiCoefficients::constant(a, b, 1.0);
    let path = riccati_evolve(z0, 0.0, &c, RiccatiForm::Bracket, 0.0, 3.0, 1e-12).unwrap();
    for &(t, z, _) in path.samples.iter().step_by(5) {
        let u = expm(&(h.clone() * Complex64::new(0.0, -t)));
        let psi = &u * &psi0;
        let km = psi.dotc(&(rep.matrix(Op::KMinus) * &psi));
        let k0 = psi.dotc(&(rep.matrix(Op::K0) * &psi)).re;
        let want = generator_expectations(SqueezeParameter::new(z).unwrap(), &ModeLabels::new(rep.k(), 0));
        assert!((km - want.kminus).norm() < 1e-8, "t = {t}");
        assert!((k0 - want.k0).abs() < 1e-8, "t = {t}");
    }
}
