use num_complex::Complex64;
use proptest::prelude::*;

use pseudospec_core::analytic::{self, Picture, WavefunctionSampler};
use pseudospec_core::operators::{potential_v, potential_v_special, TridiagonalOperator};
use pseudospec_core::params::{derive, SwansonParams};
use pseudospec_core::specfun::{jacobi, JacobiSpec};
use pseudospec_core::superpotential::Superpotential;
use pseudospec_core::verify::{solve_symmetric_tridiagonal, sturm_count};

fn families() -> Vec<Superpotential> {
    vec![
        Superpotential::rm1(1.5, 0.125).unwrap(),
        Superpotential::rm1(1.0, 2.0).unwrap(),
        Superpotential::rm2(1.5, 0.25).unwrap(),
        Superpotential::rm2(0.5, 0.125).unwrap(),
        Superpotential::Harmonic,
    ]
}

/// Golden-ratio sequence mapped into the open domain.
fn quasi_random(sp: &Superpotential, k: usize) -> f64 {
    let u = (0.5 + k as f64 * 0.618_033_988_749_895) % 1.0;
    let d = sp.domain();
    if d.is_bounded() {
        d.lo + 0.02 + u * (d.hi - d.lo - 0.04)
    } else {
        -6.0 + 12.0 * u
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let dx = 1e-5;
    for sp in families() {
        for k in 0..200 {
            let x = quasi_random(&sp, k);
            let w = sp.eval_w(x).unwrap();
            let wp = sp.eval_w_prime(x).unwrap();
            let d_omega = (sp.antiderivative(x + dx).unwrap() - sp.antiderivative(x - dx).unwrap()) / (2.0 * dx);
            let d_w = (sp.eval_w(x + dx).unwrap() - sp.eval_w(x - dx).unwrap()) / (2.0 * dx);
            assert!((d_omega - w).abs() <= 1e-6 * (1.0 + w.abs()), "{sp:?} x = {x}");
            assert!((d_w - wp).abs() <= 1e-6 * (1.0 + wp.abs()), "{sp:?} x = {x}");
            let f0 = sp.ground_state_generator(x).unwrap();
            assert!(f0 > 0.0);
        }
    }
}

#[test]
fn general_potential_matches_family_form() {
    for sp in families() {
        for (alpha, beta) in [(0.25, 0.5), (0.125, 0.75), (0.0, 0.5), (-0.3, 0.4)] {
            let d = derive(&SwansonParams::new(alpha, beta), &sp).unwrap();
            for k in 0..200 {
                let x = quasi_random(&sp, k);
                let a = potential_v(&d, &sp, x).unwrap();
                let b = potential_v_special(&d, &sp, x).unwrap();
                // cancellation between kW² and the constant bounds the attainable accuracy
                let scale = d.coupling * sp.eval_w(x).unwrap().powi(2) + sp.eval_w_prime(x).unwrap() / d.scale;
                assert!((a - b).abs() <= 1e-12 * scale.abs().max(b.abs()).max(1.0), "{sp:?} {x}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn energy_is_scale_times_eps() {
    for sp in families() {
        let d = derive(&SwansonParams::new(0.25, 0.5), &sp).unwrap();
        for rec in analytic::levels(&d, 6).unwrap() {
            assert_eq!(rec.energy, d.scale * rec.eps);
        }
    }
}

#[test]
fn pt_forms_agree_with_general_formulas() {
    // with αβ = 0 the B = 0 energies are (A+n)² − A² and a² − (a−n)²
    for a1 in [0.8, 1.5, 2.25] {
        let d = derive(&SwansonParams::new(0.0, 0.5), &Superpotential::rm1(a1, 0.0).unwrap()).unwrap();
        for n in 0..8 {
            let m = d.cap_a + n as f64;
            let eps = analytic::rm1_energy(&d, n).unwrap().eps;
            assert!((eps - (m * m - d.cap_a * d.cap_a)).abs() <= 1e-12 * m * m);
        }
        let d = derive(&SwansonParams::new(0.0, 0.5), &Superpotential::rm2(a1, 0.0).unwrap()).unwrap();
        for rec in analytic::levels(&d, 8).unwrap() {
            let m = d.cap_a - rec.n as f64;
            assert!((rec.eps - (d.cap_a * d.cap_a - m * m)).abs() <= 1e-12 * d.cap_a * d.cap_a);
        }
    }
}

#[test]
fn non_hermitian_picture_is_gauge_of_hermitian() {
    for sp in families() {
        let d = derive(&SwansonParams::new(0.25, 0.5), &sp).unwrap();
        let count = analytic::levels(&d, 3).unwrap().iter().filter(|l| l.valid).count();
        for n in 0..count {
            let phi = WavefunctionSampler::new(&d, &sp, n, Picture::Hermitian).unwrap();
            let psi = WavefunctionSampler::new(&d, &sp, n, Picture::NonHermitian).unwrap();
            for k in 0..50 {
                let x = quasi_random(&sp, k);
                let rho = (-d.mu * sp.antiderivative(x).unwrap()).exp();
                let (a, b) = (psi.eval(x).unwrap() * rho, phi.eval(x).unwrap());
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{sp:?} n = {n}");
            }
        }
    }
}

/// Eigenvalues below x from sign changes of the leading principal minors.
fn char_poly_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let (mut p_prev, mut p) = (1.0f64, diag[0] - x);
    let mut changes = usize::from(p < 0.0);
    for i in 1..diag.len() {
        let next = (diag[i] - x) * p - off[i - 1] * off[i - 1] * p_prev;
        let scale = next.abs().max(p.abs()).max(1e-300);
        p_prev = p / scale;
        p = next / scale;
        let (a, b) = (p_prev, p);
        let b = if b == 0.0 { -a } else { b };
        if (a < 0.0) != (b < 0.0) {
            changes += 1;
        }
    }
    changes
}

proptest! {
    #[test]
    fn bisection_agrees_with_characteristic_polynomial(
        diag in prop::collection::vec(-5.0f64..5.0, 2..50),
        seed in prop::collection::vec(0.05f64..2.0, 49),
    ) {
        let n = diag.len();
        let off: Vec<f64> = seed[..n - 1].to_vec();
        let t = TridiagonalOperator::new(off.clone(), diag.clone(), off.clone()).unwrap();
        let k = n.min(6);
        let r = solve_symmetric_tridiagonal(&t, k).unwrap();
        for (j, &lambda) in r.eigenvalues.iter().enumerate() {
            let delta = 1e-10 * lambda.abs().max(1.0);
            prop_assert!(char_poly_count(&diag, &off, lambda - delta) <= j);
            prop_assert!(char_poly_count(&diag, &off, lambda + delta) > j);
            prop_assert_eq!(sturm_count(&t, lambda - delta), char_poly_count(&diag, &off, lambda - delta));
        }
        for i in 0..k {
            for j in 0..i {
                let ip: f64 = r.eigenvectors[i].iter().zip(&r.eigenvectors[j]).map(|(a, b)| a * b).sum();
                prop_assert!(ip.abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn jacobi_endpoint_value(
        n in 0usize..=8,
        spr in -6.0f64..6.0, spi in -3.0f64..3.0,
        smr in -6.0f64..6.0, smi in -3.0f64..3.0,
    ) {
        let spec = JacobiSpec::new(n, Complex64::new(spr, spi), Complex64::new(smr, smi));
        let expected = (1..=n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (spec.sp + k as f64) / k as f64);
        let got = jacobi(&spec, Complex64::new(1.0, 0.0));
        prop_assert!((got - expected).norm() <= 1e-12 * expected.norm().max(1e-300));
    }

    #[test]
    fn rm1_gap_identity(a1 in 0.6f64..4.0, b1 in 0.0f64..3.0, beta in 0.3f64..0.7) {
        let p = SwansonParams::new(0.1, beta);
        if let Ok(d) = derive(&p, &Superpotential::rm1(a1, b1).unwrap()) {
            for n in 0..10 {
                let m = d.cap_a + n as f64;
                let gap = (m + 1.0).powi(2) - m * m - d.cap_b.powi(2) * ((m + 1.0).powi(-2) - m.powi(-2));
                let direct = analytic::rm1_energy(&d, n + 1).unwrap().eps - analytic::rm1_energy(&d, n).unwrap().eps;
                prop_assert!((gap - direct).abs() <= 1e-12 * (gap.abs() + d.offset.abs()).max(1.0));
            }
        }
    }
}
