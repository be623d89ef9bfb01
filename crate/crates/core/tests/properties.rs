use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quadcoh::measures::{coherence_l1_numeric, NumericPath};
use quadcoh::numerics::{default_smooth_grid, hermite_psi, integrate_1d, spectrum_entropy, von_neumann_entropy};
use quadcoh::states::{
    fock_truncate_thermal, kernel, mean_photon_number, quadrature_pdf, FockDensityMatrix, FockVector,
    GaussianPureState, ThermalState,
};
use quadcoh::transforms::{displace, rotate, squeeze};
use quadcoh::{NumericOptions, StateModel};

fn random_vector(rng: &mut StdRng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

fn random_unitary(rng: &mut StdRng, dim: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    a.qr().q()
}

fn random_mixture(rng: &mut StdRng, dim: usize) -> FockDensityMatrix {
    let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = p.iter().sum();
    let d = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(p[i] / total, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let u = random_unitary(rng, dim);
    let rho = &u * d * u.adjoint();
    FockDensityMatrix::new((&rho + rho.adjoint()) * Complex64::new(0.5, 0.0)).unwrap()
}

fn family(rng: &mut StdRng, which: u8) -> StateModel {
    match which % 6 {
        0 => GaussianPureState::minimum_uncertainty(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.3..1.5))
            .unwrap()
            .into(),
        1 => StateModel::thermal(rng.gen_range(0.0..2.0)).unwrap(),
        2 => FockVector::new(random_vector(rng, 4)).unwrap().into(),
        3 => random_mixture(rng, 3).into(),
        4 => squeeze(&StateModel::number(2), rng.gen_range(0.5..2.0)).unwrap(),
        _ => displace(&StateModel::thermal(0.5).unwrap(), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_three_term_recurrence(n in 1usize..150, x in -12.0f64..12.0) {
        let prev = hermite_psi(n - 1, x).unwrap();
        let cur = hermite_psi(n, x).unwrap();
        let next = hermite_psi(n + 1, x).unwrap();
        let nf = n as f64;
        let predicted = (2.0 / (nf + 1.0)).sqrt() * 2f64.sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        let scale = prev.abs().max(cur.abs()).max(next.abs()).max(1e-300);
        prop_assert!((next - predicted).abs() <= 1e-12 * scale.max(1e-3), "{next} vs {predicted}");
    }

    #[test]
    fn hermite_parity(n in 0usize..200, x in 0.0f64..15.0) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(hermite_psi(n, -x).unwrap(), sign * hermite_psi(n, x).unwrap());
    }

    #[test]
    fn von_neumann_is_unitarily_invariant(seed in any::<u64>(), dim in 2usize..8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
        let total: f64 = p.iter().sum();
        let p: Vec<f64> = p.iter().map(|v| v / total).collect();
        let d = DMatrix::from_fn(dim, dim, |i, j| if i == j { Complex64::new(p[i], 0.0) } else { Complex64::new(0.0, 0.0) });
        let u = random_unitary(&mut rng, dim);
        let rho = &u * d * u.adjoint();
        let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!((s - spectrum_entropy(&p)).abs() < 1e-10);
    }

    #[test]
    fn kernels_are_hermitian(seed in any::<u64>(), which in 0u8..6, x in -4.0f64..4.0, xp in -4.0f64..4.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = family(&mut rng, which);
        let a = kernel(&s, x, xp).unwrap();
        let b = kernel(&s, xp, x).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn squeezes_compose(l1 in 0.3f64..3.0, l2 in 0.3f64..3.0, x in -4.0f64..4.0, xp in -4.0f64..4.0, n in 0usize..5) {
        let s = StateModel::number(n);
        let a = squeeze(&squeeze(&s, l1).unwrap(), l2).unwrap();
        let b = squeeze(&s, l1 * l2).unwrap();
        prop_assert!((kernel(&a, x, xp).unwrap() - kernel(&b, x, xp).unwrap()).norm() < 1e-12);
        let t = StateModel::thermal(0.8).unwrap();
        let a = squeeze(&squeeze(&t, l1).unwrap(), l2).unwrap();
        let b = squeeze(&t, l1 * l2).unwrap();
        prop_assert!((kernel(&a, x, xp).unwrap() - kernel(&b, x, xp).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn rotation_preserves_photon_number(seed in any::<u64>(), which in 0u8..4, tau in -7.0f64..7.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = family(&mut rng, which);
        let r = rotate(&s, tau).unwrap();
        let a = mean_photon_number(&s).unwrap();
        let b = mean_photon_number(&r).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn thermal_kernel_matches_truncation(n in 0.0f64..2.0, x in -4.0f64..4.0, xp in -4.0f64..4.0) {
        let t = ThermalState::new(n).unwrap();
        let m: StateModel = fock_truncate_thermal(&t, 80).unwrap().into();
        let closed = t.kernel(x, xp);
        let summed = kernel(&m, x, xp).unwrap();
        prop_assert!((summed.re - closed).abs() < 1e-6 && summed.im.abs() < 1e-12);
    }

    #[test]
    fn densities_are_normalized(seed in any::<u64>(), which in 0u8..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = family(&mut rng, which);
        let grid = default_smooth_grid(s.support().unwrap()).unwrap();
        let mass = integrate_1d(|x| quadrature_pdf(&s, x).unwrap(), &grid).unwrap().value;
        prop_assert!((mass - 1.0).abs() < 5e-6, "{} {mass}", s.family());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn displacement_leaves_coherence_unchanged(x0 in -3.0f64..3.0, y0 in -3.0f64..3.0) {
        let opts = NumericOptions::default();
        let s = StateModel::number(1);
        let base = coherence_l1_numeric(&s, &opts, NumericPath::Pure1d).unwrap().value;
        let d = coherence_l1_numeric(&displace(&s, x0, y0).unwrap(), &opts, NumericPath::Pure1d).unwrap().value;
        prop_assert!((d - base).abs() < 1e-5 * base);
    }
}
