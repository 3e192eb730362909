mod common;

use common::config;
use num_complex::Complex64;
use proptest::prelude::*;
use tre_core::matfun::trace_norm_distance;
use tre_core::states::*;

fn valid(rho: &DensityMatrix) -> bool {
    DensityMatrix::new(rho.as_hermitian().clone()).is_ok()
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn constructors_produce_valid_states(seed in any::<u64>(), dim in 2usize..=6, a in 0.0f64..=1.0) {
        let mut sm = SeededSampler::new(seed);
        let rank = 1 + sm.index(dim);
        let mixed = random_mixed_hs(dim, rank, &mut sm).unwrap();
        let pure = haar_random_pure(dim, &mut sm).unwrap();
        let r1 = 1 + sm.index(dim - 1);
        let (o1, o2) = random_orthogonal_pair(dim, r1, 1 + sm.index(dim - r1), &mut sm).unwrap();
        let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(sm.uniform() - 0.5, sm.uniform() - 0.5)).collect();
        let mut diag: Vec<f64> = (0..dim).map(|_| sm.uniform()).collect();
        let total: f64 = diag.iter().sum();
        diag.iter_mut().for_each(|x| *x /= total);
        let (x, y, z) = (sm.uniform() - 0.5, sm.uniform() - 0.5, sm.uniform() - 0.5);
        let (q1, q2) = qubit_pair_with_angle(a * std::f64::consts::TAU);
        let (p1, p2) = pure_pair_with_distance(a).unwrap();
        let states = [
            telescope_mix(&mixed, &pure, a).unwrap(),
            pure_from_vector(&v).unwrap(),
            DensityMatrix::from_diagonal(&diag).unwrap(),
            DensityMatrix::from_bloch(x, y, z).unwrap(),
            DensityMatrix::maximally_mixed(dim).unwrap(),
            DensityMatrix::basis_state(dim, sm.index(dim)).unwrap(),
            mixed, pure, o1, o2, q1, q2, p1, p2,
        ];
        for rho in &states {
            prop_assert!(valid(rho));
        }
    }

    #[test]
    fn telescope_mix_linearity(seed in any::<u64>(), dim in 2usize..=6, a in 0.0f64..=1.0) {
        let mut sm = SeededSampler::new(seed);
        let rho = random_mixed_hs(dim, 1 + sm.index(dim), &mut sm).unwrap();
        let sigma = random_mixed_hs(dim, 1 + sm.index(dim), &mut sm).unwrap();
        let lhs = telescope_mix(&rho, &sigma, a).unwrap().matrix() + telescope_mix(&sigma, &rho, a).unwrap().matrix();
        let rhs = rho.matrix() + sigma.matrix();
        prop_assert!((lhs - rhs).camax() <= 1e-12);
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), dim in 2usize..=6) {
        let draw = |sm: &mut SeededSampler| {
            let u = sm.uniform();
            let rho = random_mixed_hs(dim, dim, sm).unwrap();
            let psi = haar_random_pure(dim, sm).unwrap();
            (u, sm.index(1000), rho, psi)
        };
        prop_assert_eq!(draw(&mut SeededSampler::new(seed)), draw(&mut SeededSampler::new(seed)));
        prop_assert_eq!(
            draw(&mut SeededSampler::for_trial(seed, 7)),
            draw(&mut SeededSampler::for_trial(seed, 7))
        );
    }
}

#[test]
fn qubit_angle_trace_distance() {
    for k in 0..100 {
        let theta = std::f64::consts::TAU * k as f64 / 99.0;
        let (rho, sigma) = qubit_pair_with_angle(theta);
        let t = trace_norm_distance(&rho, &sigma).unwrap();
        assert!((t - (theta / 2.0).sin().abs()).abs() <= 1e-12, "theta {theta}: {t}");
    }
}
