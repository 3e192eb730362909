mod common;

use common::{config, faithful, min_eig, op_norm};
use proptest::prelude::*;
use tre_core::matfun::{
    frechet_log_map, frechet_power_map, max_abs_diff, spectral_decompose, support_projector, trace_norm_distance,
    HermitianMatrix, RankTolerance,
};
use tre_core::oracle::{finite_diff_frechet, quad_frechet_log, quad_frechet_power, FrechetKind, QuadratureScheme};
use tre_core::states::{random_hermitian, random_mixed_hs, random_positive_definite, SeededSampler};

fn dim() -> impl Strategy<Value = usize> {
    2usize..=6
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn reconstruction(seed in any::<u64>(), dim in dim(), scale in -3.0f64..3.0) {
        let h = random_hermitian(dim, &mut SeededSampler::new(seed)).unwrap().scale(10f64.powf(scale));
        let d = spectral_decompose(&h);
        let err = op_norm(&(&d.reconstruct() - &h));
        prop_assert!(err <= 1e-10 * d.max_abs_eigenvalue().max(1.0), "err {err:e}");
    }

    #[test]
    fn support_projector_properties(seed in any::<u64>(), dim in dim(), rank_pick in 0usize..6) {
        let rank = 1 + rank_pick % dim;
        let a = random_mixed_hs(dim, rank, &mut SeededSampler::new(seed)).unwrap();
        let tol = RankTolerance::for_dim(dim);
        let p = support_projector(a.as_hermitian(), tol).unwrap();
        let pm = p.as_matrix();
        prop_assert!((pm * pm - pm).camax() <= 1e-12);
        prop_assert!((pm.adjoint() - pm).camax() == 0.0);
        let lambda_max = spectral_decompose(a.as_hermitian()).lambda_max();
        let bound = tol.threshold(lambda_max) * dim as f64;
        prop_assert!((pm * a.matrix() - a.matrix()).camax() <= bound);
        prop_assert!((a.matrix() * pm - a.matrix()).camax() <= bound);
    }

    #[test]
    fn trace_distance_metric(seed in any::<u64>(), dim in dim()) {
        let mut sm = SeededSampler::new(seed);
        let r = faithful(dim, &mut sm);
        let s = random_mixed_hs(dim, 1 + sm.index(dim), &mut sm).unwrap();
        let t = random_mixed_hs(dim, 1 + sm.index(dim), &mut sm).unwrap();
        let rs = trace_norm_distance(&r, &s).unwrap();
        prop_assert!((rs - trace_norm_distance(&s, &r).unwrap()).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&rs));
        let rt = trace_norm_distance(&r, &t).unwrap();
        let st = trace_norm_distance(&s, &t).unwrap();
        prop_assert!(rt <= rs + st + 1e-14);
    }

    #[test]
    fn frechet_linearity(seed in any::<u64>(), dim in dim(), c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, p in 0.05f64..0.95) {
        let mut sm = SeededSampler::new(seed);
        let a = random_positive_definite(dim, 0.05, &mut sm).unwrap();
        let x = random_hermitian(dim, &mut sm).unwrap();
        let y = random_hermitian(dim, &mut sm).unwrap();
        let combo = &x.scale(c1) + &y.scale(c2);
        let log = |d: &HermitianMatrix| frechet_log_map(&a, d, None).unwrap();
        let pow = |d: &HermitianMatrix| frechet_power_map(&a, d, p, None).unwrap();
        prop_assert!(max_abs_diff(&log(&combo), &(&log(&x).scale(c1) + &log(&y).scale(c2))) <= 1e-10);
        prop_assert!(max_abs_diff(&pow(&combo), &(&pow(&x).scale(c1) + &pow(&y).scale(c2))) <= 1e-10);
    }

    #[test]
    fn frechet_preserves_psd_order(seed in any::<u64>(), dim in dim(), p in 0.05f64..0.95) {
        let mut sm = SeededSampler::new(seed);
        let a = random_positive_definite(dim, 0.05, &mut sm).unwrap();
        let x = random_mixed_hs(dim, dim, &mut sm).unwrap().into_hermitian();
        let gap = random_mixed_hs(dim, 1 + sm.index(dim), &mut sm).unwrap().into_hermitian();
        let y = &x + &gap;
        let dl = &frechet_log_map(&a, &y, None).unwrap() - &frechet_log_map(&a, &x, None).unwrap();
        let dp = &frechet_power_map(&a, &y, p, None).unwrap() - &frechet_power_map(&a, &x, p, None).unwrap();
        prop_assert!(min_eig(&dl) >= -1e-10);
        prop_assert!(min_eig(&dp) >= -1e-10);
    }

    #[test]
    fn frechet_self_adjoint(seed in any::<u64>(), dim in dim(), p in 0.05f64..0.95) {
        let mut sm = SeededSampler::new(seed);
        let a = random_positive_definite(dim, 0.05, &mut sm).unwrap();
        let b = random_hermitian(dim, &mut sm).unwrap();
        let d = random_hermitian(dim, &mut sm).unwrap();
        let lhs = b.trace_product(&frechet_log_map(&a, &d, None).unwrap());
        let rhs = d.trace_product(&frechet_log_map(&a, &b, None).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
        let lhs = b.trace_product(&frechet_power_map(&a, &d, p, None).unwrap());
        let rhs = d.trace_product(&frechet_power_map(&a, &b, p, None).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn frechet_matches_quadrature(seed in any::<u64>(), dim in dim(), p in 0.05f64..0.95) {
        let mut sm = SeededSampler::new(seed);
        let a = random_positive_definite(dim, 0.05, &mut sm).unwrap();
        let d = random_hermitian(dim, &mut sm).unwrap();
        let scheme = QuadratureScheme::default_scheme();
        let err = max_abs_diff(&frechet_log_map(&a, &d, None).unwrap(), &quad_frechet_log(&a, &d, scheme).unwrap());
        prop_assert!(err <= 1e-6, "log {err:e}");
        let err = max_abs_diff(
            &frechet_power_map(&a, &d, p, None).unwrap(),
            &quad_frechet_power(&a, &d, p, scheme).unwrap(),
        );
        prop_assert!(err <= 1e-6, "power {err:e}");
    }

    #[test]
    fn frechet_matches_finite_differences(seed in any::<u64>(), dim in dim(), p in 0.05f64..0.95) {
        let mut sm = SeededSampler::new(seed);
        let a = random_positive_definite(dim, 0.05, &mut sm).unwrap();
        let d = random_hermitian(dim, &mut sm).unwrap();
        let d = d.scale(1.0 / op_norm(&d));
        let fd = finite_diff_frechet(FrechetKind::Log, &a, &d, 1e-5).unwrap();
        let err = max_abs_diff(&frechet_log_map(&a, &d, None).unwrap(), &fd);
        prop_assert!(err <= 1e-6, "log {err:e}");
        let fd = finite_diff_frechet(FrechetKind::Power(p), &a, &d, 1e-5).unwrap();
        let err = max_abs_diff(&frechet_power_map(&a, &d, p, None).unwrap(), &fd);
        prop_assert!(err <= 1e-6, "power {err:e}");
    }
}
