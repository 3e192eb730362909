mod common;

use common::{config, pair, STRATA};
use proptest::prelude::*;
use proptest::sample::select;
use tre_core::matfun::trace_norm_distance;
use tre_core::renyi::*;
use tre_core::states::is_orthogonal;
use tre_core::verify::Stratum;

const P_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
const A_GRID: [f64; 4] = [0.0, 0.25, 0.5, 0.75];

fn stratum() -> impl Strategy<Value = Stratum> {
    select(STRATA.to_vec())
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn q_below_trace_distance(seed in any::<u64>(), st in stratum(), dim in 2usize..=6) {
        let (rho, sigma) = pair(seed, st, dim);
        let t = trace_norm_distance(&rho, &sigma).unwrap();
        let orthogonal = is_orthogonal(&rho, &sigma).unwrap();
        for p in P_GRID {
            for a in A_GRID {
                let v = telescopic_renyi(&rho, &sigma, p, a).unwrap();
                prop_assert!(v.q <= t + 1e-9, "p {p} a {a}: {} > {t}", v.q);
                prop_assert!(v.overlap >= a.powf(p) - 1e-9);
                if orthogonal {
                    prop_assert!((v.overlap - a.powf(p)).abs() <= 1e-9);
                }
            }
            prop_assert!(renyi_overlap(&rho, &sigma, p).unwrap() >= 1.0 - t - 1e-9);
        }
    }

    #[test]
    fn derivative_matches_finite_difference(
        seed in any::<u64>(),
        st in stratum(),
        dim in 2usize..=6,
        p in 0.05f64..0.95,
        a in 0.05f64..0.95,
    ) {
        let (rho, sigma) = pair(seed, st, dim);
        let h = 1e-5;
        let fd = (renyi_overlap_telescoped(&rho, &sigma, p, a + h).unwrap()
            - renyi_overlap_telescoped(&rho, &sigma, p, a - h).unwrap())
            / (2.0 * h);
        let d = renyi_overlap_derivative(&rho, &sigma, p, a).unwrap();
        prop_assert!((d - fd).abs() <= 1e-6, "{d} vs {fd}");
    }
}
