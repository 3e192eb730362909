mod common;

use common::{config, pair, STRATA};
use proptest::prelude::*;
use proptest::sample::select;
use tre_core::matfun::trace_norm_distance;
use tre_core::states::{is_orthogonal, pure_pair_with_distance, DensityMatrix};
use tre_core::tre::*;
use tre_core::verify::Stratum;

fn stratum() -> impl Strategy<Value = Stratum> {
    select(STRATA.to_vec())
}

fn t(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    trace_norm_distance(rho, sigma).unwrap()
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn bounds(seed in any::<u64>(), st in stratum(), dim in 2usize..=6, a in 0.001f64..0.999) {
        let (rho, sigma) = pair(seed, st, dim);
        let s = telescopic_relative_entropy(&rho, &sigma, a).unwrap();
        let t = t(&rho, &sigma);
        let la = -a.ln();
        prop_assert!((0.0..=1.0).contains(&s), "range {s}");
        prop_assert!(s <= t + 1e-9, "upper {s} > {t}");
        prop_assert!(s >= 2.0 * (1.0 - a).powi(2) * t * t / la - 1e-9, "pinsker {s}");
        let raw = relative_entropy_to_mix(&rho, &sigma, a).unwrap();
        prop_assert!(raw <= la * t + 1e-9, "raw {raw} > {}", la * t);
    }

    #[test]
    fn endpoints_in_range(seed in any::<u64>(), st in stratum(), dim in 2usize..=6) {
        let (rho, sigma) = pair(seed, st, dim);
        let t = t(&rho, &sigma);
        for a in [0.0, 1.0] {
            let s = telescopic_relative_entropy(&rho, &sigma, a).unwrap();
            prop_assert!((0.0..=1.0).contains(&s) && s <= t + 1e-9);
        }
    }

    #[test]
    fn maximality_iff_orthogonal(seed in any::<u64>(), st in stratum(), dim in 2usize..=6, a in 0.1f64..=0.9) {
        let (rho, sigma) = pair(seed, st, dim);
        let s = telescopic_relative_entropy(&rho, &sigma, a).unwrap();
        if is_orthogonal(&rho, &sigma).unwrap() {
            prop_assert!((s - 1.0).abs() <= 1e-9);
        } else {
            prop_assert!(s < 1.0 - 1e-9, "non-orthogonal pair at {s}");
        }
        if rho.overlap(&sigma).unwrap() >= 0.1 {
            prop_assert!(s <= 1.0 - 1e-6);
        }
    }

    #[test]
    fn holevo_paths_and_bound(seed in any::<u64>(), st in stratum(), dim in 2usize..=6, p in 0.0f64..=1.0) {
        let (rho, sigma) = pair(seed, st, dim);
        let chi = holevo_two(p, &rho, &sigma).unwrap();
        let chi2 = holevo_two_via_relative_entropies(p, &rho, &sigma).unwrap();
        prop_assert!((chi - chi2).abs() <= 1e-9, "{chi} vs {chi2}");
        let h = binary_entropy(p);
        prop_assert!(chi <= h.min(h * t(&rho, &sigma)) + 1e-9);
    }
}

#[test]
fn pure_closed_form_matches_construction() {
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let t = i as f64 / 40.0;
        let (rho, sigma) = pure_pair_with_distance(t).unwrap();
        for j in 1..40 {
            let a = j as f64 / 40.0;
            let closed = tre_pure_closed_form(t, a).unwrap();
            let direct = telescopic_relative_entropy(&rho, &sigma, a).unwrap();
            worst = worst.max((closed - direct).abs());
        }
    }
    assert!(worst <= 1e-9, "worst {worst:e}");
}

/// `S_a` at `a = 1e-6` and `a = 1 − 1e-6` against the closed-form limits.
#[test]
fn limit_consistency_at_extreme_a() {
    let mut failures = Vec::new();
    for st in STRATA {
        for dim in [2, 3, 4, 6] {
            for seed in 0..50 {
                let (rho, sigma) = pair(seed, st, dim);
                let near0 = telescopic_relative_entropy(&rho, &sigma, 1e-6).unwrap();
                let near1 = telescopic_relative_entropy(&rho, &sigma, 1.0 - 1e-6).unwrap();
                let e0 = (near0 - tre_limit_zero(&rho, &sigma).unwrap()).abs();
                let e1 = (near1 - tre_limit_one(&rho, &sigma).unwrap()).abs();
                if e0 > 5e-2 || e1 > 5e-2 {
                    failures.push(format!("{st:?} dim {dim} seed {seed}: |dS_0| {e0:.3e} |dS_1| {e1:.3e}"));
                }
            }
        }
    }
    assert!(
        failures.is_empty(),
        "{} of 800 pairs outside 5e-2:\n{}",
        failures.len(),
        failures[..failures.len().min(10)].join("\n")
    );
}
