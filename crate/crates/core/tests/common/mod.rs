#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};
use tre_core::matfun::HermitianMatrix;
use tre_core::states::{random_mixed_hs, DensityMatrix, SeededSampler};
use tre_core::verify::{sample_pair, Stratum};

pub const STRATA: [Stratum; 4] = [
    Stratum::Faithful,
    Stratum::RankDeficient,
    Stratum::Pure,
    Stratum::Orthogonal,
];

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(0x7e1e),
        ..Config::default()
    }
}

pub fn pair(seed: u64, stratum: Stratum, dim: usize) -> (DensityMatrix, DensityMatrix) {
    sample_pair(stratum, dim, &mut SeededSampler::new(seed)).unwrap()
}

pub fn faithful(dim: usize, sampler: &mut SeededSampler) -> DensityMatrix {
    random_mixed_hs(dim, dim, sampler).unwrap()
}

/// Largest `|λ|` of a Hermitian matrix.
pub fn op_norm(h: &HermitianMatrix) -> f64 {
    h.eigenvalues().iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn min_eig(h: &HermitianMatrix) -> f64 {
    h.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `U diag(λ) U*` with Haar `U` and `λ_i ∝ 10^{u_i·decades}`, `u_i` uniform on
/// `[-1, 0]`, so the spectrum spreads over roughly `decades` orders of
/// magnitude.
pub fn spread_state(dim: usize, decades: f64, sampler: &mut SeededSampler) -> DensityMatrix {
    use num_complex::Complex64;
    use tre_core::matfun::CMatrix;
    let u = tre_core::states::random_unitary(dim, sampler).unwrap();
    let mut l: Vec<f64> = (0..dim).map(|_| 10f64.powf(-decades * sampler.uniform())).collect();
    let total: f64 = l.iter().sum();
    l.iter_mut().for_each(|x| *x /= total);
    let d = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(l[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let m = &u * d * u.adjoint();
    DensityMatrix::from_matrix((&m + m.adjoint()) * Complex64::new(0.5, 0.0)).unwrap()
}
