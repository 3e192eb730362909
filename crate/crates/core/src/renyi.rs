//! Rényi overlaps `tr ρ^{1−p} σ^p` and the telescopic relative Rényi
//! entropies
//!
//! ```text
//! Q_{p,a}(ρ,σ) = (1 − tr ρ^{1−p} τ^p) / (1 − a^p),   τ = aρ + (1−a)σ.
//! ```
//!
//! Powers of rank-deficient states are taken on the spectrum with `0^p = 0`
//! for `p > 0` and `x^0 = {x}`.

use serde::{Deserialize, Serialize};

use crate::error::{check_open, check_range, Error, Result};
use crate::matfun::{compress, frechet_power_map, Tolerances};
use crate::states::{telescope_mix, DensityMatrix};
use crate::tre::psd_spectrum;

/// Raw telescoped overlap and the normalized `Q_{p,a}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenyiValue {
    pub overlap: f64,
    pub q: f64,
}

fn ensure_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    Ok(())
}

/// `tr ρ^{1−p} σ^p` for `p ∈ [0,1]`.
pub fn renyi_overlap(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64) -> Result<f64> {
    renyi_overlap_with(rho, sigma, p, &Tolerances::default())
}

pub fn renyi_overlap_with(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64, tol: &Tolerances) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let left = psd_spectrum(rho, tol).power(1.0 - p);
    let right = psd_spectrum(sigma, tol).power(p);
    Ok(left.trace_product(&right))
}

/// `tr ρ^{1−p} (aρ + (1−a)σ)^p`, which lies in `[a^p, 1]`.
pub fn renyi_overlap_telescoped(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64, a: f64) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    let tau = telescope_mix(rho, sigma, a)?;
    renyi_overlap(rho, &tau, p)
}

/// `Q_{p,a}(ρ,σ)` for `p ∈ (0,1)`, `a ∈ [0,1)`.
pub fn trre(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64, a: f64) -> Result<f64> {
    Ok(telescopic_renyi(rho, sigma, p, a)?.q)
}

pub fn telescopic_renyi(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64, a: f64) -> Result<RenyiValue> {
    ensure_dims(rho, sigma)?;
    check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    if !(0.0..1.0).contains(&a) {
        return Err(Error::ParameterOutOfRange {
            name: "a",
            value: a,
            range: "[0, 1)",
        });
    }
    let overlap = renyi_overlap_telescoped(rho, sigma, p, a)?;
    Ok(RenyiValue {
        overlap,
        q: (1.0 - overlap) / (1.0 - a.powf(p)),
    })
}

/// `d/da tr ρ^{1−p} τ^p = tr ρ^{1−p} T_{τ;p}(ρ − σ)`, evaluated on the
/// compression to the support of `ρ + σ` where `τ` is invertible.
pub fn renyi_overlap_derivative(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64, a: f64) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    check_open("a", a, 0.0, 1.0, "(0, 1)")?;
    let tol = Tolerances::default();
    let joint = DensityMatrix::trusted((rho.as_hermitian() + sigma.as_hermitian()).scale(0.5));
    let basis = psd_spectrum(&joint, &tol).support_basis();
    let r = DensityMatrix::trusted(compress(rho.as_hermitian(), &basis));
    let s = DensityMatrix::trusted(compress(sigma.as_hermitian(), &basis));
    let tau = telescope_mix(&r, &s, a)?;
    let delta = r.as_hermitian() - s.as_hermitian();
    let deriv = frechet_power_map(tau.as_hermitian(), &delta, p, None)?;
    Ok(psd_spectrum(&r, &tol).power(1.0 - p).trace_product(&deriv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matfun::trace_norm_distance;
    use crate::states::{random_mixed_hs, random_orthogonal_pair, SeededSampler};
    use approx::assert_abs_diff_eq;

    fn diag(v: &[f64]) -> DensityMatrix {
        DensityMatrix::from_diagonal(v).unwrap()
    }

    #[test]
    fn overlap_examples() {
        let r = diag(&[0.7, 0.3]);
        let s = diag(&[0.3, 0.7]);
        for p in [0.0, 0.3, 1.0] {
            assert_abs_diff_eq!(renyi_overlap(&r, &r, p).unwrap(), 1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(
            renyi_overlap(&r, &s, 0.5).unwrap(),
            2.0 * 0.21f64.sqrt(),
            epsilon = 1e-14
        );
        let e0 = diag(&[1.0, 0.0]);
        let e1 = diag(&[0.0, 1.0]);
        assert_abs_diff_eq!(renyi_overlap(&e0, &e1, 0.5).unwrap(), 0.0, epsilon = 1e-15);
        assert!(renyi_overlap(&r, &s, 1.5).is_err());
        // p = 0 uses the support projector of σ
        assert_abs_diff_eq!(renyi_overlap(&r, &e1, 0.0).unwrap(), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn overlap_symmetry_and_lower_bound() {
        let mut smp = SeededSampler::new(61);
        for _ in 0..100 {
            let r = random_mixed_hs(3, 1 + smp.index(3), &mut smp).unwrap();
            let s = random_mixed_hs(3, 1 + smp.index(3), &mut smp).unwrap();
            let t = trace_norm_distance(&r, &s).unwrap();
            for p in [0.2, 0.5, 0.8] {
                let a = renyi_overlap(&r, &s, p).unwrap();
                let b = renyi_overlap(&s, &r, 1.0 - p).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
                assert!(a >= 1.0 - t - 1e-9);
            }
        }
    }

    #[test]
    fn trre_examples() {
        let r = diag(&[0.7, 0.3]);
        let s = diag(&[0.3, 0.7]);
        let v = telescopic_renyi(&r, &s, 0.5, 0.5).unwrap();
        // Σ_i √ρ_i √(0.5ρ_i + 0.5σ_i)
        let overlap = 0.35f64.sqrt() + 0.15f64.sqrt();
        assert_abs_diff_eq!(v.overlap, overlap, epsilon = 1e-14);
        assert_abs_diff_eq!(v.q, (1.0 - overlap) / (1.0 - 0.5f64.sqrt()), epsilon = 1e-13);
        assert!(v.q <= 0.4);
        assert_abs_diff_eq!(trre(&r, &r, 0.3, 0.6).unwrap(), 0.0, epsilon = 1e-14);
        // a = 0 reduces to 1 - tr ρ^{1-p} σ^p
        let q0 = trre(&r, &s, 0.3, 0.0).unwrap();
        assert_abs_diff_eq!(q0, 1.0 - renyi_overlap(&r, &s, 0.3).unwrap(), epsilon = 1e-15);
        assert!(trre(&r, &s, 0.0, 0.5).is_err());
        assert!(trre(&r, &s, 0.5, 1.0).is_err());
    }

    #[test]
    fn orthogonal_pairs_are_extremal() {
        let mut smp = SeededSampler::new(62);
        for dim in 2..=4 {
            let (r, s) = random_orthogonal_pair(dim, 1, dim - 1, &mut smp).unwrap();
            for p in [0.1, 0.5, 0.9] {
                for a in [0.1, 0.5, 0.9] {
                    let v = telescopic_renyi(&r, &s, p, a).unwrap();
                    assert_abs_diff_eq!(v.overlap, a.powf(p), epsilon = 1e-10);
                    assert_abs_diff_eq!(v.q, 1.0, epsilon = 1e-10);
                }
            }
        }
        let e0 = diag(&[1.0, 0.0]);
        let e1 = diag(&[0.0, 1.0]);
        let mut prev = 0.0;
        for k in 0..20 {
            let a = k as f64 / 20.0;
            let o = renyi_overlap_telescoped(&e0, &e1, 0.4, a).unwrap();
            assert!(o >= prev);
            prev = o;
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let mut smp = SeededSampler::new(63);
        for _ in 0..20 {
            let dim = 3;
            let r = random_mixed_hs(dim, 1 + smp.index(dim), &mut smp).unwrap();
            let s = random_mixed_hs(dim, 1 + smp.index(dim), &mut smp).unwrap();
            for (p, a) in [(0.3, 0.4), (0.7, 0.6)] {
                let h = 1e-5;
                let fd = (renyi_overlap_telescoped(&r, &s, p, a + h).unwrap()
                    - renyi_overlap_telescoped(&r, &s, p, a - h).unwrap())
                    / (2.0 * h);
                let an = renyi_overlap_derivative(&r, &s, p, a).unwrap();
                assert_abs_diff_eq!(an, fd, epsilon = 1e-6);
            }
        }
    }
}
