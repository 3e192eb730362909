//! Von Neumann and relative entropy with support semantics, the telescopic
//! relative entropy `S_a(ρ||σ) = S(ρ || aρ + (1−a)σ) / (−log a)` and its
//! closed forms.
//!
//! All values are in nats.

use serde::{Deserialize, Serialize};

use crate::error::{check_open, check_range, Error, Result};
use crate::matfun::{trace_norm_distance, HermitianMatrix, PsdSpectrum, Tolerances};
use crate::states::{telescope_mix, DensityMatrix};

/// Finite values in `[-ENTROPY_CLAMP, 0)` are reported as 0. Telescopic
/// values within the same distance of `[0, 1]` are snapped onto it.
pub const ENTROPY_CLAMP: f64 = 1e-10;

fn clamp_unit(v: f64) -> f64 {
    if (-ENTROPY_CLAMP..0.0).contains(&v) {
        0.0
    } else if v > 1.0 && v <= 1.0 + ENTROPY_CLAMP {
        1.0
    } else {
        v
    }
}

/// A relative entropy: finite and nonnegative, or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum EntropyValue {
    Finite(f64),
    Infinite,
}

impl EntropyValue {
    fn finite_clamped(v: f64) -> Self {
        if (-ENTROPY_CLAMP..0.0).contains(&v) {
            EntropyValue::Finite(0.0)
        } else {
            EntropyValue::Finite(v)
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, EntropyValue::Finite(_))
    }

    /// The value as `f64`, `+inf` for [`EntropyValue::Infinite`].
    pub fn value(&self) -> f64 {
        match *self {
            EntropyValue::Finite(v) => v,
            EntropyValue::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            EntropyValue::Finite(v) => Some(v),
            EntropyValue::Infinite => None,
        }
    }
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

fn ensure_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    Ok(())
}

/// `−Σ λ log λ`, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    von_neumann_entropy_with(rho, &Tolerances::default())
}

pub fn von_neumann_entropy_with(rho: &DensityMatrix, tol: &Tolerances) -> f64 {
    let spec = rho.spectrum(tol.rank_for(rho.dim()));
    let s: f64 = -spec.clamped().iter().map(|&l| xlogx(l)).sum::<f64>();
    s.max(0.0)
}

/// `S(ρ||σ) = tr ρ(log ρ − log σ)`, infinite when the support of `ρ` is not
/// contained in that of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<EntropyValue> {
    relative_entropy_with(rho, sigma, &Tolerances::default())
}

pub fn relative_entropy_with(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<EntropyValue> {
    ensure_dims(rho, sigma)?;
    let rank = tol.rank_for(rho.dim());
    let neg_entropy: f64 = rho.spectrum(rank).clamped().iter().map(|&l| xlogx(l)).sum();
    let sig = sigma.spectrum(rank);
    let weights = sig.decomposition.diagonal_weights(rho.as_hermitian());
    let mut cross = 0.0;
    let mut outside = 0.0;
    for (&mu, &w) in sig.decomposition.eigenvalues().iter().zip(&weights) {
        if sig.in_support(mu) {
            cross += w * mu.ln();
        } else {
            outside += w;
        }
    }
    if outside > tol.support {
        return Ok(EntropyValue::Infinite);
    }
    Ok(EntropyValue::finite_clamped(neg_entropy - cross))
}

/// `S(ρ || aρ + (1−a)σ)` for `a ∈ (0,1]`; always finite.
pub fn relative_entropy_to_mix(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<f64> {
    relative_entropy_to_mix_with(rho, sigma, a, &Tolerances::default())
}

pub fn relative_entropy_to_mix_with(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    a: f64,
    tol: &Tolerances,
) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "a",
            value: a,
            range: "(0, 1]",
        });
    }
    let tau = telescope_mix(rho, sigma, a)?;
    relative_entropy_with(rho, &tau, tol)?
        .finite()
        .ok_or(Error::ParameterOutOfRange {
            name: "a",
            value: a,
            range: "large enough to resolve the support of a*rho",
        })
}

/// `S_a(ρ||σ)` for `a ∈ [0,1]`; the endpoints use the closed forms
/// [`tre_limit_zero`] and [`tre_limit_one`].
pub fn telescopic_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<f64> {
    telescopic_relative_entropy_with(rho, sigma, a, &Tolerances::default())
}

pub fn telescopic_relative_entropy_with(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    a: f64,
    tol: &Tolerances,
) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    if a == 0.0 {
        return tre_limit_zero_with(rho, sigma, tol);
    }
    if a == 1.0 {
        return tre_limit_one_with(rho, sigma, tol);
    }
    Ok(clamp_unit(relative_entropy_to_mix_with(rho, sigma, a, tol)? / -a.ln()))
}

/// `S_0(ρ||σ) = 1 − tr ρ{σ}`.
pub fn tre_limit_zero(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    tre_limit_zero_with(rho, sigma, &Tolerances::default())
}

pub fn tre_limit_zero_with(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    let proj = sigma.spectrum(tol.rank_for(sigma.dim())).projector();
    Ok(clamp_unit(1.0 - rho.as_hermitian().trace_product(&proj)))
}

/// `S_1(ρ||σ) = 1 − tr σ{ρ}`.
pub fn tre_limit_one(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    tre_limit_one_with(rho, sigma, &Tolerances::default())
}

pub fn tre_limit_one_with(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    tre_limit_zero_with(sigma, rho, tol)
}

/// Inputs of the pure-state closed form: trace distance `t`, mixing
/// parameter `a`, and `w = 4a(1−a)t²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureTREInputs {
    pub t: f64,
    pub a: f64,
    pub w: f64,
}

impl PureTREInputs {
    pub fn new(t: f64, a: f64) -> Result<Self> {
        check_range("t", t, 0.0, 1.0, "[0, 1]")?;
        check_open("a", a, 0.0, 1.0, "(0, 1)")?;
        Ok(Self {
            t,
            a,
            w: 4.0 * a * (1.0 - a) * t * t,
        })
    }

    /// `1 − w`, evaluated as `(1−2a)² + 4a(1−a)(1−t²)` to keep digits near `w = 1`.
    pub fn one_minus_w(&self) -> f64 {
        let (a, t) = (self.a, self.t);
        (1.0 - 2.0 * a).powi(2) + 4.0 * a * (1.0 - a) * (1.0 - t) * (1.0 + t)
    }
}

/// Closed form of `S_a` for two pure states at trace distance `t`.
pub fn tre_pure_closed_form(t: f64, a: f64) -> Result<f64> {
    let inp = PureTREInputs::new(t, a)?;
    if inp.w == 0.0 {
        return Ok(0.0);
    }
    let w = inp.w;
    let r = inp.one_minus_w().sqrt();
    // log((1+r)/(1−r)) / r; the ratio has a removable singularity at r = 0
    let log_ratio_over_r = if r < 1e-6 {
        2.0 * (1.0 + r * r / 3.0)
    } else {
        // (1−r)(1+r) = w
        (2.0 * r.ln_1p() - w.ln()) / r
    };
    let coeff = 1.0 - w / (2.0 * a);
    let numerator = -(w / 4.0).ln() - coeff * log_ratio_over_r;
    Ok(numerator / (-2.0 * a.ln()))
}

/// `S_a(b||c)` for nonnegative scalars.
pub fn scalar_tre(b: f64, c: f64, a: f64) -> Result<f64> {
    check_range("b", b, 0.0, f64::INFINITY, "[0, inf)")?;
    check_range("c", c, 0.0, f64::INFINITY, "[0, inf)")?;
    check_open("a", a, 0.0, 1.0, "(0, 1)")?;
    if b == 0.0 {
        return Ok(0.0);
    }
    let mix = a * b + (1.0 - a) * c;
    Ok(b * (b.ln() - mix.ln()) / -a.ln())
}

/// `h(p) = −p log p − (1−p) log(1−p)`.
pub fn binary_entropy(p: f64) -> f64 {
    -xlogx(p) - xlogx(1.0 - p)
}

/// Holevo quantity of `{(p, ρ), (1−p, σ)}`: `S(τ) − pS(ρ) − (1−p)S(σ)` with
/// `τ = pρ + (1−p)σ`.
pub fn holevo_two(p: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let tau = telescope_mix(rho, sigma, p)?;
    Ok(von_neumann_entropy(&tau) - p * von_neumann_entropy(rho) - (1.0 - p) * von_neumann_entropy(sigma))
}

/// The same quantity as `p S(ρ||τ) + (1−p) S(σ||τ)`.
pub fn holevo_two_via_relative_entropies(p: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let mut chi = 0.0;
    if p > 0.0 {
        chi += p * relative_entropy_to_mix(rho, sigma, p)?;
    }
    if p < 1.0 {
        chi += (1.0 - p) * relative_entropy_to_mix(sigma, rho, 1.0 - p)?;
    }
    Ok(chi)
}

/// `c_d · S((ρ+1)/(1+d) || (σ+1)/(1+d))`.
pub fn lendi_regularised(rho: &DensityMatrix, sigma: &DensityMatrix, c_d: f64) -> Result<f64> {
    ensure_dims(rho, sigma)?;
    check_open("c_d", c_d, 0.0, f64::INFINITY, "(0, inf)")?;
    let d = rho.dim();
    let id = HermitianMatrix::identity(d);
    let shift = |x: &DensityMatrix| DensityMatrix::trusted((x.as_hermitian() + &id).scale(1.0 / (1.0 + d as f64)));
    let s = relative_entropy(&shift(rho), &shift(sigma))?;
    Ok(c_d * s.finite().expect("shifted states are faithful"))
}

/// Collinear smoothing: `τ = aρ + (1−a)σ` with `a = ε/‖ρ−σ‖₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingBound {
    pub a: f64,
    /// `S(ρ||τ)`.
    pub relative_entropy: f64,
    /// `−log a`.
    pub bound: f64,
    /// `‖τ − σ‖₁`, equal to `ε`.
    pub trace_norm_budget: f64,
}

pub fn collinear_smoothing_bound(rho: &DensityMatrix, sigma: &DensityMatrix, epsilon: f64) -> Result<SmoothingBound> {
    ensure_dims(rho, sigma)?;
    let norm = 2.0 * trace_norm_distance(rho, sigma)?;
    if !(epsilon > 0.0 && epsilon < norm) {
        return Err(Error::EmptySmoothingWindow { epsilon, norm });
    }
    let a = epsilon / norm;
    let tau = telescope_mix(rho, sigma, a)?;
    Ok(SmoothingBound {
        a,
        relative_entropy: relative_entropy_to_mix(rho, sigma, a)?,
        bound: -a.ln(),
        trace_norm_budget: 2.0 * trace_norm_distance(&tau, sigma)?,
    })
}

/// Support spectrum helper shared with the Rényi module.
pub(crate) fn psd_spectrum(rho: &DensityMatrix, tol: &Tolerances) -> PsdSpectrum {
    rho.spectrum(tol.rank_for(rho.dim()))
}
