//! Independent numerical oracles.
//!
//! The spectral routines in [`crate::matfun`] and [`crate::tre`] are checked
//! against two unrelated routes: Gauss–Legendre quadrature of the resolvent
//! integrals (matrix inverses only, no eigendecompositions), and central
//! finite differences of the matrix functions.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_open, Error, Result};
use crate::matfun::{
    compress, matrix_log, matrix_power, spectral_decompose, CMatrix, HermitianMatrix, PsdSpectrum, RankTolerance,
    Tolerances,
};
use crate::states::DensityMatrix;

pub const DEFAULT_NODES: usize = 501;
pub const QUICK_NODES: usize = 201;
pub const MIN_NODES: usize = 16;

/// Map from the Gauss–Legendre variable `u ∈ (0,1)` to `s ∈ (0,∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transform {
    /// `s = u/(1−u)`.
    Rational,
    /// `s = (u/(1−u))^k`, clustering nodes near `s = 0` and `s = ∞`.
    Stretched { power: f64 },
    /// `s = lo·(hi/lo)^u`, uniform in `log s` on the truncated range
    /// `[lo, hi]`.
    Logarithmic { lo: f64, hi: f64 },
}

/// Gauss–Legendre rule on `(0,1)` plus a transform to the half line.
#[derive(Clone, Debug)]
pub struct QuadratureScheme {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    transform: Transform,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// three-term recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        // recompute the derivative at the converged node
        let (mut p0, mut p1) = (1.0, z);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        if n > 1 {
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

impl QuadratureScheme {
    pub fn new(nodes: usize, transform: Transform) -> Result<Self> {
        if nodes < MIN_NODES {
            return Err(Error::Quadrature(format!(
                "need at least {MIN_NODES} nodes, got {nodes}"
            )));
        }
        match transform {
            Transform::Stretched { power } if !(power >= 1.0) => {
                return Err(Error::Quadrature(format!("stretch power {power} < 1")));
            }
            Transform::Logarithmic { lo, hi } if !(lo > 0.0 && hi > lo && hi.is_finite()) => {
                return Err(Error::Quadrature(format!("bad logarithmic range [{lo}, {hi}]")));
            }
            _ => {}
        }
        let (x, w) = gauss_legendre(nodes);
        Ok(Self {
            nodes: x.iter().map(|x| 0.5 * (1.0 + x)).collect(),
            weights: w.iter().map(|w| 0.5 * w).collect(),
            transform,
        })
    }

    pub fn rational(nodes: usize) -> Result<Self> {
        Self::new(nodes, Transform::Rational)
    }

    pub fn stretched(nodes: usize, power: f64) -> Result<Self> {
        Self::new(nodes, Transform::Stretched { power })
    }

    pub fn logarithmic(nodes: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(nodes, Transform::Logarithmic { lo, hi })
    }

    /// Shared 501-node rational scheme.
    pub fn default_scheme() -> &'static QuadratureScheme {
        static SCHEME: OnceLock<QuadratureScheme> = OnceLock::new();
        SCHEME.get_or_init(|| Self::rational(DEFAULT_NODES).expect("valid"))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn transform(&self) -> Transform {
        self.transform
    }

    /// Nodes and weights on `(0,1)`.
    pub fn unit_rule(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `(s_k, w_k)` with `Σ w_k f(s_k) ≈ ∫_0^∞ f(s) ds`.
    pub fn half_line(&self) -> Vec<(f64, f64)> {
        self.unit_rule()
            .map(|(u, w)| {
                let v = 1.0 - u;
                let t = u / v;
                match self.transform {
                    Transform::Rational => (t, w / (v * v)),
                    Transform::Stretched { power } => (t.powf(power), w * power * t.powf(power - 1.0) / (v * v)),
                    Transform::Logarithmic { lo, hi } => {
                        let span = (hi / lo).ln();
                        let s = lo * (span * u).exp();
                        (s, w * span * s)
                    }
                }
            })
            .collect()
    }
}

/// `∫_0^∞ (1/(1+s) − 1/(x+s)) ds = log x`.
pub fn quad_log(x: f64, scheme: &QuadratureScheme) -> Result<f64> {
    check_open("x", x, 0.0, f64::INFINITY, "(0, inf)")?;
    // the integrand written over a common denominator, free of cancellation
    Ok(scheme
        .half_line()
        .into_iter()
        .map(|(s, w)| w * (x - 1.0) / ((1.0 + s) * (x + s)))
        .sum())
}

/// `(A + sI)^{-1}` by LU.
/// `(A+s)^{-1} X (A+s)^{-1}` by two Cholesky solves, which stays accurate
/// when `A` carries roundoff-level kernel eigenvalues and `s` is tiny.
fn resolvent_sandwich(a: &CMatrix, x: &CMatrix, s: f64) -> Result<CMatrix> {
    let n = a.nrows();
    let shifted = a + CMatrix::identity(n, n) * Complex64::new(s, 0.0);
    let chol = shifted.cholesky().ok_or(Error::Singular(s))?;
    let left = chol.solve(x);
    Ok(chol.solve(&left.adjoint()).adjoint())
}

fn resolvent(a: &CMatrix, s: f64) -> Result<CMatrix> {
    let n = a.nrows();
    let shifted = a + CMatrix::identity(n, n) * Complex64::new(s, 0.0);
    shifted.try_inverse().ok_or(Error::Singular(s))
}

fn to_hermitian(m: CMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrized(m)
}

fn accumulate(
    dim: usize,
    points: impl IntoIterator<Item = (f64, f64)>,
    mut term: impl FnMut(f64) -> Result<CMatrix>,
) -> Result<HermitianMatrix> {
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for (s, w) in points {
        acc += term(s)? * Complex64::new(w, 0.0);
    }
    Ok(to_hermitian(acc))
}

/// `∫_0^∞ (A+s)^{-1} Δ (A+s)^{-1} ds`.
pub fn quad_frechet_log(
    a: &HermitianMatrix,
    delta: &HermitianMatrix,
    scheme: &QuadratureScheme,
) -> Result<HermitianMatrix> {
    a.ensure_same_dim(delta)?;
    let (am, dm) = (a.as_matrix(), delta.as_matrix());
    accumulate(a.dim(), scheme.half_line(), |s| resolvent_sandwich(am, dm, s))
}

/// `∫_0^∞ (ρ+s)^{-1} ρ (ρ+s)^{-1} ds`, which equals the support projector of `ρ`.
pub fn quad_projector_integral(rho: &HermitianMatrix, scheme: &QuadratureScheme) -> Result<HermitianMatrix> {
    PsdSpectrum::new(rho, RankTolerance::for_dim(rho.dim()))?;
    let m = rho.as_matrix();
    accumulate(rho.dim(), scheme.half_line(), |s| resolvent_sandwich(m, m, s))
}

/// `S_a(ρ||σ)` from `(1/log a) ∫_0^∞ tr ρ[(ρ+s)^{-1} − (τ+s)^{-1}] ds`,
/// evaluated on the support of `ρ + σ`.
pub fn quad_tre(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64, scheme: &QuadratureScheme) -> Result<f64> {
    rho.as_hermitian().ensure_same_dim(sigma.as_hermitian())?;
    check_open("a", a, 0.0, 1.0, "(0, 1)")?;
    let joint = (rho.as_hermitian() + sigma.as_hermitian()).scale(0.5);
    let basis = PsdSpectrum::new(&joint, Tolerances::default().rank_for(rho.dim()))?.support_basis();
    let r = compress(rho.as_hermitian(), &basis);
    let s = compress(sigma.as_hermitian(), &basis);
    let tau = &r.scale(a) + &s.scale(1.0 - a);
    let (rm, tm) = (r.as_matrix(), tau.as_matrix());
    // resolvent identity: (ρ+s)^{-1} − (τ+s)^{-1} = (ρ+s)^{-1} (τ−ρ) (τ+s)^{-1}
    let diff = tm - rm;
    let mut acc = 0.0;
    for (sv, w) in scheme.half_line() {
        let lhs = rm * resolvent(rm, sv)?;
        let m = lhs * &diff * resolvent(tm, sv)?;
        acc += w * m.trace().re;
    }
    Ok(acc / a.ln())
}

/// Runs `f(weight, s)` over the two halves of the `dμ_p` integral
/// `(sin pπ/π) ∫_0^∞ s^{p−1} (…) ds`, with `s = v^{1/p}` on `[0,1]` and
/// `s = w^{−1/(1−p)}` on `[1,∞)` so that both pieces have bounded integrands.
/// The second piece passes `w^{1/(1−p)} = 1/s` instead of `s`.
fn power_measure_rule(p: f64, scheme: &QuadratureScheme, mut f: impl FnMut(f64, PowerPiece)) {
    let c = (p * std::f64::consts::PI).sin() / std::f64::consts::PI;
    let q = 1.0 / (1.0 - p);
    for (u, w) in scheme.unit_rule() {
        f(c * w / p, PowerPiece::Low { s: u.powf(1.0 / p) });
        f(c * w * q, PowerPiece::High { inv_s: u.powf(q) });
    }
}

#[derive(Clone, Copy)]
enum PowerPiece {
    Low { s: f64 },
    High { inv_s: f64 },
}

/// `x^p = (sin pπ/π) ∫_0^∞ s^{p−1} x/(x+s) ds` for `x ≥ 0`, `p ∈ (0,1)`.
pub fn quad_power(x: f64, p: f64, scheme: &QuadratureScheme) -> Result<f64> {
    check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "x",
            value: x,
            range: "[0, inf)",
        });
    }
    let mut acc = 0.0;
    power_measure_rule(p, scheme, |w, piece| {
        acc += w * match piece {
            PowerPiece::Low { s } => x / (x + s),
            // s^{p-1} ds = q s dw
            PowerPiece::High { inv_s } => x / (x * inv_s + 1.0),
        };
    });
    Ok(acc)
}

/// `T_{A;p}(Δ) = ∫ dμ_p(s) s (A+s)^{-1} Δ (A+s)^{-1}`.
pub fn quad_frechet_power(
    a: &HermitianMatrix,
    delta: &HermitianMatrix,
    p: f64,
    scheme: &QuadratureScheme,
) -> Result<HermitianMatrix> {
    a.ensure_same_dim(delta)?;
    check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    let n = a.dim();
    let (am, dm) = (a.as_matrix(), delta.as_matrix());
    let id = CMatrix::identity(n, n);
    let mut acc = CMatrix::zeros(n, n);
    let mut err = None;
    power_measure_rule(p, scheme, |w, piece| {
        if err.is_some() {
            return;
        }
        let term = match piece {
            PowerPiece::Low { s } => resolvent_sandwich(am, dm, s).map(|m| m * Complex64::new(s, 0.0)),
            // s² (A+s)^{-1} Δ (A+s)^{-1} = (A/s + 1)^{-1} Δ (A/s + 1)^{-1}
            PowerPiece::High { inv_s } => (am * Complex64::new(inv_s, 0.0) + &id)
                .try_inverse()
                .ok_or(Error::Singular(1.0 / inv_s))
                .map(|r| &r * dm * &r),
        };
        match term {
            Ok(t) => acc += t * Complex64::new(w, 0.0),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(to_hermitian(acc)),
    }
}

/// Matrix function whose Fréchet derivative is being checked.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrechetKind {
    Log,
    Power(f64),
}

/// `(f(A+hΔ) − f(A−hΔ)) / 2h`.
pub fn finite_diff_frechet(
    kind: FrechetKind,
    a: &HermitianMatrix,
    delta: &HermitianMatrix,
    h: f64,
) -> Result<HermitianMatrix> {
    a.ensure_same_dim(delta)?;
    check_open("h", h, 0.0, f64::INFINITY, "(0, inf)")?;
    let plus = a + &delta.scale(h);
    let minus = a - &delta.scale(h);
    for m in [&plus, &minus] {
        if spectral_decompose(m).lambda_min() <= 0.0 {
            return Err(Error::StepTooLarge { h });
        }
    }
    let f = |m: &HermitianMatrix| -> Result<HermitianMatrix> {
        match kind {
            FrechetKind::Log => matrix_log(m, Some(RankTolerance::absolute(0.0))),
            FrechetKind::Power(p) => {
                check_open("p", p, 0.0, 1.0, "(0, 1)")?;
                matrix_power(m, p, Some(RankTolerance::absolute(0.0)))
            }
        }
    };
    Ok((&f(&plus)? - &f(&minus)?).scale(0.5 / h))
}
