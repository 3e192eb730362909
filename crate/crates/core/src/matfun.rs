//! Hermitian spectral toolkit.
//!
//! Every matrix function in the crate goes through [`SpectralDecomposition`]:
//! `f(H) = U diag(f(λ)) U*`. Supports, positive parts and trace norms are read
//! off the spectrum, and the Fréchet derivatives of `log` and `x^p` are
//! realized by divided differences in the eigenbasis (Daleckii–Krein).

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Maximum tolerated `|H_ij - conj(H_ji)|`, relative to `max(1, max |H_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative gap below which divided differences fall back to the derivative
/// at the midpoint.
pub const DIVIDED_DIFFERENCE_GAP: f64 = 1e-8;

/// Multiple of `dim * 2^-52` used by the default rank tolerance.
pub const RANK_EPSILON_FACTOR: f64 = 10.0;

/// A square complex matrix equal to its conjugate transpose.
///
/// The constructor checks Hermiticity within [`HERMITIAN_TOL`] and then stores
/// the exactly symmetrized matrix `(H + H*)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut scale = 1.0f64;
        for j in 0..cols {
            for i in 0..rows {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite(i, j));
                }
                scale = scale.max(z.norm());
            }
        }
        let tol = HERMITIAN_TOL * scale;
        for i in 0..rows {
            for j in i..cols {
                let deviation = (m[(i, j)] - m[(j, i)].conj()).norm();
                if deviation > tol {
                    return Err(Error::NotHermitian { i, j, deviation });
                }
            }
        }
        Ok(Self::symmetrized(m))
    }

    /// Builds from a matrix that is Hermitian up to roundoff, without checks.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        HermitianMatrix((m + adj).scale(0.5))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if let Some(i) = diag.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i, i));
        }
        let n = diag.len();
        Ok(HermitianMatrix(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })))
    }

    /// Row-major `(re, im)` entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(dim * dim, entries.len()));
        }
        Self::new(CMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix(CMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    /// `Re tr(AB)`; exact for Hermitian `A`, `B` since the trace is real.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let z = self.0[(i, j)] * other.0[(j, i)];
                acc += z.re;
            }
        }
        acc
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    pub fn scale(&self, factor: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(factor))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        spectral_decompose(self).eigenvalues
    }

    pub(crate) fn ensure_same_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

impl AsRef<HermitianMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        self
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

/// Eigenvalues (ascending) and a unitary whose columns are the matching
/// eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("dim >= 1")
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.lambda_max().abs().max(self.lambda_min().abs())
    }

    /// `U diag(values) U*`.
    pub fn synthesize(&self, values: &[f64]) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let n = self.dim();
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
        HermitianMatrix::symmetrized(&scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.synthesize(&self.eigenvalues)
    }

    /// `U* X U`.
    pub fn to_eigenbasis(&self, x: &HermitianMatrix) -> CMatrix {
        self.eigenvectors.adjoint() * x.as_matrix() * &self.eigenvectors
    }

    /// `U Y U*`.
    pub fn from_eigenbasis(&self, y: &CMatrix) -> HermitianMatrix {
        HermitianMatrix::symmetrized(&self.eigenvectors * y * self.eigenvectors.adjoint())
    }

    /// Diagonal of `U* X U`: the weights `<u_k|X|u_k>`.
    pub fn diagonal_weights(&self, x: &HermitianMatrix) -> Vec<f64> {
        let u = &self.eigenvectors;
        let xu = x.as_matrix() * u;
        (0..self.dim())
            .map(|k| {
                let mut acc = 0.0;
                for i in 0..self.dim() {
                    acc += (u[(i, k)].conj() * xu[(i, k)]).re;
                }
                acc
            })
            .collect()
    }
}

pub fn spectral_decompose(h: &HermitianMatrix) -> SpectralDecomposition {
    let eig = SymmetricEigen::new(h.as_matrix().clone());
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    Absolute,
    RelativeToMax,
}

/// Threshold separating the numerical support of a PSD operator from its
/// kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankTolerance {
    pub epsilon_rank: f64,
    pub mode: RankMode,
}

impl RankTolerance {
    pub fn absolute(epsilon_rank: f64) -> Self {
        Self {
            epsilon_rank: epsilon_rank.max(0.0),
            mode: RankMode::Absolute,
        }
    }

    pub fn relative(epsilon_rank: f64) -> Self {
        Self {
            epsilon_rank: epsilon_rank.max(0.0),
            mode: RankMode::RelativeToMax,
        }
    }

    /// `10 * dim * 2^-52 * λ_max`. The eigensolver leaves kernel eigenvalues
    /// of up to about `3.3 * 2^-52 * λ_max` in dimensions 2 to 8.
    pub fn for_dim(dim: usize) -> Self {
        Self::relative(RANK_EPSILON_FACTOR * dim as f64 * f64::EPSILON)
    }

    pub fn threshold(&self, lambda_max: f64) -> f64 {
        match self.mode {
            RankMode::Absolute => self.epsilon_rank,
            RankMode::RelativeToMax => self.epsilon_rank * lambda_max.max(0.0),
        }
    }

    fn resolve(tol: Option<RankTolerance>, dim: usize) -> RankTolerance {
        tol.unwrap_or_else(|| Self::for_dim(dim))
    }
}

/// Numerical tolerances shared by the entropy functionals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// `None` selects [`RankTolerance::for_dim`].
    pub rank: Option<RankTolerance>,
    /// `tr ρ(1 - {σ})` above this makes `S(ρ||σ)` infinite.
    pub support: f64,
    /// `tr ρσ` at or below this counts as orthogonal.
    pub orthogonality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: None,
            support: 1e-10,
            orthogonality: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn rank_for(&self, dim: usize) -> RankTolerance {
        RankTolerance::resolve(self.rank, dim)
    }
}

/// Spectrum of a PSD operator with roundoff-negative eigenvalues clamped to 0
/// and everything at or below the rank threshold flagged as kernel.
#[derive(Clone, Debug)]
pub struct PsdSpectrum {
    pub decomposition: SpectralDecomposition,
    pub threshold: f64,
}

impl PsdSpectrum {
    pub fn new(a: &HermitianMatrix, tol: RankTolerance) -> Result<Self> {
        let decomposition = spectral_decompose(a);
        let threshold = tol.threshold(decomposition.lambda_max());
        let min = decomposition.lambda_min();
        if min < -threshold {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: min,
                tolerance: threshold,
            });
        }
        Ok(Self {
            decomposition,
            threshold,
        })
    }

    /// Like [`PsdSpectrum::new`] for operators that are PSD by construction:
    /// every eigenvalue at or below the threshold is kernel, however negative.
    pub fn assume_psd(a: &HermitianMatrix, tol: RankTolerance) -> Self {
        let decomposition = spectral_decompose(a);
        let threshold = tol.threshold(decomposition.lambda_max());
        Self {
            decomposition,
            threshold,
        }
    }

    pub fn in_support(&self, lambda: f64) -> bool {
        lambda > self.threshold
    }

    /// Eigenvalues with kernel entries set to exactly 0.
    pub fn clamped(&self) -> Vec<f64> {
        self.decomposition
            .eigenvalues()
            .iter()
            .map(|&l| if self.in_support(l) { l } else { 0.0 })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.decomposition
            .eigenvalues()
            .iter()
            .filter(|&&l| self.in_support(l))
            .count()
    }

    pub fn projector(&self) -> HermitianMatrix {
        let ind: Vec<f64> = self
            .decomposition
            .eigenvalues()
            .iter()
            .map(|&l| if self.in_support(l) { 1.0 } else { 0.0 })
            .collect();
        self.decomposition.synthesize(&ind)
    }

    /// `dim × rank` isometry onto the support.
    pub fn support_basis(&self) -> CMatrix {
        let u = self.decomposition.eigenvectors();
        let cols: Vec<usize> = (0..self.decomposition.dim())
            .filter(|&k| self.in_support(self.decomposition.eigenvalues()[k]))
            .collect();
        CMatrix::from_fn(u.nrows(), cols.len(), |i, j| u[(i, cols[j])])
    }

    /// Spectral power with `0^p = 0` for `p > 0` and `x^0 = {x}`.
    pub fn power(&self, p: f64) -> HermitianMatrix {
        let vals: Vec<f64> = self
            .decomposition
            .eigenvalues()
            .iter()
            .map(|&l| if self.in_support(l) { l.powf(p) } else { 0.0 })
            .collect();
        self.decomposition.synthesize(&vals)
    }
}

/// `f(H)` through the spectrum. Fails if `f` is not finite at an eigenvalue.
pub fn matrix_function(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let d = spectral_decompose(h);
    apply_function(&d, "f", f)
}

fn apply_function(d: &SpectralDecomposition, name: &'static str, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let mut vals = Vec::with_capacity(d.dim());
    for &l in d.eigenvalues() {
        let v = f(l);
        if !v.is_finite() {
            return Err(Error::FunctionUndefined {
                function: name,
                eigenvalue: l,
            });
        }
        vals.push(v);
    }
    Ok(d.synthesize(&vals))
}

/// Matrix logarithm of a positive definite operator. Eigenvalues at or below
/// the rank threshold are rejected rather than mapped to `-inf`.
pub fn matrix_log(h: &HermitianMatrix, tol: Option<RankTolerance>) -> Result<HermitianMatrix> {
    let d = spectral_decompose(h);
    let thr = RankTolerance::resolve(tol, h.dim()).threshold(d.lambda_max());
    if d.lambda_min() <= thr {
        return Err(Error::FunctionUndefined {
            function: "log",
            eigenvalue: d.lambda_min(),
        });
    }
    apply_function(&d, "log", f64::ln)
}

pub fn matrix_exp(h: &HermitianMatrix) -> HermitianMatrix {
    let d = spectral_decompose(h);
    let vals: Vec<f64> = d.eigenvalues().iter().map(|l| l.exp()).collect();
    d.synthesize(&vals)
}

/// `A^p` for PSD `A`, `p ≥ 0`, with the support conventions of [`PsdSpectrum::power`].
pub fn matrix_power(a: &HermitianMatrix, p: f64, tol: Option<RankTolerance>) -> Result<HermitianMatrix> {
    crate::error::check_range("p", p, 0.0, f64::INFINITY, "[0, inf)")?;
    Ok(PsdSpectrum::new(a, RankTolerance::resolve(tol, a.dim()))?.power(p))
}

/// Orthogonal projector onto the support of a PSD operator.
pub fn support_projector(a: &HermitianMatrix, tol: RankTolerance) -> Result<HermitianMatrix> {
    Ok(PsdSpectrum::new(a, tol)?.projector())
}

/// `V* A V` for an isometry `V` (columns orthonormal); with `V` the support
/// basis of `X` this is the compression of `A` to the support of `X`.
pub fn compress(a: &HermitianMatrix, basis: &CMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrized(basis.adjoint() * a.as_matrix() * basis)
}

/// `(X + |X|)/2`.
pub fn positive_part(x: &HermitianMatrix) -> HermitianMatrix {
    let d = spectral_decompose(x);
    let vals: Vec<f64> = d.eigenvalues().iter().map(|&l| l.max(0.0)).collect();
    d.synthesize(&vals)
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(x: &HermitianMatrix) -> f64 {
    spectral_decompose(x).eigenvalues().iter().map(|l| l.abs()).sum()
}

/// `T(ρ,σ) = ½‖ρ − σ‖₁`.
pub fn trace_norm_distance<A, B>(rho: &A, sigma: &B) -> Result<f64>
where
    A: AsRef<HermitianMatrix> + ?Sized,
    B: AsRef<HermitianMatrix> + ?Sized,
{
    let (r, s) = (rho.as_ref(), sigma.as_ref());
    r.ensure_same_dim(s)?;
    Ok(0.5 * trace_norm(&(r - s)))
}

/// `(log x − log y)/(x − y)`, and `1/x` on the diagonal.
pub fn log_divided_difference(x: f64, y: f64) -> f64 {
    let gap = x - y;
    if gap.abs() < DIVIDED_DIFFERENCE_GAP * x.max(y) {
        return 2.0 / (x + y);
    }
    // ln(x/y) = ln1p((x-y)/y) keeps digits when x and y are close.
    (gap / y).ln_1p() / gap
}

/// `(x^p − y^p)/(x − y)`, and `p x^{p−1}` on the diagonal.
pub fn power_divided_difference(x: f64, y: f64, p: f64) -> f64 {
    let gap = x - y;
    if gap.abs() < DIVIDED_DIFFERENCE_GAP * x.max(y) {
        return p * (0.5 * (x + y)).powf(p - 1.0);
    }
    y.powf(p) * (p * (gap / y).ln_1p()).exp_m1() / gap
}

fn full_rank_spectrum(a: &HermitianMatrix, tol: Option<RankTolerance>) -> Result<SpectralDecomposition> {
    let d = spectral_decompose(a);
    let thr = RankTolerance::resolve(tol, a.dim()).threshold(d.lambda_max());
    if d.lambda_min() <= thr {
        return Err(Error::RankDeficient {
            eigenvalue: d.lambda_min(),
        });
    }
    Ok(d)
}

/// Applies `Δ ↦ U (G ∘ U*ΔU) U*` with `G_ij = g(λ_i, λ_j)`.
pub fn divided_difference_map(
    d: &SpectralDecomposition,
    delta: &HermitianMatrix,
    g: impl Fn(f64, f64) -> f64,
) -> Result<HermitianMatrix> {
    if d.dim() != delta.dim() {
        return Err(Error::DimensionMismatch(d.dim(), delta.dim()));
    }
    let mut t = d.to_eigenbasis(delta);
    let l = d.eigenvalues();
    for i in 0..d.dim() {
        for j in 0..d.dim() {
            t[(i, j)] *= g(l[i], l[j]);
        }
    }
    Ok(d.from_eigenbasis(&t))
}

/// Fréchet derivative of the matrix logarithm at a positive definite `A` in
/// direction `Δ`: `d/dt log(A + tΔ)` at `t = 0`.
pub fn frechet_log_map(
    a: &HermitianMatrix,
    delta: &HermitianMatrix,
    tol: Option<RankTolerance>,
) -> Result<HermitianMatrix> {
    let d = full_rank_spectrum(a, tol)?;
    divided_difference_map(&d, delta, log_divided_difference)
}

/// Fréchet derivative of `x ↦ x^p`, `0 < p < 1`, at a positive definite `A`.
pub fn frechet_power_map(
    a: &HermitianMatrix,
    delta: &HermitianMatrix,
    p: f64,
    tol: Option<RankTolerance>,
) -> Result<HermitianMatrix> {
    crate::error::check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    let d = full_rank_spectrum(a, tol)?;
    divided_difference_map(&d, delta, |x, y| power_divided_difference(x, y, p))
}

/// Largest entry modulus of `A − B`.
pub fn max_abs_diff(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    (a - b).max_abs()
}
