//! Density matrices: validation, constructors, the telescoping mix and
//! seeded random sampling.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_open, check_range, Error, Result};
use crate::matfun::{CMatrix, HermitianMatrix, PsdSpectrum, RankTolerance};

/// Allowed deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-10;

/// Default threshold on `tr ρσ` for orthogonality.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// A trace-one positive semidefinite Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let tol = RankTolerance::for_dim(h.dim());
        Self::with_tolerance(h, tol)
    }

    pub fn with_tolerance(h: HermitianMatrix, tol: RankTolerance) -> Result<Self> {
        let tr = h.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        PsdSpectrum::new(&h, tol)?;
        Ok(DensityMatrix(h))
    }

    /// Wraps an operator that is a state by construction (mixtures, normalized
    /// Gram matrices).
    pub(crate) fn trusted(h: HermitianMatrix) -> Self {
        DensityMatrix(h)
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(diag)?)
    }

    /// `(1 + x X + y Y + z Z)/2` for a Bloch vector of length at most 1.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if !r.is_finite() || r > 1.0 + TRACE_TOL {
            return Err(Error::ParameterOutOfRange {
                name: "bloch",
                value: r,
                range: "|r| <= 1",
            });
        }
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new((1.0 + z) / 2.0, 0.0),
                Complex64::new(x / 2.0, -y / 2.0),
                Complex64::new(x / 2.0, y / 2.0),
                Complex64::new((1.0 - z) / 2.0, 0.0),
            ],
        );
        Self::from_matrix(m)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(DensityMatrix(HermitianMatrix::identity(dim).scale(1.0 / dim as f64)))
    }

    /// `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::RankOutOfRange { rank: k, dim });
        }
        let mut d = vec![0.0; dim];
        d[k] = 1.0;
        Self::from_diagonal(&d)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.as_matrix()
    }

    pub fn spectrum(&self, tol: RankTolerance) -> PsdSpectrum {
        PsdSpectrum::assume_psd(&self.0, tol)
    }

    pub fn rank(&self) -> usize {
        self.spectrum(RankTolerance::for_dim(self.dim())).rank()
    }

    pub fn is_faithful(&self) -> bool {
        self.rank() == self.dim()
    }

    pub fn is_pure(&self) -> bool {
        self.rank() == 1
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0)
    }

    /// `tr ρσ`.
    pub fn overlap(&self, other: &DensityMatrix) -> Result<f64> {
        self.0.ensure_same_dim(&other.0)?;
        Ok(self.0.trace_product(&other.0))
    }
}

impl AsRef<HermitianMatrix> for DensityMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// Whether a parameter sits at an endpoint where the closed forms apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Zero,
    One,
    Interior,
}

impl Endpoint {
    pub fn of(x: f64) -> Self {
        if x == 0.0 {
            Endpoint::Zero
        } else if x == 1.0 {
            Endpoint::One
        } else {
            Endpoint::Interior
        }
    }
}

/// Mixing parameter `a ∈ [0,1]` and optional Rényi order `p ∈ [0,1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TelescopeParams {
    a: f64,
    p: Option<f64>,
}

impl TelescopeParams {
    pub fn new(a: f64, p: Option<f64>) -> Result<Self> {
        check_range("a", a, 0.0, 1.0, "[0, 1]")?;
        if let Some(p) = p {
            check_range("p", p, 0.0, 1.0, "[0, 1]")?;
        }
        Ok(Self { a, p })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn p(&self) -> Option<f64> {
        self.p
    }

    pub fn a_endpoint(&self) -> Endpoint {
        Endpoint::of(self.a)
    }

    pub fn p_endpoint(&self) -> Option<Endpoint> {
        self.p.map(Endpoint::of)
    }
}

/// Deterministic source of random states.
///
/// Every draw consumes one counter value; a draw is a function of
/// `(seed, counter)` only, so samplers can be replayed from any point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeededSampler {
    seed: u64,
    counter: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn at(seed: u64, counter: u64) -> Self {
        Self { seed, counter }
    }

    /// Per-trial sampler for parallel sweeps: `seed = master ^ trial`.
    pub fn for_trial(master_seed: u64, trial: u64) -> Self {
        Self::new(master_seed ^ trial)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_rng(&mut self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.counter);
        self.counter += 1;
        rng
    }

    pub fn uniform(&mut self) -> f64 {
        self.next_rng().random::<f64>()
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.next_rng().random_range(0..upper)
    }
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// `vv*/⟨v,v⟩`.
pub fn pure_from_vector(v: &[Complex64]) -> Result<DensityMatrix> {
    let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if v.is_empty() {
        return Err(Error::EmptyDimension);
    }
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::ZeroVector);
    }
    let col = DVector::from_column_slice(v);
    let m = (&col * col.adjoint()).scale(1.0 / norm2);
    Ok(DensityMatrix::trusted(HermitianMatrix::symmetrized(m)))
}

/// Two pure qubit states whose Bloch vectors enclose the angle `theta`; their
/// trace distance is `|sin(θ/2)|`.
pub fn qubit_pair_with_angle(theta: f64) -> (DensityMatrix, DensityMatrix) {
    let zero = Complex64::new(0.0, 0.0);
    let rho = pure_from_vector(&[Complex64::new(1.0, 0.0), zero]).expect("nonzero");
    let sigma = pure_from_vector(&[
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::new((theta / 2.0).sin(), 0.0),
    ])
    .expect("nonzero");
    (rho, sigma)
}

/// The canonical qubit pair at trace distance `t`: `ρ = |0⟩⟨0|` and
/// `σ = |ψ⟩⟨ψ|` with `ψ = (√(1−t²), t)`.
pub fn pure_pair_with_distance(t: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    check_range("t", t, 0.0, 1.0, "[0, 1]")?;
    let zero = Complex64::new(0.0, 0.0);
    let rho = pure_from_vector(&[Complex64::new(1.0, 0.0), zero])?;
    let sigma = pure_from_vector(&[Complex64::new((1.0 - t * t).sqrt(), 0.0), Complex64::new(t, 0.0)])?;
    Ok((rho, sigma))
}

/// `aρ + (1−a)σ`.
pub fn telescope_mix(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<DensityMatrix> {
    rho.0.ensure_same_dim(&sigma.0)?;
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    if a == 1.0 {
        return Ok(rho.clone());
    }
    if a == 0.0 {
        return Ok(sigma.clone());
    }
    Ok(DensityMatrix::trusted(&rho.0.scale(a) + &sigma.0.scale(1.0 - a)))
}

/// `tr ρσ ≤ tol`.
pub fn is_orthogonal_with(rho: &DensityMatrix, sigma: &DensityMatrix, tol: f64) -> Result<bool> {
    Ok(rho.overlap(sigma)? <= tol)
}

pub fn is_orthogonal(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<bool> {
    is_orthogonal_with(rho, sigma, ORTHOGONALITY_TOL)
}

/// Haar-distributed pure state.
pub fn haar_random_pure(dim: usize, sampler: &mut SeededSampler) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut rng = sampler.next_rng();
    let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
    pure_from_vector(&v)
}

/// Hilbert–Schmidt (induced Ginibre) random state of the given rank:
/// `GG*/tr(GG*)` with `G` a `dim × rank` complex Gaussian matrix.
pub fn random_mixed_hs(dim: usize, rank: usize, sampler: &mut SeededSampler) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let mut rng = sampler.next_rng();
    let g = ginibre(dim, rank, &mut rng);
    let m = &g * g.adjoint();
    let tr: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
    Ok(DensityMatrix::trusted(HermitianMatrix::symmetrized(m.scale(1.0 / tr))))
}

/// `(G + G*)/2` for a complex Gaussian `G`.
pub fn random_hermitian(dim: usize, sampler: &mut SeededSampler) -> Result<HermitianMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut rng = sampler.next_rng();
    Ok(HermitianMatrix::symmetrized(ginibre(dim, dim, &mut rng)))
}

/// `GG*/dim + shift·I`, positive definite with smallest eigenvalue at least
/// `shift`.
pub fn random_positive_definite(dim: usize, shift: f64, sampler: &mut SeededSampler) -> Result<HermitianMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    check_open("shift", shift, 0.0, f64::INFINITY, "(0, inf)")?;
    let mut rng = sampler.next_rng();
    let g = ginibre(dim, dim, &mut rng);
    let m = (&g * g.adjoint()).scale(1.0 / dim as f64) + CMatrix::identity(dim, dim).scale(shift);
    Ok(HermitianMatrix::symmetrized(m))
}

/// Haar random unitary (QR of a Ginibre matrix with the phase of `R`'s
/// diagonal divided out).
pub fn random_unitary(dim: usize, sampler: &mut SeededSampler) -> Result<CMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut rng = sampler.next_rng();
    let qr = ginibre(dim, dim, &mut rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// A pair with `tr ρσ = 0`: HS-random states on complementary random
/// subspaces of dimensions `rank_rho` and `rank_sigma`.
pub fn random_orthogonal_pair(
    dim: usize,
    rank_rho: usize,
    rank_sigma: usize,
    sampler: &mut SeededSampler,
) -> Result<(DensityMatrix, DensityMatrix)> {
    if rank_rho == 0 || rank_sigma == 0 || rank_rho + rank_sigma > dim {
        return Err(Error::RankOutOfRange {
            rank: rank_rho + rank_sigma,
            dim,
        });
    }
    let u = random_unitary(dim, sampler)?;
    let embed = |offset: usize, k: usize, sampler: &mut SeededSampler| -> Result<DensityMatrix> {
        let small = random_mixed_hs(k, k, sampler)?;
        let v = u.columns(offset, k).into_owned();
        let m = &v * small.matrix() * v.adjoint();
        Ok(DensityMatrix::trusted(HermitianMatrix::symmetrized(m)))
    };
    let rho = embed(0, rank_rho, sampler)?;
    let sigma = embed(rank_rho, rank_sigma, sampler)?;
    Ok((rho, sigma))
}
