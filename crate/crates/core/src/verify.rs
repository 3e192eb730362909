//! Randomized verification of the inequalities and identities satisfied by
//! the telescopic quantities.
//!
//! Every check returns a signed margin, positive when the inequality holds.
//! [`run_fuzz`] sweeps stratified random pairs over dimensions and parameter
//! grids and keeps the worst case of every check as a replayable witness.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{self, check_open, Error, Result};
use crate::matfun::{trace_norm_distance, HermitianMatrix, Tolerances};
use crate::renyi::{renyi_overlap_telescoped, trre};
use crate::statefile::{matrix_to_rows, rows_to_matrix, ComplexRows};
use crate::states::{
    haar_random_pure, is_orthogonal, random_mixed_hs, random_orthogonal_pair, DensityMatrix, SeededSampler,
};
use crate::tre::{
    binary_entropy, holevo_two, holevo_two_via_relative_entropies, psd_spectrum, relative_entropy_to_mix,
    telescopic_relative_entropy, tre_limit_one, tre_limit_zero,
};

pub const DEFAULT_SLACK: f64 = 1e-9;
/// Margins below this are counted as near-equality cases.
pub const TIGHT_THRESHOLD: f64 = 1e-4;
/// Allowed gap between extrapolated and closed-form limits.
pub const LIMIT_TOLERANCE: f64 = 1e-3;
/// Non-orthogonal pairs must keep `S_a` at least this far below 1.
pub const MAXIMALITY_SEPARATION: f64 = 2.0 * DEFAULT_SLACK;
/// Lower bound on the `a → 1` sample scale; keeps `1 − a ≥ 1e-8` so that
/// `S(ρ||τ)/(1 − a)` stays well above rounding.
pub const LIMIT_ONE_SCALE_FLOOR: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Range,
    UpperT,
    LowerPinsker,
    RawBound,
    Holevo,
    HolevoPaths,
    Maximality,
    TrreBound,
    RenyiOverlap,
    JointConvexity,
    LimitZero,
    LimitOne,
    LimitCauchy,
}

impl CheckKind {
    pub const ALL: [CheckKind; 13] = [
        CheckKind::Range,
        CheckKind::UpperT,
        CheckKind::LowerPinsker,
        CheckKind::RawBound,
        CheckKind::Holevo,
        CheckKind::HolevoPaths,
        CheckKind::Maximality,
        CheckKind::TrreBound,
        CheckKind::RenyiOverlap,
        CheckKind::JointConvexity,
        CheckKind::LimitZero,
        CheckKind::LimitOne,
        CheckKind::LimitCauchy,
    ];

    fn state_count(self) -> usize {
        if self == CheckKind::JointConvexity {
            4
        } else {
            2
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    Faithful,
    RankDeficient,
    Pure,
    Orthogonal,
}

/// Scalar inputs of a check besides the states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Mixing weight of the first pair in the joint convexity check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

impl CheckParams {
    fn a(&self) -> Result<f64> {
        self.a.ok_or(Error::MissingParameter("a"))
    }
    fn p(&self) -> Result<f64> {
        self.p.ok_or(Error::MissingParameter("p"))
    }
    fn weight(&self) -> Result<f64> {
        self.weight.ok_or(Error::MissingParameter("weight"))
    }
}

/// Serialized inputs of a check evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: CheckKind,
    pub stratum: Stratum,
    pub dim: usize,
    pub trial: u64,
    /// Seed of the trial's sampler.
    pub seed: u64,
    pub params: CheckParams,
    /// `ρ, σ` and, for joint convexity, the second pair.
    pub states: Vec<ComplexRows>,
    /// `None` when the evaluation raised an error.
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Witness {
    pub fn density_matrices(&self) -> Result<Vec<DensityMatrix>> {
        self.states
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let m = rows_to_matrix(rows, &format!("states[{k}]"))?;
                DensityMatrix::new(HermitianMatrix::new(m)?)
            })
            .collect()
    }

    /// Re-runs the recorded check.
    pub fn replay(&self) -> Result<f64> {
        evaluate(self.check, &self.density_matrices()?, &self.params)
    }
}

/// Sweep configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub dims: Vec<usize>,
    pub trials: u64,
    pub a_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    pub seed: u64,
    pub slack: f64,
    pub include_rank_deficient: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4],
            trials: 1000,
            a_grid: vec![0.0, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1.0],
            p_grid: vec![0.1, 0.25, 0.5, 0.75, 0.9],
            seed: 0,
            slack: DEFAULT_SLACK,
            include_rank_deficient: true,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::MissingParameter("dims"));
        }
        for &d in &self.dims {
            if d < 2 {
                return Err(Error::ParameterOutOfRange {
                    name: "dims",
                    value: d as f64,
                    range: "[2, inf)",
                });
            }
        }
        if self.trials == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "trials",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        for &a in &self.a_grid {
            error::check_range("a_grid", a, 0.0, 1.0, "[0, 1]")?;
        }
        for &p in &self.p_grid {
            check_open("p_grid", p, 0.0, 1.0, "(0, 1)")?;
        }
        if !self.slack.is_finite() {
            return Err(Error::ParameterOutOfRange {
                name: "slack",
                value: self.slack,
                range: "finite",
            });
        }
        Ok(())
    }

    fn strata(&self) -> &'static [Stratum] {
        if self.include_rank_deficient {
            &[
                Stratum::Faithful,
                Stratum::RankDeficient,
                Stratum::Pure,
                Stratum::Orthogonal,
            ]
        } else {
            &[Stratum::Faithful]
        }
    }
}

/// Aggregate of one check over a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: CheckKind,
    pub trials: u64,
    pub failures: u64,
    pub errors: u64,
    /// Evaluations with margin in `[−slack, TIGHT_THRESHOLD)`.
    pub tight: u64,
    /// `None` if any evaluation raised an error.
    pub worst_margin: Option<f64>,
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: FuzzConfig,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn check(&self, kind: CheckKind) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == kind)
    }
}

fn tre(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<f64> {
    telescopic_relative_entropy(rho, sigma, a)
}

/// `min(S_a, 1 − S_a)`.
pub fn check_range(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<f64> {
    let s = tre(rho, sigma, a)?;
    Ok(s.min(1.0 - s))
}

/// `T − S_a`.
pub fn check_upper_t(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<f64> {
    Ok(trace_norm_distance(rho, sigma)? - tre(rho, sigma, a)?)
}

/// `S_a − 2(1−a)²T²/(−log a)`; the bound vanishes at both endpoints.
pub fn check_lower_pinsker(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<f64> {
    let s = tre(rho, sigma, a)?;
    if a == 0.0 || a == 1.0 {
        return Ok(s);
    }
    let t = trace_norm_distance(rho, sigma)?;
    Ok(s - 2.0 * (1.0 - a).powi(2) * t * t / -a.ln())
}

/// `−log(a)·T − S(ρ||aρ+(1−a)σ)` for `a ∈ (0,1)`.
pub fn check_raw_bound(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<f64> {
    check_open("a", a, 0.0, 1.0, "(0, 1)")?;
    Ok(-a.ln() * trace_norm_distance(rho, sigma)? - relative_entropy_to_mix(rho, sigma, a)?)
}

/// `h(p)·T − χ`.
pub fn check_holevo(p: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(binary_entropy(p) * trace_norm_distance(rho, sigma)? - holevo_two(p, rho, sigma)?)
}

/// `−|χ_entropies − χ_relative|`.
pub fn check_holevo_paths(p: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(-(holevo_two(p, rho, sigma)? - holevo_two_via_relative_entropies(p, rho, sigma)?).abs())
}

/// Orthogonal pairs: `S_a − 1`. Other pairs: `1 − S_a − MAXIMALITY_SEPARATION`.
pub fn check_maximality(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> Result<f64> {
    let s = tre(rho, sigma, a)?;
    if is_orthogonal(rho, sigma)? {
        Ok(s - 1.0)
    } else {
        Ok(1.0 - s - MAXIMALITY_SEPARATION)
    }
}

/// `T − Q_{p,a}`.
pub fn check_trre_bound(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64, a: f64) -> Result<f64> {
    Ok(trace_norm_distance(rho, sigma)? - trre(rho, sigma, p, a)?)
}

/// `min(o − a^p, 1 − o)` with `o = tr ρ^{1−p}τ^p`.
pub fn check_renyi_overlap(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64, a: f64) -> Result<f64> {
    let o = renyi_overlap_telescoped(rho, sigma, p, a)?;
    Ok((o - a.powf(p)).min(1.0 - o))
}

/// `w S_a(ρ₁||σ₁) + (1−w) S_a(ρ₂||σ₂) − S_a(wρ₁+(1−w)ρ₂ || wσ₁+(1−w)σ₂)`.
pub fn check_joint_convexity(
    first: (&DensityMatrix, &DensityMatrix),
    second: (&DensityMatrix, &DensityMatrix),
    w: f64,
    a: f64,
) -> Result<f64> {
    error::check_range("weight", w, 0.0, 1.0, "[0, 1]")?;
    let mix = |x: &DensityMatrix, y: &DensityMatrix| {
        DensityMatrix::trusted(&x.as_hermitian().scale(w) + &y.as_hermitian().scale(1.0 - w))
    };
    let rho = mix(first.0, second.0);
    let sigma = mix(first.1, second.1);
    Ok(w * tre(first.0, first.1, a)? + (1.0 - w) * tre(second.0, second.1, a)? - tre(&rho, &sigma, a)?)
}

/// Extrapolated and closed-form value of a limit, with the samples used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub closed_form: f64,
    pub extrapolated: f64,
    /// `(a, S_a)` in order of approach.
    pub samples: Vec<(f64, f64)>,
}

impl LimitEstimate {
    pub fn error(&self) -> f64 {
        (self.extrapolated - self.closed_form).abs()
    }
}

/// Eigenvalues below this are treated as rounding noise when choosing the
/// sample points of the limit extrapolation.
pub const LIMIT_NOISE_FLOOR: f64 = 1e-12;

/// Length scale for the sample points: the smallest eigenvalue in the
/// supports of `ρ`, `σ` and `(ρ+σ)/2` above [`LIMIT_NOISE_FLOOR`], capped at 1.
fn limit_scale(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let tol = Tolerances::default();
    let joint = DensityMatrix::trusted((rho.as_hermitian() + sigma.as_hermitian()).scale(0.5));
    [rho, sigma, &joint]
        .into_iter()
        .flat_map(|x| {
            let spec = psd_spectrum(x, &tol);
            spec.decomposition
                .eigenvalues()
                .iter()
                .copied()
                .filter(|&l| spec.in_support(l) && l > LIMIT_NOISE_FLOOR)
                .collect::<Vec<_>>()
        })
        .fold(1.0, f64::min)
}

fn solve(rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    // equilibrate columns before the LU solve
    let scale: Vec<f64> = (0..n)
        .map(|j| rows.iter().map(|r| r[j].abs()).fold(0.0, f64::max))
        .collect();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j] / scale[j]);
    let x = m.lu().solve(&DVector::from_vec(rhs))?;
    Some(x.iter().zip(&scale).map(|(x, s)| x / s).collect())
}

/// `a → 0⁺`: fits `S(ρ||τ_a) ≈ S₀·(−log a) + c₀ + c₁a + c₂a·log a` through
/// four log-spaced points and reads off `S₀`.
///
/// The points start at `10⁻² · scale`. When `τ_a` cannot resolve the support
/// of `ρ` at some point the scale is raised a decade at a time; at scale 1 the
/// fit falls back to the resolvable prefix of the points with as many basis
/// functions.
pub fn extrapolate_limit_zero(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<LimitEstimate> {
    let mut sc = limit_scale(rho, sigma);
    let (samples, raws) = loop {
        let mut samples = Vec::with_capacity(4);
        let mut raws = Vec::with_capacity(4);
        let mut failure = None;
        for k in 0..4 {
            let a = 1e-2 * sc * 10f64.powi(-k);
            match relative_entropy_to_mix(rho, sigma, a) {
                Ok(raw) => {
                    samples.push((a, raw / -a.ln()));
                    raws.push(raw);
                }
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        match failure {
            None => break (samples, raws),
            Some(_) if sc < 1.0 => sc = (sc * 10.0).min(1.0),
            Some(e) if samples.len() < 2 => return Err(e),
            Some(_) => break (samples, raws),
        }
    };
    let n = samples.len();
    let rows = samples
        .iter()
        .map(|&(a, _)| {
            let l = -a.ln();
            [l, 1.0, a, -a * l][..n].to_vec()
        })
        .collect();
    let coef = solve(rows, raws).ok_or(Error::Singular(sc))?;
    Ok(LimitEstimate {
        closed_form: tre_limit_zero(rho, sigma)?,
        extrapolated: coef[0],
        samples,
    })
}

/// `a → 1⁻`: quadratic extrapolation of `S_{1−b}` in `b` to `b = 0`.
pub fn extrapolate_limit_one(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<LimitEstimate> {
    let sc = limit_scale(rho, sigma).max(LIMIT_ONE_SCALE_FLOOR);
    let bs: Vec<f64> = (0..3).map(|k| 1e-2 * sc * 10f64.powi(-k)).collect();
    let mut samples = Vec::with_capacity(bs.len());
    for &b in &bs {
        let a = 1.0 - b;
        samples.push((a, tre(rho, sigma, a)?));
    }
    // Lagrange interpolation evaluated at b = 0
    let mut extrapolated = 0.0;
    for (k, &(_, y)) in samples.iter().enumerate() {
        let mut l = 1.0;
        for (j, &bj) in bs.iter().enumerate() {
            if j != k {
                l *= -bj / (bs[k] - bj);
            }
        }
        extrapolated += y * l;
    }
    Ok(LimitEstimate {
        closed_form: tre_limit_one(rho, sigma)?,
        extrapolated,
        samples,
    })
}

/// `LIMIT_TOLERANCE − |extrapolated − S₀|`.
pub fn check_limit_zero(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(LIMIT_TOLERANCE - extrapolate_limit_zero(rho, sigma)?.error())
}

/// `LIMIT_TOLERANCE − |extrapolated − S₁|`.
pub fn check_limit_one(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(LIMIT_TOLERANCE - extrapolate_limit_one(rho, sigma)?.error())
}

/// Cauchy differences `d_k = S(x_{k+1}) − S(x_k)` of the sampled sequences
/// toward both endpoints may not grow by more than [`LIMIT_TOLERANCE`]:
/// margin `LIMIT_TOLERANCE − max_k (|d_{k+1}| − |d_k|)`.
pub fn check_limit_cauchy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let mut growth = f64::NEG_INFINITY;
    for est in [extrapolate_limit_zero(rho, sigma)?, extrapolate_limit_one(rho, sigma)?] {
        let d: Vec<f64> = est.samples.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
        for w in d.windows(2) {
            growth = growth.max(w[1] - w[0]);
        }
    }
    Ok(LIMIT_TOLERANCE - growth.max(0.0))
}

/// Dispatches a check by kind; used for witness replay.
pub fn evaluate(kind: CheckKind, states: &[DensityMatrix], params: &CheckParams) -> Result<f64> {
    if states.len() < kind.state_count() {
        return Err(Error::MissingParameter("states"));
    }
    let (r, s) = (&states[0], &states[1]);
    match kind {
        CheckKind::Range => check_range(r, s, params.a()?),
        CheckKind::UpperT => check_upper_t(r, s, params.a()?),
        CheckKind::LowerPinsker => check_lower_pinsker(r, s, params.a()?),
        CheckKind::RawBound => check_raw_bound(r, s, params.a()?),
        CheckKind::Holevo => check_holevo(params.p()?, r, s),
        CheckKind::HolevoPaths => check_holevo_paths(params.p()?, r, s),
        CheckKind::Maximality => check_maximality(r, s, params.a()?),
        CheckKind::TrreBound => check_trre_bound(r, s, params.p()?, params.a()?),
        CheckKind::RenyiOverlap => check_renyi_overlap(r, s, params.p()?, params.a()?),
        CheckKind::JointConvexity => {
            check_joint_convexity((r, s), (&states[2], &states[3]), params.weight()?, params.a()?)
        }
        CheckKind::LimitZero => check_limit_zero(r, s),
        CheckKind::LimitOne => check_limit_one(r, s),
        CheckKind::LimitCauchy => check_limit_cauchy(r, s),
    }
}

/// Draws a pair from the stratum.
pub fn sample_pair(
    stratum: Stratum,
    dim: usize,
    sampler: &mut SeededSampler,
) -> Result<(DensityMatrix, DensityMatrix)> {
    match stratum {
        Stratum::Faithful => Ok((random_mixed_hs(dim, dim, sampler)?, random_mixed_hs(dim, dim, sampler)?)),
        Stratum::RankDeficient => {
            let r1 = 1 + sampler.index(dim);
            let r2 = if r1 == dim {
                1 + sampler.index(dim - 1)
            } else {
                1 + sampler.index(dim)
            };
            Ok((random_mixed_hs(dim, r1, sampler)?, random_mixed_hs(dim, r2, sampler)?))
        }
        Stratum::Pure => Ok((haar_random_pure(dim, sampler)?, haar_random_pure(dim, sampler)?)),
        Stratum::Orthogonal => {
            let r1 = 1 + sampler.index(dim - 1);
            let r2 = 1 + sampler.index(dim - r1);
            random_orthogonal_pair(dim, r1, r2, sampler)
        }
    }
}

#[derive(Clone, Debug)]
struct Worst {
    margin: f64,
    /// (trial, sequence number within the trial): total order for ties.
    key: (u64, u64),
    witness: Witness,
}

#[derive(Clone, Debug, Default)]
struct Accumulator {
    evaluations: u64,
    failures: u64,
    errors: u64,
    tight: u64,
    worst: Option<Worst>,
}

impl Accumulator {
    fn merge(mut self, other: Accumulator) -> Accumulator {
        self.evaluations += other.evaluations;
        self.failures += other.failures;
        self.errors += other.errors;
        self.tight += other.tight;
        self.worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => {
                let ord = a.margin.total_cmp(&b.margin).then(a.key.cmp(&b.key));
                Some(if ord.is_le() { a } else { b })
            }
            (a, b) => a.or(b),
        };
        self
    }
}

type Partial = BTreeMap<CheckKind, Accumulator>;

fn merge_partials(mut a: Partial, b: Partial) -> Partial {
    for (k, v) in b {
        let cur = a.remove(&k).unwrap_or_default();
        a.insert(k, cur.merge(v));
    }
    a
}

struct Trial<'c> {
    config: &'c FuzzConfig,
    stratum: Stratum,
    dim: usize,
    trial: u64,
    seed: u64,
    states: [DensityMatrix; 4],
    seq: u64,
    pending: BTreeMap<CheckKind, (Accumulator, Option<Candidate>)>,
}

/// Worst evaluation of a check within one trial: margin, sequence number,
/// parameters and error message.
type Candidate = (f64, u64, CheckParams, Option<String>);

impl Trial<'_> {
    fn record(&mut self, kind: CheckKind, params: CheckParams, result: Result<f64>) {
        let slack = self.config.slack;
        let seq = self.seq;
        self.seq += 1;
        let (acc, best) = self.pending.entry(kind).or_default();
        acc.evaluations += 1;
        let (margin, error) = match result {
            Ok(m) if !m.is_nan() => (m, None),
            Ok(_) => (f64::NEG_INFINITY, Some("margin is NaN".to_string())),
            Err(e) => (f64::NEG_INFINITY, Some(e.to_string())),
        };
        if error.is_some() {
            acc.errors += 1;
        }
        if margin < -slack {
            acc.failures += 1;
        } else if margin < TIGHT_THRESHOLD {
            acc.tight += 1;
        }
        if best.as_ref().is_none_or(|b| margin < b.0) {
            *best = Some((margin, seq, params, error));
        }
    }

    fn finish(self) -> Partial {
        let mut out = Partial::new();
        for (kind, (mut acc, best)) in self.pending {
            if let Some((margin, seq, params, error)) = best {
                let states = self.states[..kind.state_count()]
                    .iter()
                    .map(|d| matrix_to_rows(d.matrix()))
                    .collect();
                acc.worst = Some(Worst {
                    margin,
                    key: (self.trial, seq),
                    witness: Witness {
                        check: kind,
                        stratum: self.stratum,
                        dim: self.dim,
                        trial: self.trial,
                        seed: self.seed,
                        params,
                        states,
                        margin: margin.is_finite().then_some(margin),
                        error,
                    },
                });
            }
            out.insert(kind, acc);
        }
        out
    }
}

fn run_trial(config: &FuzzConfig, global_trial: u64) -> Partial {
    let trials = config.trials;
    let dim = config.dims[(global_trial / trials) as usize];
    let strata = config.strata();
    let stratum = strata[(global_trial % strata.len() as u64) as usize];
    let seed = config.seed ^ global_trial;
    let mut sampler = SeededSampler::new(seed);
    let drawn = sample_pair(stratum, dim, &mut sampler).and_then(|(r, s)| {
        let (r2, s2) = sample_pair(stratum, dim, &mut sampler)?;
        Ok([r, s, r2, s2])
    });
    let states = match drawn {
        Ok(s) => s,
        Err(e) => {
            // sampling cannot fail for validated configs; record it against every check
            let mut out = Partial::new();
            for kind in CheckKind::ALL {
                out.insert(
                    kind,
                    Accumulator {
                        evaluations: 1,
                        failures: 1,
                        errors: 1,
                        tight: 0,
                        worst: Some(Worst {
                            margin: f64::NEG_INFINITY,
                            key: (global_trial, 0),
                            witness: Witness {
                                check: kind,
                                stratum,
                                dim,
                                trial: global_trial,
                                seed,
                                params: CheckParams::default(),
                                states: vec![],
                                margin: None,
                                error: Some(e.to_string()),
                            },
                        }),
                    },
                );
            }
            return out;
        }
    };
    let holevo_p = sampler.uniform();
    let weight = sampler.uniform();
    let mut t = Trial {
        config,
        stratum,
        dim,
        trial: global_trial,
        seed,
        states,
        seq: 0,
        pending: BTreeMap::new(),
    };
    let (r, s) = (t.states[0].clone(), t.states[1].clone());
    let (r2, s2) = (t.states[2].clone(), t.states[3].clone());

    for &a in &config.a_grid {
        let pa = CheckParams {
            a: Some(a),
            ..Default::default()
        };
        t.record(CheckKind::Range, pa, check_range(&r, &s, a));
        t.record(CheckKind::UpperT, pa, check_upper_t(&r, &s, a));
        t.record(CheckKind::LowerPinsker, pa, check_lower_pinsker(&r, &s, a));
        if a > 0.0 && a < 1.0 {
            t.record(CheckKind::RawBound, pa, check_raw_bound(&r, &s, a));
        }
        t.record(CheckKind::Maximality, pa, check_maximality(&r, &s, a));
        let pw = CheckParams {
            weight: Some(weight),
            ..pa
        };
        t.record(
            CheckKind::JointConvexity,
            pw,
            check_joint_convexity((&r, &s), (&r2, &s2), weight, a),
        );
        if a < 1.0 {
            for &p in &config.p_grid {
                let pp = CheckParams { p: Some(p), ..pa };
                t.record(CheckKind::TrreBound, pp, check_trre_bound(&r, &s, p, a));
                t.record(CheckKind::RenyiOverlap, pp, check_renyi_overlap(&r, &s, p, a));
            }
        }
    }
    let ph = CheckParams {
        p: Some(holevo_p),
        ..Default::default()
    };
    t.record(CheckKind::Holevo, ph, check_holevo(holevo_p, &r, &s));
    t.record(CheckKind::HolevoPaths, ph, check_holevo_paths(holevo_p, &r, &s));
    let none = CheckParams::default();
    t.record(CheckKind::LimitZero, none, check_limit_zero(&r, &s));
    t.record(CheckKind::LimitOne, none, check_limit_one(&r, &s));
    t.record(CheckKind::LimitCauchy, none, check_limit_cauchy(&r, &s));
    t.finish()
}

/// Runs every check over `trials` stratified pairs per dimension.
///
/// Trial `i` (counted across dimensions) uses the sampler seeded with
/// `seed ^ i`, so results do not depend on scheduling.
pub fn run_fuzz(config: &FuzzConfig) -> Result<VerificationReport> {
    config.validate()?;
    let total = config.trials * config.dims.len() as u64;
    let merged = (0..total)
        .into_par_iter()
        .map(|i| run_trial(config, i))
        .reduce(Partial::new, merge_partials);
    let mut checks = Vec::with_capacity(CheckKind::ALL.len());
    for kind in CheckKind::ALL {
        let acc = merged.get(&kind).cloned().unwrap_or_default();
        let worst_margin = acc.worst.as_ref().map(|w| w.margin).filter(|m| m.is_finite());
        checks.push(CheckReport {
            name: kind,
            trials: acc.evaluations,
            failures: acc.failures,
            errors: acc.errors,
            tight: acc.tight,
            worst_margin: if acc.errors > 0 { None } else { worst_margin },
            passed: acc.failures == 0,
            witness: acc.worst.map(|w| w.witness),
        });
    }
    Ok(VerificationReport {
        config: config.clone(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
