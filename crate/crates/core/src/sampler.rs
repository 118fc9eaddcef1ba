//! Exact sampling of projection determinantal processes and empirical
//! estimators.
//!
//! Samples are drawn by the sequential conditional scheme for projection
//! kernels: with feature map `φ(t) = (φ_k(t))_{k∈J}` and the points chosen so
//! far spanning `V`, the next point has density `‖P_{V^⊥} φ(t)‖² / (N - i)`.
//! The conditional is sampled by rejection against an envelope of
//! `K(t, t) = ‖φ(t)‖²`, and the accepted feature vector is orthogonalised into
//! `V`.
//!
//! Randomness comes from ChaCha8 keyed by `(seed, stream)`; a replicate's
//! output depends only on that pair.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fermion::{psi_at_levels, BlockSpec};
use crate::statistics::StatSeries;
use crate::{Error, Result};

/// Largest number of levels a sampler accepts.
pub const MAX_SAMPLE_SIZE: usize = 200;
/// Cells in the piecewise-constant proposal envelope on the line.
pub const ENVELOPE_CELLS: usize = 4096;
/// Relative padding of the classically allowed region covered by the envelope.
pub const ENVELOPE_PADDING: f64 = 0.1;
/// Additional absolute margin (oscillator units) beyond the padded region,
/// so the Gaussian tails of low levels are covered.
pub const ENVELOPE_TAIL: f64 = 6.0;
/// Proposals allowed per point before the sampler gives up.
pub const MAX_TRIALS: u64 = 1_000_000;

const SAMPLES_PER_CELL: usize = 16;
const REFINED_SAMPLES_PER_CELL: usize = 64;
const ENVELOPE_SAFETY: f64 = 1.2;
const REFINE_BELOW_ACCEPTANCE: f64 = 0.1;
const NEGATIVE_TOLERANCE: f64 = 1e-10;

/// Seed and stream of one independent random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngContract {
    pub seed: u64,
    pub stream: u64,
}

impl RngContract {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Line,
    /// The circle `[0, 2π)`.
    Circle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    positions: Vec<f64>,
    domain: Domain,
    seed: u64,
    replicate_index: u64,
}

impl PointSample {
    /// Sorts `positions`; circle positions are reduced to `[0, 2π)`.
    pub fn new(mut positions: Vec<f64>, domain: Domain, seed: u64, replicate_index: u64) -> Result<Self> {
        if let Some(&bad) = positions.iter().find(|p| !p.is_finite()) {
            return Err(Error::domain("PointSample", bad, "positions must be finite"));
        }
        if domain == Domain::Circle {
            positions.iter_mut().for_each(|p| *p = wrap_angle(*p));
        }
        positions.sort_by(f64::total_cmp);
        Ok(Self {
            positions,
            domain,
            seed,
            replicate_index,
        })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicate_index(&self) -> u64 {
        self.replicate_index
    }
}

fn wrap_angle(t: f64) -> f64 {
    let r = t - TAU * libm::floor(t / TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Orthonormal feature family of a projection kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Basis {
    /// Hermite wavefunctions `ψ_k`, `k ∈ J`, on the line.
    Hermite(Vec<u64>),
    /// Fourier modes `e^{ikθ}/√(2π)`, `k ∈ J`, on the circle.
    Fourier(Vec<i64>),
}

impl Basis {
    pub fn hermite(spec: &BlockSpec) -> Self {
        Basis::Hermite(spec.levels())
    }

    /// Modes `0, …, n-1`: the eigenphase process of a Haar unitary of size `n`.
    pub fn fourier_range(n: u64) -> Self {
        Basis::Fourier((0..n as i64).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Basis::Hermite(j) => j.len(),
            Basis::Fourier(j) => j.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn domain(&self) -> Domain {
        match self {
            Basis::Hermite(_) => Domain::Line,
            Basis::Fourier(_) => Domain::Circle,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::InvalidParameter("the level set is empty".into()));
        }
        if n > MAX_SAMPLE_SIZE {
            return Err(Error::Size {
                method: "sampler",
                n,
                max: MAX_SAMPLE_SIZE,
                hint: "",
            });
        }
        let increasing = match self {
            Basis::Hermite(j) => j.windows(2).all(|w| w[0] < w[1]),
            Basis::Fourier(j) => j.windows(2).all(|w| w[0] < w[1]),
        };
        if !increasing {
            return Err(Error::InvalidParameter(
                "levels must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Scalar type of feature vectors.
trait Amplitude:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self>
{
    const ZERO: Self;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
}

impl Amplitude for f64 {
    const ZERO: Self = 0.0;
    fn conj(self) -> Self {
        self
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
}

impl Amplitude for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
}

/// `⟨e, φ⟩ = Σ conj(e_i) φ_i`.
fn inner<A: Amplitude>(e: &[A], phi: &[A]) -> A {
    e.iter()
        .zip(phi)
        .fold(A::ZERO, |acc, (&x, &y)| acc + x.conj() * y)
}

/// Orthonormal vectors spanning the features of the points chosen so far.
struct ActiveSpan<A> {
    dim: usize,
    vectors: Vec<A>,
}

impl<A: Amplitude> ActiveSpan<A> {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::with_capacity(dim * dim),
        }
    }

    fn rank(&self) -> usize {
        self.vectors.len() / self.dim
    }

    /// `‖P_{V^⊥} φ‖² = ‖φ‖² - Σ_j |⟨e_j, φ⟩|²`.
    fn residual(&self, phi: &[A], norm: f64) -> f64 {
        let projected: f64 = self
            .vectors
            .chunks_exact(self.dim)
            .map(|e| inner(e, phi).norm_sqr())
            .sum();
        norm - projected
    }

    /// Adds `φ` orthogonalised against the span (two Gram–Schmidt passes).
    fn push(&mut self, phi: &[A]) -> Result<()> {
        let mut r: Vec<A> = phi.to_vec();
        for _ in 0..2 {
            for e in self.vectors.chunks_exact(self.dim) {
                let c = inner(e, &r);
                for (ri, &ei) in r.iter_mut().zip(e) {
                    *ri = *ri - ei * c;
                }
            }
        }
        let norm = libm::sqrt(r.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if !(norm > 0.0) {
            return Err(Error::Sampler(
                "accepted a point whose feature vector lies in the active span".into(),
            ));
        }
        self.vectors.extend(r.iter().map(|&a| a * (1.0 / norm)));
        Ok(())
    }
}

/// Piecewise-constant upper bound of `K(t, t)` on a grid of cells.
#[derive(Debug, Clone)]
struct Envelope {
    lo: f64,
    width: f64,
    heights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Envelope {
    fn build<F: Fn(f64) -> f64>(density: F, lo: f64, hi: f64) -> Result<Self> {
        let width = (hi - lo) / ENVELOPE_CELLS as f64;
        let cell_max = |i: usize, samples: usize| -> (f64, f64) {
            let a = lo + width * i as f64;
            let mut max = 0.0f64;
            let mut sum = 0.0;
            for s in 0..=samples {
                let v = density(a + width * s as f64 / samples as f64);
                max = max.max(v);
                sum += v;
            }
            (max, sum / (samples + 1) as f64)
        };
        let mut heights = Vec::with_capacity(ENVELOPE_CELLS);
        let mut means = Vec::with_capacity(ENVELOPE_CELLS);
        for i in 0..ENVELOPE_CELLS {
            let (max, mean) = cell_max(i, SAMPLES_PER_CELL);
            if !max.is_finite() {
                return Err(Error::Sampler(format!(
                    "density is not finite near x = {}",
                    lo + width * i as f64
                )));
            }
            heights.push(max);
            means.push(mean);
        }
        let peak = heights.iter().cloned().fold(0.0, f64::max);
        if !(peak > 0.0) {
            return Err(Error::Sampler(
                "density vanishes on the whole envelope grid".into(),
            ));
        }
        let floor = 1e-16 * peak;
        for i in 0..ENVELOPE_CELLS {
            let mut h = ENVELOPE_SAFETY * heights[i];
            if h > floor && means[i] / h < REFINE_BELOW_ACCEPTANCE {
                h = ENVELOPE_SAFETY * cell_max(i, REFINED_SAMPLES_PER_CELL).0;
            }
            heights[i] = h.max(floor);
        }
        let mut cumulative = Vec::with_capacity(ENVELOPE_CELLS);
        let mut total = 0.0;
        for h in &heights {
            total += h * width;
            cumulative.push(total);
        }
        Ok(Self {
            lo,
            width,
            heights,
            cumulative,
        })
    }

    /// Draws `t` from the normalised envelope, returning `(t, envelope(t))`.
    fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let total = self.cumulative[self.cumulative.len() - 1];
        let u: f64 = rng.random::<f64>() * total;
        let cell = self
            .cumulative
            .partition_point(|&c| c <= u)
            .min(self.heights.len() - 1);
        let t = self.lo + self.width * (cell as f64 + rng.random::<f64>());
        (t, self.heights[cell])
    }
}

/// A projection-DPP sampler with its proposal envelope prepared once.
#[derive(Debug, Clone)]
pub struct ProjectionSampler {
    basis: Basis,
    envelope: Option<Envelope>,
}

impl ProjectionSampler {
    pub fn new(basis: Basis) -> Result<Self> {
        basis.validate()?;
        let envelope = match &basis {
            Basis::Hermite(levels) => {
                let kmax = levels[levels.len() - 1] as f64;
                let edge = 2.0 * libm::sqrt(kmax + 0.5) * (1.0 + ENVELOPE_PADDING) + ENVELOPE_TAIL;
                let density = |t: f64| {
                    let mut b = vec![0.0; levels.len()];
                    psi_at_levels(levels, t, &mut b);
                    b.iter().map(|v| v * v).sum::<f64>()
                };
                Some(Envelope::build(density, -edge, edge)?)
            }
            Basis::Fourier(_) => None,
        };
        Ok(Self { basis, envelope })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// Number of points in every sample.
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn sample(&self, rng: RngContract) -> Result<PointSample> {
        let positions = self.sample_positions(&mut rng.rng())?;
        PointSample::new(positions, self.basis.domain(), rng.seed, rng.stream)
    }

    /// Unsorted points of one sample, drawn from `rng`.
    pub fn sample_positions<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        match (&self.basis, &self.envelope) {
            (Basis::Hermite(levels), Some(env)) => {
                let features = |t: f64, out: &mut [f64]| psi_at_levels(levels, t, out);
                sequential(levels.len(), features, |r: &mut R| env.propose(r), rng)
            }
            (Basis::Fourier(modes), _) => {
                let norm = 1.0 / libm::sqrt(TAU);
                let features = |t: f64, out: &mut [Complex64]| {
                    for (o, &k) in out.iter_mut().zip(modes) {
                        let (s, c) = libm::sincos(k as f64 * t);
                        *o = Complex64::new(c * norm, s * norm);
                    }
                };
                let height = modes.len() as f64 / TAU;
                sequential(
                    modes.len(),
                    features,
                    |r: &mut R| (TAU * r.random::<f64>(), height),
                    rng,
                )
            }
            (Basis::Hermite(_), None) => unreachable!("hermite samplers always carry an envelope"),
        }
    }
}

fn sequential<A, R, F, P>(n: usize, features: F, mut propose: P, rng: &mut R) -> Result<Vec<f64>>
where
    A: Amplitude,
    R: Rng + ?Sized,
    F: Fn(f64, &mut [A]),
    P: FnMut(&mut R) -> (f64, f64),
{
    let mut span = ActiveSpan::<A>::new(n);
    let mut phi = vec![A::ZERO; n];
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let mut trials = 0u64;
        loop {
            if trials >= MAX_TRIALS {
                return Err(Error::Sampler(format!(
                    "rejection stalled: {MAX_TRIALS} proposals without acceptance for point {} of {n}",
                    points.len() + 1
                )));
            }
            trials += 1;
            let (t, envelope) = propose(rng);
            features(t, &mut phi);
            let diag: f64 = phi.iter().map(|a| a.norm_sqr()).sum();
            if diag > envelope * (1.0 + 1e-9) {
                return Err(Error::Sampler(format!(
                    "envelope violated at t = {t}: K(t,t) = {diag:e} exceeds the bound {envelope:e}"
                )));
            }
            let residual = span.residual(&phi, diag);
            if residual < -NEGATIVE_TOLERANCE * diag.max(1.0) {
                return Err(Error::Sampler(format!(
                    "conditional density is negative ({residual:e}) at t = {t} after {} points",
                    span.rank()
                )));
            }
            if rng.random::<f64>() * envelope < residual {
                span.push(&phi)?;
                points.push(t);
                break;
            }
        }
    }
    Ok(points)
}

/// One exact sample of the projection DPP on `basis`. Builds the proposal
/// envelope on every call; reuse a [`ProjectionSampler`] for replicates.
pub fn sample_projection_dpp(basis: Basis, rng: RngContract) -> Result<PointSample> {
    ProjectionSampler::new(basis)?.sample(rng)
}

/// Union of `m` independent samples; component `g` uses stream
/// `rng.stream · m + g` of the same seed.
pub fn sample_superposition(sampler: &ProjectionSampler, m: u64, rng: RngContract) -> Result<PointSample> {
    if m == 0 {
        return Err(Error::InvalidParameter("superposition requires m >= 1".into()));
    }
    let base = rng
        .stream
        .checked_mul(m)
        .ok_or_else(|| Error::InvalidParameter(format!("stream {} is too large for m = {m}", rng.stream)))?;
    let mut positions = Vec::with_capacity(sampler.n() * m as usize);
    for g in 0..m {
        let component = RngContract::new(rng.seed, base + g);
        positions.extend(sampler.sample_positions(&mut component.rng())?);
    }
    PointSample::new(positions, sampler.basis().domain(), rng.seed, rng.stream)
}

/// `θ ↦ mθ mod 2π` applied to a circle sample of `mN` points, `m ≤ N`.
pub fn power_map(sample: &PointSample, m: u64) -> Result<PointSample> {
    if sample.domain() != Domain::Circle {
        return Err(Error::domain(
            "power_map",
            m as f64,
            "power maps act on circle samples only",
        ));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("power map exponent must be >= 1".into()));
    }
    let n = sample.n() as u64;
    if m.saturating_mul(m) > n {
        return Err(Error::InvalidParameter(format!(
            "power map exponent m = {m} exceeds N = n/m for a sample of {n} points"
        )));
    }
    let positions = sample.positions().iter().map(|&t| m as f64 * t).collect();
    PointSample::new(positions, Domain::Circle, sample.seed(), sample.replicate_index())
}

/// Homogeneous Poisson points of the given rate on `[lo, hi)`, from
/// exponential spacings.
pub fn poisson_process(rate: f64, lo: f64, hi: f64, rng: RngContract) -> Result<PointSample> {
    if !(rate.is_finite() && rate > 0.0 && lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "poisson process needs a positive rate and lo < hi (rate {rate}, [{lo}, {hi}))"
        )));
    }
    let mut r = rng.rng();
    let mut t = lo;
    let mut positions = Vec::new();
    loop {
        let u: f64 = r.random::<f64>();
        t += -libm::log(1.0 - u) / rate;
        if t >= hi {
            break;
        }
        positions.push(t);
    }
    PointSample::new(positions, Domain::Line, rng.seed, rng.stream)
}

fn check_samples(samples: &[PointSample]) -> Result<Domain> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidParameter("no samples to estimate from".into()))?;
    if samples.iter().any(|s| s.domain() != first.domain()) {
        return Err(Error::InvalidParameter(
            "samples mix line and circle domains".into(),
        ));
    }
    Ok(first.domain())
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) || !edges.iter().all(|e| e.is_finite()) {
        return Err(Error::InvalidParameter(
            "bin edges must be at least two finite, strictly increasing values".into(),
        ));
    }
    Ok(())
}

fn bin_of(edges: &[f64], x: f64) -> Option<usize> {
    if x < edges[0] || x >= edges[edges.len() - 1] {
        return None;
    }
    Some(edges.partition_point(|&e| e <= x) - 1)
}

fn centers(edges: &[f64]) -> Vec<f64> {
    edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Mean and standard error of per-replicate values, column by column.
fn column_stats(rows: &[Vec<f64>], width: usize) -> (Vec<f64>, Vec<f64>) {
    let r = rows.len() as f64;
    let mut mean = vec![0.0; width];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= r);
    let mut var = vec![0.0; width];
    for row in rows {
        for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let se = var
        .iter()
        .map(|s| {
            if rows.len() > 1 {
                libm::sqrt(s / (r - 1.0) / r)
            } else {
                f64::NAN
            }
        })
        .collect();
    (mean, se)
}

/// Histogram density: expected number of points per unit length and
/// replicate in each bin, with standard errors across replicates.
pub fn estimate_density(samples: &[PointSample], edges: &[f64]) -> Result<StatSeries> {
    check_samples(samples)?;
    check_edges(edges)?;
    let bins = edges.len() - 1;
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            let mut counts = vec![0.0; bins];
            for &p in s.positions() {
                if let Some(b) = bin_of(edges, p) {
                    counts[b] += 1.0;
                }
            }
            for (c, w) in counts.iter_mut().zip(edges.windows(2)) {
                *c /= w[1] - w[0];
            }
            counts
        })
        .collect();
    let (mean, se) = column_stats(&rows, bins);
    StatSeries::new("density", "x", centers(edges), mean)?
        .with_errors(se)
        .map(|s| s.with_meta("replicates", format!("{}", samples.len())))
}

/// Observation window for pair correlations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairWindow {
    /// Pairs with both points in `[lo, hi)`; `density` converts separations
    /// to unit-density units.
    Line { lo: f64, hi: f64, density: f64 },
    /// The whole circle; the density is `n / 2π` of each sample.
    Circle,
}

/// `ρ_2(s) / ρ²` on unit-density separation bins: unordered pair counts
/// divided by their Poisson expectation, averaged over replicates.
pub fn estimate_pair_correlation(
    samples: &[PointSample],
    edges: &[f64],
    window: PairWindow,
) -> Result<StatSeries> {
    let domain = check_samples(samples)?;
    check_edges(edges)?;
    if edges[0] < 0.0 {
        return Err(Error::InvalidParameter(
            "separation bins must be non-negative".into(),
        ));
    }
    let bins = edges.len() - 1;
    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        if s.n() < 2 {
            return Err(Error::InvalidParameter(format!(
                "replicate {} has fewer than two points",
                s.replicate_index()
            )));
        }
        let mut counts = vec![0.0; bins];
        let expected: Vec<f64> = match (window, domain) {
            (PairWindow::Line { lo, hi, density }, Domain::Line) => {
                let pts: Vec<f64> = s
                    .positions()
                    .iter()
                    .copied()
                    .filter(|&p| p >= lo && p < hi)
                    .collect();
                for i in 0..pts.len() {
                    for j in (i + 1)..pts.len() {
                        if let Some(b) = bin_of(edges, (pts[j] - pts[i]).abs() * density) {
                            counts[b] += 1.0;
                        }
                    }
                }
                // ρ² ∫_{bin} (W - u) du in physical separation u = s/ρ.
                let w = hi - lo;
                edges
                    .windows(2)
                    .map(|e| {
                        let (u0, u1) = ((e[0] / density).min(w), (e[1] / density).min(w));
                        density * density * ((w * u1 - 0.5 * u1 * u1) - (w * u0 - 0.5 * u0 * u0))
                    })
                    .collect()
            }
            (PairWindow::Circle, Domain::Circle) => {
                let pts = s.positions();
                let density = pts.len() as f64 / TAU;
                for i in 0..pts.len() {
                    for j in (i + 1)..pts.len() {
                        let d = pts[j] - pts[i];
                        let d = d.min(TAU - d);
                        if let Some(b) = bin_of(edges, d * density) {
                            counts[b] += 1.0;
                        }
                    }
                }
                edges
                    .windows(2)
                    .map(|e| {
                        let (d0, d1) = ((e[0] / density).min(PI), (e[1] / density).min(PI));
                        density * density * TAU * (d1 - d0)
                    })
                    .collect()
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "pair window does not match the sample domain".into(),
                ))
            }
        };
        for (c, e) in counts.iter_mut().zip(&expected) {
            *c = if *e > 0.0 { *c / e } else { f64::NAN };
        }
        rows.push(counts);
    }
    let (mean, se) = column_stats(&rows, bins);
    StatSeries::new(
        "pair_correlation",
        "unit-density separation",
        centers(edges),
        mean,
    )?
    .with_errors(se)
    .map(|s| s.with_meta("replicates", format!("{}", samples.len())))
}

fn count_in_box(s: &PointSample, center: f64, l: f64) -> f64 {
    match s.domain() {
        Domain::Line => {
            let (lo, hi) = (center - 0.5 * l, center + 0.5 * l);
            s.positions().iter().filter(|&&p| p >= lo && p < hi).count() as f64
        }
        Domain::Circle => {
            if l >= TAU {
                return s.n() as f64;
            }
            let lo = wrap_angle(center - 0.5 * l);
            s.positions()
                .iter()
                .filter(|&&p| {
                    let d = p - lo;
                    let d = if d < 0.0 { d + TAU } else { d };
                    d < l
                })
                .count() as f64
        }
    }
}

/// Sample variance of the count in the box `[c - L/2, c + L/2)` for each `L`
/// (wrapping on the circle), with jackknife standard errors.
pub fn estimate_number_variance(samples: &[PointSample], lengths: &[f64], center: f64) -> Result<StatSeries> {
    check_samples(samples)?;
    if samples.len() < 3 {
        return Err(Error::InvalidParameter(
            "number variance needs at least three replicates".into(),
        ));
    }
    let r = samples.len() as f64;
    let mut ys = Vec::with_capacity(lengths.len());
    let mut errs = Vec::with_capacity(lengths.len());
    for &l in lengths {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "box length {l} must be positive"
            )));
        }
        let counts: Vec<f64> = samples.iter().map(|s| count_in_box(s, center, l)).collect();
        let mean = counts.iter().sum::<f64>() / r;
        // Central moments keep the leave-one-out variances free of cancellation.
        let dev: Vec<f64> = counts.iter().map(|c| c - mean).collect();
        let s2: f64 = dev.iter().map(|d| d * d).sum();
        let var = s2 / (r - 1.0);
        let loo: Vec<f64> = dev
            .iter()
            .map(|d| (s2 - d * d - d * d / (r - 1.0)) / (r - 2.0))
            .collect();
        let loo_mean = loo.iter().sum::<f64>() / r;
        let jack =
            libm::sqrt((r - 1.0) / r * loo.iter().map(|v| (v - loo_mean) * (v - loo_mean)).sum::<f64>());
        ys.push(var);
        errs.push(jack);
    }
    StatSeries::new("number_variance", "L", lengths.to_vec(), ys)?
        .with_errors(errs)
        .map(|s| s.with_meta("replicates", format!("{}", samples.len())))
}
