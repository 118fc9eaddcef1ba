//! Finite-`M` objects: Hermite wavefunctions, block level sets and the
//! projection kernel `K_J` in direct-sum and Christoffel–Darboux form.
//!
//! Wavefunctions are normalised in `L²(ℝ, dx)` and solve
//! `-ψ'' + x²/4 ψ = (k + 1/2) ψ`, so `ψ_0(x) = (2π)^{-1/4} e^{-x²/4}` and the
//! classically allowed region of level `k` is `|x| < 2√(k + 1/2)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use crate::asymptotics::{bulk_kernel, LimitKernel};
use crate::numerics::Matrix;
use crate::{Error, Result};

/// `(2π)^{-1/4}`.
const PSI0_NORM: f64 = 0.631_618_777_746_065_9;
/// The recurrence is renormalised by `2^-RESCALE_BITS` whenever it exceeds `2^RESCALE_BITS`.
const RESCALE_BITS: i32 = 500;
/// Separation below which the Christoffel–Darboux kernel switches to its
/// diagonal (derivative) form.
pub const CD_DIAGONAL_RADIUS: f64 = 1e-6;
/// Largest level index supported by the recurrence.
pub const MAX_LEVEL: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    Custom,
}

/// Block `[a²M, (a+w)²M)` of oscillator levels, before flooring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub a: f64,
    pub w: f64,
}

impl Block {
    pub fn new(a: f64, w: f64) -> Self {
        Self { a, w }
    }
}

/// A union of disjoint level blocks at scale `M`.
///
/// Block endpoints are floored: block `j` holds the integer levels
/// `⌊a_j² M⌋ ..= ⌊(a_j + w_j)² M⌋ - 1`. A product that lies within `1e-9`
/// (relative) of an integer is rounded to it first, so `0.5² · 8` is `2` and
/// not `1.999…`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpec {
    blocks: Vec<Block>,
    m: u64,
    parity: Parity,
    bounds: Vec<(u64, u64)>,
}

pub(crate) fn floor_level(v: f64) -> u64 {
    let r = libm::round(v);
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        r as u64
    } else {
        libm::floor(v) as u64
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

impl BlockSpec {
    pub fn new(blocks: Vec<Block>, m: u64, parity: Parity) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidBlocks("at least one block is required".into()));
        }
        if m == 0 {
            return Err(Error::InvalidBlocks("M must be a positive integer".into()));
        }
        for (j, b) in blocks.iter().enumerate() {
            if !(b.a.is_finite() && b.a >= 0.0) {
                return Err(Error::InvalidBlocks(format!(
                    "block {j}: offset a = {} must be >= 0",
                    b.a
                )));
            }
            if !(b.w.is_finite() && b.w > 0.0) {
                return Err(Error::InvalidBlocks(format!(
                    "block {j}: width w = {} must be > 0",
                    b.w
                )));
            }
        }
        let mf = m as f64;
        let bounds: Vec<(u64, u64)> = blocks
            .iter()
            .map(|b| {
                (
                    floor_level(b.a * b.a * mf),
                    floor_level((b.a + b.w) * (b.a + b.w) * mf),
                )
            })
            .collect();
        for j in 1..bounds.len() {
            if bounds[j - 1].1 > bounds[j].0 {
                return Err(Error::BlocksOverlap {
                    first: j - 1,
                    second: j,
                    first_end: bounds[j - 1].1,
                    second_start: bounds[j].0,
                });
            }
        }
        let last = bounds[bounds.len() - 1].1;
        if last > MAX_LEVEL + 1 {
            return Err(Error::InvalidBlocks(format!(
                "highest level {} exceeds the supported maximum {MAX_LEVEL}",
                last - 1
            )));
        }
        match parity {
            Parity::Custom => {}
            Parity::Even => {
                let w = blocks[0].w;
                if !blocks.iter().all(|b| close(b.w, w)) {
                    return Err(Error::InvalidBlocks(
                        "even type requires equal block widths".into(),
                    ));
                }
                if blocks[0].a <= 0.0 {
                    return Err(Error::InvalidBlocks("even type requires a_0 > 0".into()));
                }
            }
            Parity::Odd => {
                if blocks[0].a != 0.0 {
                    return Err(Error::InvalidBlocks("odd type requires a_0 = 0".into()));
                }
                if blocks.len() > 1 {
                    let w = blocks[1].w;
                    if !blocks[1..].iter().all(|b| close(b.w, w)) || !close(blocks[0].w, w / 2.0) {
                        return Err(Error::InvalidBlocks(
                            "odd type requires w_0 = w/2 and w_1 = ... = w_{B-1} = w".into(),
                        ));
                    }
                }
            }
        }
        let spec = Self {
            blocks,
            m,
            parity,
            bounds,
        };
        if spec.n() == 0 {
            return Err(Error::InvalidBlocks(
                "the level set is empty after flooring".into(),
            ));
        }
        Ok(spec)
    }

    /// `J = [0, n)`: the ground state of `n` fermions.
    pub fn ground_state(n: u64) -> Result<Self> {
        Self::new(vec![Block::new(0.0, 1.0)], n, Parity::Custom)
    }

    /// The single excited block `[a²M, (a+1)²M)`.
    pub fn single_block(a: f64, m: u64) -> Result<Self> {
        Self::new(vec![Block::new(a, 1.0)], m, Parity::Custom)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Floored `(first level, one past last level)` of every block.
    pub fn level_bounds(&self) -> &[(u64, u64)] {
        &self.bounds
    }

    /// `N = |J|`.
    pub fn n(&self) -> u64 {
        self.bounds.iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// `B`, the number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `R = Σ w_j`.
    pub fn total_width(&self) -> f64 {
        self.blocks.iter().map(|b| b.w).sum()
    }

    pub fn max_level(&self) -> u64 {
        self.bounds
            .iter()
            .map(|b| b.1)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Largest `a_j + w_j`; the density is supported in `|x| < 2 (a+w)_max √M`.
    pub fn outer_radius(&self) -> f64 {
        self.blocks.iter().map(|b| b.a + b.w).fold(0.0, f64::max)
    }

    /// Edge of the limiting support, `2 (a+w)_max √M`.
    pub fn support_edge(&self) -> f64 {
        2.0 * self.outer_radius() * libm::sqrt(self.m as f64)
    }

    /// The explicit level set `J`, ascending.
    pub fn levels(&self) -> Vec<u64> {
        self.bounds.iter().flat_map(|&(lo, hi)| lo..hi).collect()
    }
}

/// `ψ_k(x)` for each `k` in `levels` (ascending, duplicates allowed), written to
/// `out`, from a single forward sweep of the three-term recurrence.
///
/// The sweep carries a separate log-scale so that `ψ_0` underflowing at large
/// `|x|` does not zero out high levels that are still classically allowed.
pub fn psi_at_levels(levels: &[u64], x: f64, out: &mut [f64]) {
    debug_assert_eq!(levels.len(), out.len());
    debug_assert!(levels.windows(2).all(|w| w[0] <= w[1]));
    let Some(&max) = levels.last() else { return };
    let big = libm::ldexp(1.0, RESCALE_BITS);
    let small = libm::ldexp(1.0, -RESCALE_BITS);
    let mut log_scale = -0.25 * x * x;
    let mut prev = 0.0;
    let mut cur = PSI0_NORM;
    let mut p = 0;
    let mut k = 0u64;
    loop {
        while p < levels.len() && levels[p] == k {
            out[p] = cur * libm::exp(log_scale);
            p += 1;
        }
        if k == max {
            break;
        }
        let next = (x * cur - libm::sqrt(k as f64) * prev) / libm::sqrt(k as f64 + 1.0);
        prev = cur;
        cur = next;
        k += 1;
        if cur.abs() > big {
            cur *= small;
            prev *= small;
            log_scale += RESCALE_BITS as f64 * LN_2;
        }
    }
}

/// `ψ_0(x), …, ψ_n(x)`.
pub fn psi_all(n: u64, x: f64) -> Vec<f64> {
    let levels: Vec<u64> = (0..=n).collect();
    let mut out = vec![0.0; levels.len()];
    psi_at_levels(&levels, x, &mut out);
    out
}

/// The Hermite wavefunction `ψ_k(x)`.
pub fn psi(k: u64, x: f64) -> f64 {
    let mut out = [0.0];
    psi_at_levels(&[k], x, &mut out);
    out[0]
}

/// `ψ_k'(x) = √k ψ_{k-1}(x) - (x/2) ψ_k(x)`.
pub fn psi_prime(k: u64, x: f64) -> f64 {
    if k == 0 {
        return -0.5 * x * psi(0, x);
    }
    let mut out = [0.0; 2];
    psi_at_levels(&[k - 1, k], x, &mut out);
    libm::sqrt(k as f64) * out[0] - 0.5 * x * out[1]
}

/// `K_J(x, y) = Σ_{k∈J} ψ_k(x) ψ_k(y)` summed term by term (ascending `k`).
pub fn kernel_direct(levels: &[u64], x: f64, y: f64) -> f64 {
    let mut px = vec![0.0; levels.len()];
    let mut py = vec![0.0; levels.len()];
    psi_at_levels(levels, x, &mut px);
    psi_at_levels(levels, y, &mut py);
    px.iter().zip(&py).map(|(a, b)| a * b).sum()
}

/// `(ψ_{n-2}, ψ_{n-1}, ψ_n)` at one point, with zeros for negative indices.
type Tail = [f64; 3];

fn tail_levels(n: u64) -> [u64; 3] {
    [n.saturating_sub(2), n.saturating_sub(1), n]
}

fn tail_at(n: u64, x: f64) -> Tail {
    let mut out = [0.0; 3];
    psi_at_levels(&tail_levels(n), x, &mut out);
    mask_tail(n, out)
}

fn mask_tail(n: u64, mut t: Tail) -> Tail {
    if n < 2 {
        t[0] = 0.0;
    }
    if n < 1 {
        t[1] = 0.0;
    }
    t
}

/// Christoffel–Darboux kernel of `[0, n)` from precomputed tails.
fn cd_from_tails(n: u64, x: f64, tx: &Tail, y: f64, ty: &Tail) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let d = x - y;
    if d.abs() < CD_DIAGONAL_RADIUS {
        // √n (ψ_n' ψ_{n-1} - ψ_{n-1}' ψ_n) with the derivative identity applied.
        nf * tx[1] * tx[1] - libm::sqrt(nf * (nf - 1.0)) * tx[0] * tx[2]
    } else {
        libm::sqrt(nf) * (tx[2] * ty[1] - tx[1] * ty[2]) / d
    }
}

/// `Σ_{k<n} ψ_k(x) ψ_k(y)` in Christoffel–Darboux form.
pub fn kernel_cd(n: u64, x: f64, y: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let tx = tail_at(n, x);
    let ty = if x == y { tx } else { tail_at(n, y) };
    cd_from_tails(n, x, &tx, y, &ty)
}

/// Evaluator for `K_J` of a block spec as a signed sum of Christoffel–Darboux
/// kernels, one per block endpoint.
///
/// [`BlockKernel::features`] runs one recurrence sweep per point; kernels on
/// a grid of points then cost `O(B)` per pair.
#[derive(Debug, Clone)]
pub struct BlockKernel {
    /// Distinct nonzero endpoints with their net sign, ascending.
    endpoints: Vec<(u64, f64)>,
    /// Sorted distinct levels `n-2, n-1, n` over all endpoints.
    levels: Vec<u64>,
    /// Positions in `levels` of each endpoint's tail.
    tail_index: Vec<[usize; 3]>,
}

/// Per-point recurrence values used by [`BlockKernel`].
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointValues {
    x: f64,
    tails: Vec<Tail>,
}

impl EndpointValues {
    pub fn point(&self) -> f64 {
        self.x
    }
}

impl BlockKernel {
    pub fn new(spec: &BlockSpec) -> Self {
        let mut raw = Vec::new();
        for &(lo, hi) in spec.level_bounds() {
            raw.push((lo, -1.0));
            raw.push((hi, 1.0));
        }
        raw.sort_by_key(|e| e.0);
        // Adjacent blocks share an endpoint whose two terms cancel.
        let mut endpoints: Vec<(u64, f64)> = Vec::new();
        for (n, sign) in raw {
            match endpoints.last_mut() {
                Some(last) if last.0 == n => last.1 += sign,
                _ => endpoints.push((n, sign)),
            }
        }
        endpoints.retain(|&(n, sign)| n > 0 && sign != 0.0);
        let mut levels: Vec<u64> = endpoints.iter().flat_map(|e| tail_levels(e.0)).collect();
        levels.sort_unstable();
        levels.dedup();
        let tail_index = endpoints
            .iter()
            .map(|e| tail_levels(e.0).map(|k| levels.binary_search(&k).expect("tail level present")))
            .collect();
        Self {
            endpoints,
            levels,
            tail_index,
        }
    }

    pub fn features(&self, x: f64) -> EndpointValues {
        let mut raw = vec![0.0; self.levels.len()];
        psi_at_levels(&self.levels, x, &mut raw);
        let tails = self
            .endpoints
            .iter()
            .zip(&self.tail_index)
            .map(|(&(n, _), idx)| mask_tail(n, idx.map(|i| raw[i])))
            .collect();
        EndpointValues { x, tails }
    }

    pub fn eval_features(&self, fx: &EndpointValues, fy: &EndpointValues) -> f64 {
        self.endpoints
            .iter()
            .zip(fx.tails.iter().zip(&fy.tails))
            .map(|(&(n, sign), (tx, ty))| sign * cd_from_tails(n, fx.x, tx, fy.x, ty))
            .sum()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let fx = self.features(x);
        if x == y {
            return self.eval_features(&fx, &fx);
        }
        self.eval_features(&fx, &self.features(y))
    }
}

/// `K_J(x, y)` as `Σ_j [K_{⌊(a_j+w_j)²M⌋} - K_{⌊a_j²M⌋}]`.
pub fn kernel_block(spec: &BlockSpec, x: f64, y: f64) -> f64 {
    BlockKernel::new(spec).eval(x, y)
}

/// One-point density `ρ_1(x) = K_J(x, x)`.
pub fn density_finite(spec: &BlockSpec, x: f64) -> f64 {
    kernel_block(spec, x, x)
}

/// Provenance of a [`KernelGrid`].
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSource {
    FiniteM(BlockSpec),
    Limit(LimitKernel),
}

impl KernelSource {
    /// Kernel matrix on `points`, each unordered pair evaluated once.
    pub fn matrix(&self, points: &[f64]) -> Matrix {
        match self {
            KernelSource::FiniteM(spec) => {
                let kernel = BlockKernel::new(spec);
                let features: Vec<_> = points.iter().map(|&x| kernel.features(x)).collect();
                Matrix::symmetric_from_fn(points.len(), |i, j| {
                    kernel.eval_features(&features[i], &features[j])
                })
            }
            KernelSource::Limit(k) => {
                Matrix::symmetric_from_fn(points.len(), |i, j| bulk_kernel(k, points[i] - points[j]))
            }
        }
    }
}

/// Symmetric kernel matrix on a sorted point set.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid {
    points: Vec<f64>,
    values: Matrix,
    source: KernelSource,
}

impl KernelGrid {
    /// Sorts `points` and evaluates the kernel once per unordered pair.
    pub fn new(source: KernelSource, mut points: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::domain("KernelGrid", bad, "points must be finite"));
        }
        points.sort_by(f64::total_cmp);
        let values = source.matrix(&points);
        Ok(Self {
            points,
            values,
            source,
        })
    }

    pub fn finite(spec: &BlockSpec, points: Vec<f64>) -> Result<Self> {
        Self::new(KernelSource::FiniteM(spec.clone()), points)
    }

    pub fn limit(kernel: &LimitKernel, points: Vec<f64>) -> Result<Self> {
        Self::new(KernelSource::Limit(kernel.clone()), points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn source(&self) -> &KernelSource {
        &self.source
    }
}

/// Semicircle value `√(4N)/(2π)` at the origin; handy for rescaling.
pub fn ground_state_peak(n: u64) -> f64 {
    libm::sqrt(4.0 * n as f64) / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_line, QuadratureSpec};

    fn spec(blocks: &[(f64, f64)], m: u64) -> BlockSpec {
        BlockSpec::new(
            blocks.iter().map(|&(a, w)| Block::new(a, w)).collect(),
            m,
            Parity::Custom,
        )
        .unwrap()
    }

    #[test]
    fn level_sets() {
        assert_eq!(spec(&[(0.0, 1.0)], 5).levels(), vec![0, 1, 2, 3, 4]);
        let s = spec(&[(1.0, 1.0)], 4);
        assert_eq!(s.levels(), (4..16).collect::<Vec<_>>());
        assert_eq!(s.n(), 12);
        let s = spec(&[(0.0, 0.5), (2.0, 1.0)], 8);
        let mut expected = vec![0, 1];
        expected.extend(32..72);
        assert_eq!(s.levels(), expected);
        assert_eq!(s.num_blocks(), 2);
        assert_eq!(s.total_width(), 1.5);
    }

    #[test]
    fn overlapping_blocks_name_the_pair() {
        let err = BlockSpec::new(
            vec![Block::new(0.0, 1.5), Block::new(1.0, 1.0)],
            4,
            Parity::Custom,
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::BlocksOverlap {
                first: 0,
                second: 1,
                first_end: 9,
                second_start: 4
            }
        );
    }

    #[test]
    fn parity_rules() {
        let even = BlockSpec::new(vec![Block::new(1.0, 1.0), Block::new(3.0, 1.0)], 4, Parity::Even);
        assert!(even.is_ok());
        assert!(BlockSpec::new(vec![Block::new(1.0, 1.0), Block::new(3.0, 2.0)], 4, Parity::Even).is_err());
        assert!(BlockSpec::new(vec![Block::new(0.0, 1.0)], 4, Parity::Even).is_err());
        assert!(BlockSpec::new(vec![Block::new(0.0, 0.5), Block::new(2.0, 1.0)], 8, Parity::Odd).is_ok());
        assert!(BlockSpec::new(vec![Block::new(0.0, 1.0), Block::new(2.0, 1.0)], 8, Parity::Odd).is_err());
        assert!(BlockSpec::new(vec![Block::new(0.5, 0.5), Block::new(2.0, 1.0)], 8, Parity::Odd).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(BlockSpec::new(vec![], 4, Parity::Custom).is_err());
        assert!(BlockSpec::new(vec![Block::new(1.0, 1.0)], 0, Parity::Custom).is_err());
        assert!(BlockSpec::new(vec![Block::new(-1.0, 1.0)], 4, Parity::Custom).is_err());
        assert!(BlockSpec::new(vec![Block::new(1.0, 0.0)], 4, Parity::Custom).is_err());
        // (0.1 + 0.1)^2 * 4 = 0.16 floors to an empty block.
        assert!(BlockSpec::new(vec![Block::new(0.1, 0.1)], 4, Parity::Custom).is_err());
    }

    #[test]
    fn psi_closed_forms() {
        assert!((psi(0, 0.0) - 0.631_618_777_8).abs() < 1e-10);
        assert_eq!(psi(1, 0.0), 0.0);
        assert_eq!(psi_prime(0, 0.0), 0.0);
        assert!((psi_prime(1, 0.0) - PSI0_NORM).abs() < 1e-15);
        // ψ_1 = x ψ_0, ψ_2 = (x² - 1) ψ_0 / √2
        let x = 0.7;
        assert!((psi(1, x) - x * psi(0, x)).abs() < 1e-15);
        assert!((psi(2, x) - (x * x - 1.0) * psi(0, x) / libm::sqrt(2.0)).abs() < 1e-15);
    }

    #[test]
    fn psi_prime_matches_central_difference() {
        let h = 1e-5;
        for (k, x) in [(10u64, 1.3), (3, -0.4), (50, 7.1), (0, 2.0)] {
            let fd = (psi(k, x + h) - psi(k, x - h)) / (2.0 * h);
            assert!((psi_prime(k, x) - fd).abs() < 1e-7, "k={k} x={x}");
        }
    }

    #[test]
    fn high_levels_survive_ground_state_underflow() {
        // ψ_0(80) underflows but level 10^4 is allowed out to |x| = 200.
        let v = psi(10_000, 80.0);
        assert!(v != 0.0 && v.abs() < 1.0);
        // Far beyond every turning point the value underflows to zero.
        assert_eq!(psi(4, 60.0), 0.0);
    }

    #[test]
    fn orthonormal_up_to_level_twenty() {
        let q = QuadratureSpec::default();
        for j in 0..=20u64 {
            for k in j..=20u64 {
                let v = integrate_line(|x| psi(j, x) * psi(k, x), 0.0, 2.0, &q)
                    .unwrap()
                    .value;
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-9, "<{j},{k}> = {v}");
            }
        }
    }

    #[test]
    fn direct_sum_closed_forms() {
        assert!((kernel_direct(&[0], 0.0, 0.0) - 0.398_942_280_4).abs() < 1e-10);
        assert!((kernel_direct(&[0, 1], 0.0, 1.0) - psi(0, 0.0) * psi(0, 1.0)).abs() < 1e-16);
    }

    #[test]
    fn christoffel_darboux_matches_direct_sum() {
        let ten: Vec<u64> = (0..10).collect();
        let (a, b) = (kernel_cd(10, 0.3, -0.7), kernel_direct(&ten, 0.3, -0.7));
        assert!(((a - b) / b).abs() < 1e-10);
        assert!((kernel_cd(1, 0.0, 0.0) - 1.0 / libm::sqrt(2.0 * PI)).abs() < 1e-15 * 4.0);
        let diag: f64 = ten.iter().map(|&k| psi(k, 0.0).powi(2)).sum();
        assert!((kernel_cd(10, 0.0, 0.0) - diag).abs() < 1e-10);
        let hundred: Vec<u64> = (0..100).collect();
        let (a, b) = (kernel_cd(100, 0.0, 0.1), kernel_direct(&hundred, 0.0, 0.1));
        assert!(((a - b) / b).abs() < 1e-9);
    }

    #[test]
    fn block_kernel_matches_direct_sum() {
        let g = BlockSpec::ground_state(30).unwrap();
        assert!((kernel_block(&g, 0.4, -1.1) - kernel_cd(30, 0.4, -1.1)).abs() < 1e-14);

        let s = spec(&[(1.0, 1.0)], 4);
        let direct = kernel_direct(&s.levels(), 0.0, 0.0);
        assert!(((kernel_block(&s, 0.0, 0.0) - direct) / direct).abs() < 1e-10);

        let s = spec(&[(1.0, 1.0), (3.0, 1.0)], 4);
        let direct = kernel_direct(&s.levels(), 0.5, -0.5);
        assert!(((kernel_block(&s, 0.5, -0.5) - direct) / direct).abs() < 1e-10);
    }

    #[test]
    fn trace_equals_particle_number() {
        let s = spec(&[(1.0, 1.0)], 4);
        let q = QuadratureSpec::default();
        let n = integrate_line(|x| density_finite(&s, x), 0.0, 2.0, &q)
            .unwrap()
            .value;
        assert!((n - 12.0).abs() < 1e-6 * 12.0, "{n}");
    }

    #[test]
    fn density_matches_semicircle_and_two_block_asymptotes() {
        let g = BlockSpec::ground_state(100).unwrap();
        let semicircle = libm::sqrt(400.0) / (2.0 * PI);
        assert!(((density_finite(&g, 0.0) - semicircle) / semicircle).abs() < 0.02);
        let s = BlockSpec::single_block(1.0, 20).unwrap();
        let target = libm::sqrt(20.0) / PI;
        assert!(((density_finite(&s, 0.0) - target) / target).abs() < 0.05);
    }

    #[test]
    fn kernel_grid_is_symmetric_and_sorted() {
        let s = spec(&[(1.0, 1.0)], 4);
        let grid = KernelGrid::finite(&s, vec![1.0, -2.0, 0.3, 0.0]).unwrap();
        assert_eq!(grid.points(), &[-2.0, 0.0, 0.3, 1.0]);
        assert!(grid.values().is_symmetric());
        assert!(KernelGrid::finite(&s, vec![f64::NAN]).is_err());
    }
}
