//! The α-determinant
//!
//! `det_α A = Σ_{σ ∈ S_n} α^{n - m(σ)} Π_i A[σ(i)][i]`, with `m(σ)` the number
//! of cycles of `σ`. `det_{-1}` is the determinant, `det_1` the permanent and
//! `det_0` the product of the diagonal.
//!
//! Two exact evaluators are provided: factorial enumeration (ground truth for
//! small `n`) and a subset dynamic program over the cycle through the
//! smallest unused index.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::asymptotics::LimitKernel;
use crate::numerics::Matrix;
use crate::{Error, Result};

pub const BRUTEFORCE_MAX: usize = 9;
pub const CYCLES_MAX: usize = 16;
pub const SUPERPOSITION_MAX: usize = 8;

/// The exponent parameter `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaParam {
    alpha: f64,
}

impl AlphaParam {
    /// Any real `α`, for matrix-level use.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    /// `α` as a point-process parameter; negative values must be `-1/m`.
    pub fn process(alpha: f64) -> Result<Self> {
        let p = Self::new(alpha)?;
        if alpha < 0.0 && p.m().is_none() {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} does not define a point process: negative alpha must be -1/m with m a positive integer"
            )));
        }
        Ok(p)
    }

    /// `α = -1/m`.
    pub fn from_m(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be >= 1".into()));
        }
        Ok(Self {
            alpha: -1.0 / m as f64,
        })
    }

    pub fn value(self) -> f64 {
        self.alpha
    }

    /// `m = -1/α` if `α` is of that form.
    pub fn m(self) -> Option<u64> {
        if self.alpha >= 0.0 {
            return None;
        }
        let m = -1.0 / self.alpha;
        let r = libm::round(m);
        ((m - r).abs() <= 1e-9 * r && r >= 1.0).then_some(r as u64)
    }
}

fn check_size(method: &'static str, n: usize, max: usize, hint: &'static str) -> Result<()> {
    if n > max {
        return Err(Error::Size { method, n, max, hint });
    }
    Ok(())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cycle_count(p: &[usize], seen: &mut [bool]) -> usize {
    seen.iter_mut().for_each(|s| *s = false);
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
        }
    }
    cycles
}

/// `det_α A` by enumerating all `n!` permutations in lexicographic order.
pub fn alpha_det_bruteforce(alpha: f64, a: &Matrix) -> Result<f64> {
    let n = a.size();
    check_size(
        "alpha_det_bruteforce",
        n,
        BRUTEFORCE_MAX,
        "; use alpha_det_cycles for larger matrices",
    )?;
    let powers: Vec<f64> = (0..=n).map(|k| libm::pow(alpha, k as f64)).collect();
    let mut p: Vec<usize> = (0..n).collect();
    let mut seen = vec![false; n];
    let mut total = 0.0;
    loop {
        let prod: f64 = (0..n).map(|i| a[(p[i], i)]).product();
        if prod != 0.0 {
            total += powers[n - cycle_count(&p, &mut seen)] * prod;
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    Ok(total)
}

/// `Σ` over cyclic permutations of the index set `mask` of `Π A[σ(i)][i]`,
/// for every nonempty `mask`.
fn cycle_sums(a: &Matrix) -> Vec<f64> {
    let n = a.size();
    let full = 1usize << n;
    let mut cyc = vec![0.0; full];
    // paths[mask * n + v]: sum over paths from min(mask) visiting exactly `mask`, ending at v.
    let mut paths = vec![0.0; full * n];
    for s in 0..n {
        let start = 1usize << s;
        paths[start * n + s] = 1.0;
        // Masks with lowest set bit s are start | (higher bits); they increase numerically.
        let higher = n - s - 1;
        for rest in 0..(1usize << higher) {
            let mask = start | (rest << (s + 1));
            let mut closed = 0.0;
            for v in s..n {
                let g = paths[mask * n + v];
                if g == 0.0 {
                    continue;
                }
                closed += g * a[(s, v)];
                for u in (s + 1)..n {
                    if mask & (1 << u) == 0 {
                        let next = mask | (1 << u);
                        paths[next * n + u] += g * a[(u, v)];
                    }
                }
            }
            cyc[mask] = closed;
        }
    }
    cyc
}

/// `det_α A` by a subset dynamic program, `O(3^n + 2^n n²)`.
pub fn alpha_det_cycles(alpha: f64, a: &Matrix) -> Result<f64> {
    let n = a.size();
    check_size("alpha_det_cycles", n, CYCLES_MAX, "")?;
    if n == 0 {
        return Ok(1.0);
    }
    let powers: Vec<f64> = (0..=n).map(|k| libm::pow(alpha, k as f64)).collect();
    let cyc = cycle_sums(a);
    let full = 1usize << n;
    let mut f = vec![0.0; full];
    f[0] = 1.0;
    for set in 1..full {
        let low = set & set.wrapping_neg();
        let rest = set ^ low;
        let mut total = 0.0;
        // Submasks of `rest` in decreasing order, the empty one last.
        let mut sub = rest;
        loop {
            let cycle = sub | low;
            let c = cyc[cycle];
            if c != 0.0 {
                total += powers[cycle.count_ones() as usize - 1] * c * f[set ^ cycle];
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        f[set] = total;
    }
    Ok(f[full - 1])
}

/// `det_α` with the cheapest exact method: LU for `α = -1`, the product of
/// the diagonal for `α = 0`, otherwise the subset program.
pub fn alpha_det(alpha: f64, a: &Matrix) -> Result<f64> {
    if alpha == -1.0 {
        return Ok(a.determinant());
    }
    if alpha == 0.0 {
        return Ok((0..a.size()).map(|i| a[(i, i)]).product());
    }
    alpha_det_cycles(alpha, a)
}

/// `ρ_n(x_1, …, x_n) = det_α [k(x_i - x_j)]`.
pub fn alpha_corr(alpha: AlphaParam, kernel: &LimitKernel, points: &[f64]) -> Result<f64> {
    check_size("alpha_corr", points.len(), CYCLES_MAX, "")?;
    let a = Matrix::symmetric_from_fn(points.len(), |i, j| kernel.eval(points[i] - points[j]));
    alpha_det(alpha.value(), &a)
}

/// `Σ_c Π_g det[A/m]_{c^{-1}(g)}` over all colourings `c` of the rows with
/// `m` colours: the correlation of a union of `m` independent determinantal
/// processes with kernel `A/m`.
pub fn superposition_matrix(m: u64, a: &Matrix) -> Result<f64> {
    let n = a.size();
    check_size("superposition_corr", n, SUPERPOSITION_MAX, "")?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let scale = 1.0 / m as f64;
    // det of the scaled principal submatrix for every subset of rows.
    let dets: Vec<f64> = (0..(1usize << n))
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let k = idx.len() as i32;
            a.principal(&idx).determinant() * libm::pow(scale, k as f64)
        })
        .collect();
    let mut colours = vec![0u64; n];
    let mut total = 0.0;
    loop {
        let mut prod = 1.0;
        for g in 0..m {
            let mask = (0..n)
                .filter(|&i| colours[i] == g)
                .fold(0usize, |acc, i| acc | (1 << i));
            prod *= dets[mask];
            if prod == 0.0 {
                break;
            }
        }
        total += prod;
        // Odometer increment over {0..m}^n.
        let mut i = 0;
        while i < n {
            colours[i] += 1;
            if colours[i] < m {
                break;
            }
            colours[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(total)
}

/// [`superposition_matrix`] on the matrix `base(x_i - x_j)`.
pub fn superposition_corr<F: Fn(f64) -> f64>(m: u64, base: F, points: &[f64]) -> Result<f64> {
    check_size("superposition_corr", points.len(), SUPERPOSITION_MAX, "")?;
    let a = Matrix::symmetric_from_fn(points.len(), |i, j| base(points[i] - points[j]));
    superposition_matrix(m, &a)
}
