//! Process-level statistics: correlation functions, structure factor, number
//! variance (finite `M`, bulk limit, α-limit and its expansions) and the
//! windowed weak-convergence checks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::alpha_det::{alpha_corr, alpha_det, AlphaParam};
use crate::asymptotics::LimitKernel;
use crate::fermion::{density_finite, BlockKernel, BlockSpec, EndpointValues, KernelSource};
use crate::numerics::{integrate_1d, integrate_2d, sinc, Integrand2d, Matrix, QuadratureSpec, Rect};
use crate::{Error, Result};

/// Euler–Mascheroni constant `γ_E`.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest point count for determinantal correlation evaluation.
pub const CORR_MAX: usize = 12;

/// A labelled `(x, y)` series with optional standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct StatSeries {
    pub label: String,
    pub x_unit: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub y_err: Option<Vec<f64>>,
    pub meta: BTreeMap<String, String>,
}

impl StatSeries {
    pub fn new(
        label: impl Into<String>,
        x_unit: impl Into<String>,
        x: Vec<f64>,
        y: Vec<f64>,
    ) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidParameter(format!(
                "series has {} abscissae but {} values",
                x.len(),
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "series abscissae must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            x_unit: x_unit.into(),
            x,
            y,
            y_err: None,
            meta: BTreeMap::new(),
        })
    }

    pub fn with_errors(mut self, err: Vec<f64>) -> Result<Self> {
        if err.len() != self.y.len() {
            return Err(Error::InvalidParameter(
                "error bars must match the series length".into(),
            ));
        }
        self.y_err = Some(err);
        Ok(self)
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.meta.insert(key.into(), value.into());
        self
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Where correlation functions come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationSource {
    /// `ρ_n = det[K(x_i, x_j)]`.
    Determinantal(KernelSource),
    /// `ρ_n = det_α[k(x_i - x_j)]`.
    Alpha { alpha: AlphaParam, kernel: LimitKernel },
}

/// `ρ_n(x_1, …, x_n)`.
pub fn corr_n(source: &CorrelationSource, points: &[f64]) -> Result<f64> {
    match source {
        CorrelationSource::Determinantal(k) => {
            if points.len() > CORR_MAX {
                return Err(Error::Size {
                    method: "corr_n",
                    n: points.len(),
                    max: CORR_MAX,
                    hint: "",
                });
            }
            Ok(k.matrix(points).determinant())
        }
        CorrelationSource::Alpha { alpha, kernel } => alpha_corr(*alpha, kernel, points),
    }
}

/// `1 + α sinc²(π|α| s)`, the two-point function of the `α`-process with the
/// scaled sine kernel.
pub fn rho2_limit(alpha: f64, s: f64) -> f64 {
    1.0 + total_correlation(alpha, s)
}

/// Three-point function of the `α = -1/2` limit process.
pub fn rho3_limit_half(x1: f64, x2: f64, x3: f64) -> f64 {
    let k = |d: f64| sinc(0.5 * PI * d);
    let (a, b, c) = (k(x1 - x2), k(x2 - x3), k(x3 - x1));
    1.0 - 0.5 * (a * a + b * b + c * c) + 0.5 * a * b * c
}

/// `S(k) = |k|/(2π|α|)` inside `|k| ≤ 2π|α|`, one outside.
pub fn structure_factor(alpha: f64, k: f64) -> f64 {
    let edge = 2.0 * PI * alpha.abs();
    if k.abs() <= edge {
        k.abs() / edge
    } else {
        1.0
    }
}

/// `h(r) = ρ_2(r) - 1 = α sinc²(π|α| r)`.
pub fn total_correlation(alpha: f64, r: f64) -> f64 {
    let u = sinc(PI * alpha.abs() * r);
    alpha * u * u
}

/// `h(r)` recomputed from `S(k)` by the inverse Fourier transform
/// `h(r) = (1/π) ∫_0^{2π|α|} (S(k) - 1) cos(kr) dk` (the integrand vanishes
/// beyond the kink).
pub fn total_correlation_from_structure_factor(alpha: f64, r: f64, q: &QuadratureSpec) -> Result<f64> {
    let edge = 2.0 * PI * alpha.abs();
    let v = integrate_1d(
        |k| (structure_factor(alpha, k) - 1.0) * libm::cos(k * r),
        0.0,
        edge,
        q,
    )?;
    Ok(v / PI)
}

/// `∫_a^b f` as a sum of adaptive integrals over pieces of length at most
/// `piece`, so long oscillatory ranges cannot fool the first error estimate.
fn integrate_pieces<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, piece: f64, q: &QuadratureSpec) -> Result<f64> {
    let count = libm::ceil((b - a) / piece).max(1.0) as usize;
    let h = (b - a) / count as f64;
    let mut total = 0.0;
    for i in 0..count {
        let lo = a + h * i as f64;
        let hi = if i + 1 == count { b } else { lo + h };
        total += integrate_1d(&f, lo, hi, q)?;
    }
    Ok(total)
}

/// `L - 2 ∫_0^L (L - u) k(u)² du`: the number variance of a box of length `L`
/// for a translation-invariant determinantal kernel with unit density.
pub fn number_variance_kernel_fn<F: Fn(f64) -> f64>(k: F, l: f64, q: &QuadratureSpec) -> Result<f64> {
    check_length(l)?;
    let pair = integrate_pieces(|u| (l - u) * k(u) * k(u), 0.0, l, 1.0, q)?;
    Ok(l - 2.0 * pair)
}

fn check_length(l: f64) -> Result<()> {
    if !(l.is_finite() && l >= 0.0) {
        return Err(Error::domain(
            "number variance",
            l,
            "box length must be finite and >= 0",
        ));
    }
    Ok(())
}

/// Bulk-limit number variance `L + α' ∬ k(x - y)² dx dy` with
/// `α' = kernel.process_alpha()`: `-1` for fermion limit kernels, `α` for the
/// scaled sine kernel of an `α`-process.
pub fn number_variance_bulk(kernel: &LimitKernel, l: f64, q: &QuadratureSpec) -> Result<f64> {
    let weight = -kernel.process_alpha();
    number_variance_kernel_fn(|u| libm::sqrt(weight) * kernel.eval(u), l, q)
}

/// Number variance of the `α`-process with the scaled sine kernel,
/// `L + α ∬ sinc²(π|α|(x - y)) dx dy`.
pub fn number_variance_alpha(alpha: f64, l: f64, q: &QuadratureSpec) -> Result<f64> {
    check_length(l)?;
    let beta = PI * alpha.abs();
    let pair = integrate_pieces(
        |u| {
            let s = sinc(beta * u);
            (l - u) * s * s
        },
        0.0,
        l,
        1.0 / alpha.abs().max(1e-300),
        q,
    )?;
    Ok(l + 2.0 * alpha * pair)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Small,
    Large,
}

/// Asymptotic expansions of [`number_variance_alpha`] for small and large `L`.
pub fn nv_expansion(alpha: f64, l: f64, regime: Regime) -> f64 {
    match regime {
        Regime::Small => {
            let (a2, l2) = (alpha * alpha, l * l);
            l + alpha * l2 - PI * PI * alpha * a2 * l2 * l2 / 18.0
                + 2.0 * (PI * PI) * (PI * PI) * alpha * a2 * a2 * l2 * l2 * l2 / 675.0
        }
        Regime::Large => {
            -(libm::log(l) + libm::log(-2.0 * PI * alpha) + 1.0 + EULER_GAMMA) / (alpha * PI * PI)
        }
    }
}

/// `K_J(x, y)²` on panel grids, sharing one recurrence sweep per coordinate.
struct SquaredBlockKernel<'a> {
    kernel: &'a BlockKernel,
}

impl Integrand2d for SquaredBlockKernel<'_> {
    fn eval_grid(&self, xs: &[f64], ys: &[f64], out: &mut [f64]) {
        let fx: Vec<EndpointValues> = xs.iter().map(|&x| self.kernel.features(x)).collect();
        let fy: Vec<EndpointValues> = ys.iter().map(|&y| self.kernel.features(y)).collect();
        for (i, a) in fx.iter().enumerate() {
            for (j, b) in fy.iter().enumerate() {
                let k = self.kernel.eval_features(a, b);
                out[i * ys.len() + j] = k * k;
            }
        }
    }
}

/// Number variance of `[c - L/2, c + L/2]` at finite `M`:
/// `∫ K(x, x) dx - ∬ K(x, y)² dx dy`.
pub fn number_variance_window(spec: &BlockSpec, center: f64, l: f64, q: &QuadratureSpec) -> Result<f64> {
    check_length(l)?;
    let (lo, hi) = (center - 0.5 * l, center + 0.5 * l);
    let kernel = BlockKernel::new(spec);
    let mean = integrate_1d(
        |x| {
            let f = kernel.features(x);
            kernel.eval_features(&f, &f)
        },
        lo,
        hi,
        q,
    )?;
    let pair = integrate_2d(&SquaredBlockKernel { kernel: &kernel }, Rect::square(lo, hi), q)?;
    Ok(mean - pair)
}

/// Number variance of `[-L/2, L/2]` at finite `M`.
pub fn number_variance_finite(spec: &BlockSpec, l: f64, q: &QuadratureSpec) -> Result<f64> {
    number_variance_window(spec, 0.0, l, q)
}

/// Finite-`M` number variance of a box holding `L` particles on average at
/// the origin: the box length is `L / ρ_1(0)` with the exact finite density.
pub fn number_variance_rescaled(spec: &BlockSpec, l: f64, q: &QuadratureSpec) -> Result<f64> {
    let rho = density_finite(spec, 0.0);
    number_variance_finite(spec, l / rho, q)
}

/// `|∫_{[0,ℓ]^n} (det[k(x_i - x_j)] - det_α[sinc(π|α|(x_i - x_j))]) dx|` for
/// `n ∈ {2, 3}`: the windowed discrepancy between a bulk kernel and its
/// weak α-limit.
///
/// Translation invariance reduces the cube to difference variables: for
/// `n = 2` a single integral with weight `ℓ - |u|`, for `n = 3` ordered
/// triples with spacings `u, v ≥ 0` and weight `ℓ - u - v`.
pub fn weak_convergence_gap(
    n: usize,
    kernel: &LimitKernel,
    target: AlphaParam,
    side: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    let m = target
        .m()
        .ok_or_else(|| Error::InvalidParameter(format!("target alpha {} is not -1/m", target.value())))?;
    let reference = LimitKernel::scaled_sine(m)?;
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::domain(
            "weak_convergence_gap",
            side,
            "window side must be positive",
        ));
    }
    let alpha = target.value();
    match n {
        2 => {
            let diff = |u: f64| {
                let k = kernel.eval(u);
                let r = reference.eval(u);
                -k * k - alpha * r * r
            };
            let v = integrate_pieces(|u| 2.0 * (side - u) * diff(u), 0.0, side, 0.25, q)?;
            Ok(v.abs())
        }
        3 => {
            let det3 = |x: f64, y: f64, a: f64, k: &dyn Fn(f64) -> f64| -> f64 {
                let (p, r, s) = (k(x), k(y), k(x + y));
                let m = Matrix::from_rows(3, vec![1.0, p, s, p, 1.0, r, s, r, 1.0]);
                alpha_det(a, &m).unwrap_or(f64::NAN)
            };
            let kf = |u: f64| kernel.eval(u);
            let rf = |u: f64| reference.eval(u);
            // u ∈ [0, ℓ], v = (ℓ - u) t with t ∈ [0, 1].
            let f = |u: f64, t: f64| {
                let span = side - u;
                let v = span * t;
                let w = side - u - v;
                6.0 * w * span * (det3(u, v, -1.0, &kf) - det3(u, v, alpha, &rf))
            };
            let mut total = 0.0;
            let pieces = libm::ceil(side / 0.25).max(1.0) as usize;
            let h = side / pieces as f64;
            for i in 0..pieces {
                for j in 0..pieces {
                    let rect = Rect::new(
                        h * i as f64,
                        h * (i + 1) as f64,
                        j as f64 / pieces as f64,
                        (j + 1) as f64 / pieces as f64,
                    );
                    total += integrate_2d(&f, rect, q)?;
                }
            }
            Ok(total.abs())
        }
        _ => Err(Error::InvalidParameter(format!(
            "weak_convergence_gap supports n = 2 or 3, got {n}"
        ))),
    }
}

/// Validates a permutation given as images `σ(i)` and returns its cycle lengths.
pub fn cycle_lengths(sigma: &[usize]) -> Result<Vec<usize>> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::InvalidParameter(format!(
                "{sigma:?} is not a permutation of 0..{n}"
            )));
        }
        seen[s] = true;
    }
    seen.iter_mut().for_each(|s| *s = false);
    let mut lengths = Vec::new();
    for start in 0..n {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i];
            len += 1;
        }
        if len > 0 {
            lengths.push(len);
        }
    }
    Ok(lengths)
}

/// `∫_{[0,1]^n} Π_i cos(ω(x_{σ(i)} - x_i)) dx - (1/2)^{n - m(σ)}`.
///
/// `cos(ω(x - y))` is the inner product of `(cos ωx, sin ωx)` with
/// `(cos ωy, sin ωy)`, so a cycle of length `ℓ` integrates to `tr G^ℓ` with
/// `G` the 2×2 Gram matrix of `cos ωx`, `sin ωx` on `[0, 1]`; the integral
/// is the product over cycles.
pub fn cos_cycle_limit_check(sigma: &[usize], omega: f64, q: &QuadratureSpec) -> Result<f64> {
    let lengths = cycle_lengths(sigma)?;
    let cc = integrate_1d(|x| libm::cos(omega * x) * libm::cos(omega * x), 0.0, 1.0, q)?;
    let cs = integrate_1d(|x| libm::cos(omega * x) * libm::sin(omega * x), 0.0, 1.0, q)?;
    let ss = integrate_1d(|x| libm::sin(omega * x) * libm::sin(omega * x), 0.0, 1.0, q)?;
    let trace_power = |len: usize| {
        let (mut a, mut b, mut c, mut d) = (1.0, 0.0, 0.0, 1.0);
        for _ in 0..len {
            (a, b, c, d) = (a * cc + b * cs, a * cs + b * ss, c * cc + d * cs, c * cs + d * ss);
        }
        a + d
    };
    let integral: f64 = lengths.iter().map(|&l| trace_power(l)).product();
    let expected = libm::pow(0.5, (sigma.len() - lengths.len()) as f64);
    Ok(integral - expected)
}
