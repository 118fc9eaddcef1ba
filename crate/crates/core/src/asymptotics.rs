//! Large-`M` limits: one-point densities, translation-invariant bulk
//! kernels, the cusp family, the rescaled Airy edge kernel and the circular
//! kernels `S_n`.
//!
//! Bulk kernels are normalised to unit density, `k(0) = 1`, and all have the
//! shape `k(s) = sinc(λ s) · (c_0 + c Σ_j cos(ω_j s))`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::fermion::{Block, BlockSpec, Parity};
use crate::numerics::{airy, sinc};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitKind {
    PureSine,
    SingleBlock {
        a: f64,
    },
    EvenType,
    OddType,
    /// Bulk kernel near `x = 2b√M` for the block `[a²M, (a+1)²M)`.
    Cusp {
        a: f64,
        b: f64,
    },
    ScaledSine,
}

/// Descriptor of a translation-invariant limit kernel `k(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitKernel {
    m: u64,
    sinc_scale: f64,
    constant: f64,
    weight: f64,
    frequencies: Vec<f64>,
    kind: LimitKind,
}

impl LimitKernel {
    /// `sin(πs)/(πs)`, the `α = -1` bulk of the ground state.
    pub fn pure_sine() -> Self {
        Self {
            m: 1,
            sinc_scale: PI,
            constant: 1.0,
            weight: 0.0,
            frequencies: Vec::new(),
            kind: LimitKind::PureSine,
        }
    }

    /// `sinc(πs/2) cos(π(a + 1/2) s)` for the excited block `[a²M, (a+1)²M)`.
    pub fn single_block(a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::domain("single_block", a, "a must be finite and >= 0"));
        }
        Ok(Self {
            m: 2,
            sinc_scale: FRAC_PI_2,
            constant: 0.0,
            weight: 1.0,
            frequencies: vec![PI * (a + 0.5)],
            kind: LimitKind::SingleBlock { a },
        })
    }

    /// `sin(π s/m)/(π s/m)`, the kernel whose `det_{-1/m}` matches the
    /// limits of `m`-block systems after the weak limit.
    pub fn scaled_sine(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("scaled sine requires m >= 1".into()));
        }
        Ok(Self {
            m,
            sinc_scale: PI / m as f64,
            constant: 1.0,
            weight: 0.0,
            frequencies: Vec::new(),
            kind: LimitKind::ScaledSine,
        })
    }

    /// Bulk kernel at `x = 2b√M` for the block `[a²M, (a+1)²M)`.
    ///
    /// Before the cusp (`b ≤ a`) this is `sinc(πs/2) cos(ω(b) s)`; between
    /// the cusp and the outer edge (`a < b < a+1`) the inner disc is no
    /// longer visible and the kernel is the plain sine kernel.
    pub fn cusp(a: f64, b: f64) -> Result<Self> {
        let omega = cusp_omega(a, b)?;
        if b > a {
            return Ok(Self {
                kind: LimitKind::Cusp { a, b },
                ..Self::pure_sine()
            });
        }
        Ok(Self {
            m: 2,
            sinc_scale: FRAC_PI_2,
            constant: 0.0,
            weight: 1.0,
            frequencies: vec![omega],
            kind: LimitKind::Cusp { a, b },
        })
    }

    /// Bulk kernel of an even- or odd-type block spec. Custom specs have no
    /// single-sinc form; use [`blocks_bulk_kernel`] for those.
    pub fn from_blocks(spec: &BlockSpec) -> Result<Self> {
        let blocks = spec.blocks();
        let b = blocks.len() as f64;
        match spec.parity() {
            Parity::Even => {
                let w = blocks[0].w;
                Ok(Self {
                    m: 2 * blocks.len() as u64,
                    sinc_scale: PI / (2.0 * b),
                    constant: 0.0,
                    weight: 1.0 / b,
                    frequencies: blocks
                        .iter()
                        .map(|bl| PI * (2.0 * bl.a + w) / (2.0 * w * b))
                        .collect(),
                    kind: LimitKind::EvenType,
                })
            }
            Parity::Odd => {
                let w = 2.0 * blocks[0].w;
                let half = b - 0.5;
                Ok(Self {
                    m: 2 * blocks.len() as u64 - 1,
                    sinc_scale: PI / (2.0 * b - 1.0),
                    constant: 0.5 / half,
                    weight: 1.0 / half,
                    frequencies: blocks[1..]
                        .iter()
                        .map(|bl| PI * (2.0 * bl.a + w) / (2.0 * w * half))
                        .collect(),
                    kind: LimitKind::OddType,
                })
            }
            Parity::Custom => Err(Error::InvalidBlocks(
                "custom block specs have no even/odd limit kernel; use blocks_bulk_kernel".into(),
            )),
        }
    }

    /// `α = -1/m`.
    pub fn alpha(&self) -> f64 {
        -1.0 / self.m as f64
    }

    /// `m = -1/α`.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Exponent of the process this kernel directly describes: `-1` for the
    /// determinantal limits of fermion kernels, `α` for the scaled sine
    /// kernel, which stands for the `α`-process itself.
    pub fn process_alpha(&self) -> f64 {
        match self.kind {
            LimitKind::ScaledSine => self.alpha(),
            _ => -1.0,
        }
    }

    pub fn sinc_scale(&self) -> f64 {
        self.sinc_scale
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn kind(&self) -> LimitKind {
        self.kind
    }

    pub fn eval(&self, s: f64) -> f64 {
        let osc: f64 = self.frequencies.iter().map(|w| libm::cos(w * s)).sum();
        sinc(self.sinc_scale * s) * (self.constant + self.weight * osc)
    }
}

/// `k(s)` for a limit kernel descriptor.
pub fn bulk_kernel(kernel: &LimitKernel, s: f64) -> f64 {
    kernel.eval(s)
}

/// Bulk kernel of an arbitrary block union:
/// `Σ_j (w_j/R) sinc(π w_j s/(2R)) cos(π (2a_j + w_j) s/(2R))`, `R = Σ w_j`.
pub fn blocks_bulk_kernel(blocks: &[Block], s: f64) -> f64 {
    let r: f64 = blocks.iter().map(|b| b.w).sum();
    blocks
        .iter()
        .map(|b| {
            let scale = PI / (2.0 * r);
            (b.w / r) * sinc(scale * b.w * s) * libm::cos(scale * (2.0 * b.a + b.w) * s)
        })
        .sum()
}

/// `(1/2π) √((4N - x²)₊)`.
pub fn semicircle_density(n: u64, x: f64) -> f64 {
    libm::sqrt((4.0 * n as f64 - x * x).max(0.0)) / (2.0 * PI)
}

/// `(1/2π) Σ_j [√((4(a_j+w_j)²M - x²)₊) - √((4a_j²M - x²)₊)]`.
pub fn blocks_density(spec: &BlockSpec, x: f64) -> f64 {
    let m = spec.m() as f64;
    let disc = |r: f64| libm::sqrt((4.0 * r * r * m - x * x).max(0.0));
    spec.blocks()
        .iter()
        .map(|b| disc(b.a + b.w) - disc(b.a))
        .sum::<f64>()
        / (2.0 * PI)
}

/// `(2a+1)M / (π √(4a²M - x²))` inside `|x| < 2a√M`, zero outside.
pub fn arcsine_density(a: f64, m: u64, x: f64) -> f64 {
    let mf = m as f64;
    let d = 4.0 * a * a * mf - x * x;
    if d <= 0.0 {
        return 0.0;
    }
    (2.0 * a + 1.0) * mf / (PI * libm::sqrt(d))
}

/// `((2a+1)M/π) [π/2 + arcsin(x / (2a√M))]`, clamped to `[0, N]`.
pub fn cumulative_arcsine(a: f64, m: u64, x: f64) -> f64 {
    let mf = m as f64;
    let n = (2.0 * a + 1.0) * mf;
    let t = (x / (2.0 * a * libm::sqrt(mf))).clamp(-1.0, 1.0);
    (n / PI * (FRAC_PI_2 + libm::asin(t))).clamp(0.0, n)
}

/// `ω(b) = (π/2) (√((a+1)² - b²) + √(a² - b²)) / (√((a+1)² - b²) - √(a² - b²))`
/// for `0 ≤ b ≤ a`, and `π/2` for `a < b < a + 1`.
pub fn cusp_omega(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::domain("cusp", a, "a must be finite and >= 0"));
    }
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::domain("cusp", b, "b must be finite and >= 0"));
    }
    if b >= a + 1.0 {
        return Err(Error::domain(
            "cusp",
            b,
            "b must lie inside the support, b < a + 1",
        ));
    }
    if b >= a {
        return Ok(FRAC_PI_2);
    }
    let outer = libm::sqrt((a + 1.0) * (a + 1.0) - b * b);
    let inner = libm::sqrt(a * a - b * b);
    Ok(FRAC_PI_2 * (outer + inner) / (outer - inner))
}

/// Cusp-family kernel `k_b(s)`; see [`LimitKernel::cusp`].
pub fn cusp_kernel(a: f64, b: f64, s: f64) -> Result<f64> {
    Ok(LimitKernel::cusp(a, b)?.eval(s))
}

/// Crossover constant `c(τ) = (1 + √(τ/(1+τ))) / (1 - √(τ/(1+τ)))`.
pub fn crossover_c(tau: f64) -> f64 {
    let r = libm::sqrt(tau / (1.0 + tau));
    (1.0 + r) / (1.0 - r)
}

/// Edge rescaling `η = (a+1)^{1/3} / (2a+1)^{1/6}`.
pub fn edge_eta(a: f64) -> f64 {
    libm::cbrt(a + 1.0) / libm::pow(2.0 * a + 1.0, 1.0 / 6.0)
}

/// Parameters of the approach to the cusp at `x = 2b√M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspParams {
    pub a: f64,
    pub b: f64,
    /// `τ` with `b² = a² - 2τa`; zero at and beyond the cusp.
    pub tau: f64,
    pub c: f64,
    pub eta: f64,
}

impl CuspParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        cusp_omega(a, b)?;
        let tau = if a > 0.0 {
            ((a * a - b * b) / (2.0 * a)).max(0.0)
        } else {
            0.0
        };
        Ok(Self {
            a,
            b,
            tau,
            c: crossover_c(tau),
            eta: edge_eta(a),
        })
    }

    /// Point with `b² = a² - 2τa`.
    pub fn from_tau(a: f64, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::domain("cusp", tau, "tau must be finite and >= 0"));
        }
        let b2 = a * a - 2.0 * tau * a;
        if b2 < 0.0 {
            return Err(Error::domain("cusp", tau, "tau must satisfy 2τ <= a"));
        }
        let mut p = Self::new(a, libm::sqrt(b2))?;
        p.tau = tau;
        p.c = crossover_c(tau);
        Ok(p)
    }

    pub fn omega(&self) -> f64 {
        cusp_omega(self.a, self.b).unwrap_or(FRAC_PI_2)
    }
}

/// Rescaled Airy kernel at the outer edge:
/// `[Ai(ηx) Ai'(ηy) - Ai'(ηx) Ai(ηy)] / (x - y)`.
pub fn edge_kernel(a: f64, x: f64, y: f64) -> Result<f64> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::domain("edge_kernel", a, "a must be finite and >= 0"));
    }
    let eta = edge_eta(a);
    let u = airy(eta * x)?;
    if (x - y).abs() < crate::fermion::CD_DIAGONAL_RADIUS {
        return Ok(eta * (u.ai_prime * u.ai_prime - eta * x * u.ai * u.ai));
    }
    let v = airy(eta * y)?;
    Ok((u.ai * v.ai_prime - u.ai_prime * v.ai) / (x - y))
}

/// `S_n(z) = (1/2π) sin(nz/2) / sin(z/2)`, the kernel of `n` consecutive
/// Fourier modes on the circle.
pub fn circular_kernel(n: u64, z: f64) -> f64 {
    let nf = n as f64;
    let half = 0.5 * z;
    let s = libm::sin(half);
    if s.abs() < 1e-8 {
        // sin(z/2) vanishes at z ∈ 2πℤ; the limit there is n/(2π) · (±1)^{n-1}.
        let k = libm::round(z / (2.0 * PI));
        let sign = if (n % 2 == 0) && (k as i64 % 2 != 0) {
            -1.0
        } else {
            1.0
        };
        return sign * nf / (2.0 * PI);
    }
    libm::sin(nf * half) / (2.0 * PI * s)
}
