//! Adaptive Gauss–Legendre quadrature on intervals and rectangles.
//!
//! Both integrators use the same scheme: every region carries the panel rule
//! applied to the whole region and the sum of the rule over its bisected
//! children; their difference is the error estimate. The region with the
//! largest estimate is split until the summed estimate meets
//! `max(absolute_tolerance, relative_tolerance * |I|)`.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Improper integrals are truncated where the integrand stays below this
/// fraction of its observed peak.
pub const TRUNCATION_RATIO: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
    /// Gauss–Legendre points per panel (per axis in 2D).
    pub panel_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            absolute_tolerance: 1e-12,
            max_subdivisions: 50_000,
            panel_order: 16,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        relative_tolerance: f64,
        absolute_tolerance: f64,
        max_subdivisions: usize,
        panel_order: usize,
    ) -> Result<Self> {
        let spec = Self {
            relative_tolerance,
            absolute_tolerance,
            max_subdivisions,
            panel_order,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |t: f64| t.is_finite() && t > 0.0;
        if !positive(self.relative_tolerance) || !positive(self.absolute_tolerance) {
            return Err(Error::InvalidParameter(alloc::format!(
                "quadrature tolerances must be positive (rel {}, abs {})",
                self.relative_tolerance,
                self.absolute_tolerance
            )));
        }
        if self.panel_order < 2 || self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter(alloc::format!(
                "panel order must be at least 2 and max subdivisions at least 1 \
                 (got order {}, subdivisions {})",
                self.panel_order,
                self.max_subdivisions
            )));
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, relative: f64, absolute: f64) -> Self {
        self.relative_tolerance = relative;
        self.absolute_tolerance = absolute;
        self
    }

    fn accepts(&self, estimate: f64, error: f64) -> bool {
        error
            <= self
                .absolute_tolerance
                .max(self.relative_tolerance * estimate.abs())
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the
    /// Tricomi initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let step = p / d;
                z -= step;
                if step.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, z);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes mapped to `[a, b]`, written into `out`.
    pub fn map_nodes(&self, a: f64, b: f64, out: &mut [f64]) {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (o, &t) in out.iter_mut().zip(&self.nodes) {
            *o = mid + half * t;
        }
    }

    /// Single-panel rule on `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * t);
        }
        half * sum
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
    }
    let dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
    (p1, dp)
}

/// Max-heap entry ordered by error estimate, ties broken by insertion order.
struct Region<R> {
    error: f64,
    seq: usize,
    region: R,
    /// Refined value (sum over children).
    value: f64,
    children: [f64; 4],
}

impl<R> PartialEq for Region<R> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<R> Eq for Region<R> {}
impl<R> PartialOrd for Region<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<R> Ord for Region<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn non_finite() -> Error {
    Error::domain("quadrature", f64::NAN, "integrand returned a non-finite value")
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(
            "integrate_1d",
            if a.is_finite() { b } else { a },
            "limits must be finite",
        ));
    }
    if a > b {
        return Err(Error::domain(
            "integrate_1d",
            a,
            "lower limit exceeds upper limit",
        ));
    }
    if a == b {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(spec.panel_order);
    let panel = |lo: f64, hi: f64| -> Result<f64> {
        let v = rule.integrate(&f, lo, hi);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(non_finite())
        }
    };
    let make = |lo: f64, hi: f64, whole: f64, seq: usize| -> Result<Region<(f64, f64)>> {
        let mid = 0.5 * (lo + hi);
        let left = panel(lo, mid)?;
        let right = panel(mid, hi)?;
        let value = left + right;
        Ok(Region {
            error: (whole - value).abs(),
            seq,
            region: (lo, hi),
            value,
            children: [left, right, 0.0, 0.0],
        })
    };

    let mut seq = 0;
    let root = make(a, b, panel(a, b)?, seq)?;
    let (mut value, mut error) = (root.value, root.error);
    let mut heap = BinaryHeap::new();
    heap.push(root);
    let mut subdivisions = 0;
    loop {
        if spec.accepts(value, error) {
            // Running sums drift; confirm with an exact resummation.
            value = heap.iter().map(|r| r.value).sum();
            error = heap.iter().map(|r| r.error).sum();
            if spec.accepts(value, error) {
                return Ok(value);
            }
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureNotConverged {
                estimate: value,
                error_bound: error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let (lo, hi) = worst.region;
        let mid = 0.5 * (lo + hi);
        seq += 1;
        let left = make(lo, mid, worst.children[0], seq)?;
        seq += 1;
        let right = make(mid, hi, worst.children[1], seq)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
}

/// Result of an integral over the real line with the truncation points used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegral {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Integral of `f` over ℝ.
///
/// The line is walked outward from `center` in steps of `scale / 16`; each side
/// is cut once `|f|` has stayed below [`TRUNCATION_RATIO`] times the running peak
/// over a full `scale`. `scale` should be comparable to the width of the
/// integrand's tails.
pub fn integrate_line<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<LineIntegral> {
    if !(scale.is_finite() && scale > 0.0 && center.is_finite()) {
        return Err(Error::domain(
            "integrate_line",
            scale,
            "scale must be positive and center finite",
        ));
    }
    let step = scale / 16.0;
    let mut peak = f(center).abs();
    let mut cut = [center; 2];
    for (side, dir) in [(0usize, -1.0f64), (1, 1.0)] {
        let mut quiet = 0usize;
        let mut t = center;
        let mut steps = 0usize;
        loop {
            t += dir * step;
            steps += 1;
            let v = f(t).abs();
            if !v.is_finite() {
                return Err(non_finite());
            }
            if v > peak {
                peak = v;
            }
            if v <= TRUNCATION_RATIO * peak {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= 16 {
                cut[side] = t;
                break;
            }
            if steps > 16 * 100_000 {
                return Err(Error::domain(
                    "integrate_line",
                    t,
                    "integrand does not decay; no truncation point found",
                ));
            }
        }
    }
    let value = integrate_1d(f, cut[0], cut[1], spec)?;
    Ok(LineIntegral {
        value,
        lower: cut[0],
        upper: cut[1],
    })
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, lo, hi)
    }

    fn quarters(&self) -> [Rect; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Rect::new(self.x0, xm, self.y0, ym),
            Rect::new(xm, self.x1, self.y0, ym),
            Rect::new(self.x0, xm, ym, self.y1),
            Rect::new(xm, self.x1, ym, self.y1),
        ]
    }
}

/// A two-dimensional integrand evaluated on tensor grids.
///
/// Implementors that can share work along rows or columns (for example a
/// kernel whose cost is dominated by per-coordinate recurrences) should
/// override [`Integrand2d::eval_grid`]. Any `Fn(f64, f64) -> f64` is an integrand.
pub trait Integrand2d {
    /// Fills `out[i * ys.len() + j] = f(xs[i], ys[j])`.
    fn eval_grid(&self, xs: &[f64], ys: &[f64], out: &mut [f64]);
}

impl<F: Fn(f64, f64) -> f64> Integrand2d for F {
    fn eval_grid(&self, xs: &[f64], ys: &[f64], out: &mut [f64]) {
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                out[i * ys.len() + j] = self(x, y);
            }
        }
    }
}

struct Panel2d<'a, F: ?Sized> {
    f: &'a F,
    rule: GaussLegendre,
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<f64>,
}

impl<F: Integrand2d + ?Sized> Panel2d<'_, F> {
    fn integrate(&mut self, r: &Rect) -> Result<f64> {
        self.rule.map_nodes(r.x0, r.x1, &mut self.xs);
        self.rule.map_nodes(r.y0, r.y1, &mut self.ys);
        self.f.eval_grid(&self.xs, &self.ys, &mut self.values);
        let w = self.rule.weights();
        let n = w.len();
        let mut sum = 0.0;
        for i in 0..n {
            let row = &self.values[i * n..(i + 1) * n];
            let mut inner = 0.0;
            for j in 0..n {
                inner += w[j] * row[j];
            }
            sum += w[i] * inner;
        }
        let v = 0.25 * (r.x1 - r.x0) * (r.y1 - r.y0) * sum;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(non_finite())
        }
    }

    fn region(&mut self, r: Rect, whole: f64, seq: usize) -> Result<Region<Rect>> {
        let mut children = [0.0; 4];
        for (c, q) in children.iter_mut().zip(r.quarters().iter()) {
            *c = self.integrate(q)?;
        }
        let value: f64 = children.iter().sum();
        Ok(Region {
            error: (whole - value).abs(),
            seq,
            region: r,
            value,
            children,
        })
    }
}

/// Adaptive tensor-product integral of `f` over `rect`; refinement splits the
/// worst rectangle into quarters. `max_subdivisions` counts splits.
pub fn integrate_2d<F: Integrand2d + ?Sized>(f: &F, rect: Rect, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let finite = [rect.x0, rect.x1, rect.y0, rect.y1].iter().all(|v| v.is_finite());
    if !finite || rect.x0 > rect.x1 || rect.y0 > rect.y1 {
        return Err(Error::domain(
            "integrate_2d",
            rect.x0,
            "box must be finite with ordered limits",
        ));
    }
    if rect.x0 == rect.x1 || rect.y0 == rect.y1 {
        return Ok(0.0);
    }
    let n = spec.panel_order;
    let mut panel = Panel2d {
        f,
        rule: GaussLegendre::new(n),
        xs: vec![0.0; n],
        ys: vec![0.0; n],
        values: vec![0.0; n * n],
    };
    let mut seq = 0;
    let whole = panel.integrate(&rect)?;
    let root = panel.region(rect, whole, seq)?;
    let (mut value, mut error) = (root.value, root.error);
    let mut heap = BinaryHeap::new();
    heap.push(root);
    let mut subdivisions = 0;
    loop {
        if spec.accepts(value, error) {
            value = heap.iter().map(|r| r.value).sum();
            error = heap.iter().map(|r| r.error).sum();
            if spec.accepts(value, error) {
                return Ok(value);
            }
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureNotConverged {
                estimate: value,
                error_bound: error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        value -= worst.value;
        error -= worst.error;
        for (q, &whole) in worst.region.quarters().iter().zip(worst.children.iter()) {
            seq += 1;
            let child = panel.region(*q, whole, seq)?;
            value += child.value;
            error += child.error;
            heap.push(child);
        }
        subdivisions += 1;
    }
}
