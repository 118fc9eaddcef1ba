//! The verification suite: fifteen numbered checks with fixed tolerances.
//!
//! Each check returns the observed discrepancy, the tolerance it is held to
//! and a verdict. Random inputs derive from the suite seed, so a run is
//! reproducible. `Quick` mode shrinks replicate counts and sweep lengths;
//! tolerances are the same in both modes.

use std::f64::consts::PI;
use std::time::Instant;

use alphadpp_core::alpha_det::{
    alpha_corr, alpha_det_bruteforce, alpha_det_cycles, superposition_corr, AlphaParam,
};
use alphadpp_core::asymptotics::{
    blocks_density, circular_kernel, cusp_kernel, edge_eta, edge_kernel, semicircle_density, LimitKernel,
};
use alphadpp_core::fermion::{density_finite, kernel_direct, Block, BlockKernel, BlockSpec, Parity};
use alphadpp_core::numerics::{airy, integrate_1d, sinc, GaussLegendre, Matrix, QuadratureSpec};
use alphadpp_core::sampler::{
    estimate_pair_correlation, power_map, sample_superposition, Basis, PairWindow, PointSample,
    ProjectionSampler, RngContract,
};
use alphadpp_core::statistics::{
    cos_cycle_limit_check, number_variance_alpha, number_variance_rescaled, nv_expansion, structure_factor,
    total_correlation, total_correlation_from_structure_factor, weak_convergence_gap, Regime, EULER_GAMMA,
};
use anyhow::{ensure, Result};
use rand::Rng;
use serde::Serialize;

use crate::parallel::map_replicates;
use crate::stats::{chi_square, ks_two_sample};

/// Identifiers of all checks, in run order.
pub const ALL: [u32; 15] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15];

/// Checks whose stated tolerance is known to be out of reach of the exact
/// formula they test. They still run and still report failure.
pub const KNOWN_FAILURES: &[u32] = &[9];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub mode: Mode,
    pub threads: usize,
    pub seed: u64,
}

/// One line of the machine-readable summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
    pub detail: String,
}

struct Outcome {
    observed: f64,
    tolerance: f64,
    pass: bool,
    detail: String,
}

impl Outcome {
    /// Passes when `observed <= tolerance`.
    fn within(observed: f64, tolerance: f64, detail: String) -> Self {
        Self {
            observed,
            tolerance,
            pass: observed <= tolerance,
            detail,
        }
    }

    fn and(mut self, extra: bool, why: &str) -> Self {
        if !extra {
            self.pass = false;
            self.detail = format!("{}; {why}", self.detail);
        }
        self
    }
}

pub fn name(id: u32) -> &'static str {
    match id {
        1 => "alpha-determinant cycle DP vs enumeration",
        2 => "superposition identity",
        3 => "block kernel vs direct sum",
        4 => "semicircle density",
        5 => "two-block density and annulus identity",
        6 => "bulk kernel convergence",
        7 => "weak convergence to alpha = -1/2",
        8 => "cos-cycle limit",
        9 => "cusp continuity",
        10 => "Dyson-Mehta number variance",
        11 => "structure factor and duality",
        12 => "finite-M number variance vs alpha = -1/2",
        13 => "sampler density, cardinality and determinism",
        14 => "power map vs superposition",
        15 => "Airy values",
        _ => "unknown",
    }
}

/// Wall-clock budget in seconds, where one is part of the criterion.
fn budget(id: u32) -> Option<f64> {
    match id {
        1 => Some(10.0),
        2 => Some(30.0),
        3 => Some(20.0),
        12 | 14 => Some(300.0),
        _ => None,
    }
}

/// Runs one check. Errors inside a check count as failures.
pub fn run(id: u32, suite: &Suite) -> CheckResult {
    let start = Instant::now();
    let outcome = match id {
        1 => check_alpha_det(suite),
        2 => check_superposition(suite),
        3 => check_kernel_cross(suite),
        4 => check_semicircle(),
        5 => check_two_block_density(),
        6 => check_bulk_convergence(),
        7 => check_weak_convergence(),
        8 => check_cos_cycle(),
        9 => check_cusp(),
        10 => check_dyson_mehta(),
        11 => check_structure_factor(),
        12 => check_finite_number_variance(suite),
        13 => check_sampler(suite),
        14 => check_rains(suite),
        15 => check_airy(),
        _ => Err(anyhow::anyhow!("no check with id {id}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let mut result = match outcome {
        Ok(o) => CheckResult {
            id,
            name: name(id),
            observed: o.observed,
            tolerance: o.tolerance,
            pass: o.pass,
            seconds,
            detail: o.detail,
        },
        Err(e) => CheckResult {
            id,
            name: name(id),
            observed: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
            seconds,
            detail: format!("error: {e:#}"),
        },
    };
    if let Some(limit) = budget(id) {
        if suite.mode == Mode::Full && seconds > limit {
            result.pass = false;
            result.detail = format!("{}; took {seconds:.1} s, budget {limit} s", result.detail);
        }
    }
    result
}

pub fn run_all(suite: &Suite, ids: &[u32]) -> Vec<CheckResult> {
    ids.iter().map(|&id| run(id, suite)).collect()
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Composite fixed-order Gauss–Legendre integral, for integrands with kinks.
fn composite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let gl = GaussLegendre::new(16);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| gl.integrate(&f, a + h * i as f64, a + h * (i + 1) as f64))
        .sum()
}

fn check_alpha_det(suite: &Suite) -> Result<Outcome> {
    let alphas = [-1.0, -0.5, -1.0 / 3.0, 0.0, 1.0];
    let mut rng = RngContract::new(suite.seed, 1).rng();
    let mut worst: f64 = 0.0;
    for case in 0..500 {
        let n = 1 + case % 9;
        let alpha = alphas[case % alphas.len()];
        let a = Matrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let abs = Matrix::from_fn(n, |i, j| a[(i, j)].abs());
        let fast = alpha_det_cycles(alpha, &a)?;
        let slow = alpha_det_bruteforce(alpha, &a)?;
        let scale = alpha_det_cycles(alpha.abs(), &abs)?.max(f64::MIN_POSITIVE);
        worst = worst.max((fast - slow).abs() / scale);
    }
    Ok(Outcome::within(
        worst,
        1e-12,
        "max |cycles - enumeration| / det_|alpha|(|A|) over 500 matrices".into(),
    ))
}

fn check_superposition(suite: &Suite) -> Result<Outcome> {
    let mut rng = RngContract::new(suite.seed, 2).rng();
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let n = 1 + case % 6;
        let m = 1 + (case / 6) as u64 % 4;
        let pts: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let k = LimitKernel::scaled_sine(m)?;
        let a = alpha_corr(AlphaParam::from_m(m)?, &k, &pts)?;
        let b = superposition_corr(m, |s| k.eval(s), &pts)?;
        worst = worst.max((a - b).abs());
    }
    Ok(Outcome::within(
        worst,
        1e-11,
        "max |det_{-1/m} - superposition| over 200 point sets".into(),
    ))
}

fn kernel_specs() -> Result<Vec<BlockSpec>> {
    Ok(vec![
        BlockSpec::ground_state(60)?,
        BlockSpec::single_block(2.0, 25)?,
        BlockSpec::new(
            vec![Block::new(0.0, 0.5), Block::new(1.5, 1.0)],
            40,
            Parity::Custom,
        )?,
        BlockSpec::new(vec![Block::new(1.0, 1.0), Block::new(3.0, 1.0)], 64, Parity::Even)?,
        BlockSpec::single_block(9.0, 100)?,
    ])
}

fn check_kernel_cross(suite: &Suite) -> Result<Outcome> {
    let mut rng = RngContract::new(suite.seed, 3).rng();
    let specs = kernel_specs()?;
    let mut worst: f64 = 0.0;
    let mut top_level = 0;
    for spec in &specs {
        top_level = top_level.max(spec.max_level());
        let levels = spec.levels();
        let kernel = BlockKernel::new(spec);
        let reach = 1.1 * spec.support_edge();
        for _ in 0..100 {
            let x = rng.random_range(-reach..reach);
            let y = rng.random_range(-reach..reach);
            let direct = kernel_direct(&levels, x, y);
            let scale = direct
                .abs()
                .max((kernel_direct(&levels, x, x) * kernel_direct(&levels, y, y)).sqrt())
                .max(f64::MIN_POSITIVE);
            worst = worst.max((kernel.eval(x, y) - direct).abs() / scale);
        }
    }
    Ok(Outcome::within(
        worst,
        1e-9,
        format!("{} specs, max level {top_level}", specs.len()),
    ))
}

/// `∫|f - g| / ∫|g|` over `[-r, r]`.
fn l1_relative<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(f: F, g: G, r: f64) -> f64 {
    let num = composite(|x| (f(x) - g(x)).abs(), -r, r, 800);
    let den = composite(|x| g(x).abs(), -r, r, 800);
    num / den
}

fn check_semicircle() -> Result<Outcome> {
    let spec = BlockSpec::ground_state(100)?;
    let r = 0.8 * spec.support_edge();
    let err = l1_relative(|x| density_finite(&spec, x), |x| semicircle_density(100, x), r);
    Ok(Outcome::within(err, 0.02, format!("bulk |x| <= {r}")))
}

fn check_two_block_density() -> Result<Outcome> {
    let spec = BlockSpec::single_block(1.0, 100)?;
    let r = 0.8 * spec.support_edge();
    let err = l1_relative(|x| density_finite(&spec, x), |x| blocks_density(&spec, x), r);
    // Length of the p-chord through {a²M < p² + x²/4 < (a+1)²M}, over 2π.
    let m = spec.m() as f64;
    let chord = |r2: f64, x: f64| 2.0 * (r2 - 0.25 * x * x).max(0.0).sqrt();
    let mut identity: f64 = 0.0;
    for i in 0..=400 {
        let x = -45.0 + 90.0 * i as f64 / 400.0;
        let annulus = (chord(4.0 * m, x) - chord(m, x)) / (2.0 * PI);
        let d = blocks_density(&spec, x);
        identity = identity.max((annulus - d).abs() / d.abs().max(1.0));
    }
    Ok(Outcome::within(
        err,
        0.03,
        format!("bulk |x| <= {r}; annulus identity deviation {identity:.1e}"),
    )
    .and(identity <= 1e-13, "annulus identity off"))
}

fn bulk_sup(m: u64) -> Result<f64> {
    let spec = BlockSpec::single_block(5.0, m)?;
    let kernel = BlockKernel::new(&spec);
    let limit = LimitKernel::single_block(5.0)?;
    let rho = density_finite(&spec, 0.0);
    let mut sup: f64 = 0.0;
    for i in 0..=800 {
        let s = 4.0 * i as f64 / 800.0;
        sup = sup.max((kernel.eval(0.0, s / rho) / rho - limit.eval(s)).abs());
    }
    Ok(sup)
}

fn check_bulk_convergence() -> Result<Outcome> {
    let (d50, d200) = (bulk_sup(50)?, bulk_sup(200)?);
    Ok(Outcome::within(
        d200,
        0.02,
        format!("sup deviation {d50:.3e} at M=50, {d200:.3e} at M=200"),
    )
    .and(d200 < d50, "deviation does not decrease in M"))
}

fn check_weak_convergence() -> Result<Outcome> {
    let target = AlphaParam::from_m(2)?;
    let q = quad().with_tolerances(1e-8, 1e-12);
    let gaps = [5.0, 20.0, 80.0]
        .iter()
        .map(|&a| weak_convergence_gap(2, &LimitKernel::single_block(a)?, target, 1.0, &q))
        .collect::<alphadpp_core::Result<Vec<f64>>>()?;
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok(Outcome::within(
        gaps[2],
        0.01,
        format!(
            "gaps at a = 5, 20, 80: {:.3e}, {:.3e}, {:.3e}",
            gaps[0], gaps[1], gaps[2]
        ),
    )
    .and(decreasing, "gaps do not decrease strictly"))
}

fn check_cos_cycle() -> Result<Outcome> {
    let q = quad().with_tolerances(1e-12, 1e-14);
    let mut transposition: f64 = 0.0;
    for omega in [0.5f64, 3.0, 17.25, 200.0] {
        let exact = 0.5 * (1.0 + omega.sin().powi(2) / (omega * omega));
        let observed = cos_cycle_limit_check(&[1, 0], omega, &q)? + 0.5;
        transposition = transposition.max((observed - exact).abs());
    }
    let three = cos_cycle_limit_check(&[1, 2, 0], 200.0, &q)?.abs();
    Ok(Outcome::within(
        three,
        1e-3,
        format!("3-cycle at omega=200; transposition deviation {transposition:.1e}"),
    )
    .and(transposition <= 1e-9, "transposition identity off"))
}

fn check_cusp() -> Result<Outcome> {
    let (a, b) = (3.0, 3.0 - 1e-6);
    let mut sup: f64 = 0.0;
    for i in 0..=1000 {
        let s = 5.0 * i as f64 / 1000.0;
        sup = sup.max((cusp_kernel(a, b, s)? - sinc(PI * s)).abs());
    }
    Ok(Outcome::within(
        sup,
        1e-5,
        "sup over s in [0, 5] at a=3, b=a-1e-6".into(),
    ))
}

fn check_dyson_mehta() -> Result<Outcome> {
    let q = quad();
    let l: f64 = 100.0;
    let dm = (l.ln() + (2.0 * PI).ln() + 1.0 + EULER_GAMMA) / (PI * PI);
    let large = (number_variance_alpha(-1.0, l, &q)? - dm).abs();
    let small = (number_variance_alpha(-1.0, 0.2, &q)? - nv_expansion(-1.0, 0.2, Regime::Small)).abs();
    Ok(Outcome::within(
        large,
        1e-3,
        format!("L=100 deviation; small-L deviation {small:.1e} at L=0.2"),
    )
    .and(small <= 1e-5, "small-L expansion off"))
}

fn check_structure_factor() -> Result<Outcome> {
    let q = quad();
    let mut piecewise: f64 = 0.0;
    let mut duality: f64 = 0.0;
    for m in 1..=3u64 {
        let alpha = -1.0 / m as f64;
        let a = alpha.abs();
        for (k, want) in [
            (0.0, 0.0),
            (PI * a, 0.5),
            (2.0 * PI * a, 1.0),
            (3.0 * PI * a, 1.0),
        ] {
            piecewise = piecewise.max((structure_factor(alpha, k) - want).abs());
        }
        for i in 0..20 {
            let r = 0.05 + 0.4 * i as f64;
            let h = total_correlation_from_structure_factor(alpha, r, &q)?;
            duality = duality.max((h - total_correlation(alpha, r)).abs());
        }
    }
    Ok(Outcome::within(
        duality,
        1e-6,
        format!("duality; piecewise deviation {piecewise:.1e}"),
    )
    .and(piecewise <= 1e-12, "piecewise values off"))
}

fn check_finite_number_variance(suite: &Suite) -> Result<Outcome> {
    let spec = BlockSpec::single_block(10.0, 20)?;
    let q = quad().with_tolerances(1e-7, 1e-10);
    let lengths: Vec<f64> = match suite.mode {
        Mode::Full => (1..=8).map(f64::from).collect(),
        Mode::Quick => vec![1.0, 4.0, 8.0],
    };
    let mut worst: f64 = 0.0;
    for &l in &lengths {
        let finite = number_variance_rescaled(&spec, l, &q)?;
        let limit = number_variance_alpha(-0.5, l, &q)?;
        worst = worst.max((finite - limit).abs() / limit);
    }
    Ok(Outcome::within(
        worst,
        0.1,
        format!("max relative deviation over L = {lengths:?}"),
    ))
}

fn replicates(suite: &Suite) -> u64 {
    match suite.mode {
        Mode::Full => 10_000,
        Mode::Quick => 2_000,
    }
}

fn sample_all(
    sampler: &ProjectionSampler,
    seed: u64,
    count: u64,
    threads: usize,
) -> Result<Vec<PointSample>> {
    map_replicates(count, threads, |i| Ok(sampler.sample(RngContract::new(seed, i))?))
}

fn bits(samples: &[PointSample]) -> Vec<Vec<u64>> {
    samples
        .iter()
        .map(|s| s.positions().iter().map(|p| p.to_bits()).collect())
        .collect()
}

/// Edges splitting the mass of `density` (total `n`) into `bins` equal parts.
fn equiprobable_edges<F: Fn(f64) -> f64>(density: F, n: f64, reach: f64, bins: usize) -> Result<Vec<f64>> {
    let q = quad();
    let cells = 2000;
    let h = 2.0 * reach / cells as f64;
    let mut cum = vec![0.0];
    for i in 0..cells {
        let a = -reach + h * i as f64;
        cum.push(cum[i] + integrate_1d(&density, a, a + h, &q)?);
    }
    ensure!(
        (cum[cells] - n).abs() < 1e-8 * n,
        "density integrates to {} instead of {n}",
        cum[cells]
    );
    let mut edges = Vec::with_capacity(bins - 1);
    for b in 1..bins {
        let target = n * b as f64 / bins as f64;
        let cell = cum.partition_point(|&c| c < target) - 1;
        let (mut lo, mut hi) = (-reach + h * cell as f64, -reach + h * (cell + 1) as f64);
        let base = cum[cell];
        let a = lo;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if base + integrate_1d(&density, a, mid, &q)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        edges.push(0.5 * (lo + hi));
    }
    Ok(edges)
}

fn check_sampler(suite: &Suite) -> Result<Outcome> {
    let spec = BlockSpec::ground_state(11)?;
    let n = spec.n() as usize;
    let sampler = ProjectionSampler::new(Basis::hermite(&spec))?;
    let count = replicates(suite);
    let runs = [1, 4, 8]
        .iter()
        .map(|&t| sample_all(&sampler, suite.seed, count, t))
        .collect::<Result<Vec<_>>>()?;
    let reference = bits(&runs[0]);
    let identical = runs[1..].iter().all(|r| bits(r) == reference);
    let cardinality = runs[0].iter().all(|s| s.n() == n);

    let bins = 40;
    let inner = equiprobable_edges(
        |x| density_finite(&spec, x),
        n as f64,
        spec.support_edge() + 12.0,
        bins,
    )?;
    let mut observed = vec![0.0; bins];
    for s in &runs[0] {
        for &p in s.positions() {
            observed[inner.partition_point(|&e| e <= p)] += 1.0;
        }
    }
    let expected = vec![(count as usize * n) as f64 / bins as f64; bins];
    let (x2, p) = chi_square(&observed, &expected);
    Ok(Outcome {
        observed: p,
        tolerance: 1e-3,
        pass: p > 1e-3 && identical && cardinality,
        detail: format!(
            "p-value must exceed the tolerance; {count} replicates of N={n}; chi2={x2:.2} on {} dof; cardinality {}; 1/4/8-thread runs {}",
            bins - 1,
            if cardinality { "exact" } else { "WRONG" },
            if identical { "bit-identical" } else { "DIFFER" },
        ),
    })
}

/// `ρ_2(θ)/ρ²` for `m` independent copies of the `n`-mode circular process.
fn superposed_pair_correlation(m: u64, n: u64, theta: f64) -> f64 {
    let rho = (m * n) as f64 / (2.0 * PI);
    let s = circular_kernel(n, theta);
    1.0 - m as f64 * s * s / (rho * rho)
}

fn check_rains(suite: &Suite) -> Result<Outcome> {
    let (m, n) = (2u64, 8u64);
    let count = replicates(suite);
    let big = ProjectionSampler::new(Basis::fourier_range(m * n))?;
    let small = ProjectionSampler::new(Basis::fourier_range(n))?;
    let mapped = map_replicates(count, suite.threads, |i| {
        Ok(power_map(&big.sample(RngContract::new(suite.seed, i))?, m)?)
    })?;
    let superposed = map_replicates(count, suite.threads, |i| {
        Ok(sample_superposition(
            &small,
            m,
            RngContract::new(suite.seed.wrapping_add(1), i),
        )?)
    })?;
    let rho = (m * n) as f64 / (2.0 * PI);
    // One gap per replicate: the spacing after the first point past angle 0.
    let gap = |s: &PointSample| (s.positions()[1] - s.positions()[0]) * rho;
    let ga: Vec<f64> = mapped.iter().map(gap).collect();
    let gb: Vec<f64> = superposed.iter().map(gap).collect();
    let (d, p) = ks_two_sample(&ga, &gb);

    let edges: Vec<f64> = (0..=12).map(|i| 0.25 * i as f64).collect();
    let q = quad();
    let mut worst_z: f64 = 0.0;
    for samples in [&mapped, &superposed] {
        let est = estimate_pair_correlation(samples, &edges, PairWindow::Circle)?;
        let err = est.y_err.as_ref().expect("estimator reports errors");
        for (i, w) in edges.windows(2).enumerate() {
            let (t0, t1) = (w[0] / rho, w[1] / rho);
            let predicted = integrate_1d(|t| superposed_pair_correlation(m, n, t), t0, t1, &q)? / (t1 - t0);
            worst_z = worst_z.max((est.y[i] - predicted).abs() / err[i]);
        }
    }
    Ok(Outcome {
        observed: p,
        tolerance: 1e-3,
        pass: p > 1e-3 && worst_z <= 3.0,
        detail: format!("KS p-value must exceed the tolerance; {count} replicates; KS D={d:.4}; max pair-correlation |z|={worst_z:.2} (limit 3)"),
    })
}

fn check_airy() -> Result<Outcome> {
    use statrs::function::gamma::gamma;
    let v = airy(0.0)?;
    let ai0 = 1.0 / (3f64.powf(2.0 / 3.0) * gamma(2.0 / 3.0));
    let aip0 = -1.0 / (3f64.powf(1.0 / 3.0) * gamma(1.0 / 3.0));
    let origin = (v.ai - ai0).abs().max((v.ai_prime - aip0).abs());

    let h = 1e-3;
    let d = |x: f64| airy(x).map(|v| v.ai_prime);
    let mut residual: f64 = 0.0;
    for i in 0..=600 {
        let x = -10.0 + 15.0 * i as f64 / 600.0;
        let second = (-d(x + 2.0 * h)? + 8.0 * d(x + h)? - 8.0 * d(x - h)? + d(x - 2.0 * h)?) / (12.0 * h);
        residual = residual.max((second - x * airy(x)?.ai).abs());
    }
    let eta_exact = edge_eta(0.0) == 1.0;
    let kernel_finite = edge_kernel(0.0, 0.0, 0.0)?.is_finite();
    Ok(Outcome::within(
        residual,
        1e-8,
        format!("ODE residual on [-10, 5]; origin deviation {origin:.1e}"),
    )
    .and(origin <= 1e-9, "origin values off")
    .and(eta_exact && kernel_finite, "eta(0) is not exactly 1"))
}
