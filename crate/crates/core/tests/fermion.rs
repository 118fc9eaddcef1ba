use alphadpp_core::asymptotics::{blocks_density, LimitKernel};
use alphadpp_core::fermion::{
    density_finite, kernel_block, kernel_direct, psi, Block, BlockSpec, KernelGrid, Parity,
};
use alphadpp_core::numerics::{integrate_1d, GaussLegendre, QuadratureSpec};
use alphadpp_core::statistics::{corr_n, CorrelationSource};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = BlockSpec> {
    (
        1u64..=12,
        prop::collection::vec((0.0f64..1.5, 0.2f64..1.5), 1..=3),
    )
        .prop_filter_map("blocks must be disjoint and nonempty", |(m, raw)| {
            let mut a = 0.0;
            let mut blocks = Vec::new();
            for (gap, w) in raw {
                a += gap;
                blocks.push(Block::new(a, w));
                a += w;
            }
            BlockSpec::new(blocks, m, Parity::Custom).ok()
        })
}

fn eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn block_kernel_equals_direct_sum(spec in spec_strategy(), x in -8.0f64..8.0, y in -8.0f64..8.0) {
        let direct = kernel_direct(&spec.levels(), x, y);
        let block = kernel_block(&spec, x, y);
        let scale = (density_finite(&spec, x) * density_finite(&spec, y)).sqrt();
        prop_assert!((direct - block).abs() <= 1e-10 * scale.max(direct.abs()).max(1e-300), "{} vs {}", direct, block);
    }

    #[test]
    fn kernel_is_symmetric_even_and_bounded(spec in spec_strategy(), x in -8.0f64..8.0, y in -8.0f64..8.0) {
        let k = kernel_block(&spec, x, y);
        prop_assert!((k - kernel_block(&spec, y, x)).abs() <= 1e-13 * k.abs().max(1e-12));
        prop_assert!((k - kernel_block(&spec, -x, -y)).abs() <= 1e-12 * k.abs().max(1e-12));
        let bound = density_finite(&spec, x) * density_finite(&spec, y);
        prop_assert!(k * k <= bound * (1.0 + 1e-9) + 1e-300);
    }

    #[test]
    fn kernel_matrices_are_positive_semidefinite(spec in spec_strategy(), pts in prop::collection::vec(-6.0f64..6.0, 2..8)) {
        let grid = KernelGrid::finite(&spec, pts).unwrap();
        let n = grid.points().len();
        let m = DMatrix::from_row_slice(n, n, grid.values().as_slice());
        let ev = eigenvalues(m);
        let top = ev[n - 1].abs().max(1e-300);
        prop_assert!(ev[0] >= -1e-10 * top, "{:?}", ev);
    }
}

#[test]
fn discretised_kernel_is_a_projection_of_rank_n() {
    // On a Gauss–Legendre grid the weighted kernel matrix has N eigenvalues
    // at one and the rest at zero.
    let spec = BlockSpec::new(
        vec![Block::new(0.0, 0.5), Block::new(1.0, 0.5)],
        8,
        Parity::Custom,
    )
    .unwrap();
    let n = spec.n() as usize;
    let rule = GaussLegendre::new(160);
    let half = 14.0;
    let pts: Vec<f64> = rule.nodes().iter().map(|t| half * t).collect();
    let w: Vec<f64> = rule.weights().iter().map(|v| half * v).collect();
    let grid = KernelGrid::finite(&spec, pts.clone()).unwrap();
    let k = grid.values();
    let m = DMatrix::from_fn(pts.len(), pts.len(), |i, j| w[i].sqrt() * k[(i, j)] * w[j].sqrt());
    let ev = eigenvalues(m);
    let ones = ev.iter().filter(|e| (**e - 1.0).abs() < 1e-8).count();
    let zeros = ev.iter().filter(|e| e.abs() < 1e-8).count();
    assert_eq!(ones, n);
    assert_eq!(ones + zeros, pts.len());
}

#[test]
fn limit_kernel_matrices_are_positive_semidefinite() {
    let pts: Vec<f64> = (0..12).map(|i| 0.37 * i as f64 - 2.0).collect();
    for k in [
        LimitKernel::pure_sine(),
        LimitKernel::single_block(3.0).unwrap(),
        LimitKernel::scaled_sine(3).unwrap(),
        LimitKernel::cusp(4.0, 3.0).unwrap(),
    ] {
        let grid = KernelGrid::limit(&k, pts.clone()).unwrap();
        let m = DMatrix::from_row_slice(12, 12, grid.values().as_slice());
        assert!(eigenvalues(m)[0] > -1e-12);
    }
}

fn slater_squared(xs: &[f64]) -> f64 {
    let n = xs.len();
    let m = DMatrix::from_fn(n, n, |i, j| psi(i as u64, xs[j]));
    let d = m.determinant();
    d * d
}

#[test]
fn one_point_function_from_marginalised_slater_determinant() {
    // N = 2: ρ_1(x) = 2 ∫ |Ψ(x, y)|² dy with |Ψ|² = det² / 2!.
    let g = BlockSpec::ground_state(2).unwrap();
    let q = QuadratureSpec::default();
    let source = CorrelationSource::Determinantal(alphadpp_core::fermion::KernelSource::FiniteM(g.clone()));
    for x in [-1.7, 0.0, 0.4, 2.2] {
        let marginal = integrate_1d(|y| slater_squared(&[x, y]), -14.0, 14.0, &q).unwrap();
        let rho = corr_n(&source, &[x]).unwrap();
        assert!((rho - marginal).abs() < 1e-10, "x={x}: {rho} vs {marginal}");
    }
}

#[test]
fn two_point_function_from_marginalised_slater_determinant() {
    // N = 3: ρ_2(x, y) = 3!/1! ∫ det²/3! dz.
    let g = BlockSpec::ground_state(3).unwrap();
    let q = QuadratureSpec::default();
    let source = CorrelationSource::Determinantal(alphadpp_core::fermion::KernelSource::FiniteM(g));
    for (x, y) in [(-1.0, 0.5), (0.0, 0.3), (1.2, 2.0)] {
        let marginal = integrate_1d(|z| slater_squared(&[x, y, z]), -14.0, 14.0, &q).unwrap();
        let rho = corr_n(&source, &[x, y]).unwrap();
        assert!((rho - marginal).abs() < 1e-10, "({x},{y}): {rho} vs {marginal}");
        assert_eq!(corr_n(&source, &[x, x]).unwrap().abs() < 1e-12, true);
    }
}

#[test]
fn finite_density_approaches_block_asymptote_in_bulk() {
    let spec = BlockSpec::single_block(1.0, 100).unwrap();
    let edge = 0.8 * spec.support_edge();
    for i in 0..=40 {
        let x = -edge + 2.0 * edge * i as f64 / 40.0;
        let inner = 2.0 * 1.0 * 10.0;
        if (x.abs() - inner).abs() < 2.0 {
            continue;
        }
        let (f, a) = (density_finite(&spec, x), blocks_density(&spec, x));
        assert!(((f - a) / a).abs() < 0.03, "x={x}: {f} vs {a}");
    }
}
