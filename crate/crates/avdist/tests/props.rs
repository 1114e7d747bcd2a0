//! Property-based checks of the linear-algebra core and random-object
//! generators.

mod common;

use avdist::ensembles::{haar_unitary, random_channel, random_density, random_povm, SeedSpec};
use avdist::linalg::{
    hermitian_eig, partial_trace, schatten_norms, ComplexMatrix, C64,
};
use avdist::suites::random_hermitian;
use proptest::prelude::*;

fn small_dim() -> impl Strategy<Value = usize> {
    2usize..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dagger_is_an_involution(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 0).rng();
        let g = avdist::ensembles::ginibre(d, d, &mut rng);
        prop_assert!(g.dagger().dagger().sub(&g).max_abs() < 1e-14);
    }

    #[test]
    fn haar_samples_are_unitary(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 1).rng();
        let u = haar_unitary(d, &mut rng);
        let gram = u.dagger().mul(&u);
        prop_assert!(gram.sub(&ComplexMatrix::identity(d)).max_abs() < 1e-10);
    }

    #[test]
    fn eigendecomposition_reconstructs_hermitian_input(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 2).rng();
        let x = random_hermitian(d, &mut rng);
        let eig = hermitian_eig(&x).unwrap();
        let lambda = ComplexMatrix::diag(
            &eig.values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
        );
        let rebuilt = eig.vectors.mul(&lambda).mul(&eig.vectors.dagger());
        prop_assert!(rebuilt.sub(&x).max_abs() < 1e-9);
        // ascending order
        for w in eig.values.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn schatten_norms_are_ordered(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 3).rng();
        let x = random_hermitian(d, &mut rng);
        let n = schatten_norms(&x).unwrap();
        prop_assert!(n.op_norm <= n.hs_norm + 1e-12);
        prop_assert!(n.hs_norm <= n.trace_norm + 1e-12);
        prop_assert!(n.trace_norm <= d as f64 * n.op_norm + 1e-9);
    }

    #[test]
    fn trace_norm_satisfies_triangle_inequality(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 4).rng();
        let x = random_hermitian(d, &mut rng);
        let y = random_hermitian(d, &mut rng);
        let lhs = schatten_norms(&x.add(&y)).unwrap().trace_norm;
        let rhs = schatten_norms(&x).unwrap().trace_norm
            + schatten_norms(&y).unwrap().trace_norm;
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), da in small_dim(), db in small_dim()) {
        let mut rng = SeedSpec::new(seed, 5).rng();
        let x = random_hermitian(da * db, &mut rng);
        for traced in [0usize, 1] {
            let reduced = partial_trace(&x, &[da, db], traced).unwrap();
            prop_assert!((reduced.trace() - x.trace()).norm() < 1e-10);
        }
    }

    #[test]
    fn random_states_are_valid(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 6).rng();
        let rho = random_density(d, &mut rng);
        prop_assert!((rho.mat().trace().re - 1.0).abs() < 1e-9);
        let eig = hermitian_eig(rho.mat()).unwrap();
        prop_assert!(eig.values[0] > -1e-9);
        prop_assert!(rho.purity() <= 1.0 + 1e-9);
        prop_assert!(rho.purity() >= 1.0 / d as f64 - 1e-9);
    }

    #[test]
    fn random_povm_effects_sum_to_identity(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 7).rng();
        let povm = random_povm(d, d + 1, &mut rng);
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in povm.effects() {
            sum = sum.add(e);
            let eig = hermitian_eig(e).unwrap();
            prop_assert!(eig.values[0] > -1e-9);
        }
        prop_assert!(sum.sub(&ComplexMatrix::identity(d)).max_abs() < 1e-9);
    }

    #[test]
    fn random_channel_choi_is_trace_preserving(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 8).rng();
        let ch = random_channel(d, &mut rng);
        let eig = hermitian_eig(ch.choi()).unwrap();
        prop_assert!(eig.values[0] > -1e-9);
        // tr_out J = I/d is the trace-preservation condition
        let marginal = partial_trace(ch.choi(), &[d, d], 1).unwrap();
        let target = ComplexMatrix::identity(d).scale_re(1.0 / d as f64);
        prop_assert!(marginal.sub(&target).max_abs() < 1e-9);
    }

    #[test]
    fn matrix_serde_round_trip_is_exact(seed in any::<u64>(), d in small_dim()) {
        let mut rng = SeedSpec::new(seed, 9).rng();
        let x = avdist::ensembles::ginibre(d, d, &mut rng);
        let json = serde_json::to_string(&x).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        prop_assert!(x.sub(&back).max_abs() == 0.0);
    }
}
