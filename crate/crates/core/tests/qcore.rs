mod common;

use common::*;
use proptest::prelude::*;
use qkit::qcore::linalg::{eig_hermitian, hermitian_residual, trace};
use qkit::qcore::random::{random_hermitian_with, random_pure, random_state};
use qkit::qcore::{matrix_sqrt_psd, partial_trace, purify};
use qkit::{DensityMatrix, Dims, Error, Seed, Subsystem};

fn dims_strategy() -> impl Strategy<Value = Dims> {
    (1usize..=4, 1usize..=4).prop_map(|(a, b)| Dims::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_states_are_valid(dims in dims_strategy(), seed in any::<u64>()) {
        let rho = rand_state(dims, seed);
        prop_assert!(hermitian_residual(rho.matrix()) < 1e-12);
        prop_assert!((trace(rho.matrix()).re - 1.0).abs() < 1e-10);
        prop_assert!(*eig_hermitian(rho.matrix()).unwrap().values.last().unwrap() > -1e-10);
        prop_assert!(DensityMatrix::new(dims, rho.matrix().clone()).is_ok());
    }

    #[test]
    fn partial_trace_of_tensor_recovers_factors(da in 1usize..=4, db in 1usize..=4, seed in any::<u64>()) {
        let a = rand_state(Dims::single(da), seed);
        let b = rand_state(Dims::single(db), seed ^ 0xabcdef);
        let ab = a.tensor(&b).unwrap();
        prop_assert!(max_diff(partial_trace(&ab, Subsystem::A).matrix(), a.matrix()) < 1e-10);
        prop_assert!(max_diff(partial_trace(&ab, Subsystem::B).matrix(), b.matrix()) < 1e-10);
    }

    #[test]
    fn partial_trace_matches_sandwich_sums(dims in dims_strategy(), seed in any::<u64>()) {
        let rho = rand_state(dims, seed);
        let keep_a = trace_out_b(rho.matrix(), dims.a, dims.b);
        let keep_b = trace_out_a(rho.matrix(), dims.a, dims.b);
        prop_assert!(max_diff(rho.partial_trace(Subsystem::A).matrix(), &keep_a) < 1e-12);
        prop_assert!(max_diff(rho.partial_trace(Subsystem::B).matrix(), &keep_b) < 1e-12);
    }

    #[test]
    fn conjugation_keeps_state_valid(seed in any::<u64>()) {
        let rho = rand_state(Dims::new(2, 3), seed);
        let u = rand_unitary(6, seed.wrapping_add(1));
        let out = rho.conjugate(&u).unwrap();
        prop_assert!(DensityMatrix::new(out.dims(), out.matrix().clone()).is_ok());
        prop_assert!((out.purity() - rho.purity()).abs() < 1e-12);
    }
}

#[test]
fn sqrt_squares_back_on_500_states() {
    for s in 0..500u64 {
        let d = 1 + (s as usize % 6);
        let rank = 1 + (s as usize / 6) % d;
        let rho = random_state(Dims::single(d), rank, Seed(s)).unwrap();
        let r = matrix_sqrt_psd(&rho).unwrap();
        assert!(max_diff(&(&r * &r), rho.matrix()) < 1e-8, "state {s}");
        assert!(max_diff(&r, &sqrtm(rho.matrix())) < 1e-6, "state {s}");
    }
}

#[test]
fn purify_then_trace_round_trips() {
    for s in 0..200u64 {
        let rank = 1 + (s as usize % 4);
        let rho = random_state(Dims::single(4), rank, Seed(1000 + s)).unwrap();
        let psi = purify(&rho);
        assert_eq!(psi.dims(), Dims::new(4, rank));
        assert!(max_diff(psi.reduced_a().matrix(), rho.matrix()) < 1e-9, "state {s}");
    }
}

#[test]
fn pure_states_have_unit_purity() {
    for s in 0..20 {
        let psi = random_pure(Dims::new(3, 2), Seed(s));
        assert!((psi.density().purity() - 1.0).abs() < 1e-12);
        assert_eq!(psi.density().rank(), 1);
    }
}

#[test]
fn validation_errors() {
    let mut rng = Seed(3).rng();
    let h = random_hermitian_with(&mut rng, 3);
    assert!(matches!(
        DensityMatrix::new(Dims::single(3), h),
        Err(Error::BadTrace { .. } | Error::NonPsd { .. })
    ));
    let bad = eye(2) * cx(0.45, 0.0);
    assert!(matches!(DensityMatrix::new(Dims::single(2), bad), Err(Error::BadTrace { .. })));
    assert!(matches!(DensityMatrix::new(Dims::new(2, 2), eye(3) / cx(3.0, 0.0)), Err(Error::DimensionMismatch(_))));
}
