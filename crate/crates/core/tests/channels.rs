mod common;

use common::*;
use qkit::channels::{
    apply_channel, dephase_a, is_classical_operation, monotonicity_check, ClassicalFamily, KrausChannel, MeasureId,
};
use qkit::classify::{is_zero_bd_discord, BasisSpec};
use qkit::measures::{bd_discord_skew_with, GeneratorSpectrum};
use qkit::qcore::random::random_unitary;
use qkit::{DensityMatrix, Dims, Seed};

const D22: Dims = Dims::new(2, 2);

#[test]
fn channels_preserve_state_invariants() {
    for s in 0..50u64 {
        let rho = rand_state(D22, s);
        let basis = BasisSpec::new(random_unitary(2, Seed(s))).unwrap();
        let channels = [
            KrausChannel::partial_dephase_a(D22, &basis, (s as f64) / 50.0).unwrap(),
            KrausChannel::depolarizing(D22, 0.3).unwrap(),
            KrausChannel::local_unitary_b(D22, &random_unitary(2, Seed(100 + s))).unwrap(),
        ];
        for ch in &channels {
            let out = apply_channel(ch, &rho).unwrap();
            assert!(DensityMatrix::new(D22, out.matrix().clone()).is_ok());
        }
    }
}

#[test]
fn dephasing_is_idempotent_and_bridges_membership() {
    for s in 0..50u64 {
        let rho = rand_state(D22, 200 + s);
        let basis = BasisSpec::new(random_unitary(2, Seed(300 + s))).unwrap();
        let once = dephase_a(&rho, &basis).unwrap();
        let twice = dephase_a(&once, &basis).unwrap();
        assert!(max_diff(once.matrix(), twice.matrix()) < 1e-12);
        assert!(is_zero_bd_discord(&once, &basis).unwrap().member);
        assert!(!is_zero_bd_discord(&rho, &basis).unwrap().member);
    }
}

#[test]
fn dephasing_kraus_form_matches_projector_sandwich() {
    let comp = BasisSpec::computational(2);
    let ch = KrausChannel::dephase_a(D22, &comp).unwrap();
    let rho = rand_state(D22, 17);
    let p0 = kron(&M::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)]), &eye(2));
    let p1 = eye(4) - &p0;
    let oracle = &p0 * rho.matrix() * &p0 + &p1 * rho.matrix() * &p1;
    assert!(max_diff(apply_channel(&ch, &rho).unwrap().matrix(), &oracle) < 1e-14);
}

#[test]
fn classicality_of_standard_channels() {
    let comp = BasisSpec::computational(2);
    let deph = KrausChannel::partial_dephase_a(D22, &comp, 0.5).unwrap();
    let r = is_classical_operation(&deph, &ClassicalFamily::ZeroBdDiscord(comp.clone()), 500, Seed(1)).unwrap();
    assert!(r.plain && r.post_selected);
    let rot = KrausChannel::local_unitary_a(D22, BasisSpec::hadamard().unitary()).unwrap();
    let r = is_classical_operation(&rot, &ClassicalFamily::ZeroBdDiscord(comp), 50, Seed(2)).unwrap();
    assert!(!r.plain && !r.post_selected);
    let r = is_classical_operation(&rot, &ClassicalFamily::ZeroDiscord, 50, Seed(3)).unwrap();
    assert!(r.plain);
}

#[test]
fn partial_dephasing_is_monotone() {
    let comp = BasisSpec::computational(2);
    for p in [0.2, 0.7, 1.0] {
        let ch = KrausChannel::partial_dephase_a(D22, &comp, p).unwrap();
        for m in [MeasureId::BdDiscord(comp.clone()), MeasureId::Coherence(comp.clone())] {
            let r = monotonicity_check(&ch, &m, 200, Seed(11)).unwrap();
            assert!(r.passed(), "p = {p}, {m:?}: {r:?}");
            assert!(r.max_violation <= 1e-9 && r.max_selective_violation <= 1e-9);
        }
    }
}

#[test]
fn dephasing_branches_satisfy_selective_monotonicity() {
    let comp = BasisSpec::computational(2);
    let spec = GeneratorSpectrum::ramp(2);
    let ch = KrausChannel::dephase_a(D22, &comp).unwrap();
    for s in 0..200u64 {
        let rho = rand_state(D22, 700 + s);
        let before = bd_discord_skew_with(&rho, &comp, &spec).unwrap().value;
        let mut after = 0.0;
        for k in ch.kraus() {
            let branch = k * rho.matrix() * k.adjoint();
            let p = branch.trace().re;
            if p > 1e-12 {
                let normalized = DensityMatrix::new(D22, branch / cx(p, 0.0)).unwrap();
                after += p * bd_discord_skew_with(&normalized, &comp, &spec).unwrap().value;
            }
        }
        assert!(after <= before + 1e-9, "state {s}");
        assert!(after.abs() <= 1e-12);
    }
}
