use proptest::prelude::*;
use qwp_core::domain::{
    expectation, is_valid_predicate_entry, validate_state, DensityState, KrausChannel,
    OperatorTuple, PredicateTuple, Signature,
};
use qwp_core::eigen::{herm_eigen, is_psd};
use qwp_core::matrix::consts::*;
use qwp_core::random::Sampler;
use qwp_core::tolerance::Tolerances;
use qwp_core::ComplexMatrix;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn channels_preserve_positivity_and_do_not_raise_trace(
        seed in any::<u64>(),
        din in 2usize..=8,
        dout in 2usize..=8,
        nk in 1usize..=4,
        tp in any::<bool>(),
    ) {
        let mut s = Sampler::seeded(seed);
        let c = s.channel(din, dout, nk, tp);
        let rho = s.density_state(&Signature::single(din));
        let out = c.apply(rho.entry(0)).unwrap();
        let t = OperatorTuple::new(Signature::single(dout), vec![out.clone()]).unwrap();
        prop_assert!(validate_state(&t, &Tolerances::default()).is_valid());
        let (tin, tout) = (rho.total_trace(), out.trace().unwrap().re);
        prop_assert!(tout <= tin + 1e-9);
        if tp && nk * dout >= din {
            prop_assert!((tout - tin).abs() <= 1e-9);
        }
        prop_assert!(is_psd(&c.choi(), 1e-9).unwrap());
    }

    #[test]
    fn predicate_expectations_lie_in_unit_interval(seed in any::<u64>(), len in 1usize..=4, d in 1usize..=6) {
        let mut s = Sampler::seeded(seed);
        let sig = Signature::uniform(len, d);
        let p = s.predicate(&sig);
        let st = s.density_state(&sig);
        let e = expectation(&st, &p).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&e), "{e}");
    }
}

#[test]
fn eigenvalue_above_one_is_witnessed_by_its_eigenvector() {
    let u = Sampler::seeded(11).unitary(3);
    let m = &(&u * &ComplexMatrix::diag_real(&[0.2, 0.6, 1.5])) * &u.adjoint();
    let m = m.hermitian_part();
    assert!(!is_valid_predicate_entry(&m));
    let eig = herm_eigen(&m).unwrap();
    let v = eig.eigenvector(2);
    let st = DensityState::single(ComplexMatrix::projector(&v).hermitian_part()).unwrap();
    let e = m.trace_product(st.entry(0)).unwrap().re;
    assert!((e - 1.5).abs() < 1e-12 && e > 1.0);
    assert!(PredicateTuple::single(m).is_err());
}

#[test]
fn mixed_ensembles_are_the_same_matrix() {
    let a = &proj0().scale_real(0.5) + &proj1().scale_real(0.5);
    let b = &proj_plus().scale_real(0.5) + &proj_minus().scale_real(0.5);
    assert!(a.max_distance(&b) <= 1e-15);
    assert!(a.max_distance(&ComplexMatrix::identity(2).scale_real(0.5)) <= 1e-15);
    let c = KrausChannel::single(hadamard());
    assert!(c.apply(&a).unwrap().max_distance(&c.apply(&b).unwrap()) <= 1e-15);
}
