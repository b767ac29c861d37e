use hypeigen_core::barriers::{
    candidate_domains, estimate_barrier_constants, initial_cutoff, nonexistence_pipeline,
    shrink_step, synthetic_candidate,
};
use hypeigen_core::horofunc::horoannulus_lambda1;

#[test]
fn first_shrink_after_the_initial_cut_passes() {
    let k = estimate_barrier_constants(2).unwrap();
    let (b, _) = candidate_domains(2.0).unwrap();
    let (_, u) = synthetic_candidate(0.25, 2.0, 0.01).unwrap();
    let (_, cut) = initial_cutoff(&u, &b, 0.25, 2).unwrap();
    let (rep, next) = shrink_step(&cut, 2.0, &b, &k, 0.25).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!(rep.gamma1 <= rep.gamma2 && rep.gamma2 < 1.0);
    assert!(rep.support_width_out < 2.0 - rep.delta);
    assert!(next.values.iter().all(|v| *v >= 0.0));
    assert!((next.max_abs() - rep.sup_u_tilde).abs() < 1e-15);
}

#[test]
fn pipeline_reaches_a_thin_annulus() {
    let r = nonexistence_pipeline(2, 0.25, 2.0, 0.01).unwrap();
    assert!(!r.iterations.is_empty());
    assert!(r.iterations.iter().all(|it| it.passed));
    assert!(r.iterations.len() <= r.iteration_bound);
    for w in r.iterations.windows(2) {
        assert_eq!(w[1].d, w[0].width);
        assert!(w[1].width < w[1].d);
    }
    assert!(r.certificate.width <= r.constants.d1);
    assert!(r.certificate.lambda1_annulus > 0.25);
    assert_eq!(
        r.certificate.lambda1_annulus,
        horoannulus_lambda1(2, r.certificate.width)
    );
}

#[test]
fn harmonic_case_runs_the_same_way() {
    let r = nonexistence_pipeline(2, 0.0, 1.5, 0.01).unwrap();
    assert!(r.iterations.iter().all(|it| it.passed));
    assert!(r.certificate.width <= r.constants.d1);
}

#[test]
fn thin_start_needs_no_iteration() {
    for n in [2, 3, 4] {
        let k = estimate_barrier_constants(n).unwrap();
        let r =
            nonexistence_pipeline(n, 0.5 * hypeigen_core::lambda1(n), 0.9 * k.d1, 0.01).unwrap();
        assert!(r.iterations.is_empty());
        assert_eq!(r.initial_scale, None);
        assert!(r.certificate.lambda1_annulus > hypeigen_core::lambda1(n));
    }
}

#[test]
fn pipeline_rejects_bad_arguments() {
    assert!(nonexistence_pipeline(2, 0.3, 2.0, 0.01)
        .unwrap_err()
        .is_argument());
    assert!(nonexistence_pipeline(2, 0.2, -1.0, 0.01)
        .unwrap_err()
        .is_argument());
    assert!(nonexistence_pipeline(3, 0.5, 2.0, 0.01)
        .unwrap_err()
        .is_argument());
}

#[test]
fn initial_cut_is_nonnegative_and_localized() {
    let (b, _) = candidate_domains(3.0).unwrap();
    let (_, u) = synthetic_candidate(0.125, 3.0, 0.02).unwrap();
    let (scale, cut) = initial_cutoff(&u, &b, 0.125, 2).unwrap();
    assert!(scale >= 1.0 && scale.log2().fract() == 0.0);
    assert!(cut.values.iter().all(|v| *v >= 0.0));
    assert!(cut.max_abs() > 0.0);
}
