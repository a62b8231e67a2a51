use fracbvp::problem::{sample_b_delta, smallest_certified_delta};
use fracbvp::{
    check_h3, compute_m, existence_certificate, gamma, CertificateOptions, Grid, ProblemSpec, Profile,
};
use proptest::prelude::*;

/// Composite Simpson on `[0, 1]` for `g` (even `m`).
fn simpson(m: usize, g: impl Fn(f64) -> f64) -> f64 {
    let h = 1.0 / m as f64;
    let mut acc = g(0.0) + g(1.0);
    for i in 1..m {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
    }
    acc * h / 3.0
}

/// `∫_0^S (I^{1/5} 1{t<=1})(s)^2 ds` in closed form for the integrand and with
/// the substitutions `s = x^5` on `[0, 1]` and `s = 1 + y^5` on `[1, S]`, which
/// remove the endpoint singularities.
fn corrected_j_oracle(s_max: f64, m: usize) -> f64 {
    let c = gamma(1.2).unwrap();
    let inner = |s: f64| (s.powf(0.2) - (s - 1.0).max(0.0).powf(0.2)) / c;
    let head = simpson(m, |x| inner(x.powi(5)).powi(2) * 5.0 * x.powi(4));
    let y_max = (s_max - 1.0).powf(0.2);
    let tail = simpson(m, |v| {
        let y = v * y_max;
        inner(1.0 + y.powi(5)).powi(2) * 5.0 * y.powi(4) * y_max
    });
    head + tail
}

#[test]
fn h3_integral_matches_a_finer_reference() {
    // S_max = 16 with grading 2 puts a node exactly on the jump of a at t = 1.
    let spec = ProblemSpec::corrected_example41();
    let coarse = check_h3(&spec, &Grid::graded(16.0, 512, 2.0).unwrap()).unwrap();
    let fine = check_h3(&spec, &Grid::graded(16.0, 5120, 2.0).unwrap()).unwrap();
    let oracle = corrected_j_oracle(16.0, 20_000);
    assert!(!coarse.tail_flag && !coarse.a_identically_zero);
    assert!((fine.j - oracle).abs() < 1e-4 * oracle, "fine {} vs oracle {oracle}", fine.j);
    assert!((coarse.j - oracle).abs() < 2e-3 * oracle, "coarse {} vs oracle {oracle}", coarse.j);
}

#[test]
fn unit_gamma_with_exponential_a_is_flagged() {
    let spec = ProblemSpec::example41();
    for s_max in [20.0, 50.0] {
        let h3 = check_h3(&spec, &Grid::graded(s_max, 256, 2.0).unwrap()).unwrap();
        // I^1 e^{-t} = 1 - e^{-t}, so J(S) = S - 1 + e^{-S}.
        let want = s_max - 1.0 + (-s_max).exp();
        assert!((h3.j - want).abs() < 5e-3 * want, "{} vs {want}", h3.j);
        assert!(h3.tail_flag);
    }
}

#[test]
fn vanishing_a_is_reported() {
    let mut spec = ProblemSpec::corrected_example41();
    spec.a = Profile::Zero;
    let h3 = check_h3(&spec, &Grid::graded(10.0, 64, 2.0).unwrap()).unwrap();
    assert!(h3.a_identically_zero);
    assert_eq!(h3.j, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn m_is_monotone_in_b_and_j(b1 in 0.0f64..5.0, db in 0.0f64..5.0, j1 in 0.0f64..5.0, dj in 0.0f64..5.0) {
        for spec in [ProblemSpec::example41(), ProblemSpec::corrected_example41()] {
            let k = spec.kernel().unwrap();
            let m = compute_m(&k, &spec, b1, j1).unwrap();
            prop_assert!(m >= 0.0);
            prop_assert!(compute_m(&k, &spec, b1 + db, j1).unwrap() >= m);
            prop_assert!(compute_m(&k, &spec, b1, j1 + dj).unwrap() >= m);
        }
    }

    #[test]
    fn certificate_verdict_is_delta_at_least_m(delta in 1e-3f64..3.0) {
        let spec = ProblemSpec::example41();
        let opts = CertificateOptions { j_override: Some(1.0), ..CertificateOptions::default() };
        let grid = Grid::graded(10.0, 32, 2.0).unwrap();
        let cert = existence_certificate(&spec, delta, &grid, &opts).unwrap();
        prop_assert_eq!(cert.satisfied, cert.delta >= cert.m);
        prop_assert!(cert.reliable());
        // With B_δ = 1/9 + δ/3 and M = (3/√π) B_δ the verdict flips exactly at 1/(3(√π - 1)).
        let star = 1.0 / (3.0 * (std::f64::consts::PI.sqrt() - 1.0));
        if (delta - star).abs() > 1e-9 {
            prop_assert_eq!(cert.satisfied, delta > star);
        }
    }

    #[test]
    fn sampled_b_delta_is_nondecreasing(d1 in 0.0f64..2.0, dd in 0.0f64..2.0) {
        let mut spec = ProblemSpec::corrected_example41();
        spec.b_delta = None;
        let lo = sample_b_delta(&spec, d1, 20.0, 9).unwrap();
        let hi = sample_b_delta(&spec, d1 + dd, 20.0, 9).unwrap();
        prop_assert!(hi >= lo, "{lo} > {hi}");
    }
}

#[test]
fn smallest_certified_delta_is_tight() {
    let spec = ProblemSpec::corrected_example41();
    let k = spec.kernel().unwrap();
    let j = check_h3(&spec, &Grid::graded(20.0, 256, 2.0).unwrap()).unwrap().j;
    let bound = spec.b_delta.clone().unwrap();
    let m_of = |d: f64| compute_m(&k, &spec, bound.eval(d), j);
    let d = smallest_certified_delta(m_of).unwrap().unwrap();
    assert!(d >= m_of(d).unwrap());
    let below = d * (1.0 - 1e-9);
    assert!(below < m_of(below).unwrap());
}
