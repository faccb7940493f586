use proptest::prelude::*;
use wavepacket_lab::analysis::morawetz::{delta_tr_pi, delta_tr_pi_fd, negativity_scan, TrPiLaplacian};
use wavepacket_lab::analysis::{
    dual_scale_norm, least_squares, log_log_fit, lr_norm, CubeSampler, EstimateReport, EvaluationGrid, GridSpec,
    Verdict,
};
use wavepacket_lab::propagator::{make_random_family, FieldSampler, Propagation, RandomFamily};

#[test]
fn cube_sum_with_p_two_is_the_l2_norm() {
    let data = make_random_family(3, 3, 5, RandomFamily::Zonal).unwrap();
    let cs = CubeSampler::new(&data, Propagation::Forward, 12, 4.0).unwrap();
    let fs = FieldSampler::new(&data, Propagation::Forward, 40.0).unwrap();
    let spec = GridSpec { t_max: 4.0, r_max: 20.0, ..GridSpec::default() };
    let grid = EvaluationGrid::new(3, data.l_max(), &spec).unwrap();
    for t in [0.0, 2.0, 4.0] {
        let l2 = lr_norm(&fs, t, 2.0, &grid).unwrap();
        for mu in [1.0, 0.5, 0.25] {
            let d = dual_scale_norm(&cs, t, mu, 2.0).unwrap();
            assert!((d - l2).abs() <= 1e-6, "t={t} μ={mu}: {d} vs {l2}");
        }
    }
}

#[test]
fn cube_norms_do_not_increase_with_p() {
    let data = make_random_family(3, 4, 2, RandomFamily::Zonal).unwrap();
    let cs = CubeSampler::new(&data, Propagation::Forward, 12, 6.0).unwrap();
    for t in [0.0, 3.0, 6.0] {
        for mu in [1.0, 0.5] {
            let vals: Vec<f64> =
                [1.0, 2.0, 3.0, 16.0 / 3.0, 8.0].iter().map(|&p| dual_scale_norm(&cs, t, mu, p).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "{vals:?}");
        }
    }
}

#[test]
fn verdicts_combine_by_severity() {
    use Verdict::*;
    assert_eq!(Verdict::combine([Pass, NotApplicable]), Pass);
    assert_eq!(Verdict::combine([Pass, Inconclusive]), Inconclusive);
    assert_eq!(Verdict::combine([Inconclusive, Fail, Pass]), Fail);
    assert_eq!(Verdict::combine([]), NotApplicable);
}

#[test]
fn unreliable_fits_are_inconclusive() {
    let mut rep = EstimateReport::new("noisy");
    rep.fit = Some(log_log_fit(&[1.0, 2.0, 4.0, 8.0], &[1.0, 3.0, 0.5, 2.5]).unwrap());
    rep.judge_upper(0.1, 1.0, "slope");
    assert_eq!(rep.verdict, Verdict::Inconclusive);
    let mut rep = EstimateReport::new("flat");
    rep.fit = Some(log_log_fit(&[1.0, 2.0, 4.0, 8.0], &[1.0, 1.001, 0.999, 1.0]).unwrap());
    rep.judge_band(rep.fit.as_ref().unwrap().slopes[0], 0.0, 0.15, "slope");
    assert_eq!(rep.verdict, Verdict::Pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn least_squares_recovers_planes(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for u in [0.0, 1.0, 2.5] {
            for v in [-1.0, 0.5, 2.0] {
                xs.push(vec![u, v]);
                ys.push(c + a * u + b * v);
            }
        }
        let f = least_squares(&xs, &ys).unwrap();
        prop_assert!((f.slopes[0] - a).abs() < 1e-10 && (f.slopes[1] - b).abs() < 1e-10);
    }

    #[test]
    fn trpi_laplacian_is_negative(n in 3usize..5, eps in 0.01f64..10.0, r in 0.01f64..200.0) {
        let grid = [r, 1.5 * r, 3.0 * r];
        prop_assert!(negativity_scan(n, eps, &grid, TrPiLaplacian::Printed).unwrap() <= 0.0);
        prop_assert!(negativity_scan(n, eps, &grid, TrPiLaplacian::Direct).unwrap() <= 0.0);
    }

    #[test]
    fn direct_laplacian_matches_differences(n in 3usize..5, eps in 0.1f64..4.0, r in 0.5f64..20.0) {
        let exact = delta_tr_pi(n, eps, r);
        let fd = delta_tr_pi_fd(n, eps, r, 1e-3);
        prop_assert!((exact - fd).abs() <= 1e-6 * exact.abs().max(1.0), "{} vs {}", exact, fd);
    }
}
