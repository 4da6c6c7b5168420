mod common;

use common::*;
use semiisac::analytic::{op_noma, rate_noma, rate_oma, reir_general};
use semiisac::montecarlo::*;
use semiisac::scenario::{dbm_to_watts, Scenario, User};

fn settings(n: u64, seed: u64) -> McSettings {
    McSettings {
        n_samples: n,
        seed,
        ..Default::default()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn identical_seed_gives_bit_identical_estimates_for_any_worker_count() {
    let cfg = preset();
    let s = settings(200_000, 7);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_scenario(&cfg, Scenario::NomaSemiI, 1.0, 0.4, &s).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
    let other_seed =
        mc_scenario(&cfg, Scenario::NomaSemiI, 1.0, 0.4, &settings(200_000, 8)).unwrap();
    assert_ne!(one.rate_c.value, other_seed.rate_c.value);
}

#[test]
fn zero_threshold_never_outages_the_first_user() {
    let cfg = preset();
    let s = settings(20_000, 1);
    for scenario in [Scenario::NomaSemiI, Scenario::NomaSemiII] {
        let first = scenario.first_decoded().unwrap();
        assert_eq!(
            mc_outage(&cfg, scenario, first, 0.0, 0.4, &s)
                .unwrap()
                .value,
            0.0
        );
    }
}

#[test]
fn near_user_vanishes_and_far_user_floors() {
    let cfg = with_power_dbm(preset(), User::C, 80.0);
    let s = settings(1_000_000, 3);
    let near = mc_outage(&cfg, Scenario::NomaSemiI, User::C, 1.0, 0.4, &s).unwrap();
    assert_eq!(near.value, 0.0);
    let far = mc_outage(&cfg, Scenario::NomaSemiI, User::R, 1.0, 0.4, &s).unwrap();
    let band = cfg.isac_band().unwrap();
    let floor = gamma_cdf(
        band.m,
        (band.mean_echo() + band.noise) / (band.p_r * band.gain_r),
    );
    assert!(
        (far.value - floor).abs() <= 3.0 * far.ci_halfwidth.unwrap(),
        "{} vs {floor}",
        far.value
    );
}

#[test]
fn outage_matches_analytic_at_preset() {
    let cfg = preset();
    let s = settings(1_000_000, 11);
    for scenario in [Scenario::NomaSemiI, Scenario::NomaSemiII] {
        let est = mc_scenario(&cfg, scenario, 1.0, 0.4, &s).unwrap();
        for user in [User::C, User::R] {
            let a = op_noma(&cfg, scenario, user, 1.0, 0.4).unwrap().value;
            let mc = est.outage(user);
            assert!(
                (mc.value - a).abs() <= 3.0 * mc.ci_halfwidth.unwrap(),
                "{scenario} {user}: {} vs {a}",
                mc.value
            );
            let r = rate_noma(&cfg, scenario, user).unwrap().value;
            assert!(rel(est.rate(user).value, r) < 0.01);
        }
    }
}

#[test]
fn oma_rate_matches_closed_form() {
    let cfg = preset();
    let s = settings(1_000_000, 5);
    for user in [User::C, User::R] {
        let mc = mc_rate(&cfg, Scenario::OmaSemi, user, &s).unwrap().value;
        assert!(rel(mc, rate_oma(&cfg, user).unwrap().value) < 0.01);
    }
}

#[test]
fn vanishing_power_gives_vanishing_rate() {
    let mut cfg = preset();
    cfg.power.p_c = dbm_to_watts(-250.0);
    let r = mc_rate(&cfg, Scenario::OmaSemi, User::C, &settings(10_000, 2)).unwrap();
    assert!(r.value < 1e-20);
}

#[test]
fn imperfect_sic_lowers_second_user_rate_and_leaves_first_unchanged() {
    let perfect = preset();
    let mut imperfect = perfect;
    imperfect.power.varsigma_c = 0.1;
    imperfect.power.varsigma_r = 0.1;
    let s = settings(400_000, 9);
    let p = mc_scenario(&perfect, Scenario::NomaSemiII, 1.0, 0.4, &s).unwrap();
    let q = mc_scenario(&imperfect, Scenario::NomaSemiII, 1.0, 0.4, &s).unwrap();
    // Scenario II decodes the radar target first; its SINR has no SIC residual.
    assert_eq!(p.rate_r.value, q.rate_r.value);
    assert!(q.rate_c.value < p.rate_c.value);
    assert!(p.rate_c.value - q.rate_c.value > 3.0 * p.rate_c.ci_halfwidth.unwrap());
}

#[test]
fn reir_simulation() {
    let mut cfg = preset();
    let s = settings(1_000_000, 4);
    let perfect = mc_reir(&cfg, &s, SicModel::Perfect).unwrap();
    assert!(rel(perfect.value, reir_general(&cfg).unwrap().value) < 0.01);

    cfg.power.varsigma_c = 0.2;
    cfg.power.varsigma_r = 0.2;
    let imperfect = mc_reir(&cfg, &s, SicModel::Imperfect).unwrap();
    assert!(imperfect.value < perfect.value);
    // the residual model switch ignores the configured factors
    assert_eq!(mc_reir(&cfg, &s, SicModel::Perfect).unwrap(), perfect);

    cfg.bandwidth.beta_semi = 0.0;
    cfg.bandwidth.epsilon_semi = 1.0;
    assert_eq!(mc_reir(&cfg, &s, SicModel::Perfect).unwrap().value, 0.0);
}

#[test]
fn near_user_outage_bounded_by_far_user_at_equal_thresholds() {
    // With γ_SIC = γ_th every near-user outage is also a far-user outage.
    let cfg = preset();
    let est = mc_scenario(&cfg, Scenario::NomaSemiI, 1.0, 1.0, &settings(200_000, 6)).unwrap();
    assert!(est.outage_c.value <= est.outage_r.value);
}

#[test]
fn confidence_intervals_are_calibrated() {
    let cfg = preset();
    let op = op_noma(&cfg, Scenario::NomaSemiI, User::R, 1.0, 0.4)
        .unwrap()
        .value;
    let rate = rate_noma(&cfg, Scenario::NomaSemiI, User::C).unwrap().value;
    let (mut op_hits, mut rate_hits) = (0, 0);
    for seed in 0..100 {
        let e = mc_scenario(
            &cfg,
            Scenario::NomaSemiI,
            1.0,
            0.4,
            &settings(100_000, 1000 + seed),
        )
        .unwrap();
        if (e.outage_r.value - op).abs() <= e.outage_r.ci_halfwidth.unwrap() {
            op_hits += 1;
        }
        if (e.rate_c.value - rate).abs() <= e.rate_c.ci_halfwidth.unwrap() {
            rate_hits += 1;
        }
    }
    assert!(op_hits >= 95, "outage covered {op_hits}/100");
    assert!(rate_hits >= 95, "rate covered {rate_hits}/100");
}
