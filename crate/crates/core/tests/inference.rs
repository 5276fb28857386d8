use proptest::prelude::*;
use rateratio::inference::*;
use rateratio::{Error, GammaParams};

fn obs(x: u64, t: f64) -> CountObservation {
    CountObservation::new(x, t).unwrap()
}

#[test]
fn flat_prior_grid() {
    let flat = GammaParams::flat();
    for x in 0..=100u64 {
        for t in [0.5, 1.0, 3.0, 6.0] {
            let est = estimate_rate(&flat, &obs(x, t)).unwrap();
            assert_eq!(est.summaries.mean.expect_defined(), (x as f64 + 1.0) / t);
            assert_eq!(est.summaries.mode.expect_defined(), x as f64 / t);
            let sd = est.summaries.sd.expect_defined();
            assert!((sd - (x as f64 + 1.0).sqrt() / t).abs() < 1e-12);
        }
    }
}

#[test]
fn reference_rates() {
    let flat = GammaParams::flat();
    let r1 = estimate_rate(&flat, &obs(3, 3.0)).unwrap().summaries;
    let r2 = estimate_rate(&flat, &obs(6, 6.0)).unwrap().summaries;
    assert!((r1.mean.expect_defined() - 1.333).abs() < 1e-3);
    assert!((r1.sd.expect_defined() - 0.667).abs() < 1e-3);
    assert!((r2.mean.expect_defined() - 1.167).abs() < 1e-3);
    assert!((r2.sd.expect_defined() - 0.441).abs() < 1e-3);
}

#[test]
fn elicitation_and_update() {
    let prior = elicit_gamma(5.0, 2.0).unwrap();
    assert_eq!((prior.alpha(), prior.beta()), (6.25, 1.25));
    let post = update_rate(&prior, &obs(5, 1.2));
    assert!((post.alpha() - 11.25).abs() < 1e-12);
    assert!((post.beta() - 2.45).abs() < 1e-12);
    let back = elicit_gamma(3.0, 0.5).unwrap();
    assert!((back.mean() - 3.0).abs() < 1e-12 && (back.sd() - 0.5).abs() < 1e-12);
}

#[test]
fn sequential_lambda_updates() {
    let p = update_lambda(&update_lambda(&GammaParams::flat(), 2), 3);
    assert_eq!((p.alpha(), p.beta()), (6.0, 2.0));
}

#[test]
fn reference_rate_with_zero_likelihood() {
    assert!(matches!(
        relative_belief_ratio(1.0, &obs(2, 1.0), 0.0),
        Err(Error::Reference { .. })
    ));
}

#[test]
fn sensitivity_plateau() {
    for t in [0.1, 1.0, 50.0] {
        let o = obs(0, t);
        for rt in [1e-4, 5e-3, 0.0099] {
            let v = relative_belief_ratio(rt / t, &o, 0.0).unwrap();
            assert!(v > 0.99);
            assert!((v - (-rt).exp()).abs() < 1e-15);
        }
        for rt in [21.5, 40.0] {
            assert!(relative_belief_ratio(rt / t, &o, 0.0).unwrap() < 1e-9);
        }
    }
    assert_eq!(relative_belief_ratio(0.0, &obs(0, 4.0), 0.0).unwrap(), 1.0);
}

fn observation() -> impl Strategy<Value = CountObservation> {
    (0u64..500, 0.01f64..100.0).prop_map(|(x, t)| obs(x, t))
}

proptest! {
    #[test]
    fn combination_is_order_independent(mut list in prop::collection::vec(observation(), 1..8), seed in any::<u64>()) {
        let flat = GammaParams::flat();
        let a = combine_observations(&flat, &list).unwrap();
        let k = (seed % list.len() as u64) as usize;
        list.rotate_left(k);
        list.reverse();
        let b = combine_observations(&flat, &list).unwrap();
        prop_assert!((a.alpha() - b.alpha()).abs() < 1e-9);
        prop_assert!((a.beta() - b.beta()).abs() < 1e-9 * a.beta());
    }

    #[test]
    fn combination_is_a_fold(list in prop::collection::vec(observation(), 1..8)) {
        let prior = GammaParams::new(2.0, 0.5).unwrap();
        let folded = list.iter().fold(prior, |p, o| update_rate(&p, o));
        let pooled = combine_observations(&prior, &list).unwrap();
        prop_assert!((folded.alpha() - pooled.alpha()).abs() < 1e-9);
        prop_assert!((folded.beta() - pooled.beta()).abs() < 1e-9 * pooled.beta());
    }

    #[test]
    fn self_reference_is_one(o in observation(), r in 1e-3f64..50.0) {
        prop_assert!((relative_belief_ratio(r, &o, r).unwrap() - 1.0).abs() < 1e-12);
    }
}
