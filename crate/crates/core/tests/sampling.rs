use dqes_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn sampled_estimates_track_exact_values() {
    let obs = molecule_fixture("HeH+_100").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let states: Vec<StateVector> = (0..10)
        .map(|_| StateVector::haar_random(2, &mut rng).unwrap())
        .collect();
    let mut rms = Vec::new();
    for shots in [1_000u64, 10_000, 100_000] {
        let mut inside = 0;
        let mut sq = 0.0;
        let mut trials = 0;
        for (i, psi) in states.iter().enumerate() {
            let exact = obs.expectation(psi).unwrap();
            for rep in 0..10u64 {
                let (mean, stderr) = obs
                    .expectation_sampled(psi, shots, 100 * i as u64 + rep)
                    .unwrap();
                if (mean - exact).abs() <= 5.0 * stderr {
                    inside += 1;
                }
                sq += (mean - exact).powi(2);
                trials += 1;
            }
        }
        assert!(
            inside * 100 >= 99 * trials,
            "{shots} shots: {inside}/{trials} within 5 sigma"
        );
        rms.push((sq / trials as f64).sqrt());
    }
    assert!(rms[0] > rms[1] && rms[1] > rms[2], "{rms:?}");
}

#[test]
fn eigenstates_sample_exactly() {
    let obs = Observable::from_pairs(&[(0.5, "ZI"), (-1.25, "ZZ"), (2.0, "II")]).unwrap();
    let psi = StateVector::basis(2, 0b10).unwrap();
    let (mean, stderr) = obs.expectation_sampled(&psi, 500, 3).unwrap();
    assert_eq!(stderr, 0.0);
    assert!((mean - obs.expectation(&psi).unwrap()).abs() < 1e-12);
}

#[test]
fn same_seed_same_estimate() {
    let obs = molecule_fixture("H2_075").unwrap();
    let psi = build_full_mub_set(2).unwrap().state(3, 2).clone();
    let a = obs.expectation_sampled(&psi, 4096, 9).unwrap();
    let b = obs.expectation_sampled(&psi, 4096, 9).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, obs.expectation_sampled(&psi, 4096, 10).unwrap());
}
