//! Shared inputs for the criterion benchmarks under `benches/`.

use dqes_core::{maxcut_hamiltonian, random_graph, Observable, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Max-Cut observable of a seeded G(n, 1/2) graph.
pub fn maxcut(n: usize) -> Observable {
    maxcut_hamiltonian(&random_graph(n, 0.5, 7).expect("valid graph")).expect("valid observable")
}

/// Dense-ish observable: every nearest-neighbour XX, YY and ZZ plus single-qubit X.
pub fn heisenberg(n: usize) -> Observable {
    let mut pairs: Vec<(f64, String)> = Vec::new();
    for q in 0..n - 1 {
        for p in ['X', 'Y', 'Z'] {
            let mut s = vec!['I'; n];
            s[q] = p;
            s[q + 1] = p;
            pairs.push((1.0, s.into_iter().collect()));
        }
    }
    for q in 0..n {
        let mut s = vec!['I'; n];
        s[q] = 'X';
        pairs.push((0.5, s.into_iter().collect()));
    }
    let refs: Vec<(f64, &str)> = pairs.iter().map(|(c, s)| (*c, s.as_str())).collect();
    Observable::from_pairs(&refs).expect("valid observable")
}

pub fn random_state(n: usize, seed: u64) -> StateVector {
    StateVector::haar_random(n, &mut ChaCha8Rng::seed_from_u64(seed)).expect("valid state")
}
