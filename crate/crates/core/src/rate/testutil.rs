//! Shared helpers for the rate-engine test modules.

use crate::model::GaussianNetwork;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Random all-real network with N relays, unit powers, gains ~ 2·N(0,1).
pub(crate) fn random_net(rng: &mut ChaCha8Rng, n: usize) -> GaussianNetwork {
    let gains: Vec<Vec<f64>> = (1..=n + 1)
        .map(|d| {
            (0..=n)
                .map(|t| {
                    if d == t {
                        0.0
                    } else {
                        let g: f64 = rand_distr::StandardNormal.sample(rng);
                        2.0 * g
                    }
                })
                .collect()
        })
        .collect();
    GaussianNetwork::real(n, gains, vec![1.0; n + 1]).unwrap()
}
