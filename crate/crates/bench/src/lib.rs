//! Fixtures shared by the criterion benches.

use hpws_core::harness::random::{euclidean_matrix, uniform_points};
use hpws_core::{Label, NetTreeParams, Network, Result, Space};

/// Uniform points in the unit square.
pub fn euclidean_network(n: usize, s: f64, seed: u64) -> Result<Network> {
    Network::euclidean(uniform_points(n, 2, seed)?, s)
}

/// The same point cloud given as a distance matrix.
pub fn doubling_network(n: usize, s: f64, tau: f64, seed: u64) -> Result<Network> {
    Network::doubling(Space::matrix(euclidean_matrix(n, 2, seed)?), s, NetTreeParams::new(tau)?)
}

/// Label pairs spread over the whole range, without randomness.
pub fn label_pairs(n: usize, count: usize) -> Vec<(Label, Label)> {
    let n = n as u64;
    (0..count as u64)
        .map(|i| {
            let p = i * 7919 % n;
            let q = (i * 104_729 + n / 2) % n;
            (p as Label + 1, q as Label + 1)
        })
        .filter(|(p, q)| p != q)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_valid_labels() {
        let pairs = label_pairs(100, 50);
        assert!(!pairs.is_empty());
        assert!(pairs.iter().all(|&(p, q)| p != q && (1..=100).contains(&p) && (1..=100).contains(&q)));
    }

    #[test]
    fn fixtures_build() {
        assert_eq!(euclidean_network(20, 4.0, 1).unwrap().len(), 20);
        assert_eq!(doubling_network(20, 4.0, 11.0, 1).unwrap().len(), 20);
    }
}
