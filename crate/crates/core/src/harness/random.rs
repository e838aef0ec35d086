//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::metric::{DistanceMatrix, PointSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points drawn uniformly from the unit cube `[0, 1)^dim`.
pub fn uniform_points(n: usize, dim: usize, seed: u64) -> Result<PointSet> {
    let mut r = rng(seed);
    PointSet::from_coords((0..n).map(|_| (0..dim).map(|_| r.gen::<f64>()).collect::<Vec<_>>()))
}

/// Euclidean distances of uniform points, as a plain matrix.
pub fn euclidean_matrix(n: usize, dim: usize, seed: u64) -> Result<DistanceMatrix> {
    Ok(DistanceMatrix::from_points(&uniform_points(n, dim, seed)?))
}

/// L1 distances of uniform points; a doubling metric that is not
/// Euclidean.
pub fn manhattan_matrix(n: usize, dim: usize, seed: u64) -> Result<DistanceMatrix> {
    let pts = uniform_points(n, dim, seed)?;
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    pts.coords(i)
                        .iter()
                        .zip(pts.coords(j))
                        .map(|(a, b)| (a - b).abs())
                        .sum()
                })
                .collect()
        })
        .collect();
    DistanceMatrix::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = uniform_points(10, 3, 42).unwrap();
        let b = uniform_points(10, 3, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, uniform_points(10, 3, 43).unwrap());
        assert!(a.points().iter().flat_map(|p| p.coords()).all(|&c| (0.0..1.0).contains(&c)));
    }

    #[test]
    fn manhattan_is_a_metric() {
        let m = manhattan_matrix(20, 2, 1).unwrap();
        assert!(m.check_triangle(1e-12).is_ok());
    }
}
