//! The eight-point instance on the line that pushes the routing ratio
//! towards `1 + 4/s`.
//!
//! Points are `α, 3α, 5α, 7α, 1−7α, 1−5α, 1−3α, 1−α` in `[0, 1]` with
//! `α = 2^−k`, `k = ⌈lg(4s + 8)⌉`. Perturbing by `ε < α` moves `p1`, `p8`
//! outwards and `p4`, `p5` inwards. The tree, labelling and WSPD are
//! computed on the unperturbed points and then reused, so only distances
//! change with `ε`.

use serde::Serialize;

use crate::decomposition::{HeavyPathLabelling, TieBreak};
use crate::error::{Error, Result};
use crate::metric::{Hypercube, PointSet, Space};
use crate::network::{Network, Tree};
use crate::quadtree::Quadtree;
use crate::tree::Hierarchy;
use crate::wspd::{SeparationRule, Wspd};

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundInstance {
    pub s: f64,
    pub eps: f64,
    pub k: u32,
    pub alpha: f64,
    pub points: PointSet,
}

/// Point indices: `p1` is 0, `p8` is 7.
pub const SOURCE: usize = 3;
pub const TARGET: usize = 4;
pub const EXPECTED_PAIRS: usize = 13;
pub const EXPECTED_ROUTE: [usize; 5] = [3, 2, 0, 7, 4];
pub const EXPECTED_SPANNER_PATH: [usize; 4] = [3, 0, 7, 4];

fn coords(alpha: f64, eps: f64) -> Vec<f64> {
    vec![
        alpha - eps,
        3.0 * alpha,
        5.0 * alpha,
        7.0 * alpha + eps,
        1.0 - 7.0 * alpha - eps,
        1.0 - 5.0 * alpha,
        1.0 - 3.0 * alpha,
        1.0 - alpha + eps,
    ]
}

pub fn lower_bound_instance(s: f64, eps: f64) -> Result<LowerBoundInstance> {
    if !(s > 2.0) || !s.is_finite() {
        return Err(Error::Separation(s));
    }
    let k = (4.0 * s + 8.0).log2().ceil() as u32;
    let alpha = 0.5f64.powi(k as i32);
    if !(0.0..alpha).contains(&eps) {
        return Err(Error::Perturbation { eps, alpha });
    }
    let points = PointSet::from_coords(coords(alpha, eps).into_iter().map(|x| vec![x]))?;
    Ok(LowerBoundInstance {
        s,
        eps,
        k,
        alpha,
        points,
    })
}

/// Heavy-child priority: distance from the root cell's centre to the
/// node's small-cell centre, so ties go to the outer child.
pub fn outward_priorities(tree: &Quadtree) -> Vec<f64> {
    let centre = tree.node(tree.root()).cell_small.center();
    tree.nodes()
        .iter()
        .map(|n| {
            n.cell_small
                .center()
                .iter()
                .zip(&centre)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

fn same_shape(a: &Quadtree, b: &Quadtree) -> bool {
    a.node_count() == b.node_count()
        && a.nodes()
            .iter()
            .zip(b.nodes())
            .all(|(x, y)| x.children == y.children && x.point == y.point && x.cell_small == y.cell_small)
}

impl LowerBoundInstance {
    /// `(1 + 10α + 6ε) / (1 − 14α − 2ε)`.
    pub fn predicted_ratio(&self) -> f64 {
        let (a, e) = (self.alpha, self.eps);
        (1.0 + 10.0 * a + 6.0 * e) / (1.0 - 14.0 * a - 2.0 * e)
    }

    /// The ε → α limit, `1 + 32α/(1 − 16α)`.
    pub fn limit_ratio(&self) -> f64 {
        1.0 + 32.0 * self.alpha / (1.0 - 16.0 * self.alpha)
    }

    /// Spanner and tables over `[0, 1]`, with the structure of `ε = 0`.
    pub fn network(&self) -> Result<Network> {
        let unit = Hypercube::unit(1);
        let base_points = PointSet::from_coords(coords(self.alpha, 0.0).into_iter().map(|x| vec![x]))?;
        let base_tree = Quadtree::build_in(&base_points, &unit)?;
        let base_space = Space::euclidean(base_points);
        let wspd = Wspd::build_euclidean_with(&base_tree, &base_space, self.s, SeparationRule::PointSets)?;

        let tree = Quadtree::build_in(&self.points, &unit)?;
        if !same_shape(&base_tree, &tree) {
            return Err(Error::Perturbation {
                eps: self.eps,
                alpha: self.alpha,
            });
        }
        let tie = TieBreak::Priority(outward_priorities(&tree));
        let labelling = HeavyPathLabelling::with_tie_break(&tree, &tie);
        Network::assemble(Space::euclidean(self.points.clone()), Tree::Quad(tree), labelling, wspd)
    }
}
