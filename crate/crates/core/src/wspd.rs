//! Well-separated pair decompositions from a compressed quadtree or a net
//! tree.
//!
//! Both builders run the same recursion from `(root, root)`: order the two
//! nodes so the first one is the "larger" (bigger cell diagonal, or higher
//! level), emit the pair if the separation test passes, otherwise recurse on
//! the children of the larger node. A call on a node with itself expands to
//! each unordered pair of its children (and each child with itself), so no
//! pair is produced twice.

use serde::Serialize;

use crate::decomposition::HeavyPathLabelling;
use crate::error::{Error, Result};
use crate::metric::{cube_gap, set_diameter, set_distance, Space};
use crate::nettree::{level_scale, NetTree};
use crate::quadtree::Quadtree;
use crate::tree::{Hierarchy, NodeId, SubtreePoints};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WspdPair {
    pub a: NodeId,
    pub b: NodeId,
}

impl WspdPair {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone)]
pub struct Wspd {
    pairs: Vec<WspdPair>,
    separation: f64,
}

/// Separation test used by the quadtree builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparationRule {
    /// `d(C_S(a), C_S(b)) ≥ s·max{ℓ(a), ℓ(b)}` on the small cells.
    #[default]
    CellDiagonal,
    /// `d(S(a), S(b)) ≥ s·max{diam S(a), diam S(b)}` on the stored points,
    /// by exhaustive enumeration. Quadratic per test; meant for small inputs.
    PointSets,
}

fn check_separation(s: f64) -> Result<()> {
    if s > 2.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::Separation(s))
    }
}

impl Wspd {
    /// Quadtree WSPD with the cell-diagonal test.
    pub fn build_euclidean(tree: &Quadtree, s: f64) -> Result<Self> {
        check_separation(s)?;
        let pairs = decompose(tree, |a| tree.diag(a), |a, b| {
            cube_gap(&tree.node(a).cell_small, &tree.node(b).cell_small)
                >= s * tree.diag(a).max(tree.diag(b))
        });
        Ok(Self { pairs, separation: s })
    }

    pub fn build_euclidean_with(
        tree: &Quadtree,
        space: &Space,
        s: f64,
        rule: SeparationRule,
    ) -> Result<Self> {
        match rule {
            SeparationRule::CellDiagonal => Self::build_euclidean(tree, s),
            SeparationRule::PointSets => {
                check_separation(s)?;
                let sub = SubtreePoints::new(tree);
                let mut diam: Vec<Option<f64>> = vec![None; tree.node_count()];
                let mut diam_of = |a: NodeId| -> f64 {
                    *diam[a.0].get_or_insert_with(|| {
                        set_diameter(space, sub.points(a)).expect("subtrees are nonempty")
                    })
                };
                let pairs = decompose(tree, |a| tree.diag(a), |a, b| {
                    let gap = set_distance(space, sub.points(a), sub.points(b))
                        .expect("subtrees are nonempty");
                    gap >= s * diam_of(a).max(diam_of(b))
                });
                Ok(Self { pairs, separation: s })
            }
        }
    }

    /// Net-tree WSPD: `8s·(2τ/(τ-1))·max{τ^ℓ(a), τ^ℓ(b)} ≤ d(rep(a), rep(b))`
    /// with the net tree's own representatives and τ^−∞ = 0.
    pub fn build_doubling(tree: &NetTree, s: f64, space: &Space) -> Result<Self> {
        check_separation(s)?;
        let tau = tree.tau();
        let factor = 8.0 * s * tree.params().covering_factor();
        let pairs = decompose(
            tree,
            |a| tree.level(a).map_or(f64::NEG_INFINITY, f64::from),
            |a, b| {
                let scale = level_scale(tau, tree.level(a)).max(level_scale(tau, tree.level(b)));
                factor * scale <= space.dist(tree.rep(a), tree.rep(b))
            },
        );
        Ok(Self { pairs, separation: s })
    }

    pub fn pairs(&self) -> &[WspdPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// CSV rows `a_lo,a_hi,b_lo,b_hi` in emission order.
    pub fn to_csv(&self, hp: &HeavyPathLabelling) -> String {
        let mut out = String::from("a_interval_lo,a_interval_hi,b_interval_lo,b_interval_hi\n");
        for p in &self.pairs {
            let (ia, ib) = (hp.interval(p.a), hp.interval(p.b));
            out.push_str(&format!("{},{},{},{}\n", ia.lo, ia.hi, ib.lo, ib.hi));
        }
        out
    }
}

/// The shared recursion, run with an explicit stack in recursive order.
fn decompose<T, K, S>(tree: &T, key: K, mut separated: S) -> Vec<WspdPair>
where
    T: Hierarchy + ?Sized,
    K: Fn(NodeId) -> f64,
    S: FnMut(NodeId, NodeId) -> bool,
{
    let mut pairs = Vec::new();
    let mut stack = vec![(tree.root(), tree.root())];
    let mut buf = Vec::new();
    while let Some((a, b)) = stack.pop() {
        buf.clear();
        if a == b {
            let kids = tree.children(a);
            for (i, &x) in kids.iter().enumerate() {
                buf.push((x, x));
                for &y in &kids[i + 1..] {
                    buf.push((x, y));
                }
            }
        } else {
            let (a, b) = if key(a) < key(b) { (b, a) } else { (a, b) };
            if separated(a, b) {
                pairs.push(WspdPair { a, b });
                continue;
            }
            debug_assert!(!tree.is_leaf(a), "two leaves are always separated");
            buf.extend(tree.children(a).iter().map(|&c| (c, b)));
        }
        stack.extend(buf.iter().rev());
    }
    pairs
}

/// Finds the pair separating two points by walking the ancestors of one of
/// them and testing the other's label against the opposite side's interval.
#[derive(Debug, Clone)]
pub struct PairLocator {
    incident: Vec<Vec<usize>>,
    parent: Vec<Option<NodeId>>,
    leaf_of: Vec<NodeId>,
}

impl PairLocator {
    pub fn new<T: Hierarchy + ?Sized>(tree: &T, wspd: &Wspd) -> Self {
        let mut incident = vec![Vec::new(); tree.node_count()];
        for (i, p) in wspd.pairs.iter().enumerate() {
            incident[p.a.0].push(i);
            incident[p.b.0].push(i);
        }
        Self {
            incident,
            parent: (0..tree.node_count()).map(|a| tree.parent(NodeId(a))).collect(),
            leaf_of: (0..tree.point_count()).map(|p| tree.leaf_of(p)).collect(),
        }
    }

    /// Index of the pair separating `p` and `q`, oriented as
    /// `(pair, side holding p, side holding q)`.
    pub fn find(
        &self,
        wspd: &Wspd,
        hp: &HeavyPathLabelling,
        p: usize,
        q: usize,
    ) -> Result<(usize, NodeId, NodeId)> {
        if p == q {
            return Err(Error::SamePoint(p));
        }
        let lq = hp.label(q);
        let mut found = None;
        let mut count = 0;
        let mut cur = Some(self.leaf_of[p]);
        while let Some(x) = cur {
            for &i in &self.incident[x.0] {
                let other = wspd.pairs[i].other(x);
                if hp.interval(other).contains(lq) {
                    count += 1;
                    found.get_or_insert((i, x, other));
                }
            }
            cur = self.parent[x.0];
        }
        match (found, count) {
            (Some(f), 1) => Ok(f),
            _ => Err(Error::BrokenWspd { p, q, found: count }),
        }
    }
}

/// The separating pair for `p`, `q`, as stored.
pub fn find_separating_pair(
    wspd: &Wspd,
    locator: &PairLocator,
    hp: &HeavyPathLabelling,
    p: usize,
    q: usize,
) -> Result<WspdPair> {
    locator.find(wspd, hp, p, q).map(|(i, _, _)| wspd.pairs[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Hypercube, PointSet};

    fn line(xs: &[f64]) -> (PointSet, Quadtree) {
        let pts = PointSet::from_coords(xs.iter().map(|&x| vec![x])).unwrap();
        let t = Quadtree::build_in(&pts, &Hypercube::unit(1)).unwrap();
        (pts, t)
    }

    #[test]
    fn rejects_small_separation() {
        let (_, t) = line(&[0.1, 0.9]);
        assert!(matches!(Wspd::build_euclidean(&t, 2.0), Err(Error::Separation(_))));
        assert!(Wspd::build_euclidean(&t, f64::NAN).is_err());
    }

    #[test]
    fn one_and_two_points() {
        let (_, t) = line(&[0.5]);
        assert!(Wspd::build_euclidean(&t, 3.0).unwrap().is_empty());
        let (_, t) = line(&[0.1, 0.9]);
        let w = Wspd::build_euclidean(&t, 3.0).unwrap();
        assert_eq!(w.len(), 1);
        assert!(t.is_leaf(w.pairs()[0].a) && t.is_leaf(w.pairs()[0].b));
    }

    #[test]
    fn locator_finds_unique_pair() {
        let (_, t) = line(&[0.05, 0.1, 0.15, 0.6, 0.65, 0.9]);
        let w = Wspd::build_euclidean(&t, 2.5).unwrap();
        let hp = HeavyPathLabelling::new(&t);
        let loc = PairLocator::new(&t, &w);
        for p in 0..6 {
            for q in 0..6 {
                if p == q {
                    assert!(matches!(
                        find_separating_pair(&w, &loc, &hp, p, q),
                        Err(Error::SamePoint(_))
                    ));
                    continue;
                }
                let pair = find_separating_pair(&w, &loc, &hp, p, q).unwrap();
                let (a, b) = (hp.contains_point(pair.a, p), hp.contains_point(pair.b, q));
                let (a2, b2) = (hp.contains_point(pair.b, p), hp.contains_point(pair.a, q));
                assert!((a && b) || (a2 && b2));
            }
        }
    }

    #[test]
    fn csv_rows() {
        let (_, t) = line(&[0.1, 0.9]);
        let w = Wspd::build_euclidean(&t, 3.0).unwrap();
        let hp = HeavyPathLabelling::new(&t);
        assert_eq!(
            w.to_csv(&hp),
            "a_interval_lo,a_interval_hi,b_interval_lo,b_interval_hi\n1,1,2,2\n"
        );
    }
}
