//! Net trees for abstract metric spaces.
//!
//! The tree is assembled bottom-up from a nested sequence of greedy nets:
//! `N_i ⊆ N_{i-1}` keeps points pairwise more than `τ^i` apart and every
//! point of `N_{i-1}` lies within `τ^i` of its nearest point of `N_i`, which
//! becomes its parent. Single-child chains are then compressed, and a node's
//! level is the level at which its chain branches. Leaves sit at level −∞.
//!
//! With those constants a node's points lie within `τ/(τ-1)·τ^ℓ` of its
//! representative, and any point within `(τ-3)/(2(τ-1))·τ^(ℓ(parent)-1)` of
//! it is captured by the nearest-parent rule, so both the covering and the
//! packing property hold. [`NetTree::build`] re-checks both anyway.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::Space;
use crate::tree::{Hierarchy, NodeId, SubtreePoints};

/// Node level; `None` is −∞ (leaves).
pub type Level = Option<i32>;

/// τ^level with τ^−∞ = 0.
#[inline]
pub fn level_scale(tau: f64, level: Level) -> f64 {
    level.map_or(0.0, |l| tau.powi(l))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetTreeParams {
    pub tau: f64,
    /// Shuffles the greedy visiting order; `None` keeps input order.
    pub seed: Option<u64>,
}

impl NetTreeParams {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau >= 11.0) || !tau.is_finite() {
            return Err(Error::Tau(tau));
        }
        Ok(Self { tau, seed: None })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn covering_factor(&self) -> f64 {
        2.0 * self.tau / (self.tau - 1.0)
    }

    pub fn packing_factor(&self) -> f64 {
        (self.tau - 5.0) / (2.0 * (self.tau - 1.0))
    }
}

#[derive(Debug, Clone)]
pub struct NetTreeNode {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub level: Level,
    /// Construction-time representative (not the heavy-path one).
    pub rep: usize,
    pub point: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct NetTree {
    nodes: Vec<NetTreeNode>,
    leaf_of: Vec<NodeId>,
    root: NodeId,
    params: NetTreeParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyViolation {
    pub node: NodeId,
    pub point: usize,
    pub distance: f64,
    pub bound: f64,
}

impl std::fmt::Display for PropertyViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "node {} / point {}: distance {} vs bound {}",
            self.node.0, self.point, self.distance, self.bound
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PropertyReport {
    pub violations: Vec<PropertyViolation>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl NetTree {
    /// Builds and validates; fails if covering or packing does not hold.
    pub fn build(space: &Space, params: NetTreeParams) -> Result<Self> {
        let tree = Self::build_unchecked(space, params)?;
        for (name, report) in [
            ("covering", tree.verify_covering(space)),
            ("packing", tree.verify_packing(space)),
        ] {
            if let Some(first) = report.violations.first() {
                return Err(Error::NetTreeProperty {
                    property: name,
                    count: report.violations.len(),
                    first: first.to_string(),
                });
            }
        }
        Ok(tree)
    }

    pub fn build_unchecked(space: &Space, params: NetTreeParams) -> Result<Self> {
        let params = NetTreeParams::new(params.tau).map(|p| NetTreeParams {
            seed: params.seed,
            ..p
        })?;
        let n = space.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if n == 1 {
            return Ok(Self {
                nodes: vec![NetTreeNode {
                    parent: None,
                    children: Vec::new(),
                    level: None,
                    rep: 0,
                    point: Some(0),
                }],
                leaf_of: vec![NodeId(0)],
                root: NodeId(0),
                params,
            });
        }
        let tau = params.tau;

        let mut min_d = f64::INFINITY;
        let mut diam = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let d = space.dist(i, j);
                if d <= 0.0 {
                    return Err(Error::DuplicatePoint { first: i, second: j });
                }
                min_d = min_d.min(d);
                diam = diam.max(d);
            }
        }
        let lo = min_d.log(tau).floor() as i32 - 1;
        let hi = diam.log(tau).ceil() as i32 + 1;

        let mut order: Vec<usize> = (0..n).collect();
        if let Some(seed) = params.seed {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }

        // nets[t] is the net at level lo + t; up[t][y] is y's parent in nets[t]
        // for y in the level below (all points when t = 0).
        let mut nets: Vec<Vec<usize>> = Vec::new();
        let mut up: Vec<Vec<usize>> = Vec::new();
        let mut below = order;
        let mut level = lo;
        loop {
            let radius = tau.powi(level);
            let mut net: Vec<usize> = Vec::new();
            for &x in &below {
                if net.iter().all(|&y| space.dist(x, y) > radius) {
                    net.push(x);
                }
            }
            let mut parent = vec![usize::MAX; n];
            let mut in_net = vec![false; n];
            for &x in &net {
                in_net[x] = true;
                parent[x] = x;
            }
            for &y in &below {
                if in_net[y] {
                    continue;
                }
                let mut best = (f64::INFINITY, usize::MAX);
                for &x in &net {
                    let d = space.dist(x, y);
                    if d < best.0 {
                        best = (d, x);
                    }
                }
                parent[y] = best.1;
            }
            let done = net.len() == 1;
            nets.push(net.clone());
            up.push(parent);
            below = net;
            if done || level >= hi {
                break;
            }
            level += 1;
        }
        debug_assert_eq!(nets.last().map(Vec::len), Some(1));
        let levels = nets.len();

        let mut child_count = vec![vec![0u32; n]; levels];
        let mut top = vec![0usize; n];
        for t in 0..levels {
            let lower: &[usize] = if t == 0 { &[] } else { &nets[t - 1] };
            if t == 0 {
                for y in 0..n {
                    child_count[0][up[0][y]] += 1;
                }
            } else {
                for &y in lower {
                    child_count[t][up[t][y]] += 1;
                }
            }
            for &x in &nets[t] {
                top[x] = t;
            }
        }

        // leaves first (NodeId == point index), then branching nodes
        let mut nodes: Vec<NetTreeNode> = (0..n)
            .map(|p| NetTreeNode {
                parent: None,
                children: Vec::new(),
                level: None,
                rep: p,
                point: Some(p),
            })
            .collect();
        let mut at: HashMap<(usize, usize), NodeId> = HashMap::new();
        // iterate points in net order so node numbering is stable
        let mut visit: Vec<usize> = nets.iter().rev().flatten().copied().collect();
        visit.dedup();
        let mut seen = vec![false; n];
        let visit: Vec<usize> = visit
            .into_iter()
            .filter(|&x| !std::mem::replace(&mut seen[x], true))
            .collect();
        for &x in &visit {
            for t in (0..=top[x]).rev() {
                if child_count[t][x] >= 2 {
                    at.insert((t, x), NodeId(nodes.len()));
                    nodes.push(NetTreeNode {
                        parent: None,
                        children: Vec::new(),
                        level: Some(lo + t as i32),
                        rep: x,
                        point: None,
                    });
                }
            }
        }

        // parent of the chain of x that starts just above level index `from`
        let parent_above = |x: usize, from: Option<usize>| -> Option<NodeId> {
            let start = from.map_or(0, |t| t + 1);
            for t in start..=top[x] {
                if let Some(&id) = at.get(&(t, x)) {
                    return Some(id);
                }
            }
            let t = top[x] + 1;
            if t >= levels {
                return None;
            }
            let y = up[t][x];
            Some(at[&(t, y)])
        };

        let mut root = None;
        for p in 0..n {
            nodes[p].parent = parent_above(p, None);
        }
        for (&(t, x), &id) in &at {
            let parent = parent_above(x, Some(t));
            nodes[id.0].parent = parent;
            if parent.is_none() {
                root = Some(id);
            }
        }
        let root = root.expect("top net is a single branching point");

        // children: the continuation child (same rep) first, then by rep order
        let mut rank = vec![0usize; n];
        for (i, &x) in visit.iter().enumerate() {
            rank[x] = i;
        }
        for id in 0..nodes.len() {
            if let Some(p) = nodes[id].parent {
                nodes[p.0].children.push(NodeId(id));
            }
        }
        for id in 0..nodes.len() {
            let rep = nodes[id].rep;
            let mut kids = std::mem::take(&mut nodes[id].children);
            kids.sort_by_key(|c| {
                let c = &nodes[c.0];
                (c.rep != rep, rank[c.rep], c.point.is_some())
            });
            nodes[id].children = kids;
        }

        Ok(Self {
            nodes,
            leaf_of: (0..n).map(NodeId).collect(),
            root,
            params,
        })
    }

    pub fn params(&self) -> NetTreeParams {
        self.params
    }

    pub fn tau(&self) -> f64 {
        self.params.tau
    }

    pub fn node(&self, a: NodeId) -> &NetTreeNode {
        &self.nodes[a.0]
    }

    pub fn nodes(&self) -> &[NetTreeNode] {
        &self.nodes
    }

    pub fn level(&self, a: NodeId) -> Level {
        self.nodes[a.0].level
    }

    pub fn rep(&self, a: NodeId) -> usize {
        self.nodes[a.0].rep
    }

    /// Covering radius `2τ/(τ-1)·τ^ℓ(a)`.
    pub fn covering_radius(&self, a: NodeId) -> f64 {
        self.params.covering_factor() * level_scale(self.tau(), self.level(a))
    }

    /// For every node and every point below it, `d(rep, x)` must not exceed
    /// the covering radius.
    pub fn verify_covering(&self, space: &Space) -> PropertyReport {
        let sub = SubtreePoints::new(self);
        let mut report = PropertyReport::default();
        for id in 0..self.nodes.len() {
            let a = NodeId(id);
            let bound = self.covering_radius(a);
            let rep = self.rep(a);
            for &x in sub.points(a) {
                let d = space.dist(rep, x);
                if d > bound {
                    report.violations.push(PropertyViolation {
                        node: a,
                        point: x,
                        distance: d,
                        bound,
                    });
                }
            }
        }
        report
    }

    /// For every non-root node, every point within
    /// `(τ-5)/(2(τ-1))·τ^(ℓ(parent)-1)` of the rep must lie below the node.
    pub fn verify_packing(&self, space: &Space) -> PropertyReport {
        let sub = SubtreePoints::new(self);
        let n = self.point_count();
        let mut report = PropertyReport::default();
        let mut inside = vec![false; n];
        for id in 0..self.nodes.len() {
            let a = NodeId(id);
            let Some(p) = self.parent(a) else { continue };
            let bound = self.params.packing_factor()
                * self.level(p).map_or(0.0, |l| self.tau().powi(l - 1));
            for &x in sub.points(a) {
                inside[x] = true;
            }
            let rep = self.rep(a);
            for x in 0..n {
                let d = space.dist(rep, x);
                if d <= bound && !inside[x] {
                    report.violations.push(PropertyViolation {
                        node: a,
                        point: x,
                        distance: d,
                        bound,
                    });
                }
            }
            for &x in sub.points(a) {
                inside[x] = false;
            }
        }
        report
    }

    /// `(4τ/(τ-1))·τ^(ℓ(p^k(a)) - k)`, an upper bound on diam S(a).
    pub fn subtree_diameter_bound(&self, a: NodeId, k: usize) -> Result<f64> {
        if !self.contains_node(a) {
            return Err(Error::UnknownNode(a));
        }
        let mut anc = a;
        for _ in 0..k {
            anc = self.parent(anc).ok_or(Error::NoAncestor { node: a, k })?;
        }
        let factor = 2.0 * self.params.covering_factor();
        Ok(match self.level(anc) {
            None => 0.0,
            Some(l) => factor * self.tau().powi(l - k as i32),
        })
    }

    /// Moves a leaf under another node without any validation. Only useful
    /// for exercising the property checks.
    #[doc(hidden)]
    pub fn reattach_leaf_unchecked(&mut self, leaf: NodeId, new_parent: NodeId) {
        if let Some(old) = self.nodes[leaf.0].parent {
            self.nodes[old.0].children.retain(|&c| c != leaf);
        }
        self.nodes[new_parent.0].children.push(leaf);
        self.nodes[leaf.0].parent = Some(new_parent);
    }

    /// Same layout as the quadtree dump, with the level in place of the cell.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((a, depth)) = stack.pop() {
            let n = &self.nodes[a.0];
            let level = n.level.map_or_else(|| "-inf".to_string(), |l| l.to_string());
            let point = n.point.map_or_else(|| "-".to_string(), |p| p.to_string());
            let _ = writeln!(
                out,
                "{:indent$}{} level={} rep={} point={}",
                "",
                a.0,
                level,
                n.rep,
                point,
                indent = 2 * depth
            );
            for &c in n.children.iter().rev() {
                stack.push((c, depth + 1));
            }
        }
        out
    }
}

impl Hierarchy for NetTree {
    fn root(&self) -> NodeId {
        self.root
    }

    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn parent(&self, a: NodeId) -> Option<NodeId> {
        self.nodes[a.0].parent
    }

    fn children(&self, a: NodeId) -> &[NodeId] {
        &self.nodes[a.0].children
    }

    fn leaf_point(&self, a: NodeId) -> Option<usize> {
        self.nodes[a.0].point
    }

    fn leaf_of(&self, p: usize) -> NodeId {
        self.leaf_of[p]
    }

    fn point_count(&self) -> usize {
        self.leaf_of.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{set_diameter, DistanceMatrix, PointSet};

    fn line_matrix(xs: &[f64]) -> Space {
        let pts = PointSet::from_coords(xs.iter().map(|&x| vec![x])).unwrap();
        Space::matrix(DistanceMatrix::from_points(&pts))
    }

    fn params(tau: f64) -> NetTreeParams {
        NetTreeParams::new(tau).unwrap()
    }

    #[test]
    fn tau_below_eleven_rejected() {
        assert!(matches!(NetTreeParams::new(10.5), Err(Error::Tau(_))));
        assert!(NetTreeParams::new(f64::NAN).is_err());
    }

    #[test]
    fn single_point_leaf() {
        let s = line_matrix(&[0.0]);
        let t = NetTree::build(&s, params(11.0)).unwrap();
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.level(t.root()), None);
        assert!(t.verify_covering(&s).passed());
        assert_eq!(t.subtree_diameter_bound(t.root(), 0).unwrap(), 0.0);
    }

    #[test]
    fn two_points() {
        // d = 1, τ = 11: level 0 is the smallest with τ^ℓ ≥ 1, so the net at
        // level 0 is a single point and level -1 still holds both.
        let s = line_matrix(&[0.0, 1.0]);
        let t = NetTree::build(&s, params(11.0)).unwrap();
        assert_eq!(t.node_count(), 3);
        let root = t.root();
        assert_eq!(t.level(root), Some(0));
        assert_eq!(t.children(root).len(), 2);
        assert!(t.children(root).iter().all(|&c| t.is_leaf(c)));
        assert!(t.verify_covering(&s).passed());
        assert!(t.verify_packing(&s).passed());
        let leaf = t.children(root)[1];
        assert!(t.subtree_diameter_bound(root, 0).unwrap() >= 1.0);
        assert!(t.subtree_diameter_bound(leaf, 1).unwrap() > 0.0);
        assert!(matches!(
            t.subtree_diameter_bound(leaf, 2),
            Err(Error::NoAncestor { .. })
        ));
    }

    #[test]
    fn lower_bound_set_as_matrix() {
        let a = 1.0 / 32.0;
        let xs: Vec<f64> = [1.0, 3.0, 5.0, 7.0, 25.0, 27.0, 29.0, 31.0]
            .iter()
            .map(|k| k * a)
            .collect();
        let s = line_matrix(&xs);
        for tau in [11.0, 16.0] {
            let t = NetTree::build(&s, params(tau)).unwrap();
            assert!(t.verify_covering(&s).passed());
            assert!(t.verify_packing(&s).passed());
            assert_eq!(t.point_count(), 8);
        }
    }

    #[test]
    fn corrupted_tree_is_reported() {
        // two well separated clusters; moving a leaf across breaks both
        let xs = [0.0, 0.01, 0.02, 100.0, 100.01, 100.02];
        let s = line_matrix(&xs);
        let mut t = NetTree::build(&s, params(11.0)).unwrap();
        let far_leaf = t.leaf_of(5);
        let near_leaf = t.leaf_of(0);
        let target = t.parent(near_leaf).unwrap();
        t.reattach_leaf_unchecked(far_leaf, target);
        assert!(!t.verify_covering(&s).passed());
        assert!(!t.verify_packing(&s).passed());
    }

    #[test]
    fn levels_strictly_decrease_and_diameter_bound_holds() {
        let xs: Vec<f64> = (0..40).map(|i| ((i * 37) % 101) as f64 * 0.173 + i as f64).collect();
        let s = line_matrix(&xs);
        let t = NetTree::build(&s, params(11.0).with_seed(7)).unwrap();
        let sub = SubtreePoints::new(&t);
        for a in t.preorder() {
            if let Some(p) = t.parent(a) {
                assert!(t.level(a) < t.level(p));
            }
            let diam = set_diameter(&s, sub.points(a)).unwrap();
            for k in 0..=t.depth(a) {
                assert!(diam <= t.subtree_diameter_bound(a, k).unwrap());
            }
            if !t.is_leaf(a) {
                assert!(t.children(a).iter().any(|&c| t.rep(c) == t.rep(a)));
            }
        }
    }

    #[test]
    fn dump_format() {
        let s = line_matrix(&[0.0, 1.0]);
        let t = NetTree::build(&s, params(11.0)).unwrap();
        let d = t.dump();
        assert!(d.starts_with(&format!("{} level=0 rep=0 point=-", t.root().0)));
        assert_eq!(d.lines().count(), 3);
    }
}
