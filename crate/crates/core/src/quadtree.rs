//! Compressed quadtrees over Euclidean point sets.
//!
//! Each node carries two cells: `cell_large` is the half-split of the
//! parent's small cell that the node hangs from, and `cell_small` is the
//! deepest cell of the (compressed) chain, i.e. the smallest aligned cell
//! that still holds all of the node's points. Internal nodes always have at
//! least two children.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metric::{smallest_enclosing_hypercube, Hypercube, PointSet};
use crate::tree::{Hierarchy, NodeId};

/// Halvings beyond this many levels below a node's large cell are treated
/// as unresolvable (the cell has shrunk below floating-point resolution).
const MAX_CHAIN: usize = 1100;

#[derive(Debug, Clone)]
pub struct QuadtreeNode {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub cell_large: Hypercube,
    pub cell_small: Hypercube,
    pub point: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Quadtree {
    nodes: Vec<QuadtreeNode>,
    leaf_of: Vec<NodeId>,
    dim: usize,
}

impl Quadtree {
    /// Builds over the smallest enclosing hypercube of `points`.
    pub fn build(points: &PointSet) -> Result<Self> {
        let cube = smallest_enclosing_hypercube(points)?;
        Self::build_in(points, &cube)
    }

    /// Builds with an explicit root cube. Children are ordered by sub-cell
    /// index (bit `k` = upper half along axis `k`).
    pub fn build_in(points: &PointSet, root_cube: &Hypercube) -> Result<Self> {
        if root_cube.dim() != points.dim() {
            return Err(Error::DimensionMismatch {
                expected: points.dim(),
                got: root_cube.dim(),
            });
        }
        for i in 0..points.len() {
            if !root_cube.contains(points.coords(i)) {
                return Err(Error::OutsideRootCube { index: i });
            }
        }
        let mut tree = Quadtree {
            nodes: Vec::with_capacity(2 * points.len()),
            leaf_of: vec![NodeId(usize::MAX); points.len()],
            dim: points.dim(),
        };

        struct Job {
            parent: Option<NodeId>,
            cell: Hypercube,
            members: Vec<usize>,
        }
        let mut stack = vec![Job {
            parent: None,
            cell: root_cube.clone(),
            members: (0..points.len()).collect(),
        }];

        while let Some(job) = stack.pop() {
            let id = NodeId(tree.nodes.len());
            if let Some(p) = job.parent {
                tree.nodes[p.0].children.push(id);
            }
            if job.members.len() == 1 {
                let p = job.members[0];
                tree.leaf_of[p] = id;
                tree.nodes.push(QuadtreeNode {
                    parent: job.parent,
                    children: Vec::new(),
                    cell_large: job.cell.clone(),
                    cell_small: job.cell,
                    point: Some(p),
                });
                continue;
            }

            let (small, groups) = shrink(points, &job.cell, &job.members)?;
            tree.nodes.push(QuadtreeNode {
                parent: job.parent,
                children: Vec::new(),
                cell_large: job.cell,
                cell_small: small.clone(),
                point: None,
            });
            // push in reverse so children are created in orthant order
            for (orthant, members) in groups.into_iter().rev() {
                stack.push(Job {
                    parent: Some(id),
                    cell: small.child(orthant),
                    members,
                });
            }
        }
        Ok(tree)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self, a: NodeId) -> &QuadtreeNode {
        &self.nodes[a.0]
    }

    pub fn nodes(&self) -> &[QuadtreeNode] {
        &self.nodes
    }

    /// ℓ(a): the diagonal of the small cell, 0 for leaves.
    pub fn cell_diagonal(&self, a: NodeId) -> Result<f64> {
        if !self.contains_node(a) {
            return Err(Error::UnknownNode(a));
        }
        Ok(self.diag(a))
    }

    #[inline]
    pub(crate) fn diag(&self, a: NodeId) -> f64 {
        let n = &self.nodes[a.0];
        if n.point.is_some() {
            0.0
        } else {
            n.cell_small.diagonal()
        }
    }

    /// Indented one-node-per-line dump: id, small cell, ℓ, point.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root(), 0usize)];
        while let Some((a, depth)) = stack.pop() {
            let n = &self.nodes[a.0];
            let cell = n
                .cell_small
                .min
                .iter()
                .map(|m| format!("[{m}, {}]", m + n.cell_small.side))
                .collect::<Vec<_>>()
                .join("x");
            let point = n.point.map_or_else(|| "-".to_string(), |p| p.to_string());
            let _ = writeln!(
                out,
                "{:indent$}{} cell={} l={} point={}",
                "",
                a.0,
                cell,
                self.diag(a),
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

/// Descends from `cell` while every member falls in the same orthant.
/// Returns the small cell and the occupied orthants there, in index order.
fn shrink(
    points: &PointSet,
    cell: &Hypercube,
    members: &[usize],
) -> Result<(Hypercube, Vec<(usize, Vec<usize>)>)> {
    let mut cell = cell.clone();
    for depth in 0..MAX_CHAIN {
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for &p in members {
            let o = cell.orthant(points.coords(p));
            match groups.iter_mut().find(|(k, _)| *k == o) {
                Some((_, g)) => g.push(p),
                None => groups.push((o, vec![p])),
            }
        }
        if groups.len() > 1 {
            groups.sort_by_key(|(o, _)| *o);
            return Ok((cell, groups));
        }
        let next = cell.child(groups[0].0);
        if !(next.side > 0.0) || next == cell {
            return Err(Error::Unresolvable { depth });
        }
        cell = next;
    }
    Err(Error::Unresolvable { depth: MAX_CHAIN })
}

impl Hierarchy for Quadtree {
    fn root(&self) -> NodeId {
        NodeId(0)
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

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_coords(xs.iter().map(|&x| vec![x])).unwrap()
    }

    #[test]
    fn single_point_is_a_leaf() {
        let t = Quadtree::build(&line(&[0.3])).unwrap();
        assert_eq!(t.node_count(), 1);
        assert!(t.is_leaf(t.root()));
        assert_eq!(t.cell_diagonal(t.root()).unwrap(), 0.0);
    }

    #[test]
    fn two_points_compress_to_root_and_leaves() {
        let t = Quadtree::build_in(&line(&[0.1, 0.9]), &Hypercube::unit(1)).unwrap();
        assert_eq!(t.node_count(), 3);
        let root = t.root();
        assert_eq!(t.children(root).len(), 2);
        assert_eq!(t.cell_diagonal(root).unwrap(), 1.0);
        assert_eq!(t.leaf_point(t.children(root)[0]), Some(0));
        assert_eq!(t.leaf_point(t.children(root)[1]), Some(1));
    }

    #[test]
    fn chain_is_compressed_to_smallest_cell() {
        // both points in [0, 1/8): the root cell shrinks three times
        let t = Quadtree::build_in(&line(&[0.01, 0.1]), &Hypercube::unit(1)).unwrap();
        let root = t.node(t.root());
        assert_eq!(root.cell_small, Hypercube::new(vec![0.0], 0.125));
        assert_eq!(root.cell_large, Hypercube::unit(1));
    }

    #[test]
    fn rejects_points_outside_root() {
        let err = Quadtree::build_in(&line(&[0.5, 1.5]), &Hypercube::unit(1)).unwrap_err();
        assert!(matches!(err, Error::OutsideRootCube { index: 1 }));
    }

    #[test]
    fn unknown_node() {
        let t = Quadtree::build(&line(&[0.0, 1.0])).unwrap();
        assert!(matches!(t.cell_diagonal(NodeId(99)), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn very_close_points_resolve() {
        let t = Quadtree::build_in(&line(&[0.5, 0.5 + 1e-15, 0.7]), &Hypercube::unit(1)).unwrap();
        assert_eq!(t.point_count(), 3);
        for a in t.preorder() {
            assert!(t.is_leaf(a) || t.children(a).len() >= 2);
        }
    }

    #[test]
    fn dump_lists_every_node() {
        let t = Quadtree::build_in(&line(&[0.1, 0.9]), &Hypercube::unit(1)).unwrap();
        let d = t.dump();
        assert_eq!(d.lines().count(), 3);
        assert!(d.starts_with("0 cell=[0, 1] l=1 point=-"));
    }
}
