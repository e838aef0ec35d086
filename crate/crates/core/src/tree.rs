//! The rooted-tree view shared by compressed quadtrees and net trees.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A rooted tree whose leaves each store one point of the input set.
pub trait Hierarchy {
    fn root(&self) -> NodeId;
    fn node_count(&self) -> usize;
    fn parent(&self, a: NodeId) -> Option<NodeId>;
    fn children(&self, a: NodeId) -> &[NodeId];
    /// The point stored at `a`, if `a` is a leaf.
    fn leaf_point(&self, a: NodeId) -> Option<usize>;
    /// The leaf storing point `p`.
    fn leaf_of(&self, p: usize) -> NodeId;
    fn point_count(&self) -> usize;

    fn is_leaf(&self, a: NodeId) -> bool {
        self.leaf_point(a).is_some()
    }

    fn contains_node(&self, a: NodeId) -> bool {
        a.0 < self.node_count()
    }

    /// Root-first list of `a` and its ancestors, ending at the root.
    fn ancestors(&self, a: NodeId) -> Vec<NodeId> {
        let mut out = vec![a];
        let mut cur = a;
        while let Some(p) = self.parent(cur) {
            out.push(p);
            cur = p;
        }
        out
    }

    fn depth(&self, a: NodeId) -> usize {
        self.ancestors(a).len() - 1
    }

    /// Nodes in a preorder where every parent precedes its children.
    fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![self.root()];
        while let Some(a) = stack.pop() {
            out.push(a);
            stack.extend(self.children(a).iter().rev());
        }
        out
    }
}

/// Points of every subtree, as contiguous slices of one leaf ordering.
#[derive(Debug, Clone)]
pub struct SubtreePoints {
    order: Vec<usize>,
    range: Vec<(usize, usize)>,
}

impl SubtreePoints {
    pub fn new<T: Hierarchy + ?Sized>(tree: &T) -> Self {
        let mut order = Vec::with_capacity(tree.point_count());
        let mut range = vec![(0, 0); tree.node_count()];
        // iterative post-order: (node, children visited?)
        let mut stack = vec![(tree.root(), false)];
        let mut start = vec![0usize; tree.node_count()];
        while let Some((a, done)) = stack.pop() {
            if done {
                range[a.0] = (start[a.0], order.len());
                continue;
            }
            start[a.0] = order.len();
            if let Some(p) = tree.leaf_point(a) {
                order.push(p);
                range[a.0] = (start[a.0], order.len());
                continue;
            }
            stack.push((a, true));
            for &c in tree.children(a).iter().rev() {
                stack.push((c, false));
            }
        }
        Self { order, range }
    }

    pub fn points(&self, a: NodeId) -> &[usize] {
        let (lo, hi) = self.range[a.0];
        &self.order[lo..hi]
    }

    pub fn size(&self, a: NodeId) -> usize {
        let (lo, hi) = self.range[a.0];
        hi - lo
    }
}
