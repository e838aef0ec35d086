//! Heavy path decomposition and heavy-first DFS labelling.
//!
//! Leaves get labels `1..=n` in a DFS that always enters the heavy child
//! first. Every node's leaves then occupy a contiguous label interval whose
//! low end is the label of the node's representative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{Hierarchy, NodeId};

pub type Label = u32;

/// Closed label interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Label,
    pub hi: Label,
}

impl Interval {
    pub fn new(lo: Label, hi: Label) -> Self {
        Self { lo, hi }
    }

    #[inline]
    pub fn contains(&self, x: Label) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// How to choose among children of equal (maximal) leaf count.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum TieBreak {
    /// Lowest child index.
    #[default]
    FirstChild,
    /// Highest per-node priority, then lowest child index.
    Priority(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct HeavyPathLabelling {
    size: Vec<usize>,
    heavy_child: Vec<Option<NodeId>>,
    rep: Vec<NodeId>,
    apex: Vec<NodeId>,
    label: Vec<Label>,
    by_label: Vec<usize>,
    interval: Vec<Interval>,
    leaf_of: Vec<NodeId>,
    light_depth: Vec<u32>,
}

impl HeavyPathLabelling {
    pub fn new<T: Hierarchy + ?Sized>(tree: &T) -> Self {
        Self::with_tie_break(tree, &TieBreak::FirstChild)
    }

    /// Decomposes and labels in two linear passes.
    pub fn with_tie_break<T: Hierarchy + ?Sized>(tree: &T, tie: &TieBreak) -> Self {
        let m = tree.node_count();
        let n = tree.point_count();
        let pre = tree.preorder();

        let mut size = vec![0usize; m];
        let mut heavy_child = vec![None; m];
        let mut rep = vec![NodeId(usize::MAX); m];
        for &a in pre.iter().rev() {
            if tree.is_leaf(a) {
                size[a.0] = 1;
                rep[a.0] = a;
                continue;
            }
            let kids = tree.children(a);
            size[a.0] = kids.iter().map(|c| size[c.0]).sum();
            let mut best = kids[0];
            for &c in &kids[1..] {
                let better = match size[c.0].cmp(&size[best.0]) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => match tie {
                        TieBreak::FirstChild => false,
                        TieBreak::Priority(pr) => pr[c.0] > pr[best.0],
                    },
                };
                if better {
                    best = c;
                }
            }
            heavy_child[a.0] = Some(best);
            rep[a.0] = rep[best.0];
        }

        let mut apex = vec![NodeId(usize::MAX); n];
        let mut light_depth = vec![0u32; m];
        for &a in &pre {
            let is_heavy = match tree.parent(a) {
                None => false,
                Some(p) => heavy_child[p.0] == Some(a),
            };
            if let Some(p) = tree.parent(a) {
                light_depth[a.0] = light_depth[p.0] + u32::from(!is_heavy);
            }
            if !is_heavy {
                let leaf = rep[a.0];
                let point = tree.leaf_point(leaf).expect("representatives are leaves");
                apex[point] = a;
            }
        }

        let mut label = vec![0 as Label; n];
        let mut by_label = Vec::with_capacity(n);
        let mut interval = vec![Interval::new(0, 0); m];
        let mut stack = vec![tree.root()];
        while let Some(a) = stack.pop() {
            if let Some(p) = tree.leaf_point(a) {
                by_label.push(p);
                label[p] = by_label.len() as Label;
                continue;
            }
            let h = heavy_child[a.0].expect("internal node");
            for &c in tree.children(a).iter().rev() {
                if c != h {
                    stack.push(c);
                }
            }
            stack.push(h);
        }
        for &a in pre.iter().rev() {
            interval[a.0] = match tree.leaf_point(a) {
                Some(p) => Interval::new(label[p], label[p]),
                None => {
                    let kids = tree.children(a);
                    let lo = kids.iter().map(|c| interval[c.0].lo).min().unwrap();
                    let hi = kids.iter().map(|c| interval[c.0].hi).max().unwrap();
                    Interval::new(lo, hi)
                }
            };
        }

        let leaf_of = (0..n).map(|p| tree.leaf_of(p)).collect();
        Self {
            size,
            heavy_child,
            rep,
            apex,
            label,
            by_label,
            interval,
            leaf_of,
            light_depth,
        }
    }

    pub fn point_count(&self) -> usize {
        self.label.len()
    }

    /// Number of leaves below `a`.
    pub fn size(&self, a: NodeId) -> usize {
        self.size[a.0]
    }

    pub fn heavy_child(&self, a: NodeId) -> Option<NodeId> {
        self.heavy_child[a.0]
    }

    /// r(a) as a leaf node.
    pub fn rep_leaf(&self, a: NodeId) -> NodeId {
        self.rep[a.0]
    }

    /// r(a) as a point index.
    pub fn rep_point(&self, a: NodeId) -> usize {
        self.by_label[self.interval[a.0].lo as usize - 1]
    }

    /// h(v): the shallowest node whose representative is point `v`.
    pub fn apex(&self, v: usize) -> NodeId {
        self.apex[v]
    }

    pub fn label(&self, p: usize) -> Label {
        self.label[p]
    }

    pub fn point_of(&self, label: Label) -> Option<usize> {
        self.by_label.get((label as usize).checked_sub(1)?).copied()
    }

    pub fn interval(&self, a: NodeId) -> Interval {
        self.interval[a.0]
    }

    pub fn apex_interval(&self, v: usize) -> Interval {
        self.interval[self.apex[v].0]
    }

    /// Points below `a`, in label order.
    pub fn points_in(&self, a: NodeId) -> &[usize] {
        let iv = self.interval[a.0];
        &self.by_label[iv.lo as usize - 1..iv.hi as usize]
    }

    pub fn contains_point(&self, a: NodeId, p: usize) -> bool {
        self.interval[a.0].contains(self.label[p])
    }

    /// Light edges on the root-to-leaf path of leaf node `v`.
    pub fn light_depth(&self, v: NodeId) -> Result<u32> {
        if v.0 >= self.size.len() {
            return Err(Error::UnknownNode(v));
        }
        if self.size[v.0] != 1 || self.heavy_child[v.0].is_some() {
            return Err(Error::NotALeaf(v));
        }
        Ok(self.light_depth[v.0])
    }

    /// Light edges above the leaf of point `p`.
    pub fn light_depth_of_point(&self, p: usize) -> u32 {
        self.light_depth[self.leaf_of[p].0]
    }

    /// CSV rows `point,label,apex_lo,apex_hi`, ordered by point index.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point,label,apex_lo,apex_hi\n");
        for p in 0..self.point_count() {
            let iv = self.apex_interval(p);
            out.push_str(&format!("{p},{},{},{}\n", self.label[p], iv.lo, iv.hi));
        }
        out
    }
}
