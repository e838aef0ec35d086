//! End-to-end assembly: tree, labelling, WSPD, spanner and routing tables.

use crate::decomposition::{HeavyPathLabelling, Label, TieBreak};
use crate::error::{Error, Result};
use crate::metric::{Hypercube, PointSet, Space};
use crate::nettree::{NetTree, NetTreeParams};
use crate::quadtree::Quadtree;
use crate::routing::{make_routing_tables, route, Route, RoutingTables};
use crate::spanner::{build_path, SpannerGraph, SpannerPath};
use crate::tree::{Hierarchy, NodeId};
use crate::wspd::{PairLocator, SeparationRule, Wspd};

/// Either hierarchy the pipeline can run on.
#[derive(Debug, Clone)]
pub enum Tree {
    Quad(Quadtree),
    Net(NetTree),
}

impl Tree {
    pub fn as_quadtree(&self) -> Option<&Quadtree> {
        match self {
            Tree::Quad(t) => Some(t),
            Tree::Net(_) => None,
        }
    }

    pub fn as_net_tree(&self) -> Option<&NetTree> {
        match self {
            Tree::Net(t) => Some(t),
            Tree::Quad(_) => None,
        }
    }

    fn inner(&self) -> &dyn Hierarchy {
        match self {
            Tree::Quad(t) => t,
            Tree::Net(t) => t,
        }
    }
}

impl Hierarchy for Tree {
    fn root(&self) -> NodeId {
        self.inner().root()
    }

    fn node_count(&self) -> usize {
        self.inner().node_count()
    }

    fn parent(&self, a: NodeId) -> Option<NodeId> {
        self.inner().parent(a)
    }

    fn children(&self, a: NodeId) -> &[NodeId] {
        match self {
            Tree::Quad(t) => t.children(a),
            Tree::Net(t) => t.children(a),
        }
    }

    fn leaf_point(&self, a: NodeId) -> Option<usize> {
        self.inner().leaf_point(a)
    }

    fn leaf_of(&self, p: usize) -> NodeId {
        self.inner().leaf_of(p)
    }

    fn point_count(&self) -> usize {
        self.inner().point_count()
    }
}

/// Everything needed to route on one input.
#[derive(Debug, Clone)]
pub struct Network {
    pub space: Space,
    pub tree: Tree,
    pub labelling: HeavyPathLabelling,
    pub wspd: Wspd,
    pub locator: PairLocator,
    pub spanner: SpannerGraph,
    pub tables: RoutingTables,
}

impl Network {
    /// Quadtree pipeline over the smallest enclosing cube.
    pub fn euclidean(points: PointSet, s: f64) -> Result<Self> {
        let tree = Quadtree::build(&points)?;
        let labelling = HeavyPathLabelling::new(&tree);
        let wspd = Wspd::build_euclidean(&tree, s)?;
        Self::assemble(Space::euclidean(points), Tree::Quad(tree), labelling, wspd)
    }

    /// Quadtree pipeline with every choice exposed.
    pub fn euclidean_with(
        points: PointSet,
        root_cube: &Hypercube,
        s: f64,
        rule: SeparationRule,
        tie: &TieBreak,
    ) -> Result<Self> {
        let tree = Quadtree::build_in(&points, root_cube)?;
        let space = Space::euclidean(points);
        let labelling = HeavyPathLabelling::with_tie_break(&tree, tie);
        let wspd = Wspd::build_euclidean_with(&tree, &space, s, rule)?;
        Self::assemble(space, Tree::Quad(tree), labelling, wspd)
    }

    /// Net-tree pipeline for an arbitrary (doubling) metric.
    pub fn doubling(space: Space, s: f64, params: NetTreeParams) -> Result<Self> {
        let tree = NetTree::build(&space, params)?;
        let labelling = HeavyPathLabelling::new(&tree);
        let wspd = Wspd::build_doubling(&tree, s, &space)?;
        Self::assemble(space, Tree::Net(tree), labelling, wspd)
    }

    /// Builds the spanner and tables from parts that share one tree.
    pub fn assemble(
        space: Space,
        tree: Tree,
        labelling: HeavyPathLabelling,
        wspd: Wspd,
    ) -> Result<Self> {
        let locator = PairLocator::new(&tree, &wspd);
        let spanner = SpannerGraph::build(&wspd, &labelling, &space)?;
        let tables = make_routing_tables(&spanner, &wspd, &labelling)?;
        Ok(Self {
            space,
            tree,
            labelling,
            wspd,
            locator,
            spanner,
            tables,
        })
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn separation(&self) -> f64 {
        self.wspd.separation()
    }

    pub fn tau(&self) -> Option<f64> {
        self.tree.as_net_tree().map(NetTree::tau)
    }

    pub fn label(&self, p: usize) -> Label {
        self.labelling.label(p)
    }

    pub fn point(&self, label: Label) -> Result<usize> {
        self.labelling.point_of(label).ok_or(Error::UnknownLabel(label))
    }

    pub fn label_distance(&self, x: Label, y: Label) -> f64 {
        let p = self.labelling.point_of(x).expect("known label");
        let q = self.labelling.point_of(y).expect("known label");
        self.space.dist(p, q)
    }

    /// `BuildPath` between two points.
    pub fn build_path(&self, p: usize, q: usize) -> Result<SpannerPath> {
        build_path(&self.spanner, &self.wspd, &self.locator, &self.labelling, p, q)
    }

    /// Routes between two points; the result is in labels.
    pub fn route_points(&self, p: usize, q: usize) -> Result<Route> {
        route(&self.tables, self.label(p), self.label(q))
    }
}
