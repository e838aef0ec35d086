//! The heavy path WSPD spanner and the centralized `BuildPath` reference.

use std::collections::HashMap;

use serde::Serialize;

use crate::decomposition::HeavyPathLabelling;
use crate::error::{Error, Result};
use crate::metric::Space;
use crate::wspd::{PairLocator, Wspd};

/// Edge `{u, v}` generated by WSPD pair `pair = {a, b}` with `u = r(a)` and
/// `v = r(b)`. Edge `i` always comes from pair `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpannerEdge {
    pub u: usize,
    pub v: usize,
    pub pair: usize,
    pub length: f64,
}

impl SpannerEdge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpannerGraph {
    n: usize,
    edges: Vec<SpannerEdge>,
    adjacency: Vec<Vec<usize>>,
}

impl SpannerGraph {
    /// One edge per pair, between the heavy-path representatives.
    pub fn build(wspd: &Wspd, hp: &HeavyPathLabelling, space: &Space) -> Result<Self> {
        let n = hp.point_count();
        let mut edges = Vec::with_capacity(wspd.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut seen: HashMap<(usize, usize), usize> = HashMap::with_capacity(wspd.len());
        for (i, pair) in wspd.pairs().iter().enumerate() {
            let u = hp.rep_point(pair.a);
            let v = hp.rep_point(pair.b);
            if u == v {
                return Err(Error::SelfLoop { pair: i, point: u });
            }
            if let Some(&first) = seen.get(&(u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge {
                    first,
                    second: i,
                    u,
                    v,
                });
            }
            seen.insert((u.min(v), u.max(v)), i);
            adjacency[u].push(i);
            adjacency[v].push(i);
            edges.push(SpannerEdge {
                u,
                v,
                pair: i,
                length: space.dist(u, v),
            });
        }
        Ok(Self {
            n,
            edges,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[SpannerEdge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &SpannerEdge {
        &self.edges[i]
    }

    /// Edge indices incident to point `u`.
    pub fn incident(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[u].iter().map(move |&e| self.edges[e].other(u))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).any(|w| w == v)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if !std::mem::replace(&mut seen[w], true) {
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Graphviz rendering; vertices are named by leaf label.
    pub fn to_dot(&self, hp: &HeavyPathLabelling, space: &Space) -> String {
        let mut out = String::from("graph spanner {\n");
        if let Some(points) = space.points() {
            for p in 0..self.n {
                let c = points.coords(p);
                let (x, y) = (c[0], c.get(1).copied().unwrap_or(0.0));
                out.push_str(&format!(
                    "  {} [pos=\"{},{}!\"];\n",
                    hp.label(p),
                    crate::io::fmt12(x),
                    crate::io::fmt12(y)
                ));
            }
        }
        for e in &self.edges {
            out.push_str(&format!("  {} -- {};\n", hp.label(e.u), hp.label(e.v)));
        }
        out.push_str("}\n");
        out
    }
}

/// An edge on a `BuildPath` path together with its recursion depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathEdge {
    pub edge: usize,
    pub depth: usize,
}

/// A vertex sequence from `p` to `q`; empty edge list when `p = q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpannerPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<PathEdge>,
}

impl SpannerPath {
    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    pub fn length(&self, graph: &SpannerGraph) -> f64 {
        self.edges.iter().map(|e| graph.edge(e.edge).length).sum()
    }
}

/// `BuildPath(p, q)`: the separating pair `{a, b}` with `p ∈ S(a)` gives
/// `BuildPath(p, r(a))`, the edge `r(a) r(b)`, then `BuildPath(r(b), q)`.
pub fn build_path(
    graph: &SpannerGraph,
    wspd: &Wspd,
    locator: &PairLocator,
    hp: &HeavyPathLabelling,
    p: usize,
    q: usize,
) -> Result<SpannerPath> {
    let mut path = SpannerPath {
        vertices: vec![p],
        edges: Vec::new(),
    };
    extend_path(graph, wspd, locator, hp, p, q, 0, &mut path)?;
    Ok(path)
}

#[allow(clippy::too_many_arguments)]
fn extend_path(
    graph: &SpannerGraph,
    wspd: &Wspd,
    locator: &PairLocator,
    hp: &HeavyPathLabelling,
    p: usize,
    q: usize,
    depth: usize,
    path: &mut SpannerPath,
) -> Result<()> {
    if p == q {
        return Ok(());
    }
    let (pair, side_p, side_q) = locator.find(wspd, hp, p, q)?;
    let ra = hp.rep_point(side_p);
    let rb = hp.rep_point(side_q);
    extend_path(graph, wspd, locator, hp, p, ra, depth + 1, path)?;
    debug_assert_eq!(
        (graph.edge(pair).u.min(graph.edge(pair).v), graph.edge(pair).u.max(graph.edge(pair).v)),
        (ra.min(rb), ra.max(rb))
    );
    path.edges.push(PathEdge { edge: pair, depth });
    path.vertices.push(rb);
    extend_path(graph, wspd, locator, hp, rb, q, depth + 1, path)
}
