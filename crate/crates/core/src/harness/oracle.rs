//! Brute-force oracles: shortest paths and WSPD coverage.

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::HeavyPathLabelling;
use crate::error::{Error, Result};
use crate::metric::{set_diameter, set_distance, Space};
use crate::spanner::SpannerGraph;
use crate::tree::NodeId;
use crate::wspd::Wspd;

/// Exact graph distances, row-major by point index.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    n: usize,
    data: Vec<f64>,
}

impl ShortestPaths {
    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.data[p * self.n + q]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

fn to_petgraph(g: &SpannerGraph) -> UnGraph<(), f64> {
    let mut pg = UnGraph::with_capacity(g.vertex_count(), g.edge_count());
    for _ in 0..g.vertex_count() {
        pg.add_node(());
    }
    for e in g.edges() {
        pg.add_edge(NodeIndex::new(e.u), NodeIndex::new(e.v), e.length);
    }
    pg
}

fn single_source(pg: &UnGraph<(), f64>, src: usize) -> Result<Vec<f64>> {
    let n = pg.node_count();
    let found = dijkstra(pg, NodeIndex::new(src), None, |e| *e.weight());
    let mut row = vec![f64::INFINITY; n];
    for (v, d) in found {
        row[v.index()] = d;
    }
    match row.iter().position(|d| d.is_infinite()) {
        Some(bad) => Err(Error::Disconnected {
            from: src,
            unreachable: bad,
        }),
        None => Ok(row),
    }
}

/// Dijkstra from every vertex.
pub fn dijkstra_all_pairs(g: &SpannerGraph) -> Result<ShortestPaths> {
    let pg = to_petgraph(g);
    let n = g.vertex_count();
    let rows = (0..n)
        .into_par_iter()
        .map(|src| single_source(&pg, src))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShortestPaths {
        n,
        data: rows.concat(),
    })
}

/// Dijkstra from selected sources only; other rows stay infinite.
pub fn dijkstra_from(g: &SpannerGraph, sources: &[usize]) -> Result<ShortestPaths> {
    let pg = to_petgraph(g);
    let n = g.vertex_count();
    let rows = sources
        .par_iter()
        .map(|&src| single_source(&pg, src).map(|r| (src, r)))
        .collect::<Result<Vec<_>>>()?;
    let mut data = vec![f64::INFINITY; n * n];
    for (src, row) in rows {
        data[src * n..(src + 1) * n].copy_from_slice(&row);
    }
    Ok(ShortestPaths { n, data })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageFinding {
    pub p: usize,
    pub q: usize,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationFinding {
    pub pair: usize,
    pub gap: f64,
    pub required: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExactnessReport {
    pub pairs: usize,
    pub point_pairs: usize,
    pub under_covered: Vec<CoverageFinding>,
    pub over_covered: Vec<CoverageFinding>,
    pub separation: Vec<SeparationFinding>,
    /// Smallest `(gap - s·maxdiam) / (s·maxdiam)` over pairs with a
    /// nonzero diameter.
    pub min_slack: f64,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.under_covered.is_empty() && self.over_covered.is_empty() && self.separation.is_empty()
    }
}

/// Relative slack tolerated before a pair counts as not separated.
pub const SEPARATION_TOLERANCE: f64 = 1e-9;

/// Enumerates every point pair of every WSPD pair, and measures each pair's
/// true separation from its points.
pub fn wspd_exactness_check(wspd: &Wspd, hp: &HeavyPathLabelling, space: &Space) -> ExactnessReport {
    let n = hp.point_count();
    let s = wspd.separation();
    let mut count = vec![0u32; n * n];
    let mut report = ExactnessReport {
        pairs: wspd.len(),
        point_pairs: n * n.saturating_sub(1) / 2,
        min_slack: f64::INFINITY,
        ..Default::default()
    };
    let mut diam: Vec<Option<f64>> = Vec::new();
    let mut diam_of = |a: NodeId, pts: &[usize]| -> f64 {
        if diam.len() <= a.0 {
            diam.resize(a.0 + 1, None);
        }
        *diam[a.0].get_or_insert_with(|| set_diameter(space, pts).expect("nonempty"))
    };
    for (i, pair) in wspd.pairs().iter().enumerate() {
        let (pa, pb) = (hp.points_in(pair.a), hp.points_in(pair.b));
        for &p in pa {
            for &q in pb {
                let (x, y) = (p.min(q), p.max(q));
                count[x * n + y] += 1;
            }
        }
        let gap = set_distance(space, pa, pb).expect("nonempty");
        let required = s * diam_of(pair.a, pa).max(diam_of(pair.b, pb));
        if required > 0.0 {
            let slack = (gap - required) / required;
            report.min_slack = report.min_slack.min(slack);
            if slack < -SEPARATION_TOLERANCE {
                report.separation.push(SeparationFinding {
                    pair: i,
                    gap,
                    required,
                    slack,
                });
            }
        }
    }
    for p in 0..n {
        for q in p + 1..n {
            let c = count[p * n + q];
            let f = CoverageFinding { p, q, count: c };
            match c {
                0 => report.under_covered.push(f),
                1 => {}
                _ => report.over_covered.push(f),
            }
        }
    }
    report
}
