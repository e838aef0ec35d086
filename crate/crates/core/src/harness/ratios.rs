//! Per-pair measurement of spanner paths, shortest paths and routes.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::Label;
use crate::error::Result;
use crate::harness::oracle::{dijkstra_all_pairs, dijkstra_from, ShortestPaths};
use crate::harness::random::rng;
use crate::io::fmt12;
use crate::network::Network;
use crate::routing::{route_step, RoutingTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasureOptions {
    /// Every ordered pair up to this many points, sampling above.
    pub exhaustive_limit: usize,
    /// Sampled pairs per point.
    pub samples_per_point: usize,
    pub seed: u64,
    pub shortest_paths: bool,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            exhaustive_limit: 512,
            samples_per_point: 10,
            seed: 0,
            shortest_paths: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub p: usize,
    pub q: usize,
    pub distance: f64,
    pub spanner_len: f64,
    pub shortest_len: Option<f64>,
    pub routed_len: f64,
    pub spanner_hops: usize,
    pub routed_hops: usize,
    pub ascending_len: f64,
    /// Ascending hops come first, then only descending ones.
    pub phases_ok: bool,
    /// The descending part equals `BuildPath(r(a), q)`.
    pub suffix_ok: bool,
    /// Largest `|e| / (s^-k · d)` over `BuildPath` edges at depth `k ≥ 1`.
    pub decay: f64,
    /// The depth-0 edge over `d`.
    pub top_edge: f64,
}

impl PairRecord {
    pub fn spanning_ratio(&self) -> f64 {
        self.spanner_len / self.distance
    }

    pub fn routing_ratio(&self) -> f64 {
        self.routed_len / self.distance
    }

    pub fn abs_error(&self) -> f64 {
        (self.routed_len - self.spanner_len) / self.distance
    }

    pub fn rel_error(&self) -> f64 {
        self.routed_len / self.spanner_len - 1.0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RatioSummary {
    pub pairs: usize,
    pub max_spanning: f64,
    pub max_shortest: Option<f64>,
    pub max_routing: f64,
    pub max_ascending: f64,
    pub max_spanner_hops: usize,
    pub max_routed_hops: usize,
    pub mean_routed_hops: f64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub max_decay: f64,
    pub max_top_edge: f64,
    pub phase_violations: usize,
    pub suffix_violations: usize,
    /// Pairs where `routed < shortest` or `shortest < d` beyond rounding.
    pub oracle_violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub n: usize,
    pub s: f64,
    pub tau: Option<f64>,
    pub seed: u64,
    pub exhaustive: bool,
    pub summary: RatioSummary,
    #[serde(skip)]
    pub records: Vec<PairRecord>,
}

impl RatioReport {
    /// Per-pair CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "p,q,distance,spanner_len,shortest_len,routed_len,spanner_hops,routed_hops,ascending_len\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.p,
                r.q,
                fmt12(r.distance),
                fmt12(r.spanner_len),
                r.shortest_len.map(fmt12).unwrap_or_default(),
                fmt12(r.routed_len),
                r.spanner_hops,
                r.routed_hops,
                fmt12(r.ascending_len)
            ));
        }
        out
    }
}

const TOL: f64 = 1e-9;

/// Ordered pairs to measure: all of them, or `samples_per_point · n` drawn
/// without replacement from a seeded generator.
pub fn select_pairs(n: usize, opts: &MeasureOptions) -> (Vec<(usize, usize)>, bool) {
    let total = n * n.saturating_sub(1);
    if n <= opts.exhaustive_limit {
        let all = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .collect();
        return (all, true);
    }
    let k = (opts.samples_per_point * n).min(total);
    let mut idx = sample(&mut rng(opts.seed), total, k).into_vec();
    idx.sort_unstable();
    let pairs = idx
        .into_iter()
        .map(|i| {
            let (p, r) = (i / (n - 1), i % (n - 1));
            (p, if r >= p { r + 1 } else { r })
        })
        .collect();
    (pairs, false)
}

fn measure_pair(net: &Network, sp: Option<&ShortestPaths>, p: usize, q: usize) -> Result<PairRecord> {
    let s = net.separation();
    let d = net.space.dist(p, q);
    let path = net.build_path(p, q)?;
    let route = net.route_points(p, q)?;
    let (routed_len, ascending_len) = route.lengths(|x, y| net.label_distance(x, y));

    let (_, side_p, _) = net.locator.find(&net.wspd, &net.labelling, p, q)?;
    let ra = net.labelling.rep_point(side_p);
    let tail: Vec<Label> = net
        .build_path(ra, q)?
        .vertices
        .iter()
        .map(|&v| net.label(v))
        .collect();
    let suffix_ok = route.labels[route.ascending_hops()..] == tail[..];

    let mut decay = 0.0f64;
    let mut top_edge = 0.0f64;
    for e in &path.edges {
        let len = net.spanner.edge(e.edge).length;
        if e.depth == 0 {
            top_edge = top_edge.max(len / d);
        } else {
            decay = decay.max(len * s.powi(e.depth as i32) / d);
        }
    }
    Ok(PairRecord {
        p,
        q,
        distance: d,
        spanner_len: path.length(&net.spanner),
        shortest_len: sp.map(|t| t.get(p, q)),
        routed_len,
        spanner_hops: path.hops(),
        routed_hops: route.hops(),
        ascending_len,
        phases_ok: route.phases_ordered(),
        suffix_ok,
        decay,
        top_edge,
    })
}

pub fn summarize(records: &[PairRecord]) -> RatioSummary {
    let mut s = RatioSummary {
        pairs: records.len(),
        ..Default::default()
    };
    let mut hop_sum = 0usize;
    for r in records {
        s.max_spanning = s.max_spanning.max(r.spanning_ratio());
        s.max_routing = s.max_routing.max(r.routing_ratio());
        s.max_ascending = s.max_ascending.max(r.ascending_len / r.distance);
        s.max_spanner_hops = s.max_spanner_hops.max(r.spanner_hops);
        s.max_routed_hops = s.max_routed_hops.max(r.routed_hops);
        s.max_abs_error = s.max_abs_error.max(r.abs_error());
        s.max_rel_error = s.max_rel_error.max(r.rel_error());
        s.max_decay = s.max_decay.max(r.decay);
        s.max_top_edge = s.max_top_edge.max(r.top_edge);
        hop_sum += r.routed_hops;
        s.phase_violations += usize::from(!r.phases_ok);
        s.suffix_violations += usize::from(!r.suffix_ok);
        if let Some(sh) = r.shortest_len {
            let ratio = sh / r.distance;
            s.max_shortest = Some(s.max_shortest.map_or(ratio, |m: f64| m.max(ratio)));
            let scale = r.routed_len.max(1.0);
            if r.routed_len < sh - TOL * scale || sh < r.distance - TOL * scale || sh > r.spanner_len + TOL * scale {
                s.oracle_violations += 1;
            }
        }
    }
    if !records.is_empty() {
        s.mean_routed_hops = hop_sum as f64 / records.len() as f64;
    }
    s
}

/// Measures every selected ordered pair, in parallel.
pub fn measure_ratios(net: &Network, opts: &MeasureOptions) -> Result<RatioReport> {
    let n = net.len();
    let (pairs, exhaustive) = select_pairs(n, opts);
    let sp = if !opts.shortest_paths || n < 2 {
        None
    } else if exhaustive {
        Some(dijkstra_all_pairs(&net.spanner)?)
    } else {
        let mut sources: Vec<usize> = pairs.iter().map(|&(p, _)| p).collect();
        sources.dedup();
        Some(dijkstra_from(&net.spanner, &sources)?)
    };
    let records = pairs
        .par_iter()
        .map(|&(p, q)| measure_pair(net, sp.as_ref(), p, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioReport {
        n,
        s: net.separation(),
        tau: net.tau(),
        seed: opts.seed,
        exhaustive,
        summary: summarize(&records),
        records,
    })
}

/// Routes every ordered pair and returns `(max hops, mean hops)`.
pub fn route_all_pairs(net: &Network) -> Result<(usize, f64)> {
    let n = net.len() as Label;
    let hops = (1..=n)
        .into_par_iter()
        .map(|p| {
            let mut max = 0;
            let mut sum = 0;
            for q in 1..=n {
                let h = crate::routing::route(&net.tables, p, q)?.hops();
                max = max.max(h);
                sum += h;
            }
            Ok((max, sum))
        })
        .collect::<Result<Vec<(usize, usize)>>>()?;
    let max = hops.iter().map(|h| h.0).max().unwrap_or(0);
    let pairs = (n as usize) * (n as usize).saturating_sub(1);
    let mean = if pairs == 0 {
        0.0
    } else {
        hops.iter().map(|h| h.1).sum::<usize>() as f64 / pairs as f64
    };
    Ok((max, mean))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub checked: usize,
    /// `(at, dest, candidates)` with more than one descending candidate.
    pub ambiguous_descent: Vec<(Label, Label, usize)>,
    /// `(at, dest)` whose ascending candidates do not form a chain.
    pub ambiguous_ascent: Vec<(Label, Label)>,
    pub no_candidate: Vec<(Label, Label)>,
    /// `(at, dest)` where two calls disagreed.
    pub impure: Vec<(Label, Label)>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.ambiguous_descent.is_empty()
            && self.ambiguous_ascent.is_empty()
            && self.no_candidate.is_empty()
            && self.impure.is_empty()
    }
}

/// Checks every (vertex, destination) decision directly from the tables,
/// independently of [`route_step`]'s own checks, then calls `route_step`
/// twice to confirm it is a function of its arguments.
pub fn check_step_uniqueness(tables: &RoutingTables) -> UniquenessReport {
    let n = tables.len() as Label;
    let rows: Vec<UniquenessReport> = (1..=n)
        .into_par_iter()
        .map(|u| {
            let mut rep = UniquenessReport::default();
            let t = tables.get(u).expect("label in range");
            for q in (1..=n).filter(|&q| q != u) {
                rep.checked += 1;
                let down = t.entries.iter().filter(|e| e.descend_interval().contains(q)).count();
                if down > 1 {
                    rep.ambiguous_descent.push((u, q, down));
                } else if down == 0 {
                    let mut up: Vec<_> = t
                        .entries
                        .iter()
                        .map(|e| e.apex_interval())
                        .filter(|iv| iv.contains(u))
                        .collect();
                    if up.is_empty() {
                        rep.no_candidate.push((u, q));
                    }
                    up.sort_by_key(|iv| iv.len());
                    let chain = up
                        .windows(2)
                        .all(|w| w[0] != w[1] && w[1].contains_interval(&w[0]));
                    if !chain {
                        rep.ambiguous_ascent.push((u, q));
                    }
                }
                let a = route_step(u, q, t).ok();
                if a != route_step(u, q, t).ok() {
                    rep.impure.push((u, q));
                }
            }
            rep
        })
        .collect();
    let mut out = UniquenessReport::default();
    for r in rows {
        out.checked += r.checked;
        out.ambiguous_descent.extend(r.ambiguous_descent);
        out.ambiguous_ascent.extend(r.ambiguous_ascent);
        out.no_candidate.extend(r.no_candidate);
        out.impure.extend(r.impure);
    }
    out
}
