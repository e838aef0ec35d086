//! Every invariant suite over one built network, collected into a single
//! machine-readable report.

use std::collections::HashMap;

use serde::Serialize;

use crate::decomposition::Label;
use crate::error::Error;
use crate::harness::bounds::Bounds;
use crate::harness::oracle::wspd_exactness_check;
use crate::harness::ratios::{check_step_uniqueness, measure_ratios, MeasureOptions, RatioSummary};
use crate::io::SpannerFile;
use crate::metric::euclid;
use crate::network::{Network, Tree};
use crate::nettree::NetTree;
use crate::quadtree::Quadtree;
use crate::routing::{ceil_lg, route, PackedTable, RoutingTables};
use crate::tree::{Hierarchy, SubtreePoints};

const MAX_LISTED: usize = 20;
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    /// The first few violations, one line each.
    pub findings: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: true,
            checked: 0,
            violations: 0,
            findings: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, finding: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(finding());
        }
    }

    fn fail(&mut self, finding: String) {
        self.passed = false;
        self.violations += 1;
        if self.findings.len() < MAX_LISTED {
            self.findings.push(finding);
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub n: usize,
    pub s: f64,
    pub tau: Option<f64>,
    pub metric: String,
    pub seed: Option<u64>,
    pub bounds: Option<Bounds>,
    /// Observed maxima, including the absolute and relative routing errors.
    /// The errors are reported, not gated on.
    pub observed: Option<RatioSummary>,
    pub suites: Vec<SuiteResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub measure: MeasureOptions,
    /// Exhaustive next-hop uniqueness up to this many points.
    pub uniqueness_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            measure: MeasureOptions::default(),
            uniqueness_limit: 512,
        }
    }
}

fn quadtree_suite(t: &Quadtree, net: &Network) -> SuiteResult {
    let mut r = SuiteResult::new("quadtree");
    let points = net.space.points().expect("quadtrees are Euclidean");
    let sub = SubtreePoints::new(t);
    for a in t.preorder() {
        let node = t.node(a);
        if !t.is_leaf(a) {
            r.check(node.children.len() >= 2, || format!("node {} has one child", a.0));
        }
        r.check(node.cell_large.contains_cube(&node.cell_small), || {
            format!("node {}: small cell outside large cell", a.0)
        });
        for &p in sub.points(a) {
            r.check(node.cell_small.contains(points.coords(p)), || {
                format!("node {}: point {p} outside its cell", a.0)
            });
        }
        if let Some(p) = t.parent(a) {
            let (la, lp) = (t.diag(a), t.diag(p));
            r.check(la <= lp / 2.0 * (1.0 + 1e-12), || {
                format!("node {}: l = {la} exceeds half of parent's {lp}", a.0)
            });
            r.check(t.node(p).cell_small.contains_cube(&node.cell_large), || {
                format!("node {}: large cell outside parent's small cell", a.0)
            });
        }
    }
    r
}

fn net_tree_suite(t: &NetTree, net: &Network) -> SuiteResult {
    let mut r = SuiteResult::new("net-tree");
    for (name, rep) in [
        ("covering", t.verify_covering(&net.space)),
        ("packing", t.verify_packing(&net.space)),
    ] {
        r.checked += 1;
        for v in &rep.violations {
            r.fail(format!("{name}: {v}"));
        }
    }
    let sub = SubtreePoints::new(t);
    for a in t.preorder() {
        if let Some(p) = t.parent(a) {
            r.check(t.level(a) < t.level(p), || format!("node {}: level not below parent's", a.0));
        }
        let diam = crate::metric::set_diameter(&net.space, sub.points(a)).unwrap_or(0.0);
        for k in 0..=t.depth(a) {
            let bound = t.subtree_diameter_bound(a, k).unwrap_or(f64::INFINITY);
            r.check(diam <= bound * (1.0 + 1e-12), || {
                format!("node {}, k = {k}: diameter {diam} above {bound}", a.0)
            });
        }
    }
    r
}

fn labelling_suite(net: &Network) -> SuiteResult {
    let mut r = SuiteResult::new("labelling");
    let hp = &net.labelling;
    let n = net.len();
    let lg = (n as f64).log2();
    for a in net.tree.preorder() {
        let iv = hp.interval(a);
        r.check(iv.len() == hp.size(a), || format!("node {}: interval not contiguous", a.0));
        r.check(hp.label(hp.rep_point(a)) == iv.lo, || {
            format!("node {}: representative label is not the interval minimum", a.0)
        });
        r.check(
            hp.points_in(a).iter().all(|&p| iv.contains(hp.label(p))),
            || format!("node {}: a point lies outside the interval", a.0),
        );
    }
    for p in 0..n {
        let ld = hp.light_depth_of_point(p);
        r.check(f64::from(ld) <= lg + 1e-12, || {
            format!("point {p}: light depth {ld} above lg n = {lg}")
        });
    }
    r
}

fn wspd_suite(net: &Network) -> SuiteResult {
    let mut r = SuiteResult::new("wspd");
    let rep = wspd_exactness_check(&net.wspd, &net.labelling, &net.space);
    r.checked = rep.point_pairs + rep.pairs;
    for f in &rep.under_covered {
        r.fail(format!("points {} and {} separated by no pair", f.p, f.q));
    }
    for f in &rep.over_covered {
        r.fail(format!("points {} and {} separated by {} pairs", f.p, f.q, f.count));
    }
    for f in &rep.separation {
        r.fail(format!(
            "pair {}: gap {} below required {} (slack {})",
            f.pair, f.gap, f.required, f.slack
        ));
    }
    r
}

fn spanner_suite(net: &Network, obs: &RatioSummary, b: &Bounds) -> SuiteResult {
    let mut r = SuiteResult::new("spanner");
    let n = net.len();
    r.check(net.spanner.edge_count() == net.wspd.len(), || {
        "edge count differs from pair count".to_string()
    });
    r.check(net.spanner.is_connected(), || "spanner is disconnected".to_string());
    r.check(obs.max_spanning <= b.spanning + TOL, || {
        format!("spanning ratio {} above {}", obs.max_spanning, b.spanning)
    });
    if let (Some(sh), Some(bound)) = (obs.max_shortest, b.shortest) {
        r.check(sh <= bound + TOL, || format!("shortest-path ratio {sh} above {bound}"));
    }
    let hop_bound = 2.0 * (n.max(1) as f64).log2() + 1.0;
    r.check(obs.max_spanner_hops as f64 <= hop_bound + 1e-12, || {
        format!("spanner path with {} edges above {hop_bound}", obs.max_spanner_hops)
    });
    r.check(obs.max_decay <= 1.0 + TOL, || {
        format!("an edge at depth k exceeds s^-k d(p,q) by factor {}", obs.max_decay)
    });
    r.check(obs.max_top_edge <= 1.0 + 2.0 / b.s + TOL, || {
        format!("top-level edge {} above 1 + 2/s", obs.max_top_edge)
    });
    r.check(obs.oracle_violations == 0, || {
        format!("{} pairs violate d <= shortest <= spanner <= routed", obs.oracle_violations)
    });
    r
}

fn routing_suite(net: &Network, obs: &RatioSummary, b: &Bounds, opts: &VerifyOptions) -> SuiteResult {
    let mut r = SuiteResult::new("routing");
    let n = net.len();
    r.check(obs.max_routing <= b.routing + TOL, || {
        format!("routing ratio {} above {}", obs.max_routing, b.routing)
    });
    r.check(obs.max_ascending <= b.ascending + TOL, || {
        format!("ascending stage {} d(p,q) above {}", obs.max_ascending, b.ascending)
    });
    let hop_bound = 2.0 * (n.max(1) as f64).log2() + 1.0;
    r.check(obs.max_routed_hops as f64 <= hop_bound + 1e-12, || {
        format!("route with {} hops above {hop_bound}", obs.max_routed_hops)
    });
    r.check(obs.phase_violations == 0, || {
        format!("{} routes ascend after descending", obs.phase_violations)
    });
    r.check(obs.suffix_violations == 0, || {
        format!("{} routes leave the spanner path while descending", obs.suffix_violations)
    });
    if n <= opts.uniqueness_limit {
        uniqueness_findings(&mut r, &net.tables);
    }
    r
}

fn uniqueness_findings(r: &mut SuiteResult, tables: &RoutingTables) {
    let u = check_step_uniqueness(tables);
    r.checked += u.checked;
    for (at, dest, c) in &u.ambiguous_descent {
        r.fail(format!("descending uniqueness: {c} candidates at {at} toward {dest}"));
    }
    for (at, dest) in &u.ambiguous_ascent {
        r.fail(format!("ascending uniqueness: candidates at {at} toward {dest} are not nested"));
    }
    for (at, dest) in &u.no_candidate {
        r.fail(format!("no candidate at {at} toward {dest}"));
    }
    for (at, dest) in &u.impure {
        r.fail(format!("route_step not repeatable at {at} toward {dest}"));
    }
}

fn table_suite(tables: &RoutingTables) -> SuiteResult {
    let mut r = SuiteResult::new("tables");
    let n = tables.len();
    let w = ceil_lg(n) as usize;
    for t in tables.tables() {
        let packed = PackedTable::pack(t, n);
        let want = (3 * t.degree() + 1) * w;
        r.check(packed.bit_len() == want, || {
            format!("table {}: {} bits, expected {want}", t.x_u, packed.bit_len())
        });
        r.check(&packed.unpack() == t, || format!("table {}: packing does not round-trip", t.x_u));
        for e in &t.entries {
            r.check(e.x_v <= e.y_b && e.y_b <= e.y_h, || {
                format!("table {}: entry {} has x_v <= y_b <= y_h broken", t.x_u, e.x_v)
            });
        }
    }
    r
}

/// Runs every suite on a network built in this process.
pub fn verify_network(net: &Network, seed: Option<u64>, opts: &VerifyOptions) -> VerifyReport {
    let s = net.separation();
    let bounds = match net.tau() {
        Some(tau) => Bounds::doubling(s, tau),
        None => Bounds::euclidean(s),
    };
    let mut suites = vec![match &net.tree {
        Tree::Quad(t) => quadtree_suite(t, net),
        Tree::Net(t) => net_tree_suite(t, net),
    }];
    suites.push(labelling_suite(net));
    suites.push(wspd_suite(net));
    let observed = match measure_ratios(net, &opts.measure) {
        Ok(rep) => {
            let obs = rep.summary;
            suites.push(spanner_suite(net, &obs, &bounds));
            suites.push(routing_suite(net, &obs, &bounds, opts));
            Some(obs)
        }
        Err(e) => {
            let mut r = SuiteResult::new("routing");
            r.fail(failure_name(&e));
            suites.push(r);
            None
        }
    };
    suites.push(table_suite(&net.tables));
    VerifyReport {
        passed: suites.iter().all(|s| s.passed),
        n: net.len(),
        s,
        tau: net.tau(),
        metric: net.space.descriptor(),
        seed,
        bounds: Some(bounds),
        observed,
        suites,
    }
}

fn failure_name(e: &Error) -> String {
    match e {
        Error::AmbiguousDescent { .. } => format!("descending uniqueness: {e}"),
        Error::AmbiguousAscent { .. } => format!("ascending uniqueness: {e}"),
        Error::HopBudget { .. } => format!("hop budget: {e}"),
        Error::NoCandidate { .. } => format!("no candidate: {e}"),
        _ => e.to_string(),
    }
}

/// Checks a spanner file against a (possibly edited) table file: the
/// tables must match the ones the file implies, every next-hop decision
/// must be unambiguous, and every ordered pair must be delivered within
/// budget along spanner edges.
pub fn verify_files(file: &SpannerFile, tables: &RoutingTables) -> VerifyReport {
    let n = file.n;
    let mut consistency = SuiteResult::new("table-consistency");
    match file.tables() {
        Ok(expected) => {
            consistency.check(expected.len() == tables.len(), || {
                format!("{} tables, expected {}", tables.len(), expected.len())
            });
            for (want, got) in expected.tables().iter().zip(tables.tables()) {
                consistency.check(want == got, || format!("table {} differs from the spanner file", want.x_u));
            }
        }
        Err(e) => consistency.fail(e.to_string()),
    }

    let mut routing = SuiteResult::new("routing");
    if tables.len() != n {
        routing.fail(format!("{} tables for {n} vertices", tables.len()));
    } else {
        uniqueness_findings(&mut routing, tables);
        let lengths: HashMap<(Label, Label), f64> = file
            .edges
            .iter()
            .flat_map(|e| [((e.u, e.v), e.length), ((e.v, e.u), e.length)])
            .collect();
        let by_label = file.points_by_label();
        let bound = crate::harness::bounds::euclidean_routing(file.s);
        let budget = 2.0 * (n.max(1) as f64).log2() + 1.0;
        for p in 1..=n as Label {
            for q in (1..=n as Label).filter(|&q| q != p) {
                routing.checked += 1;
                let rt = match route(tables, p, q) {
                    Ok(rt) => rt,
                    Err(e) => {
                        routing.fail(failure_name(&e));
                        continue;
                    }
                };
                if rt.hops() as f64 > budget + 1e-12 {
                    routing.fail(format!("hop budget: {} hops from {p} to {q}", rt.hops()));
                }
                let mut len = 0.0;
                for w in rt.labels.windows(2) {
                    match lengths.get(&(w[0], w[1])) {
                        Some(l) => len += l,
                        None => routing.fail(format!("hop {} -> {} is not a spanner edge", w[0], w[1])),
                    }
                }
                if let (Some(pts), None) = (&file.points, file.tau) {
                    let d = euclid(&pts[by_label[p as usize - 1]], &pts[by_label[q as usize - 1]]);
                    if len > bound * d * (1.0 + 1e-9) + 1e-9 {
                        routing.fail(format!("routing ratio {} from {p} to {q} above {bound}", len / d));
                    }
                }
            }
        }
    }
    let suites = vec![consistency, routing, table_suite(tables)];
    VerifyReport {
        passed: suites.iter().all(|s| s.passed),
        n,
        s: file.s,
        tau: file.tau,
        metric: file.metric.clone(),
        seed: file.seed,
        bounds: None,
        observed: None,
        suites,
    }
}
