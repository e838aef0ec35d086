//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::time::Instant;

use hpws_core::harness::bounds::{
    doubling_spanning_le, euclidean_routing, euclidean_spanning, error_bound_table, Bounds,
    DOUBLING_ABS_CAP, DOUBLING_REL_CAP, EUCLIDEAN_ABS_CAP, EUCLIDEAN_REL_CAP,
};
use hpws_core::harness::lower_bound::{
    lower_bound_instance, EXPECTED_PAIRS, EXPECTED_ROUTE, EXPECTED_SPANNER_PATH, SOURCE, TARGET,
};
use hpws_core::harness::random::{euclidean_matrix, manhattan_matrix, uniform_points};
use hpws_core::harness::{
    check_step_uniqueness, measure_ratios, route_all_pairs, wspd_exactness_check, MeasureOptions,
    RatioReport,
};
use hpws_core::io::SpannerFile;
use hpws_core::routing::{ceil_lg, PackedTable};
use hpws_core::{Hierarchy, NetTreeParams, Network, Space};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Instance {
    n: usize,
    d: usize,
    s: f64,
    seed: u64,
    net: Network,
}

const NS: [usize; 3] = [16, 64, 256];
const DIMS: [usize; 3] = [1, 2, 3];
const SS: [f64; 3] = [2.5, 4.0, 8.0];

fn instances() -> Vec<Instance> {
    (0..20)
        .map(|i| {
            let (n, d, s) = (NS[i % 3], DIMS[i / 3 % 3], SS[(i + i / 3) % 3]);
            let seed = 1000 + i as u64;
            let net = Network::euclidean(uniform_points(n, d, seed).unwrap(), s).unwrap();
            Instance { n, d, s, seed, net }
        })
        .collect()
}

fn measure(net: &Network) -> RatioReport {
    measure_ratios(net, &MeasureOptions::default()).unwrap()
}

fn c1_exactness(inst: &[Instance], build_secs: f64) -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut worst = f64::INFINITY;
    for i in inst {
        let r = wspd_exactness_check(&i.net.wspd, &i.net.labelling, &i.net.space);
        worst = worst.min(r.min_slack);
        if !r.passed() {
            bad.push(format!(
                "seed {} (n={}, d={}, s={}): {} under, {} over, {} not separated",
                i.seed,
                i.n,
                i.d,
                i.s,
                r.under_covered.len(),
                r.over_covered.len(),
                r.separation.len()
            ));
        }
    }
    let secs = t.elapsed().as_secs_f64() + build_secs;
    let pass = bad.is_empty() && secs < 60.0;
    outcome(
        pass,
        format!(
            "{} instances, min relative slack {worst:.3e}, {secs:.2}s{}",
            inst.len(),
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    )
}

fn c2_spanning(inst: &[Instance], reports: &[RatioReport]) -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut oracle = 0;
    for (i, r) in inst.iter().zip(reports) {
        let b = euclidean_spanning(i.s);
        pass &= r.summary.max_spanning <= b + 1e-9;
        worst = worst.max(r.summary.max_spanning / b);
        for rec in &r.records {
            let sh = rec.shortest_len.expect("exhaustive");
            if sh > rec.spanner_len + 1e-12 * rec.spanner_len.max(1.0) {
                oracle += 1;
            }
        }
    }
    pass &= oracle == 0;
    outcome(
        pass,
        format!("max observed/bound {worst:.6}, shortest > BuildPath on {oracle} pairs"),
    )
}

fn c3_routing(inst: &[Instance], reports: &[RatioReport]) -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut asc_bad = 0;
    let mut pairs = 0;
    for (i, r) in inst.iter().zip(reports) {
        assert!(r.exhaustive);
        let b = euclidean_routing(i.s);
        pass &= r.summary.max_routing <= b + 1e-9;
        worst = worst.max(r.summary.max_routing / b);
        for rec in &r.records {
            pairs += 1;
            if rec.ascending_len > 2.0 / i.s * rec.distance + 1e-9 {
                asc_bad += 1;
            }
        }
    }
    pass &= asc_bad == 0;
    outcome(
        pass,
        format!("{pairs} routed pairs, max observed/bound {worst:.6}, ascending over 2/s on {asc_bad}"),
    )
}

fn c4_lower_bound() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let lb = lower_bound_instance(3.0, 0.0).unwrap();
    let net = lb.network().unwrap();
    pass &= net.wspd.len() == EXPECTED_PAIRS;
    notes.push(format!("{} pairs", net.wspd.len()));
    let route = net.route_points(SOURCE, TARGET).unwrap();
    let routed: Vec<usize> = route.labels.iter().map(|&l| net.point(l).unwrap()).collect();
    pass &= routed == EXPECTED_ROUTE;
    let path = net.build_path(SOURCE, TARGET).unwrap().vertices;
    pass &= path == EXPECTED_SPANNER_PATH;
    let name = |v: &[usize]| v.iter().map(|p| format!("p{}", p + 1)).collect::<Vec<_>>().join(",");
    notes.push(format!("route {}", name(&routed)));
    notes.push(format!("path {}", name(&path)));
    let (len, _) = route.lengths(|x, y| net.label_distance(x, y));
    let ratio = len / net.space.dist(SOURCE, TARGET);
    pass &= (ratio - lb.predicted_ratio()).abs() <= 1e-12 && (ratio - 7.0 / 3.0).abs() <= 1e-12;
    notes.push(format!("ratio {ratio:.15}"));

    let far = lower_bound_instance(3.0, 0.99 / 32.0).unwrap();
    let net = far.network().unwrap();
    let route = net.route_points(SOURCE, TARGET).unwrap();
    let (len, _) = route.lengths(|x, y| net.label_distance(x, y));
    let ratio = len / net.space.dist(SOURCE, TARGET);
    pass &= ratio >= 1.0 + 4.0 / 3.0 - 0.05;
    pass &= (ratio - far.predicted_ratio()).abs() <= 1e-12;
    notes.push(format!("eps=0.99a ratio {ratio:.6}"));
    outcome(pass, notes.join(", "))
}

fn c5_hops() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (k, n) in [64usize, 256, 1024].into_iter().enumerate() {
        for s in [2.5, 4.0] {
            let net = Network::euclidean(uniform_points(n, 2, 500 + k as u64).unwrap(), s).unwrap();
            let (max, _) = route_all_pairs(&net).unwrap();
            let bound = 2 * n.trailing_zeros() as usize + 1;
            pass &= max <= bound;
            notes.push(format!("n={n} s={s}: {max}/{bound}"));
        }
    }
    outcome(pass, notes.join(", "))
}

fn c6_tables(nets: &[&Network]) -> Outcome {
    let mut tables = 0;
    let mut bad = 0;
    for net in nets {
        let n = net.len();
        let w = ceil_lg(n) as usize;
        for t in net.tables.tables() {
            tables += 1;
            let p = PackedTable::pack(t, n);
            if p.bit_len() != (3 * net.spanner.degree(net.point(t.x_u).unwrap()) + 1) * w || &p.unpack() != t {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{tables} tables, {bad} with the wrong size"))
}

fn c7_errors(inst: &[Instance], reports: &[RatioReport]) -> Outcome {
    let table = error_bound_table();
    let a = &table.euclidean_abs;
    let r = &table.euclidean_rel;
    let mut pass = (a.grid_max - (3.0 - 2.0 * 2f64.sqrt())).abs() <= 1e-6
        && (r.grid_max - (7.0 - 4.0 * 2f64.sqrt()) / 17.0).abs() <= 1e-6
        && a.agrees(1e-3, 1e-6)
        && r.agrees(1e-3, 1e-6);
    let mut worst_abs = 0.0f64;
    let mut worst_rel = 0.0f64;
    let mut abs_bad = 0;
    let mut rel_bad = 0;
    let mut pairs = 0;
    for (_, rep) in inst.iter().zip(reports) {
        for rec in &rep.records {
            pairs += 1;
            let (da, dr) = (rec.abs_error(), rec.rel_error());
            worst_abs = worst_abs.max(da);
            worst_rel = worst_rel.max(dr);
            abs_bad += usize::from(da > EUCLIDEAN_ABS_CAP);
            rel_bad += usize::from(dr > EUCLIDEAN_REL_CAP);
        }
    }
    pass &= abs_bad == 0 && rel_bad == 0;
    outcome(
        pass,
        format!(
            "grid max D {:.6} at {:.4}, d {:.6} at {:.4}; observed over {pairs} pairs: max D {worst_abs:.4} ({abs_bad} above {EUCLIDEAN_ABS_CAP}), max d {worst_rel:.4} ({rel_bad} above {EUCLIDEAN_REL_CAP})",
            a.grid_max, a.grid_argmax, r.grid_max, r.grid_argmax
        ),
    )
}

fn c8_doubling() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let mut worst = [0.0f64; 5];
    let mut built = 0;
    for n in [32usize, 128] {
        for (kind, m) in [
            ("euclid", euclidean_matrix(n, 2, 77 + n as u64).unwrap()),
            ("l1", manhattan_matrix(n, 3, 91 + n as u64).unwrap()),
        ] {
            for tau in [11.0, 16.0] {
                for s in [2.5, 4.0, 20.0] {
                    let space = Space::matrix(m.clone());
                    let params = NetTreeParams::new(tau).unwrap();
                    let net = match Network::doubling(space, s, params) {
                        Ok(net) => net,
                        Err(e) => {
                            pass = false;
                            notes.push(format!("{kind} n={n} tau={tau}: {e}"));
                            continue;
                        }
                    };
                    built += 1;
                    let t = net.tree.as_net_tree().unwrap();
                    pass &= t.verify_covering(&net.space).passed() && t.verify_packing(&net.space).passed();
                    let sub = hpws_core::tree::SubtreePoints::new(t);
                    for a in t.preorder() {
                        let diam = hpws_core::metric::set_diameter(&net.space, sub.points(a)).unwrap();
                        for k in 0..=t.depth(a) {
                            if diam > t.subtree_diameter_bound(a, k).unwrap() * (1.0 + 1e-12) {
                                pass = false;
                                notes.push(format!("diameter bound fails at node {} k={k}", a.0));
                            }
                        }
                    }
                    let b = Bounds::doubling(s, tau);
                    let rep = measure(&net);
                    let sm = &rep.summary;
                    pass &= sm.max_routing <= b.routing + 1e-9;
                    worst[0] = worst[0].max(sm.max_routing / b.routing);
                    if s <= tau {
                        let bound = doubling_spanning_le(s, tau);
                        let sh = sm.max_shortest.unwrap();
                        pass &= sh <= bound + 1e-9;
                        pass &= bound <= 1.0 + 4.2 / s + 1e-12;
                        worst[1] = worst[1].max(sh / bound);
                    }
                    for rec in &rep.records {
                        worst[2] = worst[2].max(rec.abs_error());
                        worst[3] = worst[3].max(rec.rel_error());
                        worst[4] = worst[4].max(rec.ascending_len / rec.distance / b.ascending);
                    }
                }
            }
        }
    }
    pass &= worst[2] <= DOUBLING_ABS_CAP && worst[3] <= DOUBLING_REL_CAP;
    notes.insert(
        0,
        format!(
            "{built} builds, routing/bound {:.4}, shortest/bound {:.4}, max D {:.4}, max d {:.4}, ascending/bound {:.4}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    );
    outcome(pass, notes.join("; "))
}

fn c9_structure(inst: &[Instance]) -> Outcome {
    let mut pass = true;
    let mut checked = 0usize;
    let mut unique_checked = 0usize;
    for i in inst {
        let net = &i.net;
        let t = net.tree.as_quadtree().unwrap();
        let hp = &net.labelling;
        for a in t.preorder() {
            checked += 1;
            if let Some(p) = t.parent(a) {
                pass &= t.cell_diagonal(a).unwrap() <= t.cell_diagonal(p).unwrap() / 2.0;
            }
            let iv = hp.interval(a);
            pass &= iv.len() == hp.size(a);
            pass &= hp.label(hp.rep_point(a)) == iv.lo;
        }
        let lg = (net.len() as f64).log2();
        for p in 0..net.len() {
            pass &= f64::from(hp.light_depth_of_point(p)) <= lg;
        }
        if i.n <= 128 {
            let u = check_step_uniqueness(&net.tables);
            unique_checked += u.checked;
            pass &= u.passed();
        }
    }
    outcome(
        pass,
        format!("{checked} nodes, {unique_checked} next-hop decisions checked"),
    )
}

fn c10_determinism() -> Outcome {
    let build = || {
        let net = Network::euclidean(uniform_points(1000, 2, 2024).unwrap(), 4.0).unwrap();
        (
            SpannerFile::from_network(&net, Some(2024)).to_json().unwrap(),
            net.tables.to_csv(),
        )
    };
    let (a, b) = (build(), build());
    outcome(
        a == b,
        format!("spanner {} bytes, tables {} bytes", a.0.len(), a.1.len()),
    )
}

fn main() {
    let t = Instant::now();
    let inst = instances();
    let build_secs = t.elapsed().as_secs_f64();
    let reports: Vec<RatioReport> = inst.iter().map(|i| measure(&i.net)).collect();

    let lb = lower_bound_instance(3.0, 0.0).unwrap().network().unwrap();
    let mut nets: Vec<&Network> = inst.iter().map(|i| &i.net).collect();
    nets.push(&lb);

    let results = [
        ("1 WSPD exactness", c1_exactness(&inst, build_secs)),
        ("2 spanning ratio", c2_spanning(&inst, &reports)),
        ("3 Euclidean routing ratio", c3_routing(&inst, &reports)),
        ("4 lower-bound instance", c4_lower_bound()),
        ("5 hop bound", c5_hops()),
        ("6 table size", c6_tables(&nets)),
        ("7 error constants", c7_errors(&inst, &reports)),
        ("8 doubling pipeline", c8_doubling()),
        ("9 structural invariants", c9_structure(&inst)),
        ("10 determinism", c10_determinism()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
