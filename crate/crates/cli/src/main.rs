//! `hpws`: build heavy path WSPD spanners, route on them, verify every
//! invariant, and run parameter sweeps.
//!
//! Exit status is 0 on success, 1 when an invariant is violated and 2 for
//! usage or I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hpws_core::harness::lower_bound::lower_bound_instance;
use hpws_core::harness::random::{euclidean_matrix, uniform_points};
use hpws_core::harness::{measure_ratios, verify_files, verify_network, MeasureOptions, VerifyOptions};
use hpws_core::io::{fmt12, parse_matrix, parse_points, round12, SpannerFile};
use hpws_core::{Error, Label, NetTreeParams, Network, RoutingTables, Space};

#[derive(Parser, Debug)]
#[command(name = "hpws", version, about = "Heavy path WSPD spanners and memoryless local routing")]
struct Cli {
    /// Worker threads for per-pair checks (also read from HPWS_THREADS).
    #[arg(long, global = true, env = "HPWS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the spanner and routing tables and write them to --out.
    Build {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Route between two vertices of a built spanner.
    Route {
        #[arg(long, default_value = "out/spanner.json")]
        spanner: PathBuf,
        /// Table file to route with; derived from the spanner file if omitted.
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Source: a label, or `pK` for the K-th input point.
        p: String,
        /// Destination, same forms as the source.
        q: String,
    },
    /// Run every invariant suite and print JSON findings.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Check a built spanner file instead of building from a source.
        #[arg(long)]
        spanner: Option<PathBuf>,
        /// Table file to check against --spanner.
        #[arg(long, requires = "spanner")]
        tables: Option<PathBuf>,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter and print a CSV row per value.
    Bench {
        #[arg(long, value_enum)]
        sweep: Sweep,
        /// Values to sweep, comma separated; defaults depend on the sweep.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(long = "s", default_value_t = 4.0)]
        s: f64,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write zeros in the timing columns so output is reproducible.
        #[arg(long)]
        no_timing: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Sweep {
    S,
    N,
    Tau,
}

/// Where points come from. With no input, `n` uniform points in the unit
/// cube are drawn from `seed`.
#[derive(Args, Debug, Clone)]
struct Source {
    /// Point file: one point per line, comma or space separated.
    #[arg(long)]
    input: Option<PathBuf>,
    /// `euclidean`, or `matrix:<path>` for a distance matrix file.
    #[arg(long, default_value = "euclidean")]
    metric: String,
    /// Use the eight-point lower-bound instance on [0, 1].
    #[arg(long, conflicts_with = "input")]
    lowerbound: bool,
    /// Perturbation of the lower-bound instance.
    #[arg(long, default_value_t = 0.0, requires = "lowerbound")]
    eps: f64,
    #[arg(long = "s", default_value_t = 4.0)]
    s: f64,
    #[arg(long, default_value_t = 11.0)]
    tau: f64,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// An invariant failed; exits with status 1.
#[derive(Debug)]
struct Violation(String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

impl Source {
    fn network(&self) -> anyhow::Result<Network> {
        if self.lowerbound {
            return Ok(lower_bound_instance(self.s, self.eps)?.network()?);
        }
        if let Some(path) = self.metric.strip_prefix("matrix:") {
            let m = parse_matrix(&read(Path::new(path))?)?;
            let params = NetTreeParams::new(self.tau)?.with_seed(self.seed);
            return Ok(Network::doubling(Space::matrix(m), self.s, params)?);
        }
        if self.metric != "euclidean" {
            bail!("unknown metric {:?}; expected euclidean or matrix:<path>", self.metric);
        }
        let points = match &self.input {
            Some(path) => parse_points(&read(path)?)?,
            None => uniform_points(self.n, self.dim, self.seed)?,
        };
        Ok(Network::euclidean(points, self.s)?)
    }
}

fn cmd_build(source: &Source, out: &Path) -> anyhow::Result<()> {
    let net = source.network()?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let file = SpannerFile::from_network(&net, Some(source.seed));
    write(&out.join("spanner.json"), &file.to_json()?)?;
    write(&out.join("tables.csv"), &net.tables.to_csv())?;
    write(&out.join("spanner.dot"), &net.spanner.to_dot(&net.labelling, &net.space))?;
    write(&out.join("labels.csv"), &net.labelling.to_csv())?;
    write(&out.join("wspd.csv"), &net.wspd.to_csv(&net.labelling))?;
    println!(
        "n={} pairs={} edges={} max_degree={} table_bits={} edges_per_point={} seed={}",
        net.len(),
        net.wspd.len(),
        net.spanner.edge_count(),
        net.spanner.max_degree(),
        net.tables.total_bits(),
        fmt12(net.spanner.edge_count() as f64 / net.len() as f64),
        source.seed
    );
    Ok(())
}

/// A label, or `pK` naming the K-th input point.
fn parse_vertex(arg: &str, file: &SpannerFile) -> anyhow::Result<Label> {
    if let Some(k) = arg.strip_prefix('p') {
        let k: usize = k.parse().with_context(|| format!("bad point name {arg:?}"))?;
        return k
            .checked_sub(1)
            .and_then(|i| file.labels.get(i))
            .copied()
            .ok_or_else(|| anyhow!("no point {arg}; the spanner has {} points", file.n));
    }
    let l: Label = arg.parse().with_context(|| format!("bad label {arg:?}"))?;
    if l == 0 || l as usize > file.n {
        bail!("unknown label {l}; labels run from 1 to {}", file.n);
    }
    Ok(l)
}

fn cmd_route(spanner: &Path, tables: Option<&Path>, p: &str, q: &str) -> anyhow::Result<()> {
    let file = SpannerFile::from_json(&read(spanner)?)?;
    let tables = match tables {
        Some(path) => RoutingTables::from_csv(&read(path)?, file.n)?,
        None => file.tables()?,
    };
    let (lp, lq) = (parse_vertex(p, &file)?, parse_vertex(q, &file)?);
    let by_label = file.points_by_label();
    let name = |l: Label| format!("p{}", by_label[l as usize - 1] + 1);
    let route = hpws_core::route(&tables, lp, lq).map_err(routing_failure)?;

    println!("from {lp} ({}) to {lq} ({})", name(lp), name(lq));
    let mut total = 0.0;
    for (i, (w, phase)) in route.labels.windows(2).zip(&route.phases).enumerate() {
        let len = file
            .edge_length(w[0], w[1])
            .ok_or_else(|| Violation(format!("hop {} -> {} is not a spanner edge", w[0], w[1])))?;
        total += len;
        println!(
            "hop {} {} {} ({}) -> {} ({}) length {}",
            i + 1,
            phase.as_str(),
            w[0],
            name(w[0]),
            w[1],
            name(w[1]),
            fmt12(len)
        );
    }
    let names: Vec<String> = route.labels.iter().map(|&l| name(l)).collect();
    let labels: Vec<String> = route.labels.iter().map(|l| l.to_string()).collect();
    println!("path {}", names.join(","));
    println!("labels {}", labels.join(","));
    let mut summary = format!("hops {} length {}", route.hops(), fmt12(total));
    if let Some(points) = &file.points {
        let (a, b) = (&points[by_label[lp as usize - 1]], &points[by_label[lq as usize - 1]]);
        let d = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        summary.push_str(&format!(" distance {}", fmt12(d)));
        if d > 0.0 {
            summary.push_str(&format!(" ratio {}", fmt12(total / d)));
        }
    }
    println!("{summary}");
    Ok(())
}

fn routing_failure(e: Error) -> anyhow::Error {
    match e {
        Error::UnknownLabel(_) => e.into(),
        other => Violation(other.to_string()).into(),
    }
}

/// Twelve significant digits for every float in a JSON report.
fn round_floats(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(x) if x.is_f64() => {
            if let Some(r) = x.as_f64().map(round12).and_then(serde_json::Number::from_f64) {
                *x = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn cmd_verify(
    source: &Source,
    spanner: Option<&Path>,
    tables: Option<&Path>,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let report = match spanner {
        Some(path) => {
            let file = SpannerFile::from_json(&read(path)?)?;
            let tables = match tables {
                Some(t) => RoutingTables::from_csv(&read(t)?, file.n)?,
                None => file.tables()?,
            };
            verify_files(&file, &tables)
        }
        None => {
            let net = source.network()?;
            let opts = VerifyOptions {
                measure: MeasureOptions {
                    seed: source.seed,
                    ..MeasureOptions::default()
                },
                ..VerifyOptions::default()
            };
            verify_network(&net, Some(source.seed), &opts)
        }
    };
    let mut value = serde_json::to_value(&report)?;
    round_floats(&mut value);
    let mut json = serde_json::to_string_pretty(&value)?;
    json.push('\n');
    print!("{json}");
    if let Some(path) = out {
        write(path, &json)?;
    }
    if !report.passed {
        let failed: Vec<&str> = report.suites.iter().filter(|s| !s.passed).map(|s| s.name).collect();
        return Err(Violation(format!("failed suites: {}", failed.join(", "))).into());
    }
    Ok(())
}

fn cmd_bench(
    sweep: Sweep,
    values: &[f64],
    s: f64,
    n: usize,
    dim: usize,
    seed: u64,
    timing: bool,
) -> anyhow::Result<String> {
    let values: Vec<f64> = if !values.is_empty() {
        values.to_vec()
    } else {
        match sweep {
            Sweep::S => vec![2.5, 3.0, 4.0, 6.0, 8.0, 16.0],
            Sweep::N => (6..=13).map(|k| f64::from(1u32 << k)).collect(),
            Sweep::Tau => vec![11.0, 16.0, 32.0],
        }
    };
    let mut out = String::from(
        "n,d_or_tau,s,pairs,edges,max_spanning,max_routing,max_hops,mean_hops,build_ms,route_ns_per_hop,seed\n",
    );
    for v in values {
        let (n, s, tau) = match sweep {
            Sweep::S => (n, v, None),
            Sweep::N => (v as usize, s, None),
            Sweep::Tau => (n, s, Some(v)),
        };
        let t = Instant::now();
        let net = match tau {
            None => Network::euclidean(uniform_points(n, dim, seed)?, s)?,
            Some(tau) => Network::doubling(
                Space::matrix(euclidean_matrix(n, dim, seed)?),
                s,
                NetTreeParams::new(tau)?,
            )?,
        };
        let build_ms = t.elapsed().as_secs_f64() * 1e3;
        let opts = MeasureOptions {
            seed,
            shortest_paths: false,
            ..MeasureOptions::default()
        };
        let report = measure_ratios(&net, &opts)?;
        let pairs: Vec<(Label, Label)> = report
            .records
            .iter()
            .map(|r| (net.label(r.p), net.label(r.q)))
            .collect();
        let t = Instant::now();
        let mut hops = 0usize;
        for &(p, q) in &pairs {
            hops += hpws_core::route(&net.tables, p, q)?.hops();
        }
        let route_ns = t.elapsed().as_secs_f64() * 1e9 / hops.max(1) as f64;
        let sm = &report.summary;
        let (build_ms, route_ns) = if timing { (build_ms, route_ns) } else { (0.0, 0.0) };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            n,
            tau.map_or(dim.to_string(), fmt12),
            fmt12(s),
            net.wspd.len(),
            net.spanner.edge_count(),
            fmt12(sm.max_spanning),
            fmt12(sm.max_routing),
            sm.max_routed_hops,
            fmt12(sm.mean_routed_hops),
            fmt12(build_ms),
            fmt12(route_ns),
            seed
        ));
    }
    Ok(out)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Build { source, out } => cmd_build(&source, &out),
        Command::Route {
            spanner,
            tables,
            p,
            q,
        } => cmd_route(&spanner, tables.as_deref(), &p, &q),
        Command::Verify {
            source,
            spanner,
            tables,
            out,
        } => cmd_verify(&source, spanner.as_deref(), tables.as_deref(), out.as_deref()),
        Command::Bench {
            sweep,
            values,
            s,
            n,
            dim,
            seed,
            no_timing,
            out,
        } => {
            let csv = cmd_bench(sweep, &values, s, n, dim, seed, !no_timing)?;
            match out {
                Some(path) => write(&path, &csv),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Violation>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
