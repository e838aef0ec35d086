use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hpws_bench::{doubling_network, euclidean_network, label_pairs};
use hpws_core::route;

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    g.sample_size(10);
    for n in [256, 1024, 4096] {
        g.bench_with_input(BenchmarkId::new("euclidean", n), &n, |b, &n| {
            b.iter(|| euclidean_network(black_box(n), 4.0, 1).unwrap())
        });
    }
    for n in [128, 512] {
        g.bench_with_input(BenchmarkId::new("doubling", n), &n, |b, &n| {
            b.iter(|| doubling_network(black_box(n), 4.0, 11.0, 1).unwrap())
        });
    }
    g.finish();
}

fn routing(c: &mut Criterion) {
    let mut g = c.benchmark_group("route");
    for n in [256, 4096] {
        let net = euclidean_network(n, 4.0, 1).unwrap();
        let pairs = label_pairs(n, 1000);
        g.bench_with_input(BenchmarkId::new("euclidean", n), &pairs, |b, pairs| {
            b.iter(|| {
                pairs
                    .iter()
                    .map(|&(p, q)| route(&net.tables, p, q).unwrap().hops())
                    .sum::<usize>()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, build, routing);
criterion_main!(benches);
