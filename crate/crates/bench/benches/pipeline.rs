use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use flagcert::certificate::PAW_CERTIFICATE;
use flagcert::graph::{canonical, enumerate_graphs, LabeledGraph};
use flagcert::Certificate;

fn canonicalization(c: &mut Criterion) {
    let edges: Vec<(usize, usize)> = (0..8).flat_map(|u| (u + 1..8).map(move |v| (u, v))).filter(|(u, v)| (u * 7 + v * 3) % 5 < 2).collect();
    let g = LabeledGraph::from_edges(8, 0, &edges).unwrap();
    c.bench_function("canonical n=8", |b| b.iter(|| canonical(std::hint::black_box(&g))));
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for n in [5usize, 6, 7] {
        group.bench_function(format!("n={n}"), |b| b.iter(|| enumerate_graphs(n).unwrap().len()));
    }
    group.finish();
}

fn verify_paw(c: &mut Criterion) {
    let cert = Certificate::load(PAW_CERTIFICATE).unwrap();
    c.bench_function("verify paw", |b| b.iter_batched(|| cert.clone(), |cert| cert.verify().unwrap().accepted, BatchSize::SmallInput));
}

criterion_group!(benches, canonicalization, enumeration, verify_paw);
criterion_main!(benches);
