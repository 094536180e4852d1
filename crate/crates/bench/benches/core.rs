use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use cutstream::dist::{self, HardDistParams};
use cutstream::fourier::{indicator_fourier, p_m_exact, IndicatorSet};
use cutstream::graph::max_cut_exact;
use cutstream::reduce::{bhh_build, bhh_decide};
use cutstream::stream::{run, EdgeCount, RandomWalkTester};
use cutstream::{rng, Label};

fn bench_max_cut_exact(c: &mut Criterion) {
    let mut r = rng::master(1);
    let g18 = dist::sample_gnp(18, 8.0, &mut r).unwrap();
    let g22 = dist::sample_gnp(22, 8.0, &mut r).unwrap();
    c.bench_function("max_cut_exact_n18", |b| {
        b.iter(|| max_cut_exact(black_box(&g18)).unwrap())
    });
    c.bench_function("max_cut_exact_n22", |b| {
        b.iter(|| max_cut_exact(black_box(&g22)).unwrap())
    });
}

fn bench_gnp(c: &mut Criterion) {
    c.bench_function("sample_gnp_n10000_alpha05", |b| {
        let mut r = rng::master(2);
        let mut buf = Vec::new();
        b.iter(|| {
            dist::sample_gnp_edges_into(10_000, 0.5, &mut r, &mut buf).unwrap();
            black_box(buf.len())
        })
    });
}

fn bench_hard_instance(c: &mut Criterion) {
    let params = HardDistParams::new(1000, 0.5, 0.3, 8.0).unwrap();
    c.bench_function("sample_hard_n1000", |b| {
        let mut r = rng::master(3);
        b.iter(|| black_box(dist::sample_hard(&params, Label::No, &mut r).unwrap().union.m()))
    });
}

fn bench_fourier(c: &mut Criterion) {
    let mut r = rng::master(4);
    let a16 = IndicatorSet::random_nonempty(16, &mut r).unwrap();
    c.bench_function("indicator_fourier_n16", |b| {
        b.iter(|| black_box(indicator_fourier(black_box(&a16)).coeff(1)))
    });
    let a12 = IndicatorSet::random_nonempty(12, &mut r).unwrap();
    let m = loop {
        let g = dist::sample_gnp(12, 2.0, &mut r).unwrap();
        if (6..=8).contains(&(g.m() as usize)) {
            break g.incidence();
        }
    };
    c.bench_function("p_m_exact_n12_r8", |b| {
        b.iter(|| black_box(p_m_exact(black_box(&a12), black_box(&m)).unwrap().prob(0)))
    });
}

fn bench_gadget(c: &mut Criterion) {
    let mut r = rng::master(5);
    let inst = dist::sample_bhh(240, 4, Label::No, &mut r).unwrap();
    c.bench_function("gadget_build_and_cut_n240", |b| {
        b.iter(|| {
            let gadget = bhh_build(black_box(&inst)).unwrap();
            black_box(bhh_decide(gadget.max_cut() as f64, inst.n, inst.t))
        })
    });
}

fn bench_streaming(c: &mut Criterion) {
    let params = HardDistParams::new(1000, 0.5, 0.3, 8.0).unwrap();
    let stream = dist::iid_stream(&params, Label::No, 100_000, 6).unwrap();
    c.bench_function("edge_count_100k_edges", |b| {
        let mut r = rng::master(7);
        b.iter(|| black_box(run(&EdgeCount, 1000, 64, &stream.edges, &mut r).unwrap()))
    });
    let tester = RandomWalkTester::with_defaults(1000);
    c.bench_function("walk_tester_100k_edges", |b| {
        let mut r = rng::master(8);
        b.iter(|| black_box(run(&tester, 1000, 1 << 24, &stream.edges, &mut r).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_max_cut_exact,
    bench_gnp,
    bench_hard_instance,
    bench_fourier,
    bench_gadget,
    bench_streaming
);
criterion_main!(benches);
