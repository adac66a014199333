use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use sonets::scheme::nz;
use sonets::{IntersectionAlgebra, Sampler, SamplerConfig, SchemeKind, StructuredOperator};

fn nz_covariance(alg: &IntersectionAlgebra) -> sonets::AlgebraElement {
    let mut c = vec![0.0; 7];
    c[nz::ID.0] = 1.0;
    c[nz::RECIP.0] = 0.5;
    c[nz::CONV.0] = 0.2;
    c[nz::DIV.0] = 0.2;
    c[nz::CHAIN.0] = 0.05;
    c[nz::ANTI.0] = 0.05;
    alg.balance_disjoint(&alg.element(c).unwrap(), 0.0).unwrap()
}

fn sqrt(c: &mut Criterion) {
    let mut group = c.benchmark_group("sqrt_in_algebra");
    for n in [100, 1000, 10_000] {
        let alg = IntersectionAlgebra::for_kind(SchemeKind::NykampZhao, n).unwrap();
        let cov = nz_covariance(&alg);
        group.bench_with_input(BenchmarkId::from_parameter(n), &cov, |b, cov| {
            b.iter(|| alg.sqrt_in_algebra(black_box(cov)).unwrap())
        });
    }
    group.finish();
}

fn matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("nz_matvec");
    for n in [100, 200, 400] {
        let op = StructuredOperator::NykampZhao { n };
        let e = n * (n - 1);
        let v: Vec<f64> = (0..e).map(|i| (i % 17) as f64 - 8.0).collect();
        let coeffs = [1.0, 0.3, 0.1, 0.05, 0.05, 0.2, -0.001];
        let mut out = vec![0.0; e];
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| op.apply_into(&coeffs, black_box(&v), &mut out).unwrap())
        });
    }
    group.finish();
}

fn sample(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_graph");
    for n in [100, 300] {
        let alg = IntersectionAlgebra::for_kind(SchemeKind::NykampZhao, n).unwrap();
        let config = SamplerConfig {
            cov: nz_covariance(&alg),
            edge_probability: 0.1,
            seed: 1,
            realizations: 1,
        };
        let sampler = Sampler::new(&alg, config).unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| sampler.sample(black_box(0)))
        });
    }
    group.finish();
}

criterion_group!(benches, sqrt, matvec, sample);
criterion_main!(benches);
