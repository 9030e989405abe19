use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sparselp::semantics::least_model_traced;
use sparselp::{Backend, ProfileKind, SolverConfig};
use sparselp_bench::{definite, definite_system, normal_system, DEFINITE_SIZES};

fn least_model(c: &mut Criterion) {
    for kind in [ProfileKind::Table1, ProfileKind::Denser] {
        let mut group = c.benchmark_group(format!("least_model/{}", kind.as_str()));
        group.sample_size(10);
        for &(n, m) in &DEFINITE_SIZES {
            let system = definite_system(kind, n, m, 4);
            for backend in [Backend::Sparse, Backend::Dense] {
                let cfg = SolverConfig::with_backend(backend);
                let op = system.operator(&cfg).unwrap();
                group.bench_function(BenchmarkId::new(backend.as_str(), system.side()), |b| {
                    b.iter(|| system.solve(&op, cfg.eps).unwrap())
                });
            }
            let p = definite(kind, n, m, 4);
            group.bench_function(BenchmarkId::new("symbolic", system.side()), |b| {
                b.iter(|| least_model_traced(p.program()))
            });
        }
        group.finish();
    }
}

fn stable_models(c: &mut Criterion) {
    let mut group = c.benchmark_group("stable_models");
    group.sample_size(10);
    for k in [2, 6, 10] {
        let system = normal_system(40, 120, k, 5);
        let cfg = SolverConfig::default();
        let op = system.operator(&cfg).unwrap();
        group.bench_function(BenchmarkId::new("sparse", system.guess.columns()), |b| {
            b.iter(|| system.solve(&op, cfg.eps).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, least_model, stable_models);
criterion_main!(benches);
