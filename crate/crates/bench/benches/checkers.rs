use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use tempobridge::checker2::{check, CheckConfig, StarEngine};
use tempobridge::testkit::{as_model, xcheck, GenParams};
use tempobridge::{map_structure, LogicId, MappingId, StateId};
use tempobridge_bench::sized_workload;

fn fixpoint(c: &mut Criterion) {
    let mut group = c.benchmark_group("fixpoint");
    for (logic, n) in [(LogicId::Ctl, 50), (LogicId::Ctl, 400), (LogicId::Uctl, 400)] {
        let (st, phi) = sized_workload(logic, n, 4);
        let model = as_model(&st).unwrap();
        group.bench_with_input(BenchmarkId::new(logic.to_string(), n), &phi, |b, phi| {
            b.iter(|| check(model, StateId(0), black_box(phi), logic, &CheckConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn star(c: &mut Criterion) {
    let mut group = c.benchmark_group("star");
    for (engine, n) in [(StarEngine::Product, 30), (StarEngine::Product, 120), (StarEngine::Enumerate, 5)] {
        let (st, phi) = sized_workload(LogicId::CtlStar, n, 3);
        let model = as_model(&st).unwrap();
        let cfg = CheckConfig { star_engine: engine, ..CheckConfig::default() };
        group.bench_with_input(BenchmarkId::new(format!("{engine:?}"), n), &phi, |b, phi| {
            b.iter(|| check(model, StateId(0), black_box(phi), LogicId::CtlStar, &cfg).unwrap())
        });
    }
    group.finish();
}

fn mappings(c: &mut Criterion) {
    let mut group = c.benchmark_group("map_structure");
    for m in [MappingId::Ks, MappingId::Lts, MappingId::Ks2Prime] {
        let (st, _) = sized_workload(m.source_logic(), 500, 1);
        group.bench_function(m.to_string(), |b| b.iter(|| map_structure(m, black_box(&st)).unwrap()));
    }
    group.finish();
}

fn differential(c: &mut Criterion) {
    let mut group = c.benchmark_group("xcheck");
    group.sample_size(10);
    for m in [MappingId::KsPrime, MappingId::Ks] {
        let params = GenParams { trials: 50, ..GenParams::default() };
        group.bench_function(m.to_string(), |b| b.iter(|| xcheck(m, black_box(&params))));
    }
    group.finish();
}

criterion_group!(benches, fixpoint, star, mappings, differential);
criterion_main!(benches);
