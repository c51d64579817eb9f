// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use sentinel_bench::{mixed_corpus, LOTTERY};
use sentinel_core::{analyze_source, Config};

fn single_contract(c: &mut Criterion) {
    let config = Config::default();
    c.bench_function("analyze/lottery", |b| {
        b.iter(|| analyze_source(black_box(LOTTERY), "lottery.sol", "lottery", &config).unwrap())
    });
}

fn corpus(c: &mut Criterion) {
    let config = Config::default();
    let contracts = mixed_corpus(7, 8);
    let mut group = c.benchmark_group("corpus");
    group.throughput(Throughput::Elements(contracts.len() as u64));
    group.bench_function("analyze", |b| {
        b.iter(|| {
            for (id, source) in &contracts {
                black_box(analyze_source(source, id, id, &config).unwrap());
            }
        })
    });
    group.bench_function("export", |b| {
        b.iter_batched(
            || {
                contracts
                    .iter()
                    .map(|(id, s)| analyze_source(s, id, id, &config).unwrap())
                    .collect::<Vec<_>>()
            },
            |analyses| {
                for a in analyses.iter().flatten() {
                    black_box(serde_json::to_string(&a.record(None).unwrap()).unwrap());
                }
            },
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, single_contract, corpus);
criterion_main!(benches);
